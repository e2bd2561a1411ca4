#include <gtest/gtest.h>

#include "secant/secantdim.hpp"

using namespace secant;

namespace {

long choose2(long m) { return m * (m - 1) / 2; }

long dim_g(Family f, long n)
{
    switch (f) {
    case Family::SL: return n * n - 1;
    case Family::SP: return choose2(n + 1);
    case Family::O: return choose2(n);
    }
    return 0;
}

}  // namespace

TEST(SecantDim, FormulaExamples)
{
    EXPECT_EQ(dim_formula(Family::SL, 3, 1).dim_kC, 4);
    DimReport o92 = dim_formula(Family::O, 9, 2);
    EXPECT_EQ(o92.dim_kC, 23);
    EXPECT_EQ(o92.defect, 1);
    DimReport o74 = dim_formula(Family::O, 7, 4);
    EXPECT_EQ(o74.dim_kC, 21);
    EXPECT_EQ(o74.defect, 0);
    EXPECT_EQ(dim_formula(Family::O, 9, 3).defect, 4);
    EXPECT_EQ(dim_formula(Family::O, 10, 3).defect, 4);
    // 3 dim C exceeds dim g in o_7 and o_8, so the defect is measured against dim g.
    EXPECT_EQ(dim_formula(Family::O, 7, 3).defect, 1);
    EXPECT_EQ(dim_formula(Family::O, 8, 3).defect, 2);
    EXPECT_EQ(dim_formula(Family::SP, 6, 2).dim_kC, 11);
    EXPECT_EQ(dim_formula(Family::SP, 4, 1).dim_kC, 4);
    for (long k : {1, 2, 3, 4}) EXPECT_EQ(dim_formula(Family::O, 9, static_cast<int>(k)).dim_kC,
                                          std::vector<long>({12, 23, 32, 36})[static_cast<std::size_t>(k - 1)]);
    EXPECT_THROW(dim_formula(Family::O, 9, 5), Error);
    EXPECT_THROW(dim_formula(Family::O, 8, 0), Error);
    EXPECT_THROW(dim_formula(Family::O, 6, 1), Error);
    EXPECT_THROW(dim_formula(Family::SP, 5, 1), Error);
}

TEST(SecantDim, DefectsMatchDefinition)
{
    for (Family f : {Family::SL, Family::SP, Family::O}) {
        for (long n = 2; n <= 12; ++n) {
            if (f == Family::SP && n % 2) continue;
            if (f == Family::O && n < 7) continue;
            long dc = dim_formula(f, static_cast<std::size_t>(n), 1).dim_kC;
            long prev = 0;
            int top = max_k(f, static_cast<std::size_t>(n));
            for (int k = 1; k <= top; ++k) {
                DimReport r = dim_formula(f, static_cast<std::size_t>(n), k);
                EXPECT_EQ(r.dim_g, dim_g(f, n));
                EXPECT_EQ(r.expected_dim, std::min(k * dc, dim_g(f, n)));
                EXPECT_EQ(r.defect, r.expected_dim - r.dim_kC);
                EXPECT_GE(r.defect, 0);
                EXPECT_LE(r.dim_kC, r.dim_g);
                EXPECT_GT(r.dim_kC, prev);
                prev = r.dim_kC;
                // The closed forms of the defect.
                long K = k;
                if (f == Family::SL) EXPECT_EQ(r.defect, std::min((K - 1) * (K - 1), (n - K) * (n - K)));
                if (f == Family::SP) EXPECT_EQ(r.defect, std::min(choose2(K), choose2(n + 1 - K)));
                if (f == Family::O && k >= 4 && n > 7) EXPECT_EQ(r.defect, std::min(K * (2 * K - 5), choose2(n - 2 * K)));
                if (f == Family::O && k == 2) EXPECT_EQ(r.defect, 1);
                if (f == Family::O && k == 3 && n >= 9) EXPECT_EQ(r.defect, 4);
            }
            EXPECT_EQ(dim_formula(f, static_cast<std::size_t>(n), fill_k(f, static_cast<std::size_t>(n))).dim_kC,
                      dim_g(f, n));
            if (fill_k(f, static_cast<std::size_t>(n)) > 1)
                EXPECT_LT(dim_formula(f, static_cast<std::size_t>(n), fill_k(f, static_cast<std::size_t>(n)) - 1).dim_kC,
                          dim_g(f, n));
        }
    }
}

TEST(SecantDim, Fill)
{
    EXPECT_EQ(fill_k(Family::O, 7), 4);
    EXPECT_EQ(fill_k(Family::O, 10), 5);
    EXPECT_EQ(fill_k(Family::O, 11), 5);
    EXPECT_EQ(fill_k(Family::SP, 8), 8);
    EXPECT_EQ(fill_k(Family::SL, 5), 5);
}

TEST(SecantDim, Zak)
{
    for (long n = 3; n <= 10; ++n) {
        ZakComparison z = zak_bound(Family::SL, static_cast<std::size_t>(n));
        EXPECT_EQ(z.n_x, 2 * n - 3);
        EXPECT_EQ(z.delta, 1);
        EXPECT_EQ(z.bound, 2 * n - 2);
        EXPECT_GT(z.bound, z.fill);
    }
    for (long n = 4; n <= 12; n += 2) {
        ZakComparison z = zak_bound(Family::SP, static_cast<std::size_t>(n));
        EXPECT_EQ(z.bound, n);
        EXPECT_EQ(z.bound, z.fill);
    }
    ZakComparison o9 = zak_bound(Family::O, 9);
    EXPECT_EQ(o9.n_x, 11);
    EXPECT_EQ(o9.delta, 1);
    EXPECT_EQ(o9.bound, 12);
    EXPECT_EQ(o9.fill, 4);
    for (std::size_t n = 8; n <= 12; ++n) EXPECT_GT(zak_bound(Family::O, n).bound, zak_bound(Family::O, n).fill);
    EXPECT_THROW(zak_bound(Family::SL, 2), Error);
}

TEST(SecantDim, TerraciniExamples)
{
    EXPECT_EQ(terracini_dim(Family::O, 9, 1, 1, 2), 12);
    EXPECT_EQ(terracini_dim(Family::O, 8, 2, 1, 2), 19);
    EXPECT_EQ(terracini_dim(Family::SP, 6, 2, 1, 2), 11);
    TerraciniResult r = terracini_sample(Family::O, 7, 4, 3, 3);
    EXPECT_EQ(r.dim, 21);
    EXPECT_EQ(r.per_trial.size(), 3u);
    EXPECT_EQ(terracini_sample(Family::SL, 4, 2, 5, 2).per_trial, terracini_sample(Family::SL, 4, 2, 5, 2).per_trial);
}

TEST(SecantDim, TerraciniMatchesFormulaSmall)
{
    for (std::size_t n = 2; n <= 4; ++n)
        for (int k = 1; k <= static_cast<int>(n); ++k)
            EXPECT_EQ(terracini_dim(Family::SL, n, k, 7, 3), dim_formula(Family::SL, n, k).dim_kC) << n << " " << k;
    for (std::size_t n : {4u, 6u})
        for (int k = 1; k <= static_cast<int>(n); ++k)
            EXPECT_EQ(terracini_dim(Family::SP, n, k, 7, 3), dim_formula(Family::SP, n, k).dim_kC) << n << " " << k;
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(terracini_dim(Family::O, 7, k, 7, 3), dim_formula(Family::O, 7, k).dim_kC) << k;
}
