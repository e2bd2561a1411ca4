#include <gtest/gtest.h>

#include <random>

#include "secant/matrix.hpp"

using namespace secant;

namespace {

Mat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long h)
{
    std::uniform_int_distribution<long> d(-h, h);
    Mat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = Scalar(d(rng));
    return m;
}

Mat random_rank(std::mt19937_64& rng, std::size_t n, std::size_t r)
{
    return random_matrix(rng, n, r, 3) * random_matrix(rng, r, n, 3);
}

Vec<Scalar> random_vec(std::mt19937_64& rng, std::size_t n, long h)
{
    std::uniform_int_distribution<long> d(-h, h);
    Vec<Scalar> v(n);
    for (auto& x : v) x = Scalar(d(rng));
    return v;
}

Mat E(std::size_t n, std::size_t i, std::size_t j)
{
    Mat m(n, n);
    m(i - 1, j - 1) = Scalar(1);
    return m;
}

// Y - F Y^T F for Y = (sum of e_u) (sum of e_j)^T, 1-based indices, F anti-diagonal.
Mat skew_piece(std::size_t n, std::vector<std::size_t> us, std::vector<std::size_t> es)
{
    Mat y(n, n);
    for (auto u : us)
        for (auto e : es) y(u - 1, e - 1) += Scalar(1);
    Mat f(n, n);
    for (std::size_t i = 0; i < n; ++i) f(i, n - 1 - i) = Scalar(1);
    return y - f * y.transpose() * f;
}

// Oracle for the transposed form of the criterion: eta in im A^T and <y, xi> = 1
// for a solution of A^T xi = eta, together with y in im A.
bool self_dual_criterion(const Mat& a, const Vec<Scalar>& y, const Vec<Scalar>& eta)
{
    if (!solve_linear(a, y)) return false;
    auto xi = solve_linear(a.transpose(), eta);
    if (!xi) return false;
    return dot(y, *xi) == Scalar(1);
}

}  // namespace

TEST(Matrix, RankKernelImageTrivial)
{
    auto z = rank_kernel_image(Mat(3, 3));
    EXPECT_EQ(z.rank, 0u);
    EXPECT_EQ(z.kernel.size(), 3u);
    auto id = rank_kernel_image(Mat::identity(3));
    EXPECT_EQ(id.rank, 3u);
    EXPECT_TRUE(id.kernel.empty());
    EXPECT_EQ(id.image.size(), 3u);
}

TEST(Matrix, FirstSummandOfSixBlockHasRankTwo)
{
    // a = 1, b = 2: (1/(b-a)) * ab-pattern from the 3-term semisimple split.
    Scalar ab(2);
    Mat m(6, 6);
    m(0, 0) = ab;
    m(0, 1) = ab;
    m(1, 0) = -ab;
    m(1, 1) = -ab;
    m(4, 4) = ab;
    m(4, 5) = -ab;
    m(5, 4) = ab;
    m(5, 5) = -ab;
    EXPECT_EQ(rank(m), 2u);
}

TEST(Matrix, KernelAndImageAreCorrect)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        Mat a = random_rank(rng, 6, 1 + t % 5);
        auto r = rank_kernel_image(a);
        EXPECT_EQ(r.rank + r.kernel.size(), 6u);
        EXPECT_EQ(r.image.size(), r.rank);
        for (const auto& k : r.kernel) EXPECT_TRUE(is_zero_vec(a * k));
        for (const auto& v : r.image) EXPECT_TRUE(solve_linear(a, v).has_value());
    }
}

TEST(Matrix, SolveLinear)
{
    Vec<Scalar> b{Scalar(1), Scalar(2), Scalar(3)};
    EXPECT_EQ(*solve_linear(Mat::identity(3), b), b);
    Mat s(2, 2);
    s(0, 0) = Scalar(1);
    EXPECT_FALSE(solve_linear(s, Vec<Scalar>{Scalar(0), Scalar(1)}).has_value());
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        Mat a = random_matrix(rng, 5, 5, 9);
        if (rank(a) < 5) continue;
        Vec<Scalar> rhs = random_vec(rng, 5, 9);
        auto x = solve_linear(a, rhs);
        ASSERT_TRUE(x.has_value());
        EXPECT_EQ(a * *x, rhs);
    }
}

TEST(Matrix, CharAndMinPolyExamples)
{
    auto [c, m] = char_min_poly(Mat(2, 2));
    EXPECT_EQ(c, UniPoly<Scalar>::monomial(2));
    EXPECT_EQ(m, UniPoly<Scalar>::monomial(1));

    Mat j = E(3, 1, 2) + E(3, 2, 3);
    auto [cj, mj] = char_min_poly(j);
    EXPECT_EQ(cj, UniPoly<Scalar>::monomial(3));
    EXPECT_EQ(mj, UniPoly<Scalar>::monomial(3));
    EXPECT_FALSE(is_semisimple(j));

    Mat d(3, 3);
    d(0, 0) = Scalar(1);
    d(1, 1) = Scalar(2);
    d(2, 2) = Scalar(1);
    EXPECT_TRUE(is_semisimple(d));
    EXPECT_EQ(min_poly(d).degree(), 2);
}

TEST(Matrix, SevenBlockDifference)
{
    // Nilpotent [7] representative minus the C point from the O[7] construction.
    Mat left(7, 7);
    for (std::size_t i = 0; i < 3; ++i) left(i, i + 1) = Scalar(1);
    for (std::size_t i = 3; i < 6; ++i) left(i, i + 1) = Scalar(-1);
    auto q = [](long a, long b) { return Scalar::rational(a, b); };
    Mat right = Mat::from_rows({
        {q(0, 1), q(1, 2), q(0, 1), q(1, 1), q(0, 1), q(-1, 1), q(0, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 2), q(0, 1), q(1, 1)},
        {q(0, 1), q(1, 4), q(0, 1), q(1, 2), q(0, 1), q(-1, 2), q(0, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(-1, 2), q(0, 1), q(-1, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(-1, 4), q(0, 1), q(-1, 2)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)},
    });
    Mat diff = left - right;
    UniPoly<Scalar> expected{Scalar(0), Scalar::rational(1, 4), Scalar(0), Scalar(1)};
    EXPECT_EQ(min_poly(diff), expected);
    EXPECT_TRUE(is_semisimple(diff));
    // The roots 0, i/2, -i/2 really are eigenvalues.
    Scalar half_i = imag_unit() / Scalar(2);
    EXPECT_TRUE(expected.eval(half_i).is_zero());
    EXPECT_TRUE(expected.eval(-half_i).is_zero());
    EXPECT_EQ(rank(diff), 4u);
}

TEST(Matrix, CayleyHamiltonAndDivisibility)
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + t % 6;
        Mat a = (t % 3 == 0) ? random_rank(rng, n, (n + 1) / 2) : random_matrix(rng, n, n, 4);
        auto [c, m] = char_min_poly(a);
        ASSERT_EQ(c.degree(), static_cast<int>(n));
        ASSERT_TRUE(c.eval_matrix(a).is_zero());
        ASSERT_TRUE(m.divides(c));
    }
}

TEST(Matrix, NilpotentPartitions)
{
    EXPECT_EQ(nilpotent_partition(Mat(4, 4)), Partition({1, 1, 1, 1}));
    for (std::size_t n = 7; n <= 10; ++n) {
        Mat c = E(n, 1, 2) - E(n, n - 1, n);
        EXPECT_EQ(nilpotent_partition(c), make_partition({2, 2}, static_cast<int>(n)));
    }
    Mat rep = skew_piece(10, {1}, {2}) + skew_piece(10, {2}, {3, 4}) + skew_piece(10, {3, 4}, {5}) +
              skew_piece(10, {4}, {6});
    EXPECT_EQ(nilpotent_partition(rep), Partition({7, 3}));
    EXPECT_THROW(nilpotent_partition(Mat::identity(2)), Error);
}

TEST(Matrix, PartitionConjugatesBackToRanks)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 40; ++t) {
        // Random strictly upper triangular matrices are nilpotent.
        std::size_t n = 2 + t % 7;
        Mat a = random_matrix(rng, n, n, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) a(i, j) = Scalar(0);
        if (t % 2) a(0, n - 1) = Scalar(0);
        Partition p = nilpotent_partition(a);
        EXPECT_EQ(p.n(), static_cast<int>(n));
        Partition c = p.conjugate();
        std::size_t r = n;
        Mat pw = Mat::identity(n);
        for (int part : c.parts) {
            pw = pw * a;
            std::size_t nr = rank(pw);
            EXPECT_EQ(static_cast<int>(r - nr), part);
            r = nr;
        }
    }
}

TEST(Matrix, Dominance)
{
    int n = 12;
    EXPECT_TRUE(dominance_leq(make_partition({3, 2, 2}, n), make_partition({3, 3}, n)));
    EXPECT_TRUE(dominance_leq(make_partition({4, 1}, n), make_partition({4, 1}, n)));
    EXPECT_FALSE(dominance_leq(Partition({3, 3}), Partition({2, 2, 2})));
    EXPECT_THROW(dominance_leq(Partition({3}), Partition({2})), Error);
}

TEST(Matrix, DropsRankExamples)
{
    Mat a = E(3, 1, 1);
    EXPECT_TRUE(drops_rank(a, unit_vector<Scalar>(3, 0), unit_vector<Scalar>(3, 0)));
    EXPECT_FALSE(drops_rank(a, unit_vector<Scalar>(3, 1), unit_vector<Scalar>(3, 1)));
}

TEST(Matrix, DropsRankConstructedInstances)
{
    std::mt19937_64 rng(17);
    int done = 0;
    while (done < 500) {
        std::size_t n = 3 + done % 4;
        Mat a = random_rank(rng, n, 1 + done % n);
        Vec<Scalar> x = random_vec(rng, n, 5);
        Vec<Scalar> y = a * x;
        if (is_zero_vec(y)) continue;
        // eta = A^T xi scaled so that <x, eta> = 1; it vanishes on ker A.
        Vec<Scalar> eta = a.transpose() * random_vec(rng, n, 5);
        Scalar s = dot(x, eta);
        if (s.is_zero()) continue;
        eta = scale(Scalar(1) / s, eta);
        ASSERT_TRUE(drops_rank_direct(a, y, eta));
        ASSERT_TRUE(drops_rank(a, y, eta));
        ++done;
    }
}

TEST(Matrix, DropsRankPathsAgree)
{
    std::mt19937_64 rng(23);
    for (int t = 0; t < 1000; ++t) {
        std::size_t n = 2 + t % 5;
        Mat a = random_rank(rng, n, 1 + t % n);
        Vec<Scalar> y, eta;
        switch (t % 3) {
        case 0:  // fully random
            y = random_vec(rng, n, 2);
            eta = random_vec(rng, n, 2);
            break;
        case 1: {  // y in the image, eta random
            y = a * random_vec(rng, n, 2);
            eta = random_vec(rng, n, 2);
            break;
        }
        default: {  // near-criterion data with a random scale
            Vec<Scalar> x = random_vec(rng, n, 2);
            y = a * x;
            eta = a.transpose() * random_vec(rng, n, 2);
            Scalar s = dot(x, eta);
            if (!s.is_zero() && t % 2) eta = scale(Scalar(1) / s, eta);
        }
        }
        if (is_zero_vec(y) || is_zero_vec(eta)) continue;
        bool direct = drops_rank_direct(a, y, eta);
        ASSERT_EQ(direct, drops_rank_criterion(a, y, eta));
        ASSERT_EQ(direct, self_dual_criterion(a, y, eta));
    }
}
