#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lie.hpp"
#include "matrix.hpp"

namespace secant {

// Sizes follow the matrix size throughout: sp with n = 8 is sp_8.

struct DimReport {
    AlgebraId algebra;
    int k = 0;
    long dim_kC = 0;
    long expected_dim = 0;
    long defect = 0;
    long dim_g = 0;
};

namespace detail {

inline long binom2(long m) { return m * (m - 1) / 2; }

inline AlgebraId dims_algebra(Family family, std::size_t n)
{
    AlgebraId alg{family, n};
    alg.validate();
    if (family == Family::O && n < 7) fail(ErrorKind::Range, "the orthogonal formulas need n >= 7");
    return alg;
}

}  // namespace detail

/// Largest k accepted by dim_formula: n for sl and sp, floor(n/2) for o,
/// and 4 for o_7.
inline int max_k(Family family, std::size_t n)
{
    AlgebraId alg = detail::dims_algebra(family, n);
    if (alg.family != Family::O) return static_cast<int>(n);
    return n == 7 ? 4 : static_cast<int>(n / 2);
}

inline DimReport dim_formula(Family family, std::size_t n, int k)
{
    AlgebraId alg = detail::dims_algebra(family, n);
    if (k < 1 || k > max_k(family, n))
        fail(ErrorKind::Range, "k = " + std::to_string(k) + " outside 1.." + std::to_string(max_k(family, n)));
    long N = static_cast<long>(n), K = k;
    DimReport r;
    r.algebra = alg;
    r.k = k;
    r.dim_g = static_cast<long>(algebra_dim(alg));
    long dim_c = 0;
    switch (family) {
    case Family::SL:
        r.dim_kC = 2 * K * N - K * K - 1;
        dim_c = 2 * N - 2;
        break;
    case Family::SP:
        r.dim_kC = detail::binom2(N + 1) - detail::binom2(N + 1 - K);
        dim_c = N;
        break;
    case Family::O:
        dim_c = 2 * N - 6;
        if (n == 7 && k == 4)
            r.dim_kC = detail::binom2(7);
        else if (k == 1)
            r.dim_kC = dim_c;
        else if (k == 2)
            r.dim_kC = 4 * N - 13;
        else if (k == 3)
            r.dim_kC = 6 * N - 22;
        else
            r.dim_kC = detail::binom2(N) - detail::binom2(N - 2 * K);
        break;
    }
    r.expected_dim = std::min(K * dim_c, r.dim_g);
    r.defect = r.expected_dim - r.dim_kC;
    return r;
}

/// Smallest k with closure(kC) = g.
inline int fill_k(Family family, std::size_t n)
{
    AlgebraId alg = detail::dims_algebra(family, n);
    if (alg.family != Family::O) return static_cast<int>(n);
    return n == 7 ? 4 : static_cast<int>(n / 2);
}

struct ZakComparison {
    long n_x = 0;    // dimension of the projective orbit PC
    long delta = 0;  // first defect
    long bound = 0;  // number of points: floor(n_x / delta) + 1
    long fill = 0;
};

inline ZakComparison zak_bound(Family family, std::size_t n)
{
    ZakComparison z;
    z.n_x = dim_formula(family, n, 1).dim_kC - 1;
    if (max_k(family, n) < 2) fail(ErrorKind::ZeroDefect, "no second secant in range");
    z.delta = dim_formula(family, n, 2).defect;
    if (z.delta == 0) fail(ErrorKind::ZeroDefect, "first defect vanishes");
    z.bound = z.n_x / z.delta + 1;
    z.fill = fill_k(family, n);
    return z;
}

struct TerraciniResult {
    int dim = 0;  // maximum over trials
    std::vector<int> per_trial;
    bool consistent = true;  // all trials agree
};

/// Rank of the span of the tangent spaces [g, J_i] at k seeded random points
/// of C, over `trials` independent samples.
inline TerraciniResult terracini_sample(Family family, std::size_t n, int k, std::uint64_t seed, int trials)
{
    AlgebraId alg{family, n};
    alg.validate();
    if (k < 1) fail(ErrorKind::Range, "k must be positive");
    if (trials < 1) fail(ErrorKind::Range, "trials must be positive");
    auto basis = algebra_basis<mpq_class>(alg);
    std::mt19937_64 seeds(seed);
    TerraciniResult out;
    for (int t = 0; t < trials; ++t) {
        std::vector<Vec<mpq_class>> rows;
        for (int i = 0; i < k; ++i) {
            QMat j = to_rational(realize(random_c_point(alg, seeds(), 3)));
            std::vector<Vec<mpq_class>> tangent;
            for (const auto& b : basis) tangent.push_back(commutator(b, j).entries());
            // The cone direction K J is already tangent.
            if (!in_span(tangent, j.entries())) fail(ErrorKind::Verification, "J is not in [g, J]");
            rows.insert(rows.end(), tangent.begin(), tangent.end());
        }
        int d = static_cast<int>(rank(QMat::from_rows(rows)));
        out.per_trial.push_back(d);
        out.dim = std::max(out.dim, d);
    }
    out.consistent = std::all_of(out.per_trial.begin(), out.per_trial.end(), [&](int d) { return d == out.dim; });
    return out;
}

inline int terracini_dim(Family family, std::size_t n, int k, std::uint64_t seed, int trials)
{
    return terracini_sample(family, n, k, seed, trials).dim;
}

}  // namespace secant
