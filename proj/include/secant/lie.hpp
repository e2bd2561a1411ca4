#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"

namespace secant {

enum class Family { SL, SP, O };

struct AlgebraId {
    Family family = Family::O;
    std::size_t n = 0;

    std::string name() const
    {
        switch (family) {
        case Family::SL: return "sl";
        case Family::SP: return "sp";
        case Family::O: return "o";
        }
        return "?";
    }

    void validate() const
    {
        if (family == Family::SL && n < 2) fail(ErrorKind::Range, "sl needs n >= 2");
        if (family == Family::SP && (n < 2 || n % 2)) fail(ErrorKind::Range, "sp needs even n");
        if (family == Family::O && n < 1) fail(ErrorKind::Range, "o needs n >= 1");
    }

    friend bool operator==(const AlgebraId& a, const AlgebraId& b) { return a.family == b.family && a.n == b.n; }
};

inline AlgebraId make_algebra(const std::string& name, std::size_t n)
{
    AlgebraId a;
    if (name == "sl")
        a.family = Family::SL;
    else if (name == "sp")
        a.family = Family::SP;
    else if (name == "o")
        a.family = Family::O;
    else
        fail(ErrorKind::Parse, "unknown algebra '" + name + "'");
    a.n = n;
    a.validate();
    return a;
}

// ---------------------------------------------------------------------------
// Forms.  O uses (x, y) = sum x_i y_{n+1-i}; SP uses the anti-diagonal matrix
// with +1 in the first half of the rows and -1 in the second half.

template <class F = Scalar>
Matrix<F> form(const AlgebraId& alg)
{
    if (alg.family == Family::SL) fail(ErrorKind::Precondition, "sl has no invariant form");
    std::size_t n = alg.n;
    Matrix<F> f(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        bool upper = alg.family == Family::O || i < n / 2;
        f(i, n - 1 - i) = F(upper ? 1 : -1);
    }
    return f;
}

struct FormSpec {
    Mat gram;
    bool symmetric = true;
};

inline FormSpec form_spec(const AlgebraId& alg) { return {form(alg), alg.family == Family::O}; }

template <class F>
F bilinear(const Matrix<F>& gram, const Vec<F>& x, const Vec<F>& y)
{
    return dot(x, gram * y);
}

template <class F = Scalar>
bool is_member(const AlgebraId& alg, const Matrix<F>& a)
{
    if (a.rows() != alg.n || a.cols() != alg.n) fail(ErrorKind::SizeMismatch, "matrix size does not match algebra");
    if (alg.family == Family::SL) return is_zero(a.trace());
    Matrix<F> f = form<F>(alg);
    return (f * a + a.transpose() * f).is_zero();
}

// Basis: SL -> E_ij (i != j) and E_ii - E_nn; SP/O -> F^{-1} S for S running
// over symmetric (SP) or skew (O) elementary matrices.
template <class F = Scalar>
std::vector<Matrix<F>> algebra_basis(const AlgebraId& alg)
{
    std::size_t n = alg.n;
    std::vector<Matrix<F>> basis;
    if (alg.family == Family::SL) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                Matrix<F> e(n, n);
                e(i, j) = F(1);
                basis.push_back(e);
            }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            Matrix<F> e(n, n);
            e(i, i) = F(1);
            e(n - 1, n - 1) = F(-1);
            basis.push_back(e);
        }
        return basis;
    }
    Matrix<F> f = form<F>(alg);
    Matrix<F> finv = alg.family == Family::O ? f : -f;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (alg.family == Family::O && i == j) continue;
            Matrix<F> s(n, n);
            s(i, j) = F(1);
            s(j, i) = F(alg.family == Family::O ? -1 : 1);
            if (i == j) s(i, i) = F(1);
            basis.push_back(finv * s);
        }
    return basis;
}

inline std::size_t algebra_dim(const AlgebraId& alg)
{
    std::size_t n = alg.n;
    switch (alg.family) {
    case Family::SL: return n * n - 1;
    case Family::SP: return n * (n + 1) / 2;
    case Family::O: return n * (n - 1) / 2;
    }
    return 0;
}

// Scalar c with m == c * x, if any (x non-zero).
template <class F>
std::optional<F> proportionality(const Matrix<F>& m, const Matrix<F>& x)
{
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (is_zero(x(i, j))) continue;
            F c = m(i, j) / x(i, j);
            if (m == c * x) return c;
            return std::nullopt;
        }
    fail(ErrorKind::ZeroInput, "proportionality against the zero matrix");
}

// [X, [X, g]] lies in K X.  Basis elements are sparse, so each double
// bracket X^2 B - 2 X B X + B X^2 is accumulated entry by entry.
inline bool is_extremal(const AlgebraId& alg, const Mat& input)
{
    if (input.is_zero()) fail(ErrorKind::ZeroInput, "is_extremal of zero");
    if (!is_member(alg, input)) fail(ErrorKind::NotMember, "is_extremal of a non-member");
    // The criterion is scale invariant; clearing rational content keeps the
    // coefficients small.
    Mat x = on_common_tower(input);
    make_primitive(x.entries());
    std::size_t n = alg.n;
    Mat x2 = x * x;
    for (const auto& b : algebra_basis(alg)) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (b(i, j).is_zero()) continue;
                const Scalar& v = b(i, j);
                for (std::size_t r = 0; r < n; ++r) {
                    if (!x2(r, i).is_zero()) m(r, j) += v * x2(r, i);
                    if (!x2(j, r).is_zero()) m(i, r) += v * x2(j, r);
                    if (x(r, i).is_zero()) continue;
                    Scalar t = Scalar(-2) * v * x(r, i);
                    for (std::size_t c = 0; c < n; ++c)
                        if (!x(j, c).is_zero()) m(r, c) += t * x(j, c);
                }
            }
        if (!m.is_zero() && !proportionality(m, x)) return false;
    }
    return true;
}

namespace detail {

// If x has rank exactly r (1 or 2), returns R C for the rows R and columns C
// through a non-singular r x r minor M; then x = C adj(M) R / det(M) and
// x^2 = 0 exactly when R C = 0.
inline std::optional<Mat> rank_factor_check(const Mat& x, std::size_t r)
{
    std::size_t n = x.rows(), m = x.cols();
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < n && rows.empty(); ++i)
        for (std::size_t j = 0; j < m && rows.empty(); ++j)
            if (!x(i, j).is_zero()) rows = {i}, cols = {j};
    if (rows.empty()) return std::nullopt;
    if (r == 2) {
        std::size_t i = rows[0], j = cols[0];
        for (std::size_t k = 0; k < n && rows.size() == 1; ++k)
            for (std::size_t l = 0; l < m && rows.size() == 1; ++l)
                if (!(x(i, j) * x(k, l) - x(i, l) * x(k, j)).is_zero()) rows.push_back(k), cols.push_back(l);
        if (rows.size() == 1) return std::nullopt;
    }
    Mat c(n, r), rr(r, m), adj(r, r);
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t i = 0; i < n; ++i) c(i, a) = x(i, cols[a]);
        for (std::size_t j = 0; j < m; ++j) rr(a, j) = x(rows[a], j);
    }
    Scalar det;
    if (r == 1) {
        det = x(rows[0], cols[0]);
        adj(0, 0) = Scalar(1);
    } else {
        const Scalar &a = x(rows[0], cols[0]), &b = x(rows[0], cols[1]);
        const Scalar &d = x(rows[1], cols[0]), &e = x(rows[1], cols[1]);
        det = a * e - b * d;
        adj(0, 0) = e, adj(0, 1) = -b, adj(1, 0) = -d, adj(1, 1) = a;
    }
    if (!((c * adj) * rr == det * x)) return std::nullopt;
    return rr * c;
}

}  // namespace detail

// Rank characterization of the minimal orbit: rank 1 and square zero in sl_n,
// rank 1 in sp_n, rank 2 and square zero in o_n (n >= 4).  A cross-check for
// is_extremal that stays cheap on large tower coefficients.
inline bool is_extremal_by_rank(const AlgebraId& alg, const Mat& x)
{
    if (x.is_zero()) fail(ErrorKind::ZeroInput, "is_extremal_by_rank of zero");
    if (!is_member(alg, x)) fail(ErrorKind::NotMember, "is_extremal_by_rank of a non-member");
    if (alg.family == Family::O && alg.n < 4) return is_extremal(alg, x);
    Mat y = on_common_tower(x);
    make_primitive(y.entries());
    auto rc = detail::rank_factor_check(y, alg.family == Family::O ? 2 : 1);
    if (!rc) return false;
    return alg.family == Family::SP || rc->is_zero();
}

// Rough cost of exact arithmetic on the entries of m: tower dimension squared
// times the largest coordinate height in bits.
inline std::size_t arithmetic_weight(const Mat& m)
{
    std::size_t dim = 1, bits = 0;
    for (const auto& x : m.entries()) {
        dim = std::max(dim, x.coords().size());
        bits = std::max(bits, x.height_bits());
    }
    return dim * dim * bits;
}

// ---------------------------------------------------------------------------
// Minimal-orbit witnesses.
//   SL: y1 = y, y2 = eta with <y, eta> = 0, realizing y eta^T.
//   SP: y1 = y and c != 0, realizing c y (F y)^T.
//   O:  y1, y2 spanning an isotropic plane, realizing y1 (F y2)^T - y2 (F y1)^T.

struct CWitness {
    AlgebraId alg;
    Vec<Scalar> y1;
    Vec<Scalar> y2;
    Scalar c;
};

inline Mat realize(const CWitness& w)
{
    switch (w.alg.family) {
    case Family::SL: return outer(w.y1, w.y2);
    case Family::SP: {
        Mat f = form(w.alg);
        return w.c * outer(w.y1, f * w.y1);
    }
    case Family::O: {
        Mat f = form(w.alg);
        return outer(w.y1, f * w.y2) - outer(w.y2, f * w.y1);
    }
    }
    return Mat();
}

// First violated witness invariant, if any.
inline std::optional<std::string> witness_problem(const CWitness& w)
{
    std::size_t n = w.alg.n;
    if (w.y1.size() != n) return std::string("size mismatch");
    switch (w.alg.family) {
    case Family::SL:
        if (w.y2.size() != n) return std::string("size mismatch");
        if (is_zero_vec(w.y1) || is_zero_vec(w.y2)) return std::string("zero vector");
        if (!is_zero(dot(w.y1, w.y2))) return std::string("pairing nonzero");
        return std::nullopt;
    case Family::SP:
        if (is_zero_vec(w.y1)) return std::string("zero vector");
        if (w.c.is_zero()) return std::string("zero coefficient");
        return std::nullopt;
    case Family::O: {
        if (w.y2.size() != n) return std::string("size mismatch");
        if (is_zero_vec(w.y1) || is_zero_vec(w.y2)) return std::string("zero vector");
        Mat f = form(w.alg);
        if (!is_zero(bilinear(f, w.y1, w.y1)) || !is_zero(bilinear(f, w.y2, w.y2)) ||
            !is_zero(bilinear(f, w.y1, w.y2)))
            return std::string("isotropy violated");
        if (rank_of_vectors<Scalar>({w.y1, w.y2}, n) != 2) return std::string("dependent vectors");
        return std::nullopt;
    }
    }
    return std::nullopt;
}

inline void check_witness(const CWitness& w)
{
    if (auto p = witness_problem(w)) {
        ErrorKind k = *p == "isotropy violated" ? ErrorKind::Isotropy
                      : *p == "pairing nonzero" ? ErrorKind::Pairing
                      : *p == "zero vector"     ? ErrorKind::ZeroVector
                                                : ErrorKind::Verification;
        fail(k, *p);
    }
}

inline bool verify_witness(const CWitness& w, const Mat& j)
{
    return !witness_problem(w) && realize(w) == j;
}

inline CWitness witness_sl(const AlgebraId& alg, Vec<Scalar> y, Vec<Scalar> eta)
{
    return CWitness{alg, std::move(y), std::move(eta), Scalar(0)};
}

inline CWitness witness_sp(const AlgebraId& alg, Vec<Scalar> y, Scalar c)
{
    return CWitness{alg, std::move(y), {}, std::move(c)};
}

inline CWitness witness_o(const AlgebraId& alg, Vec<Scalar> y1, Vec<Scalar> y2)
{
    return CWitness{alg, std::move(y1), std::move(y2), Scalar(0)};
}

// Witness data for a matrix already known to lie in C; verified.
inline CWitness witness_from_matrix(const AlgebraId& alg, const Mat& j)
{
    if (j.is_zero()) fail(ErrorKind::ZeroInput, "zero matrix is not in C");
    std::size_t n = alg.n;
    std::size_t pi = 0, pj = 0;
    for (std::size_t t = 0; t < n * n; ++t)
        if (!is_zero(j(t / n, t % n))) {
            pi = t / n;
            pj = t % n;
            break;
        }
    CWitness w;
    switch (alg.family) {
    case Family::SL: {
        Vec<Scalar> y = j.col(pj);
        Vec<Scalar> eta = scale(Scalar(1) / j(pi, pj), j.row(pi));
        w = witness_sl(alg, y, eta);
        break;
    }
    case Family::SP: {
        Vec<Scalar> y = j.col(pj);
        Vec<Scalar> fy = form(alg) * y;
        w = witness_sp(alg, y, j(pi, pj) / (y[pi] * fy[pj]));
        break;
    }
    case Family::O: {
        auto img = image_basis(j);
        if (img.size() != 2) fail(ErrorKind::WrongRank, "C points of o_n have rank 2");
        auto x1 = solve_linear(j, img[0]);
        Mat f = form(alg);
        Scalar alpha = Scalar(1) / bilinear(f, img[1], *x1);
        w = witness_o(alg, scale(alpha, img[0]), img[1]);
        break;
    }
    }
    if (!verify_witness(w, j)) fail(ErrorKind::Verification, "matrix is not a point of C");
    return w;
}

namespace detail {

inline mpz_class lcm_of_denominators(const Vec<Scalar>& v)
{
    mpz_class l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.to_rational().get_den_mpz_t());
    return l;
}

inline Vec<Scalar> clear_denominators(const Vec<Scalar>& v)
{
    return scale(Scalar(mpq_class(lcm_of_denominators(v))), v);
}

}  // namespace detail

// Seeded random point of C with integer data.  `height` bounds the random
// integers drawn; for O the plane is moved off the coordinate subspace
// span(e_1..e_m) by exp of a random strictly lower triangular element, so the
// stored vectors can be larger.
inline CWitness random_c_point(const AlgebraId& alg, std::uint64_t seed, long height)
{
    if (height < 1) fail(ErrorKind::Range, "height must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> d(-height, height);
    std::size_t n = alg.n;
    auto rand_vec = [&](std::size_t len) {
        Vec<Scalar> v(n, Scalar(0));
        do {
            for (std::size_t i = 0; i < len; ++i) v[i] = Scalar(d(rng));
        } while (is_zero_vec(v));
        return v;
    };
    switch (alg.family) {
    case Family::SL: {
        for (;;) {
            Vec<Scalar> y = rand_vec(n), r = rand_vec(n);
            std::size_t k = 0;
            while (y[k].is_zero()) ++k;
            // eta = y_k r - <y, r> e_k is orthogonal to y.
            Vec<Scalar> eta = scale(y[k], r);
            eta[k] -= dot(y, r);
            if (!is_zero_vec(eta)) return witness_sl(alg, y, eta);
        }
    }
    case Family::SP: {
        Vec<Scalar> y = rand_vec(n);
        long c = 0;
        while (c == 0) c = d(rng);
        return witness_sp(alg, y, Scalar(c));
    }
    case Family::O: {
        std::size_t m = n / 2;
        if (m < 2) fail(ErrorKind::Range, "o_n with n < 4 has no isotropic planes");
        Mat f = form(alg);
        for (;;) {
            Mat low(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < i; ++j) low(i, j) = Scalar(d(rng));
            Mat nil = low - f * low.transpose() * f;
            Mat g = Mat::identity(n), term = Mat::identity(n);
            for (std::size_t k = 1; k < n; ++k) {
                term = Scalar::rational(1, static_cast<long>(k)) * (term * nil);
                if (term.is_zero()) break;
                g += term;
            }
            Vec<Scalar> y1 = detail::clear_denominators(g * rand_vec(m));
            Vec<Scalar> y2 = detail::clear_denominators(g * rand_vec(m));
            CWitness w = witness_o(alg, y1, y2);
            if (!witness_problem(w)) return w;
        }
    }
    }
    fail(ErrorKind::Range, "unknown algebra");
}

// Rank of (.,.) restricted to the image of a rank-2 element of o_n.
inline int rank2_type(const AlgebraId& alg, const Mat& a)
{
    auto img = image_basis(a);
    if (img.size() != 2) fail(ErrorKind::WrongRank, "rank2_type needs rank 2");
    Mat f = form(alg);
    Mat g(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = bilinear(f, img[i], img[j]);
    return static_cast<int>(rank(g));
}

// ---------------------------------------------------------------------------
// Witt frames

struct WittFrame {
    std::vector<std::pair<Vec<Scalar>, Vec<Scalar>>> pairs;  // (u, v): isotropic, (u, v) = 1
    std::optional<Vec<Scalar>> unit;                         // norm 1
};

namespace detail {

inline Mat gram_of(const Mat& f, const std::vector<Vec<Scalar>>& vs)
{
    Mat g(vs.size(), vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i; j < vs.size(); ++j) {
            g(i, j) = bilinear(f, vs[i], vs[j]);
            g(j, i) = g(i, j);
        }
    return g;
}

// Isotropic vectors of span(vs) lying in a coordinate subspace span(e_i : i in idx).
inline std::vector<Vec<Scalar>> intersect_coordinate(const std::vector<Vec<Scalar>>& vs,
                                                     const std::vector<std::size_t>& outside)
{
    Mat m(outside.size(), vs.size());
    for (std::size_t r = 0; r < outside.size(); ++r)
        for (std::size_t c = 0; c < vs.size(); ++c) m(r, c) = vs[c][outside[r]];
    std::vector<Vec<Scalar>> out;
    for (const auto& k : kernel_basis(m)) {
        Vec<Scalar> v(vs[0].size(), Scalar(0));
        for (std::size_t c = 0; c < vs.size(); ++c)
            if (!k[c].is_zero()) v = add(v, scale(k[c], vs[c]));
        out.push_back(v);
    }
    return out;
}

// A non-zero isotropic vector of span(vs) (non-degenerate restriction, at
// least two vectors).  Tries, in order: the given vectors, intersections with
// the two standard maximal isotropic coordinate subspaces (O only), lines
// through pairs whose discriminant is already a square, and finally a line
// through the first two vectors after adjoining a square root.
inline std::size_t bit_size(const Scalar& x)
{
    std::size_t total = 0;
    for (const auto& c : x.coords())
        total += mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2);
    return total;
}

// Gram-Schmidt with primitive rescaling.  Returns a single isotropic vector
// instead if one turns up on the way.
inline std::vector<Vec<Scalar>> orthogonal_basis(const Mat& f, const std::vector<Vec<Scalar>>& vs)
{
    std::vector<Vec<Scalar>> out;
    std::vector<Scalar> norms;
    for (const auto& v : vs) {
        Vec<Scalar> w = v;
        for (std::size_t k = 0; k < out.size(); ++k) {
            Scalar c = bilinear(f, w, out[k]);
            if (!c.is_zero()) w = sub(w, scale(c / norms[k], out[k]));
        }
        if (is_zero_vec(w)) continue;
        make_primitive(w);
        Scalar nw = bilinear(f, w, w);
        if (nw.is_zero()) return {w};
        out.push_back(std::move(w));
        norms.push_back(std::move(nw));
    }
    return out;
}

inline Vec<Scalar> find_isotropic(const Mat& f, const std::vector<Vec<Scalar>>& vs, bool coordinate_search)
{
    for (const auto& v : vs)
        if (bilinear(f, v, v).is_zero()) return v;
    std::size_t n = vs[0].size();
    if (coordinate_search && f(0, n - 1) == f(n - 1, 0)) {
        std::size_t m = n / 2;
        std::vector<std::size_t> low, high;
        for (std::size_t i = m; i < n; ++i) low.push_back(i);
        for (std::size_t i = 0; i < n - m; ++i) high.push_back(i);
        for (const auto& outside : {low, high})
            for (const auto& v : intersect_coordinate(vs, outside))
                if (!is_zero_vec(v) && bilinear(f, v, v).is_zero()) return v;
    }
    auto line = [&](const Vec<Scalar>& p, const Vec<Scalar>& q, bool extend) -> std::optional<Vec<Scalar>> {
        // (p + t q, p + t q) = a + 2 b t + c t^2
        Scalar a = bilinear(f, p, p), b = bilinear(f, p, q), c = bilinear(f, q, q);
        if (c.is_zero()) {
            if (b.is_zero()) return std::nullopt;
            return add(p, scale(-a / (Scalar(2) * b), q));
        }
        Scalar disc = b * b - a * c;
        std::optional<Scalar> s = try_sqrt(disc);
        if (!s && extend) s = sqrt(disc);
        if (!s) return std::nullopt;
        return add(p, scale((-b + *s) / c, q));
    };
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (auto v = line(vs[i], vs[j], false)) return *v;
    // On an orthogonal basis each pair has discriminant -d_i d_j; adjoin the
    // smallest one to keep coefficient growth down.
    auto diag = orthogonal_basis(f, vs);
    if (diag.size() == 1 && bilinear(f, diag[0], diag[0]).is_zero()) return diag[0];
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::size_t best_size = 0;
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            if (auto v = line(diag[i], diag[j], false)) return *v;
            std::size_t sz = bit_size(bilinear(f, diag[i], diag[i]) * bilinear(f, diag[j], diag[j]));
            if (!best || sz < best_size) best = {i, j}, best_size = sz;
        }
    if (best)
        if (auto v = line(diag[best->first], diag[best->second], true)) return *v;
    fail(ErrorKind::Degenerate, "no isotropic vector in the span");
}

// Isotropic vectors v_i + t v_j in span(vs) for pairs of an orthogonal basis.
// Pairs that need no new root come first, the rest by radicand size; at most
// `limit` roots are adjoined.
inline std::vector<Vec<Scalar>> isotropic_candidates(const Mat& f, const std::vector<Vec<Scalar>>& vs, std::size_t limit)
{
    std::vector<Vec<Scalar>> out;
    if (vs.empty()) return out;
    auto diag = orthogonal_basis(f, vs);
    if (diag.size() == 1 && bilinear(f, diag[0], diag[0]).is_zero()) return diag;
    struct Pair {
        std::size_t i, j;
        Scalar disc;
        std::optional<Scalar> root;
        std::size_t size;
    };
    std::vector<Scalar> norms;
    for (const auto& d : diag) norms.push_back(bilinear(f, d, d));
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            Scalar disc = -(norms[i] * norms[j]);
            pairs.push_back({i, j, disc, try_sqrt(disc), bit_size(disc)});
        }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.root.has_value() != b.root.has_value()) return a.root.has_value();
        return a.size < b.size;
    });
    std::size_t adjoined = 0;
    for (auto& p : pairs) {
        if (!p.root) {
            if (adjoined == limit) break;
            ++adjoined;
            p.root = sqrt(p.disc);
        }
        // (v_i + t v_j)^2 = d_i + t^2 d_j vanishes for t = root / d_j.
        for (const Scalar& sign : {Scalar(1), Scalar(-1)}) {
            Vec<Scalar> v = add(diag[p.i], scale(sign * *p.root / norms[p.j], diag[p.j]));
            make_primitive(v);
            out.push_back(std::move(v));
        }
    }
    return out;
}

// Hyperbolic partner of an isotropic u inside span(vs).
inline Vec<Scalar> hyperbolic_partner(const Mat& f, const Vec<Scalar>& u, const std::vector<Vec<Scalar>>& vs)
{
    for (const auto& x : vs) {
        Scalar p = bilinear(f, u, x);
        if (p.is_zero()) continue;
        Vec<Scalar> v = scale(Scalar(1) / p, x);
        return sub(v, scale(bilinear(f, v, v) / Scalar(2), u));
    }
    fail(ErrorKind::Degenerate, "isotropic vector is in the radical");
}

inline std::vector<Vec<Scalar>> independent_subset(const std::vector<Vec<Scalar>>& vs)
{
    if (vs.empty()) return {};
    EchelonBasis<Scalar> e(vs[0].size());
    std::vector<Vec<Scalar>> out;
    for (const auto& v : vs)
        if (e.add(v)) out.push_back(v);
    return out;
}

}  // namespace detail

// Hyperbolic pairs plus at most one unit vector spanning W.  `gram` is the
// ambient symmetric form.
inline WittFrame witt_frame(const std::vector<Vec<Scalar>>& w_basis, const Mat& gram, bool coordinate_search = true)
{
    std::vector<Vec<Scalar>> vs = detail::independent_subset(w_basis);
    if (!vs.empty() && rank(detail::gram_of(gram, vs)) != vs.size())
        fail(ErrorKind::Degenerate, "form is degenerate on the subspace");
    if (auto diag = detail::orthogonal_basis(gram, vs); diag.size() == vs.size()) vs = std::move(diag);
    WittFrame frame;
    while (vs.size() >= 2) {
        Vec<Scalar> u = detail::find_isotropic(gram, vs, coordinate_search);
        Vec<Scalar> v = detail::hyperbolic_partner(gram, u, vs);
        std::vector<Vec<Scalar>> rest;
        for (const auto& s : vs) {
            Vec<Scalar> p = sub(s, add(scale(bilinear(gram, s, v), u), scale(bilinear(gram, s, u), v)));
            if (!is_zero_vec(p)) rest.push_back(p);
        }
        frame.pairs.emplace_back(u, v);
        vs = detail::independent_subset(rest);
    }
    if (vs.size() == 1) {
        Scalar a = bilinear(gram, vs[0], vs[0]);
        frame.unit = scale(Scalar(1) / sqrt(a), vs[0]);
    }
    return frame;
}

inline WittFrame witt_frame(const std::vector<Vec<Scalar>>& w_basis, const AlgebraId& alg = AlgebraId{Family::O, 0})
{
    AlgebraId a = alg;
    if (a.n == 0 && !w_basis.empty()) a.n = w_basis[0].size();
    return witt_frame(w_basis, form(a));
}

// v in span(S) with (v, v) = c, as u + (c/2) w for a hyperbolic pair (u, w).
inline Vec<Scalar> vector_of_norm(const std::vector<Vec<Scalar>>& s_basis, const Scalar& c, const Mat& gram)
{
    std::vector<Vec<Scalar>> vs = detail::independent_subset(s_basis);
    if (vs.size() < 2 || rank(detail::gram_of(gram, vs)) != vs.size())
        fail(ErrorKind::Degenerate, "vector_of_norm needs a non-degenerate span of dimension >= 2");
    Vec<Scalar> u = detail::find_isotropic(gram, vs, true);
    Vec<Scalar> w = detail::hyperbolic_partner(gram, u, vs);
    return add(u, scale(c / Scalar(2), w));
}

// {x : (x, v) = 0 for all v}
inline std::vector<Vec<Scalar>> orthogonal_complement(const std::vector<Vec<Scalar>>& vs, const Mat& gram)
{
    std::size_t n = gram.rows();
    if (vs.empty()) {
        std::vector<Vec<Scalar>> all;
        for (std::size_t i = 0; i < n; ++i) all.push_back(unit_vector<Scalar>(n, i));
        return all;
    }
    Mat m(vs.size(), n);
    for (std::size_t r = 0; r < vs.size(); ++r) {
        Vec<Scalar> fv = gram * vs[r];
        for (std::size_t c = 0; c < n; ++c) m(r, c) = fv[c];
    }
    return kernel_basis(m);
}

// Rational vectors x with (x, v) = 0 for all v.  Each tower coordinate of the
// conditions gives one rational equation.
inline std::vector<Vec<Scalar>> rational_orthogonal_complement(const std::vector<Vec<Scalar>>& vs, const Mat& gram)
{
    std::size_t n = gram.rows();
    Mat rows(vs.size(), n);
    for (std::size_t r = 0; r < vs.size(); ++r) {
        Vec<Scalar> fv = gram * vs[r];
        for (std::size_t c = 0; c < n; ++c) rows(r, c) = fv[c];
    }
    rows = on_common_tower(rows);
    Tower t = Scalar().tower();
    for (std::size_t r = 0; r < rows.rows(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (!rows(r, c).is_rational()) t = rows(r, c).tower();
    std::size_t dim = Scalar(0).lifted(t).coords().size();
    QMat sys(vs.size() * dim, n);
    for (std::size_t r = 0; r < rows.rows(); ++r)
        for (std::size_t c = 0; c < n; ++c) {
            Coords x = rows(r, c).lifted(t).coords();
            for (std::size_t k = 0; k < dim; ++k) sys(r * dim + k, c) = x[k];
        }
    std::vector<Vec<Scalar>> out;
    for (const auto& k : kernel_basis(sys)) {
        Vec<Scalar> v(n);
        for (std::size_t c = 0; c < n; ++c) v[c] = Scalar(k[c]);
        out.push_back(std::move(v));
    }
    return out;
}

// A subset of vs spanning a complement of the radical of the restricted form.
inline std::vector<Vec<Scalar>> drop_radical(const std::vector<Vec<Scalar>>& vs, const Mat& gram)
{
    if (vs.empty()) return vs;
    EchelonBasis<Scalar> ech(vs.size());
    for (const auto& k : kernel_basis(detail::gram_of(gram, vs))) ech.add(k);
    std::vector<Vec<Scalar>> out;
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (ech.add(unit_vector<Scalar>(vs.size(), i))) out.push_back(vs[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Nilpotent orbits of o_n

inline void validate_orbit(const Partition& p, std::size_t n)
{
    if (p.n() != static_cast<int>(n)) fail(ErrorKind::InvalidPartition, "partition does not sum to n");
    for (std::size_t i = 0; i < p.parts.size();) {
        std::size_t j = i;
        while (j < p.parts.size() && p.parts[j] == p.parts[i]) ++j;
        if (p.parts[i] % 2 == 0 && (j - i) % 2)
            fail(ErrorKind::InvalidPartition, "even part " + std::to_string(p.parts[i]) + " has odd multiplicity");
        i = j;
    }
}

// l(d): number of odd parts greater than one.
inline int odd_parts_above_one(const Partition& p)
{
    int l = 0;
    for (int x : p.parts)
        if (x % 2 && x > 1) ++l;
    return l;
}

// A summand Y - F Y^T F with Y = (sum_{u in us} e_u)(sum_{j in es} e_j)^T,
// indices 1-based, written E_{us;es} - E_{...} in the nilpotent recipes.
struct Piece {
    std::vector<int> us;
    std::vector<int> es;
};

struct OrbitBlock {
    enum Kind { Pair, TwoOdd, Single } kind = Pair;
    int r = 0;           // Pair: [r,r]; TwoOdd and Single: long part 2r+1
    int s = 0;           // TwoOdd: short part 2s+1
    std::size_t d = 0;   // local dimension
    Mat embed;           // n x d; the form pulls back to the anti-diagonal one
};

namespace detail {

// [2r+1, 2s+1] with r > s >= 1.  Starts from a [5,3] split, adds outer hooks
// to lengthen the long chain and middle insertions for the short chain.  The
// printed [7,3] split is used as is.
inline std::vector<Piece> two_odd_pieces(int r, int s, std::size_t& d)
{
    if (r == 3 && s == 1) {
        d = 10;
        return {{{1}, {2}}, {{2}, {3, 4}}, {{3, 4}, {5}}, {{4}, {6}}};
    }
    std::vector<Piece> p{{{1}, {2}}, {{2}, {4}}, {{2, 3}, {5}}};
    d = 8;
    for (int k = 0; k < r - 2; ++k) {
        for (auto& pc : p) {
            for (auto& u : pc.us) ++u;
            for (auto& e : pc.es) ++e;
        }
        p.push_back({{1}, {2}});
        d += 2;
    }
    int link = static_cast<int>(d / 2) - 1;
    for (int k = 0; k < s - 1; ++k) {
        int m = static_cast<int>(d / 2);
        auto shift = [m](int i) { return i <= m ? i : i + 2; };
        for (auto& pc : p) {
            for (auto& u : pc.us) u = shift(u);
            for (auto& e : pc.es) e = shift(e);
        }
        p.push_back({{m + 1}, {link}});
        d += 2;
        link = m + 1;
    }
    return p;
}

}  // namespace detail

inline Mat anti_diagonal(std::size_t d)
{
    Mat f(d, d);
    for (std::size_t i = 0; i < d; ++i) f(i, d - 1 - i) = Scalar(1);
    return f;
}

inline Mat piece_matrix(const Piece& p, std::size_t d)
{
    Mat y(d, d);
    for (int u : p.us)
        for (int e : p.es) y(u - 1, e - 1) += Scalar(1);
    Mat f = anti_diagonal(d);
    return y - f * y.transpose() * f;
}

// Local witness (u, F eta) for a piece.
inline std::pair<Vec<Scalar>, Vec<Scalar>> piece_vectors(const Piece& p, std::size_t d)
{
    Vec<Scalar> u(d, Scalar(0)), v(d, Scalar(0));
    for (int i : p.us) u[i - 1] += Scalar(1);
    for (int e : p.es) v[d - e] += Scalar(1);
    return {u, v};
}

inline std::vector<Piece> block_pieces(const OrbitBlock& b)
{
    std::vector<Piece> p;
    if (b.kind == OrbitBlock::Pair) {
        for (int i = 1; i < b.r; ++i) p.push_back({{i}, {i + 1}});
    } else if (b.kind == OrbitBlock::TwoOdd) {
        std::size_t d = 0;
        p = detail::two_odd_pieces(b.r, b.s, d);
    }
    return p;
}

// Nilpotent matrix of the block in local coordinates.
inline Mat block_nilpotent(const OrbitBlock& b)
{
    Mat m(b.d, b.d);
    if (b.kind == OrbitBlock::Single) {
        for (int i = 0; i < 2 * b.r; ++i) m(i, i + 1) = Scalar(i < b.r ? 1 : -1);
        return m;
    }
    for (const auto& p : block_pieces(b)) m += piece_matrix(p, b.d);
    return m;
}

// Local matrix N of a block pushed to P N G^{-1} P^T F with G = anti-diagonal.
inline Mat block_to_global(const OrbitBlock& b, const Mat& local)
{
    std::size_t n = b.embed.rows();
    Mat f = anti_diagonal(n);
    Mat g = anti_diagonal(b.d);
    return b.embed * local * g * b.embed.transpose() * f;
}

// Blocks are placed on the outermost free index pairs (i, n+1-i).  An odd
// single block also needs a norm-one middle vector: e_{(n+1)/2} for odd n, and
// e_j + e_{n+1-j}/2 on a spare pair for even n (the part 1 that must then
// exist takes e_j - e_{n+1-j}/2).
inline std::vector<OrbitBlock> orbit_layout(const Partition& p, std::size_t n)
{
    validate_orbit(p, n);
    std::vector<int> odd, even;
    for (int x : p.parts) {
        if (x % 2 == 0)
            even.push_back(x);
        else if (x > 1)
            odd.push_back(x);
    }
    std::vector<OrbitBlock> blocks;
    for (std::size_t i = 0; i + 1 < even.size(); i += 2) {
        OrbitBlock b;
        b.kind = OrbitBlock::Pair;
        b.r = even[i];
        b.d = 2 * static_cast<std::size_t>(even[i]);
        blocks.push_back(b);
    }
    std::size_t start = 0;
    std::optional<OrbitBlock> single;
    if (odd.size() % 2) {
        OrbitBlock b;
        b.kind = OrbitBlock::Single;
        b.r = (odd[0] - 1) / 2;
        b.d = static_cast<std::size_t>(odd[0]);
        single = b;
        start = 1;
    }
    for (std::size_t i = start; i + 1 < odd.size(); i += 2) {
        OrbitBlock b;
        if (odd[i] == odd[i + 1]) {
            b.kind = OrbitBlock::Pair;
            b.r = odd[i];
        } else {
            b.kind = OrbitBlock::TwoOdd;
            b.r = (odd[i] - 1) / 2;
            b.s = (odd[i + 1] - 1) / 2;
        }
        b.d = static_cast<std::size_t>(odd[i] + odd[i + 1]);
        blocks.push_back(b);
    }
    if (single) blocks.push_back(*single);

    std::size_t next = 0;  // next free position in the first half (0-based)
    for (auto& b : blocks) {
        b.embed = Mat(n, b.d);
        std::size_t half = b.d / 2;
        for (std::size_t k = 0; k < half; ++k) {
            std::size_t g = next + k;
            b.embed(g, k) = Scalar(1);
            b.embed(n - 1 - g, b.d - 1 - k) = Scalar(1);
        }
        next += half;
        if (b.kind == OrbitBlock::Single) {
            if (n % 2) {
                b.embed(n / 2, half) = Scalar(1);
            } else {
                b.embed(next, half) = Scalar(1);
                b.embed(n - 1 - next, half) = Scalar::rational(1, 2);
            }
        }
    }
    return blocks;
}

// Nilpotent representative of O[d] in o_n; its partition is re-checked.
inline Mat orbit_representative(const Partition& p, std::size_t n)
{
    Mat rep(n, n);
    for (const auto& b : orbit_layout(p, n)) rep += block_to_global(b, block_nilpotent(b));
    AlgebraId alg{Family::O, n};
    if (!is_member(alg, rep) || !(nilpotent_partition(rep) == p))
        fail(ErrorKind::Verification, "representative has the wrong Jordan type");
    return rep;
}

}  // namespace secant
