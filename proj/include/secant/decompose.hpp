#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "lie.hpp"
#include "matrix.hpp"

namespace secant {

/// A decomposition target = sum of realize(summand).
struct Certificate {
    AlgebraId algebra;
    Mat target;
    std::vector<CWitness> summands;
    bool verified = false;
    std::string kind;

    Mat sum() const
    {
        Mat s(algebra.n, algebra.n);
        for (const auto& w : summands) s += realize(w);
        return s;
    }
};

struct TraceStep {
    std::string kind;
    std::vector<CWitness> witnesses;
    std::size_t rank_before = 0;
    std::size_t rank_after = 0;
};

using ReductionTrace = std::vector<TraceStep>;

struct Decomposition {
    Certificate certificate;
    ReductionTrace trace;
};

/// Random searches start at height 1 and double up to max_height, with
/// `attempts` candidates per height.
struct SearchOptions {
    std::uint64_t seed = 0;
    long max_height = 1L << 20;
    int attempts = 64;
};

/// First failed certificate check, if any: witness invariants, exact sum,
/// and the summand count bound of the algebra.  A valid witness realizes a
/// point of C, so extremality is not re-derived from the matrix.
inline std::optional<std::string> certificate_problem(const Certificate& c)
{
    const AlgebraId& alg = c.algebra;
    if (c.target.rows() != alg.n || c.target.cols() != alg.n) return std::string("target size mismatch");
    if (!is_member(alg, c.target)) return std::string("target is not in the algebra");
    Mat sum(alg.n, alg.n);
    for (std::size_t i = 0; i < c.summands.size(); ++i) {
        const CWitness& w = c.summands[i];
        std::string tag = "summand " + std::to_string(i + 1) + ": ";
        if (!(w.alg == alg)) return tag + "algebra mismatch";
        if (auto p = witness_problem(w)) return tag + *p;
        Mat j = realize(w);
        if (!is_member(alg, j)) return tag + "not in the algebra";
        sum += j;
    }
    if (!(sum == c.target)) return std::string("sum mismatch: summands do not add up to the target");
    std::size_t r = rank(c.target);
    if (alg.family != Family::O && c.summands.size() != r)
        return "summand count " + std::to_string(c.summands.size()) + " differs from rank " + std::to_string(r);
    if (alg.family == Family::O && c.summands.size() > r / 2 + 3)
        return "summand count " + std::to_string(c.summands.size()) + " exceeds rank/2 + 3";
    return std::nullopt;
}

inline void verify_certificate(Certificate& c)
{
    if (auto p = certificate_problem(c)) fail(ErrorKind::Verification, *p);
    c.verified = true;
}

namespace detail {

class Searcher {
public:
    Searcher(std::size_t n, const SearchOptions& opts) : n_(n), opts_(opts), rng_(opts.seed) {}

    // Calls try_x on e_i, then e_i + e_j, then random vectors of growing
    // height until it returns a value.
    template <class Fn>
    auto run(Fn try_x, const char* what) -> typename decltype(try_x(Vec<Scalar>()))::value_type
    {
        for (std::size_t i = 0; i < n_; ++i)
            if (auto r = try_x(unit_vector<Scalar>(n_, i))) return *r;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (auto r = try_x(add(unit_vector<Scalar>(n_, i), unit_vector<Scalar>(n_, j)))) return *r;
        for (long h = 1; h <= opts_.max_height; h *= 2) {
            for (int t = 0; t < opts_.attempts; ++t)
                if (auto r = try_x(random_vec(h))) return *r;
        }
        fail(ErrorKind::SearchExhausted, std::string(what) + ": no candidate up to height " +
                                             std::to_string(opts_.max_height) + "; retry with another seed");
    }

    Vec<Scalar> random_vec(long h)
    {
        std::uniform_int_distribution<long> d(-h, h);
        Vec<Scalar> v(n_);
        for (auto& x : v) x = Scalar(d(rng_));
        return v;
    }

    long coefficient(long h) { return std::uniform_int_distribution<long>(-h, h)(rng_); }

    std::mt19937_64& rng() { return rng_; }

private:
    std::size_t n_;
    SearchOptions opts_;
    std::mt19937_64 rng_;
};

inline Vec<Scalar> combine(const std::vector<Vec<Scalar>>& basis, const Vec<Scalar>& coeffs, std::size_t n)
{
    Vec<Scalar> v(n, Scalar(0));
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!coeffs[i].is_zero()) v = add(v, scale(coeffs[i], basis[i]));
    return v;
}

inline void require_nonzero_member(const AlgebraId& alg, const Mat& a)
{
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "matrix is not in " + alg.name() + std::to_string(alg.n));
    if (a.is_zero()) fail(ErrorKind::ZeroInput, "reduction step on the zero matrix");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// sl_n and sp_2m: one rank per step

/// J = (Ax) eta^T with eta vanishing on K Ax + ker A and <x, eta> = 1.
inline CWitness reduce_step_sl(const Mat& a, const SearchOptions& opts = {})
{
    AlgebraId alg{Family::SL, a.rows()};
    detail::require_nonzero_member(alg, a);
    std::size_t n = a.rows();
    auto ker = kernel_basis(a);
    detail::Searcher search(n, opts);
    return search.run(
        [&](const Vec<Scalar>& x) -> std::optional<CWitness> {
            Vec<Scalar> y = a * x;
            if (is_zero_vec(y)) return std::nullopt;
            std::vector<Vec<Scalar>> rows = ker;
            rows.push_back(y);
            if (in_span(rows, x)) return std::nullopt;
            rows.push_back(x);
            Vec<Scalar> rhs(rows.size(), Scalar(0));
            rhs.back() = Scalar(1);
            auto eta = solve_linear(Mat::from_rows(rows), rhs);
            if (!drops_rank(a, y, *eta)) fail(ErrorKind::Verification, "sl step did not drop the rank");
            return witness_sl(alg, y, *eta);
        },
        "reduce_step_sl");
}

/// J = c (Ax) (F Ax)^T with c = 1/(x, Ax).
inline CWitness reduce_step_sp(const Mat& a, const SearchOptions& opts = {})
{
    AlgebraId alg{Family::SP, a.rows()};
    detail::require_nonzero_member(alg, a);
    Mat f = form(alg);
    detail::Searcher search(a.rows(), opts);
    return search.run(
        [&](const Vec<Scalar>& x) -> std::optional<CWitness> {
            Vec<Scalar> y = a * x;
            Scalar p = bilinear(f, x, y);
            if (p.is_zero()) return std::nullopt;
            CWitness w = witness_sp(alg, y, Scalar(1) / p);
            if (rank(a - realize(w)) + 1 != rank(a)) fail(ErrorKind::Verification, "sp step did not drop the rank");
            return w;
        },
        "reduce_step_sp");
}

// ---------------------------------------------------------------------------
// o_n

/// A - (J - J^T) for J = y eta^T, transpose taken with respect to the form.
inline Mat skew_pair_reduce(const Mat& a, const Vec<Scalar>& y, const Vec<Scalar>& eta)
{
    AlgebraId alg{Family::O, a.rows()};
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "skew_pair_reduce needs an element of o_n");
    if (!drops_rank(a, y, eta)) fail(ErrorKind::Precondition, "y eta^T does not drop the rank of A");
    Mat f = form(alg);
    Mat j = outer(y, eta);
    Mat out = a - (j - f * j.transpose() * f);
    if (rank(out) + 2 != rank(a)) fail(ErrorKind::Verification, "skew pair did not drop the rank by 2");
    return out;
}

namespace detail {

// Plane (p, q / B2(p, q)) if p, q span a B1-isotropic plane with B2(p, q) != 0.
inline std::optional<std::pair<Vec<Scalar>, Vec<Scalar>>> accept_plane(const Mat& b1, const Mat& b2,
                                                                       const Vec<Scalar>& p, const Vec<Scalar>& q)
{
    if (!bilinear(b1, p, p).is_zero() || !bilinear(b1, q, q).is_zero() || !bilinear(b1, p, q).is_zero())
        return std::nullopt;
    Scalar s = bilinear(b2, p, q);
    if (s.is_zero()) return std::nullopt;
    return std::make_pair(p, scale(Scalar(1) / s, q));
}

// Eichler transformation x + (x,a) b - (x,b) a - (b,b)/2 (x,a) a, for an
// isotropic a orthogonal to b; it preserves the form.
inline Vec<Scalar> eichler(const Mat& g, const Vec<Scalar>& a, const Vec<Scalar>& b, const Vec<Scalar>& x)
{
    Scalar xa = bilinear(g, x, a), xb = bilinear(g, x, b), bb = bilinear(g, b, b);
    return sub(add(x, scale(xa, b)), scale(xb + bb * xa / Scalar(2), a));
}

// Isotropic plane built one vector at a time so that few roots are adjoined:
// y1 from the given isotropic hints or isotropic_candidates, then y2 isotropic in a complement of y1
// inside y1^perp.
inline std::optional<std::pair<Vec<Scalar>, Vec<Scalar>>> greedy_plane(const Mat& b1, const Mat& b2,
                                                                       std::vector<Vec<Scalar>> firsts = {})
{
    std::size_t d = b1.rows();
    std::vector<Vec<Scalar>> units;
    for (std::size_t i = 0; i < d; ++i) units.push_back(unit_vector<Scalar>(d, i));
    std::size_t hints = firsts.size();
    for (auto& v : isotropic_candidates(b1, units, 2)) firsts.push_back(std::move(v));
    for (std::size_t k = 0; k < firsts.size() && k < hints + 8; ++k) {
        const Vec<Scalar>& y1 = firsts[k];
        Mat row(1, d);
        Vec<Scalar> g = b1 * y1;
        for (std::size_t c = 0; c < d; ++c) row(0, c) = g[c];
        EchelonBasis<Scalar> ech(d);
        ech.add(y1);
        std::vector<Vec<Scalar>> rest;
        for (const auto& v : kernel_basis(row))
            if (ech.add(v)) rest.push_back(v);
        // Only vectors with b2(y1, .) != 0 can complete the plane.
        for (const auto& y2 : isotropic_candidates(b1, rest, 2))
            if (auto plane = accept_plane(b1, b2, y1, y2)) return plane;
    }
    return std::nullopt;
}

}  // namespace detail

namespace detail {

// witness_o(y1, y2) with both vectors made primitive; the rational factor
// that keeps realize() unchanged goes back into y1.
inline CWitness balanced_o(const AlgebraId& alg, Vec<Scalar> y1, Vec<Scalar> y2)
{
    mpq_class k = make_primitive(y1) * make_primitive(y2);
    if (k != 1) y1 = scale(Scalar(mpq_class(1 / k)), y1);
    return witness_o(alg, std::move(y1), std::move(y2));
}

}  // namespace detail

/// Coordinates (u1, u2) of a plane in K^d}  // namespace detail

/// Coordinates (u1, u2) of a plane in K^d that is isotropic for the symmetric
/// Gram matrix b1 and has b2(u1, u2) = 1 for the skew Gram matrix b2.
inline std::pair<Vec<Scalar>, Vec<Scalar>> isotropic_plane(const Mat& b1, const Mat& b2,
                                                           const SearchOptions& opts = {})
{
    std::size_t d = b1.rows();
    if (d < 4) fail(ErrorKind::Precondition, "isotropic_plane needs dimension >= 4");
    if (!(b1.transpose() == b1) || !(b2.transpose() == -b2))
        fail(ErrorKind::Precondition, "isotropic_plane needs a symmetric and a skew form");
    if (rank(b2) != d) fail(ErrorKind::Precondition, "skew form is degenerate");
    if (auto plane = detail::greedy_plane(b1, b2)) return *plane;

    // Radical of b1 plus a Witt frame of a complement.
    std::vector<Vec<Scalar>> radical = kernel_basis(b1);
    EchelonBasis<Scalar> ech(d);
    for (const auto& r : radical) ech.add(r);
    std::vector<Vec<Scalar>> complement;
    for (std::size_t i = 0; i < d; ++i) {
        Vec<Scalar> e = unit_vector<Scalar>(d, i);
        if (ech.add(e)) complement.push_back(e);
    }
    WittFrame frame = witt_frame(complement, b1, false);
    std::size_t h = frame.pairs.size();

    auto lagrangian = [&](std::uint64_t mask) {
        std::vector<Vec<Scalar>> l = radical;
        for (std::size_t i = 0; i < h; ++i) l.push_back(mask >> i & 1 ? frame.pairs[i].second : frame.pairs[i].first);
        return l;
    };

    // Maximal isotropic subspaces R + <one vector of each hyperbolic pair>.
    std::uint64_t masks = h >= 6 ? 64 : (std::uint64_t(1) << h);
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        auto l = lagrangian(mask);
        for (std::size_t i = 0; i < l.size(); ++i)
            for (std::size_t j = i + 1; j < l.size(); ++j)
                if (auto r = detail::accept_plane(b1, b2, l[i], l[j])) return *r;
    }

    // Random planes in images of those subspaces under Eichler
    // transformations, shifted by random radical vectors.
    std::vector<Vec<Scalar>> frame_vectors;
    for (const auto& [u, v] : frame.pairs) {
        frame_vectors.push_back(u);
        frame_vectors.push_back(v);
    }
    if (frame.unit) frame_vectors.push_back(*frame.unit);
    detail::Searcher search(d, opts);
    for (long height = 1; height <= opts.max_height; height *= 2) {
        for (int t = 0; t < opts.attempts; ++t) {
            std::uint64_t mask = search.rng()();
            auto l = lagrangian(h >= 64 ? mask : mask % (std::uint64_t(1) << h));
            auto rand_comb = [&](const std::vector<Vec<Scalar>>& basis) {
                Vec<Scalar> c(basis.size());
                for (auto& x : c) x = Scalar(search.coefficient(height));
                return detail::combine(basis, c, d);
            };
            Vec<Scalar> p = rand_comb(l), q = rand_comb(l);
            for (int k = 0; k < 2 && h > 0; ++k) {
                std::size_t i = static_cast<std::size_t>(search.rng()() % (2 * h));
                const Vec<Scalar>& a = frame_vectors[i];
                std::vector<Vec<Scalar>> others;
                for (std::size_t j = 0; j < frame_vectors.size(); ++j)
                    if (j != (i ^ 1)) others.push_back(frame_vectors[j]);
                Vec<Scalar> b = rand_comb(others);
                p = detail::eichler(b1, a, b, p);
                q = detail::eichler(b1, a, b, q);
            }
            if (!radical.empty()) {
                p = add(p, rand_comb(radical));
                q = add(q, rand_comb(radical));
            }
            if (rank_of_vectors<Scalar>({p, q}, d) != 2) continue;
            if (auto r = detail::accept_plane(b1, b2, p, q)) return *r;
        }
    }
    fail(ErrorKind::SearchExhausted, "isotropic_plane: no plane found up to height " +
                                         std::to_string(opts.max_height) + "; retry with another seed");
}

/// J in C with rank(A - J) = rank(A) - 2, built on im A from the restricted
/// form and the skew form (Ax1 | Ax2) = (x1, Ax2).
inline CWitness reduce_step_o(const Mat& a, const SearchOptions& opts = {})
{
    std::size_t n = a.rows();
    AlgebraId alg{Family::O, n};
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "reduce_step_o needs an element of o_n");
    auto img = image_basis(a);
    std::size_t r = img.size();
    if (r < 4) fail(ErrorKind::RankTooLow, "reduce_step_o needs rank >= 4");
    Mat f = form(alg);
    std::vector<Vec<Scalar>> pre;
    for (const auto& w : img) pre.push_back(*solve_linear(a, w));
    Mat g1(r, r), g2(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            g1(i, j) = bilinear(f, img[i], img[j]);
            g2(i, j) = bilinear(f, pre[i], img[j]);
        }

    std::optional<std::pair<Vec<Scalar>, Vec<Scalar>>> plane;
    std::vector<Vec<Scalar>> hints;
    // Rational attempt: im A meets a coordinate maximal isotropic subspace
    // (one index from each pair i, n+1-i) in a plane where B2 is non-zero.
    std::size_t m = n / 2;
    std::uint64_t masks = m >= 6 ? 64 : (std::uint64_t(1) << m);
    for (std::uint64_t k = 0; k < masks && !plane; ++k) {
        std::uint64_t mask = k == 1 ? masks - 1 : (k == masks - 1 ? 1 : k);
        std::vector<std::size_t> outside;
        for (std::size_t i = 0; i < m; ++i) outside.push_back(mask >> i & 1 ? i : n - 1 - i);
        if (n % 2) outside.push_back(m);
        Mat sys(outside.size(), r);
        for (std::size_t row = 0; row < outside.size(); ++row)
            for (std::size_t c = 0; c < r; ++c) sys(row, c) = img[c][outside[row]];
        auto meet = kernel_basis(sys);
        if (hints.size() < 8)
            for (const auto& v : meet) hints.push_back(v);
        for (std::size_t i = 0; i < meet.size() && !plane; ++i)
            for (std::size_t j = i + 1; j < meet.size() && !plane; ++j)
                plane = detail::accept_plane(g1, g2, meet[i], meet[j]);
    }
    // Rational isotropic lines from the attempt above seed the greedy search.
    if (!plane) plane = detail::greedy_plane(g1, g2, hints);
    if (!plane) plane = isotropic_plane(g1, g2, opts);

    Vec<Scalar> y1 = detail::combine(img, plane->first, n);
    Vec<Scalar> y2 = detail::combine(img, plane->second, n);
    CWitness w = detail::balanced_o(alg, y1, y2);
    check_witness(w);
    if (rank(a - realize(w)) + 2 != r) fail(ErrorKind::Verification, "o step did not drop the rank by 2");
    return w;
}

namespace detail {

// Vector of norm c in span(s), which is non-degenerate.
inline Vec<Scalar> norm_vector_in(const std::vector<Vec<Scalar>>& s, const Scalar& c, const Mat& f)
{
    if (s.size() == 1) return scale(sqrt(c / bilinear(f, s[0], s[0])), s[0]);
    return vector_of_norm(s, c, f);
}

// Witt frame of the rational part of {vs}^perp.  Only pairs found without
// adjoining roots are kept.
inline WittFrame rational_frame(const std::vector<Vec<Scalar>>& vs, const Mat& f)
{
    auto rat = drop_radical(rational_orthogonal_complement(vs, f), f);
    WittFrame out;
    if (rat.size() < 2) return out;
    WittFrame frame = witt_frame(rat, f);
    auto rational = [](const Vec<Scalar>& v) {
        return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x.is_rational(); });
    };
    for (const auto& pr : frame.pairs)
        if (rational(pr.first) && rational(pr.second)) out.pairs.push_back(pr);
    return out;
}

// u + (c/2) v has norm c for a hyperbolic pair (u, v).
inline Vec<Scalar> on_pair(const std::pair<Vec<Scalar>, Vec<Scalar>>& pr, const Scalar& c)
{
    return add(pr.first, scale(c / Scalar(2), pr.second));
}

}  // namespace detail

/// Rank-2 elements of o_n: one summand if im A is isotropic, two if the
/// restricted form has rank 1, four if it has rank 2.  Each anisotropic
/// generator v is split as ((v + w) + (v - w)) / 2 with (w, w) = -(v, v).
inline Certificate finish_rank2(const Mat& a);

namespace detail {

inline Certificate finish_rank2_unverified(const Mat& a)
{
    std::size_t n = a.rows();
    AlgebraId alg{Family::O, n};
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "finish_rank2 needs an element of o_n");
    auto img = image_basis(a);
    if (img.size() != 2) fail(ErrorKind::WrongRank, "finish_rank2 needs rank 2");
    Mat f = form(alg);
    Certificate cert{alg, a, {}, false, "rank2"};
    int type = rank2_type(alg, a);
    auto halves = [](const Vec<Scalar>& v, const Vec<Scalar>& w) {
        Scalar half = Scalar::rational(1, 2);
        return std::make_pair(scale(half, add(v, w)), scale(half, sub(v, w)));
    };
    if (type == 0) {
        cert.summands.push_back(witness_from_matrix(alg, a));
    } else if (type == 1) {
        Mat g(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) g(i, j) = bilinear(f, img[i], img[j]);
        Vec<Scalar> k = kernel_basis(g)[0];
        Vec<Scalar> y = add(scale(k[0], img[0]), scale(k[1], img[1]));
        Vec<Scalar> z = g(0, 0).is_zero() ? img[1] : img[0];
        Scalar c = bilinear(f, z, z);
        // A complement of the radical K y inside {y, z}^perp.
        EchelonBasis<Scalar> ech(n);
        ech.add(y);
        Vec<Scalar> w;
        WittFrame rat = detail::rational_frame({y, z}, f);
        if (!rat.pairs.empty()) {
            w = detail::on_pair(rat.pairs[0], -c);
        } else {
            std::vector<Vec<Scalar>> s;
            for (const auto& v : orthogonal_complement({y, z}, f))
                if (ech.add(v)) s.push_back(v);
            w = detail::norm_vector_in(s, -c, f);
        }
        auto [zp, zm] = halves(z, w);
        Scalar alpha = *proportionality(a, realize(witness_o(alg, y, z)));
        cert.summands.push_back(detail::balanced_o(alg, y, zp));
        cert.summands.push_back(detail::balanced_o(alg, y, zm));
        for (std::size_t i = cert.summands.size() - 2; i < cert.summands.size(); ++i)
            cert.summands[i].y1 = scale(alpha, cert.summands[i].y1);
    } else {
        // A non-isotropic p; with both basis vectors isotropic their sum is not.
        Vec<Scalar> p = img[0], other = img[1];
        if (bilinear(f, p, p).is_zero()) std::swap(p, other);
        if (bilinear(f, p, p).is_zero()) p = add(p, other);
        Vec<Scalar> q = sub(other, scale(bilinear(f, p, other) / bilinear(f, p, p), p));
        // Hyperbolic pairs over Q keep the split vectors small.
        WittFrame rat = detail::rational_frame({p, q}, f);
        Vec<Scalar> w = rat.pairs.empty()
                            ? detail::norm_vector_in(orthogonal_complement({p, q}, f), -bilinear(f, p, p), f)
                            : detail::on_pair(rat.pairs[0], -bilinear(f, p, p));
        Vec<Scalar> w2 = rat.pairs.size() >= 2
                             ? detail::on_pair(rat.pairs[1], -bilinear(f, q, q))
                             : detail::norm_vector_in(orthogonal_complement({p, q, w}, f), -bilinear(f, q, q), f);
        auto [pp, pm] = halves(p, w);
        auto [qp, qm] = halves(q, w2);
        Scalar alpha = *proportionality(a, realize(witness_o(alg, p, q)));
        for (const auto& u : {pp, pm})
            for (const auto& v : {qp, qm}) {
                cert.summands.push_back(detail::balanced_o(alg, u, v));
                cert.summands.back().y1 = scale(alpha, cert.summands.back().y1);
            }
    }
    return cert;
}

}  // namespace detail

inline Certificate finish_rank2(const Mat& a)
{
    Certificate cert = detail::finish_rank2_unverified(a);
    verify_certificate(cert);
    return cert;
}

/// Top-level decomposition.  sl/sp: exactly rank(A) summands.  o: rank drops
/// by two per step down to rank 2, then finish_rank2.
inline Decomposition decompose(const AlgebraId& alg, const Mat& a, const SearchOptions& opts = {})
{
    alg.validate();
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "matrix is not in " + alg.name() + std::to_string(alg.n));
    Decomposition out;
    out.certificate = Certificate{alg, a, {}, false, "reduction"};
    Mat rest = a;
    std::size_t r = rank(rest);
    SearchOptions step_opts = opts;
    while (r > 0) {
        TraceStep step;
        step.rank_before = r;
        if (alg.family == Family::O && r == 2) {
            // The whole certificate is verified below.
            Certificate tail = detail::finish_rank2_unverified(rest);
            step.kind = "finish_rank2";
            step.witnesses = tail.summands;
            rest = Mat(alg.n, alg.n);
        } else {
            CWitness w;
            switch (alg.family) {
            case Family::SL:
                w = reduce_step_sl(rest, step_opts);
                step.kind = "reduce_step_sl";
                break;
            case Family::SP:
                w = reduce_step_sp(rest, step_opts);
                step.kind = "reduce_step_sp";
                break;
            case Family::O:
                w = reduce_step_o(rest, step_opts);
                step.kind = "reduce_step_o";
                break;
            }
            step.witnesses = {w};
            rest = rest - realize(w);
        }
        ++step_opts.seed;
        r = rank(rest);
        step.rank_after = r;
        for (const auto& w : step.witnesses) out.certificate.summands.push_back(w);
        out.trace.push_back(std::move(step));
    }
    verify_certificate(out.certificate);
    return out;
}

// ---------------------------------------------------------------------------
// Semisimple constructions

namespace detail {

// Columns P_0..P_{k-1} with A P_j = d_j P_j and (P_i, P_j) = [i + j = k - 1],
// given that d_{k-1-j} = -d_j and all d_j are non-zero.  A must vanish on the
// orthogonal complement of the columns.
inline Mat eigen_frame(const Mat& a, const std::vector<Scalar>& d)
{
    std::size_t n = a.rows(), k = d.size();
    Mat f = form(AlgebraId{Family::O, n});
    Mat p(n, k);
    std::vector<bool> done(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        if (done[i]) continue;
        std::vector<std::size_t> pos, mirror;
        for (std::size_t j = 0; j < k; ++j)
            if (d[j] == d[i]) {
                pos.push_back(j);
                mirror.push_back(k - 1 - j);
            }
        auto e = kernel_basis(a - d[i] * Mat::identity(n));
        auto e_neg = kernel_basis(a + d[i] * Mat::identity(n));
        if (e.size() != pos.size() || e_neg.size() != pos.size())
            fail(ErrorKind::Eigenstructure, "eigenspace of " + to_string(d[i]) + " has the wrong dimension");
        // Dual basis of the -d_i eigenspace.
        Mat pairing(pos.size(), pos.size());
        for (std::size_t r = 0; r < pos.size(); ++r)
            for (std::size_t c = 0; c < pos.size(); ++c) pairing(r, c) = bilinear(f, e[r], e_neg[c]);
        for (std::size_t r = 0; r < pos.size(); ++r) {
            auto coeffs = solve_linear(pairing, unit_vector<Scalar>(pos.size(), r));
            if (!coeffs) fail(ErrorKind::Eigenstructure, "eigenspaces are not paired by the form");
            Vec<Scalar> dual = combine(e_neg, *coeffs, n);
            for (std::size_t t = 0; t < n; ++t) {
                p(t, pos[r]) = e[r][t];
                p(t, mirror[r]) = dual[t];
            }
            done[pos[r]] = done[mirror[r]] = true;
        }
    }
    Mat diag(k, k);
    for (std::size_t j = 0; j < k; ++j) diag(j, j) = d[j];
    Mat g = anti_diagonal(k);
    if (!(p.transpose() * f * p == g) || !(p * diag * g * p.transpose() * f == a))
        fail(ErrorKind::Eigenstructure, "matrix does not have the stated eigenvalues");
    return p;
}

// P M G^{-1} P^T F for the anti-diagonal local Gram matrix G.
inline Mat push_forward(const Mat& p, const Mat& local)
{
    std::size_t n = p.rows();
    return p * local * anti_diagonal(local.rows()) * p.transpose() * anti_diagonal(n);
}

}  // namespace detail

/// Semisimple rank-4 A with A^3 = a^2 A: two summands from the split
/// diag(a, a, -a, -a) = M1 + M2 on eigenvectors paired by the form.
inline Certificate decompose_s2(const Mat& a, const Scalar& eig)
{
    std::size_t n = a.rows();
    AlgebraId alg{Family::O, n};
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "decompose_s2 needs an element of o_n");
    if (eig.is_zero()) fail(ErrorKind::Eigenstructure, "decompose_s2 needs a non-zero eigenvalue");
    Mat p = detail::eigen_frame(a, {eig, eig, -eig, -eig});
    Scalar h = eig / Scalar(2);
    auto block = [&](std::array<int, 16> e) {
        Mat m(4, 4);
        for (std::size_t i = 0; i < 16; ++i) m(i / 4, i % 4) = h * Scalar(e[i]);
        return m;
    };
    Mat m1 = block({1, 0, 1, 0, 0, 1, 0, -1, -1, 0, -1, 0, 0, 1, 0, -1});
    Mat m2 = block({1, 0, -1, 0, 0, 1, 0, 1, 1, 0, -1, 0, 0, -1, 0, -1});
    Certificate cert{alg, a, {}, false, "s2"};
    cert.summands.push_back(witness_from_matrix(alg, detail::push_forward(p, m1)));
    cert.summands.push_back(witness_from_matrix(alg, detail::push_forward(p, m2)));
    verify_certificate(cert);
    return cert;
}

/// Semisimple A with eigenvalues a, b, -a-b, -a, -b, a+b and zeros: a rank-2
/// summand with coefficient ab/(b-a) plus an S_2 block with eigenvalue a+b.
inline Certificate decompose_semisimple3(const Mat& a, Scalar x, Scalar y)
{
    std::size_t n = a.rows();
    AlgebraId alg{Family::O, n};
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "decompose_semisimple3 needs an element of o_n");
    Scalar z = -x - y;
    if (x.is_zero() && y.is_zero()) {
        if (!a.is_zero()) fail(ErrorKind::Eigenstructure, "all eigenvalues zero but the matrix is not");
        Certificate cert{alg, a, {}, false, "semisimple3"};
        verify_certificate(cert);
        return cert;
    }
    // One zero among a, b, -a-b leaves eigenvalues t, t, -t, -t.
    for (const Scalar& v : {x, y, z})
        if (v.is_zero()) {
            Scalar t = x.is_zero() ? y : x;
            Certificate cert = decompose_s2(a, t);
            cert.kind = "semisimple3";
            return cert;
        }
    if (x == y) y = z;
    Scalar s = x + y;
    Mat p = detail::eigen_frame(a, {x, y, s, -s, -y, -x});
    Scalar inv = Scalar(1) / (y - x);
    Scalar k = x * y * inv;
    Mat t1(6, 6);
    t1(0, 0) = k, t1(0, 1) = k, t1(1, 0) = -k, t1(1, 1) = -k;
    t1(4, 4) = k, t1(4, 5) = -k, t1(5, 4) = k, t1(5, 5) = -k;
    Mat b(6, 6);
    b(0, 0) = -x * x * inv, b(0, 1) = -x * y * inv;
    b(1, 0) = x * y * inv, b(1, 1) = y * y * inv;
    b(2, 2) = s, b(3, 3) = -s;
    b(4, 4) = -y * y * inv, b(4, 5) = x * y * inv;
    b(5, 4) = -x * y * inv, b(5, 5) = x * x * inv;
    Certificate cert{alg, a, {}, false, "semisimple3"};
    cert.summands.push_back(witness_from_matrix(alg, detail::push_forward(p, t1)));
    Certificate rest = decompose_s2(detail::push_forward(p, b), s);
    for (const auto& w : rest.summands) cert.summands.push_back(w);
    verify_certificate(cert);
    return cert;
}

struct Generic4Data {
    std::array<Scalar, 4> r;
    std::array<Scalar, 4> s;
    Vec<Scalar> y1, y2;
    Mat target;
    Mat j;
    std::array<Scalar, 3> eigenvalues;  // of A - J, upper signs; they sum to zero
};

/// The rank-2 element J and eigenvalue data for diag(a1..a4, -a4..-a1).
inline Generic4Data generic4_data(const std::array<Scalar, 4>& av)
{
    const Scalar &a1 = av[0], &a2 = av[1], &a3 = av[2], &a4 = av[3];
    Generic4Data g;
    g.r = {Scalar(0), a3 * (a1 * a1 - (a2 + a3 + a4) * (a2 + a3 + a4)),
           -a4 * (a1 * a1 - (-a2 + a3 + a4) * (-a2 + a3 + a4)), -a2 * (a1 * a1 - (-a2 - a3 + a4) * (-a2 - a3 + a4))};
    g.s = {Scalar(1), Scalar(4) * (a2 + a3) * (a3 + a4), Scalar(4) * (a3 + a4) * (-a2 + a4),
           Scalar(4) * (-a2 + a4) * (-a2 - a3)};
    for (std::size_t i = 0; i < 4; ++i)
        if (g.s[i].is_zero()) fail(ErrorKind::Genericity, "s_" + std::to_string(i + 1) + " vanishes");
    g.y1 = {Scalar(0), g.r[3], Scalar(0), g.r[2], Scalar(0), g.r[1], Scalar(0), g.r[0]};
    g.y2 = {Scalar(1) / g.s[0], Scalar(0), Scalar(1) / g.s[1], Scalar(0),
            Scalar(1) / g.s[2], Scalar(0), Scalar(1) / g.s[3], Scalar(0)};
    g.target = Mat(8, 8);
    for (std::size_t i = 0; i < 4; ++i) {
        g.target(i, i) = av[i];
        g.target(7 - i, 7 - i) = -av[i];
    }
    g.j = realize(witness_o(AlgebraId{Family::O, 8}, g.y1, g.y2));
    Scalar half = Scalar::rational(1, 2);
    g.eigenvalues = {-a1, half * (a1 - a2 + a3 - a4), half * (a1 + a2 - a3 + a4)};
    return g;
}

/// Four summands for diag(a1..a4, -a4..-a1) in o_8: J from the r_i, s_i
/// construction, then the three-summand semisimple split of A - J.
inline Certificate decompose_generic4(const std::array<Scalar, 4>& av)
{
    Generic4Data g = generic4_data(av);
    AlgebraId alg{Family::O, 8};
    CWitness first = witness_o(alg, g.y1, g.y2);
    if (auto p = witness_problem(first)) fail(ErrorKind::Genericity, "J is not in C: " + *p);
    Certificate rest;
    try {
        rest = decompose_semisimple3(g.target - g.j, g.eigenvalues[0], g.eigenvalues[1]);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Eigenstructure) throw;
        fail(ErrorKind::Genericity, std::string("A - J does not split: ") + e.what());
    }
    Certificate cert{alg, g.target, {first}, false, "generic4"};
    for (const auto& w : rest.summands) cert.summands.push_back(w);
    verify_certificate(cert);
    return cert;
}

struct O7Blocks {
    Mat rep;                // nilpotent representative of O[7]
    CWitness first;         // a point of C
    Certificate remainder;  // rep - realize(first), two summands
};

/// The [7] representative minus a rational point of C is semisimple with
/// eigenvalues 0, i/2, -i/2 (each twice), hence splits via decompose_s2.
inline O7Blocks o7_blocks()
{
    AlgebraId alg{Family::O, 7};
    O7Blocks out;
    out.rep = Mat(7, 7);
    for (std::size_t i = 0; i < 6; ++i) out.rep(i, i + 1) = Scalar(i < 3 ? 1 : -1);
    auto q = [](long a, long b) { return Scalar::rational(a, b); };
    Mat c = Mat::from_rows({
        {q(0, 1), q(1, 2), q(0, 1), q(1, 1), q(0, 1), q(-1, 1), q(0, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 2), q(0, 1), q(1, 1)},
        {q(0, 1), q(1, 4), q(0, 1), q(1, 2), q(0, 1), q(-1, 2), q(0, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(-1, 2), q(0, 1), q(-1, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(-1, 4), q(0, 1), q(-1, 2)},
        {q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)},
    });
    out.first = witness_from_matrix(alg, c);
    out.remainder = decompose_s2(out.rep - c, imag_unit() / Scalar(2));
    return out;
}

// ---------------------------------------------------------------------------
// Nilpotent orbits

/// Summand count of the block recipes: rank/2, plus one when the number of
/// odd parts > 1 is odd and the largest of them is 3 or 5.
inline std::size_t nilpotent_recipe_count(const Partition& p)
{
    std::size_t half = static_cast<std::size_t>(p.nilpotent_rank() / 2);
    int largest_odd = 0;
    for (int x : p.parts)
        if (x % 2 && x > largest_odd) largest_odd = x;
    bool extra = odd_parts_above_one(p) % 2 == 1 && largest_odd <= 5;
    return half + (extra ? 1 : 0);
}

inline Certificate decompose_nilpotent(const Partition& p, std::size_t n)
{
    AlgebraId alg{Family::O, n};
    Mat rep = orbit_representative(p, n);
    Certificate cert{alg, rep, {}, false, "nilpotent"};
    auto push_vec = [](const OrbitBlock& b, const Vec<Scalar>& u) { return b.embed * u; };
    auto add_piece = [&](const OrbitBlock& b, const Vec<Scalar>& u, const Vec<Scalar>& v) {
        cert.summands.push_back(witness_o(alg, push_vec(b, u), push_vec(b, v)));
    };
    for (const auto& b : orbit_layout(p, n)) {
        if (b.kind != OrbitBlock::Single) {
            for (const auto& pc : block_pieces(b)) {
                auto [u, v] = piece_vectors(pc, b.d);
                add_piece(b, u, v);
            }
            continue;
        }
        if (b.r >= 3) {
            int hooks = b.r - 3;
            for (int i = 1; i <= hooks; ++i) {
                auto [u, v] = piece_vectors(Piece{{i}, {i + 1}}, b.d);
                add_piece(b, u, v);
            }
            O7Blocks o7 = o7_blocks();
            auto lift = [&](const Vec<Scalar>& w7) {
                Vec<Scalar> w(b.d, Scalar(0));
                for (std::size_t t = 0; t < 7; ++t) w[static_cast<std::size_t>(hooks) + t] = w7[t];
                return w;
            };
            add_piece(b, lift(o7.first.y1), lift(o7.first.y2));
            for (const auto& w : o7.remainder.summands) add_piece(b, lift(w.y1), lift(w.y2));
            continue;
        }
        Mat local = block_nilpotent(b);
        if (b.r == 2) {
            Piece hook{{1}, {2}};
            auto [u, v] = piece_vectors(hook, b.d);
            add_piece(b, u, v);
            local = local - piece_matrix(hook, b.d);
        }
        Certificate tail = finish_rank2(block_to_global(b, local));
        for (const auto& w : tail.summands) cert.summands.push_back(w);
    }
    verify_certificate(cert);
    if (cert.summands.size() != nilpotent_recipe_count(p))
        fail(ErrorKind::Verification, "nilpotent certificate has an unexpected summand count");
    return cert;
}

}  // namespace secant
