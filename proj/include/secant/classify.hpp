#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "decompose.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "lie.hpp"
#include "matrix.hpp"

namespace secant {

enum class Verdict { In, Out, Unknown };

inline const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::In: return "IN";
    case Verdict::Out: return "OUT";
    case Verdict::Unknown: return "UNKNOWN";
    }
    return "?";
}

/// Outcome of a membership test.  `reason` is a short tag; `invariant`
/// names the quantity that separates an OUT verdict, when there is one.
struct MembershipStatus {
    Verdict verdict = Verdict::Unknown;
    std::string reason;
    std::string invariant;
    std::optional<Certificate> witness;

    bool in() const { return verdict == Verdict::In; }
    bool out() const { return verdict == Verdict::Out; }
    bool unknown() const { return verdict == Verdict::Unknown; }
};

inline MembershipStatus status_in(std::string reason) { return {Verdict::In, std::move(reason), {}, std::nullopt}; }
inline MembershipStatus status_out(std::string reason, std::string invariant = {})
{
    return {Verdict::Out, std::move(reason), std::move(invariant), std::nullopt};
}
inline MembershipStatus status_unknown(std::string reason) { return {Verdict::Unknown, std::move(reason), {}, std::nullopt}; }

// ---------------------------------------------------------------------------
// Relation constants

namespace detail {

inline void require_o_witnesses(const std::vector<const CWitness*>& ws)
{
    for (const CWitness* w : ws) {
        if (w->alg.family != Family::O) fail(ErrorKind::Precondition, "relation constants are defined on o_n");
        if (!(w->alg == ws.front()->alg)) fail(ErrorKind::Precondition, "witnesses live in different algebras");
        check_witness(*w);
    }
}

// c with m = c x; zero when m is.
inline Scalar collinear(const Mat& m, const Mat& x, const char* what)
{
    if (m.is_zero()) return Scalar(0);
    auto c = proportionality(m, x);
    if (!c) fail(ErrorKind::Collinearity, std::string(what) + " is not a multiple of J");
    return *c;
}

}  // namespace detail

/// lambda with (J1 + J2)^3 = lambda (J1 + J2); zero for a zero sum.
inline Scalar two_sum_lambda(const CWitness& w1, const CWitness& w2)
{
    detail::require_o_witnesses({&w1, &w2});
    Mat s = realize(w1) + realize(w2);
    if (s.is_zero()) return Scalar(0);
    auto lambda = proportionality(s * s * s, s);
    if (!lambda) fail(ErrorKind::Verification, "(J1 + J2)^3 is not a multiple of J1 + J2");
    return *lambda;
}

struct TripleInvariants {
    Scalar c12, c13, c23, c;
    UniPoly<Scalar> annihilator;
};

/// t [(t^3 - s t)^2 - c - 2 c12 c13 c23] with s = c12 + c13 + c23.
inline UniPoly<Scalar> triple_annihilator(const Scalar& c12, const Scalar& c13, const Scalar& c23, const Scalar& c)
{
    Scalar s = c12 + c13 + c23;
    Scalar m = c + Scalar(2) * c12 * c13 * c23;
    return UniPoly<Scalar>({Scalar(0), -m, Scalar(0), s * s, Scalar(0), Scalar(-2) * s, Scalar(0), Scalar(1)});
}

inline TripleInvariants triple_invariants(const CWitness& w1, const CWitness& w2, const CWitness& w3)
{
    detail::require_o_witnesses({&w1, &w2, &w3});
    Mat j1 = realize(w1), j2 = realize(w2), j3 = realize(w3);
    TripleInvariants t;
    t.c12 = detail::collinear(j1 * j2 * j1, j1, "J1 J2 J1");
    t.c13 = detail::collinear(j1 * j3 * j1, j1, "J1 J3 J1");
    t.c23 = detail::collinear(j2 * j3 * j2, j2, "J2 J3 J2");
    // The symmetric partners must give the same constants.
    if (!(detail::collinear(j2 * j1 * j2, j2, "J2 J1 J2") == t.c12) ||
        !(detail::collinear(j3 * j1 * j3, j3, "J3 J1 J3") == t.c13) ||
        !(detail::collinear(j3 * j2 * j3, j3, "J3 J2 J3") == t.c23))
        fail(ErrorKind::Verification, "relation constants are not symmetric");
    Mat j23 = j2 * j3, j32 = j3 * j2;
    Mat inner = j23 * j1 * j23 + j32 * j1 * j32;
    t.c = detail::collinear(j1 * inner * j1, j1, "J1 (J2J3J1J2J3 + J3J2J1J3J2) J1");
    t.annihilator = triple_annihilator(t.c12, t.c13, t.c23, t.c);
    if (!t.annihilator.eval_matrix(j1 + j2 + j3).is_zero())
        fail(ErrorKind::Verification, "tp(t) does not annihilate J1 + J2 + J3");
    return t;
}

// ---------------------------------------------------------------------------
// Membership tests in o_n

namespace detail {

inline AlgebraId require_o_member(const Mat& a, const char* what)
{
    if (!a.square()) fail(ErrorKind::SizeMismatch, what);
    AlgebraId alg{Family::O, a.rows()};
    if (alg.n < 7) fail(ErrorKind::Range, std::string(what) + " needs n >= 7");
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, std::string(what) + ": matrix is not in o_n");
    return alg;
}

// Orthogonal nilpotent orbits: even parts with even multiplicity.
inline std::vector<Partition> orthogonal_partitions(int n)
{
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left, int maxp) -> void {
        if (left == 0) {
            Partition p(cur);
            try {
                validate_orbit(p, static_cast<std::size_t>(n));
                out.push_back(p);
            } catch (const Error&) {
            }
            return;
        }
        for (int x = std::min(left, maxp); x >= 1; --x) {
            cur.push_back(x);
            self(self, left - x, x);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

// A^7 = alpha A^5 + beta A^3 + gamma A with beta = -alpha^2 / 4 for some
// alpha, beta, gamma over the algebraic closure.
inline bool has_septic_relation(const Mat& a)
{
    std::size_t n = a.rows();
    Mat a2 = a * a, a3 = a2 * a, a5 = a3 * a2, a7 = a5 * a2;
    Mat m(n * n, 3);
    Vec<Scalar> rhs(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        m(i, 0) = a5.entries()[i];
        m(i, 1) = a3.entries()[i];
        m(i, 2) = a.entries()[i];
        rhs[i] = a7.entries()[i];
    }
    auto x = solve_linear(m, rhs);
    if (!x) return false;
    // Along any solution line that moves alpha or beta the constraint is a
    // non-constant polynomial of degree <= 2, which has a root.
    for (const auto& k : kernel_basis(m))
        if (!k[0].is_zero() || !k[1].is_zero()) return true;
    return Scalar(4) * (*x)[1] + (*x)[0] * (*x)[0] == Scalar(0);
}

// chi(t) = t^(n-6) (t^6 - s1 t^4 + s2 t^2 - s3) with 4 s2 = s1^2, the shape
// of t^(n-6) (t^2 - a^2)(t^2 - b^2)(t^2 - (a+b)^2).
inline bool has_triple_char_poly(const Mat& a)
{
    std::size_t n = a.rows();
    auto chi = char_poly(a);
    for (std::size_t k = 0; k + 6 < n; ++k)
        if (!chi.coeff(k).is_zero()) return false;
    Scalar s1 = -chi.coeff(n - 2), s2 = chi.coeff(n - 4);
    return Scalar(4) * s2 == s1 * s1;
}

inline bool is_partition_pattern(const Partition& p, std::vector<int> head)
{
    std::size_t i = 0;
    for (; i < head.size(); ++i)
        if (i >= p.parts.size() || p.parts[i] != head[i]) return false;
    for (; i < p.parts.size(); ++i)
        if (p.parts[i] != 1) return false;
    return true;
}

}  // namespace detail

/// Membership in closure(2C) for A in o_n, n >= 7: A = 0, or A^3 = 0 with
/// rank <= 4, or A^3 = lambda A with lambda != 0 and rank 4.
inline MembershipStatus closure2C_test(const Mat& a)
{
    detail::require_o_member(a, "closure2C_test");
    if (a.is_zero()) return status_in("zero matrix");
    std::size_t r = rank(a);
    Mat a3 = a * a * a;
    auto lambda = proportionality(a3, a);
    if (!lambda) return status_out("no relation A^3 = lambda A", "A^3 not proportional to A");
    if (lambda->is_zero()) {
        if (r <= 4) return status_in("nilpotent, A^3 = 0, rank <= 4");
        return status_out("nilpotent of rank above 4", "rank(A) = " + std::to_string(r));
    }
    if (r == 4) return status_in("semisimple, A^3 = lambda A, rank 4");
    return status_out("semisimple with A^3 = lambda A but rank " + std::to_string(r), "rank(A) = " + std::to_string(r));
}

/// Membership in 2C itself: closure(2C) minus the orbit O[3,2,2,1^(n-7)].
inline MembershipStatus membership_2C(const Mat& a)
{
    MembershipStatus s = closure2C_test(a);
    if (!s.in() || a.is_zero()) return s;
    if (!is_nilpotent(a)) return s;
    Partition p = nilpotent_partition(a);
    if (detail::is_partition_pattern(p, {3, 2, 2}))
        return status_out("orbit O[3,2,2,1^(n-7)]: rank 4 with rank(A^2) odd", "rank(A^2) = 1");
    return status_in("nilpotent of type " + p.to_string() + " in closure(2C)");
}

/// Necessary conditions for closure(3C): rank <= 6, an annihilating
/// polynomial t (t^3 + p t)^2 - q^2 t, and a characteristic polynomial
/// t^(n-6) (t^2 - a^2)(t^2 - b^2)(t^2 - (a+b)^2).  Semisimple elements
/// passing them lie in 3C; nilpotent ones are decided by orbit dominance
/// where a recipe is known; everything else is UNKNOWN.
inline MembershipStatus closure3C_test(const Mat& a)
{
    detail::require_o_member(a, "closure3C_test");
    if (a.is_zero()) return status_in("zero matrix");
    std::size_t r = rank(a);
    if (r > 6) return status_out("rank above 6", "rank(A) = " + std::to_string(r));
    if (!detail::has_septic_relation(a))
        return status_out("no annihilator t(t^3 + p t)^2 - q^2 t", "A^7 not in the required span of A^5, A^3, A");
    if (!detail::has_triple_char_poly(a))
        return status_out("characteristic polynomial not of the form t^(n-6)(t^2-a^2)(t^2-b^2)(t^2-(a+b)^2)",
                          "char poly " + char_poly(a).to_string());
    if (is_semisimple(a)) return status_in("semisimple with eigenvalues 0, +-a, +-b, +-(a+b)");
    if (is_nilpotent(a)) {
        Partition p = nilpotent_partition(a);
        for (const auto& q : detail::orthogonal_partitions(static_cast<int>(a.rows()))) {
            if (nilpotent_recipe_count(q) > 3 || !dominance_leq(p, q)) continue;
            return status_in("nilpotent " + p.to_string() + " in the closure of O" + q.to_string() + " within 3C");
        }
        return status_unknown("nilpotent orbit " + p.to_string() + " not known to lie in closure(3C)");
    }
    return status_unknown("neither semisimple nor nilpotent");
}

/// T_k: rank 2k, semisimple, 2k distinct non-zero eigenvalues.
inline bool in_Tk(const Mat& a, int k)
{
    if (k < 0) fail(ErrorKind::Range, "k must be non-negative");
    if (!a.square() || !is_member(AlgebraId{Family::O, a.rows()}, a)) fail(ErrorKind::NotMember, "in_Tk needs A in o_n");
    if (rank(a) != static_cast<std::size_t>(2 * k)) return false;
    if (k == 0) return true;
    auto m = min_poly(a);
    if (poly_gcd(m, m.derivative()).degree() != 0) return false;
    return m.degree() == 2 * k + 1;
}

// ---------------------------------------------------------------------------
// Nilpotent orbits

struct KBounds {
    int lower = 0;
    int upper = 0;
    Certificate certificate;  // for the orbit representative, `upper` summands
};

/// Bounds on the smallest k with O[d] in kC.  The upper bound comes with the
/// block recipe certificate; the lower bound is rank/2, raised by one for
/// [3,1..], [3,2,2,1..] and [5,1..].
inline KBounds nilpotent_k_bounds(const Partition& p, std::size_t n)
{
    validate_orbit(p, n);
    KBounds b;
    b.certificate = decompose_nilpotent(p, n);
    b.upper = static_cast<int>(b.certificate.summands.size());
    b.lower = p.nilpotent_rank() / 2;
    if (detail::is_partition_pattern(p, {3}))
        b.lower = 2;
    else if (detail::is_partition_pattern(p, {3, 2, 2}) || detail::is_partition_pattern(p, {5}))
        b.lower = 3;
    if (b.lower > b.upper) fail(ErrorKind::Verification, "nilpotent bounds are inverted");
    return b;
}

// ---------------------------------------------------------------------------
// Stratum reports

struct KRange {
    int lo = 0;
    int hi = 0;
    bool exact() const { return lo == hi; }
};

struct StratumRow {
    int k = 0;
    MembershipStatus exact;    // A in kC
    MembershipStatus closure;  // A in closure(kC)
};

struct StratumReport {
    AlgebraId algebra;
    std::size_t rank = 0;
    std::string type;  // zero, semisimple, nilpotent or mixed
    std::vector<StratumRow> rows;
    KRange min_k_closure;
    KRange min_k_exact;
};

struct ReportOptions {
    bool decompose = true;  // run decompose for an upper bound with a certificate
    SearchOptions search;
};

namespace detail {

// IN is upward closed in k.
inline void propagate_in(std::vector<MembershipStatus>& col)
{
    for (std::size_t k = 1; k < col.size(); ++k)
        if (col[k - 1].in() && !col[k].in()) {
            MembershipStatus s = status_in("implied by k = " + std::to_string(k - 1));
            s.witness = col[k - 1].witness;
            col[k] = s;
        }
}

inline KRange min_range(const std::vector<MembershipStatus>& col)
{
    KRange r{-1, -1};
    for (std::size_t k = 0; k < col.size(); ++k) {
        if (r.lo < 0 && !col[k].out()) r.lo = static_cast<int>(k);
        if (r.hi < 0 && col[k].in()) r.hi = static_cast<int>(k);
    }
    if (r.hi < 0) r.hi = static_cast<int>(col.size());
    if (r.lo < 0) r.lo = r.hi;
    return r;
}

inline std::string element_type(const Mat& a)
{
    if (a.is_zero()) return "zero";
    if (is_nilpotent(a)) return "nilpotent";
    if (is_semisimple(a)) return "semisimple";
    return "mixed";
}

}  // namespace detail

inline StratumReport stratum_report(const AlgebraId& alg, const Mat& a, const ReportOptions& opts = {})
{
    alg.validate();
    if (!is_member(alg, a)) fail(ErrorKind::NotMember, "matrix is not in " + alg.name() + std::to_string(alg.n));
    StratumReport rep;
    rep.algebra = alg;
    rep.rank = rank(a);
    rep.type = detail::element_type(a);
    int r = static_cast<int>(rep.rank);
    std::vector<MembershipStatus> exact, closure;

    if (alg.family != Family::O) {
        // kC is closed and equals the rank <= k locus.
        std::optional<Certificate> cert;
        if (opts.decompose && r > 0) cert = decompose(alg, a, opts.search).certificate;
        for (int k = 0; k <= r; ++k) {
            MembershipStatus s = k < r ? status_out("rank exceeds k", "rank(A) = " + std::to_string(r))
                                       : status_in("rank at most k");
            if (s.in()) s.witness = cert;
            exact.push_back(s);
            closure.push_back(s);
        }
    } else {
        if (alg.n < 7) fail(ErrorKind::Range, "the orthogonal stratification needs n >= 7");
        int kmax = std::max(4, r / 2 + 3);
        bool zero = a.is_zero();
        bool extremal = !zero && is_extremal(alg, a);

        closure.push_back(zero ? status_in("zero matrix") : status_out("non-zero"));
        closure.push_back(zero || extremal ? status_in(zero ? "zero matrix" : "extremal")
                                           : status_out("not extremal", "rank(A) = " + std::to_string(r)));
        closure.push_back(closure2C_test(a));
        closure.push_back(closure3C_test(a));
        for (int k = 4; k <= kmax; ++k)
            closure.push_back(r <= 2 * k ? status_in("rank at most 2k")
                                         : status_out("rank exceeds 2k", "rank(A) = " + std::to_string(r)));
        detail::propagate_in(closure);

        // Upper bound on the exact k and where it came from.
        int upper = r / 2 + 3;
        MembershipStatus upper_status = status_in("rank/2 + 3 bound");
        int lower = (r + 1) / 2;
        auto improve = [&](int k, MembershipStatus s) {
            if (k < upper) {
                upper = k;
                upper_status = std::move(s);
            }
        };
        if (rep.type == "nilpotent") {
            Partition p = nilpotent_partition(a);
            KBounds b = nilpotent_k_bounds(p, alg.n);
            improve(b.upper, status_in("nilpotent orbit recipe for " + p.to_string()));
            lower = std::max(lower, b.lower);
        }
        if (rep.type == "semisimple" && closure[3].in()) improve(3, status_in("semisimple with eigenvalues 0, +-a, +-b, +-(a+b)"));
        if (opts.decompose && r > 0) {
            Decomposition d = decompose(alg, a, opts.search);
            MembershipStatus s = status_in("verified decomposition");
            int count = static_cast<int>(d.certificate.summands.size());
            s.witness = std::move(d.certificate);
            improve(count, s);
        }

        for (int k = 0; k <= kmax; ++k) {
            MembershipStatus s;
            if (k == 0)
                s = closure[0];
            else if (k == 1)
                s = closure[1];
            else if (k == 2)
                s = membership_2C(a);
            else if (closure[k].out())
                s = status_out("outside closure(kC)", closure[k].invariant);
            else if (k < lower)
                s = status_out("below the lower bound " + std::to_string(lower));
            else if (k >= upper)
                s = upper_status;
            else
                s = status_unknown("between bounds " + std::to_string(lower) + " and " + std::to_string(upper));
            if (k >= upper && !s.in()) s = upper_status;
            exact.push_back(s);
        }
        detail::propagate_in(exact);
    }

    for (std::size_t k = 0; k < exact.size(); ++k)
        rep.rows.push_back(StratumRow{static_cast<int>(k), exact[k], closure[k]});
    rep.min_k_closure = detail::min_range(closure);
    rep.min_k_exact = detail::min_range(exact);
    return rep;
}

}  // namespace secant
