#pragma once

// Exact arithmetic in towers of quadratic extensions of Q.
//
// A tower is a chain Q = K_0 < K_1 < ... < K_d with K_j = K_{j-1}(g_j) and
// g_j^2 = r_j for a radicand r_j in K_{j-1} that is not a square there.  An
// element of K_d is stored as 2^d rational coordinates; bit j-1 of a
// coordinate index says whether g_j occurs in the basis monomial.
//
// Towers are interned, so two scalars live in the same field exactly when
// their tower pointers agree.  Binary operations on scalars from different
// towers first move both operands into a common tower: if one tower is a
// prefix of the other the shorter one is padded, otherwise the generators of
// the second branch are mapped to square roots of their radicands inside the
// first branch (extending it where needed).

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace secant {

struct TowerNode;
using Tower = std::shared_ptr<const TowerNode>;
using Coords = std::vector<mpq_class>;

struct TowerNode {
    Tower parent;
    Coords radicand;  // coordinates in the parent tower
    int depth = 0;
    // radicand = radicand_num / radicand_den with integer coordinates
    std::vector<mpz_class> radicand_num;
    mpz_class radicand_den = 1;
};

namespace detail {

inline int depth_of(const TowerNode* t) { return t ? t->depth : 0; }
inline int depth_of(const Tower& t) { return depth_of(t.get()); }
inline std::size_t dim_of(const TowerNode* t) { return std::size_t(1) << depth_of(t); }
inline std::size_t dim_of(const Tower& t) { return dim_of(t.get()); }

inline bool all_zero(const Coords& a)
{
    for (const auto& x : a)
        if (sgn(x) != 0) return false;
    return true;
}

inline std::string key_of(const Coords& c)
{
    std::string k;
    for (const auto& x : c) {
        k += x.get_str();
        k += ',';
    }
    return k;
}

struct MergeResult {
    Tower tower;
    std::vector<Coords> images;  // images of the second branch's generators
};

struct Registry {
    std::mutex mutex;
    std::map<std::pair<const TowerNode*, std::string>, Tower> nodes;
    std::map<std::pair<const TowerNode*, const TowerNode*>, MergeResult> merges;
};

inline Registry& registry()
{
    static Registry r;
    return r;
}

inline Tower intern(const Tower& parent, const Coords& radicand)
{
    auto& reg = registry();
    std::lock_guard<std::mutex> lock(reg.mutex);
    auto key = std::make_pair(parent.get(), key_of(radicand));
    auto it = reg.nodes.find(key);
    if (it != reg.nodes.end()) return it->second;
    auto node = std::make_shared<TowerNode>();
    node->parent = parent;
    node->radicand = radicand;
    node->depth = depth_of(parent) + 1;
    for (const auto& c : radicand) mpz_lcm(node->radicand_den.get_mpz_t(), node->radicand_den.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& c : radicand) node->radicand_num.push_back(mpz_class(c * node->radicand_den));
    Tower t = node;
    reg.nodes.emplace(key, t);
    return t;
}

inline Coords lift(const Coords& a, std::size_t dim)
{
    Coords r(dim);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    return r;
}

inline Coords add(const Coords& a, const Coords& b)
{
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Coords sub(const Coords& a, const Coords& b)
{
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Coords neg(const Coords& a)
{
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline Coords scale(const Coords& a, const mpq_class& s)
{
    Coords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

inline std::pair<Coords, Coords> halves(const Coords& a)
{
    std::size_t h = a.size() / 2;
    return {Coords(a.begin(), a.begin() + h), Coords(a.begin() + h, a.end())};
}

inline Coords concat(Coords lo, const Coords& hi)
{
    lo.insert(lo.end(), hi.begin(), hi.end());
    return lo;
}

// Products run on integer numerators over one common denominator, so GMP
// only reduces fractions once per product instead of once per coordinate
// operation.
using ZCoords = std::vector<mpz_class>;

struct ZElem {
    ZCoords num;
    mpz_class den;  // value = num / den
};

inline bool all_zero(const ZCoords& a)
{
    for (const auto& x : a)
        if (sgn(x) != 0) return false;
    return true;
}

inline std::pair<ZCoords, ZCoords> halves(const ZCoords& a)
{
    std::size_t h = a.size() / 2;
    return {ZCoords(a.begin(), a.begin() + h), ZCoords(a.begin() + h, a.end())};
}

inline ZCoords zadd(const ZCoords& a, const ZCoords& b)
{
    ZCoords r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// sum of sign_i * term_i over a common denominator
inline ZElem zcombine(const std::vector<std::pair<int, const ZElem*>>& terms)
{
    mpz_class den = 1;
    for (const auto& [sign, t] : terms) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t->den.get_mpz_t());
    ZElem r{ZCoords(terms[0].second->num.size()), den};
    for (const auto& [sign, t] : terms) {
        mpz_class k = den / t->den;
        for (std::size_t i = 0; i < r.num.size(); ++i) {
            if (sign > 0)
                r.num[i] += k * t->num[i];
            else
                r.num[i] -= k * t->num[i];
        }
    }
    return r;
}

inline ZElem concat(const ZElem& lo, const ZElem& hi)
{
    mpz_class den = lo.den;
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), hi.den.get_mpz_t());
    ZElem r{ZCoords(), den};
    mpz_class kl = den / lo.den, kh = den / hi.den;
    for (const auto& x : lo.num) r.num.push_back(kl * x);
    for (const auto& x : hi.num) r.num.push_back(kh * x);
    return r;
}

inline ZElem zmul(const ZCoords& a, const ZCoords& b, const TowerNode* t)
{
    if (!t) return {{a[0] * b[0]}, 1};
    const TowerNode* p = t->parent.get();
    auto [a0, a1] = halves(a);
    auto [b0, b1] = halves(b);
    bool za1 = all_zero(a1), zb1 = all_zero(b1);
    if (za1 && zb1) return concat(zmul(a0, b0, p), ZElem{ZCoords(a0.size()), 1});
    if (za1) return concat(zmul(a0, b0, p), zmul(a0, b1, p));
    if (zb1) return concat(zmul(a0, b0, p), zmul(a1, b0, p));
    // Karatsuba: a0 b1 + a1 b0 = (a0 + a1)(b0 + b1) - a0 b0 - a1 b1.
    ZElem p00 = zmul(a0, b0, p), p11 = zmul(a1, b1, p);
    ZElem mid = zmul(zadd(a0, a1), zadd(b0, b1), p);
    ZElem hi = zcombine({{1, &mid}, {-1, &p00}, {-1, &p11}});
    ZElem rad = zmul(p11.num, t->radicand_num, p);
    rad.den *= p11.den * t->radicand_den;
    ZElem lo = zcombine({{1, &p00}, {1, &rad}});
    return concat(lo, hi);
}

inline ZElem to_z(const Coords& a)
{
    mpz_class den = 1;
    for (const auto& c : a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    ZElem r{ZCoords(), den};
    for (const auto& c : a) r.num.push_back(c.get_num() * (den / c.get_den()));
    return r;
}

inline Coords mul(const Coords& a, const Coords& b, const TowerNode* t)
{
    if (!t) return {a[0] * b[0]};
    ZElem za = to_z(a), zb = to_z(b);
    ZElem r = zmul(za.num, zb.num, t);
    mpz_class den = r.den * za.den * zb.den;
    Coords out(r.num.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = mpq_class(r.num[i], den);
        out[i].canonicalize();
    }
    return out;
}

inline Coords inverse(const Coords& a, const TowerNode* t)
{
    if (!t) {
        if (sgn(a[0]) == 0) fail(ErrorKind::DivisionByZero, "inverse of zero");
        return {1 / a[0]};
    }
    const TowerNode* p = t->parent.get();
    auto [a0, a1] = halves(a);
    if (all_zero(a1)) return concat(inverse(a0, p), Coords(a0.size()));
    Coords norm = sub(mul(a0, a0, p), mul(mul(a1, a1, p), t->radicand, p));
    Coords ni = inverse(norm, p);
    return concat(mul(a0, ni, p), neg(mul(a1, ni, p)));
}

inline std::optional<mpq_class> rational_sqrt(const mpq_class& q)
{
    if (sgn(q) < 0) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    return mpq_class(n, d);
}

// A square root inside the given tower, without extending it.
inline std::optional<Coords> try_sqrt(const Coords& x, const TowerNode* t)
{
    if (!t) {
        auto r = rational_sqrt(x[0]);
        if (!r) return std::nullopt;
        return Coords{*r};
    }
    const TowerNode* p = t->parent.get();
    auto [a, b] = halves(x);
    Coords zero(a.size());
    if (all_zero(b)) {
        if (auto s = try_sqrt(a, p)) return concat(*s, zero);
        Coords q = mul(a, inverse(t->radicand, p), p);
        if (auto s = try_sqrt(q, p)) return concat(zero, *s);
        return std::nullopt;
    }
    Coords norm = sub(mul(a, a, p), mul(mul(b, b, p), t->radicand, p));
    auto s = try_sqrt(norm, p);
    if (!s) return std::nullopt;
    for (int sign : {1, -1}) {
        Coords h = scale(sign > 0 ? add(a, *s) : sub(a, *s), mpq_class(1, 2));
        auto pr = try_sqrt(h, p);
        if (!pr || all_zero(*pr)) continue;
        Coords q = mul(scale(b, mpq_class(1, 2)), inverse(*pr, p), p);
        Coords cand = concat(*pr, q);
        if (mul(cand, cand, t) == x) return cand;
    }
    return std::nullopt;
}

// Canonical branch: the first non-zero coordinate is positive.
inline Coords canonical_root(Coords r)
{
    for (const auto& c : r) {
        if (sgn(c) == 0) continue;
        if (sgn(c) < 0) r = neg(r);
        break;
    }
    return r;
}

// Writes m = f * k^2 with f squarefree (up to a large cofactor that is not a
// perfect square and has no small prime factor).
inline void squarefree_split(const mpz_class& m, mpz_class& f, mpz_class& k)
{
    mpz_class rest = abs(m);
    f = sgn(m) < 0 ? -1 : 1;
    k = 1;
    for (unsigned long p = 2; p < 20000; ++p) {
        mpz_class pp = mpz_class(p) * p;
        if (pp > rest) break;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                k *= p;
            } else {
                f *= p;
            }
        }
    }
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
        k *= r;
    } else {
        f *= rest;
    }
}

inline bool is_rational_coords(const Coords& x)
{
    for (std::size_t i = 1; i < x.size(); ++i)
        if (sgn(x[i]) != 0) return false;
    return true;
}

// Square root of x in tower t, extending t by one generator when necessary.
inline std::pair<Tower, Coords> sqrt_in(const Coords& x, const Tower& t)
{
    if (auto r = try_sqrt(x, t.get())) return {t, canonical_root(*r)};
    Coords rad(x.size());
    mpq_class factor;
    if (is_rational_coords(x)) {
        mpz_class m = x[0].get_num() * x[0].get_den();
        mpz_class f, k;
        squarefree_split(m, f, k);
        rad[0] = mpq_class(f);
        factor = mpq_class(k, x[0].get_den());
        factor.canonicalize();
    } else {
        mpz_class l = 1;
        for (const auto& c : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
        rad = scale(x, mpq_class(l * l));
        factor = mpq_class(1, l);
    }
    Tower nt = intern(t, rad);
    Coords root(dim_of(nt));
    root[dim_of(t)] = factor;
    return {nt, root};
}

inline bool is_prefix(const Tower& a, const Tower& b)
{
    const TowerNode* n = b.get();
    while (depth_of(n) > depth_of(a)) n = n->parent.get();
    return n == a.get();
}

inline const TowerNode* common_ancestor(const TowerNode* a, const TowerNode* b)
{
    while (depth_of(a) > depth_of(b)) a = a->parent.get();
    while (depth_of(b) > depth_of(a)) b = b->parent.get();
    while (a != b) {
        a = a->parent.get();
        b = b->parent.get();
    }
    return a;
}

// Evaluates coordinates living at `level` (a descendant of `base`) in tower
// `target`, given images of the generators above `base`.
inline Coords eval_in(const Coords& x, const TowerNode* level, const TowerNode* base,
                      const std::vector<Coords>& images, const Tower& target)
{
    if (level == base) return lift(x, dim_of(target));
    auto [lo, hi] = halves(x);
    const TowerNode* p = level->parent.get();
    Coords rlo = eval_in(lo, p, base, images, target);
    if (all_zero(hi)) return rlo;
    Coords rhi = eval_in(hi, p, base, images, target);
    const Coords& g = images[level->depth - depth_of(base) - 1];
    return add(rlo, mul(rhi, g, target.get()));
}

inline MergeResult merge(const Tower& a, const Tower& b)
{
    auto& reg = registry();
    {
        std::lock_guard<std::mutex> lock(reg.mutex);
        auto it = reg.merges.find({a.get(), b.get()});
        if (it != reg.merges.end()) return it->second;
    }
    const TowerNode* base = common_ancestor(a.get(), b.get());
    std::vector<const TowerNode*> chain;
    for (const TowerNode* n = b.get(); n != base; n = n->parent.get()) chain.insert(chain.begin(), n);
    MergeResult res{a, {}};
    for (const TowerNode* node : chain) {
        Coords r = eval_in(node->radicand, node->parent.get(), base, res.images, res.tower);
        auto [nt, root] = sqrt_in(r, res.tower);
        if (nt != res.tower) {
            for (auto& im : res.images) im = lift(im, dim_of(nt));
            res.tower = nt;
        }
        res.images.push_back(root);
    }
    std::lock_guard<std::mutex> lock(reg.mutex);
    reg.merges.emplace(std::make_pair(a.get(), b.get()), res);
    return res;
}

}  // namespace detail

class Scalar {
public:
    Scalar() : coords_{mpq_class(0)} {}
    Scalar(int v) : coords_{mpq_class(v)} {}
    Scalar(long v) : coords_{mpq_class(v)} {}
    Scalar(const mpq_class& q) : coords_{q} { coords_[0].canonicalize(); }
    Scalar(Tower t, Coords c) : tower_(std::move(t)), coords_(std::move(c))
    {
        if (coords_.size() != detail::dim_of(tower_)) fail(ErrorKind::SizeMismatch, "scalar coordinates");
    }

    static Scalar rational(long num, long den = 1)
    {
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }

    const Tower& tower() const { return tower_; }
    const Coords& coords() const { return coords_; }
    int depth() const { return detail::depth_of(tower_); }

    bool is_zero() const { return detail::all_zero(coords_); }
    bool is_rational() const { return detail::is_rational_coords(coords_); }
    mpq_class to_rational() const
    {
        if (!is_rational()) fail(ErrorKind::Precondition, "scalar is not rational");
        return coords_[0];
    }

    // Largest bit size of a numerator plus denominator among the coordinates.
    std::size_t height_bits() const
    {
        std::size_t h = 0;
        for (const auto& c : coords_) {
            std::size_t b = mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2);
            if (b > h) h = b;
        }
        return h;
    }

    // Same value inside an extension tower of this scalar's tower.
    Scalar lifted(const Tower& t) const
    {
        if (t == tower_) return *this;
        if (detail::is_prefix(tower_, t)) return Scalar(t, detail::lift(coords_, detail::dim_of(t)));
        Scalar a(t, Coords(detail::dim_of(t)));
        Scalar b = *this;
        unify(a, b);
        if (a.tower() != t) fail(ErrorKind::Precondition, "tower is not an extension");
        return b;
    }

    // Moves both operands into a common tower.
    static void unify(Scalar& x, Scalar& y)
    {
        if (x.tower_ == y.tower_) return;
        if (detail::is_prefix(x.tower_, y.tower_)) {
            x = Scalar(y.tower_, detail::lift(x.coords_, y.coords_.size()));
            return;
        }
        if (detail::is_prefix(y.tower_, x.tower_)) {
            y = Scalar(x.tower_, detail::lift(y.coords_, x.coords_.size()));
            return;
        }
        auto m = detail::merge(x.tower_, y.tower_);
        const TowerNode* base = detail::common_ancestor(x.tower_.get(), y.tower_.get());
        Coords yc = detail::eval_in(y.coords_, y.tower_.get(), base, m.images, m.tower);
        x = Scalar(m.tower, detail::lift(x.coords_, detail::dim_of(m.tower)));
        y = Scalar(m.tower, std::move(yc));
    }

    Scalar operator-() const { return Scalar(tower_, detail::neg(coords_)); }

    Scalar inverse() const { return Scalar(tower_, detail::inverse(coords_, tower_.get())); }

    friend Scalar operator+(Scalar a, Scalar b)
    {
        if (!a.tower_ && !b.tower_) return Scalar(a.coords_[0] + b.coords_[0]);
        unify(a, b);
        return Scalar(a.tower_, detail::add(a.coords_, b.coords_));
    }
    friend Scalar operator-(Scalar a, Scalar b)
    {
        if (!a.tower_ && !b.tower_) return Scalar(a.coords_[0] - b.coords_[0]);
        unify(a, b);
        return Scalar(a.tower_, detail::sub(a.coords_, b.coords_));
    }
    friend Scalar operator*(Scalar a, Scalar b)
    {
        if (!a.tower_ && !b.tower_) return Scalar(a.coords_[0] * b.coords_[0]);
        if (b.is_rational()) return Scalar(a.tower_, detail::scale(a.coords_, b.coords_[0])).lifted_max(b);
        if (a.is_rational()) return Scalar(b.tower_, detail::scale(b.coords_, a.coords_[0])).lifted_max(a);
        unify(a, b);
        return Scalar(a.tower_, detail::mul(a.coords_, b.coords_, a.tower_.get()));
    }
    friend Scalar operator/(Scalar a, Scalar b)
    {
        if (b.is_zero()) fail(ErrorKind::DivisionByZero, "scalar division");
        if (b.is_rational()) {
            mpq_class inv = 1 / b.coords_[0];
            return Scalar(a.tower_, detail::scale(a.coords_, inv)).lifted_max(b);
        }
        unify(a, b);
        return Scalar(a.tower_, detail::mul(a.coords_, detail::inverse(b.coords_, b.tower_.get()), a.tower_.get()));
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    friend bool operator==(Scalar a, Scalar b)
    {
        if (a.tower_ == b.tower_) return a.coords_ == b.coords_;
        unify(a, b);
        return a.coords_ == b.coords_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    // Keeps the deeper of two towers when one scalar is a rational multiple.
    Scalar lifted_max(const Scalar& other) const
    {
        if (other.tower_ == tower_ || !other.tower_) return *this;
        Scalar a = *this, b = other;
        unify(a, b);
        return a;
    }

    Tower tower_;
    Coords coords_;
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }
inline bool is_zero(const mpq_class& q) { return sgn(q) == 0; }

// The top generator of a non-trivial tower.
inline Scalar generator(const Tower& t)
{
    if (!t) fail(ErrorKind::Precondition, "rational field has no generator");
    Coords c(detail::dim_of(t));
    c[c.size() / 2] = 1;
    return Scalar(t, c);
}

// A square root in the scalar's own tower, if one exists there.
inline std::optional<Scalar> try_sqrt(const Scalar& s)
{
    auto r = detail::try_sqrt(s.coords(), s.tower().get());
    if (!r) return std::nullopt;
    return Scalar(s.tower(), detail::canonical_root(*r));
}

// Total square root; extends the tower by one generator when needed.
inline Scalar sqrt(const Scalar& s)
{
    auto [t, r] = detail::sqrt_in(s.coords(), s.tower());
    return Scalar(t, r);
}

inline Scalar imag_unit() { return sqrt(Scalar(-1)); }

// ---------------------------------------------------------------------------
// Text form.  Terms are listed by increasing basis index; a basis monomial is
// the product of its generators in tower order, each printed as "i" (radicand
// -1) or "sqrt(<radicand>)".

std::string to_string(const Scalar& s);

namespace detail {

inline std::string generator_name(const TowerNode* node)
{
    if (is_rational_coords(node->radicand) && node->radicand[0] == -1) return "i";
    return "sqrt(" + to_string(Scalar(node->parent, node->radicand)) + ")";
}

}  // namespace detail

inline std::string to_string(const Scalar& s)
{
    const Coords& c = s.coords();
    std::vector<const TowerNode*> nodes;
    for (const TowerNode* n = s.tower().get(); n; n = n->parent.get()) nodes.insert(nodes.begin(), n);
    std::string out;
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
        if (sgn(c[idx]) == 0) continue;
        std::string mono;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (!(idx >> j & 1u)) continue;
            if (!mono.empty()) mono += '*';
            mono += detail::generator_name(nodes[j]);
        }
        std::string term;
        if (mono.empty())
            term = c[idx].get_str();
        else if (c[idx] == 1)
            term = mono;
        else if (c[idx] == -1)
            term = "-" + mono;
        else
            term = c[idx].get_str() + "*" + mono;
        if (!out.empty() && term[0] != '-') out += '+';
        out += term;
    }
    return out.empty() ? "0" : out;
}

namespace detail {

class ScalarParser {
public:
    explicit ScalarParser(std::string_view text) : s_(text) {}

    Scalar parse()
    {
        Scalar v = expr();
        if (pos_ != s_.size()) error("unexpected character");
        return v;
    }

private:
    [[noreturn]] void error(const std::string& msg) const
    {
        fail(ErrorKind::Parse, msg + " at position " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    Scalar expr()
    {
        Scalar v;
        bool first = true;
        for (;;) {
            bool negate = false;
            if (peek('-')) {
                negate = true;
                ++pos_;
            } else if (peek('+')) {
                if (first) error("leading '+'");
                ++pos_;
            } else if (!first) {
                break;
            }
            Scalar t = term();
            v = negate ? v - t : v + t;
            first = false;
        }
        return v;
    }

    Scalar term()
    {
        Scalar v = factor();
        while (peek('*')) {
            ++pos_;
            v = v * factor();
        }
        return v;
    }

    mpz_class integer()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
        if (start == pos_) error("expected digits");
        return mpz_class(std::string(s_.substr(start, pos_ - start)));
    }

    Scalar factor()
    {
        if (peek('i')) {
            ++pos_;
            return imag_unit();
        }
        if (s_.substr(pos_, 5) == "sqrt(") {
            pos_ += 5;
            Scalar inner = expr();
            if (!peek(')')) error("expected ')'");
            ++pos_;
            return sqrt(inner);
        }
        mpz_class num = integer();
        mpz_class den = 1;
        if (peek('/')) {
            ++pos_;
            den = integer();
            if (den == 0) fail(ErrorKind::DivisionByZero, "zero denominator at position " + std::to_string(pos_));
        }
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Scalar parse_scalar(std::string_view text) { return detail::ScalarParser(text).parse(); }

inline std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << to_string(x); }

}  // namespace secant
