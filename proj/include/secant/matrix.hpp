#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace secant {

inline std::string to_string(const mpq_class& q) { return q.get_str(); }

template <class F>
using Vec = std::vector<F>;

template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, F(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<F>>& rows)
    {
        std::size_t c = rows.empty() ? 0 : rows[0].size();
        Matrix m(rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) fail(ErrorKind::SizeMismatch, "ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix from_columns(const std::vector<Vec<F>>& cols, std::size_t n)
    {
        Matrix m(n, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    // Row-major storage.
    Vec<F>& entries() { return a_; }
    const Vec<F>& entries() const { return a_; }

    Vec<F> row(std::size_t i) const { return Vec<F>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
    Vec<F> col(std::size_t j) const
    {
        Vec<F> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const
    {
        for (const auto& x : a_)
            if (!secant::is_zero(x)) return false;
        return true;
    }

    F trace() const
    {
        F t(0);
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        check_same(a, b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] + b.a_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        check_same(a, b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
        return r;
    }
    Matrix operator-() const
    {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) fail(ErrorKind::SizeMismatch, "matrix product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const F& x = a(i, k);
                if (secant::is_zero(x)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!secant::is_zero(b(k, j))) r(i, j) += x * b(k, j);
            }
        return r;
    }
    friend Matrix operator*(const F& s, const Matrix& a)
    {
        Matrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = s * a.a_[k];
        return r;
    }
    friend Vec<F> operator*(const Matrix& a, const Vec<F>& v)
    {
        if (a.cols_ != v.size()) fail(ErrorKind::SizeMismatch, "matrix-vector product");
        Vec<F> r(a.rows_, F(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                if (!secant::is_zero(a(i, j)) && !secant::is_zero(v[j])) r[i] += a(i, j) * v[j];
        return r;
    }
    Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
    Matrix& operator-=(const Matrix& o) { return *this = *this - o; }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t k = 0; k < a.a_.size(); ++k)
            if (!(a.a_[k] == b.a_[k])) return false;
        return true;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix pow(unsigned k) const
    {
        Matrix r = identity(rows_);
        for (unsigned i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    template <class G, class Fn>
    Matrix<G> map(Fn fn) const
    {
        Matrix<G> r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = fn((*this)(i, j));
        return r;
    }

private:
    static void check_same(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::SizeMismatch, "matrix sum");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F> a_;
};

using Mat = Matrix<Scalar>;
using QMat = Matrix<mpq_class>;

template <class F>
std::string to_string(const Matrix<F>& m)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << '[';
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << to_string(m(i, j));
        os << "]\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Vectors

template <class F>
Vec<F> unit_vector(std::size_t n, std::size_t i)
{
    Vec<F> v(n, F(0));
    v[i] = F(1);
    return v;
}

template <class F>
bool is_zero_vec(const Vec<F>& v)
{
    for (const auto& x : v)
        if (!is_zero(x)) return false;
    return true;
}

template <class F>
F dot(const Vec<F>& a, const Vec<F>& b)
{
    if (a.size() != b.size()) fail(ErrorKind::SizeMismatch, "dot product");
    F s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!is_zero(a[i]) && !is_zero(b[i])) s += a[i] * b[i];
    return s;
}

template <class F>
Vec<F> add(const Vec<F>& a, const Vec<F>& b)
{
    Vec<F> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

template <class F>
Vec<F> sub(const Vec<F>& a, const Vec<F>& b)
{
    Vec<F> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

template <class F>
Vec<F> scale(const F& s, const Vec<F>& a)
{
    Vec<F> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

// y * eta^T
template <class F>
Matrix<F> outer(const Vec<F>& y, const Vec<F>& eta)
{
    Matrix<F> m(y.size(), eta.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (is_zero(y[i])) continue;
        for (std::size_t j = 0; j < eta.size(); ++j)
            if (!is_zero(eta[j])) m(i, j) = y[i] * eta[j];
    }
    return m;
}

template <class F>
Matrix<F> commutator(const Matrix<F>& x, const Matrix<F>& y)
{
    return x * y - y * x;
}

inline Vec<mpq_class> to_rational(const Vec<Scalar>& v)
{
    Vec<mpq_class> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].to_rational();
    return r;
}

inline Vec<Scalar> to_scalar(const Vec<mpq_class>& v) { return Vec<Scalar>(v.begin(), v.end()); }

inline QMat to_rational(const Mat& m)
{
    return m.map<mpq_class>([](const Scalar& s) { return s.to_rational(); });
}

inline Mat to_scalar(const QMat& m)
{
    return m.map<Scalar>([](const mpq_class& q) { return Scalar(q); });
}

// Lifts the irrational entries into one tower containing all of them, so
// later arithmetic never has to merge towers entry by entry.
template <class F>
Matrix<F> on_common_tower(const Matrix<F>& m)
{
    if constexpr (!std::is_same_v<F, Scalar>) {
        return m;
    } else {
        Scalar acc;
        bool mixed = false;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const Scalar& x = m(i, j);
                if (x.is_rational() || x.tower() == acc.tower()) continue;
                if (!acc.is_zero()) mixed = true;
                Scalar t = x;
                if (acc.is_zero())
                    acc = t;
                else
                    Scalar::unify(acc, t);
            }
        if (!mixed) return m;
        return m.template map<Scalar>([&](const Scalar& x) { return x.is_rational() ? x : x.lifted(acc.tower()); });
    }
}

// ---------------------------------------------------------------------------
// Elimination

template <class F>
struct Echelon {
    Matrix<F> reduced;                // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column of each non-zero row
};

// Reduced row echelon form.  The pivot in each column is the first non-zero
// entry at or below the current row.
template <class F>
Echelon<F> rref(Matrix<F> a)
{
    a = on_common_tower(a);
    Echelon<F> e;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && is_zero(a(p, c))) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        F inv = F(1) / a(r, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(r, j) = a(r, j) * inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || is_zero(a(i, c))) continue;
            F f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                if (!is_zero(a(r, j))) a(i, j) -= f * a(r, j);
        }
        e.pivots.push_back(c);
        ++r;
    }
    e.reduced = std::move(a);
    return e;
}

template <class F>
std::size_t rank_division_free(Matrix<F> a);

// Over towers of depth >= 2 pivot inverses dominate, so elimination switches
// to cross-multiplication there.
template <class F>
std::size_t rank(const Matrix<F>& a)
{
    if constexpr (std::is_same_v<F, Scalar>) {
        for (const auto& x : a.entries())
            if (x.depth() >= 2) return rank_division_free(a);
    }
    return rref(a).pivots.size();
}

// Rescales v by a positive rational so that all coordinates become coprime
// integers, and returns that factor.
template <class F>
mpq_class make_primitive(Vec<F>& v)
{
    mpz_class den = 1, num = 0;
    auto visit = [&](const mpq_class& q) {
        if (q == 0) return;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), q.get_num_mpz_t());
    };
    for (const auto& x : v) {
        if constexpr (std::is_same_v<F, mpq_class>) visit(x);
        else for (const auto& c : x.coords()) visit(c);
    }
    if (num == 0 || (num == 1 && den == 1)) return mpq_class(1);
    mpq_class k(den, num);
    k.canonicalize();
    for (auto& x : v) x = x * F(k);
    return k;
}

// Rank by cross-multiplying rows instead of dividing by pivots.  Cheaper than
// rref over deep towers when the rank is small.
template <class F>
std::size_t rank_division_free(Matrix<F> a)
{
    a = on_common_tower(a);
    std::size_t r = 0, n = a.cols();
    for (std::size_t c = 0; c < n && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && is_zero(a(p, c))) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(r, j));
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (is_zero(a(i, c))) continue;
            Vec<F> row(n, F(0));
            for (std::size_t j = c + 1; j < n; ++j) row[j] = a(r, c) * a(i, j) - a(i, c) * a(r, j);
            make_primitive(row);
            for (std::size_t j = 0; j < n; ++j) a(i, j) = row[j];
        }
        ++r;
    }
    return r;
}

template <class F>
std::vector<Vec<F>> kernel_from_rref(const Echelon<F>& e, std::size_t cols)
{
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vec<F>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        Vec<F> v(cols, F(0));
        v[f] = F(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
        make_primitive(v);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class F>
std::vector<Vec<F>> kernel_basis(const Matrix<F>& a)
{
    return kernel_from_rref(rref(a), a.cols());
}

// Echelon basis of the column space (rows of rref(A^T)).
template <class F>
std::vector<Vec<F>> image_basis(const Matrix<F>& a)
{
    auto e = rref(a.transpose());
    std::vector<Vec<F>> basis;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        basis.push_back(e.reduced.row(r));
        make_primitive(basis.back());
    }
    return basis;
}

template <class F>
struct RankKernelImage {
    std::size_t rank = 0;
    std::vector<Vec<F>> kernel;
    std::vector<Vec<F>> image;
};

template <class F>
RankKernelImage<F> rank_kernel_image(const Matrix<F>& a)
{
    RankKernelImage<F> r;
    auto e = rref(a);
    r.rank = e.pivots.size();
    r.kernel = kernel_from_rref(e, a.cols());
    r.image = image_basis(a);
    return r;
}

// One solution of A x = b (free variables set to zero), if any.
template <class F>
std::optional<Vec<F>> solve_linear(const Matrix<F>& a, const Vec<F>& b)
{
    if (b.size() != a.rows()) fail(ErrorKind::SizeMismatch, "solve_linear");
    Matrix<F> aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
    Vec<F> x(a.cols(), F(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
    return x;
}

// Matrix whose columns are the given vectors.
template <class F>
Matrix<F> columns(const std::vector<Vec<F>>& vs, std::size_t n)
{
    return Matrix<F>::from_columns(vs, n);
}

template <class F>
std::size_t rank_of_vectors(const std::vector<Vec<F>>& vs, std::size_t n)
{
    if (vs.empty()) return 0;
    return rank(columns(vs, n));
}

template <class F>
bool in_span(const std::vector<Vec<F>>& vs, const Vec<F>& v)
{
    if (vs.empty()) return is_zero_vec(v);
    return solve_linear(columns(vs, v.size()), v).has_value();
}

// Incremental row echelon basis.  Rows are reduced against earlier rows in
// insertion order; every stored row has a unit pivot that later rows avoid.
template <class F>
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    std::size_t size() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }

    Vec<F> reduce(Vec<F> v) const
    {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const F& c = v[pivots_[k]];
            if (is_zero(c)) continue;
            F f = c;
            const Vec<F>& r = rows_[k];
            for (std::size_t j = 0; j < dim_; ++j)
                if (!is_zero(r[j])) v[j] -= f * r[j];
        }
        return v;
    }

    bool contains(const Vec<F>& v) const { return is_zero_vec(reduce(v)); }

    // Returns true when v enlarged the span.
    bool add(const Vec<F>& v)
    {
        Vec<F> r = reduce(v);
        std::size_t p = 0;
        while (p < dim_ && is_zero(r[p])) ++p;
        if (p == dim_) return false;
        F inv = F(1) / r[p];
        for (auto& x : r) x = x * inv;
        rows_.push_back(std::move(r));
        pivots_.push_back(p);
        return true;
    }

    const std::vector<Vec<F>>& rows() const { return rows_; }

private:
    std::size_t dim_;
    std::vector<Vec<F>> rows_;
    std::vector<std::size_t> pivots_;
};

// ---------------------------------------------------------------------------
// Polynomials

template <class F>
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<F> c) : c_(std::move(c)) { normalize(); }
    UniPoly(std::initializer_list<F> c) : c_(c) { normalize(); }

    static UniPoly monomial(std::size_t deg, const F& coeff = F(1))
    {
        std::vector<F> c(deg + 1, F(0));
        c[deg] = coeff;
        return UniPoly(std::move(c));
    }

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F(0); }
    const F& lead() const { return c_.back(); }

    UniPoly monic() const
    {
        if (is_zero()) return *this;
        UniPoly r = *this;
        F inv = F(1) / lead();
        for (auto& x : r.c_) x = x * inv;
        return r;
    }

    UniPoly derivative() const
    {
        std::vector<F> d;
        for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(F(static_cast<long>(k)) * c_[k]);
        return UniPoly(std::move(d));
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b)
    {
        std::vector<F> c(std::max(a.c_.size(), b.c_.size()), F(0));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
        return UniPoly(std::move(c));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b)
    {
        std::vector<F> c(std::max(a.c_.size(), b.c_.size()), F(0));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) - b.coeff(k);
        return UniPoly(std::move(c));
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<F> c(a.c_.size() + b.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(c));
    }
    friend bool operator==(const UniPoly& a, const UniPoly& b)
    {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t k = 0; k < a.c_.size(); ++k)
            if (!(a.c_[k] == b.c_[k])) return false;
        return true;
    }

    // (quotient, remainder)
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const
    {
        if (d.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division");
        std::vector<F> r = c_;
        int dd = d.degree();
        if (degree() < dd) return {UniPoly(), *this};
        std::vector<F> q(degree() - dd + 1, F(0));
        F inv = F(1) / d.lead();
        for (int k = degree(); k >= dd; --k) {
            if (is_zero_entry(r[k])) continue;
            F f = r[k] * inv;
            q[k - dd] = f;
            for (int j = 0; j <= dd; ++j) r[k - dd + j] -= f * d.c_[j];
        }
        r.resize(dd);
        return {UniPoly(std::move(q)), UniPoly(std::move(r))};
    }

    bool divides(const UniPoly& p) const { return p.divmod(*this).second.is_zero(); }

    template <class M>
    M eval_matrix(const M& a) const
    {
        M r(a.rows(), a.cols());
        for (int k = degree(); k >= 0; --k) {
            r = r * a;
            for (std::size_t i = 0; i < a.rows(); ++i) r(i, i) += c_[k];
        }
        return r;
    }

    F eval(const F& x) const
    {
        F r(0);
        for (int k = degree(); k >= 0; --k) r = r * x + c_[k];
        return r;
    }

    std::string to_string(const std::string& var = "t") const
    {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            if (is_zero_entry(c_[k])) continue;
            std::string coef = secant::to_string(c_[k]);
            bool compound = coef.find_first_of("+-", 1) != std::string::npos;
            std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
            std::string term;
            if (mono.empty())
                term = compound ? "(" + coef + ")" : coef;
            else if (coef == "1")
                term = mono;
            else if (coef == "-1")
                term = "-" + mono;
            else
                term = (compound ? "(" + coef + ")" : coef) + "*" + mono;
            if (!out.empty() && term[0] != '-') out += '+';
            out += term;
        }
        return out;
    }

private:
    static bool is_zero_entry(const F& x) { return secant::is_zero(x); }

    void normalize()
    {
        while (!c_.empty() && secant::is_zero(c_.back())) c_.pop_back();
    }

    std::vector<F> c_;
};

template <class F>
UniPoly<F> poly_gcd(UniPoly<F> a, UniPoly<F> b)
{
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

template <class F>
UniPoly<F> poly_lcm(const UniPoly<F>& a, const UniPoly<F>& b)
{
    if (a.is_zero() || b.is_zero()) return UniPoly<F>();
    return (a * b).divmod(poly_gcd(a, b)).first.monic();
}

// Characteristic polynomial det(tI - A) by the Faddeev-LeVerrier recursion.
template <class F>
UniPoly<F> char_poly(const Matrix<F>& a)
{
    if (!a.square()) fail(ErrorKind::SizeMismatch, "char_poly of non-square matrix");
    std::size_t n = a.rows();
    std::vector<F> c(n + 1, F(0));
    c[n] = F(1);
    Matrix<F> m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
        c[n - k] = -(a * m).trace() / F(static_cast<long>(k));
    }
    return UniPoly<F>(std::move(c));
}

// Minimal polynomial: lcm over standard basis vectors of the monic generator
// of each Krylov sequence e_j, A e_j, A^2 e_j, ...
template <class F>
UniPoly<F> min_poly(const Matrix<F>& a)
{
    if (!a.square()) fail(ErrorKind::SizeMismatch, "min_poly of non-square matrix");
    std::size_t n = a.rows();
    UniPoly<F> result({F(1)});
    for (std::size_t j = 0; j < n; ++j) {
        // Rows carry (vector | coefficients over the Krylov vectors).
        EchelonBasis<F> basis(2 * n + 1);
        Vec<F> v = unit_vector<F>(n, j);
        for (std::size_t k = 0; k <= n; ++k) {
            Vec<F> ext(2 * n + 1, F(0));
            for (std::size_t i = 0; i < n; ++i) ext[i] = v[i];
            ext[n + k] = F(1);
            Vec<F> r = basis.reduce(ext);
            bool dependent = true;
            for (std::size_t i = 0; i < n; ++i)
                if (!is_zero(r[i])) dependent = false;
            if (dependent) {
                std::vector<F> coeffs(r.begin() + n, r.begin() + n + k + 1);
                result = poly_lcm(result, UniPoly<F>(std::move(coeffs)).monic());
                break;
            }
            basis.add(ext);
            v = a * v;
        }
    }
    if (!result.eval_matrix(a).is_zero()) fail(ErrorKind::Verification, "minimal polynomial does not annihilate");
    return result;
}

template <class F>
std::pair<UniPoly<F>, UniPoly<F>> char_min_poly(const Matrix<F>& a)
{
    return {char_poly(a), min_poly(a)};
}

template <class F>
bool is_semisimple(const Matrix<F>& a)
{
    auto m = min_poly(a);
    return poly_gcd(m, m.derivative()).degree() == 0;
}

template <class F>
bool is_nilpotent(const Matrix<F>& a)
{
    return a.pow(static_cast<unsigned>(a.rows())).is_zero();
}

// ---------------------------------------------------------------------------
// Partitions

struct Partition {
    std::vector<int> parts;  // weakly decreasing, positive

    Partition() = default;
    explicit Partition(std::vector<int> p) : parts(std::move(p))
    {
        for (int x : parts)
            if (x <= 0) fail(ErrorKind::InvalidPartition, "parts must be positive");
        std::sort(parts.begin(), parts.end(), std::greater<int>());
    }

    int n() const
    {
        int s = 0;
        for (int x : parts) s += x;
        return s;
    }

    Partition conjugate() const
    {
        std::vector<int> c;
        if (parts.empty()) return Partition();
        for (int j = 1; j <= parts.front(); ++j) {
            int cnt = 0;
            for (int x : parts)
                if (x >= j) ++cnt;
            c.push_back(cnt);
        }
        return Partition(c);
    }

    // Rank of a nilpotent with this Jordan type.
    int nilpotent_rank() const { return n() - static_cast<int>(parts.size()); }

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }

    std::string to_string() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
        return s + "]";
    }
};

// Padded with ones up to n.
inline Partition make_partition(std::vector<int> parts, int n)
{
    Partition p(std::move(parts));
    int s = p.n();
    if (s > n) fail(ErrorKind::InvalidPartition, "parts exceed n");
    for (; s < n; ++s) p.parts.push_back(1);
    return p;
}

inline bool dominance_leq(const Partition& p, const Partition& q)
{
    if (p.n() != q.n()) fail(ErrorKind::SumMismatch, "partitions of different integers");
    int sp = 0, sq = 0;
    std::size_t len = std::max(p.parts.size(), q.parts.size());
    for (std::size_t i = 0; i < len; ++i) {
        sp += i < p.parts.size() ? p.parts[i] : 0;
        sq += i < q.parts.size() ? q.parts[i] : 0;
        if (sp > sq) return false;
    }
    return true;
}

// Jordan type of a nilpotent matrix from the ranks of its powers.
template <class F>
Partition nilpotent_partition(const Matrix<F>& a)
{
    std::size_t n = a.rows();
    std::vector<std::size_t> ranks{n};
    Matrix<F> p = Matrix<F>::identity(n);
    while (ranks.back() > 0) {
        if (ranks.size() > n) fail(ErrorKind::NotNilpotent, "matrix is not nilpotent");
        p = p * a;
        std::size_t r = rank(p);
        if (r == ranks.back()) fail(ErrorKind::NotNilpotent, "matrix is not nilpotent");
        ranks.push_back(r);
    }
    std::vector<int> blocks_at_least;
    for (std::size_t j = 1; j < ranks.size(); ++j) blocks_at_least.push_back(static_cast<int>(ranks[j - 1] - ranks[j]));
    if (n == 0) return Partition();
    return Partition(blocks_at_least).conjugate();
}

// ---------------------------------------------------------------------------
// Rank-one reduction

template <class F>
bool drops_rank_direct(const Matrix<F>& a, const Vec<F>& y, const Vec<F>& eta)
{
    return rank(a - outer(y, eta)) < rank(a);
}

// y in im A, eta vanishes on ker A, and <x, eta> = 1 for a solution of Ax = y.
template <class F>
bool drops_rank_criterion(const Matrix<F>& a, const Vec<F>& y, const Vec<F>& eta)
{
    auto x = solve_linear(a, y);
    if (!x) return false;
    for (const auto& k : kernel_basis(a))
        if (!is_zero(dot(k, eta))) return false;
    return dot(*x, eta) == F(1);
}

template <class F>
bool drops_rank(const Matrix<F>& a, const Vec<F>& y, const Vec<F>& eta)
{
    if (y.size() != a.rows() || eta.size() != a.cols()) fail(ErrorKind::SizeMismatch, "drops_rank");
    if (is_zero_vec(y) || is_zero_vec(eta)) fail(ErrorKind::ZeroVector, "drops_rank needs non-zero y and eta");
    bool direct = drops_rank_direct(a, y, eta);
    if (direct != drops_rank_criterion(a, y, eta))
        fail(ErrorKind::Verification, "rank-one reduction criterion disagrees with the direct rank");
    return direct;
}

}  // namespace secant
