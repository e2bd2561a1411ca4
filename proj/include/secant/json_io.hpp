#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "classify.hpp"
#include "decompose.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "lie.hpp"
#include "matrix.hpp"
#include "secantdim.hpp"

namespace secant {

using Json = nlohmann::json;

// Scalars travel as strings in the scalar grammar; objects keep keys sorted.

inline Json vec_to_json(const Vec<Scalar>& v)
{
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

inline Json mat_to_json(const Mat& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
    return rows;
}

namespace detail {

inline Scalar scalar_from_json(const Json& j)
{
    if (j.is_string()) return parse_scalar(j.get<std::string>());
    if (j.is_number_integer()) return Scalar(j.get<long>());
    fail(ErrorKind::Parse, "scalar must be a string or an integer, got " + j.dump());
}

inline const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Parse, std::string("missing field '") + key + "'");
    return j.at(key);
}

inline std::size_t size_field(const Json& j)
{
    const Json& n = field(j, "n");
    if (!n.is_number_integer() || n.get<long>() < 1) fail(ErrorKind::Parse, "n must be a positive integer");
    return n.get<std::size_t>();
}

inline AlgebraId algebra_field(const Json& j)
{
    const Json& a = field(j, "algebra");
    if (!a.is_string()) fail(ErrorKind::Parse, "algebra must be a string");
    return make_algebra(a.get<std::string>(), size_field(j));
}

inline void collect_radicands(const Scalar& s, std::set<std::string>& out)
{
    for (const TowerNode* t = s.tower().get(); t; t = t->parent.get()) out.insert(generator_name(t));
}

}  // namespace detail

inline Vec<Scalar> vec_from_json(const Json& j, std::size_t n)
{
    if (!j.is_array() || j.size() != n) fail(ErrorKind::Parse, "expected a vector of length " + std::to_string(n));
    Vec<Scalar> v;
    for (const auto& x : j) v.push_back(detail::scalar_from_json(x));
    return v;
}

inline Mat mat_from_json(const Json& j, std::size_t n)
{
    if (!j.is_array() || j.size() != n) fail(ErrorKind::Parse, "expected " + std::to_string(n) + " rows");
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec<Scalar> r = vec_from_json(j[i], n);
        for (std::size_t k = 0; k < n; ++k) m(i, k) = r[k];
    }
    return m;
}

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorKind::Parse, path + ": " + e.what());
    }
}

inline Json parse_json_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        fail(ErrorKind::Parse, e.what());
    }
}

// ---------------------------------------------------------------------------
// Matrix documents

struct MatrixDocument {
    AlgebraId algebra;
    Mat entries;
};

inline Json to_json(const MatrixDocument& d)
{
    return Json{{"algebra", d.algebra.name()}, {"n", d.algebra.n}, {"entries", mat_to_json(d.entries)}};
}

/// Parses and checks membership in the declared algebra.
inline MatrixDocument matrix_document_from_json(const Json& j)
{
    MatrixDocument d;
    d.algebra = detail::algebra_field(j);
    d.entries = mat_from_json(detail::field(j, "entries"), d.algebra.n);
    if (!is_member(d.algebra, d.entries))
        fail(ErrorKind::NotMember, "entries are not in " + d.algebra.name() + std::to_string(d.algebra.n));
    return d;
}

// ---------------------------------------------------------------------------
// Certificates

struct CertificateMeta {
    std::uint64_t seed = 0;
    std::vector<std::size_t> rank_trace;  // rank before each step, then the final rank
};

inline Json witness_to_json(const CWitness& w)
{
    Json j{{"kind", w.alg.name()}, {"y1", vec_to_json(w.y1)}};
    if (w.alg.family == Family::SP)
        j["c"] = to_string(w.c);
    else
        j["y2"] = vec_to_json(w.y2);
    return j;
}

inline CWitness witness_from_json(const Json& j, const AlgebraId& alg)
{
    const Json& kind = detail::field(j, "kind");
    if (!kind.is_string() || kind.get<std::string>() != alg.name())
        fail(ErrorKind::Parse, "summand kind does not match the algebra");
    CWitness w;
    w.alg = alg;
    w.y1 = vec_from_json(detail::field(j, "y1"), alg.n);
    if (alg.family == Family::SP)
        w.c = detail::scalar_from_json(detail::field(j, "c"));
    else
        w.y2 = vec_from_json(detail::field(j, "y2"), alg.n);
    return w;
}

inline Json certificate_to_json(const Certificate& c, const CertificateMeta& meta = {})
{
    Json summands = Json::array();
    std::set<std::string> radicands;
    for (const auto& w : c.summands) {
        summands.push_back(witness_to_json(w));
        for (const auto& x : w.y1) detail::collect_radicands(x, radicands);
        for (const auto& x : w.y2) detail::collect_radicands(x, radicands);
        detail::collect_radicands(w.c, radicands);
    }
    Json m{{"construction", c.kind}, {"seed", meta.seed}, {"radicands", Json(radicands)}};
    if (!meta.rank_trace.empty()) m["rank_trace"] = meta.rank_trace;
    return Json{{"algebra", c.algebra.name()},
                {"n", c.algebra.n},
                {"target", mat_to_json(c.target)},
                {"summands", summands},
                {"meta", m}};
}

/// Reads a certificate without verifying it.
inline Certificate certificate_from_json(const Json& j)
{
    Certificate c;
    c.algebra = detail::algebra_field(j);
    c.target = mat_from_json(detail::field(j, "target"), c.algebra.n);
    const Json& s = detail::field(j, "summands");
    if (!s.is_array()) fail(ErrorKind::Parse, "summands must be an array");
    for (const auto& w : s) c.summands.push_back(witness_from_json(w, c.algebra));
    if (j.contains("meta") && j["meta"].contains("construction") && j["meta"]["construction"].is_string())
        c.kind = j["meta"]["construction"].get<std::string>();
    return c;
}

// ---------------------------------------------------------------------------
// Reports

inline Json status_to_json(const MembershipStatus& s)
{
    Json j{{"verdict", verdict_name(s.verdict)}, {"reason", s.reason}};
    if (!s.invariant.empty()) j["invariant"] = s.invariant;
    if (s.witness) j["witness_summands"] = s.witness->summands.size();
    return j;
}

inline Json range_to_json(const KRange& r)
{
    if (r.exact()) return r.lo;
    return Json{r.lo, r.hi};
}

inline Json stratum_to_json(const StratumReport& r)
{
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"k", row.k}, {"exact", status_to_json(row.exact)}, {"closure", status_to_json(row.closure)}});
    return Json{{"algebra", r.algebra.name()},
                {"n", r.algebra.n},
                {"rank", r.rank},
                {"type", r.type},
                {"rows", rows},
                {"min_k_closure", range_to_json(r.min_k_closure)},
                {"min_k_exact", range_to_json(r.min_k_exact)}};
}

inline Json dims_to_json(const DimReport& d)
{
    return Json{{"k", d.k},           {"dim", d.dim_kC},    {"expected", d.expected_dim},
                {"defect", d.defect}, {"dim_g", d.dim_g}};
}

inline Json kbounds_to_json(const KBounds& b)
{
    return Json{{"lower", b.lower}, {"upper", b.upper}};
}

}  // namespace secant
