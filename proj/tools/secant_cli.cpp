// Command-line front end.  Exit codes: 0 success, 1 verification failure,
// 2 parse or range error, 3 not a member, 4 search or resource cap.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secant/secant.hpp"

using namespace secant;

namespace {

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::Range:
    case ErrorKind::SizeMismatch:
    case ErrorKind::InvalidPartition:
    case ErrorKind::ZeroDefect:
        return 2;
    case ErrorKind::NotMember:
        return 3;
    case ErrorKind::SearchExhausted:
    case ErrorKind::Resource:
        return 4;
    default:
        return 1;
    }
}

void write_output(const std::string& path, const Json& j)
{
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Parse, "cannot write " + path);
    out << j.dump(2) << '\n';
}

Partition parse_partition(const std::string& text, int n)
{
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            parts.push_back(v);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidPartition, "bad partition entry '" + tok + "'");
        }
    }
    if (parts.empty()) fail(ErrorKind::InvalidPartition, "empty partition");
    Partition p(parts);
    return make_partition(p.parts, n > 0 ? n : p.n());
}

std::string rank_trace_text(const Decomposition& d)
{
    std::string s;
    for (const auto& step : d.trace) s += std::to_string(step.rank_before) + " -> ";
    return s + std::to_string(d.trace.empty() ? rank(d.certificate.target) : d.trace.back().rank_after);
}

Family family_of(const std::string& name) { return make_algebra(name, name == "o" ? 7 : 2).family; }

// ---------------------------------------------------------------------------

int cmd_decompose(const std::string& input, std::uint64_t seed, long max_height, const std::string& out)
{
    MatrixDocument doc = matrix_document_from_json(read_json_file(input));
    SearchOptions opts;
    opts.seed = seed;
    opts.max_height = max_height;
    Decomposition d = decompose(doc.algebra, doc.entries, opts);
    CertificateMeta meta{seed, {}};
    for (const auto& step : d.trace) meta.rank_trace.push_back(step.rank_before);
    meta.rank_trace.push_back(0);
    write_output(out, certificate_to_json(d.certificate, meta));
    std::ostream& log = out.empty() ? std::cerr : std::cout;
    log << "summands: " << d.certificate.summands.size() << '\n';
    log << "rank trace: " << rank_trace_text(d) << '\n';
    return 0;
}

int cmd_classify(const std::string& input, bool json)
{
    MatrixDocument doc = matrix_document_from_json(read_json_file(input));
    StratumReport r = stratum_report(doc.algebra, doc.entries);
    if (json) {
        std::cout << stratum_to_json(r).dump(2) << '\n';
        return 0;
    }
    auto range = [](const KRange& k) {
        return k.exact() ? std::to_string(k.lo) : "{" + std::to_string(k.lo) + ".." + std::to_string(k.hi) + "}";
    };
    std::cout << r.algebra.name() << r.algebra.n << ", rank " << r.rank << ", " << r.type << '\n';
    for (const auto& row : r.rows) {
        std::string k = std::to_string(row.k);
        std::cout << "closure(" << k << "C): " << verdict_name(row.closure.verdict) << " [" << row.closure.reason
                  << "]; " << k << "C: " << verdict_name(row.exact.verdict) << " [" << row.exact.reason << "]\n";
    }
    std::cout << "min_k closure: " << range(r.min_k_closure) << '\n';
    std::cout << "min_k: " << range(r.min_k_exact) << '\n';
    return 0;
}

int cmd_dims(const std::string& algebra, std::size_t n, int k, bool terracini, std::uint64_t seed, int trials)
{
    Family f = family_of(algebra);
    int lo = k > 0 ? k : 1, hi = k > 0 ? k : max_k(f, n);
    std::cout << std::left << std::setw(4) << "k" << std::setw(8) << "dim" << std::setw(10) << "expected";
    if (terracini)
        std::cout << std::setw(8) << "defect" << "terracini";
    else
        std::cout << "defect";
    std::cout << '\n';
    bool agree = true;
    for (int j = lo; j <= hi; ++j) {
        DimReport d = dim_formula(f, n, j);
        std::cout << std::setw(4) << j << std::setw(8) << d.dim_kC << std::setw(10) << d.expected_dim;
        if (!terracini) {
            std::cout << d.defect;
        } else {
            std::cout << std::setw(8) << d.defect;
            TerraciniResult t = terracini_sample(f, n, j, seed, trials);
            agree = agree && t.dim == d.dim_kC;
            std::cout << t.dim << (t.consistent ? "" : " (trials disagree)");
        }
        std::cout << '\n';
    }
    std::cout << "dim g: " << algebra_dim(AlgebraId{f, n}) << '\n';
    std::cout << "fill: " << fill_k(f, n) << '\n';
    try {
        ZakComparison z = zak_bound(f, n);
        std::cout << "zak bound: " << z.bound << " points (n_X = " << z.n_x << ", delta = " << z.delta << ") vs fill "
                  << z.fill << '\n';
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroDefect) throw;
        std::cout << "zak bound: not applicable (" << e.what() << ")\n";
    }
    if (terracini) std::cout << "terracini " << (agree ? "matches" : "differs from") << " the formula\n";
    return agree ? 0 : 1;
}

int cmd_orbit(const std::string& partition, int n, bool representative, bool decompose_it, bool bounds)
{
    Partition p = parse_partition(partition, n);
    std::size_t size = static_cast<std::size_t>(p.n());
    validate_orbit(p, size);
    Json out{{"partition", p.to_string()}, {"n", size}};
    if (representative || (!decompose_it && !bounds))
        out["representative"] = to_json(MatrixDocument{AlgebraId{Family::O, size}, orbit_representative(p, size)});
    if (decompose_it) out["certificate"] = certificate_to_json(decompose_nilpotent(p, size));
    if (bounds) {
        if (size < 7) fail(ErrorKind::Range, "bounds need n >= 7");
        out["bounds"] = kbounds_to_json(nilpotent_k_bounds(p, size));
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_verify(const std::string& cert_path)
{
    Certificate c = certificate_from_json(read_json_file(cert_path));
    if (auto p = certificate_problem(c)) {
        std::cout << "verification failed: " << *p << '\n';
        return 1;
    }
    std::cout << "verified: " << c.summands.size() << " summands\n";
    return 0;
}

int cmd_relations(const std::string& algebra, std::size_t n, int count, std::uint64_t seed)
{
    AlgebraId alg = make_algebra(algebra, n);
    if (alg.family != Family::O) fail(ErrorKind::Range, "relations are defined for o_n");
    if (count != 2 && count != 3) fail(ErrorKind::Range, "count must be 2 or 3");
    std::vector<CWitness> ws;
    for (int i = 0; i < count; ++i) ws.push_back(random_c_point(alg, seed * 3 + static_cast<std::uint64_t>(i), 3));
    if (count == 2) {
        Scalar l = two_sum_lambda(ws[0], ws[1]);
        std::cout << "lambda = " << l << '\n';
        std::cout << "confirmed: (J1+J2)^3 = lambda (J1+J2)\n";
        return 0;
    }
    TripleInvariants t = triple_invariants(ws[0], ws[1], ws[2]);
    std::cout << "c12 = " << t.c12 << "\nc13 = " << t.c13 << "\nc23 = " << t.c23 << "\nc = " << t.c << '\n';
    std::cout << "tp(t) = " << t.annihilator.to_string() << '\n';
    std::cout << "confirmed: tp(J1+J2+J3) = 0\n";
    return 0;
}

int cmd_sample(const std::string& algebra, std::size_t n, int k, std::uint64_t seed)
{
    AlgebraId alg = make_algebra(algebra, n);
    if (k < 0) fail(ErrorKind::Range, "k must be non-negative");
    // Retry until the summand count is admissible for the sampled rank.
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        Certificate c{alg, Mat(n, n), {}, false, "sample"};
        for (int i = 0; i < k; ++i) {
            c.summands.push_back(random_c_point(alg, (seed + attempt * 7919) * 64 + static_cast<std::uint64_t>(i), 3));
            c.target += realize(c.summands.back());
        }
        if (certificate_problem(c)) continue;
        verify_certificate(c);
        std::cout << certificate_to_json(c, {seed, {}}).dump(2) << '\n';
        return 0;
    }
    fail(ErrorKind::SearchExhausted, "no admissible sample in 100 attempts");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Secant varieties of minimal orbits: decomposition, classification and dimensions"};
    app.require_subcommand(1);

    std::string input, out, cert, algebra = "o", partition;
    std::uint64_t seed = 0;
    long max_height = 1L << 20;
    bool json = false, terracini = false, representative = false, decompose_it = false, bounds = false;
    std::size_t n = 0;
    int k = 0, trials = 3, count = 2, orbit_n = 0;

    auto* dec = app.add_subcommand("decompose", "write a verified certificate for a matrix");
    dec->add_option("--input", input, "matrix document")->required();
    dec->add_option("--seed", seed, "search seed");
    dec->add_option("--max-height", max_height, "height cap of random searches");
    dec->add_option("--out", out, "certificate file (stdout when omitted)");

    auto* cls = app.add_subcommand("classify", "stratum report for a matrix");
    cls->add_option("--input", input, "matrix document")->required();
    cls->add_flag("--json", json, "JSON output");

    auto* dims = app.add_subcommand("dims", "dimension table, fill and Zak bound");
    dims->add_option("--algebra", algebra, "sl, sp or o")->required();
    dims->add_option("--n", n, "matrix size")->required();
    dims->add_option("--k", k, "single k");
    dims->add_flag("--terracini", terracini, "add sampled tangent dimensions");
    dims->add_option("--seed", seed, "sampling seed");
    dims->add_option("--trials", trials, "samples per k");

    auto* orb = app.add_subcommand("orbit", "nilpotent orbit representative, recipe and bounds");
    orb->add_option("--partition", partition, "parts, comma separated")->required();
    orb->add_option("--n", orbit_n, "matrix size (pads with ones)");
    orb->add_flag("--representative", representative, "emit the representative");
    orb->add_flag("--decompose", decompose_it, "emit the recipe certificate");
    orb->add_flag("--bounds", bounds, "emit bounds on the smallest k");

    auto* ver = app.add_subcommand("verify", "re-check a certificate");
    ver->add_option("--cert", cert, "certificate document")->required();

    auto* rel = app.add_subcommand("relations", "relation constants of random extremal points");
    rel->add_option("--algebra", algebra, "must be o");
    rel->add_option("--n", n, "matrix size")->required();
    rel->add_option("--count", count, "2 or 3");
    rel->add_option("--seed", seed, "sampling seed");

    auto* smp = app.add_subcommand("sample", "random element of kC with its certificate");
    smp->add_option("--algebra", algebra, "sl, sp or o")->required();
    smp->add_option("--n", n, "matrix size")->required();
    smp->add_option("--k", k, "number of summands")->required();
    smp->add_option("--seed", seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dec->parsed()) return cmd_decompose(input, seed, max_height, out);
        if (cls->parsed()) return cmd_classify(input, json);
        if (dims->parsed()) return cmd_dims(algebra, n, k, terracini, seed, trials);
        if (orb->parsed()) return cmd_orbit(partition, orbit_n, representative, decompose_it, bounds);
        if (ver->parsed()) return cmd_verify(cert);
        if (rel->parsed()) return cmd_relations(algebra, n, count, seed);
        if (smp->parsed()) return cmd_sample(algebra, n, k, seed);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    return 2;
}
