#include <gtest/gtest.h>

#include <random>

#include "secant/classify.hpp"

using namespace secant;

namespace {

Mat random_k_sum(const AlgebraId& alg, std::uint64_t seed, int k)
{
    Mat m(alg.n, alg.n);
    for (int i = 0; i < k; ++i) m += realize(random_c_point(alg, seed * 31 + static_cast<std::uint64_t>(i), 3));
    return m;
}

Mat conjugate_orthogonal(std::mt19937_64& rng, const Mat& a)
{
    std::size_t n = a.rows();
    std::uniform_int_distribution<long> d(-1, 1);
    Mat f = anti_diagonal(n);
    Mat low(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) low(i, j) = Scalar(d(rng));
    Mat nil = low - f * low.transpose() * f;
    Mat g = Mat::identity(n), term = Mat::identity(n);
    for (std::size_t k = 1; k < n; ++k) {
        term = Scalar::rational(1, static_cast<long>(k)) * (term * nil);
        g += term;
    }
    return g * a * f * g.transpose() * f;
}

// diag(v_1, .., v_k, 0, .., 0, -v_k, .., -v_1).
Mat mirrored_diag(std::size_t n, const std::vector<Scalar>& v)
{
    Mat m(n, n);
    for (std::size_t i = 0; i < v.size(); ++i) {
        m(i, i) = v[i];
        m(n - 1 - i, n - 1 - i) = -v[i];
    }
    return m;
}

// (y1 + y3) ^ (y2 + y4) with y1 = e_1, y2 = e_2, y3 = e_n, y4 = e_{n-1}.
Mat o2_representative(std::size_t n)
{
    AlgebraId alg{Family::O, n};
    Vec<Scalar> u(n, Scalar(0)), v(n, Scalar(0));
    u[0] = u[n - 1] = Scalar(1);
    v[1] = v[n - 2] = Scalar(1);
    Mat f = form(alg);
    return outer(u, f * v) - outer(v, f * u);
}

Mat embed_middle(std::size_t n, const Mat& local)
{
    std::size_t off = (n - local.rows()) / 2;
    Mat m(n, n);
    for (std::size_t i = 0; i < local.rows(); ++i)
        for (std::size_t j = 0; j < local.cols(); ++j) m(off + i, off + j) = local(i, j);
    return m;
}

// p(S) evaluated term by term.
Mat eval_tp(const TripleInvariants& t, const Mat& s)
{
    Scalar sum = t.c12 + t.c13 + t.c23;
    Scalar m = t.c + Scalar(2) * t.c12 * t.c13 * t.c23;
    Mat s2 = s * s, s3 = s2 * s, s5 = s3 * s2, s7 = s5 * s2;
    return s7 - Scalar(2) * sum * s5 + sum * sum * s3 - m * s;
}

}  // namespace

TEST(Classify, TwoSumLambdaExamples)
{
    AlgebraId o9{Family::O, 9};
    CWitness j1 = random_c_point(o9, 5, 3);
    EXPECT_EQ(two_sum_lambda(j1, witness_o(o9, j1.y2, j1.y1)), Scalar(0));

    // The 6x6 split of the [3,3] nilpotent.
    AlgebraId o6{Family::O, 6};
    Mat m1(6, 6), m2(6, 6);
    m1(0, 1) = Scalar(1), m1(4, 5) = Scalar(-1);
    m2(1, 2) = Scalar(1), m2(3, 4) = Scalar(-1);
    Mat sum = m1 + m2;
    EXPECT_EQ(two_sum_lambda(witness_from_matrix(o6, m1), witness_from_matrix(o6, m2)), Scalar(0));
    EXPECT_TRUE((sum * sum * sum).is_zero());
    EXPECT_FALSE((sum * sum).is_zero());

    // The S_2 split with a = 2: lambda = a^2.
    AlgebraId o4{Family::O, 4};
    Mat s1 = Mat::from_rows({{1, 0, 1, 0}, {0, 1, 0, -1}, {-1, 0, -1, 0}, {0, 1, 0, -1}});
    Mat s2 = Mat::from_rows({{1, 0, -1, 0}, {0, 1, 0, 1}, {1, 0, -1, 0}, {0, -1, 0, -1}});
    EXPECT_EQ(two_sum_lambda(witness_from_matrix(o4, s1), witness_from_matrix(o4, s2)), Scalar(4));

    EXPECT_THROW(two_sum_lambda(j1, random_c_point(AlgebraId{Family::O, 8}, 1, 2)), Error);
}

TEST(Classify, TwoSumLambdaRandomPairs)
{
    AlgebraId o9{Family::O, 9};
    for (std::uint64_t s = 0; s < 100; ++s) {
        CWitness a = random_c_point(o9, 2 * s, 3), b = random_c_point(o9, 2 * s + 1, 3);
        Scalar l = two_sum_lambda(a, b);
        Mat sum = realize(a) + realize(b);
        EXPECT_EQ(sum * sum * sum, l * sum);
        // lambda = c_1 where J1 J2 J1 = c_1 J1.
        Mat ja = realize(a), jb = realize(b);
        EXPECT_EQ(ja * jb * ja, l * ja);
    }
}

TEST(Classify, TripleInvariantsEqualSummands)
{
    AlgebraId o9{Family::O, 9};
    CWitness j = random_c_point(o9, 3, 2);
    TripleInvariants t = triple_invariants(j, j, j);
    EXPECT_TRUE(t.c12.is_zero() && t.c13.is_zero() && t.c23.is_zero() && t.c.is_zero());
    EXPECT_EQ(t.annihilator, UniPoly<Scalar>::monomial(7));
    Mat three = Scalar(3) * realize(j);
    EXPECT_TRUE((three * three).is_zero());
}

TEST(Classify, TripleInvariantsRandom)
{
    AlgebraId o9{Family::O, 9};
    for (std::uint64_t s = 0; s < 100; ++s) {
        CWitness a = random_c_point(o9, 3 * s, 2), b = random_c_point(o9, 3 * s + 1, 2),
                 c = random_c_point(o9, 3 * s + 2, 2);
        TripleInvariants t = triple_invariants(a, b, c);
        Mat ja = realize(a), jb = realize(b), jc = realize(c);
        EXPECT_EQ(jb * ja * jb, t.c12 * jb);
        EXPECT_EQ(jc * jb * jc, t.c23 * jc);
        EXPECT_TRUE(eval_tp(t, ja + jb + jc).is_zero());
        EXPECT_EQ(t.annihilator.degree(), 7);
    }
}

TEST(Classify, TripleInvariantsOfSemisimpleSplit)
{
    Mat a = mirrored_diag(7, {Scalar(1), Scalar(2), Scalar(3)});
    Certificate cert = decompose_semisimple3(a, Scalar(1), Scalar(2));
    ASSERT_EQ(cert.summands.size(), 3u);
    TripleInvariants t = triple_invariants(cert.summands[0], cert.summands[1], cert.summands[2]);
    UniPoly<Scalar> x = UniPoly<Scalar>::monomial(1), p = x;
    for (int v : {1, 2, 3})
        p = p * (x - UniPoly<Scalar>::monomial(0, Scalar(v))) * (x + UniPoly<Scalar>::monomial(0, Scalar(v)));
    auto [q, r] = t.annihilator.divmod(p);
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(q.degree(), 0);
}

TEST(Classify, Closure2CExamples)
{
    std::size_t n = 9;
    Mat gap = orbit_representative(make_partition({3, 2, 2}, 9), n);
    EXPECT_TRUE(closure2C_test(gap).in());
    MembershipStatus o2 = closure2C_test(o2_representative(n));
    EXPECT_TRUE(o2.out());
    EXPECT_FALSE(o2.invariant.empty());
    EXPECT_TRUE(closure2C_test(Mat(n, n)).in());
    // Rank 2 with A^3 = lambda A, lambda != 0: in R_1 only.
    EXPECT_TRUE(closure2C_test(mirrored_diag(n, {Scalar(1)})).out());
    EXPECT_TRUE(closure2C_test(mirrored_diag(n, {Scalar(1), Scalar(1)})).in());
    EXPECT_TRUE(closure2C_test(mirrored_diag(n, {Scalar(1), Scalar(2)})).out());
    EXPECT_TRUE(closure2C_test(orbit_representative(make_partition({5}, 9), n)).out());
    EXPECT_THROW(closure2C_test(Mat(6, 6)), Error);
}

TEST(Classify, Closure2CSampledSums)
{
    AlgebraId o9{Family::O, 9};
    for (std::uint64_t s = 0; s < 200; ++s) {
        Mat a = random_k_sum(o9, s, 2);
        MembershipStatus st = closure2C_test(a);
        EXPECT_TRUE(st.in()) << st.reason;
        if (!a.is_zero()) EXPECT_TRUE(is_semisimple(a) || is_nilpotent(a));
        EXPECT_FALSE(closure3C_test(a).out());
    }
}

TEST(Classify, Membership2C)
{
    std::size_t n = 9;
    MembershipStatus gap = membership_2C(orbit_representative(make_partition({3, 2, 2}, 9), n));
    EXPECT_TRUE(gap.out());
    EXPECT_EQ(gap.invariant, "rank(A^2) = 1");
    EXPECT_TRUE(membership_2C(orbit_representative(make_partition({3, 3}, 9), n)).in());
    EXPECT_TRUE(membership_2C(Mat(n, n)).in());
    std::mt19937_64 rng(4);
    Mat gap_conj = conjugate_orthogonal(rng, orbit_representative(make_partition({3, 2, 2}, 8), 8));
    EXPECT_TRUE(membership_2C(gap_conj).out());
    EXPECT_TRUE(closure2C_test(gap_conj).in());
}

TEST(Classify, Closure3CExamples)
{
    std::size_t n = 9;
    Mat d = mirrored_diag(n, {Scalar(1), Scalar(2), Scalar(-3)});
    EXPECT_TRUE(closure3C_test(d).in());
    std::mt19937_64 rng(8);
    EXPECT_TRUE(closure3C_test(conjugate_orthogonal(rng, d)).in());
    EXPECT_TRUE(closure3C_test(o2_representative(n)).out());
    EXPECT_TRUE(closure3C_test(mirrored_diag(n, {Scalar(1)})).out());
    // Annihilated by t(t^2 - 1) but with three eigenvalues 1.
    EXPECT_TRUE(closure3C_test(mirrored_diag(n, {Scalar(1), Scalar(1), Scalar(1)})).out());
    EXPECT_TRUE(closure3C_test(mirrored_diag(n, {Scalar(1), Scalar(2), Scalar(4)})).out());
    EXPECT_TRUE(closure3C_test(mirrored_diag(n, {Scalar(1), Scalar(2), Scalar(3), Scalar(4)})).out());
    EXPECT_TRUE(closure3C_test(orbit_representative(make_partition({5}, 9), n)).in());
    EXPECT_TRUE(closure3C_test(orbit_representative(make_partition({3, 3, 3}, 9), n)).in());
    EXPECT_TRUE(closure3C_test(orbit_representative(make_partition({7}, 9), n)).in());
    EXPECT_TRUE(closure3C_test(orbit_representative(make_partition({9}, 9), n)).out());

    // S_2 block plus a commuting [3] nilpotent in the middle.
    Mat mixed = mirrored_diag(n, {Scalar(1), Scalar(1)}) + embed_middle(n, orbit_representative(make_partition({3}, 5), 5));
    ASSERT_TRUE(is_member(AlgebraId{Family::O, n}, mixed));
    EXPECT_TRUE(closure3C_test(mixed).unknown());
}

TEST(Classify, Closure3CSampledTriples)
{
    for (std::size_t n : {7u, 9u}) {
        AlgebraId alg{Family::O, n};
        for (std::uint64_t s = 0; s < 100; ++s) {
            MembershipStatus st = closure3C_test(random_k_sum(alg, 1000 + s, 3));
            EXPECT_FALSE(st.out()) << st.reason;
        }
    }
}

TEST(Classify, InTk)
{
    std::size_t n = 9;
    EXPECT_FALSE(in_Tk(mirrored_diag(n, {Scalar(3), Scalar(3)}), 2));
    EXPECT_TRUE(in_Tk(mirrored_diag(n, {Scalar(1), Scalar(2)}), 2));
    EXPECT_FALSE(in_Tk(orbit_representative(make_partition({3, 3}, 9), n), 2));
    EXPECT_TRUE(in_Tk(mirrored_diag(n, {Scalar(1), Scalar(2), Scalar(-3)}), 3));
    EXPECT_FALSE(in_Tk(mirrored_diag(n, {Scalar(1), Scalar(2)}), 3));
    EXPECT_TRUE(in_Tk(Mat(n, n), 0));
}

TEST(Classify, NilpotentKBounds)
{
    auto check = [](std::vector<int> head, int lo, int hi) {
        KBounds b = nilpotent_k_bounds(make_partition(head, 9), 9);
        EXPECT_EQ(b.lower, lo) << make_partition(head, 9).to_string();
        EXPECT_EQ(b.upper, hi) << make_partition(head, 9).to_string();
        EXPECT_EQ(b.certificate.summands.size(), static_cast<std::size_t>(hi));
        EXPECT_TRUE(b.certificate.verified);
    };
    check({5}, 3, 3);
    check({3, 3}, 2, 2);
    check({3, 3, 3}, 3, 4);
    check({3}, 2, 2);
    check({3, 2, 2}, 3, 3);
    check({2, 2}, 1, 1);
    check({}, 0, 0);
    check({7}, 3, 3);
    EXPECT_THROW(nilpotent_k_bounds(make_partition({2}, 9), 9), Error);
}

TEST(Classify, StratumReportExamples)
{
    AlgebraId o9{Family::O, 9};
    StratumReport s2 = stratum_report(o9, mirrored_diag(9, {Scalar(2), Scalar(2)}));
    EXPECT_EQ(s2.min_k_closure.lo, 2);
    EXPECT_EQ(s2.min_k_closure.hi, 2);
    EXPECT_EQ(s2.min_k_exact.lo, 2);
    EXPECT_EQ(s2.min_k_exact.hi, 2);
    EXPECT_EQ(s2.type, "semisimple");

    StratumReport gap = stratum_report(o9, orbit_representative(make_partition({3, 2, 2}, 9), 9));
    EXPECT_EQ(gap.min_k_closure.lo, 2);
    EXPECT_EQ(gap.min_k_closure.hi, 2);
    EXPECT_EQ(gap.min_k_exact.lo, 3);
    EXPECT_EQ(gap.min_k_exact.hi, 3);

    StratumReport o2 = stratum_report(o9, o2_representative(9));
    EXPECT_EQ(o2.min_k_closure.lo, 4);
    EXPECT_EQ(o2.min_k_exact.hi, 4);
    EXPECT_TRUE(o2.rows[3].closure.out());

    StratumReport nine = stratum_report(o9, orbit_representative(make_partition({3, 3, 3}, 9), 9));
    EXPECT_EQ(nine.min_k_exact.lo, 3);
    EXPECT_EQ(nine.min_k_exact.hi, 4);

    AlgebraId sl5{Family::SL, 5};
    Mat a(5, 5);
    a(0, 1) = a(1, 2) = a(2, 3) = Scalar(1);
    StratumReport sl = stratum_report(sl5, a);
    EXPECT_EQ(sl.min_k_closure.lo, 3);
    EXPECT_EQ(sl.min_k_exact.hi, 3);
    ASSERT_TRUE(sl.rows[3].exact.witness.has_value());
    EXPECT_EQ(sl.rows[3].exact.witness->summands.size(), 3u);

    EXPECT_THROW(stratum_report(o9, Mat::identity(9)), Error);
}

TEST(Classify, StratumReportInvariants)
{
    AlgebraId o9{Family::O, 9};
    std::vector<Mat> samples = {Mat(9, 9), mirrored_diag(9, {Scalar(1), Scalar(2), Scalar(-3)}),
                                orbit_representative(make_partition({5}, 9), 9)};
    for (int k = 1; k <= 4; ++k) samples.push_back(random_k_sum(o9, 500 + static_cast<std::uint64_t>(k), k));
    for (const Mat& a : samples) {
        // Random sums of three or more points have large entries; their
        // decompositions are exercised in the decompose suite.
        ReportOptions opts;
        opts.decompose = rank(a) <= 4;
        StratumReport rep = stratum_report(o9, a, opts);
        bool seen_exact = false, seen_closure = false;
        for (const auto& row : rep.rows) {
            if (seen_exact) EXPECT_TRUE(row.exact.in());
            if (seen_closure) EXPECT_TRUE(row.closure.in());
            seen_exact = seen_exact || row.exact.in();
            seen_closure = seen_closure || row.closure.in();
            // kC inside closure(kC).
            if (row.exact.in()) EXPECT_FALSE(row.closure.out());
            if (row.exact.in() && row.exact.witness) {
                EXPECT_LE(row.exact.witness->summands.size(), static_cast<std::size_t>(row.k));
                EXPECT_EQ(row.exact.witness->sum(), a);
            }
        }
        EXPECT_LE(rep.min_k_closure.lo, rep.min_k_exact.lo);
        EXPECT_LE(rep.min_k_exact.lo, rep.min_k_exact.hi);
        EXPECT_LE(rep.min_k_exact.hi, static_cast<int>(rep.rank / 2 + 3));
    }
}
