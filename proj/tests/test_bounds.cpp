#include <gtest/gtest.h>

#include <cdd/bounds.hpp>

#include "oracles.hpp"

using namespace cdd;

namespace {

BoundResult poincare(double K, double N, double D)
{
    BoundRequest q;
    q.K = K;
    q.N = N;
    q.D = D;
    return poincare_bound(q);
}

BoundResult ppoincare(double K, double N, double D, double p)
{
    BoundRequest q;
    q.inequality = Inequality::p_poincare;
    q.K = K;
    q.N = N;
    q.D = D;
    q.p = p;
    return p_poincare_bound(q);
}

BoundResult logsob(double K, double D)
{
    BoundRequest q;
    q.inequality = Inequality::log_sobolev;
    q.K = K;
    q.D = D;
    return log_sobolev_bound(q);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

} // namespace

TEST(PoincareBound, Examples)
{
    auto r = poincare(0, 5, 2);
    EXPECT_NEAR(r.value, 2.467401, 1e-6);
    EXPECT_EQ(r.case_label, "1c");
    EXPECT_EQ(r.method, "closed_form");
    EXPECT_EQ(r.exactness, Exactness::exact);
    r = poincare(2, 3, kInf);
    EXPECT_DOUBLE_EQ(r.value, 3.0);
    EXPECT_EQ(r.case_label, "1a");
    r = poincare(1, kInf, kInf);
    EXPECT_DOUBLE_EQ(r.value, 1.0);
    EXPECT_EQ(r.case_label, "2a");
    r = poincare(0, -0.5, kInf);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.case_label, "4c");
}

TEST(PoincareBound, ProvisoAndRangeErrors)
{
    try {
        poincare(-1, -2, 6);
        FAIL() << "expected a proviso error";
    } catch (const ProvisoError& e) {
        EXPECT_NE(std::string(e.what()).find("l_delta"), std::string::npos);
    }
    EXPECT_NO_THROW(poincare(-1, -2, 5));
    EXPECT_THROW(poincare(1, 1.5, 1), UnsupportedRangeError);
    EXPECT_THROW(poincare(1, 0.5, 1), DomainError);
}

TEST(PoincareBound, CaseLabelsCoverTable)
{
    struct Row {
        double K, N, D;
        const char* label;
    };
    std::vector<Row> rows = {{2, 3, 1, "1a"}, {2, 3, kInf, "1a"}, {-1, 3, 1, "1b"}, {-1, 3, kInf, "1b"}, {0, 3, 1, "1c"},
                             {1, kInf, 1, "2a"}, {-1, kInf, 1, "2b"}, {-1, kInf, kInf, "2b"}, {0, kInf, 1, "2c"},
                             {-1, -2, 1, "3a"}, {1, -2, 1, "3b"}, {1, -2, kInf, "3b"}, {0, -2, 1, "3c"},
                             {-1, -0.5, 1, "4a"}, {1, -0.5, 1, "4b"}, {0, -0.5, 1, "4c"}};
    for (auto& r : rows) {
        auto b = poincare(r.K, r.N, r.D);
        EXPECT_EQ(b.case_label, r.label) << r.K << ' ' << r.N << ' ' << r.D;
        EXPECT_GE(b.value, 0.0);
    }
}

TEST(PoincareBound, ZeroOnUnboundedNonPositiveCurvature)
{
    EXPECT_EQ(poincare(-1, 3, kInf).value, 0.0);
    EXPECT_EQ(poincare(0, kInf, kInf).value, 0.0);
    EXPECT_EQ(poincare(-1, kInf, kInf).value, 0.0);
}

TEST(PoincareBound, ProfileCasesMatchFem)
{
    // 1b: cosh^{N-1} on [-D/2, D/2]; 2a: Gaussian window
    auto r = poincare(-1, 3, 2);
    double d = std::sqrt(0.5);
    EXPECT_LT(rel(r.value, oracle::fem_lambda1([&](double x) { return std::pow(std::cosh(d * x), 2.0); }, -1, 1)), 1e-7);
    r = poincare(1, kInf, 3);
    EXPECT_LT(rel(r.value, oracle::fem_lambda1([](double x) { return std::exp(-x * x / 2); }, -1.5, 1.5)), 1e-7);
    EXPECT_GT(r.value, 1.0);
}

TEST(PoincareBound, AnomalousBranchMatchesBesselZero)
{
    for (double N : {-0.5, -0.9}) {
        double j = oracle::bessel_zero(-N / 2);
        auto r = poincare(0, N, 1);
        EXPECT_LT(rel(r.value, j * j), 1e-4) << N;
        EXPECT_LT(rel(r.diagnostics.at("recessive_limit"), j * j), 1e-9) << N;
    }
    auto r0 = poincare(0, 0, 1);
    double j0 = oracle::bessel_zero(0.0);
    EXPECT_LT(rel(r0.value, j0 * j0), 1e-8);
    EXPECT_LT(r0.value, kPi * kPi);
}

TEST(PoincareBound, AnomalousGapAndMinusOneAgreement)
{
    double v = poincare(0, -0.5, 1).value;
    EXPECT_LT(v, kPi * kPi * (1 - 1e-3));
    auto lim = anomalous_limit(0, -1, 1);
    EXPECT_LT(rel(lim.value, kPi * kPi), 1e-6);
    EXPECT_LT(rel(poincare(0, -1, 1).value, kPi * kPi), 1e-12);
}

TEST(PoincareBound, AnomalousPositiveCurvatureUnboundedDiameter)
{
    // Bottom of the essential spectrum of sinh^{N-1}: (N-1)^2 |delta| / 4
    auto r = poincare(1, -0.5, kInf);
    EXPECT_EQ(r.case_label, "4b");
    EXPECT_NEAR(r.value, 0.375, 1e-4);
    EXPECT_NEAR(recessive_limit(1, -0.5, kInf).value, 0.375, 1e-4);
}

TEST(PoincareBound, CrossTheoremGaussianLimit)
{
    auto ex = sl_eigenvalue_exhaustion(CurvatureDimension(1, kInf), 0, -kInf, kInf, 1e-6);
    EXPECT_LT(std::abs(poincare(1, kInf, kInf).value - ex.value), 1e-3);
}

TEST(PPoincareBound, Examples)
{
    auto r = ppoincare(0, 4, pi_p(3), 3);
    EXPECT_NEAR(r.value, 2.0, 1e-6);
    EXPECT_EQ(r.method, "plap_solve");
    EXPECT_LT(rel(ppoincare(0, 4, 2, 2).value, poincare(0, 4, 2).value), 1e-6);
    EXPECT_GE(ppoincare(1, 3, 1, 2.5).value, ppoincare(0, 3, 1, 2.5).value);
    BoundRequest q;
    q.inequality = Inequality::p_poincare;
    q.N = 3;
    q.D = 1;
    EXPECT_THROW(p_poincare_bound(q), DomainError);
    EXPECT_THROW(ppoincare(0, -1, 1, 3), UnsupportedRangeError);
}

TEST(PPoincareBound, UniformClosedFormAcrossP)
{
    for (double p : {1.5, 2.0, 3.0, 4.0})
        for (double D : {1.0, pi_p(p)}) {
            double expect = (p - 1) * std::pow(pi_p(p) / D, p);
            EXPECT_LT(rel(ppoincare(0, 5, D, p).value, expect), 1e-6) << p << ' ' << D;
        }
}

TEST(LogSobolevBound, Examples)
{
    auto a = logsob(0, 2);
    EXPECT_NEAR(a.value, kPi * kPi / 4, 1e-14);
    EXPECT_EQ(a.exactness, Exactness::exact);
    EXPECT_EQ(a.method, "bg_closed");
    auto c = logsob(-1, 2);
    EXPECT_NEAR(c.value, 2 / std::expm1(0.5), 1e-12);
    EXPECT_NEAR(c.value, 3.0828, 5e-4);
    EXPECT_EQ(c.exactness, Exactness::up_to_constants);
    auto b = logsob(4, kInf);
    EXPECT_DOUBLE_EQ(b.value, 4.0);
    EXPECT_EQ(b.exactness, Exactness::up_to_constants);
    EXPECT_TRUE(b.diagnostics.count("bg_lower"));
    EXPECT_TRUE(a.diagnostics.at("bg_lower") <= a.value && a.value <= a.diagnostics.at("bg_upper"));
}

TEST(LogSobolevBound, BelowPoincareUpToBracketFactor)
{
    for (double K : {-1.0, 0.0, 1.0, 3.0})
        for (double D : {0.5, 2.0}) EXPECT_LE(logsob(K, D).value, kDefaultCBG * poincare(K, kInf, D).value) << K << ' ' << D;
}

TEST(MonotonicitySweep, Examples)
{
    auto a = monotonicity_sweep(1, 3, 1, {0, 0.5, 1, 2});
    EXPECT_TRUE(a.passed);
    EXPECT_EQ(a.regime, "non-decreasing in |h|");
    EXPECT_GT(a.rows.back().lambda, a.rows.front().lambda);
    auto c = monotonicity_sweep(1, -1, 1, {0, 1, 2});
    EXPECT_TRUE(c.passed);
    EXPECT_LE(c.max_relative_spread, 1e-6);
    auto b = monotonicity_sweep(0, -0.5, 1, {0.1, 1, 10});
    EXPECT_TRUE(b.passed);
    EXPECT_EQ(b.regime, "non-increasing in |h|");
    EXPECT_EQ(b.out_of_domain, 1u); // h = 10 leaves the support at x = 0.15
}

TEST(MonotonicitySweep, FlagsViolationsAndOutOfDomain)
{
    auto s = monotonicity_sweep(1, 3, 4.6, {0, 1});
    EXPECT_EQ(s.out_of_domain, 2u);
    for (auto& r : s.rows) EXPECT_EQ(r.flag, "out_of_domain");
}

TEST(DiameterSweep, Examples)
{
    auto u = diameter_sweep(0, 2, 0, {1, 2, 4});
    EXPECT_TRUE(u.passed);
    for (auto& r : u.rows) EXPECT_LT(rel(r.lambda, kPi * kPi / (r.param * r.param)), 1e-8);
    auto g = diameter_sweep(1, kInf, 0, {1, 5, 20});
    EXPECT_TRUE(g.passed);
    EXPECT_GT(g.rows[0].lambda, g.rows[1].lambda);
    EXPECT_NEAR(g.rows[2].lambda, 1.0, 1e-6);
    EXPECT_EQ(g.regime, "non-increasing in d");
}

TEST(DiameterSweep, RandomMeasuresNested)
{
    auto s = diameter_sweep(-0.5, 4, 0.3, linspace(0.2, 3, 8));
    EXPECT_TRUE(s.passed);
    EXPECT_EQ(s.out_of_domain, 0u);
}
