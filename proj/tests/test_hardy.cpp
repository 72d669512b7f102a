#include <gtest/gtest.h>

#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cdd/hardy.hpp>
#include <cdd/sl_solver.hpp>

#include "oracles.hpp"

using namespace cdd;

namespace {

GridDensity sample(const std::function<double(double)>& f, double a, double b, std::size_t n)
{
    GridDensity g{a, (b - a) / static_cast<double>(n - 1), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) g.values[i] = f(g.x(i));
    return g;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double gauss(double x) { return std::exp(-x * x / 2); }

} // namespace

TEST(Distribution, Medians)
{
    auto u = build_distribution(sample([](double) { return 1.0; }, 0, 1, 101));
    EXPECT_NEAR(u.median(), 0.5, 1e-12);
    EXPECT_NEAR(u.mass(), 1.0, 1e-12);
    auto e = build_distribution(sample([](double x) { return std::exp(-x); }, 0, 40, 40001));
    EXPECT_NEAR(e.median(), std::log(2.0), 1e-6);
    auto s = build_distribution(sample([](double x) { return 1.0 / (1 + (x - 3) * (x - 3)); }, 1, 5, 1001));
    EXPECT_NEAR(s.median(), 3.0, 1e-10);
    EXPECT_NEAR(s.cdf(s.median()), 0.5, 1e-12);
}

TEST(Distribution, CdfMonotone)
{
    auto d = build_distribution(sample(gauss, -3, 5, 801));
    double prev = -1;
    for (int i = 0; i <= 200; ++i) {
        double v = d.cdf(-3 + 8.0 * i / 200);
        EXPECT_GE(v, prev);
        prev = v;
    }
    EXPECT_NEAR(d.cdf(-3), 0.0, 1e-15);
    EXPECT_NEAR(d.cdf(5), 1.0, 1e-12);
    EXPECT_NEAR(d.cdf(1.0) + d.tail(1.0), 1.0, 1e-12);
}

TEST(Distribution, ZeroMassThrows)
{
    EXPECT_THROW(build_distribution(GridDensity{0, 1, {0, 0, 0}}), DomainError);
}

TEST(Muckenhoupt, UniformOneSixteenth)
{
    auto d = build_distribution(sample([](double) { return 1.0; }, 0, 1, 2001));
    auto e = muckenhoupt_estimate(d);
    EXPECT_NEAR(e.b_minus, 1.0 / 16, 1e-9);
    EXPECT_NEAR(e.b_plus, 1.0 / 16, 1e-9);
    EXPECT_NEAR(e.lower, 1.0 / (4 * (e.b_minus + e.b_plus)), 1e-12);
    EXPECT_NEAR(e.upper, 4.0 / (e.b_minus + e.b_plus), 1e-12);
    EXPECT_LE(e.lower, kPi * kPi);
    EXPECT_GE(e.upper, kPi * kPi);
}

TEST(Muckenhoupt, MatchesGridSearchOracle)
{
    struct Case {
        std::function<double(double)> f;
        double a, b;
    };
    std::vector<Case> cases = {{gauss, -8, 8}, {[](double x) { return std::exp(-x); }, 0, 40}, {[](double x) { return std::exp(x * x / 2); }, -1, 1.5}};
    for (auto& c : cases) {
        auto d = build_distribution(sample(c.f, c.a, c.b, 8001));
        for (bool bg : {false, true}) {
            auto e = bg ? bobkov_gotze_estimate(d) : muckenhoupt_estimate(d);
            auto o = oracle::hardy_sup(c.f, c.a, c.b, 40000, bg);
            EXPECT_LT(rel(e.b_plus, o.plus), 1e-4) << c.a << ' ' << bg;
            EXPECT_LT(rel(e.b_minus, o.minus), 1e-4) << c.a << ' ' << bg;
            EXPECT_NEAR(d.median(), o.median, 1e-6);
        }
    }
}

TEST(Muckenhoupt, BracketsKnownConstants)
{
    auto g = muckenhoupt_estimate(build_distribution(sample(gauss, -8, 8, 8001)));
    EXPECT_LE(g.lower, 1.0);
    EXPECT_GE(g.upper, 1.0);
    auto e = muckenhoupt_estimate(build_distribution(sample([](double x) { return std::exp(-x); }, 0, 40, 40001)));
    EXPECT_LE(e.lower, 0.25);
    EXPECT_GE(e.upper, 0.25);
}

TEST(Muckenhoupt, RandomModelMeasures)
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0, 1);
    int done = 0;
    while (done < 20) {
        double K = -2 + 4 * U(rng), N = U(rng) < 0.3 ? kInf : 2 + 6 * U(rng), h = -2 + 4 * U(rng);
        CurvatureDimension cd(K, N);
        Interval s = model_support(cd, h);
        double lo = std::max(s.lo, -3.0), hi = std::min(s.hi, 3.0);
        double a = lo + (hi - lo) * 0.4 * U(rng), b = hi - (hi - lo) * 0.4 * U(rng);
        ModelMeasure m(cd, h, a, b);
        if (!m.regular()) continue;
        double lam = sl_first_eigenvalue(m, 1e-9).lambda;
        auto e = muckenhoupt_estimate(build_distribution(sample_density(m, 4001)));
        EXPECT_GE(lam, e.lower) << K << ' ' << N << ' ' << h;
        EXPECT_LE(lam, e.upper) << K << ' ' << N << ' ' << h;
        ++done;
    }
}

TEST(Muckenhoupt, InteriorZeroGivesInfinity)
{
    auto g = sample([](double x) { return std::abs(x) < 0.2 ? 0.0 : 1.0; }, -1, 1, 401);
    auto e = muckenhoupt_estimate(build_distribution(g));
    EXPECT_TRUE(std::isinf(e.b_minus + e.b_plus));
    EXPECT_EQ(e.lower, 0.0);
}

TEST(BobkovGotze, KnownLogSobolevConstants)
{
    auto g = bobkov_gotze_estimate(build_distribution(sample(gauss, -8, 8, 8001)));
    EXPECT_LE(g.lower, 1.0);
    EXPECT_GE(g.upper, 1.0);
    EXPECT_FALSE(g.truncation_dominated);
    EXPECT_EQ(g.constants_used.find("16") == std::string::npos, false);
    auto u = bobkov_gotze_estimate(build_distribution(sample([](double) { return 1.0; }, -1, 1, 4001)));
    EXPECT_LE(u.lower, kPi * kPi / 4);
    EXPECT_GE(u.upper, kPi * kPi / 4);
}

TEST(BobkovGotze, ExponentialIsTruncationDominated)
{
    double prev = 0;
    for (double R : {10.0, 20.0, 40.0}) {
        auto e = bobkov_gotze_estimate(build_distribution(sample([](double x) { return std::exp(-x); }, 0, R, 1000 * R + 1)));
        EXPECT_GT(e.b_plus, prev);
        prev = e.b_plus;
        if (R == 40.0) {
            EXPECT_TRUE(e.truncation_dominated);
            EXPECT_EQ(e.lower, 0.0);
        }
    }
}

TEST(BobkovGotze, SupremandCurveMaxIsBPlus)
{
    auto d = build_distribution(sample([](double x) { return std::exp(x * x / 2); }, -1, 1, 2001));
    auto e = bobkov_gotze_estimate(d);
    auto c = hardy_supremand_curve(d, HardyKind::bobkov_gotze);
    double mx = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.x(i) > d.median()) mx = std::max(mx, c.values[i]);
    EXPECT_LT(rel(mx, e.b_plus), 1e-6);
}

TEST(Upsilon0, Examples)
{
    EXPECT_NEAR(ls_upsilon0(1, 2), 1.0 / ((std::exp(0.5) - 1) / 2), 1e-12);
    EXPECT_NEAR(ls_upsilon0(1, 2), 3.0828, 5e-4);
    for (double D : {0.5, 1.0, 3.0}) EXPECT_LT(rel(ls_upsilon0(1e-6, D), 8 / (D * D)), 1e-5);
    for (double k : {0.3, 2.0, 7.0})
        for (double D : {0.4, 1.5}) EXPECT_LT(rel(ls_upsilon0(k, D), k * ls_upsilon0(1, std::sqrt(k) * D)), 1e-12);
    EXPECT_THROW(ls_upsilon0(0, 1), DomainError);
    EXPECT_THROW(ls_upsilon0(1, kInf), DomainError);
}

TEST(LsBoundClosed, Examples)
{
    auto a = ls_bound_closed(0, 2);
    EXPECT_NEAR(a.value, kPi * kPi / 4, 1e-14);
    EXPECT_EQ(a.exactness, Exactness::exact);
    auto b = ls_bound_closed(3, 10);
    EXPECT_DOUBLE_EQ(b.value, 3.0);
    EXPECT_EQ(b.exactness, Exactness::up_to_constants);
    auto c = ls_bound_closed(-1, 2);
    EXPECT_NEAR(c.value, ls_upsilon0(1, 2), 1e-12);
    EXPECT_EQ(c.exactness, Exactness::up_to_constants);
    EXPECT_DOUBLE_EQ(ls_bound_closed(4, kInf).value, 4.0);
    auto z = ls_bound_closed(-1, kInf);
    EXPECT_EQ(z.value, 0.0);
    EXPECT_FALSE(z.note.empty());
}

TEST(Isoperimetric, FlatProfileExamples)
{
    auto u = build_distribution(sample([](double) { return 1.0; }, 0, 1, 1001));
    EXPECT_NEAR(isoperimetric_profile_flat(u, 0.25), 1.0, 1e-12);
    auto g = build_distribution(sample(gauss, -8, 8, 16001));
    EXPECT_NEAR(isoperimetric_profile_flat(g, 0.5), 0.39894, 1e-5);
    for (double t : {0.1, 0.3}) EXPECT_NEAR(isoperimetric_profile_flat(g, t), isoperimetric_profile_flat(g, 1 - t), 1e-9);
    EXPECT_THROW(isoperimetric_profile_flat(u, 0.0), DomainError);
    EXPECT_THROW(isoperimetric_profile_flat(u, 1.0), DomainError);
}

TEST(Isoperimetric, CheegerAndLedoux)
{
    auto u = build_distribution(sample([](double) { return 1.0; }, 0, 1, 1001));
    double h = cheeger_constant(u);
    EXPECT_NEAR(h, 2.0, 1e-9);
    EXPECT_LE(0.5 * h, std::sqrt(kPi * kPi));
    for (auto* f : {+[](double) { return 1.0; }, +gauss}) {
        auto d = build_distribution(sample(f, -3, 3, 2001));
        EXPECT_LE(ledoux_constant(d), cheeger_constant(d) / std::sqrt(std::log(2.0)) * (1 + 1e-12));
    }
}

TEST(IntegralEstimates, BracketsHold)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    for (double R : {0.1, 1.0, 5.0}) {
        double I1 = GK::integrate([](double x) { return std::exp(x * x / 2); }, 0.0, R, 15);
        EXPECT_TRUE(est1_bracket(1, R).contains(I1)) << R;
        for (double k : {0.1, 1.0, 10.0}) {
            double I2 = GK::integrate([&](double x) { return std::exp(-k * x * x / 2); }, 0.0, R, 15);
            EXPECT_TRUE(est2_bracket(k, R).contains(I2)) << k << ' ' << R;
        }
    }
    for (bool grow : {true, false}) {
        double s = grow ? 1 : -1;
        double I3 = GK::integrate([&](double x) { return std::exp(s * 2 * x * x / 2); }, 0.5, 2.0, 15);
        EXPECT_TRUE(est3_bracket(2, 0.5, 2.0, grow).contains(I3));
    }
}

TEST(Equivalence, MuckenhouptMidpointVersusUpsilon0)
{
    double worst = 1;
    for (double k : {0.01, 0.1, 1.0, 10.0})
        for (double D : {0.5, 1.0, 2.0, 5.0}) {
            auto d = build_distribution(sample([&](double x) { return std::exp(k * x * x / 2); }, -D / 2, D / 2, 4001));
            double r = muckenhoupt_estimate(d).midpoint() / ls_upsilon0(k, D);
            worst = std::max({worst, r, 1 / r});
        }
    EXPECT_LE(worst, 64.0);
}
