#include <doctest.h>

#include <cmath>
#include <random>

#include "ohr/errors.hpp"
#include "ohr/mgarch.hpp"
#include "test_support.hpp"

using namespace ohr;

namespace {

GarchSystemParams constant_params(double gp, double gn, double gc, std::optional<double> nu = std::nullopt) {
    GarchSystemParams p;
    p.alpha_pos = 0.2;
    p.h_pos = 0.5;
    p.alpha_neg = -0.1;
    p.h_neg = 0.8;
    p.pos.gamma = gp;
    p.neg.gamma = gn;
    p.cross.gamma = gc;
    p.nu = nu;
    return p;
}

// i.i.d. bivariate density with covariance [[a, c], [c, b]], written out directly.
double iid_loglik(const ResidualPair& u, double a, double b, double c, std::optional<double> nu) {
    const double det = a * b - c * c;
    double ll = 0.0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        const double x = u.pos[t], y = u.neg[t];
        const double q = (b * x * x - 2 * c * x * y + a * y * y) / det;
        if (!nu) {
            ll += -std::log(2 * M_PI) - 0.5 * std::log(det) - 0.5 * q;
        } else {
            const double v = *nu;
            ll += std::lgamma((v + 2) / 2) - std::lgamma(v / 2) - std::log(M_PI * (v - 2)) - 0.5 * std::log(det) -
                  (v + 2) / 2 * std::log(1 + q / (v - 2));
        }
    }
    return ll;
}

}  // namespace

TEST_CASE("residuals examples") {
    ComponentSeries c = test::random_components(50, 1);
    GarchSystemParams p = constant_params(1, 1, 0);
    p.alpha_pos = 0.0;
    p.h_pos = 1.0;
    ComponentSeries exact = c;
    exact.ds_pos = exact.df_pos;
    for (double u : residuals(p, exact).pos) CHECK(u == 0.0);

    p.alpha_pos = 1.0;
    p.h_pos = 0.0;
    auto u = residuals(p, c);
    for (std::size_t t = 0; t < c.size(); ++t) CHECK(u.pos[t] == c.ds_pos[t] - 1.0);

    p = constant_params(1, 1, 0);
    u = residuals(p, c);
    for (std::size_t t = 0; t < c.size(); ++t) {
        CHECK(u.pos[t] == doctest::Approx(c.ds_pos[t] - 0.2 - 0.5 * c.df_pos[t]).epsilon(1e-15));
        CHECK(u.neg[t] == doctest::Approx(c.ds_neg[t] + 0.1 - 0.8 * c.df_neg[t]).epsilon(1e-15));
    }
}

TEST_CASE("constant-variance degeneracy") {
    const ComponentSeries c = test::random_components(200, 2);
    for (int order : {0, 1, 2}) {
        GarchSystemParams p = constant_params(0.3, 0.5, 0.1);
        for (auto* eq : {&p.pos, &p.neg, &p.cross}) {
            eq->phi.assign(order, 0.0);
            eq->lambda.assign(order, 0.0);
        }
        const auto f = filter(p, residuals(p, c));
        for (std::size_t t = 0; t < c.size(); ++t) {
            CHECK(f.var_pos[t] == 0.3);
            CHECK(f.var_neg[t] == 0.5);
            CHECK(f.cov_cross[t] == 0.1);
        }
        for (auto nu : {std::optional<double>{}, std::optional<double>{6.5}}) {
            p.nu = nu;
            const double oracle = iid_loglik(residuals(p, c), 0.3, 0.5, 0.1, nu);
            CHECK(log_likelihood(p, c, p.innovation()).value == doctest::Approx(oracle).epsilon(1e-12));
        }
    }
}

TEST_CASE("one-step recursion arithmetic") {
    GarchSystemParams p = constant_params(0.1, 0.1, 0.0);
    p.pos.phi = {0.2};
    p.pos.lambda = {0.3};
    p.neg.phi = {0.2};
    p.neg.lambda = {0.3};
    p.cross.phi = {0.0};
    p.cross.lambda = {0.0};
    PresampleValues init;
    init.var_pos = init.var_neg = 1.0;
    init.sq_pos = init.sq_neg = 4.0;
    ResidualPair u{{0.5, 0.1}, {-0.2, 0.3}};
    const auto f = filter(p, u, init);
    CHECK(f.var_pos[0] == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(f.var_neg[0] == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(f.var_pos[1] == doctest::Approx(0.1 + 0.2 * 0.25 + 0.3 * 1.2).epsilon(1e-15));
}

TEST_CASE("single observation at the origin has density -log(2 pi)") {
    GarchSystemParams p = constant_params(1.0, 1.0, 0.0);
    p.alpha_pos = p.alpha_neg = 0.0;
    ComponentSeries c{{0.0}, {0.0}, {0.0}, {0.0}};
    CHECK(log_likelihood(p, c, Innovation::Gaussian).value == doctest::Approx(-std::log(2 * M_PI)).epsilon(1e-15));
}

TEST_CASE("time-average variance approaches the unconditional level") {
    GarchSystemParams p = constant_params(0.05, 0.08, 0.02);
    p.pos.phi = {0.1};
    p.pos.lambda = {0.8};
    p.neg.phi = {0.15};
    p.neg.lambda = {0.7};
    p.cross.phi = {0.1};
    p.cross.lambda = {0.8};
    const ResidualPair u = test::simulate_residuals(p, 200000, 9);
    const auto f = filter(p, u, unconditional_moments(p));
    double mp = 0, mn = 0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        mp += f.var_pos[t];
        mn += f.var_neg[t];
    }
    mp /= u.size();
    mn /= u.size();
    CHECK(std::abs(mp / 0.5 - 1.0) < 0.05);
    CHECK(std::abs(mn / (0.08 / 0.15) - 1.0) < 0.05);
}

TEST_CASE("filter is causal") {
    GarchSystemParams p = test::garch11_params();
    const ComponentSeries c = test::random_components(300, 4);
    const ResidualPair u = residuals(p, c);
    const PresampleValues init = presample_from_residuals(u);
    const auto full = filter(p, u, init);
    for (std::size_t len : {1u, 17u, 150u}) {
        ResidualPair head{{u.pos.begin(), u.pos.begin() + len}, {u.neg.begin(), u.neg.begin() + len}};
        const auto part = filter(p, head, init);
        for (std::size_t t = 0; t < len; ++t) {
            CHECK(part.var_pos[t] == full.var_pos[t]);
            CHECK(part.var_neg[t] == full.var_neg[t]);
            CHECK(part.cov_cross[t] == full.cov_cross[t]);
        }
    }
}

TEST_CASE("Student-t with huge nu approaches the Gaussian likelihood") {
    GarchSystemParams p = test::garch11_params();
    const ComponentSeries c = test::random_components(200, 5);
    const double g = log_likelihood(p, c, Innovation::Gaussian).value;
    p.nu = 1e9;
    const double t = log_likelihood(p, c, Innovation::StudentT).value;
    CHECK(std::abs(g - t) < 1e-4);
}

TEST_CASE("log_likelihood is finite on feasible points and flags infeasible ones") {
    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 20; ++rep) {
        const GarchSystemParams p = test::random_feasible_params(gen, rep % 2 == 0);
        const ComponentSeries c = test::random_components(120, 100 + rep);
        const auto ll = log_likelihood(p, c, p.innovation());
        CHECK(std::isfinite(ll.value));
        CHECK(ll.feasible);
    }
    GarchSystemParams bad = test::garch11_params();
    bad.pos.gamma = -1.0;
    const auto ll = log_likelihood(bad, test::random_components(50, 3), Innovation::Gaussian);
    CHECK_FALSE(ll.feasible);
    CHECK(ll.value == kInfeasibleLogLik);
    CHECK_THROWS_AS(log_likelihood(test::garch11_params(), test::random_components(50, 3), Innovation::StudentT),
                    Error);
}

TEST_CASE("PD repair clamps the correlation and penalizes") {
    GarchSystemParams p = constant_params(1.0, 1.0, 1.5);
    const ComponentSeries c = test::random_components(40, 6);
    const auto f = filter(p, residuals(p, c));
    CHECK(f.pd_violations() == 40);
    const auto ll = log_likelihood(p, c, Innovation::Gaussian);
    CHECK(std::isfinite(ll.value));
    CHECK(ll.penalty > 0.0);
    CHECK(ll.pd_violations == 40);
    p.cross.gamma = 0.5;
    CHECK(log_likelihood(p, c, Innovation::Gaussian).penalty == 0.0);
}

TEST_CASE("standardized residuals are invariant to consistent rescaling") {
    const GarchSystemParams p = test::garch11_params();
    const ComponentSeries c = test::random_components(150, 7);
    const auto z = standardized_residuals(p, c);
    for (double k : {0.01, 7.0}) {
        ComponentSeries ck = c;
        for (auto* v : {&ck.ds_pos, &ck.ds_neg, &ck.df_pos, &ck.df_neg})
            for (double& x : *v) x *= k;
        GarchSystemParams pk = p;
        pk.alpha_pos *= k;
        pk.alpha_neg *= k;
        pk.pos.gamma *= k * k;
        pk.neg.gamma *= k * k;
        pk.cross.gamma *= k * k;
        const auto zk = standardized_residuals(pk, ck);
        for (std::size_t t = 0; t < c.size(); ++t) {
            CHECK(zk.pos[t] == doctest::Approx(z.pos[t]).epsilon(1e-10));
            CHECK(zk.neg[t] == doctest::Approx(z.neg[t]).epsilon(1e-10));
        }
    }
}

TEST_CASE("standardized residuals have identity covariance under the model") {
    const GarchSystemParams p = test::garch11_params();
    const ResidualPair u = test::simulate_residuals(p, 50000, 13);
    ComponentSeries c;
    // Build components that reproduce u exactly at alpha = h = 0 after the mean shift.
    GarchSystemParams q = p;
    q.alpha_pos = q.alpha_neg = q.h_pos = q.h_neg = 0.0;
    c.ds_pos = u.pos;
    c.ds_neg = u.neg;
    c.df_pos.assign(u.size(), 0.0);
    c.df_neg.assign(u.size(), 0.0);
    const auto z = standardized_residuals(q, c, unconditional_moments(q));
    double s11 = 0, s22 = 0, s12 = 0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        s11 += z.pos[t] * z.pos[t];
        s22 += z.neg[t] * z.neg[t];
        s12 += z.pos[t] * z.neg[t];
    }
    const double n = static_cast<double>(u.size());
    CHECK(s11 / n == doctest::Approx(1.0).epsilon(0.03));
    CHECK(s22 / n == doctest::Approx(1.0).epsilon(0.03));
    CHECK(std::abs(s12 / n) < 0.03);
}

TEST_CASE("parameter validation") {
    GarchSystemParams p = test::garch11_params();
    CHECK_NOTHROW(p.validate());
    p.pos.lambda = {0.95};
    CHECK_THROWS_AS(p.validate(), Error);
    p = test::garch11_params();
    p.neg.phi = {-0.1};
    CHECK_THROWS_AS(p.validate(), Error);
    p = test::garch11_params();
    p.nu = 2.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = test::garch11_params();
    p.cross.phi = {-0.3};  // cross coefficients are free in sign
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("layout round trip and names") {
    LagOrders o{2, 1, 1, 0, 0, 2};
    ParameterLayout layout(o, Innovation::StudentT);
    CHECK(layout.size() == 4 + (1 + 3) + (1 + 1) + (1 + 2) + 1);
    GarchSystemParams p;
    p.alpha_pos = 1;
    p.h_pos = 2;
    p.alpha_neg = 3;
    p.h_neg = 4;
    p.pos = {0.1, {0.05, 0.04}, {0.7}};
    p.neg = {0.2, {0.1}, {}};
    p.cross = {0.01, {}, {0.3, 0.2}};
    p.nu = 7.0;
    CHECK(layout.unpack(layout.pack(p)) == p);
    CHECK(p.orders() == o);
    const auto names = layout.names();
    CHECK(names.size() == static_cast<std::size_t>(layout.size()));
    CHECK(names[ParameterLayout::kHPos] == "h_pos");
    CHECK(names[ParameterLayout::kHNeg] == "h_neg");
    CHECK(names.back() == "nu");
    CHECK(LagOrders::uniform(1, 1).label() == "(1,1)");
    CHECK(o.max_lag() == 2);
}
