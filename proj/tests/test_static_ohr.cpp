#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "ohr/errors.hpp"
#include "ohr/static_ohr.hpp"

using namespace ohr;

namespace {

// Normal equations X'X b = X'y for [1 x], solved by Cramer's rule.
std::pair<double, double> normal_equations(const std::vector<double>& y, const std::vector<double>& x) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    return {(sxx * sy - sx * sxy) / det, (n * sxy - sx * sy) / det};  // intercept, slope
}

double cov_over_var(const std::vector<double>& y, const std::vector<double>& x) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= x.size();
    double c = 0, v = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        c += (x[i] - mx) * (y[i] - my);
        v += (x[i] - mx) * (x[i] - mx);
    }
    return c / v;
}

MomentSummary moments(double ss, double sf, double rho) {
    MomentSummary m;
    m.sigma_s = ss;
    m.sigma_f = sf;
    m.rho = rho;
    return m;
}

}  // namespace

TEST_CASE("symmetric_ohr_moment examples") {
    CHECK(symmetric_ohr_moment(moments(1.0, 2.0, 0.0)).h == 0.0);

    std::vector<double> df{1, -2, 0.5, 3, -1}, ds;
    for (double v : df) ds.push_back(2 * v);
    const auto m = sample_moments(ds, df);
    CHECK(m.rho == doctest::Approx(1.0));
    CHECK(m.sigma_s == doctest::Approx(2 * m.sigma_f));
    CHECK(symmetric_ohr_moment(m).h == doctest::Approx(2.0).epsilon(1e-14));

    const std::vector<double> a{1, -1, 2, -2}, b{1.2, -0.8, 2.1, -2.3};
    CHECK(symmetric_ohr_moment(sample_moments(a, b)).h == doctest::Approx(cov_over_var(a, b)).epsilon(1e-13));
    CHECK_THROWS_AS(symmetric_ohr_moment(moments(1.0, 0.0, 0.0)), Error);
}

TEST_CASE("ols_regression examples") {
    std::vector<double> x{1, 2, 3, 4, 5}, y(5, 3.0);
    auto e = ols_regression(y, x);
    CHECK(e.alpha == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::abs(e.h) < 1e-14);

    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2 * x[i];
    const auto fit = ols_fit(y, x);
    CHECK(fit.estimate.h == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(fit.estimate.alpha) < 1e-13);
    for (double r : fit.residuals) CHECK(std::abs(r) < 1e-13);

    const std::vector<double> a{1, -1, 2, -2}, b{1.2, -0.8, 2.1, -2.3};
    const auto [icpt, slope] = normal_equations(a, b);
    e = ols_regression(a, b);
    CHECK(e.h == doctest::Approx(slope).epsilon(1e-13));
    CHECK(e.alpha == doctest::Approx(icpt).scale(1.0).epsilon(1e-13));

    std::vector<double> flat(5, 1.0);
    try {
        ols_regression(x, flat);
        FAIL("constant regressor accepted");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::RankDeficiency);
    }
}

TEST_CASE("OLS classical standard error") {
    std::vector<double> x{0, 1, 2, 3, 4, 5}, y{0.1, 0.9, 2.2, 2.8, 4.1, 5.0};
    const auto fit = ols_fit(y, x);
    const auto [a, b] = normal_equations(y, x);
    double rss = 0, mx = 2.5, sxx = 0;
    for (int i = 0; i < 6; ++i) {
        const double r = y[i] - a - b * x[i];
        rss += r * r;
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    CHECK(*fit.estimate.se_h == doctest::Approx(std::sqrt(rss / 4 / sxx)).epsilon(1e-12));
}

TEST_CASE("OLS slope equals moment ratio on random data") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> len(10, 200);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = len(gen);
        std::vector<double> x(n), y(n);
        const double beta = 2 * z(gen);
        for (int i = 0; i < n; ++i) {
            x[i] = z(gen);
            y[i] = beta * x[i] + z(gen);
        }
        const double a = ols_regression(y, x).h;
        const double b = symmetric_ohr_moment(sample_moments(y, x)).h;
        CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(b), 1e-300));
    }
}

TEST_CASE("asymmetric_ohr_moment examples") {
    ComponentSeries c;
    c.df_pos = {1, 0, 2, 0, 0.5, 3};
    c.df_neg = {0, -1, 0, -2.5, 0, 0};
    for (double v : c.df_pos) c.ds_pos.push_back(1.5 * v);
    for (double v : c.df_neg) c.ds_neg.push_back(1.5 * v);
    auto [p, n] = asymmetric_ohr_moment(c);
    CHECK(p.h == doctest::Approx(1.5));
    CHECK(n.h == doctest::Approx(1.5));

    c.ds_pos.clear();
    c.ds_neg.clear();
    for (double v : c.df_pos) c.ds_pos.push_back(0.4 * v);
    for (double v : c.df_neg) c.ds_neg.push_back(0.7 * v);
    std::tie(p, n) = asymmetric_ohr_moment(c);
    CHECK(p.h == doctest::Approx(0.4));
    CHECK(n.h == doctest::Approx(0.7));
    CHECK(p.kind == RatioKind::PositiveComponent);
    CHECK(n.kind == RatioKind::NegativeComponent);
}

TEST_CASE("asymmetric_ohr_moment matches componentwise cov/var") {
    std::mt19937_64 gen(8);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 30; ++rep) {
        ReturnSeries r;
        for (int i = 0; i < 150; ++i) {
            const double f = z(gen);
            r.df.push_back(f);
            r.ds.push_back(0.6 * f + 0.5 * z(gen));
        }
        const auto c = split_components(r);
        const auto [p, n] = asymmetric_ohr_moment(c);
        CHECK(p.h == doctest::Approx(cov_over_var(c.ds_pos, c.df_pos)).epsilon(1e-12));
        CHECK(n.h == doctest::Approx(cov_over_var(c.ds_neg, c.df_neg)).epsilon(1e-12));
    }
}

TEST_CASE("portfolio_variance examples") {
    const auto m = moments(1.0, 1.0, 0.5);
    CHECK(portfolio_variance(1.0, 0.5, m) == doctest::Approx(0.75));
    CHECK(portfolio_variance(1.0, 0.0, m) == doctest::Approx(1.0));
    CHECK(portfolio_variance(2.0, 0.0, m) == doctest::Approx(4.0));
}

TEST_CASE("portfolio variance is convex with its minimum at the OHR") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> sd(0.1, 5.0), r(-0.99, 0.99);
    for (int rep = 0; rep < 50; ++rep) {
        const auto m = moments(sd(gen), sd(gen), r(gen));
        const double hstar = symmetric_ohr_moment(m).h;
        // Grid offset by a fraction of a step so h* is not itself a grid point.
        const double step = 0.02, first = hstar - 1.0 + 0.37 * step;
        std::size_t best = 0, closest = 0;
        std::vector<double> v(101);
        for (std::size_t i = 0; i < 101; ++i) {
            const double h = first + step * static_cast<double>(i);
            v[i] = portfolio_variance(1.0, h, m);
            if (v[i] < v[best]) best = i;
            if (std::abs(h - hstar) < std::abs(first + step * static_cast<double>(closest) - hstar)) closest = i;
        }
        CHECK(best == closest);
        for (std::size_t i = 1; i + 1 < 101; ++i) CHECK(v[i - 1] + v[i + 1] - 2 * v[i] > 0.0);
    }
}

TEST_CASE("OHR scaling properties") {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> z;
    std::vector<double> s(80), f(80);
    for (int i = 0; i < 80; ++i) {
        f[i] = z(gen);
        s[i] = 0.8 * f[i] + z(gen);
    }
    const double h = symmetric_ohr_moment(sample_moments(s, f)).h;
    for (double c : {0.01, 3.0, 1e4}) {
        std::vector<double> sc(s), fc(f);
        for (double& v : sc) v *= c;
        for (double& v : fc) v *= c;
        CHECK(symmetric_ohr_moment(sample_moments(sc, fc)).h == doctest::Approx(h).epsilon(1e-12));
        CHECK(symmetric_ohr_moment(sample_moments(s, fc)).h == doctest::Approx(h / c).epsilon(1e-12));
    }
}

TEST_CASE("strategy mapping") {
    auto s = strategy_for(0.7, Position::Long);
    REQUIRE(s);
    CHECK(s->futures_position == Position::Short);
    s = strategy_for(0.4, Position::Short);
    REQUIRE(s);
    CHECK(s->futures_position == Position::Long);
    s = strategy_for(-0.2, Position::Long);
    REQUIRE(s);
    CHECK(s->futures_position == Position::Long);
    CHECK_FALSE(strategy_for(0.0, Position::Long));

    for (double h : {-3.0, -0.1, 0.1, 2.0}) {
        const auto l = strategy_for(h, Position::Long);
        const auto sh = strategy_for(h, Position::Short);
        REQUIRE(l);
        REQUIRE(sh);
        CHECK(l->futures_position != sh->futures_position);
        CHECK(l->asset_position == Position::Long);
    }
}

TEST_CASE("HedgedPortfolio") {
    HedgedPortfolio p(2.0, 1.0);
    CHECK(p.hedge_ratio() == 0.5);
    CHECK(p.value_change(1.0, 1.0) == 1.0);
    CHECK_THROWS_AS(HedgedPortfolio(0.0, 1.0), Error);
}
