#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ohr/errors.hpp"
#include "ohr/series.hpp"

using namespace ohr;
using namespace std::chrono;

namespace {

std::vector<Date> make_days(std::size_t n) {
    std::vector<Date> d;
    sys_days day = sys_days{year{2020} / 1 / 1};
    for (std::size_t i = 0; i < n; ++i) d.emplace_back(day + std::chrono::days{static_cast<int>(i)});
    return d;
}

PriceSeries prices(std::vector<double> s, std::vector<double> f) {
    const std::size_t n = s.size();
    return PriceSeries(make_days(n), std::move(s), std::move(f));
}

}  // namespace

TEST_CASE("first_difference examples") {
    auto r = first_difference(prices({5, 5, 5}, {2, 2, 2}));
    CHECK(r.ds == std::vector<double>{0, 0});
    CHECK(r.df == std::vector<double>{0, 0});

    r = first_difference(prices({1, 2, 4}, {10, 12, 11}));
    CHECK(r.ds == std::vector<double>{1, 2});
    CHECK(r.df == std::vector<double>{2, -1});
    REQUIRE(r.dates.size() == 2);
    CHECK(r.dates[0] == Date{year{2020} / 1 / 2});
}

TEST_CASE("first_difference in logs") {
    auto r = first_difference(prices({1, std::exp(1.0), std::exp(3.0)}, {1, 1, 1}), DifferenceMode::Logs);
    CHECK(r.ds[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.ds[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("telescoping and monotone differences") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> s{100.0}, f{100.0};
        for (int i = 0; i < 40; ++i) {
            s.push_back(s.back() + u(gen));
            f.push_back(f.back() * u(gen));
        }
        const auto r = first_difference(prices(s, f));
        const double total = std::accumulate(r.ds.begin(), r.ds.end(), 0.0);
        CHECK(total == doctest::Approx(s.back() - s.front()).epsilon(1e-12));
        for (double d : r.ds) CHECK(d > 0.0);
    }
}

TEST_CASE("PriceSeries rejects bad input") {
    CHECK_THROWS_AS(prices({1, 2}, {1, 2}), Error);
    CHECK_THROWS_AS(prices({1, -2, 3}, {1, 2, 3}), Error);
    CHECK_THROWS_AS(prices({1, 2, 3}, {1, 2}), Error);
    CHECK_THROWS_AS(prices({1, 2, NAN}, {1, 2, 3}), Error);
    auto d = make_days(3);
    d[2] = d[1];
    try {
        PriceSeries(d, {1, 2, 3}, {1, 2, 3});
        FAIL("duplicate date accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidInput);
        CHECK(std::string(e.what()).find("2020-01-02") != std::string::npos);
    }
}

TEST_CASE("split_components examples") {
    ReturnSeries r{{-1, 2, 0, -3}, {0, 0, 0, 0}, {}};
    auto c = split_components(r);
    CHECK(c.ds_pos == std::vector<double>{0, 2, 0, 0});
    CHECK(c.ds_neg == std::vector<double>{-1, 0, 0, -3});

    r = ReturnSeries{{1, 2}, {1, 1}, {}};
    c = split_components(r);
    CHECK(c.ds_pos == std::vector<double>{1, 2});
    CHECK(c.ds_neg == std::vector<double>{0, 0});
}

TEST_CASE("split then re-sum is bit-identical and signs hold") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> z(0.0, 3.0);
    for (int rep = 0; rep < 100; ++rep) {
        ReturnSeries r;
        for (int i = 0; i < 57; ++i) {
            r.ds.push_back(i % 9 == 0 ? 0.0 : z(gen));
            r.df.push_back(z(gen));
        }
        const auto c = split_components(r);
        for (std::size_t t = 0; t < r.size(); ++t) {
            CHECK(c.ds_pos[t] + c.ds_neg[t] == r.ds[t]);
            CHECK(c.df_pos[t] + c.df_neg[t] == r.df[t]);
            CHECK(c.ds_pos[t] >= 0.0);
            CHECK(c.ds_neg[t] <= 0.0);
            CHECK(c.df_pos[t] >= 0.0);
            CHECK(c.df_neg[t] <= 0.0);
            CHECK((c.ds_pos[t] == 0.0 || c.ds_neg[t] == 0.0));
        }
    }
}

TEST_CASE("sample_moments examples") {
    std::vector<double> x{1, -1, 1, -1};
    auto m = sample_moments(x, x);
    CHECK(m.rho == doctest::Approx(1.0));
    CHECK(m.sigma_s == m.sigma_f);

    std::vector<double> y{-1, 1, -1, 1};
    CHECK(sample_moments(x, y).rho == doctest::Approx(-1.0));

    // Textbook formulas written out longhand.
    const std::vector<double> a{1, -1, 2, -2}, b{1.2, -0.8, 2.1, -2.3};
    const double ma = (1 - 1 + 2 - 2) / 4.0;
    const double mb = (1.2 - 0.8 + 2.1 - 2.3) / 4.0;
    double saa = 0, sbb = 0, sab = 0;
    for (int i = 0; i < 4; ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    m = sample_moments(a, b);
    CHECK(m.sigma_s == doctest::Approx(std::sqrt(saa / 3)).epsilon(1e-14));
    CHECK(m.sigma_f == doctest::Approx(std::sqrt(sbb / 3)).epsilon(1e-14));
    CHECK(m.rho == doctest::Approx(sab / std::sqrt(saa * sbb)).epsilon(1e-14));
    CHECK(m.mean_f == doctest::Approx(mb));
    CHECK_FALSE(m.degenerate);
}

TEST_CASE("constant series give rho 0 with the degenerate flag") {
    std::vector<double> c{2, 2, 2}, x{1, 2, 3};
    auto m = sample_moments(c, x);
    CHECK(m.rho == 0.0);
    CHECK(m.degenerate);
    CHECK(m.sigma_s == 0.0);
}

TEST_CASE("rho symmetry and affine invariance") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> pos(0.1, 10.0), shift(-5, 5);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x(30), y(30);
        for (int i = 0; i < 30; ++i) {
            x[i] = z(gen);
            y[i] = 0.5 * x[i] + z(gen);
        }
        const double rho = sample_moments(x, y).rho;
        CHECK(sample_moments(y, x).rho == doctest::Approx(rho).epsilon(1e-12));
        const double a = pos(gen), b = shift(gen);
        std::vector<double> xs(x);
        for (double& v : xs) v = a * v + b;
        CHECK(sample_moments(xs, y).rho == doctest::Approx(rho).epsilon(1e-10));
    }
}
