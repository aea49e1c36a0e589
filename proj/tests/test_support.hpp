#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "ohr/mgarch.hpp"
#include "ohr/series.hpp"

namespace ohr::test {

// Sign-valid components with a rough 0.4 / 0.7 relation to the futures side.
inline ComponentSeries random_components(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    ComponentSeries c;
    for (std::size_t t = 0; t < n; ++t) {
        const double f = z(gen);
        c.df_pos.push_back(std::max(f, 0.0));
        c.df_neg.push_back(std::min(f, 0.0));
        c.ds_pos.push_back(std::max(0.0, 0.5 + 0.4 * c.df_pos.back() + 0.3 * z(gen)));
        c.ds_neg.push_back(std::min(0.0, -0.5 + 0.7 * c.df_neg.back() + 0.3 * z(gen)));
    }
    return c;
}

inline GarchSystemParams garch11_params() {
    GarchSystemParams p;
    p.alpha_pos = 0.5;
    p.h_pos = 0.4;
    p.alpha_neg = -0.5;
    p.h_neg = 0.7;
    p.pos = {0.01, {0.1}, {0.8}};
    p.neg = {0.012, {0.12}, {0.75}};
    p.cross = {0.004, {0.1}, {0.8}};
    return p;
}

inline GarchSystemParams random_feasible_params(std::mt19937_64& gen, bool student) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GarchSystemParams p;
    p.alpha_pos = u(gen);
    p.h_pos = u(gen);
    p.alpha_neg = -u(gen);
    p.h_neg = u(gen);
    const auto eq = [&](double scale) {
        VarianceEquation e;
        e.phi = {0.05 + 0.2 * u(gen)};
        e.lambda = {0.6 * u(gen)};
        e.gamma = scale * (0.02 + 0.1 * u(gen));
        return e;
    };
    p.pos = eq(1.0);
    p.neg = eq(1.0);
    p.cross = eq(0.1);
    if (student) p.nu = 3.0 + 20.0 * u(gen);
    return p;
}

// Draws residuals from the system recursions with Gaussian innovations.
inline ResidualPair simulate_residuals(const GarchSystemParams& p, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    VolatilityRecursion rec(p, unconditional_moments(p));
    ResidualPair u;
    for (std::size_t t = 0; t < n; ++t) {
        const ConditionalMoments m = rec.next();
        const double l11 = std::sqrt(m.var_pos);
        const double l21 = m.cov / l11;
        const double l22 = std::sqrt(m.var_neg - l21 * l21);
        const double a = z(gen), b = z(gen);
        const double up = l11 * a, un = l21 * a + l22 * b;
        rec.push(up, un, m);
        u.pos.push_back(up);
        u.neg.push_back(un);
    }
    return u;
}

}  // namespace ohr::test
