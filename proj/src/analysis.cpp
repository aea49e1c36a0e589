#include "ohr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ohr/errors.hpp"

namespace ohr {

const char* to_string(EstimationPath path) {
    switch (path) {
        case EstimationPath::Auto: return "auto";
        case EstimationPath::Sure: return "sure";
        case EstimationPath::Mgarch: return "mgarch";
    }
    return "?";
}

namespace {

SystemFit fit_with_covariance(const ComponentSeries& components, const LagOrders& orders,
                              const AnalysisOptions& options) {
    FitOptions fo = options.fit;
    fo.compute_covariance = true;
    return fit_mgarch(components, orders, options.innovation, fo);
}

}  // namespace

AsymmetryAnalysis analyze_asymmetry(const ComponentSeries& components, const AnalysisOptions& options) {
    components.validate();
    AsymmetryAnalysis out;

    const OlsFit ols_pos = ols_fit(components.ds_pos, components.df_pos);
    const OlsFit ols_neg = ols_fit(components.ds_neg, components.df_neg);
    out.pretest = multivariate_arch_test({ols_pos.residuals, ols_neg.residuals}, options.arch_lags);
    out.pretest_rejected = out.pretest.p_value < options.pretest_level;

    out.path_used = options.path;
    if (options.path == EstimationPath::Auto)
        out.path_used = out.pretest_rejected ? EstimationPath::Mgarch : EstimationPath::Sure;
    if (options.path == EstimationPath::Sure && out.pretest_rejected)
        out.warnings.push_back("ARCH pre-test rejected constant variance; SURE standard errors ignore the "
                               "conditional heteroskedasticity");
    if (options.path == EstimationPath::Mgarch && !out.pretest_rejected)
        out.warnings.push_back("ARCH pre-test did not reject constant variance; the GARCH system was forced");

    if (out.path_used == EstimationPath::Sure) {
        out.sure = sure_estimate(components);
        out.pos = out.sure->pos;
        out.neg = out.sure->neg;
        out.hedge_covariance = out.sure->hedge_covariance();
    } else {
        std::optional<SystemFit> fit;
        if (options.select_lags) {
            LagSearchOptions search;
            search.innovation = options.innovation;
            search.exhaustive = options.exhaustive;
            search.fit = options.fit;
            search.fit.compute_covariance = false;
            out.lag_selection = select_lags(components, options.max_lag, options.criterion, search);

            // Candidates in criterion order; the first with an invertible information matrix is used.
            std::vector<std::size_t> order(out.lag_selection->table.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            const auto& table = out.lag_selection->table;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (table[a].value != table[b].value) return table[a].value < table[b].value;
                return table[a].parameter_count < table[b].parameter_count;
            });
            for (std::size_t idx : order) {
                if (table[idx].failed) continue;
                SystemFit candidate = fit_with_covariance(components, table[idx].orders, options);
                if (candidate.covariance) {
                    if (idx != out.lag_selection->chosen_index)
                        out.warnings.push_back("criterion-best orders " + out.lag_selection->chosen.label() +
                                               " have a singular information matrix; using " +
                                               table[idx].orders.label());
                    fit = std::move(candidate);
                    break;
                }
            }
            if (!fit)
                throw Error(ErrorKind::Convergence, "inference",
                            "no lag-order candidate yields an invertible information matrix");
        } else {
            fit = fit_with_covariance(components, options.fixed_orders, options);
            if (!fit->covariance)
                throw Error(ErrorKind::NonInvertibleInformation, "optimize",
                            fit->covariance_error.value_or("parameter covariance unavailable"));
        }
        if (!fit->converged) out.warnings.push_back("likelihood maximization did not meet the gradient tolerance");
        if (fit->pd_violations > 0)
            out.warnings.push_back(std::to_string(fit->pd_violations) +
                                   " periods needed the positive-definiteness repair");

        out.hedge_covariance = fit->hedge_covariance();
        out.pos = {fit->params.h_pos, fit->params.alpha_pos, std::sqrt(out.hedge_covariance(0, 0)),
                   RatioKind::PositiveComponent, EstimationMethod::Mgarch, false};
        out.neg = {fit->params.h_neg, fit->params.alpha_neg, std::sqrt(out.hedge_covariance(1, 1)),
                   RatioKind::NegativeComponent, EstimationMethod::Mgarch, false};
        out.fit = std::move(fit);
    }

    out.wald = wald_symmetry_test(out.pos.h, out.neg.h, out.hedge_covariance);
    out.significance_pos = individual_significance(out.pos.h, *out.pos.se_h);
    out.significance_neg = individual_significance(out.neg.h, *out.neg.se_h);
    return out;
}

}  // namespace ohr
