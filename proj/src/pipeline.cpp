#include "ohr/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "ohr/errors.hpp"
#include "ohr/static_ohr.hpp"

namespace ohr {

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void RunConfig::validate() const {
    const auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, "cli", m); };
    if (max_lag < 1 || max_lag > 8) fail("max_lag must be in [1, 8]");
    if (arch_lags < 1) fail("arch_lags must be at least 1");
    if (restarts < 0) fail("restarts must be nonnegative");
    if (!(decision_level > 0.0 && decision_level < 1.0)) fail("decision level must be in (0, 1)");
    for (double a : alpha_levels)
        if (!(a > 0.0 && a < 1.0)) fail("alpha levels must be in (0, 1)");
    if (csv.date_column.empty() || csv.spot_column.empty() || csv.futures_column.empty())
        fail("column names must be nonempty");
}

AnalysisOptions RunConfig::analysis_options() const {
    AnalysisOptions a;
    a.path = force_path;
    a.arch_lags = arch_lags;
    a.pretest_level = decision_level;
    a.innovation = distribution;
    a.criterion = criterion;
    a.max_lag = max_lag;
    a.exhaustive = exhaustive;
    a.select_lags = true;
    a.fit.optimizer.seed = seed;
    a.fit.optimizer.restarts = restarts;
    return a;
}

int exit_code_for(const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    if (!err) return 5;
    switch (err->kind()) {
        case ErrorKind::Config: return 2;
        case ErrorKind::InvalidInput:
        case ErrorKind::InsufficientData:
        case ErrorKind::DegenerateHedge:
        case ErrorKind::RankDeficiency:
        case ErrorKind::DegenerateCovariance: return 3;
        case ErrorKind::Convergence:
        case ErrorKind::NonInvertibleInformation:
        case ErrorKind::InvalidStart:
        case ErrorKind::ConstraintViolation: return 4;
    }
    return 5;
}

ReportDocument build_report(const ComponentSeries& components, const ReturnSeries& returns, DataSummary data,
                            const RunConfig& config) {
    config.validate();
    const AsymmetryAnalysis a = analyze_asymmetry(components, config.analysis_options());

    ReportDocument r;
    r.generated_at = config.fixed_clock ? "1970-01-01T00:00:00Z" : utc_now();
    r.data = std::move(data);
    r.alpha_levels = config.alpha_levels;
    r.decision_level = config.decision_level;

    r.pretest = {"multivariate ARCH-LM on vech(u u'), stand-in for the published multivariate ARCH test",
                 a.pretest.statistic,
                 a.pretest.dof,
                 a.pretest.p_value,
                 a.pretest.lags_used,
                 config.decision_level,
                 a.pretest_rejected};
    r.estimation_path = to_string(a.path_used);
    r.distribution = a.fit ? to_string(a.fit->innovation) : "gaussian (SURE)";

    if (a.lag_selection) {
        LagSummary ls;
        ls.criterion = to_string(a.lag_selection->criterion);
        ls.selected = a.fit ? a.fit->orders.label() : a.lag_selection->chosen.label();
        for (std::size_t i = 0; i < a.lag_selection->table.size(); ++i) {
            const IcCandidate& c = a.lag_selection->table[i];
            LagRow row;
            row.orders = c.orders.label();
            row.parameters = c.parameter_count;
            if (std::isfinite(c.loglik)) row.loglik = c.loglik;
            if (std::isfinite(c.value)) row.criterion_value = c.value;
            row.failed = c.failed;
            row.chosen = a.fit && c.orders == a.fit->orders;
            row.note = c.note;
            ls.table.push_back(std::move(row));
        }
        r.lags = std::move(ls);
    }

    if (a.fit) {
        const ParameterLayout layout(a.fit->orders, a.fit->innovation);
        const Eigen::VectorXd v = layout.pack(a.fit->params);
        for (std::size_t i = 0; i < a.fit->names.size(); ++i) {
            const double se = a.fit->se(static_cast<Eigen::Index>(i));
            r.estimates.push_back({a.fit->names[i], v(static_cast<Eigen::Index>(i)),
                                   std::isfinite(se) ? std::optional<double>(se) : std::nullopt});
        }
        r.diagnostics.converged = a.fit->converged;
        r.diagnostics.iterations = a.fit->iterations;
        r.diagnostics.gradient_norm = a.fit->gradient_norm;
        r.diagnostics.loglik = a.fit->loglik;
        r.diagnostics.pd_violations = a.fit->pd_violations;
    } else {
        const SureResult& s = *a.sure;
        const Eigen::Matrix4d& c = s.coefficient_covariance;
        r.estimates = {
            {"alpha_pos", s.pos.alpha, std::sqrt(c(0, 0))}, {"h_pos", s.pos.h, std::sqrt(c(1, 1))},
            {"alpha_neg", s.neg.alpha, std::sqrt(c(2, 2))}, {"h_neg", s.neg.h, std::sqrt(c(3, 3))},
            {"sigma2_pos", s.residual_covariance(0, 0), std::nullopt},
            {"sigma2_neg", s.residual_covariance(1, 1), std::nullopt},
            {"sigma_cross", s.residual_covariance(0, 1), std::nullopt},
        };
    }

    const OlsFit sym = ols_fit(returns.ds, returns.df);
    r.descriptive.symmetric_ols = sym.estimate.h;
    r.descriptive.symmetric_ols_se = sym.estimate.se_h;
    r.descriptive.symmetric_moment = symmetric_ohr_moment(sample_moments(returns.ds, returns.df)).h;
    const auto [mp, mn] = asymmetric_ohr_moment(components);
    r.descriptive.moment_pos = mp.h;
    r.descriptive.moment_neg = mn.h;

    r.wald = {"h_pos - h_neg = 0", a.wald.estimate_diff, a.wald.se_diff, a.wald.statistic,
              a.wald.dof,          a.wald.p_value,       a.wald.p_value < config.decision_level};
    const bool sig_pos = a.significance_pos.p_value < config.decision_level;
    const bool sig_neg = a.significance_neg.p_value < config.decision_level;
    r.significance = {
        {"h_pos = 0", a.pos.h, *a.pos.se_h, a.significance_pos.statistic, a.significance_pos.p_value, sig_pos},
        {"h_neg = 0", a.neg.h, *a.neg.se_h, a.significance_neg.statistic, a.significance_neg.p_value, sig_neg},
    };

    // A short-asset hedger fears rising prices and uses h_pos; a long one uses h_neg.
    std::vector<StrategyRow> strategy;
    const auto add = [&](Position asset, const char* ratio, double h) {
        const auto s = strategy_for(h, asset);
        strategy.push_back({to_string(asset), ratio, h, s ? to_string(s->futures_position) : "none"});
    };
    if (sig_pos) add(Position::Short, "h_pos", a.pos.h);
    if (sig_neg) add(Position::Long, "h_neg", a.neg.h);
    if (!strategy.empty()) r.strategy = std::move(strategy);

    ReferenceValues ref;
    ref.label = "published Bitcoin spot/futures estimates, daily data Dec 2017 - Mar 2024; data vintage and futures "
                "roll convention differ, so values are not reproduction targets";
    r.reference = ref;

    r.diagnostics.warnings = a.warnings;
    if (!r.wald.rejected)
        r.diagnostics.notes.push_back("symmetry not rejected at the decision level: a common hedge ratio is adequate");
    else
        r.diagnostics.notes.push_back("symmetry rejected: hedge with the position-dependent ratio");
    r.diagnostics.notes.push_back("standard errors from the observed information (inverse Hessian); a robust "
                                  "sandwich covariance is future work");

    if (config.emit_series) {
        SeriesBlock sb;
        for (const Date& d : returns.dates) sb.dates.push_back(format_date(d));
        sb.ds = returns.ds;
        sb.df = returns.df;
        if (a.fit) {
            const FilteredVolatility f = filter(a.fit->params, residuals(a.fit->params, components));
            sb.var_pos = f.var_pos;
            sb.var_neg = f.var_neg;
            sb.cov_cross = f.cov_cross;
        }
        r.series = std::move(sb);
    }
    return r;
}

ReportDocument run_pipeline(const PriceSeries& prices, std::size_t dropped_rows, const std::string& source,
                            const RunConfig& config) {
    config.validate();
    if (prices.size() < config.min_rows)
        throw Error(ErrorKind::InsufficientData, "cli",
                    "only " + std::to_string(prices.size()) + " usable rows; at least " +
                        std::to_string(config.min_rows) + " required");
    const ReturnSeries returns = first_difference(prices, config.differencing);
    const ComponentSeries components = split_components(returns);

    DataSummary data;
    data.source = source;
    data.price_rows = prices.size();
    data.dropped_rows = dropped_rows;
    data.observations = returns.size();
    data.first_date = format_date(prices.dates().front());
    data.last_date = format_date(prices.dates().back());
    data.differencing = config.differencing == DifferenceMode::Levels ? "levels" : "logs";
    return build_report(components, returns, std::move(data), config);
}

ReportDocument run_pipeline(const ComponentSeries& components, const std::string& source, const RunConfig& config) {
    config.validate();
    components.validate();
    if (components.size() + 1 < config.min_rows)
        throw Error(ErrorKind::InsufficientData, "cli",
                    "only " + std::to_string(components.size()) + " component rows; at least " +
                        std::to_string(config.min_rows - 1) + " required");
    ReturnSeries returns;
    for (std::size_t t = 0; t < components.size(); ++t) {
        returns.ds.push_back(components.ds_pos[t] + components.ds_neg[t]);
        returns.df.push_back(components.df_pos[t] + components.df_neg[t]);
    }
    DataSummary data;
    data.source = source;
    data.observations = components.size();
    data.differencing = "components";
    return build_report(components, returns, std::move(data), config);
}

ReportDocument run_pipeline(const RunConfig& config) {
    config.validate();
    if (config.components_input)
        return run_pipeline(ingest_components_csv(config.input_path, config.csv.delimiter), config.input_path, config);
    const IngestResult in = ingest_csv(config.input_path, config.csv);
    return run_pipeline(in.prices, in.dropped_rows, config.input_path, config);
}

}  // namespace ohr
