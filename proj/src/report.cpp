#include "ohr/report.hpp"

#include <cstdio>
#include <sstream>

#include "ohr/errors.hpp"

namespace nlohmann {

template <typename T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json& j, const std::optional<T>& v) {
        if (v)
            j = *v;
        else
            j = nullptr;
    }
    static void from_json(const json& j, std::optional<T>& v) {
        if (j.is_null())
            v.reset();
        else
            v = j.get<T>();
    }
};

}  // namespace nlohmann

namespace ohr {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DataSummary, source, price_rows, dropped_rows, observations, first_date, last_date,
                                   differencing)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PretestSummary, method, statistic, dof, p_value, lags, level, rejected)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EstimateRow, name, value, se)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LagRow, orders, loglik, parameters, criterion_value, failed, chosen, note)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LagSummary, criterion, selected, table)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WaldSummary, restriction, estimate_diff, se_diff, statistic, dof, p_value, rejected)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SignificanceRow, hypothesis, estimate, se, statistic, p_value, rejected)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StrategyRow, asset_position, ratio_used, h, futures_position)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DescriptiveRatios, symmetric_ols, symmetric_ols_se, symmetric_moment, moment_pos,
                                   moment_neg)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReferenceValues, label, h_pos, h_neg, p_values)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Diagnostics, converged, iterations, gradient_norm, loglik, pd_violations, redraws,
                                   warnings, notes)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SeriesBlock, dates, ds, df, var_pos, var_neg, cov_cross)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportDocument, schema_version, generated_at, data, pretest, estimation_path,
                                   distribution, lags, estimates, descriptive, wald, significance, alpha_levels,
                                   decision_level, strategy, reference, diagnostics, series)

const EstimateRow& ReportDocument::estimate(const std::string& name) const {
    for (const auto& row : estimates)
        if (row.name == name) return row;
    throw Error(ErrorKind::InvalidInput, "cli", "report has no estimate named " + name);
}

nlohmann::json to_json(const ReportDocument& report) {
    nlohmann::json j = report;
    return j;
}

ReportDocument report_from_json(const nlohmann::json& j) {
    const std::string version = j.at("schema_version").get<std::string>();
    if (version != kSchemaVersion)
        throw Error(ErrorKind::Config, "cli", "unsupported report schema_version " + version);
    return j.get<ReportDocument>();
}

std::string emit_json(const ReportDocument& report) { return to_json(report).dump(2) + "\n"; }

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string pval(double p) { return p < 0.00001 ? "< 0.00001" : fmt("%.6f", p); }

}  // namespace

std::string render_text(const ReportDocument& r) {
    std::ostringstream out;
    out << "Asymmetric optimal hedge ratio report (schema " << r.schema_version << ")\n";
    if (!r.generated_at.empty()) out << "generated: " << r.generated_at << "\n";
    out << "\nData\n";
    out << "  source:        " << r.data.source << "\n";
    if (r.data.price_rows > 0)
        out << "  price rows:    " << r.data.price_rows << " (dropped " << r.data.dropped_rows << ")\n";
    out << "  changes T:     " << r.data.observations << " (" << r.data.differencing << ")\n";
    if (!r.data.first_date.empty()) out << "  period:        " << r.data.first_date << " to " << r.data.last_date << "\n";

    out << "\nARCH pre-test (" << r.pretest.method << ", " << r.pretest.lags << " lags)\n";
    out << "  LM = " << fmt("%.6f", r.pretest.statistic) << ", dof = " << r.pretest.dof
        << ", p = " << pval(r.pretest.p_value) << (r.pretest.rejected ? "  -> reject constant variance" : "  -> constant variance not rejected")
        << "\n";
    out << "  estimation path: " << r.estimation_path << " (" << r.distribution << ")\n";

    if (r.lags) {
        out << "\nLag selection (" << r.lags->criterion << "), selected " << r.lags->selected << "\n";
        for (const auto& row : r.lags->table) {
            out << "  " << (row.chosen ? "* " : "  ") << row.orders << "  k=" << row.parameters;
            if (row.loglik) out << "  loglik=" << fmt("%.6f", *row.loglik);
            if (row.criterion_value) out << "  value=" << fmt("%.6f", *row.criterion_value);
            if (row.failed) out << "  [failed: " << row.note << "]";
            out << "\n";
        }
    }

    out << "\nEstimates\n";
    for (const auto& e : r.estimates) {
        out << "  " << e.name;
        for (std::size_t pad = e.name.size(); pad < 16; ++pad) out << ' ';
        out << fmt("%12.6f", e.value);
        if (e.se) out << "  (se " << fmt("%.6f", *e.se) << ")";
        out << "\n";
    }
    out << "  descriptive: OLS h = " << fmt("%.6f", r.descriptive.symmetric_ols)
        << ", moment h = " << fmt("%.6f", r.descriptive.symmetric_moment)
        << ", moment h+ = " << fmt("%.6f", r.descriptive.moment_pos)
        << ", moment h- = " << fmt("%.6f", r.descriptive.moment_neg) << "\n";

    out << "\nHypothesis tests (decision level " << fmt("%.6g", r.decision_level) << ")\n";
    for (const auto& s : r.significance)
        out << "  H0: " << s.hypothesis << "   chi2(1) = " << fmt("%.6f", s.statistic) << "   p = " << pval(s.p_value)
            << (s.rejected ? "   rejected" : "") << "\n";
    out << "  H0: " << r.wald.restriction << "   diff = " << fmt("%.6f", r.wald.estimate_diff) << " (se "
        << fmt("%.6f", r.wald.se_diff) << ")   chi2(" << r.wald.dof << ") = " << fmt("%.6f", r.wald.statistic)
        << "   p = " << pval(r.wald.p_value) << (r.wald.rejected ? "   rejected" : "") << "\n";

    if (r.strategy) {
        out << "\nHedging strategy\n";
        for (const auto& s : *r.strategy)
            out << "  " << s.asset_position << " asset: use " << s.ratio_used << " = " << fmt("%.6f", s.h) << " -> "
                << s.futures_position << " futures\n";
    }
    if (r.reference) {
        out << "\nReference (" << r.reference->label << ")\n";
        out << "  h_pos = " << fmt("%.6f", r.reference->h_pos) << ", h_neg = " << fmt("%.6f", r.reference->h_neg)
            << ", all p " << r.reference->p_values << "\n";
    }

    out << "\nDiagnostics\n";
    if (r.diagnostics.converged) out << "  converged: " << (*r.diagnostics.converged ? "yes" : "no") << "\n";
    if (r.diagnostics.iterations) out << "  iterations: " << *r.diagnostics.iterations << "\n";
    if (r.diagnostics.gradient_norm) out << "  gradient norm: " << fmt("%.6g", *r.diagnostics.gradient_norm) << "\n";
    if (r.diagnostics.loglik) out << "  log-likelihood: " << fmt("%.6f", *r.diagnostics.loglik) << "\n";
    out << "  PD repairs: " << r.diagnostics.pd_violations << "\n";
    if (r.diagnostics.redraws) out << "  redraws: " << *r.diagnostics.redraws << "\n";
    for (const auto& w : r.diagnostics.warnings) out << "  warning: " << w << "\n";
    for (const auto& n : r.diagnostics.notes) out << "  note: " << n << "\n";
    return out.str();
}

}  // namespace ohr
