#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ohr {

inline constexpr const char* kSchemaVersion = "1";

struct DataSummary {
    std::string source;
    std::size_t price_rows = 0;
    std::size_t dropped_rows = 0;
    std::size_t observations = 0;  // number of changes T
    std::string first_date;
    std::string last_date;
    std::string differencing;
    bool operator==(const DataSummary&) const = default;
};

struct PretestSummary {
    std::string method;
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int lags = 0;
    double level = 0.05;
    bool rejected = false;
    bool operator==(const PretestSummary&) const = default;
};

struct EstimateRow {
    std::string name;
    double value = 0.0;
    std::optional<double> se;
    bool operator==(const EstimateRow&) const = default;
};

struct LagRow {
    std::string orders;
    std::optional<double> loglik;
    std::size_t parameters = 0;
    std::optional<double> criterion_value;
    bool failed = false;
    bool chosen = false;
    std::string note;
    bool operator==(const LagRow&) const = default;
};

struct LagSummary {
    std::string criterion;
    std::string selected;
    std::vector<LagRow> table;
    bool operator==(const LagSummary&) const = default;
};

struct WaldSummary {
    std::string restriction;
    double estimate_diff = 0.0;
    double se_diff = 0.0;
    double statistic = 0.0;
    int dof = 1;
    double p_value = 1.0;
    bool rejected = false;
    bool operator==(const WaldSummary&) const = default;
};

struct SignificanceRow {
    std::string hypothesis;
    double estimate = 0.0;
    double se = 0.0;
    double statistic = 0.0;
    double p_value = 1.0;
    bool rejected = false;
    bool operator==(const SignificanceRow&) const = default;
};

struct StrategyRow {
    std::string asset_position;
    std::string ratio_used;  // "h_pos" or "h_neg"
    double h = 0.0;
    std::string futures_position;  // "long", "short" or "none"
    bool operator==(const StrategyRow&) const = default;
};

struct DescriptiveRatios {
    double symmetric_ols = 0.0;
    std::optional<double> symmetric_ols_se;
    double symmetric_moment = 0.0;
    double moment_pos = 0.0;
    double moment_neg = 0.0;
    bool operator==(const DescriptiveRatios&) const = default;
};

/// Published estimates for the Bitcoin spot/futures application
/// (Dec 2017 - Mar 2024), shown for comparison only.
struct ReferenceValues {
    std::string label;
    double h_pos = 0.399432;
    double h_neg = 0.713761;
    std::string p_values = "< 0.00001";
    bool operator==(const ReferenceValues&) const = default;
};

struct Diagnostics {
    std::optional<bool> converged;
    std::optional<int> iterations;
    std::optional<double> gradient_norm;
    std::optional<double> loglik;
    std::size_t pd_violations = 0;
    std::optional<std::size_t> redraws;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    bool operator==(const Diagnostics&) const = default;
};

struct SeriesBlock {
    std::vector<std::string> dates;
    std::vector<double> ds;
    std::vector<double> df;
    std::vector<double> var_pos;
    std::vector<double> var_neg;
    std::vector<double> cov_cross;
    bool operator==(const SeriesBlock&) const = default;
};

struct ReportDocument {
    std::string schema_version = kSchemaVersion;
    std::string generated_at;
    DataSummary data;
    PretestSummary pretest;
    std::string estimation_path;
    std::string distribution;
    std::optional<LagSummary> lags;
    std::vector<EstimateRow> estimates;
    DescriptiveRatios descriptive;
    WaldSummary wald;
    std::vector<SignificanceRow> significance;
    std::vector<double> alpha_levels;
    double decision_level = 0.05;
    std::optional<std::vector<StrategyRow>> strategy;
    std::optional<ReferenceValues> reference;
    Diagnostics diagnostics;
    std::optional<SeriesBlock> series;
    bool operator==(const ReportDocument&) const = default;

    /// Value of a named row in `estimates`; throws if absent.
    const EstimateRow& estimate(const std::string& name) const;
};

nlohmann::json to_json(const ReportDocument& report);
ReportDocument report_from_json(const nlohmann::json& j);

/// Canonical JSON text (2-space indent, trailing newline).
std::string emit_json(const ReportDocument& report);

/// Human-readable report; ratios are printed to 6 decimals.
std::string render_text(const ReportDocument& report);

}  // namespace ohr
