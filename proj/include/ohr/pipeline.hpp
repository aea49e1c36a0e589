#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "ohr/analysis.hpp"
#include "ohr/csv.hpp"
#include "ohr/report.hpp"
#include "ohr/series.hpp"

namespace ohr {

enum class OutputFormat { Text, Json };

struct RunConfig {
    std::string input_path;
    /// The input holds the four component columns instead of prices.
    bool components_input = false;
    CsvOptions csv;
    DifferenceMode differencing = DifferenceMode::Levels;
    Innovation distribution = Innovation::StudentT;
    Criterion criterion = Criterion::Bic;
    int max_lag = 2;
    bool exhaustive = false;
    EstimationPath force_path = EstimationPath::Auto;
    int arch_lags = 2;
    std::vector<double> alpha_levels = {0.10, 0.05, 0.01};
    double decision_level = 0.05;
    std::uint64_t seed = 20240801;
    int restarts = 3;
    OutputFormat format = OutputFormat::Text;
    bool fixed_clock = false;
    bool emit_series = false;
    std::size_t min_rows = 30;

    /// Throws Config on out-of-range settings.
    void validate() const;
    AnalysisOptions analysis_options() const;
};

/// Exit codes: 0 ok, 2 config, 3 data, 4 convergence, 5 internal.
int exit_code_for(const std::exception& e);

/// Builds the report for one component system. `data` is filled in by the
/// caller; `returns` supplies the plot-ready series when requested.
ReportDocument build_report(const ComponentSeries& components, const ReturnSeries& returns, DataSummary data,
                            const RunConfig& config);

/// ingest -> difference -> split -> pre-test -> SURE or GARCH system (with
/// lag selection) -> Wald and significance tests -> report.
ReportDocument run_pipeline(const RunConfig& config);

/// Pipeline on a component system already in memory (simulated data or a
/// component CSV). The pre-split changes are the component sums.
ReportDocument run_pipeline(const ComponentSeries& components, const std::string& source, const RunConfig& config);

/// Same as run_pipeline but on prices already in memory.
ReportDocument run_pipeline(const PriceSeries& prices, std::size_t dropped_rows, const std::string& source,
                            const RunConfig& config);

}  // namespace ohr
