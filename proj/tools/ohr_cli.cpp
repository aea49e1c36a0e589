#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "ohr/analysis.hpp"
#include "ohr/csv.hpp"
#include "ohr/errors.hpp"
#include "ohr/inference.hpp"
#include "ohr/pipeline.hpp"
#include "ohr/report.hpp"
#include "ohr/sim.hpp"

namespace {

using namespace ohr;

const std::map<std::string, DifferenceMode> kDiff{{"levels", DifferenceMode::Levels}, {"logs", DifferenceMode::Logs}};
const std::map<std::string, Innovation> kDist{{"gaussian", Innovation::Gaussian}, {"student_t", Innovation::StudentT}};
const std::map<std::string, Criterion> kCrit{{"aic", Criterion::Aic}, {"bic", Criterion::Bic}, {"hqc", Criterion::Hqc}};
const std::map<std::string, EstimationPath> kPath{
    {"auto", EstimationPath::Auto}, {"sure", EstimationPath::Sure}, {"mgarch", EstimationPath::Mgarch}};
const std::map<std::string, OutputFormat> kFormat{{"text", OutputFormat::Text}, {"json", OutputFormat::Json}};

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

// Flags shared by every subcommand that runs the estimation pipeline.
void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--distribution", cfg.distribution, "innovation law")
        ->transform(CLI::CheckedTransformer(kDist, CLI::ignore_case));
    cmd->add_option("--criterion", cfg.criterion, "lag-order criterion")
        ->transform(CLI::CheckedTransformer(kCrit, CLI::ignore_case));
    cmd->add_option("--max-lag", cfg.max_lag, "largest ARCH/GARCH order searched");
    cmd->add_flag("--exhaustive", cfg.exhaustive, "search orders per equation instead of tied orders");
    cmd->add_option("--force-path", cfg.force_path, "override the pre-test decision")
        ->transform(CLI::CheckedTransformer(kPath, CLI::ignore_case));
    cmd->add_option("--arch-lags", cfg.arch_lags, "lags in the ARCH pre-test");
    cmd->add_option("--alpha", cfg.alpha_levels, "significance levels reported");
    cmd->add_option("--level", cfg.decision_level, "decision level for the tests and the strategy section");
    cmd->add_option("--seed", cfg.seed, "optimizer restart seed");
    cmd->add_option("--restarts", cfg.restarts, "jittered optimizer restarts");
    cmd->add_option("--format", cfg.format, "report format")->transform(CLI::CheckedTransformer(kFormat, CLI::ignore_case));
    cmd->add_flag("--fixed-clock", cfg.fixed_clock, "stamp reports with the epoch (reproducible output)");
    cmd->add_flag("--emit-series", cfg.emit_series, "include plot-ready series in the JSON report");
}

void add_input_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("-i,--input", cfg.input_path, "price CSV (default: $OHR_INPUT)");
    cmd->add_flag("--components", cfg.components_input, "input holds ds_pos, ds_neg, df_pos, df_neg columns");
    cmd->add_option("--date-column", cfg.csv.date_column);
    cmd->add_option("--spot-column", cfg.csv.spot_column);
    cmd->add_option("--futures-column", cfg.csv.futures_column);
    cmd->add_option("--date-format", cfg.csv.date_format, "strftime format of the date column");
    cmd->add_option("--differencing", cfg.differencing, "difference price levels or log prices")
        ->transform(CLI::CheckedTransformer(kDiff, CLI::ignore_case));
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Config, "cli", "cannot write " + path);
    f << text;
}

std::string render(const ReportDocument& r, OutputFormat format) {
    return format == OutputFormat::Json ? emit_json(r) : render_text(r);
}

void require_input(RunConfig& cfg) {
    if (cfg.input_path.empty()) cfg.input_path = env_or("OHR_INPUT", "");
    if (cfg.input_path.empty()) throw Error(ErrorKind::Config, "cli", "no input CSV given (use --input or OHR_INPUT)");
}

// --- test -----------------------------------------------------------------

struct TestArgs {
    std::string residuals;
    std::string pos_column = "u_pos";
    std::string neg_column = "u_neg";
    int arch_lags = 2;
    std::vector<double> wald;  // h_pos h_neg var_pos var_neg cov
    double level = 0.05;
};

ResidualPair read_residuals(const TestArgs& a) {
    std::ifstream f(a.residuals);
    if (!f) throw Error(ErrorKind::Config, "cli", "cannot open " + a.residuals);
    auto cols = read_numeric_columns(f, {a.pos_column, a.neg_column});
    return {std::move(cols[0]), std::move(cols[1])};
}

int run_test(const TestArgs& a) {
    nlohmann::json out;
    out["schema_version"] = kSchemaVersion;
    if (!a.residuals.empty()) {
        const ArchTestResult t = multivariate_arch_test(read_residuals(a), a.arch_lags);
        out["arch"] = {{"statistic", t.statistic}, {"dof", t.dof}, {"p_value", t.p_value}, {"lags", t.lags_used},
                       {"rejected", t.p_value < a.level}};
    }
    if (!a.wald.empty()) {
        if (a.wald.size() != 5)
            throw Error(ErrorKind::Config, "cli", "--wald takes h_pos h_neg var_pos var_neg cov");
        Eigen::Matrix2d cov;
        cov << a.wald[2], a.wald[4], a.wald[4], a.wald[3];
        const WaldResult w = wald_symmetry_test(a.wald[0], a.wald[1], cov);
        out["wald"] = {{"restriction", w.restriction}, {"estimate_diff", w.estimate_diff}, {"se_diff", w.se_diff},
                       {"statistic", w.statistic},     {"dof", w.dof},                     {"p_value", w.p_value},
                       {"rejected", w.p_value < a.level}};
    }
    if (out.size() == 1) throw Error(ErrorKind::Config, "cli", "test needs --residuals and/or --wald");
    std::cout << out.dump(2) << "\n";
    return 0;
}

// --- simulate -------------------------------------------------------------

struct SimArgs {
    double h_pos = 0.4;
    double h_neg = 0.7;
    std::size_t length = 1500;
    std::uint64_t seed = 1;
    std::string distribution = "gaussian";
    double nu = 8.0;
    std::size_t replications = 0;
    std::string dataset;
    std::string prices;
    std::string output;
};

DgpSpec dgp_from(const SimArgs& a) {
    DgpSpec spec;
    const auto it = kDist.find(a.distribution);
    if (it == kDist.end()) throw Error(ErrorKind::Config, "cli", "unknown distribution " + a.distribution);
    spec.innovation = it->second;
    spec.true_params = reference_params(a.h_pos, a.h_neg,
                                        spec.innovation == Innovation::StudentT ? std::optional<double>(a.nu) : std::nullopt);
    spec.length = a.length;
    spec.seed = a.seed;
    return spec;
}

std::string components_csv(const ComponentSeries& c) {
    std::string out = "ds_pos,ds_neg,df_pos,df_neg\n";
    char buf[128];
    for (std::size_t t = 0; t < c.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", c.ds_pos[t], c.ds_neg[t], c.df_pos[t], c.df_neg[t]);
        out += buf;
    }
    return out;
}

// Cumulates the simulated changes into price paths on consecutive days.
// Re-splitting these prices does not give back the simulated components.
std::string prices_csv(const SimulatedData& d) {
    double s = 1000.0, f = 1000.0;
    std::chrono::sys_days day = std::chrono::sys_days{std::chrono::year{2000} / 1 / 1};
    std::string out = "Date,Spot,Futures\n";
    char buf[96];
    const auto row = [&] {
        std::snprintf(buf, sizeof buf, ",%.10f,%.10f\n", s, f);
        out += format_date(Date{day}) + buf;
    };
    row();
    for (std::size_t t = 0; t < d.returns.size(); ++t) {
        s += d.returns.ds[t];
        f += d.returns.df[t];
        day += std::chrono::days{1};
        if (!(s > 0.0 && f > 0.0)) throw Error(ErrorKind::InvalidInput, "sim", "simulated price path left the positive axis");
        row();
    }
    return out;
}

nlohmann::json study_json(const SimStudyResult& r) {
    nlohmann::json j;
    j["replications"] = r.replications;
    j["failures"] = r.failures;
    j["mgarch_path"] = r.mgarch_path;
    j["redraws"] = r.redraws;
    j["levels"] = r.levels;
    j["rejection_rate"] = r.rejection_rate;
    for (const auto& [name, p] : r.recovery)
        j["recovery"][name] = {{"truth", p.truth}, {"mean", p.mean}, {"bias", p.bias},
                               {"rmse", p.rmse},   {"mc_se", p.mc_se}, {"count", p.count}};
    j["failure_messages"] = r.failure_messages;
    return j;
}

int run_simulate(const SimArgs& a, const RunConfig& cfg) {
    const DgpSpec spec = dgp_from(a);
    if (a.replications > 0) {
        StudyOptions opts = StudyOptions::defaults();
        opts.analysis.innovation = spec.innovation;
        opts.analysis.path = cfg.force_path;
        opts.analysis.arch_lags = cfg.arch_lags;
        opts.analysis.pretest_level = cfg.decision_level;
        opts.analysis.fit.optimizer.seed = cfg.seed;
        const SimStudyResult r = run_study(spec, a.replications, opts);
        nlohmann::json j = study_json(r);
        j["schema_version"] = kSchemaVersion;
        j["dgp"] = {{"h_pos", a.h_pos}, {"h_neg", a.h_neg}, {"length", a.length}, {"seed", a.seed},
                    {"distribution", a.distribution}};
        write_out(a.output, j.dump(2) + "\n");
        return 0;
    }
    const SimulatedData d = simulate(spec);
    if (!a.dataset.empty()) write_out(a.dataset, components_csv(d.components));
    if (!a.prices.empty()) write_out(a.prices, prices_csv(d));
    if ((!a.dataset.empty() || !a.prices.empty()) && a.output.empty()) return 0;
    ReportDocument r = run_pipeline(d.components, "simulated (seed " + std::to_string(a.seed) + ")", cfg);
    r.diagnostics.redraws = d.truth.redraws;
    write_out(a.output, render(r, cfg.format));
    return 0;
}

// --- lags -----------------------------------------------------------------

int run_lags(RunConfig cfg) {
    require_input(cfg);
    cfg.validate();
    ComponentSeries comps;
    if (cfg.components_input) {
        comps = ingest_components_csv(cfg.input_path, cfg.csv.delimiter);
    } else {
        const IngestResult in = ingest_csv(cfg.input_path, cfg.csv);
        if (in.prices.size() < cfg.min_rows)
            throw Error(ErrorKind::InsufficientData, "cli", "fewer than " + std::to_string(cfg.min_rows) + " usable rows");
        comps = split_components(first_difference(in.prices, cfg.differencing));
    }
    LagSearchOptions search;
    search.innovation = cfg.distribution;
    search.exhaustive = cfg.exhaustive;
    search.fit.optimizer.seed = cfg.seed;
    search.fit.optimizer.restarts = cfg.restarts;
    search.fit.compute_covariance = false;
    const IcSelection sel = select_lags(comps, cfg.max_lag, cfg.criterion, search);

    if (cfg.format == OutputFormat::Json) {
        nlohmann::json j;
        j["schema_version"] = kSchemaVersion;
        j["criterion"] = to_string(sel.criterion);
        j["selected"] = sel.chosen.label();
        for (const IcCandidate& c : sel.table)
            j["table"].push_back({{"orders", c.orders.label()},
                                  {"parameters", c.parameter_count},
                                  {"loglik", std::isfinite(c.loglik) ? nlohmann::json(c.loglik) : nlohmann::json()},
                                  {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json()},
                                  {"failed", c.failed},
                                  {"note", c.note}});
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("criterion %s, selected %s\n", to_string(sel.criterion), sel.chosen.label().c_str());
        for (std::size_t i = 0; i < sel.table.size(); ++i) {
            const IcCandidate& c = sel.table[i];
            std::printf("%s %-28s k=%-3zu loglik=%.6f value=%.6f%s%s\n", i == sel.chosen_index ? "*" : " ",
                        c.orders.label().c_str(), c.parameter_count, c.loglik, c.value, c.failed ? "  failed: " : "",
                        c.note.c_str());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric and position-dependent optimal hedge ratios"};
    app.require_subcommand(1);

    RunConfig est_cfg;
    std::string est_output;
    auto* est = app.add_subcommand("estimate", "ingest prices, pre-test, estimate and test symmetry");
    add_input_flags(est, est_cfg);
    add_model_flags(est, est_cfg);
    est->add_option("-o,--output", est_output, "write the report here instead of stdout");

    TestArgs test_args;
    auto* test = app.add_subcommand("test", "ARCH pre-test on residual files and/or a Wald symmetry test");
    test->add_option("--residuals", test_args.residuals, "CSV with residual columns");
    test->add_option("--pos-column", test_args.pos_column);
    test->add_option("--neg-column", test_args.neg_column);
    test->add_option("--arch-lags", test_args.arch_lags);
    test->add_option("--wald", test_args.wald, "h_pos h_neg var_pos var_neg cov")->expected(5);
    test->add_option("--level", test_args.level);

    SimArgs sim_args;
    RunConfig sim_cfg;
    sim_cfg.restarts = 0;
    auto* sim = app.add_subcommand("simulate", "simulate the component system; report, dataset or study");
    sim->add_option("--h-pos", sim_args.h_pos);
    sim->add_option("--h-neg", sim_args.h_neg);
    sim->add_option("--length", sim_args.length, "number of changes T");
    sim->add_option("--sim-seed", sim_args.seed, "data seed");
    sim->add_option("--sim-distribution", sim_args.distribution, "gaussian or student_t");
    sim->add_option("--nu", sim_args.nu);
    sim->add_option("--replications", sim_args.replications, "run a Monte Carlo study instead of one report");
    sim->add_option("--dataset", sim_args.dataset, "write the simulated component series as a CSV");
    sim->add_option("--prices", sim_args.prices, "write cumulated price paths as a CSV");
    sim->add_option("-o,--output", sim_args.output);
    add_model_flags(sim, sim_cfg);

    RunConfig lag_cfg;
    auto* lags = app.add_subcommand("lags", "information-criterion table over lag orders");
    add_input_flags(lags, lag_cfg);
    add_model_flags(lags, lag_cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*est) {
            require_input(est_cfg);
            write_out(est_output, render(run_pipeline(est_cfg), est_cfg.format));
            return 0;
        }
        if (*test) return run_test(test_args);
        if (*sim) return run_simulate(sim_args, sim_cfg);
        if (*lags) return run_lags(lag_cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 5;
}
