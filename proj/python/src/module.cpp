#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ohr/errors.hpp"
#include "ohr/inference.hpp"
#include "ohr/pipeline.hpp"
#include "ohr/sim.hpp"
#include "ohr/static_ohr.hpp"

namespace py = pybind11;
using namespace ohr;

namespace {

py::dict estimate_dict(const OhrEstimate& e) {
    py::dict d;
    d["h"] = e.h;
    d["alpha"] = e.alpha;
    d["se_h"] = e.se_h ? py::cast(*e.se_h) : py::none();
    d["kind"] = to_string(e.kind);
    d["method"] = to_string(e.method);
    return d;
}

py::dict components_dict(const ComponentSeries& c) {
    py::dict d;
    d["ds_pos"] = c.ds_pos;
    d["ds_neg"] = c.ds_neg;
    d["df_pos"] = c.df_pos;
    d["df_neg"] = c.df_neg;
    return d;
}

ComponentSeries components_from(std::vector<double> ds_pos, std::vector<double> ds_neg, std::vector<double> df_pos,
                                std::vector<double> df_neg) {
    ComponentSeries c{std::move(ds_pos), std::move(ds_neg), std::move(df_pos), std::move(df_neg)};
    c.validate();
    return c;
}

template <class Map>
auto lookup(const Map& m, const std::string& key, const char* what) {
    const auto it = m.find(key);
    if (it == m.end()) throw Error(ErrorKind::Config, "python", std::string("unknown ") + what + " " + key);
    return it->second;
}

RunConfig make_config(const std::string& distribution, const std::string& criterion, int max_lag,
                      const std::string& force_path, double level, std::uint64_t seed, int restarts) {
    RunConfig cfg;
    cfg.distribution = lookup(std::map<std::string, Innovation>{{"gaussian", Innovation::Gaussian},
                                                                {"student_t", Innovation::StudentT}},
                              distribution, "distribution");
    cfg.criterion = lookup(
        std::map<std::string, Criterion>{{"aic", Criterion::Aic}, {"bic", Criterion::Bic}, {"hqc", Criterion::Hqc}},
        criterion, "criterion");
    cfg.force_path = lookup(std::map<std::string, EstimationPath>{{"auto", EstimationPath::Auto},
                                                                  {"sure", EstimationPath::Sure},
                                                                  {"mgarch", EstimationPath::Mgarch}},
                            force_path, "path");
    cfg.max_lag = max_lag;
    cfg.decision_level = level;
    cfg.seed = seed;
    cfg.restarts = restarts;
    cfg.fixed_clock = true;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Symmetric and position-dependent optimal hedge ratios";

    py::register_exception<Error>(m, "OhrError", PyExc_ValueError);

    m.def(
        "moment_hedge_ratio",
        [](const std::vector<double>& ds, const std::vector<double>& df) {
            return estimate_dict(symmetric_ohr_moment(sample_moments(ds, df)));
        },
        py::arg("ds"), py::arg("df"));
    m.def(
        "ols_hedge_ratio",
        [](const std::vector<double>& ds, const std::vector<double>& df) { return estimate_dict(ols_regression(ds, df)); },
        py::arg("ds"), py::arg("df"));
    m.def(
        "split_components",
        [](std::vector<double> ds, std::vector<double> df) {
            ReturnSeries r{std::move(ds), std::move(df), {}};
            return components_dict(split_components(r));
        },
        py::arg("ds"), py::arg("df"));
    m.def(
        "asymmetric_moment_ratios",
        [](std::vector<double> ds_pos, std::vector<double> ds_neg, std::vector<double> df_pos,
           std::vector<double> df_neg) {
            const auto [pos, neg] = asymmetric_ohr_moment(components_from(ds_pos, ds_neg, df_pos, df_neg));
            return py::make_tuple(estimate_dict(pos), estimate_dict(neg));
        },
        py::arg("ds_pos"), py::arg("ds_neg"), py::arg("df_pos"), py::arg("df_neg"));
    m.def(
        "wald_symmetry_test",
        [](double h_pos, double h_neg, double var_pos, double var_neg, double cov) {
            Eigen::Matrix2d c;
            c << var_pos, cov, cov, var_neg;
            const WaldResult w = wald_symmetry_test(h_pos, h_neg, c);
            py::dict d;
            d["statistic"] = w.statistic;
            d["dof"] = w.dof;
            d["p_value"] = w.p_value;
            d["estimate_diff"] = w.estimate_diff;
            d["se_diff"] = w.se_diff;
            return d;
        },
        py::arg("h_pos"), py::arg("h_neg"), py::arg("var_pos"), py::arg("var_neg"), py::arg("cov"));
    m.def(
        "simulate",
        [](double h_pos, double h_neg, std::size_t length, std::uint64_t seed, std::optional<double> nu) {
            DgpSpec spec;
            spec.true_params = reference_params(h_pos, h_neg, nu);
            spec.innovation = nu ? Innovation::StudentT : Innovation::Gaussian;
            spec.length = length;
            spec.seed = seed;
            const SimulatedData d = simulate(spec);
            py::dict out = components_dict(d.components);
            out["redraws"] = d.truth.redraws;
            return out;
        },
        py::arg("h_pos"), py::arg("h_neg"), py::arg("length") = 1500, py::arg("seed") = 1, py::arg("nu") = py::none());
    m.def(
        "run_pipeline",
        [](const std::string& input, bool components, const std::string& distribution, const std::string& criterion,
           int max_lag, const std::string& force_path, double level, std::uint64_t seed, int restarts) {
            RunConfig cfg = make_config(distribution, criterion, max_lag, force_path, level, seed, restarts);
            cfg.input_path = input;
            cfg.components_input = components;
            py::gil_scoped_release release;
            return emit_json(run_pipeline(cfg));
        },
        py::arg("input"), py::arg("components") = false, py::arg("distribution") = "student_t",
        py::arg("criterion") = "bic", py::arg("max_lag") = 2, py::arg("force_path") = "auto", py::arg("level") = 0.05,
        py::arg("seed") = 20240801, py::arg("restarts") = 3,
        "Runs the full pipeline on a CSV file and returns the JSON report text.");
    m.def(
        "run_components",
        [](std::vector<double> ds_pos, std::vector<double> ds_neg, std::vector<double> df_pos,
           std::vector<double> df_neg, const std::string& distribution, const std::string& criterion, int max_lag,
           const std::string& force_path, double level, std::uint64_t seed, int restarts) {
            const RunConfig cfg = make_config(distribution, criterion, max_lag, force_path, level, seed, restarts);
            const ComponentSeries c = components_from(ds_pos, ds_neg, df_pos, df_neg);
            py::gil_scoped_release release;
            return emit_json(run_pipeline(c, "python", cfg));
        },
        py::arg("ds_pos"), py::arg("ds_neg"), py::arg("df_pos"), py::arg("df_neg"),
        py::arg("distribution") = "student_t", py::arg("criterion") = "bic", py::arg("max_lag") = 2,
        py::arg("force_path") = "auto", py::arg("level") = 0.05, py::arg("seed") = 20240801, py::arg("restarts") = 3,
        "Runs the pipeline on component series in memory and returns the JSON report text.");
}
