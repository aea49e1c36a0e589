#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ohr/analysis.hpp"
#include "ohr/mgarch.hpp"
#include "ohr/series.hpp"

namespace ohr {

/// Univariate GARCH(1,1) driving the futures changes.
struct FuturesGarch {
    double omega = 0.05;
    double arch = 0.10;
    double garch = 0.85;
};

struct DgpSpec {
    GarchSystemParams true_params;
    std::size_t length = 1500;
    std::uint64_t seed = 1;
    Innovation innovation = Innovation::Gaussian;
    FuturesGarch futures;
    std::size_t burn_in = 200;
    std::size_t max_redraws_per_period = 10000;

    void validate() const;
};

/// The reference system used by the studies: alpha+ = 1, alpha- = -1, both
/// variance equations gamma = 0.004, phi = 0.1, lambda = 0.8 (unconditional
/// sd 0.2) and the cross equation gamma = 0.002 with the same dynamics
/// (unconditional correlation 0.5).
GarchSystemParams reference_params(double h_pos, double h_neg, std::optional<double> nu = std::nullopt);

struct GroundTruth {
    GarchSystemParams params;
    std::uint64_t seed = 0;
    std::size_t redraws = 0;  // innovation pairs rejected for violating component signs
};

struct SimulatedData {
    ReturnSeries returns;
    ComponentSeries components;
    GroundTruth truth;
};

/// Draws dF from the futures GARCH, splits it, and builds the spot components
/// from the component regressions with residuals from the system recursions.
/// Pairs that would give dS+ < 0 or dS- > 0 are redrawn.
SimulatedData simulate(const DgpSpec& spec);

struct ParameterRecovery {
    double truth = 0.0;
    double mean = 0.0;
    double bias = 0.0;
    double rmse = 0.0;
    double mc_se = 0.0;  // sd of the estimates / sqrt(count)
    std::size_t count = 0;
};

struct SimStudyResult {
    std::size_t replications = 0;
    std::size_t failures = 0;
    std::size_t mgarch_path = 0;
    std::size_t redraws = 0;
    std::vector<double> levels = {0.10, 0.05, 0.01};
    std::vector<double> rejection_rate;
    std::map<std::string, ParameterRecovery> recovery;
    std::vector<std::string> failure_messages;

    double rate_at(double level) const;
};

struct StudyOptions {
    AnalysisOptions analysis;
    /// Skip the pre-test and the symmetry test: fit the system and record estimates only.
    bool estimates_only = false;

    static StudyOptions defaults();
};

/// Runs the analysis on `replications` independent draws; replication r uses
/// the stream seed Rng::stream_seed(spec.seed, r). Throws when more than 10%
/// of the replications fail.
SimStudyResult run_study(const DgpSpec& spec, std::size_t replications, const StudyOptions& options);

struct SizePowerResult {
    SimStudyResult size;
    SimStudyResult power;
};

SizePowerResult size_power_study(const DgpSpec& symmetric, const DgpSpec& asymmetric, std::size_t replications,
                                 const StudyOptions& options);

}  // namespace ohr
