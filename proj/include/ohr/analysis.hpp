#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ohr/inference.hpp"
#include "ohr/mgarch.hpp"
#include "ohr/optimize.hpp"
#include "ohr/static_ohr.hpp"

namespace ohr {

enum class EstimationPath { Auto, Sure, Mgarch };
const char* to_string(EstimationPath path);

struct AnalysisOptions {
    EstimationPath path = EstimationPath::Auto;
    int arch_lags = 2;
    double pretest_level = 0.05;
    Innovation innovation = Innovation::StudentT;
    Criterion criterion = Criterion::Bic;
    int max_lag = 2;
    bool select_lags = true;  // false: fit `fixed_orders` directly
    bool exhaustive = false;
    LagOrders fixed_orders = LagOrders::uniform(1, 1);
    FitOptions fit;
};

/// Outcome of the asymmetric hedge-ratio analysis on one component system.
struct AsymmetryAnalysis {
    ArchTestResult pretest;
    bool pretest_rejected = false;
    EstimationPath path_used = EstimationPath::Sure;
    OhrEstimate pos;
    OhrEstimate neg;
    Eigen::Matrix2d hedge_covariance = Eigen::Matrix2d::Zero();
    WaldResult wald;
    SignificanceResult significance_pos;
    SignificanceResult significance_neg;
    std::optional<SureResult> sure;
    std::optional<SystemFit> fit;
    std::optional<IcSelection> lag_selection;
    std::vector<std::string> warnings;
};

/// Multivariate ARCH pre-test on per-equation OLS residuals, then SURE when
/// it fails to reject or the bivariate GARCH system when it rejects (unless
/// the path is forced), followed by the symmetry Wald test and individual
/// significance of both ratios.
AsymmetryAnalysis analyze_asymmetry(const ComponentSeries& components, const AnalysisOptions& options = {});

}  // namespace ohr
