#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ohr/mgarch.hpp"
#include "ohr/optimize.hpp"
#include "ohr/series.hpp"
#include "ohr/static_ohr.hpp"

namespace ohr {

/// Upper-tail probability of a chi-square(dof) variate.
double chi_square_upper_tail(double statistic, double dof);

struct WaldResult {
    double statistic = 0.0;
    int dof = 1;
    double p_value = 1.0;
    std::string restriction = "h_pos - h_neg = 0";
    double estimate_diff = 0.0;
    double se_diff = 0.0;
};

/// Wald test of equal hedge ratios from the 2x2 covariance of (h+, h-).
WaldResult wald_symmetry_test(double h_pos, double h_neg, const Eigen::Matrix2d& cov);

struct SignificanceResult {
    double statistic = 0.0;  // (estimate / se)^2
    double p_value = 1.0;
};

SignificanceResult individual_significance(double estimate, double se);

struct ArchTestResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int lags_used = 0;
};

/// Multivariate LM test for conditional heteroskedasticity in a residual
/// pair. w_t = (u+^2, u+ u-, u-^2) is regressed on a constant and q lags of
/// w; the statistic is 3 T' R_m^2 with R_m^2 = 1 - tr(Omega Omega0^{-1}) / 3,
/// which reduces to the sum of the per-equation T' R^2 when the elements of
/// w are uncorrelated. T' = T - q and dof = 9 q.
ArchTestResult multivariate_arch_test(const ResidualPair& residuals, int lags);

struct SureResult {
    OhrEstimate pos;
    OhrEstimate neg;
    Eigen::Matrix2d residual_covariance;     // first-stage OLS residuals, divisor T
    Eigen::Matrix4d coefficient_covariance;  // order (alpha+, h+, alpha-, h-)
    ResidualPair ols_residuals;
    ResidualPair residuals;  // from the feasible GLS coefficients

    Eigen::Matrix2d hedge_covariance() const;
};

/// Two-equation feasible GLS (seemingly unrelated regressions) of
/// dS+ on (1, dF+) and dS- on (1, dF-).
SureResult sure_estimate(const ComponentSeries& components);

enum class Criterion { Aic, Bic, Hqc };
const char* to_string(Criterion criterion);

/// AIC = -2l + 2k, BIC = -2l + k ln T, HQC = -2l + 2k ln ln T.
double information_criterion(Criterion criterion, double loglik, std::size_t parameters, std::size_t observations);

struct IcCandidate {
    LagOrders orders;
    double loglik = 0.0;
    std::size_t parameter_count = 0;
    double value = 0.0;
    bool failed = false;
    std::string note;
};

struct IcSelection {
    LagOrders chosen;
    Criterion criterion = Criterion::Bic;
    std::vector<IcCandidate> table;
    std::size_t chosen_index = 0;
};

/// Candidate grid. Tied: one (k, q) shared by all three equations from
/// {(0,0), (1,0), (0,1)} and every (k, q) with 1 <= k, q <= max_lag.
/// Exhaustive: each equation picks independently from that set.
std::vector<LagOrders> candidate_orders(int max_lag, bool exhaustive);

/// Picks the minimum criterion value among non-failed rows; on equal values
/// the smaller parameter count wins. Throws Convergence if every row failed.
IcSelection choose_from_table(std::vector<IcCandidate> table, Criterion criterion);

struct LagSearchOptions {
    Innovation innovation = Innovation::StudentT;
    bool exhaustive = false;
    FitOptions fit{.optimizer = {}, .compute_covariance = false};
};

IcSelection select_lags(const ComponentSeries& components, int max_lag, Criterion criterion,
                        const LagSearchOptions& options = {});

}  // namespace ohr
