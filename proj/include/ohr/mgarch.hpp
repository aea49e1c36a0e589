#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ohr/series.hpp"

namespace ohr {

/// ARCH (k) and GARCH (q) orders of the positive-variance, negative-variance
/// and cross-covariance equations.
struct LagOrders {
    int k_pos = 1, q_pos = 1;
    int k_neg = 1, q_neg = 1;
    int k_cross = 1, q_cross = 1;

    static LagOrders uniform(int k, int q) { return {k, q, k, q, k, q}; }
    int max_lag() const;
    void validate(int max_allowed) const;
    std::string label() const;  // "(1,1)" when tied, else all six orders
    bool operator==(const LagOrders&) const = default;
};

enum class Innovation { Gaussian, StudentT };
const char* to_string(Innovation innovation);

/// One variance or covariance recursion: gamma + sum phi_i x_{t-i} + sum lambda_j s_{t-j}.
struct VarianceEquation {
    double gamma = 0.0;
    std::vector<double> phi;
    std::vector<double> lambda;

    double persistence() const;  // sum(phi) + sum(lambda)
    bool operator==(const VarianceEquation&) const = default;
};

struct GarchSystemParams {
    double alpha_pos = 0.0, h_pos = 0.0;
    double alpha_neg = 0.0, h_neg = 0.0;
    VarianceEquation pos;
    VarianceEquation neg;
    VarianceEquation cross;  // coefficients unconstrained in sign
    std::optional<double> nu;  // present iff innovations are Student-t

    LagOrders orders() const;
    Innovation innovation() const { return nu ? Innovation::StudentT : Innovation::Gaussian; }

    /// Throws ConstraintViolation when gammas are nonpositive, variance
    /// coefficients negative, a variance equation is nonstationary, or nu <= 2.
    void validate() const;
    bool operator==(const GarchSystemParams&) const = default;
};

struct ResidualPair {
    std::vector<double> pos;
    std::vector<double> neg;
    std::size_t size() const noexcept { return pos.size(); }
};

/// Values used for lags that fall before the first observation.
struct PresampleValues {
    double var_pos = 1.0;
    double var_neg = 1.0;
    double cov = 0.0;
    double sq_pos = 1.0;   // stands in for u+^2
    double sq_neg = 1.0;   // stands in for u-^2
    double cross_prod = 0.0;  // stands in for u+ u-
};

/// Presample from the residuals: variances of u+ and u- (divisor T) and the mean of u+ u-.
PresampleValues presample_from_residuals(const ResidualPair& u);

/// Unconditional moments implied by stationary parameters.
PresampleValues unconditional_moments(const GarchSystemParams& params);

struct ConditionalMoments {
    double var_pos;
    double var_neg;
    double cov;
};

/// Steps the three recursions forward one period at a time.
class VolatilityRecursion {
public:
    VolatilityRecursion(const GarchSystemParams& params, const PresampleValues& presample);

    /// Conditional moments for the next period given everything pushed so far.
    ConditionalMoments next() const;
    /// Records the realized residuals and the moments they were drawn under.
    void push(double u_pos, double u_neg, const ConditionalMoments& m);

private:
    double lagged(const std::vector<double>& ring, std::size_t lag) const;

    GarchSystemParams params_;
    std::size_t capacity_;
    std::size_t count_ = 0;
    std::size_t head_ = 0;
    PresampleValues presample_;
    std::vector<double> sq_pos_, sq_neg_, prod_, var_pos_, var_neg_, cov_;
};

struct FilteredVolatility {
    std::vector<double> var_pos;
    std::vector<double> var_neg;
    std::vector<double> cov_cross;
    std::vector<char> pd_flag;

    std::size_t pd_violations() const;
};

/// |implied conditional correlation| is clamped to this bound in the density.
inline constexpr double kCorrelationBound = 0.9999;
/// Coefficient of the squared-excess penalty for clamped correlations.
inline constexpr double kPdPenaltyWeight = 1.0e4;
/// Log-likelihood reported when the conditional covariance cannot be repaired.
inline constexpr double kInfeasibleLogLik = -1.0e100;

ResidualPair residuals(const GarchSystemParams& params, const ComponentSeries& components);

/// Runs the recursions over every observation. With no `init`, presample
/// values come from presample_from_residuals(u).
FilteredVolatility filter(const GarchSystemParams& params, const ResidualPair& u,
                          const std::optional<PresampleValues>& init = std::nullopt);

struct LogLikelihood {
    double value = kInfeasibleLogLik;  // includes the PD penalty
    double penalty = 0.0;
    std::size_t pd_violations = 0;
    bool feasible = false;
};

/// Sum of bivariate Gaussian or Student-t log densities. Under Student-t the
/// conditional covariance is H_t, so the scale matrix is H_t (nu - 2) / nu.
/// Infeasible parameters never throw: they yield kInfeasibleLogLik, flagged.
LogLikelihood log_likelihood(const GarchSystemParams& params, const ComponentSeries& components,
                             Innovation dist);

/// Standardized residuals H_t^{-1/2} u_t using the Cholesky factor.
ResidualPair standardized_residuals(const GarchSystemParams& params, const ComponentSeries& components,
                                    const std::optional<PresampleValues>& init = std::nullopt);

/// Flat parameter-vector layout:
/// [alpha+, h+, alpha-, h-, gamma+, phi+..., lambda+..., gamma-, phi-..., lambda-...,
///  gamma~, phi~..., lambda~..., (nu)]
class ParameterLayout {
public:
    ParameterLayout(const LagOrders& orders, Innovation innovation);

    Eigen::Index size() const { return size_; }
    const LagOrders& orders() const { return orders_; }
    Innovation innovation() const { return innovation_; }

    Eigen::VectorXd pack(const GarchSystemParams& params) const;
    GarchSystemParams unpack(const Eigen::VectorXd& x) const;
    std::vector<std::string> names() const;

    static constexpr Eigen::Index kAlphaPos = 0, kHPos = 1, kAlphaNeg = 2, kHNeg = 3;
    Eigen::Index gamma_pos_index() const { return 4; }
    Eigen::Index gamma_neg_index() const { return 5 + orders_.k_pos + orders_.q_pos; }
    Eigen::Index gamma_cross_index() const { return gamma_neg_index() + 1 + orders_.k_neg + orders_.q_neg; }
    Eigen::Index nu_index() const { return size_ - 1; }

private:
    LagOrders orders_;
    Innovation innovation_;
    Eigen::Index size_;
};

}  // namespace ohr
