#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ohr/mgarch.hpp"
#include "ohr/series.hpp"

namespace ohr {

/// Maps a constrained parameter vector to an unconstrained one and back.
///
/// Parameters are identity by default. Positive parameters use a log, lower
/// bounded ones a shifted log, and a simplex group (entries > 0 with
/// sum < 1) uses a multinomial-logit map with an implicit slack entry.
class ParameterTransform {
public:
    explicit ParameterTransform(Eigen::Index size);

    void set_positive(Eigen::Index i) { set_lower_bound(i, 0.0); }
    void set_lower_bound(Eigen::Index i, double lower);
    void add_simplex(std::vector<Eigen::Index> indices);
    /// Typical magnitude of an identity coordinate: z = x / scale. Also sets
    /// the floor of the finite-difference step for that coordinate.
    void set_scale(Eigen::Index i, double scale);
    double scale(Eigen::Index i) const { return scale_[static_cast<std::size_t>(i)]; }

    Eigen::Index size() const { return static_cast<Eigen::Index>(kinds_.size()); }
    Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& x) const;
    Eigen::VectorXd to_constrained(const Eigen::VectorXd& z) const;
    bool feasible(const Eigen::VectorXd& x) const;

    /// Largest step d such that x +/- d e_i stays strictly inside the region
    /// (infinity for unconstrained coordinates).
    double room(const Eigen::VectorXd& x, Eigen::Index i) const;

private:
    enum class Kind { Identity, LowerBound, Simplex };
    std::vector<Kind> kinds_;
    std::vector<double> lower_;
    std::vector<double> scale_;
    std::vector<int> group_;  // simplex group index, -1 if none
    std::vector<std::vector<Eigen::Index>> simplices_;
};

struct OptimizerConfig {
    int max_iterations = 500;
    double gradient_tolerance = 1e-3;
    double step_tolerance = 1e-10;
    double finite_difference_step = 1e-5;  // relative
    int restarts = 3;
    std::uint64_t seed = 20240801;
    double jitter = 0.25;  // restart perturbation scale in the unconstrained space

    void validate() const;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Optimum {
    Eigen::VectorXd params;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;  // max-abs gradient in the unconstrained space
    int starts_tried = 0;
    /// Second derivatives of the negative objective in the original space.
    Eigen::MatrixXd hessian;
};

/// Central-difference gradient with per-coordinate step rel * max(|x_i|, 1).
Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step);

/// Central-difference Hessian of f. Steps shrink near the transform's
/// boundaries so every evaluation stays feasible.
Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x, const ParameterTransform& transform,
                                  double rel_step = 1e-4);

/// Quasi-Newton (BFGS) ascent in the unconstrained space with jittered
/// restarts. The best point wins; ties go to the lower gradient norm. The
/// Hessian is computed at the winner unless `compute_hessian` is false.
Optimum maximize(const Objective& objective, const Eigen::VectorXd& start, const ParameterTransform& transform,
                 const OptimizerConfig& config, bool compute_hessian = true);

/// Observed-information covariance: inverse of the Hessian of the negative
/// log-likelihood. Throws NonInvertibleInformation on a singular or
/// indefinite Hessian.
Eigen::MatrixXd parameter_covariance(const Eigen::MatrixXd& hessian);
Eigen::MatrixXd parameter_covariance(const Optimum& opt);

// ---------------------------------------------------------------------------
// Joint maximum likelihood for the component system.

struct SystemFit {
    GarchSystemParams params;
    LagOrders orders;
    Innovation innovation = Innovation::Gaussian;
    double loglik = 0.0;
    std::size_t parameter_count = 0;
    std::size_t observations = 0;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
    std::size_t pd_violations = 0;
    std::vector<std::string> names;
    std::optional<Eigen::MatrixXd> covariance;  // original units
    std::optional<std::string> covariance_error;

    double se(Eigen::Index i) const;
    /// 2x2 covariance of (h+, h-).
    Eigen::Matrix2d hedge_covariance() const;
};

/// Starting values: per-component OLS for the mean equations, variance
/// constants from the residual second moments times (1 - 0.1 - 0.8),
/// phi = 0.1 and lambda = 0.8 spread over the lags, the cross equation
/// started from the residual covariance the same way, nu = 8.
GarchSystemParams starting_values(const ComponentSeries& components, const LagOrders& orders, Innovation innovation);

/// Transform for the system parameters; `start` sets the scale of the cross
/// intercept, which is unconstrained in sign.
ParameterTransform system_transform(const ParameterLayout& layout, const Eigen::VectorXd& start);

struct FitOptions {
    OptimizerConfig optimizer;
    bool compute_covariance = true;
};

/// Fits the component system by maximum likelihood. Internally the data are
/// rescaled by the sample deviation of dS so all parameters are O(1);
/// estimates, log-likelihood and covariance are reported in original units.
SystemFit fit_mgarch(const ComponentSeries& components, const LagOrders& orders, Innovation innovation,
                     const FitOptions& options = {});

}  // namespace ohr
