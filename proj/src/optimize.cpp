#include "ohr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ohr/errors.hpp"
#include "ohr/rng.hpp"
#include "ohr/static_ohr.hpp"

namespace ohr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : -kInf;
}

struct Run {
    Eigen::VectorXd z;
    double value = -kInf;  // objective (maximized)
    bool converged = false;
    int iterations = 0;
    double gradient_norm = kInf;
};

// Minimizes -objective(transform(z)) with BFGS and a backtracking Armijo search.
Run bfgs(const Objective& objective, const ParameterTransform& transform, Eigen::VectorXd z,
         const OptimizerConfig& cfg) {
    const auto g = [&](const Eigen::VectorXd& v) {
        const double f = safe_eval(objective, transform.to_constrained(v));
        return f == -kInf ? kInf : -f;
    };
    const Objective g_fn = g;
    const auto grad = [&](const Eigen::VectorXd& v) { return numerical_gradient(g_fn, v, cfg.finite_difference_step); };

    const Eigen::Index n = z.size();
    Run run;
    double fz = g(z);
    Eigen::VectorXd gz = grad(z);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
    bool fresh = true;

    for (int it = 0; it < cfg.max_iterations; ++it) {
        run.iterations = it;
        run.gradient_norm = gz.cwiseAbs().maxCoeff();
        if (!std::isfinite(run.gradient_norm)) break;
        if (run.gradient_norm <= cfg.gradient_tolerance) {
            run.converged = true;
            break;
        }
        Eigen::VectorXd p = -hinv * gz;
        double slope = gz.dot(p);
        if (!(slope < 0.0)) {
            hinv.setIdentity();
            fresh = true;
            p = -gz;
            slope = gz.dot(p);
        }
        // Cap the first trial so a fresh steepest-descent step moves at most one unit.
        double step = 1.0;
        if (fresh) step = std::min(1.0, 1.0 / p.cwiseAbs().maxCoeff());

        double f_new = kInf;
        Eigen::VectorXd z_new;
        while (step > 1e-14) {
            z_new = z + step * p;
            f_new = g(z_new);
            if (f_new <= fz + 1e-4 * step * slope) break;
            step *= 0.5;
        }
        if (!(f_new <= fz + 1e-4 * step * slope)) {
            if (fresh) break;  // even steepest descent cannot improve
            hinv.setIdentity();
            fresh = true;
            continue;
        }

        const Eigen::VectorXd s = z_new - z;
        const Eigen::VectorXd g_new = grad(z_new);
        const Eigen::VectorXd y = g_new - gz;
        const double f_old = fz;
        z = z_new;
        fz = f_new;
        gz = g_new;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (fresh) hinv *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            hinv = (eye - rho * s * y.transpose()) * hinv * (eye - rho * y * s.transpose()) + rho * s * s.transpose();
            fresh = false;
        }

        const double scale = 1.0 + z.cwiseAbs().maxCoeff();
        if (s.cwiseAbs().maxCoeff() < cfg.step_tolerance * scale &&
            std::abs(f_old - fz) < cfg.step_tolerance * (1.0 + std::abs(fz))) {
            run.iterations = it + 1;
            if (fresh) break;
            // A stalled quasi-Newton step: retry once from steepest descent.
            hinv.setIdentity();
            fresh = true;
            continue;
        }
        run.iterations = it + 1;
    }
    run.gradient_norm = gz.cwiseAbs().maxCoeff();
    run.converged = run.gradient_norm <= cfg.gradient_tolerance;
    run.z = z;
    run.value = -fz;
    return run;
}

}  // namespace

// ---------------------------------------------------------------------------
// ParameterTransform

ParameterTransform::ParameterTransform(Eigen::Index size)
    : kinds_(static_cast<std::size_t>(size), Kind::Identity),
      lower_(static_cast<std::size_t>(size), 0.0),
      scale_(static_cast<std::size_t>(size), 1.0),
      group_(static_cast<std::size_t>(size), -1) {}

void ParameterTransform::set_lower_bound(Eigen::Index i, double lower) {
    kinds_.at(static_cast<std::size_t>(i)) = Kind::LowerBound;
    lower_[static_cast<std::size_t>(i)] = lower;
}

void ParameterTransform::set_scale(Eigen::Index i, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw Error(ErrorKind::InvalidInput, "optimize", "coordinate scale must be positive and finite");
    scale_.at(static_cast<std::size_t>(i)) = scale;
}

void ParameterTransform::add_simplex(std::vector<Eigen::Index> indices) {
    if (indices.empty()) return;
    const int g = static_cast<int>(simplices_.size());
    for (Eigen::Index i : indices) {
        kinds_.at(static_cast<std::size_t>(i)) = Kind::Simplex;
        group_[static_cast<std::size_t>(i)] = g;
    }
    simplices_.push_back(std::move(indices));
}

Eigen::VectorXd ParameterTransform::to_unconstrained(const Eigen::VectorXd& x) const {
    Eigen::VectorXd z = x;
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
        if (kinds_[i] == Kind::Identity) z(static_cast<Eigen::Index>(i)) /= scale_[i];
        if (kinds_[i] == Kind::LowerBound) z(static_cast<Eigen::Index>(i)) = std::log(x(static_cast<Eigen::Index>(i)) - lower_[i]);
    }
    for (const auto& group : simplices_) {
        double total = 0.0;
        for (Eigen::Index i : group) total += x(i);
        const double log_slack = std::log1p(-total);
        for (Eigen::Index i : group) z(i) = std::log(x(i)) - log_slack;
    }
    return z;
}

Eigen::VectorXd ParameterTransform::to_constrained(const Eigen::VectorXd& z) const {
    Eigen::VectorXd x = z;
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
        if (kinds_[i] == Kind::Identity) x(static_cast<Eigen::Index>(i)) *= scale_[i];
        if (kinds_[i] == Kind::LowerBound) x(static_cast<Eigen::Index>(i)) = lower_[i] + std::exp(z(static_cast<Eigen::Index>(i)));
    }
    for (const auto& group : simplices_) {
        double top = 0.0;
        for (Eigen::Index i : group) top = std::max(top, z(i));
        double denom = std::exp(-top);  // the slack entry has logit 0
        for (Eigen::Index i : group) denom += std::exp(z(i) - top);
        for (Eigen::Index i : group) x(i) = std::exp(z(i) - top) / denom;
    }
    return x;
}

bool ParameterTransform::feasible(const Eigen::VectorXd& x) const {
    if (x.size() != size()) return false;
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
        const double v = x(static_cast<Eigen::Index>(i));
        if (!std::isfinite(v)) return false;
        if (kinds_[i] != Kind::Identity && !(v > lower_[i])) return false;
    }
    for (const auto& group : simplices_) {
        double total = 0.0;
        for (Eigen::Index i : group) total += x(i);
        if (!(total < 1.0)) return false;
    }
    return true;
}

double ParameterTransform::room(const Eigen::VectorXd& x, Eigen::Index i) const {
    const auto k = static_cast<std::size_t>(i);
    switch (kinds_[k]) {
        case Kind::Identity: return kInf;
        case Kind::LowerBound: return x(i) - lower_[k];
        case Kind::Simplex: {
            double total = 0.0;
            for (Eigen::Index j : simplices_[static_cast<std::size_t>(group_[k])]) total += x(j);
            return std::min(x(i), 1.0 - total);
        }
    }
    return kInf;
}

// ---------------------------------------------------------------------------

void OptimizerConfig::validate() const {
    if (max_iterations < 1 || !(gradient_tolerance > 0.0) || !(step_tolerance > 0.0) ||
        !(finite_difference_step > 0.0) || restarts < 0)
        throw Error(ErrorKind::InvalidInput, "optimize", "invalid optimizer configuration");
}

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(std::abs(x(i)), 1.0);
        xp(i) = x(i) + h;
        const double fp = f(xp);
        xp(i) = x(i) - h;
        const double fm = f(xp);
        xp(i) = x(i);
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x, const ParameterTransform& transform,
                                  double rel_step) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i)
        h(i) = std::min(rel_step * std::max(std::abs(x(i)), transform.scale(i)), 0.25 * transform.room(x, i));

    const double f0 = f(x);
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        xp(i) = x(i) + h(i);
        const double fp = f(xp);
        xp(i) = x(i) - h(i);
        const double fm = f(xp);
        xp(i) = x(i);
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h(i) * h(i));
        for (Eigen::Index j = 0; j < i; ++j) {
            const auto eval = [&](double si, double sj) {
                xp(i) = x(i) + si * h(i);
                xp(j) = x(j) + sj * h(j);
                const double v = f(xp);
                xp(i) = x(i);
                xp(j) = x(j);
                return v;
            };
            const double v = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / (4.0 * h(i) * h(j));
            hess(i, j) = hess(j, i) = v;
        }
    }
    return hess;
}

Optimum maximize(const Objective& objective, const Eigen::VectorXd& start, const ParameterTransform& transform,
                 const OptimizerConfig& config, bool compute_hessian) {
    config.validate();
    if (start.size() != transform.size())
        throw Error(ErrorKind::InvalidInput, "optimize", "start vector does not match the transform");
    if (!transform.feasible(start))
        throw Error(ErrorKind::InvalidStart, "optimize", "start point violates the parameter constraints");
    if (!std::isfinite(objective(start)))
        throw Error(ErrorKind::InvalidStart, "optimize", "objective is not finite at the start point");

    const Eigen::VectorXd z0 = transform.to_unconstrained(start);
    Rng rng(config.seed);
    Run best;
    int tried = 0;
    for (int r = 0; r <= config.restarts; ++r) {
        Eigen::VectorXd z = z0;
        if (r > 0) {
            for (Eigen::Index i = 0; i < z.size(); ++i) z(i) += config.jitter * rng.normal();
            if (!std::isfinite(objective(transform.to_constrained(z)))) continue;
        }
        ++tried;
        Run run = bfgs(objective, transform, z, config);
        const bool better = run.value > best.value ||
                            (run.value == best.value && run.gradient_norm < best.gradient_norm);
        if (better) best = std::move(run);
    }

    Optimum opt;
    opt.params = transform.to_constrained(best.z);
    opt.value = objective(opt.params);
    opt.converged = best.converged;
    opt.iterations = best.iterations;
    opt.gradient_norm = best.gradient_norm;
    opt.starts_tried = tried;
    if (compute_hessian) {
        const Objective neg = [&](const Eigen::VectorXd& x) { return -objective(x); };
        opt.hessian = numerical_hessian(neg, opt.params, transform);
    }
    return opt;
}

Eigen::MatrixXd parameter_covariance(const Eigen::MatrixXd& hessian) {
    if (hessian.rows() == 0 || hessian.rows() != hessian.cols())
        throw Error(ErrorKind::InvalidInput, "optimize", "hessian must be a nonempty square matrix");
    if (!hessian.allFinite())
        throw Error(ErrorKind::NonInvertibleInformation, "optimize", "hessian has non-finite entries");
    const Eigen::MatrixXd sym = 0.5 * (hessian + hessian.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double largest = values.cwiseAbs().maxCoeff();
    Eigen::Index worst = 0;
    const double smallest = values.minCoeff(&worst);
    if (!(smallest > 1e-12 * largest)) {
        Eigen::Index dominant = 0;
        eig.eigenvectors().col(worst).cwiseAbs().maxCoeff(&dominant);
        std::ostringstream msg;
        msg << "information matrix is not positive definite: eigenvalue " << smallest
            << " (largest " << largest << "), direction dominated by parameter " << dominant;
        throw Error(ErrorKind::NonInvertibleInformation, "optimize", msg.str());
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    Eigen::MatrixXd cov = v * values.cwiseInverse().asDiagonal() * v.transpose();
    return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd parameter_covariance(const Optimum& opt) { return parameter_covariance(opt.hessian); }

// ---------------------------------------------------------------------------
// System fit

double SystemFit::se(Eigen::Index i) const {
    if (!covariance) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt((*covariance)(i, i));
}

Eigen::Matrix2d SystemFit::hedge_covariance() const {
    if (!covariance)
        throw Error(ErrorKind::NonInvertibleInformation, "optimize",
                    covariance_error.value_or("parameter covariance unavailable"));
    Eigen::Matrix2d c;
    c << (*covariance)(ParameterLayout::kHPos, ParameterLayout::kHPos),
        (*covariance)(ParameterLayout::kHPos, ParameterLayout::kHNeg),
        (*covariance)(ParameterLayout::kHNeg, ParameterLayout::kHPos),
        (*covariance)(ParameterLayout::kHNeg, ParameterLayout::kHNeg);
    return c;
}

GarchSystemParams starting_values(const ComponentSeries& components, const LagOrders& orders, Innovation innovation) {
    const OlsFit pos = ols_fit(components.ds_pos, components.df_pos);
    const OlsFit neg = ols_fit(components.ds_neg, components.df_neg);
    GarchSystemParams p;
    p.alpha_pos = pos.estimate.alpha;
    p.h_pos = pos.estimate.h;
    p.alpha_neg = neg.estimate.alpha;
    p.h_neg = neg.estimate.h;

    const PresampleValues m = presample_from_residuals({pos.residuals, neg.residuals});
    const auto init = [](VarianceEquation& eq, int k, int q, double moment) {
        eq.phi.assign(static_cast<std::size_t>(k), k > 0 ? 0.1 / k : 0.0);
        eq.lambda.assign(static_cast<std::size_t>(q), q > 0 ? 0.8 / q : 0.0);
        eq.gamma = moment * (1.0 - eq.persistence());
    };
    init(p.pos, orders.k_pos, orders.q_pos, m.sq_pos);
    init(p.neg, orders.k_neg, orders.q_neg, m.sq_neg);
    init(p.cross, orders.k_cross, orders.q_cross, m.cross_prod);
    if (innovation == Innovation::StudentT) p.nu = 8.0;
    return p;
}

ParameterTransform system_transform(const ParameterLayout& layout, const Eigen::VectorXd& start) {
    ParameterTransform tr(layout.size());
    tr.set_scale(layout.gamma_cross_index(),
                 std::sqrt(start(layout.gamma_pos_index()) * start(layout.gamma_neg_index())));
    const LagOrders& o = layout.orders();
    const auto simplex = [&](Eigen::Index gamma_index, int k, int q) {
        tr.set_positive(gamma_index);
        std::vector<Eigen::Index> idx;
        for (int i = 1; i <= k + q; ++i) idx.push_back(gamma_index + i);
        tr.add_simplex(std::move(idx));
    };
    simplex(layout.gamma_pos_index(), o.k_pos, o.q_pos);
    simplex(layout.gamma_neg_index(), o.k_neg, o.q_neg);
    if (layout.innovation() == Innovation::StudentT) tr.set_lower_bound(layout.nu_index(), 2.0);
    return tr;
}

SystemFit fit_mgarch(const ComponentSeries& components, const LagOrders& orders, Innovation innovation,
                     const FitOptions& options) {
    components.validate();
    const ParameterLayout layout(orders, innovation);
    const std::size_t n = components.size();
    if (n < static_cast<std::size_t>(layout.size()) * 3 + static_cast<std::size_t>(orders.max_lag()))
        throw Error(ErrorKind::InsufficientData, "optimize",
                    "too few observations (" + std::to_string(n) + ") for " + std::to_string(layout.size()) +
                        " parameters");

    std::vector<double> ds(n);
    for (std::size_t t = 0; t < n; ++t) ds[t] = components.ds_pos[t] + components.ds_neg[t];
    double scale = sample_moments(ds, ds).sigma_s;
    if (!(scale > 0.0)) scale = 1.0;

    ComponentSeries scaled = components;
    for (auto* v : {&scaled.ds_pos, &scaled.ds_neg, &scaled.df_pos, &scaled.df_neg})
        for (double& x : *v) x /= scale;

    // D maps scaled parameters to original units.
    Eigen::VectorXd d = Eigen::VectorXd::Ones(layout.size());
    d(ParameterLayout::kAlphaPos) = scale;
    d(ParameterLayout::kAlphaNeg) = scale;
    for (Eigen::Index i : {layout.gamma_pos_index(), layout.gamma_neg_index(), layout.gamma_cross_index()})
        d(i) = scale * scale;

    const Objective objective = [&](const Eigen::VectorXd& x) {
        return log_likelihood(layout.unpack(x), scaled, innovation).value;
    };
    const Eigen::VectorXd start = layout.pack(starting_values(scaled, orders, innovation));
    const ParameterTransform transform = system_transform(layout, start);
    const Optimum opt = maximize(objective, start, transform, options.optimizer, options.compute_covariance);

    SystemFit fit;
    fit.orders = orders;
    fit.innovation = innovation;
    fit.params = layout.unpack(opt.params.cwiseProduct(d));
    const LogLikelihood ll = log_likelihood(fit.params, components, innovation);
    fit.loglik = ll.value;
    fit.pd_violations = ll.pd_violations;
    fit.parameter_count = static_cast<std::size_t>(layout.size());
    fit.observations = n;
    fit.converged = opt.converged;
    fit.iterations = opt.iterations;
    fit.gradient_norm = opt.gradient_norm;
    fit.names = layout.names();
    if (options.compute_covariance) {
        try {
            const Eigen::MatrixXd cov = parameter_covariance(opt.hessian);
            fit.covariance = d.asDiagonal() * cov * d.asDiagonal();
        } catch (const Error& e) {
            fit.covariance_error = std::string(e.what()).substr(e.module().size() + 3);
        }
    }
    return fit;
}

}  // namespace ohr
