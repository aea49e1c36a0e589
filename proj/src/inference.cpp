#include "ohr/inference.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "ohr/errors.hpp"

namespace ohr {

double chi_square_upper_tail(double statistic, double dof) {
    if (!(dof > 0.0)) throw Error(ErrorKind::InvalidInput, "inference", "chi-square dof must be positive");
    if (std::isnan(statistic)) throw Error(ErrorKind::InvalidInput, "inference", "chi-square statistic is NaN");
    if (statistic <= 0.0) return 1.0;
    if (std::isinf(statistic)) return 0.0;
    return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

WaldResult wald_symmetry_test(double h_pos, double h_neg, const Eigen::Matrix2d& cov) {
    if (!cov.allFinite() || std::abs(cov(0, 1) - cov(1, 0)) > 1e-10 * cov.cwiseAbs().maxCoeff())
        throw Error(ErrorKind::InvalidInput, "inference", "hedge-ratio covariance must be finite and symmetric");
    const double var_diff = cov(0, 0) + cov(1, 1) - 2.0 * cov(0, 1);
    if (!(var_diff > 0.0))
        throw Error(ErrorKind::DegenerateCovariance, "inference", "variance of h_pos - h_neg is not positive");
    WaldResult w;
    w.estimate_diff = h_pos - h_neg;
    w.se_diff = std::sqrt(var_diff);
    w.statistic = w.estimate_diff * w.estimate_diff / var_diff;
    w.dof = 1;
    w.p_value = chi_square_upper_tail(w.statistic, 1.0);
    return w;
}

SignificanceResult individual_significance(double estimate, double se) {
    if (!(se > 0.0) || !std::isfinite(se))
        throw Error(ErrorKind::DegenerateCovariance, "inference", "standard error must be positive and finite");
    SignificanceResult r;
    r.statistic = (estimate / se) * (estimate / se);
    r.p_value = chi_square_upper_tail(r.statistic, 1.0);
    return r;
}

ArchTestResult multivariate_arch_test(const ResidualPair& residuals, int lags) {
    if (lags < 1) throw Error(ErrorKind::InvalidInput, "inference", "ARCH test needs at least one lag");
    const auto n = static_cast<Eigen::Index>(residuals.size());
    if (residuals.pos.size() != residuals.neg.size())
        throw Error(ErrorKind::InvalidInput, "inference", "residual series differ in length");
    if (n <= 3 * (lags + 1))
        throw Error(ErrorKind::InsufficientData, "inference", "too few residuals for the requested ARCH lags");

    Eigen::MatrixXd w(n, 3);
    for (Eigen::Index t = 0; t < n; ++t) {
        const double a = residuals.pos[static_cast<std::size_t>(t)];
        const double b = residuals.neg[static_cast<std::size_t>(t)];
        w(t, 0) = a * a;
        w(t, 1) = a * b;
        w(t, 2) = b * b;
    }
    // Scale each column so the rank checks are unit-free.
    for (Eigen::Index j = 0; j < 3; ++j) {
        const double s = w.col(j).cwiseAbs().maxCoeff();
        if (s > 0.0) w.col(j) /= s;
    }

    const Eigen::Index m = n - lags;
    Eigen::MatrixXd x(m, 1 + 3 * lags);
    x.col(0).setOnes();
    for (int l = 1; l <= lags; ++l) x.middleCols(1 + 3 * (l - 1), 3) = w.middleRows(lags - l, m);
    const Eigen::MatrixXd y = w.bottomRows(m);

    const Eigen::RowVector3d mean = y.colwise().mean();
    const Eigen::MatrixXd centered = y.rowwise() - mean;
    const Eigen::Matrix3d omega0 = centered.transpose() * centered / static_cast<double>(m);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig0(omega0);
    if (qr.rank() < x.cols() || !(eig0.eigenvalues().minCoeff() > 1e-12 * std::max(eig0.eigenvalues().maxCoeff(), 1e-300)))
        throw Error(ErrorKind::RankDeficiency, "inference", "ARCH regressors are singular (constant residual moments)");

    const Eigen::MatrixXd beta = qr.solve(y);
    const Eigen::MatrixXd e = y - x * beta;
    const Eigen::Matrix3d omega = e.transpose() * e / static_cast<double>(m);
    const double trace = (omega * omega0.inverse()).trace();

    ArchTestResult r;
    r.lags_used = lags;
    r.dof = 9 * lags;
    r.statistic = std::max(0.0, static_cast<double>(m) * (3.0 - trace));
    r.p_value = chi_square_upper_tail(r.statistic, r.dof);
    return r;
}

Eigen::Matrix2d SureResult::hedge_covariance() const {
    Eigen::Matrix2d c;
    c << coefficient_covariance(1, 1), coefficient_covariance(1, 3), coefficient_covariance(3, 1),
        coefficient_covariance(3, 3);
    return c;
}

SureResult sure_estimate(const ComponentSeries& components) {
    components.validate();
    const OlsFit ols_pos = ols_fit(components.ds_pos, components.df_pos);
    const OlsFit ols_neg = ols_fit(components.ds_neg, components.df_neg);
    const auto n = static_cast<Eigen::Index>(components.size());

    const auto col = [](const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    };
    Eigen::MatrixXd x1(n, 2), x2(n, 2);
    x1.col(0).setOnes();
    x2.col(0).setOnes();
    x1.col(1) = col(components.df_pos);
    x2.col(1) = col(components.df_neg);
    const Eigen::VectorXd y1 = col(components.ds_pos);
    const Eigen::VectorXd y2 = col(components.ds_neg);
    const Eigen::VectorXd e1 = col(ols_pos.residuals);
    const Eigen::VectorXd e2 = col(ols_neg.residuals);

    Eigen::Matrix2d sigma;
    sigma << e1.dot(e1), e1.dot(e2), e2.dot(e1), e2.dot(e2);
    sigma /= static_cast<double>(n);
    const double det = sigma.determinant();
    if (!(det > 1e-14 * sigma(0, 0) * sigma(1, 1)))
        throw Error(ErrorKind::DegenerateCovariance, "inference", "SURE residual covariance is singular");
    const Eigen::Matrix2d s = sigma.inverse();

    // X' (S kron I) X and X' (S kron I) y without forming the 2T x 2T weight.
    Eigen::Matrix4d a;
    a.topLeftCorner<2, 2>() = s(0, 0) * x1.transpose() * x1;
    a.topRightCorner<2, 2>() = s(0, 1) * x1.transpose() * x2;
    a.bottomLeftCorner<2, 2>() = s(1, 0) * x2.transpose() * x1;
    a.bottomRightCorner<2, 2>() = s(1, 1) * x2.transpose() * x2;
    Eigen::Vector4d b;
    b.head<2>() = x1.transpose() * (s(0, 0) * y1 + s(0, 1) * y2);
    b.tail<2>() = x2.transpose() * (s(1, 0) * y1 + s(1, 1) * y2);

    Eigen::LDLT<Eigen::Matrix4d> ldlt(a);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw Error(ErrorKind::DegenerateCovariance, "inference", "SURE normal equations are not positive definite");
    const Eigen::Vector4d beta = ldlt.solve(b);
    Eigen::Matrix4d cov = ldlt.solve(Eigen::Matrix4d::Identity());
    cov = 0.5 * (cov + cov.transpose()).eval();

    SureResult r;
    r.residual_covariance = sigma;
    r.coefficient_covariance = cov;
    r.pos = {beta(1), beta(0), std::sqrt(cov(1, 1)), RatioKind::PositiveComponent, EstimationMethod::Sure, false};
    r.neg = {beta(3), beta(2), std::sqrt(cov(3, 3)), RatioKind::NegativeComponent, EstimationMethod::Sure, false};
    r.ols_residuals = {ols_pos.residuals, ols_neg.residuals};
    const Eigen::VectorXd u1 = y1 - x1 * beta.head<2>();
    const Eigen::VectorXd u2 = y2 - x2 * beta.tail<2>();
    r.residuals.pos.assign(u1.data(), u1.data() + n);
    r.residuals.neg.assign(u2.data(), u2.data() + n);
    return r;
}

const char* to_string(Criterion criterion) {
    switch (criterion) {
        case Criterion::Aic: return "aic";
        case Criterion::Bic: return "bic";
        case Criterion::Hqc: return "hqc";
    }
    return "?";
}

double information_criterion(Criterion criterion, double loglik, std::size_t parameters, std::size_t observations) {
    const double k = static_cast<double>(parameters);
    const double t = static_cast<double>(observations);
    switch (criterion) {
        case Criterion::Aic: return -2.0 * loglik + 2.0 * k;
        case Criterion::Bic: return -2.0 * loglik + k * std::log(t);
        case Criterion::Hqc: return -2.0 * loglik + 2.0 * k * std::log(std::log(t));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<LagOrders> candidate_orders(int max_lag, bool exhaustive) {
    if (max_lag < 1) throw Error(ErrorKind::InvalidInput, "inference", "max_lag must be at least 1");
    std::vector<std::pair<int, int>> per_eq = {{0, 0}, {1, 0}, {0, 1}};
    for (int k = 1; k <= max_lag; ++k)
        for (int q = 1; q <= max_lag; ++q) per_eq.emplace_back(k, q);

    std::vector<LagOrders> out;
    if (!exhaustive) {
        for (auto [k, q] : per_eq) out.push_back(LagOrders::uniform(k, q));
        return out;
    }
    for (auto [kp, qp] : per_eq)
        for (auto [kn, qn] : per_eq)
            for (auto [kc, qc] : per_eq) out.push_back({kp, qp, kn, qn, kc, qc});
    return out;
}

IcSelection choose_from_table(std::vector<IcCandidate> table, Criterion criterion) {
    IcSelection sel;
    sel.criterion = criterion;
    bool found = false;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const IcCandidate& c = table[i];
        if (c.failed || !std::isfinite(c.value)) continue;
        const IcCandidate& best = table[sel.chosen_index];
        if (!found || c.value < best.value || (c.value == best.value && c.parameter_count < best.parameter_count)) {
            sel.chosen_index = i;
            found = true;
        }
    }
    if (!found) throw Error(ErrorKind::Convergence, "inference", "no lag-order candidate converged");
    sel.chosen = table[sel.chosen_index].orders;
    sel.table = std::move(table);
    return sel;
}

IcSelection select_lags(const ComponentSeries& components, int max_lag, Criterion criterion,
                        const LagSearchOptions& options) {
    std::vector<IcCandidate> table;
    for (const LagOrders& orders : candidate_orders(max_lag, options.exhaustive)) {
        IcCandidate c;
        c.orders = orders;
        try {
            const SystemFit fit = fit_mgarch(components, orders, options.innovation, options.fit);
            c.loglik = fit.loglik;
            c.parameter_count = fit.parameter_count;
            c.value = information_criterion(criterion, fit.loglik, fit.parameter_count, fit.observations);
            if (!fit.converged) {
                c.failed = true;
                std::ostringstream msg;
                msg << "did not converge (gradient norm " << fit.gradient_norm << ")";
                c.note = msg.str();
            }
        } catch (const Error& e) {
            c.failed = true;
            c.note = e.what();
            c.loglik = std::numeric_limits<double>::quiet_NaN();
            c.value = std::numeric_limits<double>::quiet_NaN();
        }
        table.push_back(std::move(c));
    }
    return choose_from_table(std::move(table), criterion);
}

}  // namespace ohr
