#include "ohr/mgarch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ohr/errors.hpp"

namespace ohr {

namespace {

[[noreturn]] void violation(const std::string& msg) { throw Error(ErrorKind::ConstraintViolation, "mgarch", msg); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void check_variance_equation(const VarianceEquation& eq, const char* name) {
    if (!(eq.gamma > 0.0) || !std::isfinite(eq.gamma)) violation(std::string(name) + " gamma must be positive");
    for (double v : eq.phi)
        if (!(v >= 0.0)) violation(std::string(name) + " ARCH coefficient is negative");
    for (double v : eq.lambda)
        if (!(v >= 0.0)) violation(std::string(name) + " GARCH coefficient is negative");
    if (!(eq.persistence() < 1.0)) violation(std::string(name) + " variance equation is not stationary");
}

// Per-observation density pieces shared by the likelihood and standardization.
struct Clamped {
    double cov;
    double excess;  // amount |rho| exceeded the bound, 0 when PD
};

Clamped clamp_covariance(double var_pos, double var_neg, double cov) {
    const double scale = std::sqrt(var_pos * var_neg);
    const double rho = cov / scale;
    if (std::abs(rho) < kCorrelationBound) return {cov, 0.0};
    return {std::copysign(kCorrelationBound * scale, rho), std::abs(rho) - kCorrelationBound};
}

}  // namespace

const char* to_string(Innovation innovation) {
    return innovation == Innovation::Gaussian ? "gaussian" : "student_t";
}

int LagOrders::max_lag() const { return std::max({k_pos, q_pos, k_neg, q_neg, k_cross, q_cross}); }

void LagOrders::validate(int max_allowed) const {
    for (int v : {k_pos, q_pos, k_neg, q_neg, k_cross, q_cross}) {
        if (v < 0 || v > max_allowed)
            throw Error(ErrorKind::InvalidInput, "mgarch",
                        "lag order " + std::to_string(v) + " outside [0, " + std::to_string(max_allowed) + "]");
    }
}

std::string LagOrders::label() const {
    if (k_pos == k_neg && k_pos == k_cross && q_pos == q_neg && q_pos == q_cross)
        return "(" + std::to_string(k_pos) + "," + std::to_string(q_pos) + ")";
    return "(" + std::to_string(k_pos) + "," + std::to_string(q_pos) + ";" + std::to_string(k_neg) + "," +
           std::to_string(q_neg) + ";" + std::to_string(k_cross) + "," + std::to_string(q_cross) + ")";
}

double VarianceEquation::persistence() const { return sum(phi) + sum(lambda); }

LagOrders GarchSystemParams::orders() const {
    return {static_cast<int>(pos.phi.size()),   static_cast<int>(pos.lambda.size()),
            static_cast<int>(neg.phi.size()),   static_cast<int>(neg.lambda.size()),
            static_cast<int>(cross.phi.size()), static_cast<int>(cross.lambda.size())};
}

void GarchSystemParams::validate() const {
    for (double v : {alpha_pos, h_pos, alpha_neg, h_neg, cross.gamma})
        if (!std::isfinite(v)) violation("non-finite mean or covariance parameter");
    for (double v : cross.phi)
        if (!std::isfinite(v)) violation("non-finite cross ARCH coefficient");
    for (double v : cross.lambda)
        if (!std::isfinite(v)) violation("non-finite cross GARCH coefficient");
    check_variance_equation(pos, "positive");
    check_variance_equation(neg, "negative");
    if (nu && !(*nu > 2.0 && std::isfinite(*nu))) violation("degrees of freedom must exceed 2");
}

PresampleValues presample_from_residuals(const ResidualPair& u) {
    PresampleValues p;
    const std::size_t n = u.size();
    if (n == 0) return p;
    const double dn = static_cast<double>(n);
    double mp = 0.0, mn = 0.0, sx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        mp += u.pos[t];
        mn += u.neg[t];
        sx += u.pos[t] * u.neg[t];
    }
    mp /= dn;
    mn /= dn;
    double vp = 0.0, vn = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        vp += (u.pos[t] - mp) * (u.pos[t] - mp);
        vn += (u.neg[t] - mn) * (u.neg[t] - mn);
    }
    p.var_pos = p.sq_pos = vp / dn;
    p.var_neg = p.sq_neg = vn / dn;
    p.cov = p.cross_prod = sx / dn;
    return p;
}

PresampleValues unconditional_moments(const GarchSystemParams& params) {
    params.validate();
    const double cross_persistence = params.cross.persistence();
    if (!(std::abs(cross_persistence) < 1.0)) violation("cross-covariance equation is not stationary");
    PresampleValues p;
    p.var_pos = p.sq_pos = params.pos.gamma / (1.0 - params.pos.persistence());
    p.var_neg = p.sq_neg = params.neg.gamma / (1.0 - params.neg.persistence());
    p.cov = p.cross_prod = params.cross.gamma / (1.0 - cross_persistence);
    return p;
}

VolatilityRecursion::VolatilityRecursion(const GarchSystemParams& params, const PresampleValues& presample)
    : params_(params),
      capacity_(static_cast<std::size_t>(std::max(1, params.orders().max_lag()))),
      presample_(presample),
      sq_pos_(capacity_),
      sq_neg_(capacity_),
      prod_(capacity_),
      var_pos_(capacity_),
      var_neg_(capacity_),
      cov_(capacity_) {}

double VolatilityRecursion::lagged(const std::vector<double>& ring, std::size_t lag) const {
    return ring[(head_ + capacity_ - lag) % capacity_];
}

ConditionalMoments VolatilityRecursion::next() const {
    const auto eval = [&](const VarianceEquation& eq, const std::vector<double>& shocks,
                          const std::vector<double>& moments, double shock0, double moment0) {
        double s = eq.gamma;
        for (std::size_t i = 0; i < eq.phi.size(); ++i)
            s += eq.phi[i] * (i + 1 <= count_ ? lagged(shocks, i + 1) : shock0);
        for (std::size_t j = 0; j < eq.lambda.size(); ++j)
            s += eq.lambda[j] * (j + 1 <= count_ ? lagged(moments, j + 1) : moment0);
        return s;
    };
    return {eval(params_.pos, sq_pos_, var_pos_, presample_.sq_pos, presample_.var_pos),
            eval(params_.neg, sq_neg_, var_neg_, presample_.sq_neg, presample_.var_neg),
            eval(params_.cross, prod_, cov_, presample_.cross_prod, presample_.cov)};
}

void VolatilityRecursion::push(double u_pos, double u_neg, const ConditionalMoments& m) {
    sq_pos_[head_] = u_pos * u_pos;
    sq_neg_[head_] = u_neg * u_neg;
    prod_[head_] = u_pos * u_neg;
    var_pos_[head_] = m.var_pos;
    var_neg_[head_] = m.var_neg;
    cov_[head_] = m.cov;
    head_ = (head_ + 1) % capacity_;
    ++count_;
}

std::size_t FilteredVolatility::pd_violations() const {
    return static_cast<std::size_t>(std::count(pd_flag.begin(), pd_flag.end(), 0));
}

ResidualPair residuals(const GarchSystemParams& params, const ComponentSeries& components) {
    const std::size_t n = components.size();
    ResidualPair u;
    u.pos.resize(n);
    u.neg.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        u.pos[t] = components.ds_pos[t] - params.alpha_pos - params.h_pos * components.df_pos[t];
        u.neg[t] = components.ds_neg[t] - params.alpha_neg - params.h_neg * components.df_neg[t];
    }
    return u;
}

FilteredVolatility filter(const GarchSystemParams& params, const ResidualPair& u,
                          const std::optional<PresampleValues>& init) {
    params.validate();
    if (u.pos.size() != u.neg.size()) throw Error(ErrorKind::InvalidInput, "mgarch", "residual series differ in length");
    const std::size_t n = u.size();
    VolatilityRecursion rec(params, init ? *init : presample_from_residuals(u));
    FilteredVolatility out;
    out.var_pos.resize(n);
    out.var_neg.resize(n);
    out.cov_cross.resize(n);
    out.pd_flag.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const ConditionalMoments m = rec.next();
        out.var_pos[t] = m.var_pos;
        out.var_neg[t] = m.var_neg;
        out.cov_cross[t] = m.cov;
        out.pd_flag[t] = m.cov * m.cov < kCorrelationBound * kCorrelationBound * m.var_pos * m.var_neg;
        rec.push(u.pos[t], u.neg[t], m);
    }
    return out;
}

LogLikelihood log_likelihood(const GarchSystemParams& params, const ComponentSeries& components, Innovation dist) {
    LogLikelihood out;
    if (dist != params.innovation())
        throw Error(ErrorKind::InvalidInput, "mgarch", "innovation law does not match the presence of nu");
    try {
        params.validate();
    } catch (const Error&) {
        return out;
    }

    const ResidualPair u = residuals(params, components);
    const std::size_t n = u.size();
    VolatilityRecursion rec(params, presample_from_residuals(u));

    const bool student = dist == Innovation::StudentT;
    const double nu = student ? *params.nu : 0.0;
    // For d = 2, log Gamma((nu+2)/2) - log Gamma(nu/2) = log(nu/2).
    const double t_const = student ? std::log(nu / 2.0) - std::log(std::numbers::pi * (nu - 2.0)) : 0.0;
    const double gauss_const = -std::log(2.0 * std::numbers::pi);

    double total = 0.0;
    double penalty = 0.0;
    std::size_t violations = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const ConditionalMoments m = rec.next();
        if (!(m.var_pos > 0.0) || !(m.var_neg > 0.0) || !std::isfinite(m.var_pos) || !std::isfinite(m.var_neg) ||
            !std::isfinite(m.cov))
            return out;
        const Clamped c = clamp_covariance(m.var_pos, m.var_neg, m.cov);
        if (c.excess > 0.0) {
            ++violations;
            penalty += kPdPenaltyWeight * c.excess * c.excess;
        }
        const double det = m.var_pos * m.var_neg - c.cov * c.cov;
        const double a = u.pos[t], b = u.neg[t];
        const double quad = (m.var_neg * a * a - 2.0 * c.cov * a * b + m.var_pos * b * b) / det;
        if (student)
            total += t_const - 0.5 * std::log(det) - 0.5 * (nu + 2.0) * std::log1p(quad / (nu - 2.0));
        else
            total += gauss_const - 0.5 * std::log(det) - 0.5 * quad;
        rec.push(a, b, m);
    }
    if (!std::isfinite(total)) return out;
    out.value = total - penalty;
    out.penalty = penalty;
    out.pd_violations = violations;
    out.feasible = true;
    return out;
}

ResidualPair standardized_residuals(const GarchSystemParams& params, const ComponentSeries& components,
                                    const std::optional<PresampleValues>& init) {
    const ResidualPair u = residuals(params, components);
    const FilteredVolatility f = filter(params, u, init);
    ResidualPair z;
    z.pos.resize(u.size());
    z.neg.resize(u.size());
    for (std::size_t t = 0; t < u.size(); ++t) {
        const Clamped c = clamp_covariance(f.var_pos[t], f.var_neg[t], f.cov_cross[t]);
        const double l11 = std::sqrt(f.var_pos[t]);
        const double l21 = c.cov / l11;
        const double l22 = std::sqrt(f.var_neg[t] - l21 * l21);
        z.pos[t] = u.pos[t] / l11;
        z.neg[t] = (u.neg[t] - l21 * z.pos[t]) / l22;
    }
    return z;
}

ParameterLayout::ParameterLayout(const LagOrders& orders, Innovation innovation)
    : orders_(orders), innovation_(innovation) {
    orders_.validate(64);
    size_ = 4 + 3 + orders.k_pos + orders.q_pos + orders.k_neg + orders.q_neg + orders.k_cross + orders.q_cross +
            (innovation == Innovation::StudentT ? 1 : 0);
}

Eigen::VectorXd ParameterLayout::pack(const GarchSystemParams& p) const {
    if (!(p.orders() == orders_) || p.innovation() != innovation_)
        throw Error(ErrorKind::InvalidInput, "mgarch", "parameters do not match the layout");
    Eigen::VectorXd x(size_);
    Eigen::Index i = 0;
    x(i++) = p.alpha_pos;
    x(i++) = p.h_pos;
    x(i++) = p.alpha_neg;
    x(i++) = p.h_neg;
    for (const VarianceEquation* eq : {&p.pos, &p.neg, &p.cross}) {
        x(i++) = eq->gamma;
        for (double v : eq->phi) x(i++) = v;
        for (double v : eq->lambda) x(i++) = v;
    }
    if (p.nu) x(i++) = *p.nu;
    return x;
}

GarchSystemParams ParameterLayout::unpack(const Eigen::VectorXd& x) const {
    if (x.size() != size_) throw Error(ErrorKind::InvalidInput, "mgarch", "parameter vector has wrong length");
    GarchSystemParams p;
    Eigen::Index i = 0;
    p.alpha_pos = x(i++);
    p.h_pos = x(i++);
    p.alpha_neg = x(i++);
    p.h_neg = x(i++);
    const std::pair<VarianceEquation*, std::pair<int, int>> eqs[] = {
        {&p.pos, {orders_.k_pos, orders_.q_pos}},
        {&p.neg, {orders_.k_neg, orders_.q_neg}},
        {&p.cross, {orders_.k_cross, orders_.q_cross}},
    };
    for (const auto& [eq, kq] : eqs) {
        eq->gamma = x(i++);
        eq->phi.resize(static_cast<std::size_t>(kq.first));
        eq->lambda.resize(static_cast<std::size_t>(kq.second));
        for (double& v : eq->phi) v = x(i++);
        for (double& v : eq->lambda) v = x(i++);
    }
    if (innovation_ == Innovation::StudentT) p.nu = x(i++);
    return p;
}

std::vector<std::string> ParameterLayout::names() const {
    std::vector<std::string> out = {"alpha_pos", "h_pos", "alpha_neg", "h_neg"};
    const std::pair<const char*, std::pair<int, int>> eqs[] = {
        {"pos", {orders_.k_pos, orders_.q_pos}},
        {"neg", {orders_.k_neg, orders_.q_neg}},
        {"cross", {orders_.k_cross, orders_.q_cross}},
    };
    for (const auto& [name, kq] : eqs) {
        out.push_back(std::string("gamma_") + name);
        for (int k = 1; k <= kq.first; ++k) out.push_back("phi_" + std::string(name) + "_" + std::to_string(k));
        for (int q = 1; q <= kq.second; ++q) out.push_back("lambda_" + std::string(name) + "_" + std::to_string(q));
    }
    if (innovation_ == Innovation::StudentT) out.push_back("nu");
    return out;
}

}  // namespace ohr
