#include "ohr/sim.hpp"

#include <cmath>

#include "ohr/errors.hpp"
#include "ohr/rng.hpp"

namespace ohr {

void DgpSpec::validate() const {
    true_params.validate();
    if (std::abs(true_params.cross.persistence()) >= 1.0)
        throw Error(ErrorKind::ConstraintViolation, "sim", "cross-covariance equation is not stationary");
    if (true_params.innovation() != innovation)
        throw Error(ErrorKind::InvalidInput, "sim", "innovation law does not match the presence of nu");
    if (length < 50) throw Error(ErrorKind::InvalidInput, "sim", "simulated length must be at least 50");
    if (!(futures.omega > 0.0) || futures.arch < 0.0 || futures.garch < 0.0 || futures.arch + futures.garch >= 1.0)
        throw Error(ErrorKind::ConstraintViolation, "sim", "futures GARCH parameters are not stationary");
}

GarchSystemParams reference_params(double h_pos, double h_neg, std::optional<double> nu) {
    GarchSystemParams p;
    p.alpha_pos = 1.0;
    p.h_pos = h_pos;
    p.alpha_neg = -1.0;
    p.h_neg = h_neg;
    p.pos = {0.004, {0.1}, {0.8}};
    p.neg = {0.004, {0.1}, {0.8}};
    p.cross = {0.002, {0.1}, {0.8}};
    p.nu = nu;
    return p;
}

SimulatedData simulate(const DgpSpec& spec) {
    spec.validate();
    const GarchSystemParams& p = spec.true_params;
    const PresampleValues start = unconditional_moments(p);
    if (start.cov * start.cov >= start.var_pos * start.var_neg)
        throw Error(ErrorKind::ConstraintViolation, "sim", "unconditional covariance matrix is not positive definite");

    Rng rng(spec.seed);
    const bool student = spec.innovation == Innovation::StudentT;
    const double nu = student ? *p.nu : 0.0;
    // Scale turning a normal (or pair of normals) into a unit-variance t draw.
    const auto t_scale = [&]() { return student ? std::sqrt((nu - 2.0) / rng.chi_square(nu)) : 1.0; };

    SimulatedData out;
    out.truth.params = p;
    out.truth.seed = spec.seed;
    const std::size_t n = spec.length;
    auto& c = out.components;
    c.ds_pos.reserve(n);
    c.ds_neg.reserve(n);
    c.df_pos.reserve(n);
    c.df_neg.reserve(n);
    out.returns.ds.reserve(n);
    out.returns.df.reserve(n);

    const FuturesGarch& fg = spec.futures;
    double f_var = fg.omega / (1.0 - fg.arch - fg.garch);
    VolatilityRecursion rec(p, start);

    for (std::size_t t = 0; t < spec.burn_in + n; ++t) {
        const double df = std::sqrt(f_var) * rng.normal() * t_scale();
        f_var = fg.omega + fg.arch * df * df + fg.garch * f_var;
        const double df_pos = df > 0.0 ? df : 0.0;
        const double df_neg = df < 0.0 ? df : 0.0;

        const ConditionalMoments m = rec.next();
        const double l11 = std::sqrt(m.var_pos);
        const double l21 = m.cov / l11;
        const double l22_sq = m.var_neg - l21 * l21;
        if (!(m.var_pos > 0.0) || !(l22_sq > 0.0))
            throw Error(ErrorKind::ConstraintViolation, "sim", "conditional covariance lost positive definiteness");
        const double l22 = std::sqrt(l22_sq);

        double u_pos = 0.0, u_neg = 0.0, ds_pos = 0.0, ds_neg = 0.0;
        std::size_t attempts = 0;
        for (;;) {
            const double s = t_scale();
            const double z1 = rng.normal(), z2 = rng.normal();
            u_pos = s * l11 * z1;
            u_neg = s * (l21 * z1 + l22 * z2);
            ds_pos = p.alpha_pos + p.h_pos * df_pos + u_pos;
            ds_neg = p.alpha_neg + p.h_neg * df_neg + u_neg;
            if (ds_pos >= 0.0 && ds_neg <= 0.0) break;
            if (++attempts > spec.max_redraws_per_period)
                throw Error(ErrorKind::ConstraintViolation, "sim",
                            "component signs cannot be satisfied; intercepts too small for the residual scale");
        }
        rec.push(u_pos, u_neg, m);
        if (t < spec.burn_in) continue;
        out.truth.redraws += attempts;
        c.ds_pos.push_back(ds_pos);
        c.ds_neg.push_back(ds_neg);
        c.df_pos.push_back(df_pos);
        c.df_neg.push_back(df_neg);
        out.returns.ds.push_back(ds_pos + ds_neg);
        out.returns.df.push_back(df);
    }
    return out;
}

double SimStudyResult::rate_at(double level) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == level) return rejection_rate.at(i);
    throw Error(ErrorKind::InvalidInput, "sim", "level not tracked by the study");
}

StudyOptions StudyOptions::defaults() {
    StudyOptions o;
    o.analysis.innovation = Innovation::Gaussian;
    o.analysis.select_lags = false;
    o.analysis.fixed_orders = LagOrders::uniform(1, 1);
    o.analysis.fit.optimizer.restarts = 0;
    return o;
}

SimStudyResult run_study(const DgpSpec& spec, std::size_t replications, const StudyOptions& options) {
    if (replications == 0) throw Error(ErrorKind::InvalidInput, "sim", "study needs at least one replication");
    spec.validate();

    SimStudyResult result;
    result.replications = replications;
    result.rejection_rate.assign(result.levels.size(), 0.0);
    std::vector<std::size_t> rejections(result.levels.size(), 0);
    std::size_t completed = 0;

    const LagOrders orders = options.analysis.fixed_orders;
    const ParameterLayout layout(orders, options.analysis.innovation);
    const std::vector<std::string> names = layout.names();
    std::vector<double> truth(names.size(), 0.0);
    {
        GarchSystemParams t = spec.true_params;
        const bool comparable = t.orders() == orders && t.innovation() == options.analysis.innovation;
        if (comparable) {
            const Eigen::VectorXd v = layout.pack(t);
            for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = v(static_cast<Eigen::Index>(i));
        } else {
            truth[0] = t.alpha_pos;
            truth[1] = t.h_pos;
            truth[2] = t.alpha_neg;
            truth[3] = t.h_neg;
        }
    }
    std::vector<double> sum(names.size(), 0.0), sum_sq(names.size(), 0.0), sum_err_sq(names.size(), 0.0);
    std::vector<std::size_t> count(names.size(), 0);
    const auto record = [&](std::size_t i, double est) {
        sum[i] += est;
        sum_sq[i] += est * est;
        sum_err_sq[i] += (est - truth[i]) * (est - truth[i]);
        ++count[i];
    };

    for (std::size_t r = 0; r < replications; ++r) {
        DgpSpec rep = spec;
        rep.seed = Rng::stream_seed(spec.seed, r);
        try {
            const SimulatedData data = simulate(rep);
            result.redraws += data.truth.redraws;
            if (options.estimates_only) {
                FitOptions fo = options.analysis.fit;
                fo.compute_covariance = false;
                const SystemFit fit = fit_mgarch(data.components, orders, options.analysis.innovation, fo);
                const Eigen::VectorXd v = layout.pack(fit.params);
                for (std::size_t i = 0; i < names.size(); ++i) record(i, v(static_cast<Eigen::Index>(i)));
                ++result.mgarch_path;
            } else {
                const AsymmetryAnalysis a = analyze_asymmetry(data.components, options.analysis);
                for (std::size_t l = 0; l < result.levels.size(); ++l)
                    if (a.wald.p_value < result.levels[l]) ++rejections[l];
                if (a.fit) {
                    ++result.mgarch_path;
                    const Eigen::VectorXd v = layout.pack(a.fit->params);
                    for (std::size_t i = 0; i < names.size(); ++i) record(i, v(static_cast<Eigen::Index>(i)));
                } else {
                    record(0, a.pos.alpha);
                    record(1, a.pos.h);
                    record(2, a.neg.alpha);
                    record(3, a.neg.h);
                }
            }
            ++completed;
        } catch (const Error& e) {
            ++result.failures;
            result.failure_messages.push_back("replication " + std::to_string(r) + ": " + e.what());
        }
    }

    if (result.failures * 10 > replications)
        throw Error(ErrorKind::Convergence, "sim",
                    std::to_string(result.failures) + " of " + std::to_string(replications) + " replications failed");
    for (std::size_t l = 0; l < result.levels.size(); ++l)
        result.rejection_rate[l] =
            completed > 0 ? static_cast<double>(rejections[l]) / static_cast<double>(completed) : 0.0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (count[i] == 0) continue;
        const double k = static_cast<double>(count[i]);
        ParameterRecovery pr;
        pr.truth = truth[i];
        pr.count = count[i];
        pr.mean = sum[i] / k;
        pr.bias = pr.mean - truth[i];
        pr.rmse = std::sqrt(sum_err_sq[i] / k);
        const double var = count[i] > 1 ? std::max(0.0, (sum_sq[i] - k * pr.mean * pr.mean) / (k - 1.0)) : 0.0;
        pr.mc_se = std::sqrt(var / k);
        result.recovery[names[i]] = pr;
    }
    return result;
}

SizePowerResult size_power_study(const DgpSpec& symmetric, const DgpSpec& asymmetric, std::size_t replications,
                                 const StudyOptions& options) {
    if (replications < 100)
        throw Error(ErrorKind::InvalidInput, "sim", "size/power studies need at least 100 replications");
    if (symmetric.true_params.h_pos != symmetric.true_params.h_neg)
        throw Error(ErrorKind::InvalidInput, "sim", "the size design must have equal hedge ratios");
    return {run_study(symmetric, replications, options), run_study(asymmetric, replications, options)};
}

}  // namespace ohr
