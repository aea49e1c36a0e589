#include "ohr/static_ohr.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ohr/errors.hpp"

namespace ohr {

const char* to_string(RatioKind kind) {
    switch (kind) {
        case RatioKind::Symmetric: return "symmetric";
        case RatioKind::PositiveComponent: return "positive-component";
        case RatioKind::NegativeComponent: return "negative-component";
    }
    return "?";
}

const char* to_string(EstimationMethod method) {
    switch (method) {
        case EstimationMethod::Moment: return "moment";
        case EstimationMethod::Ols: return "ols";
        case EstimationMethod::Sure: return "sure";
        case EstimationMethod::Mgarch: return "mgarch";
    }
    return "?";
}

const char* to_string(Position position) { return position == Position::Long ? "long" : "short"; }

HedgedPortfolio::HedgedPortfolio(double spot_quantity, double futures_quantity)
    : q_s(spot_quantity), q_f(futures_quantity) {
    if (!(q_s > 0.0)) throw Error(ErrorKind::InvalidInput, "ohr_static", "spot quantity must be positive");
}

OhrEstimate symmetric_ohr_moment(const MomentSummary& moments) {
    if (!(moments.sigma_f > 0.0))
        throw Error(ErrorKind::DegenerateHedge, "ohr_static", "futures price never moves (sigma_f = 0)");
    OhrEstimate e;
    e.h = moments.rho * moments.sigma_s / moments.sigma_f;
    e.alpha = moments.mean_s - e.h * moments.mean_f;
    e.kind = RatioKind::Symmetric;
    e.method = EstimationMethod::Moment;
    e.degenerate = moments.degenerate;
    return e;
}

OlsFit ols_fit(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size())
        throw Error(ErrorKind::InvalidInput, "ohr_static", "regression inputs differ in length");
    const auto n = static_cast<Eigen::Index>(y.size());
    if (n < 3) throw Error(ErrorKind::InvalidInput, "ohr_static", "regression needs at least 3 observations");

    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd response(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = x[static_cast<std::size_t>(i)];
        response(i) = y[static_cast<std::size_t>(i)];
    }
    bool constant = true;
    for (Eigen::Index i = 1; i < n && constant; ++i) constant = design(i, 1) == design(0, 1);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (constant || qr.rank() < 2)
        throw Error(ErrorKind::RankDeficiency, "ohr_static", "regressor is constant; slope not identified");

    const Eigen::Vector2d beta = qr.solve(response);
    const Eigen::VectorXd resid = response - design * beta;
    const double s2 = resid.squaredNorm() / static_cast<double>(n - 2);
    const Eigen::Matrix2d xtx_inv = (design.transpose() * design).inverse();

    OlsFit fit;
    fit.estimate.alpha = beta(0);
    fit.estimate.h = beta(1);
    fit.estimate.se_h = std::sqrt(s2 * xtx_inv(1, 1));
    fit.estimate.kind = RatioKind::Symmetric;
    fit.estimate.method = EstimationMethod::Ols;
    fit.se_alpha = std::sqrt(s2 * xtx_inv(0, 0));
    fit.residual_variance = s2;
    fit.residuals.assign(resid.data(), resid.data() + n);
    return fit;
}

OhrEstimate ols_regression(std::span<const double> y, std::span<const double> x) { return ols_fit(y, x).estimate; }

std::pair<OhrEstimate, OhrEstimate> asymmetric_ohr_moment(const ComponentSeries& components) {
    components.validate();
    const auto one_side = [](const std::vector<double>& s, const std::vector<double>& f, RatioKind kind,
                             const char* side) {
        const MomentSummary m = sample_moments(s, f);
        if (!(m.sigma_f > 0.0))
            throw Error(ErrorKind::DegenerateHedge, "ohr_static",
                        std::string(side) + " futures component has zero variance");
        OhrEstimate e = symmetric_ohr_moment(m);
        e.kind = kind;
        return e;
    };
    return {one_side(components.ds_pos, components.df_pos, RatioKind::PositiveComponent, "positive"),
            one_side(components.ds_neg, components.df_neg, RatioKind::NegativeComponent, "negative")};
}

double portfolio_variance(double q_s, double h, const MomentSummary& m) {
    return q_s * q_s *
           (m.sigma_s * m.sigma_s + h * h * m.sigma_f * m.sigma_f - 2.0 * h * m.rho * m.sigma_s * m.sigma_f);
}

std::optional<HedgeStrategy> strategy_for(double h, Position asset_position) {
    if (h == 0.0 || std::isnan(h)) return std::nullopt;
    const Position opposite = asset_position == Position::Long ? Position::Short : Position::Long;
    // Positive ratio: take the opposite side in futures. Negative: the same side.
    return HedgeStrategy{asset_position, h > 0.0 ? opposite : asset_position};
}

}  // namespace ohr
