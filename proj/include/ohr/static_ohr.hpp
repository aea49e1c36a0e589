#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ohr/series.hpp"

namespace ohr {

enum class RatioKind { Symmetric, PositiveComponent, NegativeComponent };
enum class EstimationMethod { Moment, Ols, Sure, Mgarch };
enum class Position { Long, Short };

const char* to_string(RatioKind kind);
const char* to_string(EstimationMethod method);
const char* to_string(Position position);

/// Spot and futures holdings; the hedge ratio is q_f / q_s.
struct HedgedPortfolio {
    double q_s = 1.0;
    double q_f = 0.0;

    HedgedPortfolio(double spot_quantity, double futures_quantity);
    double hedge_ratio() const noexcept { return q_f / q_s; }
    /// Change in hedged value for one period: q_s * dS - q_f * dF.
    double value_change(double ds, double df) const noexcept { return q_s * ds - q_f * df; }
};

struct OhrEstimate {
    double h = 0.0;
    double alpha = 0.0;
    std::optional<double> se_h;
    RatioKind kind = RatioKind::Symmetric;
    EstimationMethod method = EstimationMethod::Moment;
    // True when the moments were degenerate (constant spot side) and h was forced to 0.
    bool degenerate = false;
};

struct HedgeStrategy {
    Position asset_position;
    Position futures_position;

    bool operator==(const HedgeStrategy&) const = default;
};

/// Full output of a simple regression y = alpha + h x + u.
struct OlsFit {
    OhrEstimate estimate;
    double se_alpha = 0.0;
    double residual_variance = 0.0;  // RSS / (n - 2)
    std::vector<double> residuals;
};

/// Minimum-variance ratio rho * sigma_s / sigma_f.
OhrEstimate symmetric_ohr_moment(const MomentSummary& moments);

/// Least-squares regression of y on a constant and x, solved by QR.
OlsFit ols_fit(std::span<const double> y, std::span<const double> x);
OhrEstimate ols_regression(std::span<const double> y, std::span<const double> x);

/// Moment ratios on the full-length positive and negative component series.
std::pair<OhrEstimate, OhrEstimate> asymmetric_ohr_moment(const ComponentSeries& components);

/// q_s^2 [sigma_s^2 + h^2 sigma_f^2 - 2 h rho sigma_s sigma_f]
double portfolio_variance(double q_s, double h, const MomentSummary& moments);

/// Futures position that offsets an asset position for a ratio of the given
/// sign. Returns nullopt when h == 0: no hedge is needed.
std::optional<HedgeStrategy> strategy_for(double h, Position asset_position);

}  // namespace ohr
