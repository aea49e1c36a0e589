#pragma once

#include <chrono>
#include <span>
#include <string>
#include <vector>

namespace ohr {

using Date = std::chrono::year_month_day;

std::string format_date(Date d);

/// Aligned spot and futures price levels.
///
/// Dates are strictly increasing, prices strictly positive and finite, and
/// there are at least three observations. Construction validates all of it.
class PriceSeries {
public:
    PriceSeries(std::vector<Date> dates, std::vector<double> spot, std::vector<double> futures);

    std::size_t size() const noexcept { return spot_.size(); }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& spot() const noexcept { return spot_; }
    const std::vector<double>& futures() const noexcept { return futures_; }

private:
    std::vector<Date> dates_;
    std::vector<double> spot_;
    std::vector<double> futures_;
};

/// Per-period changes dS_t and dF_t. `dates` holds the end date of each
/// period and is empty for simulated series.
struct ReturnSeries {
    std::vector<double> ds;
    std::vector<double> df;
    std::vector<Date> dates;

    std::size_t size() const noexcept { return ds.size(); }
    void validate() const;
};

/// Sign-split changes. Positive parts are >= 0, negative parts <= 0.
struct ComponentSeries {
    std::vector<double> ds_pos;
    std::vector<double> ds_neg;
    std::vector<double> df_pos;
    std::vector<double> df_neg;

    std::size_t size() const noexcept { return ds_pos.size(); }

    /// Checks lengths, finiteness and the sign constraints. Does not require
    /// that at most one part is nonzero per period: simulated systems build
    /// the spot components directly from the component regressions.
    void validate() const;
};

struct MomentSummary {
    double sigma_s = 0.0;
    double sigma_f = 0.0;
    double rho = 0.0;
    double mean_s = 0.0;
    double mean_f = 0.0;
    // Set when either series is constant; rho is then reported as 0.
    bool degenerate = false;
};

enum class DifferenceMode { Levels, Logs };

ReturnSeries first_difference(const PriceSeries& prices, DifferenceMode mode = DifferenceMode::Levels);

ComponentSeries split_components(const ReturnSeries& returns);

/// Sample standard deviations (divisor n - 1), means and Pearson correlation.
MomentSummary sample_moments(std::span<const double> x, std::span<const double> y);

}  // namespace ohr
