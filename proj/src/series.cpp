#include "ohr/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ohr/errors.hpp"

namespace ohr {

namespace {

void fail(const std::string& msg) { throw Error(ErrorKind::InvalidInput, "series", msg); }

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::DegenerateHedge: return "degenerate-hedge";
        case ErrorKind::RankDeficiency: return "rank-deficiency";
        case ErrorKind::ConstraintViolation: return "constraint-violation";
        case ErrorKind::DegenerateCovariance: return "degenerate-covariance";
        case ErrorKind::NonInvertibleInformation: return "non-invertible-information";
        case ErrorKind::InvalidStart: return "invalid-start";
        case ErrorKind::Config: return "config";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::Convergence: return "convergence";
    }
    return "unknown";
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> spot, std::vector<double> futures)
    : dates_(std::move(dates)), spot_(std::move(spot)), futures_(std::move(futures)) {
    if (spot_.size() != futures_.size() || spot_.size() != dates_.size())
        fail("dates, spot and futures must have equal length");
    if (spot_.size() < 3) fail("series shorter than 3 observations");
    for (std::size_t i = 0; i < spot_.size(); ++i) {
        if (!std::isfinite(spot_[i]) || spot_[i] <= 0.0)
            fail("spot price at " + format_date(dates_[i]) + " is not strictly positive and finite");
        if (!std::isfinite(futures_[i]) || futures_[i] <= 0.0)
            fail("futures price at " + format_date(dates_[i]) + " is not strictly positive and finite");
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            if (dates_[i - 1] == dates_[i]) fail("duplicate date " + format_date(dates_[i]));
            fail("dates not increasing at " + format_date(dates_[i]));
        }
    }
}

void ReturnSeries::validate() const {
    if (ds.size() != df.size()) fail("spot and futures change series differ in length");
    if (!dates.empty() && dates.size() != ds.size()) fail("change dates do not match series length");
    if (!all_finite(ds) || !all_finite(df)) fail("change series contains non-finite values");
}

void ComponentSeries::validate() const {
    const std::size_t n = ds_pos.size();
    if (ds_neg.size() != n || df_pos.size() != n || df_neg.size() != n)
        fail("component series differ in length");
    for (std::size_t t = 0; t < n; ++t) {
        if (!(ds_pos[t] >= 0.0) || !(df_pos[t] >= 0.0) || !(ds_neg[t] <= 0.0) || !(df_neg[t] <= 0.0))
            fail("component sign constraint violated at index " + std::to_string(t));
        if (!std::isfinite(ds_pos[t]) || !std::isfinite(ds_neg[t]) || !std::isfinite(df_pos[t]) ||
            !std::isfinite(df_neg[t]))
            fail("component series contains non-finite values");
    }
}

ReturnSeries first_difference(const PriceSeries& prices, DifferenceMode mode) {
    const std::size_t n = prices.size();
    if (n < 3) fail("series shorter than 3 observations");
    const auto& s = prices.spot();
    const auto& f = prices.futures();
    ReturnSeries out;
    out.ds.resize(n - 1);
    out.df.resize(n - 1);
    out.dates.assign(prices.dates().begin() + 1, prices.dates().end());
    for (std::size_t t = 0; t + 1 < n; ++t) {
        if (mode == DifferenceMode::Levels) {
            out.ds[t] = s[t + 1] - s[t];
            out.df[t] = f[t + 1] - f[t];
        } else {
            out.ds[t] = std::log(s[t + 1]) - std::log(s[t]);
            out.df[t] = std::log(f[t + 1]) - std::log(f[t]);
        }
    }
    return out;
}

ComponentSeries split_components(const ReturnSeries& returns) {
    returns.validate();
    const std::size_t n = returns.size();
    ComponentSeries c;
    c.ds_pos.resize(n);
    c.ds_neg.resize(n);
    c.df_pos.resize(n);
    c.df_neg.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        // One side takes the value and the other an exact zero, so the
        // re-sum reproduces the input bit for bit.
        const double s = returns.ds[t];
        const double f = returns.df[t];
        c.ds_pos[t] = s > 0.0 ? s : 0.0;
        c.ds_neg[t] = s < 0.0 ? s : 0.0;
        c.df_pos[t] = f > 0.0 ? f : 0.0;
        c.df_neg[t] = f < 0.0 ? f : 0.0;
    }
    return c;
}

MomentSummary sample_moments(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) fail("moment inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) fail("moments need at least 2 observations");

    MomentSummary m;
    for (std::size_t i = 0; i < n; ++i) {
        m.mean_s += x[i];
        m.mean_f += y[i];
    }
    m.mean_s /= static_cast<double>(n);
    m.mean_f /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - m.mean_s;
        const double dy = y[i] - m.mean_f;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double denom = static_cast<double>(n - 1);
    m.sigma_s = std::sqrt(sxx / denom);
    m.sigma_f = std::sqrt(syy / denom);
    if (sxx == 0.0 || syy == 0.0) {
        m.rho = 0.0;
        m.degenerate = true;
    } else {
        m.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    }
    return m;
}

}  // namespace ohr
