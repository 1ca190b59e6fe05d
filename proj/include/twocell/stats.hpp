#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace twocell {

struct BinomialCi {
    double lo;
    double hi;
    double half_width;  // (hi - lo) / 2
    bool exact;         // true when the Clopper-Pearson fallback was used
};

namespace detail {

inline double log_binom_pmf(std::uint64_t n, std::uint64_t k, double p) {
    if (p <= 0.0) return k == 0 ? 0.0 : -INFINITY;
    if (p >= 1.0) return k == n ? 0.0 : -INFINITY;
    const double lc = std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(k) + 1.0) -
                      std::lgamma(static_cast<double>(n - k) + 1.0);
    return lc + static_cast<double>(k) * std::log(p) +
           static_cast<double>(n - k) * std::log1p(-p);
}

// P(X <= k) for X ~ Binomial(n, p); only called with small k.
inline double binom_cdf(std::uint64_t n, std::uint64_t k, double p) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i <= k; ++i) sum += std::exp(log_binom_pmf(n, i, p));
    return std::min(sum, 1.0);
}

inline double bisect(double lo, double hi, double target, auto&& cdf) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// 95% interval for a binomial proportion: normal approximation, with an exact
// Clopper-Pearson interval once successes drop below 10 (the regime where the
// normal width is meaningless).
inline BinomialCi binomial_ci95(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("binomial_ci95: n == 0");
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    if (successes >= 10 && n - successes >= 10) {
        const double hw = 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        return {std::max(0.0, p - hw), std::min(1.0, p + hw), hw, false};
    }
    const double alpha2 = 0.025;
    double lo = 0.0, hi = 1.0;
    const std::uint64_t k = successes;
    if (k > 0) {
        // largest p with P(X >= k) <= alpha/2  <=>  P(X <= k-1) >= 1-alpha/2
        lo = detail::bisect(0.0, p, 1.0 - alpha2,
                            [&](double q) { return detail::binom_cdf(n, k - 1, q); });
    }
    if (k < n) {
        if (n - k < 10) {
            // mirror through failures to keep the cdf sum short
            const std::uint64_t kf = n - k;
            const double hif = detail::bisect(
                0.0, 1.0 - p, 1.0 - alpha2,
                [&](double q) { return detail::binom_cdf(n, kf - 1, q); });
            hi = 1.0 - hif;
        } else {
            hi = detail::bisect(p, 1.0, alpha2,
                                [&](double q) { return detail::binom_cdf(n, k, q); });
        }
    }
    return {lo, hi, 0.5 * (hi - lo), true};
}

// Monotone cubic (Fritsch-Carlson) interpolant; preserves the monotonicity of
// the data, which the common-random-number curves have path-wise.
class PchipInterpolator {
  public:
    PchipInterpolator(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("pchip: need at least two matched points");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("pchip: x not increasing");
        slopes_.resize(n);
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        slopes_[0] = delta[0];
        slopes_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                slopes_[i] = 0.0;
            } else {
                const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
                slopes_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
    }

    double operator()(double x) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * y_[i] + h10 * h * slopes_[i] + h01 * y_[i + 1] + h11 * h * slopes_[i + 1];
    }

    // First x with f(x) = target, assuming nondecreasing data. Throws if the
    // target is outside the data range.
    double solve_first(double target) const {
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
            if ((y_[i] - target) * (y_[i + 1] - target) <= 0.0 && y_[i] != y_[i + 1]) {
                double lo = x_[i], hi = x_[i + 1];
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (((*this)(mid) - target) * ((*this)(lo) - target) <= 0.0)
                        hi = mid;
                    else
                        lo = mid;
                }
                return 0.5 * (lo + hi);
            }
            if (y_[i] == target) return x_[i];
        }
        throw std::domain_error("pchip: target outside the curve range");
    }

  private:
    std::size_t segment(double x) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(i, x_.size() - 2);
    }

    std::vector<double> x_, y_, slopes_;
};

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need matched points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace twocell
