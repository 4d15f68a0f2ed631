#include "varkit/interp.hpp"

#include "varkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varkit {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size())
        throw ValidationError("interpolation knot count mismatch");
    if (x_.size() < 2)
        throw ValidationError("interpolation needs at least two knots");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1]))
            throw ValidationError("interpolation knots not strictly increasing at index " +
                                  std::to_string(i));

    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        s[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    slope_.assign(n, 0.0);
    if (n == 2) {
        slope_[0] = slope_[1] = s[0];
        return;
    }
    // Interior: secant-weighted parabolic slope, then a monotonicity limit.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double d = (s[i - 1] * h[i] + s[i] * h[i - 1]) / (h[i - 1] + h[i]);
        if (s[i - 1] * s[i] <= 0.0) {
            d = 0.0;
        } else {
            const double cap = 3.0 * std::min(std::fabs(s[i - 1]), std::fabs(s[i]));
            d = std::clamp(d, -cap, cap);
        }
        slope_[i] = d;
    }
    // Ends: one-sided parabolic estimate limited against the end secant.
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (std::fabs(d) > 3.0 * std::fabs(s0)) return 3.0 * s0;
        return d;
    };
    slope_[0] = end_slope(h[0], h[1], s[0], s[1]);
    slope_[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
}

double MonotoneCubic::operator()(double t) const {
    if (t < x_.front() || t > x_.back())
        throw ValidationError("interpolation point " + std::to_string(t) +
                              " outside knot range [" + std::to_string(x_.front()) + ", " +
                              std::to_string(x_.back()) + "]");
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    if (it == x_.begin()) ++it;
    if (it == x_.end()) --it;
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double u = (t - x_[i]) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

double lerp_at(double x0, double y0, double x1, double y1, double t) {
    const double w = (t - x0) / (x1 - x0);
    return y0 + w * (y1 - y0);
}

} // namespace varkit
