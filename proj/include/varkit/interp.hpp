#pragma once

#include <vector>

namespace varkit {

/// Monotonicity-preserving cubic Hermite interpolation on strictly
/// increasing knots. Slopes start from three-point parabolic estimates
/// and are then limited so the interpolant never overshoots between
/// knots: where neighboring secants disagree in sign the slope is 0, and
/// otherwise |slope| <= 3 * min(|secant left|, |secant right|).
/// Monotone data therefore yields a monotone interpolant. With exactly
/// two knots the interpolant is the straight line through them.
class MonotoneCubic {
public:
    /// Throws ValidationError on size mismatch, fewer than two knots,
    /// or non-increasing x.
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    /// Evaluates inside [x.front(), x.back()]; throws ValidationError
    /// outside the knot range.
    double operator()(double t) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, slope_;
};

/// Straight-line value at t between (x0,y0) and (x1,y1).
double lerp_at(double x0, double y0, double x1, double y1, double t);

} // namespace varkit
