#include "vortex/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vortex {

CubicHermite CubicHermite::pchip(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("pchip: need >= 2 matching points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("pchip: abscissae must increase");

    std::vector<double> h(n - 1), delta(n - 1), d(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            s = 3.0 * d0;
        return s;
    };
    if (n == 2) {
        d[0] = d[1] = delta[0];
    } else {
        d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    CubicHermite out;
    out.x_ = std::move(x);
    out.y_ = std::move(y);
    out.d_ = std::move(d);
    return out;
}

CubicHermite CubicHermite::monotone(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 4) return pchip(std::move(x), std::move(y));
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("monotone: abscissae must increase");

    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < n; ++i) {
        if (y[i] < y[i - 1]) increasing = false;
        if (y[i] > y[i - 1]) decreasing = false;
    }
    if (!increasing && !decreasing) return pchip(std::move(x), std::move(y));
    const double sign = increasing ? 1.0 : -1.0;

    const double h0 = x[1] - x[0];
    bool uniform = true;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs((x[i + 1] - x[i]) - h0) > 1e-9 * h0) uniform = false;

    std::vector<double> delta(n - 1), d(n);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);

    auto parabolic = [&](std::size_t i) {
        const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
        return (hr * delta[i - 1] + hl * delta[i]) / (hl + hr);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (uniform && i >= 2 && i + 2 < n)
            d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h0);
        else
            d[i] = parabolic(i);
    }
    d[0] = 2.0 * delta[0] - (n > 2 ? parabolic(1) : delta[0]);
    d[n - 1] = 2.0 * delta[n - 2] - parabolic(n - 2);

    // Hyman-style clamp: slopes stay within three times the adjacent secants
    // (in the data's direction), zero where a secant vanishes.
    auto clamp_dir = [&](double v, double lim) {
        const double s = sign * v;
        return sign * std::clamp(s, 0.0, 3.0 * lim);
    };
    d[0] = clamp_dir(d[0], sign * delta[0]);
    d[n - 1] = clamp_dir(d[n - 1], sign * delta[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = clamp_dir(d[i], std::min(sign * delta[i - 1], sign * delta[i]));

    CubicHermite out;
    out.x_ = std::move(x);
    out.y_ = std::move(y);
    out.d_ = std::move(d);
    return out;
}

double CubicHermite::operator()(double xq) const {
    if (xq <= x_.front()) return y_.front();
    if (xq >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

} // namespace vortex
