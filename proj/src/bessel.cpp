#include "vortex/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kSwitchover = 2.0; // series below, continued fraction above

double bessel_i0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double bessel_i1(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x, sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// Ascending series, x <= 2:
//   K0 = -(log(x/2) + gamma) I0 + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k
//   K1 = 1/x + log(x/2) I1 - (x/4) sum_{k>=0} [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
double k0_series(double x) {
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double term = 1.0, hk = 0.0, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        const double add = term * hk;
        sum += add;
        if (add < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return -(lg + kEulerGamma) * bessel_i0(x) + sum;
}

double k1_series(double x) {
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    // psi(1) = -gamma, psi(k+1) = -gamma + H_k
    double term = 1.0;     // (x^2/4)^k / (k! (k+1)!)  at k = 0
    double h1 = 0.0;       // H_k
    double h2 = 1.0;       // H_{k+1}
    double sum = term * (2.0 * (-kEulerGamma) + h1 + h2);
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1.0));
        h1 += 1.0 / k;
        h2 += 1.0 / (k + 1.0);
        const double add = term * (2.0 * (-kEulerGamma) + h1 + h2);
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return 1.0 / x + lg * bessel_i1(x) - 0.25 * x * sum;
}

// Steed/Thompson-Barnett evaluation of the CF2 continued fraction, the
// contracted form of the asymptotic expansion. Returns K0 and K1 for x >= 2.
void k01_continued_fraction(double x, double& k0, double& k1) {
    constexpr double eps = 1e-16;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25; // 1/4 - mu^2 with mu = 0
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    k0 = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

} // namespace

double bessel_k0(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k0: argument must be positive");
    if (x <= kSwitchover) return k0_series(x);
    double k0, k1;
    k01_continued_fraction(x, k0, k1);
    return k0;
}

double bessel_k1(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k1: argument must be positive");
    if (x <= kSwitchover) return k1_series(x);
    double k0, k1;
    k01_continued_fraction(x, k0, k1);
    return k1;
}

} // namespace vortex
