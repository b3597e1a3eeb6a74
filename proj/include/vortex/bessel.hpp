#pragma once

namespace vortex {

// Modified Bessel functions of the second kind, accurate to better than
// 1e-12 relative on [1e-6, 50]. Ascending series for x <= 2, contracted
// (continued-fraction) form of the large-argument asymptotic expansion
// for x > 2. Throws std::domain_error for x <= 0.
double bessel_k0(double x);
double bessel_k1(double x);

} // namespace vortex
