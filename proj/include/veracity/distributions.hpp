#pragma once

namespace veracity {

// Regularized incomplete beta I_x(a, b) by continued fraction (modified
// Lentz), using the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the slow side.
// Throws std::domain_error for a <= 0, b <= 0 or x outside [0, 1].
double regularized_beta(double x, double a, double b);

// Upper tail P(F > f) of the F distribution with (d1, d2) degrees of freedom.
double f_sf(double f, double d1, double d2);
double f_cdf(double f, double d1, double d2);

// Two-sided standard normal p-value, 2 * P(Z > |z|).
double normal_two_sided_p(double z);

}  // namespace veracity
