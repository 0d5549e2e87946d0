#include "veracity/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace veracity {

namespace {

double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

// lgamma(x) minus its Stirling approximation, for x >= 10.
double stirling_remainder(double x) {
  const double r = 1.0 / (x * x);
  return (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r * (1.0 / 1680.0 - r * (1.0 / 1188.0 -
          r * (691.0 / 360360.0 - r / 156.0)))))) / x;
}

// log B(a, b) without the cancellation of three large lgamma values.
double log_beta(double a, double b) {
  constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= 10.0) {
    const double corr = stirling_remainder(p) + stirling_remainder(q) - stirling_remainder(p + q);
    return -0.5 * std::log(q) + kLogSqrt2Pi + corr + (p - 0.5) * std::log(p / (p + q)) + q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = stirling_remainder(q) - stirling_remainder(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

// log1p(u) - u, accurate near zero.
double log1pmx(double u) {
  if (std::fabs(u) > 0.5) return std::log1p(u) - u;
  double term = u, sum = 0.0;
  for (int k = 2; k < 200; ++k) {
    term *= -u;
    const double next = sum + term / k;
    if (next == sum) break;
    sum = next;
  }
  return sum;
}

// log(x^a (1-x)^b / B(a, b)).
double log_prefactor(double x, double a, double b) {
  if (std::min(a, b) < 10.0) return a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  // Stirling form: the linear terms of a log(x (a+b)/a) and b log((1-x)(a+b)/b)
  // cancel exactly, leaving only the curvature terms.
  constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
  // t = (a + b) x - a with compensated products and sums.
  const double p1 = a * x, e1 = std::fma(a, x, -p1);
  const double p2 = b * x, e2 = std::fma(b, x, -p2);
  auto two_sum = [](double u, double v, double& err) {
    const double s = u + v;
    const double vv = s - u;
    err = (u - (s - vv)) + (v - vv);
    return s;
  };
  double r1 = 0.0, r2 = 0.0;
  const double s1 = two_sum(p1, -a, r1);
  const double s2 = two_sum(s1, p2, r2);
  const double t = s2 + (r1 + r2 + e1 + e2);
  // c log1pmx(u) where 1 + u = ratio; far from zero the ratio is formed
  // directly so 1 + u keeps its relative precision.
  auto curvature = [](double c, double u, double ratio) {
    return std::fabs(u) > 0.5 ? c * std::log(ratio) - c * u : c * log1pmx(u);
  };
  const double corr = stirling_remainder(a) + stirling_remainder(b) - stirling_remainder(a + b);
  return curvature(a, t / a, x * ((a + b) / a)) + curvature(b, -t / b, (1.0 - x) * ((a + b) / b)) +
         0.5 * std::log(a / (a + b) * b) - kLogSqrt2Pi - corr;
}

}  // namespace

double regularized_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("regularized_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("regularized_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front = log_prefactor(x, a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double f_sf(double f, double d1, double d2) {
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  // P(F > f) = I_{d2/(d2 + d1 f)}(d2/2, d1/2)
  return regularized_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0);
}

double f_cdf(double f, double d1, double d2) {
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  return regularized_beta(d1 * f / (d1 * f + d2), d1 / 2.0, d2 / 2.0);
}

double normal_two_sided_p(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

}  // namespace veracity
