#include "metahom/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "metahom/errors.hpp"

namespace metahom {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxSeriesTerms = 100000;
constexpr int kMaxQuantileIter = 200;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

void check_gamma_args(double shape, double x) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw DomainError("incomplete gamma: shape must be positive, got " +
                      std::to_string(shape));
  if (!(x >= 0.0))
    throw DomainError("incomplete gamma: x must be >= 0, got " +
                      std::to_string(x));
}

// log of x^a e^-x / Gamma(a)
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - log_gamma(a);
}

// Series for P(a, x); used for x < a + 1.
double lower_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Continued fraction for Q(a, x), modified Lentz; used for x >= a + 1.
double upper_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Standardized gamma quantile by safeguarded Newton. With lower = true it
// solves P(a, x) = target, otherwise Q(a, x) = target; callers pass the
// tail whose probability is <= 0.5 so the residual keeps relative accuracy.
double solve_gamma_quantile(double target, double a, bool lower) {
  const double lower_prob = lower ? target : 1.0 - target;

  // Wilson-Hilferty start, falling back to the small-x expansion
  // P(a, x) ~ x^a / Gamma(a + 1) when the cube goes non-positive.
  const double nu = 2.0 * a;
  const double z = lower ? normal_quantile(target) : -normal_quantile(target);
  const double k = 2.0 / (9.0 * nu);
  const double base = 1.0 - k + z * std::sqrt(k);
  double x = 0.5 * nu * base * base * base;
  if (!(base > 0.0) || !(x > 0.0) || (lower && lower_prob < 0.05 && a < 1.0)) {
    x = std::exp((std::log(lower_prob) + log_gamma(a + 1.0)) / a);
    if (!(x > 0.0)) x = kTiny;
  }

  auto residual = [&](double v) {
    return lower ? reg_gamma_p(a, v) - target : target - reg_gamma_q(a, v);
  };

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxQuantileIter; ++it) {
    const double f = residual(x);
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = std::exp(log_prefactor(a, x)) / x;
    double next = x - f / density;
    if (!std::isfinite(next) || !(next > lo) || !(next < hi)) {
      next = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) <= 2.0 * kEps * x ||
        (std::isfinite(hi) && hi - lo <= 2.0 * kEps * hi)) {
      return next;
    }
    x = next;
  }
  throw ConvergenceError("gamma quantile did not converge (shape " +
                         std::to_string(a) + ", p " + std::to_string(target) +
                         ")");
}

void check_quantile_args(double prob, double shape, double scale) {
  if (!(prob > 0.0 && prob < 1.0))
    throw DomainError("gamma quantile: probability must lie in (0,1), got " +
                      std::to_string(prob));
  if (!(shape > 0.0) || !std::isfinite(shape) || !(scale > 0.0) ||
      !std::isfinite(scale))
    throw DomainError("gamma quantile: shape and scale must be positive");
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || std::isinf(x))
    throw DomainError("log_gamma: argument must be positive and finite, got " +
                      std::to_string(x));
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i)
    sum += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) -
         t + std::log(sum);
}

double reg_gamma_p(double shape, double x) {
  check_gamma_args(shape, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < shape + 1.0) return lower_series(shape, x);
  return 1.0 - upper_continued_fraction(shape, x);
}

double reg_gamma_q(double shape, double x) {
  check_gamma_args(shape, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < shape + 1.0) return 1.0 - lower_series(shape, x);
  return upper_continued_fraction(shape, x);
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw DomainError("chi_square_sf: df must be positive");
  if (!(x >= 0.0)) throw DomainError("chi_square_sf: x must be >= 0");
  return reg_gamma_q(0.5 * df, 0.5 * x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal_quantile: p must lie in (0,1)");

  static constexpr std::array<double, 8> a = {
      3.387132872796366608,   133.14166789178437745, 1971.5909503065514427,
      13731.693765509461125,  45921.953931549871457, 67265.770927008700853,
      33430.575583588128105,  2509.0809287301226727};
  static constexpr std::array<double, 8> b = {
      1.0,                   42.313330701600911252, 687.1870074920579083,
      5394.1960214247511077, 21213.794301586595867, 39307.89580009271061,
      28729.085735721942674, 5226.495278852545925};
  static constexpr std::array<double, 8> c = {
      1.42343711074968357734,  4.6303378461565452959,
      5.7694972214606914055,   3.64784832476320460504,
      1.27045825245236838258,  0.24178072517745061177,
      0.0227238449892691845833, 7.7454501427834140764e-4};
  static constexpr std::array<double, 8> d = {
      1.0,                      2.05319162663775882187,
      1.6763848301838038494,    0.68976733498510000455,
      0.14810397642748007459,   0.0151986665636164571966,
      5.475938084995344946e-4,  1.05075007164441684324e-9};
  static constexpr std::array<double, 8> e = {
      6.6579046435011037772,    5.4637849111641143699,
      1.7848265399172913358,    0.29656057182850489123,
      0.026532189526576123093,  0.0012426609473880784386,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr std::array<double, 8> f = {
      1.0,                      0.59983220655588793769,
      0.13692988092273580531,   0.0148753612908506148525,
      7.868691311456132591e-4,  1.8463183175100546818e-5,
      1.4215117583164458887e-7, 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(a, r) / horner(b, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = horner(c, r) / horner(d, r);
  } else {
    r -= 5.0;
    val = horner(e, r) / horner(f, r);
  }
  return q < 0.0 ? -val : val;
}

double gamma_quantile(double u, double shape, double scale) {
  check_quantile_args(u, shape, scale);
  const double x = u <= 0.5 ? solve_gamma_quantile(u, shape, true)
                            : solve_gamma_quantile(1.0 - u, shape, false);
  return x * scale;
}

double gamma_quantile_upper(double q, double shape, double scale) {
  check_quantile_args(q, shape, scale);
  const double x = q <= 0.5 ? solve_gamma_quantile(q, shape, false)
                            : solve_gamma_quantile(1.0 - q, shape, true);
  return x * scale;
}

}  // namespace metahom
