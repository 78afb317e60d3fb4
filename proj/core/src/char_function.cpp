#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "primerace/compensated_sum.hpp"
#include "primerace/densities.hpp"
#include "primerace/errors.hpp"

namespace primerace {

namespace {

// max |J0| on [2, inf), attained near x = 3.8317.
constexpr double kJ0TailMax = 0.40276;

// log J0(x) for small x from its Maclaurin series; error below 1e-15 for x < 0.02.
double log_j0_small(double x) {
  const double x2 = x * x;
  return -x2 / 4.0 - x2 * x2 / 64.0 - x2 * x2 * x2 / 576.0;
}

// Nonincreasing bound on sup_{y >= x} |J0(y)|: J0 <= exp(-x^2/4) on [0, 2]
// and |J0(x)| <= sqrt(2 / (pi x)) everywhere.
double j0_envelope(double x) {
  if (x < 2.0) return std::max(std::exp(-x * x / 4.0), kJ0TailMax);
  return std::min(kJ0TailMax, std::sqrt(2.0 / (std::numbers::pi * x)));
}

struct Integrand {
  double offset;
  double tail_var;
  std::vector<double> scales;  // coefficient * 2 / sqrt(1/4 + gamma^2)
  mutable std::uint64_t evaluations = 0;

  double product(double t) const {
    double log_abs = -0.5 * tail_var * t * t;
    int sign = 1;
    for (const double s : scales) {
      const double x = std::abs(s) * t;
      if (x < 0.02) {
        log_abs += log_j0_small(x);
        continue;
      }
      const double j = boost::math::cyl_bessel_j(0, x);
      if (j == 0.0) return 0.0;
      if (j < 0.0) sign = -sign;
      log_abs += std::log(std::abs(j));
    }
    return sign * std::exp(log_abs);
  }

  double operator()(double t) const {
    ++evaluations;
    const double sinc = t == 0.0 ? offset : std::sin(offset * t) / t;
    return sinc * product(t);
  }

  // Bound on int_L^inf |integrand| dt.
  double tail_bound(double length) const {
    double log_env = 0.0;
    std::size_t decaying = 0;  // factors behaving like t^(-1/2) beyond L
    for (const double s : scales) {
      const double x = std::abs(s) * length;
      log_env += std::log(j0_envelope(x));
      if (std::sqrt(2.0 / (std::numbers::pi * x)) <= kJ0TailMax) ++decaying;
    }
    const double env = std::exp(log_env);
    double bound = std::numeric_limits<double>::infinity();
    if (decaying > 0) bound = env * std::exp(-0.5 * tail_var * length * length) * 2.0 / static_cast<double>(decaying);
    if (tail_var > 0.0) {
      const double a = 0.5 * tail_var;
      bound = std::min(bound, env * std::exp(-a * length * length) / (2.0 * a * length * length));
    }
    return bound;
  }
};

// Gauss-Kronrod on [a, b], bisected until each piece meets an absolute
// error target. Returns the summed error estimate.
template <typename F>
double integrate_abs(const F& f, double a, double b, double tol, int depth, CompensatedSum& sum) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  if (err <= tol || depth == 0) {
    sum += v;
    return err;
  }
  const double mid = 0.5 * (a + b);
  return integrate_abs(f, a, mid, 0.5 * tol, depth - 1, sum) + integrate_abs(f, mid, b, 0.5 * tol, depth - 1, sum);
}

}  // namespace

DensityEstimate cf_two_way(const RaceModel& model, const CfOptions& options) {
  if (model.kind != ModelKind::two_way) throw DomainError("cf_two_way: expected a two-way model");
  if (!(options.tolerance > 0.0)) throw DomainError("cf_two_way: tolerance must be positive");

  Integrand f{model.offset, 0.0, {}};
  for (const auto& term : model.terms) {
    f.tail_var += term.tail_sd * term.tail_sd;
    for (const double g : term.zeros.zeros) f.scales.push_back(term.coefficient * 2.0 / std::sqrt(0.25 + g * g));
  }
  // Small scales first so the product accumulates in a stable order.
  std::sort(f.scales.begin(), f.scales.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });

  DensityEstimate est;
  est.method = DensityMethod::characteristic_function;
  est.height = model.height;
  if (f.scales.empty() && f.tail_var == 0.0) {
    // Dirichlet integral: sin(c t)/t integrates to sign(c) pi/2.
    est.value = model.offset > 0.0 ? 1.0 : (model.offset < 0.0 ? 0.0 : 0.5);
    return est;
  }

  // Truncation: split the tolerance evenly between the cut and the quadrature.
  const double cut_budget = 0.5 * options.tolerance * std::numbers::pi;
  double length = 8.0;
  double tail = f.tail_bound(length);
  while (tail > cut_budget && length < options.max_length) {
    length *= 2.0;
    tail = f.tail_bound(length);
  }
  if (tail > cut_budget) {
    throw ConvergenceError("cf_two_way: integrand does not decay within t <= " + std::to_string(options.max_length),
                           tail / std::numbers::pi);
  }

  const double piece = 0.5;
  const auto pieces = static_cast<std::size_t>(std::ceil(length / piece));
  const double piece_tol = 0.5 * options.tolerance * std::numbers::pi / static_cast<double>(pieces);
  const auto integrand = [&f](double t) { return f(t); };
  CompensatedSum integral;
  double quad_error = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double a = static_cast<double>(i) * piece;
    quad_error += integrate_abs(integrand, a, std::min(length, a + piece), piece_tol, 10, integral);
  }
  const double achieved = (quad_error + tail) / std::numbers::pi;
  if (achieved > options.tolerance) {
    throw ConvergenceError("cf_two_way: quadrature did not reach the requested tolerance", achieved);
  }
  est.value = std::clamp(0.5 + integral.value() / std::numbers::pi, 0.0, 1.0);
  est.standard_error = achieved;
  est.budget = f.evaluations;
  return est;
}

}  // namespace primerace
