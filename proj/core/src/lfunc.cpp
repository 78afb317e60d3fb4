#include "primerace/lfunc.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "primerace/errors.hpp"

namespace primerace {

namespace {

constexpr int kBernoulliTerms = 25;
constexpr double kTruncationTarget = 1e-12;

// B_{2j} / (2j)! for j = 1 .. kBernoulliTerms + 1 (the last one bounds the error).
const std::array<double, kBernoulliTerms + 2>& bernoulli_coefficients() {
  static const auto table = [] {
    std::array<double, kBernoulliTerms + 2> c{};
    for (int j = 1; j <= kBernoulliTerms + 1; ++j) {
      c[j] = boost::math::bernoulli_b2n<double>(j) / boost::math::factorial<double>(2 * j);
    }
    return c;
  }();
  return table;
}

std::int64_t shift_for(double imag) {
  return std::max<std::int64_t>(10, static_cast<std::int64_t>(std::ceil(std::abs(imag) / 2.0)));
}

// b^{-s} for real b > 0.
Complex real_pow_neg(double log_b, Complex s) {
  const double mag = std::exp(-s.real() * log_b);
  const double phase = -s.imag() * log_b;
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

// (e^z - 1)/z and its derivative, stable near z = 0.
Complex expm1_over_z(Complex z) {
  if (std::abs(z) < 0.5) {
    Complex sum = 0.0;
    Complex term = 1.0;
    for (int n = 0; n < 24; ++n) {
      sum += term;
      term *= z / static_cast<double>(n + 2);
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

Complex expm1_over_z_derivative(Complex z) {
  if (std::abs(z) < 0.5) {
    // sum_{n>=1} n z^{n-1} / (n+1)!
    Complex sum = 0.0;
    Complex power = 1.0;
    double factorial = 2.0;
    for (int n = 1; n < 26; ++n) {
      sum += static_cast<double>(n) * power / factorial;
      power *= z;
      factorial *= static_cast<double>(n + 2);
    }
    return sum;
  }
  return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

struct TailTerm {
  Complex value;
  Complex derivative;
  double error;
};

enum class PoleForm { singular, regularised };

// Euler-Maclaurin remainder sum_{m>=0} (m + b)^{-s} for large b.
// With PoleForm::regularised the b^{1-s}/(s-1) piece is replaced by
// (b^{1-s} - 1)/(s-1); the dropped 1/(s-1) cancels in any character sum.
template <bool WithDerivative>
TailTerm euler_maclaurin_tail(Complex s, double b, PoleForm form) {
  const auto& coeff = bernoulli_coefficients();
  const double log_b = std::log(b);
  const Complex b_neg_s = real_pow_neg(log_b, s);

  TailTerm out{};
  if (form == PoleForm::singular) {
    out.value = b_neg_s * b / (s - 1.0);
    if constexpr (WithDerivative) {
      out.derivative = -log_b * out.value - out.value / (s - 1.0);
    }
  } else {
    const Complex z = -(s - 1.0) * log_b;
    out.value = -log_b * expm1_over_z(z);
    if constexpr (WithDerivative) {
      out.derivative = log_b * log_b * expm1_over_z_derivative(z);
    }
  }
  out.value += 0.5 * b_neg_s;
  if constexpr (WithDerivative) out.derivative += -0.5 * log_b * b_neg_s;

  // P_j = s (s+1) ... (s+2j-2), power_j = b^{-s-2j+1}
  Complex pochhammer = s;
  Complex pochhammer_d = 1.0;
  Complex power = b_neg_s / b;
  const double inv_b2 = 1.0 / (b * b);
  for (int j = 1; j <= kBernoulliTerms; ++j) {
    const Complex term = coeff[j] * pochhammer * power;
    out.value += term;
    if constexpr (WithDerivative) {
      out.derivative += coeff[j] * (pochhammer_d - log_b * pochhammer) * power;
    }
    const Complex f1 = s + static_cast<double>(2 * j - 1);
    const Complex f2 = s + static_cast<double>(2 * j);
    if constexpr (WithDerivative) {
      pochhammer_d = pochhammer_d * f1 * f2 + pochhammer * (f1 + f2);
    }
    pochhammer *= f1 * f2;
    power *= inv_b2;
  }
  out.error = std::abs(coeff[kBernoulliTerms + 1] * pochhammer * power);
  return out;
}

template <bool WithDerivative>
LValueWithDerivative l_series(const Character& chi_in, Complex s, double* error_bound) {
  const Character chi = chi_in.primitive();
  const std::int64_t k = chi.conductor();
  const std::int64_t shift = shift_for(s.imag());

  Complex head = 0.0;
  Complex head_d = 0.0;
  double magnitude = 0.0;
  const std::int64_t head_end = shift * k;
  for (std::int64_t n = 1; n <= head_end; ++n) {
    const int c = chi(n);
    if (c == 0) continue;
    const double log_n = std::log(static_cast<double>(n));
    const Complex term = static_cast<double>(c) * real_pow_neg(log_n, s);
    head += term;
    magnitude += std::abs(term);
    if constexpr (WithDerivative) head_d -= log_n * term;
  }

  Complex tail = 0.0;
  Complex tail_d = 0.0;
  double error = 0.0;
  for (std::int64_t r = 1; r <= k; ++r) {
    const int c = chi(r);
    if (c == 0) continue;
    const double b = static_cast<double>(shift) + static_cast<double>(r) / static_cast<double>(k);
    const TailTerm t = euler_maclaurin_tail<WithDerivative>(s, b, PoleForm::regularised);
    tail += static_cast<double>(c) * t.value;
    if constexpr (WithDerivative) tail_d += static_cast<double>(c) * t.derivative;
    error += t.error;
  }
  const double log_k = std::log(static_cast<double>(k));
  const Complex k_neg_s = real_pow_neg(log_k, s);

  LValueWithDerivative out{};
  out.value = head + k_neg_s * tail;
  if constexpr (WithDerivative) out.derivative = head_d + k_neg_s * (tail_d - log_k * tail);
  if (error_bound != nullptr) {
    *error_bound = error * std::abs(k_neg_s) + 4.0 * std::numeric_limits<double>::epsilon() * magnitude;
  }
  if (error * std::abs(k_neg_s) > kTruncationTarget * std::max(1.0, std::abs(out.value))) {
    throw ConvergenceError("l_value: Euler-Maclaurin truncation error too large at s=(" +
                               std::to_string(s.real()) + "," + std::to_string(s.imag()) + ")",
                           error);
  }
  return out;
}

}  // namespace

EvalPoint hurwitz_zeta_eval(Complex s, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("hurwitz_zeta: a must lie in (0, 1]");
  if (s == Complex(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");

  const std::int64_t shift = shift_for(s.imag());
  Complex head = 0.0;
  double magnitude = 0.0;
  for (std::int64_t m = 0; m < shift; ++m) {
    const Complex term = real_pow_neg(std::log(static_cast<double>(m) + a), s);
    head += term;
    magnitude += std::abs(term);
  }
  const TailTerm tail = euler_maclaurin_tail<false>(s, static_cast<double>(shift) + a, PoleForm::singular);
  EvalPoint out{s, head + tail.value, 0.0};
  out.error_bound = tail.error + 4.0 * std::numeric_limits<double>::epsilon() * (magnitude + std::abs(tail.value));
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()) ||
      tail.error > kTruncationTarget * std::max(1.0, std::abs(out.value))) {
    throw ConvergenceError("hurwitz_zeta: Euler-Maclaurin series did not reach 1e-12", tail.error);
  }
  return out;
}

Complex hurwitz_zeta(Complex s, double a) { return hurwitz_zeta_eval(s, a).value; }

EvalPoint l_value_eval(const Character& chi, Complex s) {
  double error = 0.0;
  const auto v = l_series<false>(chi, s, &error);
  return {s, v.value, error};
}

Complex l_value(const Character& chi, Complex s) { return l_series<false>(chi, s, nullptr).value; }

LValueWithDerivative l_value_with_derivative(const Character& chi, Complex s) {
  return l_series<true>(chi, s, nullptr);
}

Complex log_gamma(Complex z) {
  if (z.real() <= 0.0) throw DomainError("log_gamma: requires Re z > 0");
  Complex shift_sum = 0.0;
  while (std::abs(z) < 15.0) {
    shift_sum += std::log(z);
    z += 1.0;
  }
  // Stirling series with B_{2j} / (2j (2j-1) z^{2j-1}), j = 1..10.
  static constexpr std::array<double, 10> kStirling = {
      1.0 / 12.0,          -1.0 / 360.0,        1.0 / 1260.0,          -1.0 / 1680.0,
      1.0 / 1188.0,        -691.0 / 360360.0,   1.0 / 156.0,           -3617.0 / 122400.0,
      43867.0 / 244188.0,  -174611.0 / 125400.0};
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series = 0.0;
  Complex power = inv;
  for (const double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift_sum;
}

double critical_line_phase(const Character& chi, double t) {
  const double k = static_cast<double>(chi.conductor());
  const Complex arg(0.25 + 0.5 * chi.parity_bit(), 0.5 * t);
  return 0.5 * t * std::log(k / std::numbers::pi) + log_gamma(arg).imag();
}

namespace {

double rotate_to_real(const Character& chi, double t, Complex l) {
  const double theta = critical_line_phase(chi, t);
  const Complex z = std::polar(1.0, theta) * l;
  // Half of double precision: beyond this the rotation no longer yields a real value.
  if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(l))) {
    throw ComputationError("completed_real: phase lost precision at t=" + std::to_string(t) +
                           " (imaginary residue " + std::to_string(z.imag()) + ")");
  }
  return z.real();
}

}  // namespace

double completed_real(const Character& chi, double t) {
  return rotate_to_real(chi, t, l_value(chi, Complex(0.5, t)));
}

CriticalLineEvaluator::CriticalLineEvaluator(const Character& chi, double max_height)
    : chi_(chi.primitive()), max_height_(max_height) {
  const std::int64_t k = chi_.conductor();
  const std::int64_t head_end = shift_for(max_height) * k;
  for (std::int64_t n = 1; n <= head_end; ++n) {
    const int c = chi_(n);
    if (c == 0) continue;
    log_n_.push_back(std::log(static_cast<double>(n)));
    amplitude_.push_back(static_cast<double>(c) / std::sqrt(static_cast<double>(n)));
  }
  for (std::int64_t r = 1; r <= k; ++r) {
    if (chi_(r) != 0) {
      residues_.push_back(static_cast<int>(r));
      residue_signs_.push_back(chi_(r));
    }
  }
}

double CriticalLineEvaluator::operator()(double t) const {
  if (std::abs(t) > max_height_) {
    throw DomainError("CriticalLineEvaluator: t beyond precomputed height");
  }
  const std::int64_t k = chi_.conductor();
  const std::int64_t shift = shift_for(t);
  const std::size_t terms = static_cast<std::size_t>(shift) * residues_.size();

  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < terms; ++i) {
    const double phase = t * log_n_[i];
    re += amplitude_[i] * std::cos(phase);
    im -= amplitude_[i] * std::sin(phase);
  }

  const Complex s(0.5, t);
  Complex tail = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < residues_.size(); ++i) {
    const double b = static_cast<double>(shift) + static_cast<double>(residues_[i]) / static_cast<double>(k);
    const TailTerm term = euler_maclaurin_tail<false>(s, b, PoleForm::regularised);
    tail += static_cast<double>(residue_signs_[i]) * term.value;
    error += term.error;
  }
  const Complex k_neg_s = real_pow_neg(std::log(static_cast<double>(k)), s);
  if (error * std::abs(k_neg_s) > kTruncationTarget) {
    throw ConvergenceError("CriticalLineEvaluator: truncation error too large", error);
  }
  return rotate_to_real(chi_, t, Complex(re, im) + k_neg_s * tail);
}

double zero_count_estimate(std::int64_t conductor, double height) {
  if (conductor <= 0) throw DomainError("zero_count_estimate: conductor must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  return height / two_pi * std::log(static_cast<double>(conductor) * height / (two_pi * std::numbers::e));
}

double zero_count_smooth(const Character& chi, double height) {
  return critical_line_phase(chi, height) / std::numbers::pi;
}

}  // namespace primerace
