#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "primerace/chars.hpp"

namespace primerace {

using Complex = std::complex<double>;

/// A function value with an a-posteriori error bound.
struct EvalPoint {
  Complex s;
  Complex value;
  double error_bound = 0.0;
};

/// Hurwitz zeta function zeta(s, a) for a in (0, 1], via Euler-Maclaurin.
/// Throws PoleError at s = 1 and ConvergenceError when the truncation error
/// exceeds 1e-12.
Complex hurwitz_zeta(Complex s, double a);
EvalPoint hurwitz_zeta_eval(Complex s, double a);

/// L(s, chi) for the primitive character underlying chi. The expansion has no
/// pole, so s = 1 is an ordinary point.
Complex l_value(const Character& chi, Complex s);
EvalPoint l_value_eval(const Character& chi, Complex s);

struct LValueWithDerivative {
  Complex value;
  Complex derivative;
};

/// L(s, chi) together with L'(s, chi), both from the analytic derivative of the
/// same Euler-Maclaurin expansion.
LValueWithDerivative l_value_with_derivative(const Character& chi, Complex s);

/// log Gamma(z) on the branch continuous in Re z > 0.
Complex log_gamma(Complex z);

/// Phase theta(t) with exp(i theta(t)) L(1/2 + it, chi) real:
/// theta(t) = (t/2) log(k/pi) + Im log Gamma((1/2 + a + it)/2), k the
/// conductor and a the parity bit.
double critical_line_phase(const Character& chi, double t);

/// Real-valued rotation of L(1/2 + it, chi) (a Hardy Z-function analogue).
/// Its sign changes exactly at critical-line zeros, and it is even in t.
double completed_real(const Character& chi, double t);

/// Precomputed evaluator for repeated calls of completed_real on [0, max_height].
class CriticalLineEvaluator {
 public:
  CriticalLineEvaluator(const Character& chi, double max_height);

  double operator()(double t) const;
  const Character& character() const noexcept { return chi_; }
  double max_height() const noexcept { return max_height_; }

 private:
  Character chi_;
  double max_height_;
  std::vector<double> log_n_;
  std::vector<double> amplitude_;  // chi(n) / sqrt(n)
  std::vector<int> residues_;      // r in [1, k] with chi(r) != 0
  std::vector<int> residue_signs_;
};

/// Smooth count of zeros 0 < gamma <= T, (T/2 pi) log(k T/(2 pi e)).
double zero_count_estimate(std::int64_t conductor, double height);

/// theta(T)/pi: the smooth part of the zero counting function including its
/// parity-dependent constant. N(T) - theta(T)/pi is the bounded oscillatory part.
double zero_count_smooth(const Character& chi, double height);

}  // namespace primerace
