#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primerace/chars.hpp"
#include "primerace/zeros.hpp"

namespace primerace {

enum class ModelKind { two_way, tilde };

/// coefficient * X(chi), with X(chi) = 2 sum_gamma cos(U_gamma) / sqrt(1/4 + gamma^2)
/// over the stored zeros plus a centred Gaussian standing in for the zeros above T.
struct ModelTerm {
  Character character;
  double coefficient = 0.0;
  ZeroList zeros;
  double tail_sd = 0.0;  // already multiplied by |coefficient|
};

struct RaceModel {
  std::int64_t q = 0;
  std::int64_t residue = 0;
  ModelKind kind = ModelKind::two_way;
  double offset = 0.0;
  double height = 0.0;
  std::vector<ModelTerm> terms;

  double mean() const noexcept { return offset; }
  /// Exact variance of the truncated model including the Gaussian tails.
  double variance() const;
  std::string describe() const;
};

/// X_{q;a,1} = (c(q,1) - c(q,a)) + sum_chi (1 - chi(a)) X(chi). Requires a nonsquare mod q.
/// Zero lists are cut at `height`.
RaceModel build_two_way(std::int64_t q, std::int64_t a, const ZeroCatalog& zeros, double height);

/// Recentred per-residue variable -(c(q,a) + c(q,1)) + 2 X(selector). Requires a
/// nonsquare a and exactly one character with chi(a) = 1.
RaceModel build_tilde(std::int64_t q, std::int64_t a, const ZeroCatalog& zeros, double height);

struct SampleStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double min = 0.0;
  double max = 0.0;
};

struct MonteCarloOptions {
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Draws of the model for sample indices [first, first + count).
std::vector<double> sample_values(const RaceModel& model, std::uint64_t first, std::size_t count,
                                  std::uint64_t seed);
SampleStats sample(const RaceModel& model, const MonteCarloOptions& options);

enum class DensityMethod { monte_carlo, characteristic_function };
std::string to_string(DensityMethod m);

struct DensityEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  DensityMethod method = DensityMethod::monte_carlo;
  std::uint64_t budget = 0;           // samples, or integrand evaluations
  std::optional<std::uint64_t> seed;  // Monte Carlo only
  double height = 0.0;
  double ties = 0.0;                  // fraction of samples on a tie
};

/// One event evaluated on shared draws: a single model (value > 0) or a chain
/// of models (strictly decreasing in the given order).
struct DensityEvent {
  std::vector<std::size_t> models;
  bool negate = false;  // use -X(chi) for every term
};

/// Estimates several events from one set of per-character draws; characters
/// shared between models see identical draws. Chains must use models with
/// pairwise distinct characters. Results are independent of the worker count.
std::vector<DensityEstimate> mc_batch(std::span<const RaceModel> models, std::span<const DensityEvent> events,
                                      const MonteCarloOptions& options);

DensityEstimate mc_two_way(const RaceModel& model, const MonteCarloOptions& options);

/// Pr(X~_{a1} > X~_{a2} > X~_{a3}); negate flips the sign of every noise term.
DensityEstimate mc_three_way(std::span<const RaceModel> ordered, const MonteCarloOptions& options,
                             bool negate = false);

struct CfOptions {
  double tolerance = 1e-9;    // absolute, quadrature plus truncation
  double max_length = 4096;   // hard cap on the integration range
};

/// 1/2 + (1/pi) int_0^inf sin(offset t)/t * prod J0(coef w t) * exp(-tail t^2/2) dt.
/// Throws ConvergenceError with the achieved bound when the tolerance is not met.
DensityEstimate cf_two_way(const RaceModel& model, const CfOptions& options = {});

struct SymmetryReport {
  double difference = 0.0;
  double combined_se = 0.0;
  bool within(double sigmas = 3.0) const noexcept { return difference <= sigmas * combined_se; }
};

SymmetryReport symmetry_check(const DensityEstimate& forward, const DensityEstimate& reversed);

}  // namespace primerace
