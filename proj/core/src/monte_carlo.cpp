#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "primerace/counter_rng.hpp"
#include "primerace/densities.hpp"
#include "primerace/errors.hpp"

namespace primerace {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr std::uint64_t kGaussianCounter = std::uint64_t{1} << 40;

// cos(2 pi k / 65536). With a 16-bit angle every trigonometric moment of
// order below 65536 vanishes exactly, as for a continuous uniform angle.
const std::array<double, 65536>& cos_table() {
  static const auto table = [] {
    std::array<double, 65536> t{};
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / 65536.0);
    return t;
  }();
  return table;
}

struct CharacterSource {
  std::int64_t discriminant;
  std::vector<double> weights;  // 2 / sqrt(1/4 + gamma^2)
  double tail_sd;               // per unit coefficient
  std::uint64_t key;
};

struct ModelPlan {
  double offset;
  std::vector<std::pair<std::size_t, double>> terms;  // (source index, coefficient)
};

class Engine {
 public:
  Engine(std::span<const RaceModel> models, std::uint64_t seed) {
    const std::uint64_t root = CounterRng::derive(seed, 0x7261636573ULL);
    for (const auto& model : models) {
      ModelPlan plan{model.offset, {}};
      for (const auto& term : model.terms) {
        const std::int64_t d = term.character.discriminant();
        const double unit_tail = term.coefficient == 0.0 ? 0.0 : term.tail_sd / std::abs(term.coefficient);
        auto it = std::find_if(sources_.begin(), sources_.end(), [d](const auto& s) { return s.discriminant == d; });
        if (it == sources_.end()) {
          CharacterSource src{d, {}, unit_tail, CounterRng::derive(root, static_cast<std::uint64_t>(d))};
          src.weights.reserve(term.zeros.zeros.size());
          for (const double g : term.zeros.zeros) src.weights.push_back(2.0 / std::sqrt(0.25 + g * g));
          sources_.push_back(std::move(src));
          it = sources_.end() - 1;
        } else if (it->weights.size() != term.zeros.zeros.size() || it->tail_sd != unit_tail) {
          throw DomainError("Monte Carlo: models disagree on the zero data for " + term.character.label());
        }
        plan.terms.emplace_back(static_cast<std::size_t>(it - sources_.begin()), term.coefficient);
      }
      plans_.push_back(std::move(plan));
    }
  }

  std::size_t source_count() const noexcept { return sources_.size(); }
  const ModelPlan& plan(std::size_t m) const { return plans_[m]; }
  std::size_t model_count() const noexcept { return plans_.size(); }

  /// Draws of X(chi) for samples [first, first + out.size()).
  void draw(std::size_t source, std::uint64_t first, std::span<double> out) const {
    const auto& table = cos_table();
    const CharacterSource& src = sources_[source];
    const std::size_t nz = src.weights.size();
    const double* w = src.weights.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::uint64_t key = CounterRng::at(src.key, first + i);
      double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
      std::size_t j = 0;
      std::uint64_t group = 0;
      for (; j + 4 <= nz; j += 4, ++group) {
        const std::uint64_t bits = CounterRng::at(key, group);
        acc0 += w[j] * table[bits & 0xffff];
        acc1 += w[j + 1] * table[(bits >> 16) & 0xffff];
        acc2 += w[j + 2] * table[(bits >> 32) & 0xffff];
        acc3 += w[j + 3] * table[bits >> 48];
      }
      if (j < nz) {
        std::uint64_t bits = CounterRng::at(key, group);
        for (; j < nz; ++j, bits >>= 16) acc0 += w[j] * table[bits & 0xffff];
      }
      double x = (acc0 + acc1) + (acc2 + acc3);
      if (src.tail_sd > 0.0) {
        const double u1 = 1.0 - CounterRng::to_unit(CounterRng::at(key, kGaussianCounter));
        const double u2 = CounterRng::to_unit(CounterRng::at(key, kGaussianCounter + 1));
        x += src.tail_sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      }
      out[i] = x;
    }
  }

  /// Noise part (sum of coefficient * X(chi)) of every model for one block.
  void block_noise(std::uint64_t first, std::size_t count, std::vector<std::vector<double>>& draws,
                   std::vector<std::vector<double>>& noise) const {
    draws.resize(sources_.size());
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      draws[s].resize(count);
      draw(s, first, draws[s]);
    }
    noise.resize(plans_.size());
    for (std::size_t m = 0; m < plans_.size(); ++m) {
      noise[m].assign(count, 0.0);
      for (const auto& [s, c] : plans_[m].terms) {
        for (std::size_t i = 0; i < count; ++i) noise[m][i] += c * draws[s][i];
      }
    }
  }

 private:
  std::vector<CharacterSource> sources_;
  std::vector<ModelPlan> plans_;
};

// Runs fn(block, first, count) over all blocks; results land in per-block
// slots so reductions can proceed in block order.
template <typename Fn>
void for_each_block(std::uint64_t samples, unsigned workers, Fn&& fn) {
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::atomic<std::uint64_t> next{0};
  const auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t first = b * kBlock;
      fn(b, first, static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, samples - first)));
    }
  };
  const unsigned n = std::max(1u, workers);
  if (n == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
}

void require_samples(const MonteCarloOptions& options) {
  if (options.samples == 0) throw DomainError("Monte Carlo: sample count must be at least 1");
}

}  // namespace

std::vector<double> sample_values(const RaceModel& model, std::uint64_t first, std::size_t count,
                                  std::uint64_t seed) {
  const Engine engine(std::span<const RaceModel>(&model, 1), seed);
  std::vector<std::vector<double>> draws;
  std::vector<std::vector<double>> noise;
  engine.block_noise(first, count, draws, noise);
  for (double& v : noise[0]) v += model.offset;
  return std::move(noise[0]);
}

SampleStats sample(const RaceModel& model, const MonteCarloOptions& options) {
  require_samples(options);
  const Engine engine(std::span<const RaceModel>(&model, 1), options.seed);
  struct Partial {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = 0.0;
    double max = 0.0;
  };
  std::vector<Partial> partials((options.samples + kBlock - 1) / kBlock);
  for_each_block(options.samples, options.workers, [&](std::uint64_t b, std::uint64_t first, std::size_t count) {
    std::vector<std::vector<double>> draws;
    std::vector<std::vector<double>> noise;
    engine.block_noise(first, count, draws, noise);
    Partial p;
    p.min = p.max = model.offset + noise[0][0];
    for (const double z : noise[0]) {
      const double v = model.offset + z;
      ++p.n;
      const double delta = v - p.mean;
      p.mean += delta / static_cast<double>(p.n);
      p.m2 += delta * (v - p.mean);
      p.min = std::min(p.min, v);
      p.max = std::max(p.max, v);
    }
    partials[b] = p;
  });
  // Chan's pairwise update, applied in block order.
  Partial acc = partials.front();
  for (std::size_t b = 1; b < partials.size(); ++b) {
    const Partial& p = partials[b];
    const double n = static_cast<double>(acc.n + p.n);
    const double delta = p.mean - acc.mean;
    acc.m2 += p.m2 + delta * delta * static_cast<double>(acc.n) * static_cast<double>(p.n) / n;
    acc.mean += delta * static_cast<double>(p.n) / n;
    acc.n += p.n;
    acc.min = std::min(acc.min, p.min);
    acc.max = std::max(acc.max, p.max);
  }
  SampleStats stats;
  stats.n = acc.n;
  stats.mean = acc.mean;
  stats.variance = acc.n > 1 ? acc.m2 / static_cast<double>(acc.n - 1) : 0.0;
  stats.min = acc.min;
  stats.max = acc.max;
  return stats;
}

std::vector<DensityEstimate> mc_batch(std::span<const RaceModel> models, std::span<const DensityEvent> events,
                                      const MonteCarloOptions& options) {
  require_samples(options);
  for (const auto& event : events) {
    if (event.models.empty()) throw DomainError("Monte Carlo: event without models");
    for (std::size_t i = 0; i < event.models.size(); ++i) {
      if (event.models[i] >= models.size()) throw DomainError("Monte Carlo: event refers to an unknown model");
      for (std::size_t j = 0; j < i; ++j) {
        for (const auto& ti : models[event.models[i]].terms) {
          for (const auto& tj : models[event.models[j]].terms) {
            if (ti.character == tj.character) {
              throw DomainError("Monte Carlo: " + ti.character.label() +
                                " appears in two models of one ordering; the variables would not be independent");
            }
          }
        }
      }
    }
  }

  const Engine engine(models, options.seed);
  struct Counts {
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> ties;
  };
  std::vector<Counts> per_block((options.samples + kBlock - 1) / kBlock);
  for_each_block(options.samples, options.workers, [&](std::uint64_t b, std::uint64_t first, std::size_t count) {
    std::vector<std::vector<double>> draws;
    std::vector<std::vector<double>> noise;
    engine.block_noise(first, count, draws, noise);
    Counts c{std::vector<std::uint64_t>(events.size(), 0), std::vector<std::uint64_t>(events.size(), 0)};
    std::vector<double> values;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const auto& ev = events[e];
      const double sign = ev.negate ? -1.0 : 1.0;
      values.resize(ev.models.size());
      for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k < ev.models.size(); ++k) {
          const std::size_t m = ev.models[k];
          values[k] = engine.plan(m).offset + sign * noise[m][i];
        }
        if (values.size() == 1) {
          c.hits[e] += values[0] > 0.0;
          c.ties[e] += values[0] == 0.0;
          continue;
        }
        bool chain = true;
        bool tie = false;
        for (std::size_t k = 0; k + 1 < values.size(); ++k) chain = chain && values[k] > values[k + 1];
        for (std::size_t k = 0; k < values.size() && !tie; ++k) {
          for (std::size_t l = k + 1; l < values.size(); ++l) tie = tie || values[k] == values[l];
        }
        c.hits[e] += chain;
        c.ties[e] += tie;
      }
    }
    per_block[b] = std::move(c);
  });

  std::vector<DensityEstimate> out(events.size());
  const double n = static_cast<double>(options.samples);
  double height = 0.0;
  for (const auto& m : models) height = std::max(height, m.height);
  for (std::size_t e = 0; e < events.size(); ++e) {
    std::uint64_t hits = 0;
    std::uint64_t ties = 0;
    for (const auto& c : per_block) {
      hits += c.hits[e];
      ties += c.ties[e];
    }
    DensityEstimate& est = out[e];
    est.value = static_cast<double>(hits) / n;
    est.standard_error = std::sqrt(est.value * (1.0 - est.value) / n);
    est.method = DensityMethod::monte_carlo;
    est.budget = options.samples;
    est.seed = options.seed;
    est.height = height;
    est.ties = static_cast<double>(ties) / n;
  }
  return out;
}

DensityEstimate mc_two_way(const RaceModel& model, const MonteCarloOptions& options) {
  if (model.kind != ModelKind::two_way) throw DomainError("mc_two_way: expected a two-way model");
  const DensityEvent event{{0}, false};
  return mc_batch(std::span<const RaceModel>(&model, 1), std::span<const DensityEvent>(&event, 1), options).front();
}

DensityEstimate mc_three_way(std::span<const RaceModel> ordered, const MonteCarloOptions& options, bool negate) {
  if (ordered.size() != 3) throw DomainError("mc_three_way: expected three models");
  for (const auto& m : ordered) {
    if (m.kind != ModelKind::tilde) throw DomainError("mc_three_way: expected recentred (tilde) models");
  }
  const DensityEvent event{{0, 1, 2}, negate};
  return mc_batch(ordered, std::span<const DensityEvent>(&event, 1), options).front();
}

}  // namespace primerace
