#include "primerace/zeros.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/tools/toms748_solve.hpp>

#include "primerace/errors.hpp"
#include "primerace/lfunc.hpp"

namespace primerace {

ZeroList ZeroList::truncated(double new_height) const {
  if (new_height > height) {
    throw DomainError("ZeroList::truncated: " + label() + " is only complete up to T=" + std::to_string(height));
  }
  ZeroList out = *this;
  out.height = new_height;
  out.zeros.resize(count_up_to(new_height));
  return out;
}

std::size_t ZeroList::count_up_to(double t) const {
  return static_cast<std::size_t>(std::upper_bound(zeros.begin(), zeros.end(), t) - zeros.begin());
}

namespace {

struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

void collect_brackets(const CriticalLineEvaluator& z, const std::vector<double>& ts, const std::vector<double>& fs,
                      std::size_t first_center, std::size_t last_center, std::vector<Bracket>& out) {
  for (std::size_t i = first_center; i < last_center; ++i) {
    if (i + 1 < ts.size() && ((fs[i] < 0.0) != (fs[i + 1] < 0.0))) {
      out.push_back({ts[i], ts[i + 1], fs[i], fs[i + 1]});
    }
    // A local minimum of |Z| without a sign change may hide a close pair.
    if (i >= 1 && i + 1 < ts.size() && (fs[i - 1] < 0.0) == (fs[i] < 0.0) &&
        (fs[i] < 0.0) == (fs[i + 1] < 0.0) && std::abs(fs[i]) < std::abs(fs[i - 1]) &&
        std::abs(fs[i]) < std::abs(fs[i + 1])) {
      constexpr int kSubdivisions = 40;
      const double lo = ts[i - 1];
      const double hi = ts[i + 1];
      const double h = (hi - lo) / kSubdivisions;
      double prev_t = lo;
      double prev_f = fs[i - 1];
      for (int j = 1; j <= kSubdivisions; ++j) {
        const double t = j == kSubdivisions ? hi : lo + h * j;
        const double f = j == kSubdivisions ? fs[i + 1] : z(t);
        if ((prev_f < 0.0) != (f < 0.0)) out.push_back({prev_t, t, prev_f, f});
        prev_t = t;
        prev_f = f;
      }
    }
  }
}

double refine(const CriticalLineEvaluator& z, const Bracket& b, double tolerance) {
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  std::uintmax_t max_iter = 200;
  const auto stop = [tolerance](double a, double c) { return std::abs(c - a) <= tolerance; };
  const auto [a, c] = boost::math::tools::toms748_solve([&z](double t) { return z(t); }, b.lo, b.hi, b.f_lo,
                                                        b.f_hi, stop, max_iter);
  if (std::abs(c - a) > tolerance) {
    throw ConvergenceError("find_zeros: root refinement did not converge", std::abs(c - a));
  }
  return 0.5 * (a + c);
}

std::vector<double> scan_zeros(const CriticalLineEvaluator& z, double t_begin, double t_end, double step,
                               const ZeroScanOptions& options) {
  const std::size_t n_points = static_cast<std::size_t>(std::ceil((t_end - t_begin) / step));
  const std::size_t chunk = std::max<std::size_t>(options.chunk_points, 8);
  const std::size_t n_chunks = (n_points + chunk - 1) / chunk;
  std::vector<std::vector<double>> per_chunk(n_chunks);

  const CriticalLineEvaluator* zp = &z;
  const auto shifted = [&](std::size_t begin, std::size_t end) {
    // Grid t_i = t_begin + i * step, capped at t_end.
    const std::size_t lo = begin == 0 ? 0 : begin - 1;
    const std::size_t hi = std::min(n_points, end + 1);
    std::vector<double> ts;
    std::vector<double> fs;
    for (std::size_t i = lo; i <= hi; ++i) {
      const double t = std::min(t_begin + static_cast<double>(i) * step, t_end);
      ts.push_back(t);
      fs.push_back((*zp)(t));
    }
    std::vector<Bracket> brackets;
    collect_brackets(*zp, ts, fs, begin - lo, end - lo, brackets);
    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (const auto& b : brackets) roots.push_back(refine(*zp, b, options.tolerance));
    return roots;
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t c = next++; c < n_chunks; c = next++) {
      try {
        per_chunk[c] = shifted(c * chunk, std::min(n_points, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::max(1u, options.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> zeros;
  for (auto& roots : per_chunk) zeros.insert(zeros.end(), roots.begin(), roots.end());
  std::sort(zeros.begin(), zeros.end());
  // Brackets from the close-pair pass can duplicate a neighbouring root.
  zeros.erase(std::unique(zeros.begin(), zeros.end(),
                          [&](double a, double b) { return std::abs(a - b) <= 4.0 * options.tolerance; }),
              zeros.end());
  return zeros;
}

}  // namespace

ZeroList find_zeros(const Character& chi_in, double height, const ZeroScanOptions& options) {
  const Character chi = chi_in.primitive();
  if (!(height > 0.0) || height > 1e4) {
    throw DomainError("find_zeros: height must lie in (0, 1e4]");
  }
  if (!(options.step > 0.0) || !(options.tolerance > 0.0)) {
    throw DomainError("find_zeros: step and tolerance must be positive");
  }
  const CriticalLineEvaluator z(chi, height);
  std::vector<double> zeros = scan_zeros(z, 0.0, height, options.step, options);
  // t = 0 is never a zero of a real primitive L-function on the line under scan.
  zeros.erase(std::remove_if(zeros.begin(), zeros.end(), [&](double g) { return g <= 0.0 || g > height; }),
              zeros.end());

  // Local completeness: compare the running count with theta(t)/pi at block
  // boundaries and rescan failing blocks at a finer step.
  const double block = std::max(50.0, options.step * static_cast<double>(options.chunk_points));
  const auto count_below = [&](double t) {
    return static_cast<double>(std::upper_bound(zeros.begin(), zeros.end(), t) - zeros.begin());
  };
  double end = 0.0;
  while (end < height) {
    end = std::min(end + block, height);
    if (std::abs(count_below(end) - zero_count_smooth(chi, end)) <= options.count_slack) continue;

    const double begin = std::max(0.0, end - block);
    ZeroScanOptions finer = options;
    finer.step = options.step / 4.0;
    std::vector<double> rescanned = scan_zeros(z, begin, end, finer.step, finer);
    rescanned.erase(std::remove_if(rescanned.begin(), rescanned.end(),
                                   [&](double g) { return g <= begin || g > end; }),
                    rescanned.end());
    zeros.erase(std::upper_bound(zeros.begin(), zeros.end(), begin),
                std::upper_bound(zeros.begin(), zeros.end(), end));
    zeros.insert(std::upper_bound(zeros.begin(), zeros.end(), begin), rescanned.begin(), rescanned.end());

    if (std::abs(count_below(end) - zero_count_smooth(chi, end)) > options.count_slack) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "find_zeros: suspected missed zero for %s below t=%.3f (found %.0f, expected %.2f); "
                    "retry with a finer step",
                    chi.label().c_str(), end, count_below(end), zero_count_smooth(chi, end));
      throw MissedZeroError(buf);
    }
  }

  ZeroList list;
  list.discriminant = chi.discriminant();
  list.height = height;
  list.precision = options.tolerance;
  list.zeros = std::move(zeros);
  list.provenance = ZeroProvenance::computed;
  for (const double g : list.zeros) {
    if (std::abs(z(g)) >= kZeroVerificationTolerance) {
      throw VerificationError("find_zeros: refined zero " + std::to_string(g) + " fails verification");
    }
  }
  list.verified = true;
  return list;
}

void verify_zeros(ZeroList& list, double count_slack) {
  const Character chi = list.character();
  for (std::size_t i = 0; i < list.zeros.size(); ++i) {
    const double g = list.zeros[i];
    if (!(g > 0.0) || g > list.height) {
      throw VerificationError(list.label() + ": zero " + std::to_string(g) + " outside (0, T]");
    }
    if (i > 0 && !(g > list.zeros[i - 1])) {
      throw VerificationError(list.label() + ": zeros are not strictly increasing at index " +
                              std::to_string(i + 1));
    }
  }
  const CriticalLineEvaluator z(chi, list.height + 1.0);
  const double window = std::max(list.precision, 1e-9);
  for (std::size_t i = 0; i < list.zeros.size(); ++i) {
    const double g = list.zeros[i];
    if (std::abs(z(g)) < kZeroVerificationTolerance) continue;
    if ((z(g - window) < 0.0) != (z(g + window) < 0.0)) continue;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s: zero #%zu at %.12f fails verification (|Z| = %.3g)", list.label().c_str(),
                  i + 1, g, std::abs(z(g)));
    throw VerificationError(buf);
  }
  const double expected = zero_count_smooth(chi, list.height);
  if (std::abs(static_cast<double>(list.zeros.size()) - expected) > count_slack) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s: %zu zeros up to T=%.3f but the counting function gives %.2f",
                  list.label().c_str(), list.zeros.size(), list.height, expected);
    throw VerificationError(buf);
  }
  list.verified = true;
}

void write_zeros(const ZeroList& list, std::ostream& out) {
  char buf[64];
  out << "# D=" << list.discriminant << '\n';
  std::snprintf(buf, sizeof buf, "%.10g", list.height);
  out << "# T=" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.3g", list.precision);
  out << "# precision=" << buf << '\n';
  out << "# provenance=" << (list.provenance == ZeroProvenance::computed ? "computed" : "imported") << '\n';
  for (std::size_t i = 0; i < list.zeros.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.12f", i + 1, list.zeros[i]);
    out << buf << '\n';
  }
}

void export_zeros(const ZeroList& list, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("export_zeros: cannot open " + path.string());
  write_zeros(list, out);
  if (!out) throw FormatError("export_zeros: write failed for " + path.string());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  text = trim(text);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

ZeroList read_zeros(std::istream& in, const std::string& source_name) {
  ZeroList list;
  list.provenance = ZeroProvenance::imported;
  list.source = source_name;
  bool have_d = false;
  bool have_t = false;
  bool have_precision = false;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& why) {
    throw FormatError(source_name + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string_view body = trim(text.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = trim(body.substr(0, eq));
      const std::string_view value = body.substr(eq + 1);
      if (key == "D") {
        if (!parse_number(value, list.discriminant)) fail("bad D header");
        have_d = true;
      } else if (key == "T") {
        if (!parse_number(value, list.height)) fail("bad T header");
        have_t = true;
      } else if (key == "precision") {
        if (!parse_number(value, list.precision)) fail("bad precision header");
        have_precision = true;
      } else if (key == "provenance") {
        // Only a list this library computed keeps that label across a round trip.
        const std::string_view v = trim(value);
        if (v == "computed") {
          list.provenance = ZeroProvenance::computed;
        } else if (v != "imported") {
          fail("provenance must be computed or imported");
        }
      }
      continue;
    }
    if (!(have_d && have_t && have_precision)) fail("data before the D, T and precision headers");
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) fail("expected 'index,gamma'");
    std::size_t index = 0;
    double gamma = 0.0;
    if (!parse_number(text.substr(0, comma), index)) fail("bad index");
    if (!parse_number(text.substr(comma + 1), gamma)) fail("bad gamma");
    if (index != list.zeros.size() + 1) fail("indices must be consecutive from 1");
    if (!list.zeros.empty() && !(gamma > list.zeros.back())) fail("zeros are not strictly increasing");
    list.zeros.push_back(gamma);
  }
  if (!(have_d && have_t && have_precision)) {
    throw FormatError(source_name + ": missing one of the D, T, precision headers");
  }
  if (!is_fundamental_discriminant(list.discriminant)) {
    throw FormatError(source_name + ": D=" + std::to_string(list.discriminant) + " is not a fundamental discriminant");
  }
  if (!list.zeros.empty() && (list.zeros.front() <= 0.0 || list.zeros.back() > list.height)) {
    throw FormatError(source_name + ": zeros must lie in (0, T]");
  }
  return list;
}

ZeroList import_zeros(const std::filesystem::path& path, bool trust) {
  std::ifstream in(path);
  if (!in) throw FormatError("import_zeros: cannot open " + path.string());
  ZeroList list = read_zeros(in, path.string());
  if (trust) {
    list.verified = true;
  } else {
    verify_zeros(list);
  }
  return list;
}

std::filesystem::path zero_file_name(std::int64_t discriminant) {
  return "chi_" + std::to_string(discriminant) + ".zeros";
}

void ZeroCatalog::add(ZeroList list) {
  const auto d = list.discriminant;
  lists_.insert_or_assign(d, std::move(list));
}

const ZeroList& ZeroCatalog::at(std::int64_t discriminant) const {
  const auto it = lists_.find(discriminant);
  if (it == lists_.end()) {
    throw DomainError("no zero list loaded for chi_" + std::to_string(discriminant));
  }
  return it->second;
}

ZeroCatalog ZeroCatalog::load(const std::filesystem::path& dir, const std::vector<std::int64_t>& discriminants,
                              bool trust) {
  ZeroCatalog catalog;
  for (const auto d : discriminants) {
    const auto path = dir / zero_file_name(d);
    if (!std::filesystem::exists(path)) {
      throw DomainError("missing zero data for chi_" + std::to_string(d) + " (expected " + path.string() +
                        "); compute it with: racelab zeros compute --chi " + std::to_string(d) +
                        " --height 2000 --out " + path.string());
    }
    catalog.add(import_zeros(path, trust));
  }
  return catalog;
}

}  // namespace primerace
