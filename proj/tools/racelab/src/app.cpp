#include "racelab/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "primerace/chars.hpp"
#include "primerace/densities.hpp"
#include "primerace/errors.hpp"
#include "primerace/lfunc.hpp"
#include "primerace/race.hpp"
#include "primerace/variance.hpp"
#include "session.hpp"

namespace racelab {

using namespace primerace;

namespace {

constexpr std::uint64_t kDeskLimit = 10'000'000'000ULL;

std::uint64_t check_limit(std::uint64_t limit, bool extreme) {
  if (limit < 2) throw ConfigError("limit must be at least 2");
  if (limit > kDeskLimit && !extreme) {
    throw ConfigError("limit " + std::to_string(limit) + " exceeds 1e10; pass --extreme to run it anyway");
  }
  return limit;
}

std::int64_t parse_discriminant(const std::string& text) {
  try {
    return character_from_label(text).discriminant();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void require_modulus(std::int64_t q) {
  if (q < 3 || !has_exponent_two(q)) {
    throw ConfigError("modulus " + std::to_string(q) + " is not supported: every reduced residue must square to 1");
  }
}

// ---- chars ----------------------------------------------------------------

void cmd_chars(const Session& s, std::int64_t q) {
  require_modulus(q);
  Meta meta{"chars", {}, std::nullopt, {}, {}};
  meta.param("q", q);
  if (is_experimental_modulus(q)) meta.notes.push_back("experimental modulus");
  const auto residues = reduced_residues(q);
  Table t;
  t.columns = {"character", "conductor", "parity"};
  for (const auto a : residues) t.columns.push_back("chi(" + std::to_string(a) + ")");
  for (const auto& chi : nonprincipal_characters(q)) {
    std::vector<Cell> row{chi.label(), chi.conductor(), std::string(chi.is_even() ? "even" : "odd")};
    for (const auto a : residues) row.emplace_back(static_cast<std::int64_t>(chi(a)));
    t.add(std::move(row));
  }
  std::vector<Cell> c_row{std::string("c(q,a)"), Cell(), Cell()};
  for (const auto a : residues) c_row.emplace_back(static_cast<std::int64_t>(c_of(q, a)));
  t.add(std::move(c_row));
  s.emit(meta, t);
}

// ---- zeros ----------------------------------------------------------------

Table zero_summary(const ZeroList& list, const std::string& path) {
  Table t;
  t.columns = {"character", "height", "count", "smooth_count", "first", "last", "provenance", "file"};
  const Character chi = list.character();
  t.add({list.label(), list.height, static_cast<std::uint64_t>(list.zeros.size()),
         zero_count_smooth(chi, list.height), list.zeros.empty() ? 0.0 : list.zeros.front(),
         list.zeros.empty() ? 0.0 : list.zeros.back(),
         std::string(list.provenance == ZeroProvenance::computed ? "computed" : "imported"), path});
  return t;
}

void cmd_zeros_compute(const Session& s, const std::string& chi_text, double step, const std::string& out_path) {
  const std::int64_t d = parse_discriminant(chi_text);
  const double T = s.config.height;
  ZeroScanOptions opt;
  opt.step = step;
  opt.workers = s.config.workers;
  const ZeroList list = find_zeros(Character(d, std::abs(d)), T, opt);
  std::filesystem::path path = out_path.empty() ? s.config.zeros_dir / zero_file_name(d) : std::filesystem::path(out_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  export_zeros(list, path);
  Meta meta{"zeros compute", {}, std::nullopt, {describe_zeros(list)}, {}};
  meta.param("chi", list.label());
  meta.param("height", T);
  meta.param("step", step);
  s.emit(meta, zero_summary(list, path.string()));
}

void cmd_zeros_import(const Session& s, const std::string& file, bool trust) {
  ZeroList list = import_zeros(file, trust);
  const auto path = s.config.zeros_dir / zero_file_name(list.discriminant);
  std::filesystem::create_directories(s.config.zeros_dir);
  if (std::filesystem::weakly_canonical(path) != std::filesystem::weakly_canonical(file)) export_zeros(list, path);
  Meta meta{"zeros import", {}, std::nullopt, {describe_zeros(list)}, {}};
  meta.param("file", file);
  meta.param("trust", std::string(trust ? "true" : "false"));
  s.emit(meta, zero_summary(list, path.string()));
}

void cmd_zeros_export(const Session& s, const std::string& chi_text, bool truncate, const std::string& out_path) {
  if (out_path.empty()) throw ConfigError("zeros export needs --out");
  const std::int64_t d = parse_discriminant(chi_text);
  const auto catalog = s.catalog({d});
  ZeroList list = catalog.at(d);
  if (truncate) list = list.truncated(s.config.height);
  export_zeros(list, out_path);
  Meta meta{"zeros export", {}, std::nullopt, {describe_zeros(list)}, {}};
  meta.param("chi", list.label());
  s.common_params(meta);
  s.emit(meta, zero_summary(list, out_path));
}

void cmd_zeros_verify(const Session& s, const std::string& chi_text, const std::string& file) {
  std::filesystem::path path;
  if (!file.empty()) {
    path = file;
  } else if (!chi_text.empty()) {
    path = s.config.zeros_dir / zero_file_name(parse_discriminant(chi_text));
  } else {
    throw ConfigError("zeros verify needs --chi or --file");
  }
  const ZeroList list = import_zeros(path, false);  // throws VerificationError on failure
  Meta meta{"zeros verify", {}, std::nullopt, {describe_zeros(list)}, {}};
  meta.param("file", path.string());
  Table t = zero_summary(list, path.string());
  t.columns.push_back("verified");
  t.rows.front().emplace_back(true);
  s.emit(meta, t);
}

// ---- variance -------------------------------------------------------------

const std::vector<std::int64_t> kTable2Characters{-3, -4, 8, -8, 12};

void cmd_variance(const Session& s, std::optional<std::int64_t> q, bool races) {
  std::vector<std::int64_t> ds;
  if (q) {
    require_modulus(*q);
    for (const auto& chi : nonprincipal_characters(*q)) ds.push_back(chi.discriminant());
  } else {
    if (races) throw ConfigError("variance --races needs --q");
    ds = kTable2Characters;
  }
  const auto catalog = s.catalog(ds);
  Meta meta{"variance", {}, std::nullopt, {}, {}};
  s.common_params(meta);
  if (q) meta.param("q", *q);
  std::vector<VarianceReport> reports;
  for (const auto d : ds) {
    meta.zeros.push_back(describe_zeros(catalog.at(d)));
    reports.push_back(variance_report(catalog.at(d)));
  }
  Table t;
  if (races) {
    const RaceVariances rv = race_variances(*q, reports);
    const PredictedOrderings po = predicted_orderings(rv);
    meta.param("races", std::string("true"));
    meta.notes.push_back("W=" + format_real(rv.w));
    meta.notes.push_back("predicted two-way order=" + join_residues(po.two_way_descending, ">"));
    meta.notes.push_back("predicted middle residue=" + std::to_string(po.middle));
    t.columns = {"residue", "selector", "two_way_variance", "tilde_variance"};
    for (const auto& [a, var] : rv.two_way) {
      t.add({a, "chi_" + std::to_string(rv.selector.at(a)), var, rv.tilde.at(a)});
    }
  } else {
    t.columns = {"character", "height", "zeros", "v_from_zeros", "tail_correction", "v_from_logderiv",
                 "discrepancy", "accepted"};
    for (const auto& r : reports) {
      t.add({r.label, r.height, static_cast<std::uint64_t>(r.zero_count), r.v_from_zeros, r.tail_correction,
             r.v_from_logderiv, r.discrepancy, r.accepted()});
    }
  }
  s.emit(meta, t);
}

// ---- race -----------------------------------------------------------------

void cmd_race_counts(const Session& s, std::int64_t q, std::uint64_t limit, const std::string& rule_text) {
  require_modulus(q);
  const CheckpointRule rule = CheckpointRule::parse(rule_text);
  const RaceSnapshotTable table = race_counts(q, limit, rule, s.sieve());
  Meta meta{"race counts", {}, std::nullopt, {}, {}};
  meta.param("q", q);
  meta.param("limit", limit);
  meta.param("checkpoints", rule.describe());
  Table t;
  t.columns = {"x", "residue", "pi", "theta", "psi", "error_term"};
  for (const auto x : table.checkpoints()) {
    for (const auto a : table.residues()) {
      t.add({x, a, table.pi(x, a), table.theta(x, a), table.psi(x, a), error_term(x, q, a, table)});
    }
  }
  s.emit(meta, t);
}

void cmd_race_crossing(const Session& s, std::int64_t q, std::int64_t a, std::int64_t b, std::uint64_t limit) {
  require_modulus(q);
  const CrossingRecord rec = crossings(q, a, b, limit, s.sieve());
  Meta meta{"race crossing", {}, std::nullopt, {}, {}};
  meta.param("q", q);
  meta.param("a", a);
  meta.param("b", b);
  meta.param("limit", limit);
  Table t;
  t.columns = {"x", "direction", "leader"};
  for (const auto& e : rec.events) t.add({e.x, static_cast<std::int64_t>(e.direction), e.direction > 0 ? rec.a : rec.b});
  s.emit(meta, t);
}

void cmd_race_density(const Session& s, std::int64_t q, const std::string& order, std::uint64_t limit, double k) {
  require_modulus(q);
  const auto residues = parse_residues(order);
  const LogDensity d = log_density(q, residues, limit, k, s.sieve());
  Meta meta{"race density", {}, std::nullopt, {}, {}};
  meta.param("q", q);
  meta.param("order", join_residues(residues));
  meta.param("limit", limit);
  meta.param("k", k);
  Table t;
  t.columns = {"order", "limit", "k", "density", "ties", "tie_free"};
  t.add({join_residues(residues, ">"), limit, k, d.value, d.ties, d.tie_free()});
  s.emit(meta, t);
}

void cmd_race_gaps(const Session& s, std::int64_t q, const std::string& residues_text, std::uint64_t limit,
                   std::uint64_t max_ties) {
  require_modulus(q);
  const auto residues = parse_residues(residues_text);
  const GapTrace g = gap_trace(q, residues, limit, static_cast<std::size_t>(max_ties), s.sieve());
  Meta meta{"race gaps", {}, std::nullopt, {}, {}};
  meta.param("q", q);
  meta.param("residues", join_residues(residues));
  meta.param("limit", limit);
  meta.param("max_ties", max_ties);
  meta.notes.push_back("ties=" + std::to_string(g.tie_count));
  Table t;
  t.columns = {"kind", "x", "gap", "normalized"};
  for (const auto& r : g.raw_minima) t.add({std::string("raw_minimum"), r.x, r.gap, r.normalized});
  for (const auto& r : g.normalized_minima) t.add({std::string("normalized_minimum"), r.x, r.gap, r.normalized});
  for (const auto x : g.ties) t.add({std::string("tie"), x, std::uint64_t{0}, 0.0});
  s.emit(meta, t);
}

// ---- delta ----------------------------------------------------------------

std::vector<std::int64_t> model_characters(std::int64_t q) {
  std::vector<std::int64_t> ds;
  for (const auto& chi : nonprincipal_characters(q)) ds.push_back(chi.discriminant());
  return ds;
}

Table estimate_table(const std::vector<std::pair<std::string, DensityEstimate>>& rows) {
  Table t;
  t.columns = {"event", "value", "standard_error", "method", "budget", "seed", "height", "ties"};
  for (const auto& [name, e] : rows) {
    t.add({name, e.value, e.standard_error, to_string(e.method), e.budget,
           e.seed ? Cell(*e.seed) : Cell(), e.height, e.ties});
  }
  return t;
}

void add_model_meta(Meta& meta, const RaceModel& m) {
  for (const auto& term : m.terms) {
    if (std::none_of(meta.zeros.begin(), meta.zeros.end(),
                     [&](const ZeroSource& z) { return z.label == term.character.label(); })) {
      meta.zeros.push_back(describe_zeros(term.zeros));
    }
  }
  meta.notes.push_back("model " + std::to_string(m.residue) + ": " + m.describe());
}

void cmd_delta_two_way(const Session& s, std::int64_t q, std::int64_t a) {
  require_modulus(q);
  const std::uint64_t seed = s.require_seed("delta two-way");
  const auto catalog = s.catalog(model_characters(q));
  const RaceModel m = build_two_way(q, a, catalog, s.config.height);
  const DensityEstimate e = mc_two_way(m, {s.config.samples, seed, s.config.workers});
  Meta meta{"delta two-way", {}, seed, {}, {}};
  s.common_params(meta);
  meta.param("q", q);
  meta.param("a", a);
  meta.param("samples", s.config.samples);
  add_model_meta(meta, m);
  s.emit(meta, estimate_table({{"delta(" + std::to_string(q) + ";" + std::to_string(m.residue) + ",1)", e}}));
}

void cmd_delta_three_way(const Session& s, std::int64_t q, const std::string& order_text, bool negate) {
  require_modulus(q);
  const std::uint64_t seed = s.require_seed("delta three-way");
  const auto order = parse_residues(order_text);
  if (order.size() != 3) throw ConfigError("--order needs three residues");
  const auto catalog = s.catalog(model_characters(q));
  std::vector<RaceModel> models;
  for (const auto a : order) models.push_back(build_tilde(q, a, catalog, s.config.height));
  const DensityEstimate e = mc_three_way(models, {s.config.samples, seed, s.config.workers}, negate);
  Meta meta{"delta three-way", {}, seed, {}, {}};
  s.common_params(meta);
  meta.param("q", q);
  meta.param("order", join_residues(order));
  meta.param("samples", s.config.samples);
  meta.param("negate", std::string(negate ? "true" : "false"));
  for (const auto& m : models) add_model_meta(meta, m);
  s.emit(meta, estimate_table({{"delta(" + std::to_string(q) + ";" + join_residues(order) + ")", e}}));
}

void cmd_delta_cf(const Session& s, std::int64_t q, std::int64_t a, double tolerance) {
  require_modulus(q);
  const auto catalog = s.catalog(model_characters(q));
  const RaceModel m = build_two_way(q, a, catalog, s.config.height);
  CfOptions opt;
  opt.tolerance = tolerance;
  const DensityEstimate e = cf_two_way(m, opt);
  Meta meta{"delta cf", {}, std::nullopt, {}, {}};
  s.common_params(meta);
  meta.param("q", q);
  meta.param("a", a);
  meta.param("tolerance", tolerance);
  add_model_meta(meta, m);
  s.emit(meta, estimate_table({{"delta(" + std::to_string(q) + ";" + std::to_string(m.residue) + ",1)", e}}));
}

}  // namespace

// ---- session --------------------------------------------------------------

void Session::emit(const Meta& meta, const Table& table) const {
  if (!report_path) {
    write_report(out, config.format, meta, table);
    return;
  }
  std::ofstream file(*report_path);
  if (!file) throw ConfigError("cannot write " + report_path->string());
  write_report(file, config.format, meta, table);
}

void Session::common_params(Meta& meta) const {
  meta.param("zeros_dir", config.zeros_dir.string());
  meta.param("height", config.height);
  meta.param("workers", static_cast<std::uint64_t>(config.workers));
}

ZeroCatalog Session::catalog(const std::vector<std::int64_t>& discriminants) const {
  // Files in the zeros directory were verified when they were written.
  return ZeroCatalog::load(config.zeros_dir, discriminants, true);
}

std::uint64_t Session::require_seed(const char* command) const {
  if (!config.seed) throw ConfigError(std::string(command) + " needs an explicit --seed (or seed= in the config file)");
  return *config.seed;
}

SieveOptions Session::sieve() const {
  SieveOptions o;
  o.workers = config.workers;
  return o;
}

std::vector<std::int64_t> parse_residues(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("expected comma-separated residues, got '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty residue list");
  return out;
}

std::string join_residues(const std::vector<std::int64_t>& residues, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < residues.size(); ++i) s += (i ? sep : "") + std::to_string(residues[i]);
  return s;
}

// ---- entry point ----------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"racelab: prime number races, L-function zeros and limiting densities"};
  app.set_version_flag("--version", std::string("racelab ") + kToolVersion);
  app.require_subcommand(1);

  std::string config_file, zeros_dir, height, samples, seed, format, workers, report_out;
  app.add_option("--config", config_file, "key=value file (zeros_dir, height, samples, seed, format, workers)");
  app.add_option("--zeros-dir", zeros_dir, "directory holding chi_<D>.zeros files");
  app.add_option("--height", height, "truncation height T");
  app.add_option("--samples", samples, "Monte Carlo sample count (1e7 accepted)");
  app.add_option("--seed", seed, "random seed; required for Monte Carlo runs");
  app.add_option("--format", format, "csv or json");
  bool json = false;
  app.add_flag("--json", json, "same as --format json");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--report", report_out, "write the report to this file instead of stdout");

  // chars
  auto* chars = app.add_subcommand("chars", "character table for a modulus");
  std::int64_t q = 8;
  chars->add_option("--q", q, "modulus")->capture_default_str();

  // zeros
  auto* zeros = app.add_subcommand("zeros", "compute, import, export and verify zero lists");
  zeros->require_subcommand(1);
  std::string chi_text, file, zero_out;
  double step = 0.05;
  bool trust = false;
  auto* z_compute = zeros->add_subcommand("compute", "locate zeros on the critical line up to --height");
  z_compute->add_option("--chi", chi_text, "character label or discriminant, e.g. chi_-4 or -4")->required();
  z_compute->add_option("--step", step, "scan step")->capture_default_str();
  z_compute->add_option("--out", zero_out, "zero file (default: <zeros-dir>/chi_<D>.zeros)");
  auto* z_import = zeros->add_subcommand("import", "verify an external zero file and copy it into --zeros-dir");
  z_import->add_option("file,--file", file, "zero file")->required();
  z_import->add_flag("--trust", trust, "skip re-verification");
  auto* z_export = zeros->add_subcommand("export", "write a stored zero list, optionally truncated");
  z_export->add_option("--chi", chi_text, "character")->required();
  z_export->add_option("--out", zero_out, "destination file")->required();
  auto* z_verify = zeros->add_subcommand("verify", "re-verify a zero file");
  z_verify->add_option("--chi", chi_text, "character in --zeros-dir");
  z_verify->add_option("file,--file", file, "zero file");

  // variance
  auto* variance = app.add_subcommand("variance", "V(chi) from zeros and from L'/L(1)");
  std::optional<std::int64_t> variance_q;
  bool races = false;
  variance->add_option("--q", variance_q, "characters mod q (default: the five tabulated characters)");
  variance->add_flag("--races", races, "race variances and predicted orderings for --q");
  bool table2 = false;
  variance->add_flag("--table2", table2, "the five tabulated characters against the published values");

  // race
  auto* race = app.add_subcommand("race", "prime counts in residue classes");
  race->require_subcommand(1);
  std::string limit_text = "1e6", rule_text = "log:10", order_text, residues_text;
  std::int64_t a = 1, b = 3;
  double k = 0.0;
  std::uint64_t max_ties = 100000;
  bool extreme = false;
  race->add_flag("--extreme", extreme, "allow limits above 1e10");
  auto* r_counts = race->add_subcommand("counts", "pi, theta, psi and E(x;q,a) at checkpoints");
  r_counts->add_option("--q", q)->required();
  r_counts->add_option("--limit", limit_text)->capture_default_str();
  r_counts->add_option("--checkpoints", rule_text, "log:N, linear:N or list:a,b,...")->capture_default_str();
  auto* r_crossing = race->add_subcommand("crossing", "changes of strict leader between two classes");
  r_crossing->add_option("--q", q)->required();
  r_crossing->add_option("--a", a)->required();
  r_crossing->add_option("--b", b)->required();
  r_crossing->add_option("--limit", limit_text)->capture_default_str();
  auto* r_density = race->add_subcommand("density", "weighted logarithmic density of an ordering up to --limit");
  r_density->add_option("--q", q)->required();
  r_density->add_option("--order", order_text, "e.g. 3,1")->required();
  r_density->add_option("--limit", limit_text)->capture_default_str();
  r_density->add_option("--k", k, "weight exponent, (log t)^k dt/t")->capture_default_str();
  auto* r_gaps = race->add_subcommand("gaps", "running minima of the spread between classes");
  r_gaps->add_option("--q", q)->required();
  r_gaps->add_option("--residues", residues_text)->required();
  r_gaps->add_option("--limit", limit_text)->capture_default_str();
  r_gaps->add_option("--max-ties", max_ties)->capture_default_str();
  for (auto* sub : {r_counts, r_crossing, r_density, r_gaps}) sub->add_flag("--extreme", extreme);

  // delta
  auto* delta = app.add_subcommand("delta", "limiting densities from the random model");
  delta->require_subcommand(1);
  bool negate = false;
  double tolerance = 1e-9;
  auto* d_two = delta->add_subcommand("two-way", "Monte Carlo delta(q;a,1)");
  d_two->add_option("--q", q)->required();
  d_two->add_option("--a", a)->required();
  auto* d_three = delta->add_subcommand("three-way", "Monte Carlo delta(q;a1,a2,a3)");
  d_three->add_option("--q", q)->required();
  d_three->add_option("--order", order_text, "e.g. 5,7,11")->required();
  d_three->add_flag("--negate", negate, "flip the sign of every noise term");
  auto* d_cf = delta->add_subcommand("cf", "characteristic-function delta(q;a,1)");
  d_cf->add_option("--q", q)->required();
  d_cf->add_option("--a", a)->required();
  d_cf->add_option("--tolerance", tolerance)->capture_default_str();

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "compare computed values with the published tables");
  std::string target_text;
  repro->add_option("target", target_text, "table1 | table2 | two-way | three-way | crossings")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "two-way", "three-way", "crossings"}));
  repro->add_flag("--extreme", extreme, "also run the four-way race to 6e8");

  // Shared options may also follow the subcommand.
  for (auto* sub : {chars, zeros, z_compute, z_import, z_export, z_verify, variance, race, r_counts, r_crossing,
                    r_density, r_gaps, delta, d_two, d_three, d_cf, repro}) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "racelab: " << e.what() << '\n';
    return kConfigurationError;
  }

  try {
    Session s{RunConfig{}, out, err, std::nullopt};
    bool height_given = !height.empty();
    if (!config_file.empty()) {
      const auto values = read_config_file(config_file);
      height_given = height_given || values.count("height") != 0;
      apply_config(s.config, values);
    }
    if (!zeros_dir.empty()) s.config.zeros_dir = zeros_dir;
    if (!height.empty()) apply_config(s.config, {{"height", height}});
    if (!samples.empty()) s.config.samples = parse_count(samples);
    if (!seed.empty()) s.config.seed = parse_count(seed);
    if (!format.empty()) s.config.format = parse_format(format);
    if (json) s.config.format = OutputFormat::json;
    if (!workers.empty()) s.config.workers = static_cast<unsigned>(parse_count(workers));
    if (!report_out.empty()) s.report_path = report_out;
    s.config.validate();

    if (*chars) {
      cmd_chars(s, q);
    } else if (*z_compute) {
      cmd_zeros_compute(s, chi_text, step, zero_out);
    } else if (*z_import) {
      cmd_zeros_import(s, file, trust);
    } else if (*z_export) {
      cmd_zeros_export(s, chi_text, height_given, zero_out);
    } else if (*z_verify) {
      cmd_zeros_verify(s, chi_text, file);
    } else if (*variance) {
      if (table2) return reproduce(s, ReproduceTarget::table2, false);
      cmd_variance(s, variance_q, races);
    } else if (*r_counts) {
      cmd_race_counts(s, q, check_limit(parse_count(limit_text), extreme), rule_text);
    } else if (*r_crossing) {
      cmd_race_crossing(s, q, a, b, check_limit(parse_count(limit_text), extreme));
    } else if (*r_density) {
      cmd_race_density(s, q, order_text, check_limit(parse_count(limit_text), extreme), k);
    } else if (*r_gaps) {
      cmd_race_gaps(s, q, residues_text, check_limit(parse_count(limit_text), extreme), max_ties);
    } else if (*d_two) {
      cmd_delta_two_way(s, q, a);
    } else if (*d_three) {
      cmd_delta_three_way(s, q, order_text, negate);
    } else if (*d_cf) {
      cmd_delta_cf(s, q, a, tolerance);
    } else if (*repro) {
      const ReproduceTarget target = target_text == "table1"      ? ReproduceTarget::table1
                                     : target_text == "table2"    ? ReproduceTarget::table2
                                     : target_text == "two-way"   ? ReproduceTarget::two_way
                                     : target_text == "three-way" ? ReproduceTarget::three_way
                                                                  : ReproduceTarget::crossings;
      return reproduce(s, target, extreme);
    }
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "racelab: " << e.what() << '\n';
    return kConfigurationError;
  } catch (const DomainError& e) {
    err << "racelab: " << e.what() << '\n';
    return kConfigurationError;
  } catch (const FormatError& e) {
    err << "racelab: " << e.what() << '\n';
    return kConfigurationError;
  } catch (const ConvergenceError& e) {
    err << "racelab: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
    return kComputationFailure;
  } catch (const Error& e) {
    err << "racelab: " << e.what() << '\n';
    return kComputationFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "racelab: " << e.what() << '\n';
    return kConfigurationError;
  }
}

}  // namespace racelab
