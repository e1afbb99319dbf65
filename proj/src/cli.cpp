#include "drh/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "binary_io.hpp"
#include "drh/akatsuka.hpp"
#include "drh/bias.hpp"
#include "drh/errors.hpp"
#include "drh/euler_lab.hpp"
#include "drh/primes.hpp"
#include "drh/satake.hpp"
#include "drh/tau.hpp"

namespace drh::cli {

using json = nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) text_ += ',';
      text_ += h;
      first = false;
    }
    text_ += '\n';
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((text_ += first ? "" : ",", text_ += field(fields), first = false), ...);
    text_ += '\n';
  }

  [[nodiscard]] const std::string& text() const { return text_; }

 private:
  static std::string field(double v) { return fmt(v); }
  static std::string field(std::uint64_t v) { return fmt(v); }
  static std::string field(const std::string& v) { return v; }
  std::string text_;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  io::write_file_atomically(path, text);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// Secondary JSON next to the primary output file.
void emit_summary(const RunConfig& c, const json& j, std::ostream& out) {
  if (!c.summary_path.empty()) {
    emit(c.summary_path, json_text(j), out);
  } else if (c.output_path != "-" && !c.output_path.empty()) {
    emit(c.output_path + ".summary.json", json_text(j), out);
  }
}

SieveOptions sieve_options(const RunConfig& c) {
  SieveOptions o;
  o.threads = c.threads;
  return o;
}

json lvalue_json(const LValue& l) {
  return {{"target", l.target}, {"value", l.value}, {"method", l.method},
          {"error_estimate", l.error_estimate}};
}

json validation_json(const TauValidation& v) {
  return {{"tau_one", v.tau_one},
          {"deligne", v.deligne},
          {"multiplicative", v.multiplicative},
          {"hecke_square", v.hecke_square},
          {"primes_checked", v.primes_checked},
          {"coprime_pairs_checked", v.coprime_pairs_checked},
          {"square_relations_checked", v.square_relations_checked},
          {"first_failure", v.first_failure},
          {"ok", v.ok()}};
}

std::uint64_t tau_size(const RunConfig& c) { return c.tau_n != 0 ? c.tau_n : c.x_max; }

std::shared_ptr<const TauTable> load_tau(const RunConfig& c, std::uint64_t n, std::ostream& err) {
  if (n > kTauCeiling) {
    throw CeilingError("tau_n = " + std::to_string(n) + " exceeds the exactness ceiling " +
                       std::to_string(kTauCeiling));
  }
  TauOptions opts;
  opts.threads = c.threads;
  if (c.cache_dir.empty()) return std::make_shared<const TauTable>(build_tau_table(n, opts));

  const std::filesystem::path path =
      std::filesystem::path(c.cache_dir) / ("tau_" + std::to_string(n) + ".tauc");
  if (std::filesystem::exists(path)) {
    try {
      auto table = read_tau_cache(path);
      if (table.size() == n) return std::make_shared<const TauTable>(std::move(table));
      err << "warning: " << path.string() << " has the wrong length; rebuilding\n";
    } catch (const ValidationError& e) {
      err << "warning: discarding unreadable cache " << path.string() << ": " << e.what() << '\n';
    }
  }
  auto table = build_tau_table(n, opts);
  std::filesystem::create_directories(c.cache_dir);
  write_tau_cache(path, table);
  return std::make_shared<const TauTable>(std::move(table));
}

UnitaryFamily make_family(const RunConfig& c, std::ostream& err) {
  if (c.family == "chi4") return character_family(4);
  if (c.family == "delta") {
    const auto n = tau_size(c);
    if (n < c.x_max) {
      throw TableTooSmall("tau_n = " + std::to_string(n) + " does not cover x_max = " +
                          std::to_string(c.x_max));
    }
    return delta_family(load_tau(c, n, err));
  }
  throw ConfigError("unknown family '" + c.family + "'");
}

void cmd_tau(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::uint64_t n = c.tau_n != 0 ? c.tau_n : 10000;
  if (n < 1) throw ConfigError("tau_n must be >= 1");
  const auto table = load_tau(c, n, err);
  const auto v = validate_tau_table(*table);
  json head = json::array();
  for (std::uint64_t i = 1; i <= std::min<std::uint64_t>(n, 10); ++i) {
    head.push_back(to_string((*table)[i]));
  }
  const json j = {{"N", n}, {"checksum", tau_checksum(*table)}, {"first_values", head},
                  {"validation", validation_json(v)}};
  emit(c.output_path, json_text(j), out);
  if (!v.ok()) throw ValidationError("tau table failed validation: " + v.first_failure);
}

void cmd_sieve(const RunConfig& c, std::ostream& out, std::ostream&) {
  const auto opts = sieve_options(c);
  std::vector<std::uint64_t> points;
  for (const double x : c.grid) points.push_back(static_cast<std::uint64_t>(x));
  const auto sums = prime_prefix_sums<4>(points, [](std::uint64_t p) {
    return std::array<double, 4>{1.0, p % 4 == 1 ? 1.0 : 0.0, p % 4 == 3 ? 1.0 : 0.0,
                                 1.0 / static_cast<double>(p)};
  }, opts);
  Csv csv({"x", "pi", "pi_4_1", "pi_4_3", "mertens_sum", "mertens_minus_loglog", "psi",
           "psi_diag"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = c.grid[i];
    const double psi = chebyshev_psi(points[i], std::nullopt, opts);
    csv.row(x, static_cast<std::uint64_t>(sums[i][0]), static_cast<std::uint64_t>(sums[i][1]),
            static_cast<std::uint64_t>(sums[i][2]), sums[i][3],
            sums[i][3] - std::log(std::log(x)), psi, (psi - x) / (std::sqrt(x) * std::log(x)));
  }
  emit(c.output_path, csv.text(), out);
}

StepSeries bias_series(const RunConfig& c, std::ostream& err) {
  if (c.family == "chi4") return char_bias_series(c.x_max, c.s, sieve_options(c));
  const auto family = make_family(c, err);
  return tau_bias_series(family, c.x_max, sieve_options(c));
}

json density_json(const DensityReport& r) {
  json crossings = json::array();
  for (const auto& cr : r.crossings) {
    crossings.push_back({{"x", cr.x}, {"zero_touch", cr.zero_touch}});
  }
  return {{"X", r.X},
          {"lower", r.lower},
          {"sign", r.sign},
          {"natural_density", r.natural_density},
          {"log_density", r.log_density},
          {"positive_measure", r.positive_measure},
          {"log_measure", r.log_measure},
          {"crossings", crossings}};
}

void cmd_bias(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto series = bias_series(c, err);
  Csv csv({"x", "value", "running_loglog_ratio"});
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double x = series.breakpoints[i];
    const double v = series.values[i];
    csv.row(x, v, x >= 16.0 ? fmt(v / (0.5 * std::log(std::log(x)))) : std::string());
  }
  emit(c.output_path, csv.text(), out);
  json j = density_json(densities(series, static_cast<double>(c.x_max), c.lower, c.sign));
  j["family"] = c.family;
  j["s"] = c.family == "chi4" ? json(c.s) : json(nullptr);
  emit_summary(c, j, out);
}

void cmd_densities(const RunConfig& c, std::ostream& out, std::ostream& err) {
  DensityReport r;
  if (c.family == "chi4") {
    r = char_bias_density(c.x_max, c.s, c.lower, c.sign, sieve_options(c));
  } else {
    r = densities(bias_series(c, err), static_cast<double>(c.x_max), c.lower, c.sign);
  }
  json j = density_json(r);
  j["family"] = c.family;
  j["s"] = c.family == "chi4" ? json(c.s) : json(nullptr);
  emit(c.output_path, json_text(j), out);
}

void cmd_euler(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto family = make_family(c, err);
  const auto lvalue = center_lvalue(family);
  const auto parts = decompose(family, c.grid, sieve_options(c));
  Csv csv({"x", "log_product", "I", "II", "III", "identity_gap", "truncation_bound",
           "log_drh_ratio", "drh_ratio"});
  double worst_gap = 0.0;
  for (const auto& d : parts) {
    const double lr = drh_log_ratio(family, d.log_product, lvalue);
    worst_gap = std::max(worst_gap, d.identity_gap());
    csv.row(d.x, d.log_product, d.I, d.II, d.III, d.identity_gap(), d.truncation_bound, lr,
            std::exp(lr));
  }
  emit(c.output_path, csv.text(), out);

  json j = {{"family", family.label()}, {"delta", family.delta()}, {"lvalue", lvalue_json(lvalue)},
            {"max_identity_gap", worst_gap}};
  std::string failure;
  if (c.validate) {
    if (family.kind() == UnitaryFamily::Kind::Character) {
      const auto second = lvalue_character_center_richardson(*family.character());
      const double gap = std::abs(second.value - lvalue.value);
      j["lvalue_second_method"] = lvalue_json(second);
      j["lvalue_method_gap"] = gap;
      if (gap > 1e-8) failure = "L-value methods disagree";
    } else {
      const auto half = lvalue_delta_center(*family.tau_table(),
                                            std::min<std::uint64_t>(1000, family.coverage()));
      j["lvalue_half_cutoff"] = lvalue_json(half);
      j["lvalue_method_gap"] = std::abs(half.value - lvalue.value);
      if (std::abs(half.value - lvalue.value) > 1e-10) failure = "L-value cutoff sensitivity";
    }
    if (worst_gap > 1e-9) failure = "decomposition identity gap above 1e-9";
  }
  emit_summary(c, j, out);
  if (!failure.empty()) throw ValidationError(failure);
}

double validate_normalizer_battery(json& report) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> log_x(std::log(10.0), std::log(1e4));
  std::uniform_real_distribution<double> tau(-30.0, 30.0);
  double worst = 0.0;
  json pairs = json::array();
  for (int i = 0; i < 20; ++i) {
    const double x = std::exp(log_x(rng));
    const double t = tau(rng);
    const auto check = validate_normalizer(x, {0.5, t}, std::numeric_limits<double>::infinity());
    worst = std::max(worst, check.difference);
    pairs.push_back({{"x", x}, {"tau0", t}, {"difference", check.difference}});
  }
  report["normalizer_pairs"] = pairs;
  report["normalizer_max_deviation"] = worst;
  return worst;
}

void cmd_akatsuka(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.psi) {
    Csv csv({"x", "psi", "psi_diag"});
    const auto diag = psi_error_diag(c.grid, sieve_options(c));
    for (const auto& [x, d] : diag) {
      csv.row(x, chebyshev_psi(static_cast<std::uint64_t>(x), std::nullopt, sieve_options(c)), d);
    }
    emit(c.output_path, csv.text(), out);
    return;
  }
  const auto run = akatsuka_ratio(c.grid, {c.tau0, c.m}, sieve_options(c));
  Csv csv({"x", "re_ratio", "im_ratio", "abs_ratio"});
  for (const auto& s : run.samples) csv.row(s.x, s.ratio.real(), s.ratio.imag(), std::abs(s.ratio));
  emit(c.output_path, csv.text(), out);

  json j = {{"tau0", c.tau0}, {"m", c.m}, {"oscillation", run.oscillation}};
  double worst = 0.0;
  if (c.validate) worst = validate_normalizer_battery(j);
  emit_summary(c, j, out);
  if (worst > 1e-6) throw ValidationError("normalizer closed form deviates from quadrature");
}

void cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  json j;
  bool ok = true;

  const std::uint64_t n = c.tau_n != 0 ? c.tau_n : 10000;
  const auto table = load_tau(c, n, err);
  const auto tv = validate_tau_table(*table);
  j["tau"] = validation_json(tv);
  j["tau"]["N"] = n;
  ok = ok && tv.ok();

  const auto cvz = lvalue_chi4_center();
  const auto blocks = lvalue_character_center_richardson(RealCharacter::chi4());
  const double l_gap = std::abs(cvz.value - blocks.value);
  j["lvalue_chi4"] = {{"cvz", lvalue_json(cvz)}, {"blocks", lvalue_json(blocks)}, {"gap", l_gap},
                      {"ok", l_gap <= 1e-8}};
  ok = ok && l_gap <= 1e-8;

  const double x = static_cast<double>(std::min<std::uint64_t>(c.x_max, n));
  double worst_gap = 0.0;
  for (const auto& family : {character_family(4), delta_family(table)}) {
    worst_gap = std::max(worst_gap, decompose(family, x, sieve_options(c)).identity_gap());
  }
  j["decomposition"] = {{"x", x}, {"max_identity_gap", worst_gap}, {"ok", worst_gap <= 1e-9}};
  ok = ok && worst_gap <= 1e-9;

  json normalizer;
  const double dev = validate_normalizer_battery(normalizer);
  normalizer["ok"] = dev <= 1e-6;
  j["normalizer"] = normalizer;
  ok = ok && dev <= 1e-6;

  j["ok"] = ok;
  emit(c.output_path, json_text(j), out);
  if (!ok) throw ValidationError("validation battery failed");
}

std::vector<double> default_grid(std::uint64_t x_max) {
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double x = std::round(100.0 * std::pow(10.0, k / 4.0));
    if (x >= static_cast<double>(x_max)) break;
    grid.push_back(x);
  }
  grid.push_back(static_cast<double>(x_max));
  return grid;
}

}  // namespace

std::vector<double> GeometricGrid::points() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = std::round(start * std::pow(factor, static_cast<double>(i)));
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  return out;
}

GeometricGrid parse_grid(const std::string& spec) {
  GeometricGrid g;
  std::istringstream in(spec);
  std::string a, b, n;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, n) ||
      a.empty() || b.empty() || n.empty()) {
    throw ConfigError("grid must be start:factor:count, got '" + spec + "'");
  }
  try {
    std::size_t used = 0;
    g.start = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    g.factor = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    const long long count = std::stoll(n, &used);
    if (used != n.size() || count < 1) throw std::invalid_argument(n);
    g.count = static_cast<std::size_t>(count);
  } catch (const std::logic_error&) {
    throw ConfigError("grid must be start:factor:count, got '" + spec + "'");
  }
  if (!(g.start >= 2.0)) throw ConfigError("grid start must be >= 2");
  if (!(g.factor > 1.0)) throw ConfigError("grid factor must exceed 1");
  return g;
}

void execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.x_max > kSieveCeiling) {
    throw CeilingError("x_max exceeds the sieve ceiling 2^40");
  }
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.sign != 1 && c.sign != -1) throw ConfigError("sign must be 1 or -1");
  if (c.command == "tau") return cmd_tau(c, out, err);
  if (c.command == "sieve") return cmd_sieve(c, out, err);
  if (c.command == "bias") return cmd_bias(c, out, err);
  if (c.command == "densities") return cmd_densities(c, out, err);
  if (c.command == "euler") return cmd_euler(c, out, err);
  if (c.command == "akatsuka") return cmd_akatsuka(c, out, err);
  if (c.command == "validate") return cmd_validate(c, out, err);
  throw ConfigError("unknown command '" + c.command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  c.threads = std::max(1u, std::thread::hardware_concurrency());
  std::string grid_spec;

  CLI::App app{"Partial Euler products, prime races and tau-function experiments"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "",
                 "flat key=value file using the long option names (x-max=1000000); "
                 "command-line flags take precedence");
  auto* x_max = app.add_option("--x-max", c.x_max, "largest x (sieve bound)");
  app.add_option("--tau-n", c.tau_n, "tau table length (default: x-max for delta, 10000 for tau)");
  app.add_option("--family", c.family, "unitary family")->check(CLI::IsMember({"chi4", "delta"}));
  app.add_option("--s", c.s, "weight exponent for pi_s");
  app.add_option("--grid", grid_spec, "checkpoints start:factor:count (default 100:10^0.25 up to x-max)");
  app.add_option("--threads", c.threads, "worker threads; output does not depend on it");
  app.add_option("--out", c.output_path, "primary output file, - for stdout");
  app.add_option("--summary", c.summary_path, "JSON summary path (default <out>.summary.json)");
  app.add_option("--cache-dir", c.cache_dir, "tau cache directory, empty to disable");
  app.add_flag("--validate", c.validate, "run the cross-checks and fail with exit code 4");
  app.add_option("--tau0", c.tau0, "critical ordinate for akatsuka");
  app.add_option("--m", c.m, "declared zero order at 1/2 + i tau0");
  app.add_flag("--psi", c.psi, "akatsuka: emit the psi error diagnostic instead");
  app.add_option("--lower", c.lower, "density window lower end");
  app.add_option("--sign", c.sign, "density of {sign * f > 0}");

  const std::array<std::pair<const char*, const char*>, 7> commands{{
      {"tau", "build or load the tau table and print a JSON summary"},
      {"sieve", "prime counts, Mertens sums and psi on the grid (CSV)"},
      {"bias", "bias step series (CSV) and its density report"},
      {"euler", "partial products, decomposition and DRH ratio on the grid (CSV)"},
      {"akatsuka", "finite-zeta ratio samples on the grid (CSV)"},
      {"densities", "density report of the bias sign set (JSON)"},
      {"validate", "run every cross-check and print a JSON report"},
  }};
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    if (!grid_spec.empty()) {
      c.grid = parse_grid(grid_spec).points();
      if (x_max->count() == 0) {
        c.x_max = static_cast<std::uint64_t>(c.grid.back());
      } else if (c.grid.back() > static_cast<double>(c.x_max)) {
        throw ConfigError("grid extends beyond x-max");
      }
    } else {
      if (c.x_max < 2) throw ConfigError("x-max must be >= 2");
      c.grid = default_grid(c.x_max);
    }
    execute(c, out, err);
    return 0;
  } catch (const CeilingError& e) {
    err << "ceiling error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    err << "validation failure: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace drh::cli
