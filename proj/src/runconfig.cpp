#include "ampsim/runconfig.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "ampsim/acceptance.hpp"
#include "ampsim/bitlattice.hpp"
#include "ampsim/dynamics.hpp"
#include "ampsim/errors.hpp"
#include "ampsim/fkm.hpp"
#include "ampsim/ming.hpp"
#include "ampsim/observable.hpp"
#include "ampsim/svg.hpp"
#include "ampsim/thermolimit.hpp"

namespace ampsim {

using nlohmann::json;

namespace {

const std::set<std::string>& known_commands() {
  static const std::set<std::string> commands{"ming verify",  "observable fn", "born sweep",
                                              "limit compare", "fkm autocorr", "fkm oufit",
                                              "reproduce"};
  return commands;
}

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw ConfigInvalid(field + ": " + message);
}

// Typed parameter access. Missing keys are filled with the default, so the
// validated config records every value the run used.
class Params {
 public:
  explicit Params(json& j) : j_(j) {}

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
    auto& v = slot(key, fallback ? json(*fallback) : json());
    if (!v.is_number_integer()) invalid(key, "expected an integer");
    return v.get<std::int64_t>();
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    auto& v = slot(key, fallback ? json(*fallback) : json());
    if (!v.is_number()) invalid(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) invalid(key, "must be finite");
    return d;
  }

  bool boolean(const std::string& key, bool fallback) {
    auto& v = slot(key, json(fallback));
    if (!v.is_boolean()) invalid(key, "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    auto& v = slot(key, fallback ? json(*fallback) : json());
    if (!v.is_string()) invalid(key, "expected a string");
    return v.get<std::string>();
  }

  std::complex<double> complex(const std::string& key, std::complex<double> fallback) {
    auto& v = slot(key, json::array({fallback.real(), fallback.imag()}));
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      invalid(key, "expected [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback) {
    auto& v = slot(key, json(fallback));
    if (!v.is_array() || v.empty()) invalid(key, "expected a nonempty list of integers");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) invalid(key, "expected a nonempty list of integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::optional<std::string> optional_text(const std::string& key) {
    if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
    if (!j_[key].is_string()) invalid(key, "expected a string");
    return j_[key].get<std::string>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
    if (!j_[key].is_number()) invalid(key, "expected a number");
    return j_[key].get<double>();
  }

  /// Rejects keys that the command does not define.
  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, value] : j_.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) invalid(key, "unknown parameter");
    }
  }

 private:
  json& slot(const std::string& key, const json& fallback) {
    if (!j_.contains(key) || j_[key].is_null()) {
      if (fallback.is_null()) invalid(key, "required");
      j_[key] = fallback;
    }
    return j_[key];
  }

  json& j_;
};

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct SweepParams {
  BranchAmplitudes a;
  std::vector<int> n;
  double epsilon = 0.0;
  int periods = 1;
};

SweepParams sweep_params(Params& p) {
  SweepParams s;
  s.a.a0 = p.complex("a0", {kInvSqrt2, 0.0});
  s.a.a1 = p.complex("a1", {kInvSqrt2, 0.0});
  const double norm2 = std::norm(s.a.a0) + std::norm(s.a.a1);
  if (std::abs(norm2 - 1.0) > 1e-9) invalid("a0", "branch amplitudes must satisfy |a0|^2 + |a1|^2 = 1");
  s.n = p.integers("n", {5, 7, 11, 13});
  for (int n : s.n) {
    if (!is_prime(n)) invalid("n", "n must be prime, got " + std::to_string(n));
  }
  s.epsilon = p.number("epsilon", 0.0);
  if (!(s.epsilon >= 0.0 && s.epsilon < 0.5)) invalid("epsilon", "must lie in [0, 0.5)");
  const auto periods = p.integer("periods", 1);
  if (periods < 1) invalid("periods", "must be >= 1");
  s.periods = static_cast<int>(periods);
  return s;
}

struct AutocorrParams {
  int n = 256;
  double beta = 1.0;
  double kappa0 = 1.0;
  double onsite = 1.0;
  double tau_max = 20.0;
  int tau_steps = 200;
  std::string mode = "analytic";
  std::uint64_t samples = 100000;
  double periods = 1e4;
  std::optional<std::string> svg;
};

AutocorrParams autocorr_params(Params& p) {
  AutocorrParams a;
  a.n = static_cast<int>(p.integer("n", 256));
  if (a.n < 1) invalid("n", "must be >= 1");
  a.beta = p.number("beta", 1.0);
  if (!(a.beta > 0.0)) invalid("beta", "must be positive");
  a.kappa0 = p.number("kappa0", 1.0);
  if (a.kappa0 < 0.0) invalid("kappa0", "must be nonnegative");
  a.onsite = p.number("onsite", 1.0);
  if (a.onsite < 0.0) invalid("onsite", "must be nonnegative");
  a.tau_max = p.number("tau_max", 20.0);
  if (!(a.tau_max > 0.0)) invalid("tau_max", "must be positive");
  a.tau_steps = static_cast<int>(p.integer("tau_steps", 200));
  if (a.tau_steps < 2) invalid("tau_steps", "must be >= 2");
  a.mode = p.text("mode", "analytic");
  if (a.mode != "analytic" && a.mode != "mc" && a.mode != "time") {
    invalid("mode", "must be one of analytic, mc, time");
  }
  const auto samples = p.integer("samples", 100000);
  if (samples < 2) invalid("samples", "must be >= 2");
  a.samples = static_cast<std::uint64_t>(samples);
  a.periods = p.number("periods", 1e4);
  if (!(a.periods > 0.0)) invalid("periods", "must be positive");
  a.svg = p.optional_text("svg");
  return a;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

/// Sends an artifact to config.out (atomically, with provenance) or to `out`.
class Emitter {
 public:
  Emitter(const RunConfig& config, std::ostream& out)
      : config_(config), out_(out), start_(std::chrono::steady_clock::now()) {}

  void emit(const std::string& contents) {
    if (config_.out.empty()) {
      out_ << contents;
      return;
    }
    write_atomically(config_.out, contents);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json provenance{{"config", to_json(config_)},
                    {"tool", kToolName},
                    {"version", kToolVersion},
                    {"wall_clock_utc", timestamp_utc()},
                    {"elapsed_seconds", elapsed}};
    write_atomically(config_.out + ".provenance.json", provenance.dump(2) + "\n");
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  while (begin != end && *begin == ' ') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr == begin) throw ConfigInvalid(what + ": cannot parse number '" + s + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

AmplifierState read_state_csv(const std::string& path, int n) {
  auto in = open_input(path);
  AmplifierState state(n);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (first && !cells.empty() && cells[0] == "index") {
      first = false;
      continue;
    }
    first = false;
    if (cells.size() != 3) throw ConfigInvalid("state: rows must be index,re,im");
    const double index = parse_double(cells[0], "state");
    if (index < 0 || std::floor(index) != index || index >= std::ldexp(1.0, n)) {
      throw ConfigInvalid("state: index out of range for n = " + std::to_string(n));
    }
    state.add(static_cast<std::uint64_t>(index),
              {parse_double(cells[1], "state"), parse_double(cells[2], "state")});
  }
  return state;
}

AutocorrCurve read_curve_csv(const std::string& path) {
  auto in = open_input(path);
  AutocorrCurve curve;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (first && !cells.empty() && cells[0] == "tau") {
      first = false;
      continue;
    }
    first = false;
    if (cells.size() < 2) throw ConfigInvalid("in: rows need at least tau,value");
    curve.tau.push_back(parse_double(cells[0], "in"));
    curve.values.push_back(parse_double(cells[1], "in"));
    if (cells.size() >= 3) curve.kind = curve_kind_from_string(cells[2]);
  }
  if (curve.tau.empty()) throw ConfigInvalid("in: curve file has no rows");
  return curve;
}

void write_svg(const std::optional<std::string>& path, std::span<const double> x, std::span<const double> y,
               const std::string& title, const std::string& xl, const std::string& yl) {
  if (path) write_atomically(*path, svg_line_chart(x, y, title, xl, yl));
}

json report_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"mean", row.mean}, {"error", row.error}});
  return {{"limit_expectation", r.limit_expectation},
          {"rows", rows},
          {"fitted_intercept", r.fitted_intercept},
          {"decay_exponent", r.decay_exponent ? json(*r.decay_exponent) : json()},
          {"final_error", r.final_error},
          {"tolerance", r.tolerance},
          {"self_correlation", r.self_correlation},
          {"pointer_expectation", r.pointer_expectation},
          {"pass", r.pass}};
}

int run_ming_verify(const RunConfig& c, Emitter& emit) {
  json params = c.params;
  Params p(params);
  const int n = static_cast<int>(p.integer("n"));
  const double h = p.number("h", 1.0);
  const auto decomp = decompose_orbits(n);
  std::string csv = "orbit_id,dimension,residual\n";
  {
    // V_0 carries the zero generator; its propagator is the identity.
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
    const double r = (zero.exp() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff();
    csv += "0,2," + format_double(r) + "\n";
  }
  for (std::uint32_t id = 1; id <= decomp.orbit_count(); ++id) {
    const auto block = build_block(static_cast<int>(decomp.orbit(id).size()), h);
    csv += std::to_string(id) + "," + std::to_string(block.n) + "," + format_double(verify_exponential(block)) + "\n";
  }
  emit.emit(csv);
  return kExitOk;
}

int run_observable_fn(const RunConfig& c, Emitter& emit) {
  json params = c.params;
  Params p(params);
  const int n = static_cast<int>(p.integer("n"));
  const double eps = p.number("epsilon", 0.0);
  const auto state = read_state_csv(p.text("state"), n);
  const bool normalize = p.boolean("normalize", false);
  const double f = f_n(state, PointerVariable{CockedSet(n, eps)},
                       normalize ? Normalization::kAuto : Normalization::kStrict);
  emit.emit(format_double(f) + "\n");
  return kExitOk;
}

int run_born_sweep(const RunConfig& c, Emitter& emit) {
  json params = c.params;
  Params p(params);
  const auto s = sweep_params(p);
  const auto svg = p.optional_text("svg");
  SweepOptions opts;
  opts.epsilon_schedule = [eps = s.epsilon](int) { return eps; };
  opts.periods = s.periods;
  const auto rows = born_limit_sweep(s.a, s.n, opts);
  std::string csv = "n,mean,born_weight,abs_error\n";
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    csv += std::to_string(r.n) + "," + format_double(r.mean) + "," + format_double(r.born_weight) + "," +
           format_double(r.abs_error) + "\n";
    xs.push_back(r.n);
    ys.push_back(r.mean);
  }
  emit.emit(csv);
  write_svg(svg, xs, ys, "measured value against amplifier size", "n", "time-averaged f_n");
  return kExitOk;
}

int run_limit_compare(const RunConfig& c, Emitter& emit) {
  json params = c.params;
  Params p(params);
  const auto s = sweep_params(p);
  const double tol = p.number("tolerance", 1e-3);
  SweepOptions opts;
  opts.epsilon_schedule = [eps = s.epsilon](int) { return eps; };
  opts.periods = s.periods;
  const auto rows = born_limit_sweep(s.a, s.n, opts);
  const auto report = compare_limit(s.a, rows, tol);
  emit.emit(report_json(report).dump(2) + "\n");
  return report.pass ? kExitOk : kExitAcceptance;
}

int run_fkm_autocorr(const RunConfig& c, Emitter& emit) {
  json params = c.params;
  Params p(params);
  const auto a = autocorr_params(p);
  const auto chain = HarmonicChain::scaled_ring(a.n, a.beta, a.kappa0, a.onsite);
  const auto modes = normal_modes(chain);
  const auto grid = uniform_grid(a.tau_max, a.tau_steps);
  AutocorrCurve curve;
  if (a.mode == "analytic") {
    curve = phase_autocorrelation(chain, modes, grid);
  } else if (a.mode == "mc") {
    curve = phase_autocorrelation_mc(chain, modes, grid, a.samples, c.seed);
  } else {
    const auto x0 = sample_gibbs(chain, modes, c.seed);
    curve = time_autocorrelation(chain, modes, x0, a.periods * characteristic_period(modes), grid).curve;
  }
  std::string csv = "tau,value,kind,n,beta,seed\n";
  const std::string suffix = "," + to_string(curve.kind) + "," + std::to_string(a.n) + "," +
                             format_double(a.beta) + "," + std::to_string(c.seed) + "\n";
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    csv += format_double(curve.tau[i]) + "," + format_double(curve.values[i]) + suffix;
  }
  emit.emit(csv);
  write_svg(a.svg, curve.tau, curve.values, "momentum autocorrelation (" + to_string(curve.kind) + ")", "tau",
            "g(tau)");
  return kExitOk;
}

int run_fkm_oufit(const RunConfig& c, Emitter& emit) {
  json params = c.params;
  Params p(params);
  const auto curve = read_curve_csv(p.text("in"));
  const auto fit = ou_fit(curve, p.optional_number("tau_max"));
  const json out{{"gamma", fit.gamma},
                 {"amplitude", fit.amplitude},
                 {"residual", fit.residual},
                 {"window_max", fit.window_max},
                 {"points", fit.points}};
  emit.emit(out.dump(2) + "\n");
  return kExitOk;
}

int run_reproduce(const RunConfig& c, Emitter& emit, std::ostream& table) {
  json params = c.params;
  Params p(params);
  AcceptanceOptions options;
  options.seed = c.seed;
  options.corrupt_ming_block = p.boolean("corrupt_ming_block", false);
  if (const auto dir = p.optional_text("config_dir")) {
    const auto file = std::filesystem::path(*dir) / "reproduce.json";
    if (std::filesystem::exists(file)) {
      std::ifstream in(file);
      json overrides;
      try {
        in >> overrides;
      } catch (const json::exception& e) {
        throw ConfigInvalid("config_dir: " + file.string() + " is not valid JSON");
      }
      if (overrides.contains("corrupt_ming_block")) options.corrupt_ming_block = overrides["corrupt_ming_block"].get<bool>();
      if (overrides.contains("only")) options.only = overrides["only"].get<std::vector<std::string>>();
      if (overrides.contains("seed")) options.seed = overrides["seed"].get<std::uint64_t>();
    }
  }
  if (params.contains("only")) {
    if (!params["only"].is_array()) invalid("only", "expected a list of criterion ids");
    options.only = params["only"].get<std::vector<std::string>>();
  }

  const auto results = run_acceptance(options);
  bool all = true;
  json summary = json::array();
  for (const auto& r : results) {
    table << format_result(r) << '\n';
    all = all && r.passed;
    summary.push_back({{"id", r.id},
                       {"title", r.title},
                       {"passed", r.passed},
                       {"detail", r.detail},
                       {"seconds", r.seconds},
                       {"budget_seconds", r.budget_seconds}});
  }
  if (!c.out.empty()) emit.emit(summary.dump(2) + "\n");
  return all ? kExitOk : kExitAcceptance;
}

}  // namespace

json to_json(const RunConfig& config) {
  return {{"command", config.command},
          {"params", config.params},
          {"seed", config.seed},
          {"out", config.out},
          {"format_version", config.format_version}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigInvalid("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "command" && key != "params" && key != "seed" && key != "out" && key != "format_version") {
      invalid(key, "unknown config field");
    }
  }
  RunConfig c;
  if (!j.contains("command") || !j["command"].is_string()) invalid("command", "required string");
  c.command = j["command"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object()) invalid("params", "expected an object");
    c.params = j["params"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) invalid("seed", "expected an integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) invalid("out", "expected a string");
    c.out = j["out"].get<std::string>();
  }
  if (j.contains("format_version")) {
    if (!j["format_version"].is_string()) invalid("format_version", "expected a string");
    c.format_version = j["format_version"].get<std::string>();
  }
  if (c.format_version != kConfigFormatVersion) {
    invalid("format_version", "unsupported version '" + c.format_version + "'");
  }
  return validated(c);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigInvalid("config: " + path.string() + " is not valid JSON");
  }
  return config_from_json(j);
}

std::string canonical_json(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RunConfig validated(const RunConfig& config) {
  if (!known_commands().contains(config.command)) invalid("command", "unknown command '" + config.command + "'");
  RunConfig c = config;
  Params p(c.params);
  const std::string& cmd = c.command;
  if (cmd == "ming verify") {
    p.only({"n", "h"});
    const auto n = p.integer("n");
    if (!is_prime(n)) invalid("n", "n must be prime, got " + std::to_string(n));
    if (n > kDenseMaxSites) invalid("n", "n must be <= " + std::to_string(kDenseMaxSites));
    if (!(p.number("h", 1.0) > 0.0)) invalid("h", "must be positive");
  } else if (cmd == "observable fn") {
    p.only({"n", "epsilon", "state", "normalize"});
    const auto n = p.integer("n");
    if (n < 1 || n > kIndexMaxSites) invalid("n", "must lie in [1, 63]");
    const double eps = p.number("epsilon", 0.0);
    if (!(eps >= 0.0 && eps < 0.5)) invalid("epsilon", "must lie in [0, 0.5)");
    p.text("state");
    p.boolean("normalize", false);
  } else if (cmd == "born sweep") {
    p.only({"a0", "a1", "n", "epsilon", "periods", "svg"});
    sweep_params(p);
    p.optional_text("svg");
  } else if (cmd == "limit compare") {
    p.only({"a0", "a1", "n", "epsilon", "periods", "tolerance"});
    sweep_params(p);
    if (!(p.number("tolerance", 1e-3) > 0.0)) invalid("tolerance", "must be positive");
  } else if (cmd == "fkm autocorr") {
    p.only({"n", "beta", "kappa0", "onsite", "tau_max", "tau_steps", "mode", "samples", "periods", "svg"});
    autocorr_params(p);
  } else if (cmd == "fkm oufit") {
    p.only({"in", "tau_max"});
    p.text("in");
    p.optional_number("tau_max");
  } else if (cmd == "reproduce") {
    p.only({"config_dir", "corrupt_ming_block", "only"});
    p.optional_text("config_dir");
    p.boolean("corrupt_ming_block", false);
  }
  return c;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig c = validated(config);
    Emitter emit(c, out);
    if (c.command == "ming verify") return run_ming_verify(c, emit);
    if (c.command == "observable fn") return run_observable_fn(c, emit);
    if (c.command == "born sweep") return run_born_sweep(c, emit);
    if (c.command == "limit compare") return run_limit_compare(c, emit);
    if (c.command == "fkm autocorr") return run_fkm_autocorr(c, emit);
    if (c.command == "fkm oufit") return run_fkm_oufit(c, emit);
    return run_reproduce(c, emit, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigInvalid& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NotNormalized& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DegenerateFit& e) {
    err << "fit error: " << e.what() << '\n';
    return kExitAcceptance;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace ampsim
