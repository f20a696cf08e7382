// Command line front end. Every invocation is described by a RunConfig; flags
// fill its params, --config loads one from JSON and --save-config writes the
// validated config (defaults filled in) so the run can be repeated exactly.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ampsim/errors.hpp"
#include "ampsim/runconfig.hpp"

namespace {

using nlohmann::json;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level() {
  const char* v = std::getenv("AMPSIM_LOG_LEVEL");
  if (v == nullptr) return LogLevel::kQuiet;
  const std::string s(v);
  if (s == "debug") return LogLevel::kDebug;
  if (s == "info") return LogLevel::kInfo;
  return LogLevel::kQuiet;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

// "re,im" or a bare real number.
json parse_complex(const std::string& field, const std::string& s) {
  const auto parts = split(s, ',');
  try {
    if (parts.size() == 1) return json::array({std::stod(parts[0]), 0.0});
    if (parts.size() == 2) return json::array({std::stod(parts[0]), std::stod(parts[1])});
  } catch (const std::exception&) {
  }
  throw ampsim::ConfigInvalid(field + ": expected re,im, got '" + s + "'");
}

json parse_int_list(const std::string& field, const std::string& s) {
  json out = json::array();
  for (const auto& part : split(s, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ampsim::ConfigInvalid(field + ": expected a comma-separated list of integers, got '" + s + "'");
    }
  }
  return out;
}

struct Leaf {
  std::string command;
  CLI::App* app = nullptr;
  std::optional<std::string> config_path;
  std::optional<std::string> save_config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  // Raw flag values, converted into params after parsing.
  std::vector<std::pair<std::string, std::optional<std::string>>> text;
  std::vector<std::pair<std::string, std::optional<double>>> numbers;
  std::vector<std::pair<std::string, std::optional<long long>>> integers;
  std::vector<std::pair<std::string, bool>> flags;
};

class Builder {
 public:
  explicit Builder(Leaf& leaf) : leaf_(leaf) {}

  Builder& text(const std::string& key, const std::string& flag, const std::string& help) {
    leaf_.text.emplace_back(key, std::nullopt);
    pending_.push_back({flag, help, 't'});
    return *this;
  }
  Builder& number(const std::string& key, const std::string& flag, const std::string& help) {
    leaf_.numbers.emplace_back(key, std::nullopt);
    pending_.push_back({flag, help, 'd'});
    return *this;
  }
  Builder& integer(const std::string& key, const std::string& flag, const std::string& help) {
    leaf_.integers.emplace_back(key, std::nullopt);
    pending_.push_back({flag, help, 'i'});
    return *this;
  }
  Builder& flag(const std::string& key, const std::string& flag, const std::string& help) {
    leaf_.flags.emplace_back(key, false);
    pending_.push_back({flag, help, 'b'});
    return *this;
  }

  // Options are registered once every vector has its final size, so the
  // stored pointers stay valid.
  void finish() {
    // "--h" is a parameter here, so leaves keep only the long help flag.
    leaf_.app->set_help_flag("--help", "Print this help message and exit");
    std::size_t t = 0, d = 0, i = 0, b = 0;
    for (const auto& p : pending_) {
      switch (p.type) {
        case 't': leaf_.app->add_option(p.flag, leaf_.text[t++].second, p.help); break;
        case 'd': leaf_.app->add_option(p.flag, leaf_.numbers[d++].second, p.help); break;
        case 'i': leaf_.app->add_option(p.flag, leaf_.integers[i++].second, p.help); break;
        default: leaf_.app->add_flag(p.flag, leaf_.flags[b++].second, p.help); break;
      }
    }
    leaf_.app->add_option("--config", leaf_.config_path, "Load the run config from a JSON file");
    leaf_.app->add_option("--save-config", leaf_.save_config, "Write the validated run config to a JSON file");
    leaf_.app->add_option("--seed", leaf_.seed, "Seed for every random stream (default 42)");
    leaf_.app->add_option("--out", leaf_.out, "Output path; stdout when omitted");
  }

 private:
  struct Pending {
    std::string flag;
    std::string help;
    char type;
  };
  Leaf& leaf_;
  std::vector<Pending> pending_;
};

ampsim::RunConfig to_config(const Leaf& leaf) {
  ampsim::RunConfig config;
  if (leaf.config_path) {
    config = ampsim::load_config(*leaf.config_path);
    if (config.command != leaf.command && !(leaf.command == "limit compare" && config.command == "born sweep")) {
      throw ampsim::ConfigInvalid("command: config is for '" + config.command + "', not '" + leaf.command + "'");
    }
    if (config.command != leaf.command) {
      // A sweep config supplies the parameters only; its artifacts are not ours.
      config.params.erase("svg");
      config.out.clear();
    }
  }
  config.command = leaf.command;
  for (const auto& [key, value] : leaf.text) {
    if (!value) continue;
    if (key == "a0" || key == "a1") {
      config.params[key] = parse_complex(key, *value);
    } else if (key == "n" || key == "only") {
      config.params[key] = key == "n" ? parse_int_list(key, *value) : json(split(*value, ','));
    } else {
      config.params[key] = *value;
    }
  }
  for (const auto& [key, value] : leaf.numbers) {
    if (value) config.params[key] = *value;
  }
  for (const auto& [key, value] : leaf.integers) {
    if (value) config.params[key] = *value;
  }
  for (const auto& [key, value] : leaf.flags) {
    if (value) config.params[key] = true;
  }
  if (leaf.seed) config.seed = *leaf.seed;
  if (leaf.out) config.out = *leaf.out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic-shift amplifier and harmonic-chain autocorrelation simulator", "ampsim"};
  app.set_version_flag("--version", ampsim::kToolVersion);
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Leaf>> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& group, const std::string& name,
                  const std::string& help) -> Builder {
    auto l = std::make_unique<Leaf>();
    l->command = group.empty() ? name : group + " " + name;
    l->app = parent->add_subcommand(name, help);
    leaves.push_back(std::move(l));
    return Builder(*leaves.back());
  };

  auto* ming = app.add_subcommand("ming", "Ming generator checks");
  ming->require_subcommand(1);
  auto* observable = app.add_subcommand("observable", "Pointer observable");
  observable->require_subcommand(1);
  auto* born = app.add_subcommand("born", "Time averages against Born weights");
  born->require_subcommand(1);
  auto* limit = app.add_subcommand("limit", "Two-point limit system");
  limit->require_subcommand(1);
  auto* fkm = app.add_subcommand("fkm", "Harmonic-chain autocorrelation");
  fkm->require_subcommand(1);

  std::vector<Builder> builders;
  builders.push_back(leaf(ming, "ming", "verify", "Per-orbit residual of exp(2 pi A / h) against the shift")
                         .integer("n", "--n", "Amplifier size (prime, <= 13)")
                         .number("h", "--h", "Action scale (default 1)"));
  builders.push_back(leaf(observable, "observable", "fn", "Evaluate the pointer observable on a state file")
                         .integer("n", "--n", "Amplifier size")
                         .number("epsilon", "--epsilon", "Cocked-set tolerance (default 0)")
                         .text("state", "--state", "CSV of index,re,im rows")
                         .flag("normalize", "--normalize", "Rescale the state to unit norm first"));
  builders.push_back(leaf(born, "born", "sweep", "Measured value (time average of f_n) against n")
                         .text("a0", "--a0", "Ignore-branch amplitude re,im")
                         .text("a1", "--a1", "Detect-branch amplitude re,im")
                         .text("n", "--n", "Comma-separated prime sizes")
                         .number("epsilon", "--epsilon", "Cocked-set tolerance (default 0)")
                         .integer("periods", "--periods", "Whole periods per average (default 1)")
                         .text("svg", "--svg", "Optional SVG chart path"));
  builders.push_back(leaf(limit, "limit", "compare", "Compare a sweep with the two-point limit system")
                         .text("a0", "--a0", "Ignore-branch amplitude re,im")
                         .text("a1", "--a1", "Detect-branch amplitude re,im")
                         .text("n", "--n", "Comma-separated prime sizes")
                         .number("epsilon", "--epsilon", "Cocked-set tolerance (default 0)")
                         .integer("periods", "--periods", "Whole periods per average (default 1)")
                         .number("tolerance", "--tolerance", "Allowed error of the last row (default 1e-3)"));
  builders.push_back(leaf(fkm, "fkm", "autocorr", "Momentum autocorrelation curve of site 0")
                         .integer("n", "--n", "Number of oscillators (default 256)")
                         .number("beta", "--beta", "Inverse temperature (default 1)")
                         .number("kappa0", "--kappa0", "Coupling scale (default 1)")
                         .number("onsite", "--onsite", "On-site stiffness (default 1)")
                         .number("tau_max", "--tau-max", "Largest lag (default 20)")
                         .integer("tau_steps", "--tau-steps", "Grid points on [0, tau_max] (default 200)")
                         .text("mode", "--mode", "analytic | mc | time")
                         .integer("samples", "--samples", "Monte Carlo samples (default 100000)")
                         .number("periods", "--periods", "Trajectory length in characteristic periods (default 1e4)")
                         .text("svg", "--svg", "Optional SVG chart path"));
  builders.push_back(leaf(fkm, "fkm", "oufit", "Fit c exp(-gamma tau) to a curve CSV")
                         .text("in", "--in", "Curve CSV (tau,value,...)")
                         .number("tau_max", "--tau-max", "Fit window (default: whole curve)"));
  builders.push_back(leaf(&app, "", "reproduce", "Run the acceptance suite and print a pass/fail table")
                         .text("config_dir", "--config-dir", "Directory holding an optional reproduce.json")
                         .flag("corrupt_ming_block", "--corrupt-ming-block", "Test hook: perturb a Ming block")
                         .text("only", "--only", "Comma-separated criterion ids"));
  for (auto& b : builders) b.finish();

  CLI11_PARSE(app, argc, argv);

  const LogLevel level = log_level();
  for (const auto& l : leaves) {
    if (!l->app->parsed()) continue;
    try {
      const ampsim::RunConfig config = ampsim::validated(to_config(*l));
      if (l->save_config) ampsim::write_atomically(*l->save_config, ampsim::canonical_json(config));
      if (level >= LogLevel::kDebug) std::cerr << "config: " << ampsim::to_json(config).dump() << '\n';
      const int code = ampsim::run(config, std::cout, std::cerr);
      if (level >= LogLevel::kInfo && !config.out.empty() && code == ampsim::kExitOk) {
        std::cerr << "wrote " << config.out << '\n';
      }
      return code;
    } catch (const ampsim::IoError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return ampsim::kExitIo;
    } catch (const ampsim::Error& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return ampsim::kExitConfig;
    }
  }
  return ampsim::kExitConfig;
}
