// gabor-recover: Monte Carlo experiments and one-shot transforms.
//
// Exit codes: 0 success, 1 infeasible config, 2 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gabor/gabor.hpp"

namespace {

constexpr int kExitInfeasible = 1;
constexpr int kExitIo = 2;

struct Overrides {
  std::string config;
  std::optional<std::size_t> n, t, e_max, trials;
  std::optional<double> theta, tol, delta, skew_fraction;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, shape;
  std::vector<std::size_t> sweep;
  std::optional<bool> side_info;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config; flags override its fields");
  cmd->add_option("--n", o.n, "row length N");
  cmd->add_option("--t", o.t, "number of rows T");
  cmd->add_option("--theta", o.theta, "erasure probability");
  cmd->add_option("--e-max", o.e_max, "row support size E_max");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
  cmd->add_option("--seed", o.seed, "base seed; trial i uses seed + i");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--tol", o.tol, "feasibility tolerance");
  cmd->add_option("--sweep", o.sweep, "list of N values")->delimiter(',');
  cmd->add_option("--shape", o.shape, "test signal shape: uniform, skewed, column-sparse");
  cmd->add_option("--skew-fraction", o.skew_fraction, "fraction of support-1 rows for skewed signals");
}

gabor::ExperimentConfig build_config(gabor::ExperimentMode mode, const Overrides& o) {
  gabor::ExperimentConfig c;
  if (!o.config.empty()) c = gabor::load_config(o.config);
  c.mode = mode;
  if (o.n) c.n = *o.n;
  if (o.t) c.t = *o.t;
  if (o.theta) c.theta = *o.theta;
  if (o.delta) c.delta = *o.delta;
  if (o.e_max) c.e_max_target = *o.e_max;
  if (o.trials) c.trials = *o.trials;
  if (o.seed) c.base_seed = *o.seed;
  if (o.tol) c.tol = *o.tol;
  if (o.out) c.output_path = *o.out;
  if (!o.sweep.empty()) c.sweep = o.sweep;
  if (o.shape) c.profile_shape = gabor::parse_profile_shape(*o.shape);
  if (o.skew_fraction) c.skew_fraction = *o.skew_fraction;
  if (o.side_info) c.side_info = *o.side_info;
  if (c.output_path.empty()) c.output_path = "results/" + std::string(gabor::to_string(mode));
  return c;
}

int run_mode(gabor::ExperimentMode mode, const Overrides& o) {
  const gabor::ExperimentConfig config = build_config(mode, o);
  const gabor::ExperimentResult result = gabor::run_experiment(config);
  const auto files = gabor::emit_results(result, config.output_path);
  std::cerr << gabor::to_string(mode) << ": " << result.points.size() << " point(s), "
            << config.trials << " trial(s) each, " << result.elapsed_seconds << " s wall clock\n";
  for (const auto& f : files) std::cerr << "  wrote " << f.string() << '\n';
  return 0;
}

int run_transform(const std::string& in_path, const std::string& out_path, const std::string& kind, bool inverse) {
  std::ifstream in(in_path);
  if (!in) throw gabor::IoError("cannot open signal '" + in_path + "'");
  gabor::Json j;
  try {
    j = gabor::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("signal '" + in_path + "': " + e.what());
  }
  const gabor::Signal2D f = gabor::signal_from_json(j);
  const gabor::TransformKind k = gabor::parse_transform_kind(kind);
  const gabor::Signal2D g = inverse ? gabor::inverse_transform(k, f) : gabor::forward_transform(k, f);
  const std::string text = gabor::to_json(g).dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw gabor::IoError("cannot write '" + out_path + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-signal recovery from erased Gabor data: experiments and transforms"};
  app.require_subcommand(1);

  struct Sub {
    gabor::ExperimentMode mode;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {gabor::ExperimentMode::MmaxSweep, "mmax-sweep", "Monte Carlo P(M_max < N/(2 E_max)) against the closed form"},
      {gabor::ExperimentMode::MminSweep, "mmin-sweep", "Monte Carlo P(M_min < N/(2 E_max)) against the closed form"},
      {gabor::ExperimentMode::RowRecovery, "row-recovery", "row-wise L1 recovery trials"},
      {gabor::ExperimentMode::TwoStage, "two-stage", "row then column recovery trials"},
      {gabor::ExperimentMode::TailBounds, "tail-bounds", "tabulate binomial tails and the geometric bound"},
  };
  std::vector<Overrides> overrides(std::size(subs));
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmd, overrides[i]);
    if (subs[i].mode == gabor::ExperimentMode::TwoStage) {
      cmd->add_option("--delta", overrides[i].delta, "use theta = 1/(2 E_max) + delta");
      cmd->add_option("--side-info", overrides[i].side_info, "give the column stage the true S_max (true/false)");
    }
    commands.push_back(cmd);
  }

  std::string in_path, out_path, kind = "gabor-row";
  bool inverse = false;
  CLI::App* transform = app.add_subcommand("transform", "apply a transform to a JSON signal");
  transform->add_option("--in", in_path, "input signal JSON")->required();
  transform->add_option("--out", out_path, "output file (default stdout)");
  transform->add_option("--kind", kind, "fourier, gabor-row or gabor-col");
  transform->add_flag("--inverse", inverse, "apply the inverse transform");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInfeasible;
  }

  try {
    if (transform->parsed()) return run_transform(in_path, out_path, kind, inverse);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (commands[i]->parsed()) return run_mode(subs[i].mode, overrides[i]);
    }
  } catch (const gabor::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const gabor::ConfigError& e) {
    std::cerr << "infeasible config: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "infeasible config: " << e.what() << '\n';
    return kExitInfeasible;
  }
  return kExitInfeasible;
}
