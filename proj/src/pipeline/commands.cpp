#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "divfree/cli.hpp"
#include "divfree/diagnostics.hpp"
#include "divfree/errors.hpp"
#include "divfree/flo_file.hpp"
#include "divfree/flowmatch.hpp"
#include "divfree/hodge.hpp"
#include "divfree/kernels.hpp"
#include "divfree/manifest.hpp"
#include "divfree/noise.hpp"
#include "divfree/ns_solver.hpp"
#include "divfree/rng.hpp"
#include "divfree/spectral.hpp"

namespace divfree::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Loaded {
  std::vector<VectorField2> frames;
  FloArray array;
};

Loaded load_velocity(const fs::path& path) {
  const auto bytes = read_bytes(path);
  FloArray array = decode_flo(bytes);
  verify_manifest(path, bytes);
  auto frames = frames_from_flo(array);
  return {std::move(frames), std::move(array)};
}

// Writes the file and its manifest; returns the checksum.
std::string save_velocity(const fs::path& path, const std::vector<VectorField2>& frames, const std::string& command,
                          json fields) {
  const auto bytes = encode_flo(to_flo(frames));
  write_bytes(path, bytes);
  const Grid& grid = frames.front().grid();
  fields["dims"] = {frames.size(), 2, grid.ny(), grid.nx()};
  json manifest = make_manifest(command, std::move(fields), bytes);
  write_manifest(path, manifest);
  return manifest["checksum"].get<std::string>();
}

std::pair<int, int> parse_range(const std::string& text, const std::string& what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument(what + " must look like A:B, got \"" + text + "\"");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    const int lo = std::stoi(a, &used_a);
    const int hi = std::stoi(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidArgument(what + " must look like A:B, got \"" + text + "\"");
  }
}

std::vector<FrameRange> parse_stages(const std::string& text) {
  std::vector<FrameRange> stages;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto [lo, hi] = parse_range(item, "stage");
    if (lo < 0 || hi < lo) throw InvalidArgument("stage " + item + " is not a valid inclusive range");
    stages.push_back({static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)});
  }
  if (stages.empty()) throw InvalidArgument("no stages given");
  return stages;
}

fs::path indexed_path(const fs::path& base, std::size_t index) {
  std::ostringstream name;
  name << base.stem().string() << '_' << std::setw(3) << std::setfill('0') << index << base.extension().string();
  return base.parent_path() / name.str();
}

std::ofstream open_text(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  double nu = 1e-3;
  int grid = 64;
  double dt = 1e-3;
  int record_every = 1000;
  int snapshots = 50;
  double alpha = 2.5;
  double tau = 7.0;
  double forcing_amplitude = 0.1 * std::sqrt(2.0);
  double forcing_phase = 0.0;
  std::optional<double> init_amplitude;
  std::uint64_t seed = 0;
  int trajectories = 1;
  std::string out;
};

json config_echo(const SolverConfig& c) {
  json j;
  j["nu"] = c.nu;
  j["dt"] = c.dt;
  j["record_every"] = c.record_every;
  j["snapshots"] = c.snapshots;
  j["forcing_amplitude"] = c.forcing_amplitude;
  j["forcing_phase"] = c.forcing_phase;
  j["grid"] = {c.grid.nx(), c.grid.ny()};
  j["length"] = c.grid.length();
  j["seed"] = c.seed;
  j["init"] = {{"alpha", c.init.alpha}, {"tau", c.init.tau}};
  j["init"]["amplitude"] = c.init.amplitude ? json(*c.init.amplitude) : json(nullptr);
  return j;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.trajectories < 1) throw InvalidArgument("--trajectories must be >= 1");
  SolverConfig base;
  base.nu = a.nu;
  base.dt = a.dt;
  base.record_every = a.record_every;
  base.snapshots = a.snapshots;
  base.forcing_amplitude = a.forcing_amplitude;
  base.grid = Grid(a.grid);
  base.init.alpha = a.alpha;
  base.init.tau = a.tau;
  base.init.amplitude = a.init_amplitude;
  base.validate();

  const auto n = static_cast<std::ptrdiff_t>(a.trajectories);
  std::vector<SolverConfig> configs(a.trajectories, base);
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    configs[j].seed = derive_seed(a.seed, static_cast<std::uint64_t>(j));
    configs[j].forcing_phase = a.forcing_phase + 2.0 * std::numbers::pi * static_cast<double>(j) / a.trajectories;
  }

  std::vector<std::optional<Trajectory>> results(a.trajectories);
  std::vector<std::string> failures(a.trajectories);
  std::vector<char> numerical(a.trajectories, 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    try {
      results[j] = simulate(configs[j]);
    } catch (const UnstableStep& e) {
      failures[j] = e.what();
      numerical[j] = 1;
    } catch (const std::exception& e) {
      failures[j] = e.what();
    }
  }
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    if (!failures[j].empty()) {
      err << "simulate: trajectory " << j << ": " << failures[j] << '\n';
      return numerical[j] ? exit_numerical : exit_input;
    }
  }

  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const fs::path path = a.trajectories == 1 ? fs::path(a.out) : indexed_path(a.out, j);
    json fields;
    fields["config"] = config_echo(configs[j]);
    fields["base_seed"] = a.seed;
    fields["trajectory"] = j;
    fields["times"] = results[j]->times;
    const auto checksum = save_velocity(path, results[j]->frames, "simulate", std::move(fields));
    out << path.string() << ' ' << checksum << '\n';
  }
  return exit_ok;
}

// ----------------------------------------------------------------- project

int cmd_project(const std::string& in, const std::string& out_path, std::ostream& out) {
  const Loaded loaded = load_velocity(in);
  std::vector<VectorField2> projected(loaded.frames.size(), VectorField2(loaded.frames.front().grid()));
  std::vector<double> before(loaded.frames.size()), after(loaded.frames.size());
  const auto n = static_cast<std::ptrdiff_t>(loaded.frames.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    projected[i] = leray_project(loaded.frames[i]);
    before[i] = divergence_error(loaded.frames[i]);
    after[i] = divergence_error(projected[i]);
  }
  json fields;
  fields["input"] = in;
  fields["divergence_error_before"] = before;
  fields["divergence_error_after"] = after;
  out << out_path << ' ' << save_velocity(out_path, projected, "project", std::move(fields)) << '\n';
  return exit_ok;
}

// ------------------------------------------------------------------- noise

struct NoiseArgs {
  std::string mode = "spectral";
  int grid = 64;
  int frames = 1;
  std::uint64_t seed = 0;
  std::uint64_t frame_offset = 0;
  double blur_sigma = 2.0;
  double alpha = 2.5;
  double tau = 7.0;
  std::optional<double> amplitude;
  std::string out;
};

int cmd_noise(const NoiseArgs& a, std::ostream& out) {
  if (a.frames < 1) throw InvalidArgument("--frames must be >= 1");
  StreamNoiseSpec spec;
  spec.mode = a.mode == "fd" ? NoiseMode::finite_difference : NoiseMode::spectral;
  spec.grf.alpha = a.alpha;
  spec.grf.tau = a.tau;
  spec.grf.seed = a.seed;
  spec.blur_sigma = a.blur_sigma;
  spec.amplitude = a.amplitude;
  const Grid grid(a.grid);
  const auto frames = sample_divfree_noise(spec, grid, static_cast<std::size_t>(a.frames), a.frame_offset);

  std::vector<double> spectral_div(frames.size()), central_div(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    spectral_div[i] = divergence_error(frames[i]);
    const ScalarField cd = central_difference_divergence(frames[i]);
    central_div[i] = l2_inner(cd, cd) / (grid.length() * grid.length());
  }
  json fields;
  fields["mode"] = a.mode;
  fields["grid"] = {grid.nx(), grid.ny()};
  fields["seed"] = a.seed;
  fields["frame_offset"] = a.frame_offset;
  fields["alpha"] = a.alpha;
  fields["tau"] = a.tau;
  fields["blur_sigma"] = a.blur_sigma;
  fields["amplitude"] = a.amplitude ? json(*a.amplitude) : json(nullptr);
  fields["divergence_error"] = spectral_div;
  fields["central_divergence_error"] = central_div;
  out << a.out << ' ' << save_velocity(a.out, frames, "noise", std::move(fields)) << '\n';
  return exit_ok;
}

// -------------------------------------------------------------------- eval

fs::path frames_csv_path(const fs::path& summary) {
  fs::path p = summary;
  p.replace_extension();
  p += ".frames.csv";
  return p;
}

int cmd_eval(const std::string& pred_path, const std::string& ref_path, const std::string& stages_text,
             const std::string& out_path, std::ostream& out) {
  const Loaded pred = load_velocity(pred_path);
  const Loaded ref = load_velocity(ref_path);
  if (pred.array.t != ref.array.t || pred.array.h != ref.array.h || pred.array.w != ref.array.w)
    throw InvalidArgument("eval: prediction and reference shapes differ");
  const auto reports = stage_report(pred.frames, ref.frames, parse_stages(stages_text));

  auto summary = open_text(out_path);
  summary << "stage,u_mse,v_mse,div_mse,u_mse_std,v_mse_std,div_mse_std\n";
  for (const auto& r : reports)
    summary << r.stage << ',' << r.u_mse << ',' << r.v_mse << ',' << r.div_mse << ',' << r.u_mse_std << ','
            << r.v_mse_std << ',' << r.div_mse_std << '\n';

  const auto long_path = frames_csv_path(out_path);
  auto frames = open_text(long_path);
  frames << "stage,frame,metric,value\n";
  for (const auto& r : reports)
    for (const auto& f : r.frames) {
      frames << r.stage << ',' << f.frame << ",u_mse," << f.u_mse << '\n';
      frames << r.stage << ',' << f.frame << ",v_mse," << f.v_mse << '\n';
      frames << r.stage << ',' << f.frame << ",div_mse," << f.div_mse << '\n';
    }
  out << out_path << ' ' << long_path.string() << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string in;
  int frame = 0;
  std::string kind = "enstrophy";
  std::string fit = "4:16";
  std::string out;
  std::optional<double> synthetic_slope;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const Loaded loaded = load_velocity(a.in);
  if (a.frame < 0 || static_cast<std::size_t>(a.frame) >= loaded.frames.size())
    throw InvalidArgument("frame " + std::to_string(a.frame) + " out of range (file has " +
                          std::to_string(loaded.frames.size()) + " frames)");
  SpectrumCurve curve =
      spectrum(loaded.frames[a.frame], a.kind == "energy" ? SpectrumKind::energy : SpectrumKind::enstrophy);
  if (a.synthetic_slope)
    for (std::size_t i = 0; i < curve.shells.size(); ++i)
      curve.values[i] = std::pow(static_cast<double>(curve.shells[i]), *a.synthetic_slope);
  const auto [k_min, k_max] = parse_range(a.fit, "--fit");
  const double slope = spectral_slope(curve, k_min, k_max);

  auto csv = open_text(a.out);
  csv << "shell,value\n";
  for (std::size_t i = 0; i < curve.shells.size(); ++i) csv << curve.shells[i] << ',' << curve.values[i] << '\n';
  csv << "# slope=" << slope << " fit=" << k_min << ':' << k_max << " kind=" << a.kind << '\n';
  out << a.out << " slope " << std::setprecision(6) << slope << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------- fm-probe

struct ProbeArgs {
  std::string data;
  std::string path = "affine";
  double sigma_min = 1e-4;
  int tau_samples = 8;
  std::uint64_t seed = 0;
  std::string out;
};

constexpr double probe_solenoidal_tolerance = 1e-6;

int cmd_fm_probe(const ProbeArgs& a, std::ostream& out) {
  if (a.tau_samples < 1) throw InvalidArgument("--tau-samples must be >= 1");
  const Loaded loaded = load_velocity(a.data);
  for (std::size_t i = 0; i < loaded.frames.size(); ++i) {
    const double norm = l2_norm(loaded.frames[i]);
    const double div = l2_norm(divergence(loaded.frames[i]));
    if (div > probe_solenoidal_tolerance * norm)
      throw NotSolenoidal(norm > 0.0 ? div / norm : div, probe_solenoidal_tolerance);
  }
  PathSpec spec;
  spec.kind = a.path == "linear" ? PathKind::linear : PathKind::affine_sigma;
  spec.sigma_min = a.sigma_min;
  spec.validate();

  const Grid& grid = loaded.frames.front().grid();
  StreamNoiseSpec noise;
  noise.grf.seed = a.seed;
  const auto u0 = sample_divfree_noise(noise, grid, loaded.frames.size());
  const auto& ys = loaded.frames;

  const VectorFieldFn truth = [&](const VectorField2& x, double tau, const Condition& c) {
    return conditional_velocity(spec, x, ys[std::any_cast<std::size_t>(c)], tau);
  };
  const VectorFieldFn zero = [](const VectorField2& x, double, const Condition&) { return VectorField2(x.grid()); };

  auto csv = open_text(a.out);
  csv << "tau,interpolant_div_error,loss_at_truth,loss_at_zero\n";
  for (int j = 0; j < a.tau_samples; ++j) {
    const double tau = (j + 0.5) / a.tau_samples;
    std::vector<FmPair> pairs;
    double div_max = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      pairs.push_back({u0[i], ys[i], tau, i});
      div_max = std::max(div_max, divergence_error(interpolate(spec, u0[i], ys[i], tau)));
    }
    csv << tau << ',' << div_max << ',' << fm_loss(truth, spec, pairs) << ',' << fm_loss(zero, spec, pairs) << '\n';
  }
  out << a.out << '\n';
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divergence-free flow toolkit: spectral projection, noise, Navier-Stokes data, diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->envname("DIVFREE_THREADS");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate Navier-Stokes velocity trajectories");
  simulate_cmd->add_option("--nu", sim.nu, "Kinematic viscosity")->capture_default_str();
  simulate_cmd->add_option("--grid", sim.grid, "Points per axis")->capture_default_str();
  simulate_cmd->add_option("--dt", sim.dt, "Solver time step")->capture_default_str();
  simulate_cmd->add_option("--record-every", sim.record_every, "Solver steps per snapshot")->capture_default_str();
  simulate_cmd->add_option("--snapshots", sim.snapshots, "Stored snapshots")->capture_default_str();
  simulate_cmd->add_option("--alpha", sim.alpha, "Initial GRF decay exponent")->capture_default_str();
  simulate_cmd->add_option("--tau", sim.tau, "Initial GRF inverse length scale")->capture_default_str();
  simulate_cmd->add_option("--forcing-amplitude", sim.forcing_amplitude)->capture_default_str();
  simulate_cmd->add_option("--forcing-phase", sim.forcing_phase, "Phase of trajectory 0 (radians)")
      ->capture_default_str();
  simulate_cmd->add_option("--init-amplitude", sim.init_amplitude,
                           "Initial vorticity coefficient amplitude (default: unit L2 norm)");
  simulate_cmd->add_option("--seed", sim.seed)->capture_default_str();
  simulate_cmd->add_option("--trajectories", sim.trajectories)->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "Output .flo path")->required();

  std::string project_in, project_out;
  auto* project_cmd = app.add_subcommand("project", "Leray-project every frame of a FLO1 file");
  project_cmd->add_option("--in", project_in)->required();
  project_cmd->add_option("--out", project_out)->required();

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Sample divergence-free Gaussian noise");
  noise_cmd->add_option("--mode", noise.mode)->check(CLI::IsMember({"spectral", "fd"}))->capture_default_str();
  noise_cmd->add_option("--grid", noise.grid)->capture_default_str();
  noise_cmd->add_option("--frames", noise.frames)->capture_default_str();
  noise_cmd->add_option("--seed", noise.seed)->capture_default_str();
  noise_cmd->add_option("--frame-offset", noise.frame_offset, "Index of the first frame in the seed's stream")
      ->capture_default_str();
  noise_cmd->add_option("--blur-sigma", noise.blur_sigma, "fd mode smoothing width (cells)")->capture_default_str();
  noise_cmd->add_option("--alpha", noise.alpha)->capture_default_str();
  noise_cmd->add_option("--tau", noise.tau)->capture_default_str();
  noise_cmd->add_option("--amplitude", noise.amplitude, "Expected L2 norm per frame (default 1)");
  noise_cmd->add_option("--out", noise.out)->required();

  std::string eval_pred, eval_ref, eval_out, eval_stages = "15:49,50:100,101:300";
  auto* eval_cmd = app.add_subcommand("eval", "Staged MSE and divergence metrics");
  eval_cmd->add_option("--pred", eval_pred)->required();
  eval_cmd->add_option("--ref", eval_ref)->required();
  eval_cmd->add_option("--stages", eval_stages, "Inclusive frame ranges A:B,C:D,...")->capture_default_str();
  eval_cmd->add_option("--out", eval_out)->required();

  SpectrumArgs spec_args;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Shell spectrum and log-log slope of one frame");
  spectrum_cmd->add_option("--in", spec_args.in)->required();
  spectrum_cmd->add_option("--frame", spec_args.frame)->capture_default_str();
  spectrum_cmd->add_option("--kind", spec_args.kind)->check(CLI::IsMember({"enstrophy", "energy"}))
      ->capture_default_str();
  spectrum_cmd->add_option("--fit", spec_args.fit, "Shell range for the slope fit")->capture_default_str();
  spectrum_cmd->add_option("--out", spec_args.out)->required();
  spectrum_cmd->add_option("--synthetic-slope", spec_args.synthetic_slope)->group("");

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("fm-probe", "Flow-matching loss and interpolant audit on solenoidal data");
  probe_cmd->add_option("--data", probe.data)->required();
  probe_cmd->add_option("--path", probe.path)->check(CLI::IsMember({"linear", "affine"}))->capture_default_str();
  probe_cmd->add_option("--sigma-min", probe.sigma_min)->capture_default_str();
  probe_cmd->add_option("--tau-samples", probe.tau_samples)->capture_default_str();
  probe_cmd->add_option("--seed", probe.seed)->capture_default_str();
  probe_cmd->add_option("--out", probe.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return exit_input;
  }

  if (threads > 0) kernels::set_thread_count(threads);

  try {
    if (*simulate_cmd) return cmd_simulate(sim, out, err);
    if (*project_cmd) return cmd_project(project_in, project_out, out);
    if (*noise_cmd) return cmd_noise(noise, out);
    if (*eval_cmd) return cmd_eval(eval_pred, eval_ref, eval_stages, eval_out, out);
    if (*spectrum_cmd) return cmd_spectrum(spec_args, out);
    if (*probe_cmd) return cmd_fm_probe(probe, out);
  } catch (const UnstableStep& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}

}  // namespace divfree::cli
