// Copyright 2026 The polmoments Authors
// SPDX-License-Identifier: Apache-2.0

#include <polmoments/cli.hpp>

#include <algorithm>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include <polmoments/classifier.hpp>
#include <polmoments/experiment_sim.hpp>
#include <polmoments/io.hpp>
#include <polmoments/tomography.hpp>

namespace polmoments {

namespace {

using io::Json;

struct Common {
  std::string out_path = "-";
  bool no_timestamp = false;
};

struct SelectionArgs {
  std::optional<int> manifold;
  bool averaged = false;

  MomentSelection resolve(const PolarizationState& state) const {
    if (manifold) {
      if (*manifold < 0) throw SpecError("manifold must be non-negative");
      return MomentSelection::manifold(*manifold);
    }
    if (averaged) return MomentSelection::averaged();
    return MomentSelection::natural(state);
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--out", c.out_path, "Output path ('-' for stdout)");
  cmd->add_flag("--no-timestamp", c.no_timestamp, "Omit the generation timestamp");
}

void add_selection(CLI::App* cmd, SelectionArgs& s) {
  auto* m = cmd->add_option("--manifold", s.manifold, "Use the normalized N-photon block");
  auto* a = cmd->add_flag("--averaged", s.averaged, "Average over excitation manifolds");
  m->excludes(a);
}

std::string json_output(const Json& body, bool timestamp) {
  if (!timestamp) return io::dump(body);
  Json out;
  out["generated"] = io::timestamp_now();
  for (const auto& [k, v] : body.items()) out[k] = v;
  return io::dump(out);
}

struct Loaded {
  Json json;
  PolarizationState state;
};

Loaded load_state(const std::string& arg) {
  Loaded l;
  l.json = io::load_json_argument(arg);
  l.state = build(io::parse_state_spec(l.json));
  return l;
}

// --- subcommands -----------------------------------------------------------

int cmd_moments(const std::string& state_arg, int order, const SelectionArgs& sel, const Common& c, std::ostream& out,
                std::ostream& err) {
  if (order < 1) throw SpecError("--order must be at least 1");
  const auto l = load_state(state_arg);
  const auto selection = sel.resolve(l.state);
  const auto tensors = moment_tensors(l.state, order, selection);
  std::optional<UncertaintyReport> unc;
  if (!selection.is_averaged() && selection.photons() >= 1) unc = uncertainty_check(l.state, selection.photons());
  Json report = io::moments_report(l.state, tensors, unc);
  report["state_digest"] = io::digest(l.json);
  if (l.state.manifolds().empty() && !report.contains("notice")) report["notice"] = "vacuum has no polarization";
  if (report.contains("notice")) err << "notice: " << report["notice"].get<std::string>() << '\n';
  io::write_text(c.out_path, json_output(report, !c.no_timestamp), out);
  return kExitOk;
}

int cmd_scan(const std::string& state_arg, int order, const std::string& grid, const SelectionArgs& sel,
             const Common& c, std::ostream& out) {
  const auto l = load_state(state_arg);
  const auto scan = sphere_scan(l.state, order, parse_grid_spec(grid), sel.resolve(l.state));
  io::write_text(c.out_path, io::format_scan(scan, {io::digest(l.json), !c.no_timestamp}), out);
  return kExitOk;
}

struct SimulateArgs {
  std::string state;
  std::string config_path;
  std::string preset;
  std::optional<long> trials;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  bool exact = false;
  int order = 2;
  std::string directions = "canonical-2nd";
  std::optional<int> manifold;
  std::string stderr_mode = "shot";
  std::string counts_out;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  const auto l = load_state(a.state);
  DetectorConfig config = a.preset.empty() ? DetectorConfig::unit() : DetectorConfig::preset(a.preset);
  if (!a.config_path.empty()) {
    Json j = io::read_json_file(a.config_path);
    if (!a.preset.empty() && !j.contains("preset")) j["preset"] = a.preset;
    config = io::parse_detector_config(j);
  }
  if (a.trials) config.trials = *a.trials;
  if (a.runs) config.runs = *a.runs;
  if (a.seed) config.seed = *a.seed;
  if (a.exact) config.exact = true;
  config.validate();

  ProtocolOptions opts;
  opts.max_order = a.order;
  opts.manifold = a.manifold;
  if (a.stderr_mode == "shot") opts.stderr_mode = StderrMode::Shot;
  else if (a.stderr_mode == "run-std") opts.stderr_mode = StderrMode::RunStd;
  else if (a.stderr_mode == "run-sem") opts.stderr_mode = StderrMode::RunSem;
  else throw SpecError("--stderr must be shot, run-std or run-sem");

  const auto dirs = io::resolve_directions(a.directions);
  const auto result = run_protocol(l.state, dirs, config, opts);
  if (!a.counts_out.empty()) io::write_text(a.counts_out, io::format_counts(result.counts, !c.no_timestamp), out);
  io::write_text(c.out_path, io::format_observations(result.observations, !c.no_timestamp), out);
  return kExitOk;
}

int cmd_reconstruct(const std::string& obs_path, int order, const std::string& reference, const Common& c,
                    std::ostream& out, std::ostream& err) {
  const auto obs = io::parse_observations(io::read_text_file(obs_path));
  const auto result = reconstruct(obs, order);
  std::optional<MisalignmentFit> fit;
  if (!reference.empty()) {
    const auto l = load_state(reference);
    const auto sel = obs.manifold ? MomentSelection::manifold(*obs.manifold) : MomentSelection::natural(l.state);
    fit = misalignment_fit(result, moment_tensors(l.state, std::max(2, result.tensors.max_order), sel));
  }
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  io::write_text(c.out_path, json_output(io::reconstruction_report(result, fit), !c.no_timestamp), out);
  return kExitOk;
}

int cmd_classify(const std::string& state_arg, const std::string& recon_path, int order, double tolerance,
                 const SelectionArgs& sel, const Common& c, std::ostream& out) {
  MomentTensors tensors;
  if (!state_arg.empty()) {
    const auto l = load_state(state_arg);
    tensors = moment_tensors(l.state, order, sel.resolve(l.state));
  } else {
    tensors = io::tensors_from_report(io::read_json_file(recon_path));
    if (tensors.max_order < order) order = tensors.max_order;
    if (tensors.max_order > order) {
      tensors.raw.resize(order);
      tensors = MomentTensors::from_raw(tensors.raw, tensors.manifold);
    }
  }
  const auto report = isotropy_test(tensors, IsotropyOptions{tolerance});
  std::optional<PolarizationClass> cls;
  if (tensors.max_order >= 3) cls = classify(report, tensors.manifold && *tensors.manifold == 3);
  io::write_text(c.out_path, json_output(io::classification_report(report, cls), !c.no_timestamp), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polarization moments of two-mode quantum light", "polmoments"};
  app.require_subcommand(1);

  Common common;
  SelectionArgs selection;

  std::string state_arg;
  int order = 2;
  std::string grid = "icosphere:3";

  auto* moments = app.add_subcommand("moments", "Stokes vector, covariance and moment packs of a state");
  moments->add_option("-s,--state", state_arg, "State spec (JSON file or inline JSON)")->required();
  moments->add_option("-r,--order", order, "Highest moment order");
  add_selection(moments, selection);
  add_common(moments, common);

  auto* scan = app.add_subcommand("scan", "Central moment of one order over a sphere grid");
  scan->add_option("-s,--state", state_arg, "State spec (JSON file or inline JSON)")->required();
  scan->add_option("-r,--order", order, "Moment order")->required();
  scan->add_option("-g,--grid", grid, "icosphere:L, latlong:TxP or fibonacci:N");
  add_selection(scan, selection);
  add_common(scan, common);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate the counting protocol and write observations");
  simulate->add_option("-s,--state", sim.state, "State spec (JSON file or inline JSON)")->required();
  simulate->add_option("-c,--config", sim.config_path, "Detector config JSON");
  simulate->add_option("--preset", sim.preset, "Detector preset: unit, hom11, hom20");
  simulate->add_option("--trials", sim.trials, "Shots per run");
  simulate->add_option("--runs", sim.runs, "Runs per direction");
  simulate->add_option("--seed", sim.seed, "Master RNG seed");
  simulate->add_flag("--exact", sim.exact, "Expectation values instead of sampling");
  simulate->add_option("-r,--order", sim.order, "Highest moment order to estimate");
  simulate->add_option("-d,--directions", sim.directions, "Direction set label or directions file");
  simulate->add_option("--manifold", sim.manifold, "Manifold to measure");
  simulate->add_option("--stderr", sim.stderr_mode, "Reported error: shot, run-std or run-sem");
  simulate->add_option("--counts-out", sim.counts_out, "Also write the counts table here");
  add_common(simulate, common);

  std::string obs_path, reference;
  int recon_order = 0;
  auto* recon = app.add_subcommand("reconstruct", "Reconstruct moment packs from observations");
  recon->add_option("-i,--obs", obs_path, "Observations file")->required();
  recon->add_option("-r,--order", recon_order, "Highest order to solve (0: all observed)");
  recon->add_option("--reference", reference, "Reference state spec for the misalignment fit");
  add_common(recon, common);

  std::string recon_path;
  int class_order = 3;
  double tolerance = 1e-9;
  auto* cls = app.add_subcommand("classify", "Isotropy per order and the three-photon class");
  auto* cs = cls->add_option("-s,--state", state_arg, "State spec (JSON file or inline JSON)");
  auto* cr = cls->add_option("--reconstruction", recon_path, "Reconstruction or moments report JSON");
  cs->excludes(cr);
  cls->add_option("-r,--order", class_order, "Highest order to test");
  cls->add_option("--tolerance", tolerance, "Spread below which a moment counts as isotropic");
  add_selection(cls, selection);
  add_common(cls, common);

  int photons = 0;
  auto* counts = app.add_subcommand("counts", "Parameter counts for states with up to N photons");
  counts->add_option("-n,--photons", photons, "Photon number N")->required();
  add_common(counts, common);

  std::string set_label = "canonical-2nd";
  auto* directions = app.add_subcommand("directions", "Write a canonical direction set");
  directions->add_option("--set", set_label, "canonical-2nd, canonical-3rd-paper or canonical-3rd-minimal");
  add_common(directions, common);

  std::vector<std::string> argv_store{"polmoments"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSpec;
  }

  try {
    if (moments->parsed()) return cmd_moments(state_arg, order, selection, common, out, err);
    if (scan->parsed()) return cmd_scan(state_arg, order, grid, selection, common, out);
    if (simulate->parsed()) return cmd_simulate(sim, common, out);
    if (recon->parsed()) return cmd_reconstruct(obs_path, recon_order, reference, common, out, err);
    if (cls->parsed()) {
      if (state_arg.empty() && recon_path.empty()) throw SpecError("classify needs --state or --reconstruction");
      return cmd_classify(state_arg, recon_path, class_order, tolerance, selection, common, out);
    }
    if (counts->parsed()) {
      const Json j = io::parameter_counts_report(parameter_counts(photons));
      io::write_text(common.out_path, json_output(j, !common.no_timestamp), out);
      return kExitOk;
    }
    if (directions->parsed()) {
      io::write_text(common.out_path, io::format_directions(io::resolve_directions(set_label), !common.no_timestamp),
                     out);
      return kExitOk;
    }
  } catch (const RankDeficientError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRankDeficient;
  } catch (const InvalidStateError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const ClassificationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitClassification;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSpec;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace polmoments
