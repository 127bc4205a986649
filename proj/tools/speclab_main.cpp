// speclab: simulate / extract / match / recover / check / sparsity / report
//
// Exit codes: 0 success, 2 hypothesis-check failure, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "speclab/io.hpp"
#include "speclab/scenario.hpp"

namespace fs = std::filesystem;
using namespace speclab;
using nlohmann::json;

namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::string out = "speclab_out";
  bool quiet = false;
};

void say(const GlobalFlags& g, const std::string& msg) {
  if (!g.quiet) std::cout << msg << "\n";
}

int cmd_simulate(const GlobalFlags& g, const std::string& scenario_path) {
  Scenario sc = scenario_path == "builtin:heat-bump-cross" ? heat_bump_cross_scenario()
                                                           : Scenario::from_file(scenario_path);
  if (g.seed_set) sc.seed = g.seed;
  const SimulationBundle b = run_simulation(sc);

  fs::create_directories(g.out);
  io::write_recording(fs::path(g.out) / "recording", b.recording);
  io::write_text(fs::path(g.out) / "scenario-resolved.json", sc.to_json());

  const fs::path truth = fs::path(g.out) / "truth";
  fs::create_directories(truth);
  io::write_field_csv(truth / "V.csv", b.potential);
  io::write_field_csv(truth / "f.csv", b.f);
  if (sc.equation == Equation::wave) io::write_field_csv(truth / "h.csv", b.h);
  {
    std::string ev = "k,eigenvalue\n";
    for (int k = 0; k < b.eigensystem.size(); ++k)
      ev += std::to_string(k + 1) + "," +
            io::fmt(b.eigensystem.eigenvalues[static_cast<std::size_t>(k)]) + "\n";
    io::write_text(truth / "eigenvalues.csv", ev);
  }
  say(g, "recording written to " + (fs::path(g.out) / "recording.csv").string());
  return 0;
}

json extract_to_files(const GlobalFlags& g, const PassiveRecording& rec, int k_max) {
  fs::create_directories(g.out);
  SpectralDataset ds;
  json info;
  if (rec.equation == Equation::wave) {
    const auto modes = extract_wave_modes(rec, k_max);
    io::write_text(fs::path(g.out) / "modes.json", io::wave_modes_to_json(modes));
    ds = to_spectral_dataset(modes, rec.observation);
    info["modes"] = modes.size();
  } else {
    const auto modes = rec.equation == Equation::heat ? extract_heat_modes(rec, k_max)
                                                      : extract_schrodinger_modes(rec, k_max);
    io::write_text(fs::path(g.out) / "modes.json", io::modes_to_json(modes, rec.equation));
    ds = to_spectral_dataset(modes, rec.equation, rec.observation);
    info["modes"] = modes.size();
  }
  io::write_text(fs::path(g.out) / "dataset.json", io::dataset_to_json(ds));
  info["dataset"] = (fs::path(g.out) / "dataset.json").string();
  return info;
}

int cmd_extract(const GlobalFlags& g, const std::string& prefix, int k_max) {
  const PassiveRecording rec = io::read_recording(prefix);
  const json info = extract_to_files(g, rec, k_max);
  say(g, "extracted " + std::to_string(info["modes"].get<std::size_t>()) + " modes -> " +
             info["dataset"].get<std::string>());
  return 0;
}

void print_pairing_table(const MatchResult& mr, const SpectralDataset& ds1,
                         const GlobalFlags& g) {
  if (g.quiet) return;
  std::printf("%6s %6s %22s %22s %12s\n", "k", "b_k", "mu", "gauge", "discrepancy");
  for (std::size_t i = 0; i < mr.pairs.size(); ++i) {
    const auto& [k, bk] = mr.pairs[i];
    std::printf("%6d %6d %22.15g %11.4g%+.4gi %12.4g\n", k + 1, bk + 1,
                ds1.entries[static_cast<std::size_t>(k)].eigenvalue, mr.gauges[i].real(),
                mr.gauges[i].imag(), mr.restriction_discrepancies[i]);
  }
  std::printf("unmatched: %zu (first dataset), %zu (second dataset)\n",
              mr.unmatched_ds1.size(), mr.unmatched_ds2.size());
}

int cmd_match(const GlobalFlags& g, const std::string& ds1_path, const std::string& ds2_path,
              double eig_tol, double fun_tol) {
  const SpectralDataset ds1 = io::dataset_from_json(io::read_text(ds1_path));
  const SpectralDataset ds2 = io::dataset_from_json(io::read_text(ds2_path));
  const MatchResult mr = match_datasets(ds1, ds2, eig_tol, fun_tol);
  fs::create_directories(g.out);
  io::write_text(fs::path(g.out) / "match.json", io::match_result_to_json(mr));
  print_pairing_table(mr, ds1, g);
  return 0;
}

int cmd_check(const GlobalFlags& g, const std::string& scenario_path) {
  const Scenario sc = scenario_path == "builtin:heat-bump-cross"
                          ? heat_bump_cross_scenario()
                          : Scenario::from_file(scenario_path);
  const TorusGrid grid = scenario_grid(sc);
  const ObservationSet obs = build_observation(sc.observation, grid);

  const HypothesisHReport hrep = check_hypothesis_H(obs, grid, sc.gcc_horizon);
  std::string gcc_str = hrep.gcc.verdict == GccVerdict::satisfied   ? "satisfied"
                        : hrep.gcc.verdict == GccVerdict::violated ? "violated"
                                                                   : "undecided";
  say(g, "GCC (T=" + io::fmt(sc.gcc_horizon) + "): " + gcc_str);
  if (hrep.gcc.witness)
    say(g, "  witness ray: start=(" + io::fmt(hrep.gcc.witness->start.x) + "," +
               io::fmt(hrep.gcc.witness->start.y) + ") direction=(" +
               io::fmt(hrep.gcc.witness->direction.x) + "," +
               io::fmt(hrep.gcc.witness->direction.y) + ")");
  say(g, std::string("hypothesis (H): ") + (hrep.holds ? "holds" : "fails"));
  if (hrep.witness_p)
    say(g, "  witness p=(" + io::fmt(hrep.witness_p->x) + "," + io::fmt(hrep.witness_p->y) + ")");

  // observability constants for the scenario potential
  const RealField V = build_potential(sc.potential, grid);
  EigenSolveOptions eopts;
  eopts.seed = sc.seed;
  const int K = std::min(grid.cell_count(), std::max(sc.eigen_k, 25));
  const EigenSystem sys = eigensolve(assemble_operator(grid, V), K, eopts);
  const ObservabilityReport orep = observability_constants(sys, obs, K);
  if (!g.quiet) {
    std::printf("observability constants (first %d modes, %zu eigenspaces):\n", orep.tested_K,
                orep.per_eigenspace.size());
    std::printf("%22s %16s\n", "eigenvalue", "C");
    for (std::size_t i = 0; i < orep.per_eigenspace.size(); ++i)
      std::printf("%22.15g %16.8g\n", orep.group_eigenvalues[i], orep.per_eigenspace[i]);
    std::printf("overall C = %.8g over the tested prefix\n", orep.overall);
  }

  // sparsity of the dyadic-selected subset
  json sparsity_out;
  try {
    const SparseSelection sel = select_sparse_subsequence(sys.eigenvalues, 2.0);
    const SparsityReport srep = is_lambda_sparse(sys.eigenvalues, sel.indices);
    sparsity_out = json::parse(io::sparsity_report_to_json(srep));
    say(g, "dyadic subset sparsity verdict: " + sparsity_out["verdict"].get<std::string>());
  } catch (const std::exception& e) {
    say(g, std::string("sparsity selection unavailable: ") + e.what());
  }

  fs::create_directories(g.out);
  json out;
  out["gcc"] = gcc_str;
  out["hypothesis_H"] = hrep.holds;
  out["observability_overall"] = orep.overall;
  out["tested_K"] = orep.tested_K;
  if (!sparsity_out.is_null()) out["sparsity"] = sparsity_out;
  io::write_text(fs::path(g.out) / "check.json", out.dump(2));

  return hrep.holds ? 0 : 2;
}

int cmd_sparsity(const GlobalFlags& g, const std::string& scenario_path, double A) {
  const Scenario sc = scenario_path == "builtin:heat-bump-cross"
                          ? heat_bump_cross_scenario()
                          : Scenario::from_file(scenario_path);
  const TorusGrid grid = scenario_grid(sc);
  const RealField V = build_potential(sc.potential, grid);
  EigenSolveOptions eopts;
  eopts.seed = sc.seed;
  const int K = std::min(grid.cell_count(), std::max(sc.eigen_k, 256));
  const EigenSystem sys = eigensolve(assemble_operator(grid, V), K, eopts);
  const SparseSelection sel = select_sparse_subsequence(sys.eigenvalues, A);
  const SparsityReport rep = is_lambda_sparse(sys.eigenvalues, sel.indices);
  fs::create_directories(g.out);
  io::write_text(fs::path(g.out) / "sparsity.json", io::sparsity_report_to_json(rep));
  say(g, "verdict: " + json::parse(io::sparsity_report_to_json(rep))["verdict"].get<std::string>());
  return 0;
}

int cmd_recover(const GlobalFlags& g, const std::string& input, int k_max, int max_iter) {
  SpectralDataset ds;
  fs::path input_dir;
  if (input.size() > 5 && input.substr(input.size() - 5) == ".json") {
    ds = io::dataset_from_json(io::read_text(input));
    input_dir = fs::path(input).parent_path();
  } else {
    const PassiveRecording rec = io::read_recording(input);
    extract_to_files(g, rec, k_max);
    ds = io::dataset_from_json(io::read_text(fs::path(g.out) / "dataset.json"));
    input_dir = fs::path(input).parent_path();
  }

  RecoveryOptions opts;
  opts.max_iter = max_iter;
  RecoveryResult res = recover_potential_global(ds, opts);
  const fs::path outdir = fs::path(g.out) / "recovery";
  io::write_recovery_result(outdir, res);

  // score against sealed truth when present
  const fs::path truth = input_dir / "truth" / "V.csv";
  if (fs::exists(truth)) {
    const RealField Vtrue = io::read_field_csv(truth, res.potential_estimate.grid);
    RealField diff = Vtrue;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= res.potential_estimate[i];
    const double rel = l2_norm(diff) / std::max(1e-300, l2_norm(Vtrue));
    json score;
    score["relative_L2_error"] = rel;
    score["final_data_misfit"] = res.data_misfit_history.back();
    score["misfit_reduction"] =
        res.data_misfit_history.front() / std::max(res.data_misfit_history.back(), 1e-300);
    io::write_text(outdir / "score.json", score.dump(2));
    say(g, "relative L2 error vs sealed truth: " + io::fmt(rel));
  }
  say(g, "recovery written to " + outdir.string());
  return res.line_search_failed ? 3 : 0;
}

int cmd_report(const GlobalFlags& g, const std::string& result_dir) {
  const fs::path dir(result_dir);
  if (!fs::exists(dir / "history.csv"))
    throw std::runtime_error("no result found in " + result_dir);
  fs::create_directories(g.out);
  // misfit curve is already plot-ready; derive cross sections of the estimate
  fs::copy_file(dir / "history.csv", fs::path(g.out) / "misfit_curve.csv",
                fs::copy_options::overwrite_existing);

  std::string text = io::read_text(dir / "potential_estimate.csv");
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    rows.emplace_back();
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) rows.back().push_back(std::stod(tok));
  }
  const std::size_t n = rows.size();
  std::ostringstream cs;
  cs << "x,V_row_mid,V_col_mid\n";
  for (std::size_t i = 0; i < n; ++i)
    cs << i << ',' << io::fmt(rows[n / 2][i]) << ',' << io::fmt(rows[i][n / 2]) << '\n';
  io::write_text(fs::path(g.out) / "cross_sections.csv", cs.str());
  say(g, "report written to " + g.out);
  return 0;
}

// End-to-end smoke run of the bundled scenario; used by ctest.
int cmd_selftest(GlobalFlags g) {
  const fs::path base = g.out;
  g.out = (base / "sim").string();
  cmd_simulate(g, "builtin:heat-bump-cross");
  g.out = (base / "ext").string();
  cmd_extract(g, (base / "sim" / "recording").string(), 6);

  const SpectralDataset ds =
      io::dataset_from_json(io::read_text(base / "ext" / "dataset.json"));
  const SpectralDataset ds2 = ds;
  const MatchResult mr = match_datasets(ds, ds2, 1e-8, 1e-8);
  if (mr.pairs.size() != static_cast<std::size_t>(ds.size()))
    throw std::runtime_error("selftest: self-match failed");

  // determinism: re-simulate and compare bytes
  g.out = (base / "sim2").string();
  cmd_simulate(g, "builtin:heat-bump-cross");
  if (io::read_text(base / "sim" / "recording.csv") !=
      io::read_text(base / "sim2" / "recording.csv"))
    throw std::runtime_error("selftest: recording not byte-reproducible");

  std::cout << "selftest ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral laboratory for passive inverse problems on the flat torus"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "override the scenario seed")->each([&](const std::string&) {
    g.seed_set = true;
  });
  app.add_option("--threads", g.threads, "cap for data-parallel batches (reserved)");
  app.add_option("--out", g.out, "output directory");
  app.add_flag("--quiet", g.quiet, "suppress progress output");

  std::string scenario_path, prefix, ds1, ds2, input, result_dir;
  int k_max = 8, max_iter = 400;
  double eig_tol = 1e-6, fun_tol = 1e-4, A = 2.0;

  auto* sim = app.add_subcommand("simulate", "run a scenario and write the recording");
  sim->add_option("scenario", scenario_path, "scenario JSON (or builtin:heat-bump-cross)")
      ->required();

  auto* ext = app.add_subcommand("extract", "extract a spectral dataset from a recording");
  ext->add_option("recording", prefix, "recording prefix (without .csv/.json)")->required();
  ext->add_option("--k-max", k_max, "maximum number of modes");

  auto* mat = app.add_subcommand("match", "pair two spectral datasets");
  mat->add_option("ds1", ds1)->required();
  mat->add_option("ds2", ds2)->required();
  mat->add_option("--eig-tol", eig_tol, "relative eigenvalue tolerance");
  mat->add_option("--fun-tol", fun_tol, "relative restriction tolerance");

  auto* rec = app.add_subcommand("recover", "recover the potential (and initial data)");
  rec->add_option("input", input, "dataset JSON or recording prefix")->required();
  rec->add_option("--k-max", k_max, "extraction order when input is a recording");
  rec->add_option("--max-iter", max_iter, "optimizer iteration cap");

  auto* chk = app.add_subcommand("check", "hypothesis checks for a scenario");
  chk->add_option("scenario", scenario_path)->required();

  auto* spr = app.add_subcommand("sparsity", "sparsity report for a dyadic subset");
  spr->add_option("scenario", scenario_path)->required();
  spr->add_option("--A", A, "dyadic block base");

  auto* rep = app.add_subcommand("report", "plot-ready tables from a result directory");
  rep->add_option("result", result_dir)->required();

  auto* st = app.add_subcommand("selftest", "bundled end-to-end pipeline check");
  (void)st;

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(g, scenario_path);
    if (ext->parsed()) return cmd_extract(g, prefix, k_max);
    if (mat->parsed()) return cmd_match(g, ds1, ds2, eig_tol, fun_tol);
    if (rec->parsed()) return cmd_recover(g, input, k_max, max_iter);
    if (chk->parsed()) return cmd_check(g, scenario_path);
    if (spr->parsed()) return cmd_sparsity(g, scenario_path, A);
    if (rep->parsed()) return cmd_report(g, result_dir);
    if (st->parsed()) return cmd_selftest(g);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
