#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "speclab/evolution.hpp"
#include "speclab/recovery.hpp"

namespace speclab {

// Self-describing experiment setup; every default is materialized when the
// scenario is resolved so output bundles replay exactly.
struct PotentialSpec {
  std::string type = "zero";  // zero | constant | bump | bumps | random_smooth
  double value = 0.0;         // constant
  Point2 center{0.0, 0.0};
  double width_x = 1.0, width_y = 1.0, amplitude = 1.0;
  std::vector<std::array<double, 5>> bumps;  // x, y, wx, wy, amplitude
  std::uint64_t seed = 0;
  int cutoff = 3;
};

struct ObservationSpec {
  std::string type = "cross";  // whole | strip | disc | cross | custom
  int axis = 0;
  Point2 center{0.0, 0.0};
  double x0 = 0.0, y0 = 0.0;
  double half_width = 0.5;
  double radius = 1.0;
  std::string file;  // custom mask JSON
};

struct InitialSpec {
  std::string type = "zero";  // zero | modes | bump | random_smooth
  std::vector<std::pair<int, cplx>> coefficients;  // 1-based mode index
  Point2 center{0.0, 0.0};
  double width_x = 1.0, width_y = 1.0, amplitude = 1.0;
  std::uint64_t seed = 0;
  int cutoff = 3;
};

struct Scenario {
  int n_side = 16;
  double side_length = kTwoPi;
  PotentialSpec potential;
  ObservationSpec observation;
  Equation equation = Equation::heat;
  InitialSpec initial_f;
  InitialSpec initial_h;
  double t_max = 1.0;
  double dt = 1e-3;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  int k_max = 8;        // extraction order
  int eigen_k = 0;      // 0 = automatic
  double gcc_horizon = 40.0;
  // recovery knobs
  double lambda0_scale = 1e-3;
  int max_iter = 400;
  double theta_nodal = 1e-3;

  std::string to_json() const;
  static Scenario from_json(const std::string& text);
  static Scenario from_file(const std::filesystem::path& path);
};

TorusGrid scenario_grid(const Scenario& sc);
RealField build_potential(const PotentialSpec& spec, const TorusGrid& grid);
ObservationSet build_observation(const ObservationSpec& spec, const TorusGrid& grid);
ComplexField build_initial(const InitialSpec& spec, const EigenSystem& sys);

struct SimulationBundle {
  TorusGrid grid;
  RealField potential;
  ObservationSet observation;
  EigenSystem eigensystem;
  ComplexField f;
  ComplexField h;
  PassiveRecording recording;
};

SimulationBundle run_simulation(const Scenario& sc);

// Bundled end-to-end example used by the CLI selftest and the pipeline test.
Scenario heat_bump_cross_scenario();

}  // namespace speclab
