#include "speclab/scenario.hpp"

#include <json.hpp>
#include <cmath>
#include <stdexcept>

#include "speclab/io.hpp"

namespace speclab {

using nlohmann::json;

namespace {

json potential_to_json(const PotentialSpec& p) {
  json j;
  j["type"] = p.type;
  if (p.type == "constant") j["value"] = p.value;
  if (p.type == "bump") {
    j["center"] = {p.center.x, p.center.y};
    j["width"] = {p.width_x, p.width_y};
    j["amplitude"] = p.amplitude;
  }
  if (p.type == "bumps") {
    json arr = json::array();
    for (const auto& b : p.bumps) arr.push_back({b[0], b[1], b[2], b[3], b[4]});
    j["bumps"] = arr;
  }
  if (p.type == "random_smooth") {
    j["seed"] = p.seed;
    j["cutoff"] = p.cutoff;
    j["amplitude"] = p.amplitude;
  }
  return j;
}

PotentialSpec potential_from_json(const json& j) {
  PotentialSpec p;
  p.type = j.value("type", "zero");
  p.value = j.value("value", 0.0);
  if (j.contains("center")) p.center = {j["center"][0].get<double>(), j["center"][1].get<double>()};
  if (j.contains("width")) {
    p.width_x = j["width"][0].get<double>();
    p.width_y = j["width"][1].get<double>();
  }
  p.amplitude = j.value("amplitude", 1.0);
  p.seed = j.value("seed", std::uint64_t{0});
  p.cutoff = j.value("cutoff", 3);
  if (j.contains("bumps"))
    for (const auto& b : j["bumps"])
      p.bumps.push_back({b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                         b[3].get<double>(), b[4].get<double>()});
  return p;
}

json observation_to_json(const ObservationSpec& o) {
  json j;
  j["type"] = o.type;
  if (o.type == "strip") {
    j["axis"] = o.axis;
    j["center"] = o.axis == 0 ? o.y0 : o.x0;
    j["half_width"] = o.half_width;
  }
  if (o.type == "disc") {
    j["center"] = {o.center.x, o.center.y};
    j["radius"] = o.radius;
  }
  if (o.type == "cross") {
    j["x0"] = o.x0;
    j["y0"] = o.y0;
    j["half_width"] = o.half_width;
  }
  if (o.type == "custom") j["file"] = o.file;
  return j;
}

ObservationSpec observation_from_json(const json& j) {
  ObservationSpec o;
  o.type = j.value("type", "cross");
  o.axis = j.value("axis", 0);
  if (j.contains("center")) {
    if (j["center"].is_array())
      o.center = {j["center"][0].get<double>(), j["center"][1].get<double>()};
    else if (o.axis == 0)
      o.y0 = j["center"].get<double>();
    else
      o.x0 = j["center"].get<double>();
  }
  o.x0 = j.value("x0", o.x0);
  o.y0 = j.value("y0", o.y0);
  o.half_width = j.value("half_width", 0.5);
  o.radius = j.value("radius", 1.0);
  o.file = j.value("file", std::string{});
  return o;
}

json initial_to_json(const InitialSpec& s) {
  json j;
  j["type"] = s.type;
  if (s.type == "modes") {
    json arr = json::array();
    for (const auto& [k, c] : s.coefficients)
      arr.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
    j["coefficients"] = arr;
  }
  if (s.type == "bump") {
    j["center"] = {s.center.x, s.center.y};
    j["width"] = {s.width_x, s.width_y};
    j["amplitude"] = s.amplitude;
  }
  if (s.type == "random_smooth") {
    j["seed"] = s.seed;
    j["cutoff"] = s.cutoff;
    j["amplitude"] = s.amplitude;
  }
  return j;
}

InitialSpec initial_from_json(const json& j) {
  InitialSpec s;
  s.type = j.value("type", "zero");
  if (j.contains("coefficients"))
    for (const auto& c : j["coefficients"])
      s.coefficients.emplace_back(c.at("k").get<int>(),
                                  cplx(c.value("re", 0.0), c.value("im", 0.0)));
  if (j.contains("center")) s.center = {j["center"][0].get<double>(), j["center"][1].get<double>()};
  if (j.contains("width")) {
    s.width_x = j["width"][0].get<double>();
    s.width_y = j["width"][1].get<double>();
  }
  s.amplitude = j.value("amplitude", 1.0);
  s.seed = j.value("seed", std::uint64_t{0});
  s.cutoff = j.value("cutoff", 3);
  return s;
}

}  // namespace

std::string Scenario::to_json() const {
  json j;
  j["grid"] = {{"n_side", n_side}, {"side_length", side_length}};
  j["potential"] = potential_to_json(potential);
  j["observation"] = observation_to_json(observation);
  j["equation"] = equation_name(equation);
  j["initial"]["f"] = initial_to_json(initial_f);
  if (equation == Equation::wave) j["initial"]["h"] = initial_to_json(initial_h);
  j["recording"] = {{"t_max", t_max}, {"dt", dt}, {"sigma", sigma}, {"seed", seed}};
  j["extraction"] = {{"k_max", k_max}};
  j["eigensolve"] = {{"k", eigen_k}};
  j["check"] = {{"gcc_horizon", gcc_horizon}};
  j["recovery"] = {{"lambda0_scale", lambda0_scale},
                   {"max_iter", max_iter},
                   {"theta", theta_nodal}};
  return j.dump(2);
}

Scenario Scenario::from_json(const std::string& text) {
  const json j = json::parse(text);
  Scenario sc;
  if (j.contains("grid")) {
    sc.n_side = j["grid"].value("n_side", 16);
    sc.side_length = j["grid"].value("side_length", kTwoPi);
  }
  if (j.contains("potential")) sc.potential = potential_from_json(j["potential"]);
  if (j.contains("observation")) sc.observation = observation_from_json(j["observation"]);
  sc.equation = equation_from_name(j.value("equation", "heat"));
  if (j.contains("initial")) {
    if (j["initial"].contains("f")) sc.initial_f = initial_from_json(j["initial"]["f"]);
    if (j["initial"].contains("h")) sc.initial_h = initial_from_json(j["initial"]["h"]);
  }
  if (j.contains("recording")) {
    sc.t_max = j["recording"].value("t_max", 1.0);
    sc.dt = j["recording"].value("dt", 1e-3);
    sc.sigma = j["recording"].value("sigma", 0.0);
    sc.seed = j["recording"].value("seed", std::uint64_t{0});
  }
  if (j.contains("extraction")) sc.k_max = j["extraction"].value("k_max", 8);
  if (j.contains("eigensolve")) sc.eigen_k = j["eigensolve"].value("k", 0);
  if (j.contains("check")) sc.gcc_horizon = j["check"].value("gcc_horizon", 40.0);
  if (j.contains("recovery")) {
    sc.lambda0_scale = j["recovery"].value("lambda0_scale", 1e-3);
    sc.max_iter = j["recovery"].value("max_iter", 400);
    sc.theta_nodal = j["recovery"].value("theta", 1e-3);
  }
  return sc;
}

Scenario Scenario::from_file(const std::filesystem::path& path) {
  return from_json(io::read_text(path));
}

TorusGrid scenario_grid(const Scenario& sc) { return build_grid(sc.n_side, sc.side_length); }

RealField build_potential(const PotentialSpec& spec, const TorusGrid& grid) {
  if (spec.type == "zero") return constant_field(grid, 0.0);
  if (spec.type == "constant") return constant_field(grid, spec.value);
  if (spec.type == "bump")
    return bump_field(grid, spec.center, spec.width_x, spec.width_y, spec.amplitude);
  if (spec.type == "bumps") {
    RealField out(grid);
    for (const auto& b : spec.bumps) {
      const RealField one = bump_field(grid, {b[0], b[1]}, b[2], b[3], b[4]);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += one[i];
    }
    return out;
  }
  if (spec.type == "random_smooth")
    return random_smooth_field(grid, spec.seed, spec.cutoff, spec.amplitude);
  throw std::invalid_argument("unknown potential type: " + spec.type);
}

ObservationSet build_observation(const ObservationSpec& spec, const TorusGrid& grid) {
  if (spec.type == "whole") return whole_torus(grid);
  if (spec.type == "strip")
    return strip(grid, spec.axis, spec.axis == 0 ? spec.y0 : spec.x0, spec.half_width);
  if (spec.type == "disc") return disc(grid, spec.center, spec.radius);
  if (spec.type == "cross") return cross(grid, spec.x0, spec.y0, spec.half_width);
  if (spec.type == "custom") return io::mask_from_json(io::read_text(spec.file));
  throw std::invalid_argument("unknown observation type: " + spec.type);
}

ComplexField build_initial(const InitialSpec& spec, const EigenSystem& sys) {
  if (spec.type == "zero") return ComplexField(sys.grid);
  if (spec.type == "modes") {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(sys.size());
    for (const auto& [k, v] : spec.coefficients) {
      if (k < 1 || k > sys.size())
        throw std::invalid_argument("initial data references mode beyond the eigensystem");
      c(k - 1) = v;
    }
    return synthesize(sys, c);
  }
  if (spec.type == "bump")
    return to_complex(bump_field(sys.grid, spec.center, spec.width_x, spec.width_y, spec.amplitude));
  if (spec.type == "random_smooth")
    return to_complex(random_smooth_field(sys.grid, spec.seed, spec.cutoff, spec.amplitude));
  throw std::invalid_argument("unknown initial data type: " + spec.type);
}

SimulationBundle run_simulation(const Scenario& sc) {
  SimulationBundle b;
  b.grid = scenario_grid(sc);
  b.potential = build_potential(sc.potential, b.grid);
  b.observation = build_observation(sc.observation, b.grid);

  const int K = sc.eigen_k > 0 ? sc.eigen_k
                               : std::min(b.grid.cell_count(), std::max(3 * sc.k_max + 10, 24));
  EigenSolveOptions eopts;
  eopts.seed = sc.seed;
  b.eigensystem = eigensolve(assemble_operator(b.grid, b.potential), K, eopts);

  b.f = build_initial(sc.initial_f, b.eigensystem);
  b.h = build_initial(sc.initial_h, b.eigensystem);

  const int samples = static_cast<int>(std::llround(sc.t_max / sc.dt)) + 1;
  const std::vector<double> times = uniform_times(0.0, sc.dt * (samples - 1), samples);
  b.recording = simulate_recording(b.eigensystem, b.observation, sc.equation, b.f,
                                   sc.equation == Equation::wave ? &b.h : nullptr, times,
                                   sc.sigma, sc.seed);
  return b;
}

Scenario heat_bump_cross_scenario() {
  Scenario sc;
  sc.n_side = 20;
  sc.equation = Equation::heat;
  sc.potential.type = "bumps";
  sc.potential.bumps = {{2.0, 3.7, 1.3, 0.9, 1.5}, {4.9, 1.2, 0.8, 1.4, 0.9}};
  sc.observation.type = "cross";
  sc.observation.x0 = 3.141592653589793;
  sc.observation.y0 = 0.0;
  sc.observation.half_width = 0.75;
  sc.initial_f.type = "random_smooth";
  sc.initial_f.seed = 11;
  sc.initial_f.cutoff = 2;
  sc.initial_f.amplitude = 1.0;
  sc.k_max = 6;
  sc.eigen_k = 40;
  sc.dt = 1e-3;
  sc.t_max = 0.6;
  return sc;
}

}  // namespace speclab
