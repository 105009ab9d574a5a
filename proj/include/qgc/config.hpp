#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgc/control_operator.hpp"
#include "qgc/graph.hpp"
#include "qgc/moment_synthesis.hpp"
#include "qgc/spectral.hpp"

namespace qgc {

enum class DriveKind { Zero, Constant, Random };

struct DriveConfig {
  DriveKind kind = DriveKind::Random;
  double amplitude = 1.0;
  int initial_mode = 1;
};

struct RunConfig {
  MetricGraph graph;
  BasisFamily basis = BasisFamily::TadpoleCos;
  std::vector<double> offsets;  // c_j per half-line, star basis only
  int K = 12;
  int K_sim = 24;
  PotentialKind potential = PotentialKind::TadpoleQuartic;
  std::vector<std::vector<double>> custom_coeffs;
  int M = 2;
  double decay_p = 4.0;
  SteeringOptions control;
  double target_eps = 1e-3;
  DriveConfig drive;
  std::vector<double> norms{3.0, 4.0};
  std::string out = "out";
  std::uint64_t seed = 1;
};

// JSON document; unknown keys, wrong types and missing required keys are
// reported with the dotted key path and, where it can be located, the line.
// A graph given as a string is read relative to base_dir.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

// Graph document: finite_edges [{id, length, from, to}],
// infinite_edges [{id, period, root}], vertices [{id, bc}].
MetricGraph parse_graph(const std::string& text);

Potential build_potential(const RunConfig& cfg);

}  // namespace qgc
