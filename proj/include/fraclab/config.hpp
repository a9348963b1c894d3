#pragma once

#include <string>
#include <vector>

#include "fraclab/fraclap.hpp"

namespace fraclab {

/// Flat key=value run configuration; file values are overridden by flags.
struct ExperimentConfig {
  std::string theorem = "oracles";  // oracles | thm12 | thm13 | thm11-b
  int n = 1;
  double sigma = 0.5;
  double p = 3.0;
  double q = 1.0;

  std::vector<double> lambda_grid{1.0, 10.0, 100.0};
  std::vector<int> j_grid{4, 16, 64};
  std::vector<int> index_grid{4, 8, 16, 32, 64};
  std::vector<double> radius_grid{10.0, 20.0, 40.0, 80.0};
  std::vector<double> x_samples{0.0, 1.0, 2.0};

  double c2_ball_radius = 1.0;   // compact set for the C^2 convergence probe
  bool auto_index_grid = true;   // rescale the index grid from the realized beta
  bool richardson_in_index = false;
  bool richardson_in_radius = false;

  QuadConfig quad;

  std::string out_json;
  std::string out_csv_prefix;

  static ExperimentConfig from_file(const std::string& path);

  /// applies one key=value assignment; throws on unknown keys or bad values
  void apply(const std::string& key, const std::string& value);

  /// canonical sorted key=value text (stable across runs; hashed into reports)
  std::string canonical() const;

  void validate() const;
};

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace fraclab
