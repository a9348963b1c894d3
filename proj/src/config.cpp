#include "fraclab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fraclab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: expected a boolean, got '" + v + "'");
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < xs.size(); ++i) os << xs[i] << (i + 1 < xs.size() ? "," : "");
  return os.str();
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               " is not a key = value assignment");
    cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
  if (key == "theorem") theorem = value;
  else if (key == "n") n = std::stoi(value);
  else if (key == "sigma") sigma = std::stod(value);
  else if (key == "p") p = std::stod(value);
  else if (key == "q") q = std::stod(value);
  else if (key == "lambda-grid") lambda_grid = parse_double_list(value);
  else if (key == "j-grid") j_grid = parse_int_list(value);
  else if (key == "index-grid") index_grid = parse_int_list(value);
  else if (key == "radius-grid") radius_grid = parse_double_list(value);
  else if (key == "x-samples") x_samples = parse_double_list(value);
  else if (key == "c2-ball-radius") c2_ball_radius = std::stod(value);
  else if (key == "auto-index-grid") auto_index_grid = parse_bool(value);
  else if (key == "richardson-in-index") richardson_in_index = parse_bool(value);
  else if (key == "richardson-in-radius") richardson_in_radius = parse_bool(value);
  else if (key == "near-radius") quad.near_radius = std::stod(value);
  else if (key == "rel-tol") quad.rel_tol = std::stod(value);
  else if (key == "abs-tol") quad.abs_tol = std::stod(value);
  else if (key == "max-subdiv") quad.max_subdiv = std::stoi(value);
  else if (key == "richardson-steps") quad.richardson_steps = std::stoi(value);
  else if (key == "ang-min-order") quad.ang_min_order = std::stoi(value);
  else if (key == "ang-max-order") quad.ang_max_order = std::stoi(value);
  else if (key == "far-policy") {
    if (value == "analytic") quad.far_policy = QuadConfig::FarPolicy::AnalyticTail;
    else if (value == "mapped") quad.far_policy = QuadConfig::FarPolicy::MappedQuadrature;
    else throw std::invalid_argument("config: far-policy must be analytic or mapped");
  } else if (key == "out-json") out_json = value;
  else if (key == "out-csv-prefix") out_csv_prefix = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "abs-tol=" << quad.abs_tol << "\n"
     << "ang-max-order=" << quad.ang_max_order << "\n"
     << "ang-min-order=" << quad.ang_min_order << "\n"
     << "auto-index-grid=" << (auto_index_grid ? "true" : "false") << "\n"
     << "c2-ball-radius=" << c2_ball_radius << "\n"
     << "far-policy="
     << (quad.far_policy == QuadConfig::FarPolicy::AnalyticTail ? "analytic" : "mapped")
     << "\n"
     << "index-grid=" << join(index_grid) << "\n"
     << "j-grid=" << join(j_grid) << "\n"
     << "lambda-grid=" << join(lambda_grid) << "\n"
     << "max-subdiv=" << quad.max_subdiv << "\n"
     << "n=" << n << "\n"
     << "near-radius=" << quad.near_radius << "\n"
     << "p=" << p << "\n"
     << "q=" << q << "\n"
     << "radius-grid=" << join(radius_grid) << "\n"
     << "rel-tol=" << quad.rel_tol << "\n"
     << "richardson-in-index=" << (richardson_in_index ? "true" : "false") << "\n"
     << "richardson-in-radius=" << (richardson_in_radius ? "true" : "false") << "\n"
     << "richardson-steps=" << quad.richardson_steps << "\n"
     << "sigma=" << sigma << "\n"
     << "theorem=" << theorem << "\n"
     << "x-samples=" << join(x_samples) << "\n";
  return os.str();
}

void ExperimentConfig::validate() const {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("config: n must lie in [1, 3]");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("config: sigma must lie in (0, 1)");
  auto ascending = [](const auto& v) {
    for (size_t i = 1; i < v.size(); ++i)
      if (v[i] <= v[i - 1]) return false;
    return true;
  };
  if (lambda_grid.empty() || !ascending(lambda_grid))
    throw std::invalid_argument("config: lambda-grid must be nonempty and increasing");
  if (j_grid.empty() || !ascending(j_grid))
    throw std::invalid_argument("config: j-grid must be nonempty and increasing");
  if (index_grid.empty() || !ascending(index_grid))
    throw std::invalid_argument("config: index-grid must be nonempty and increasing");
  if (radius_grid.empty() || !ascending(radius_grid))
    throw std::invalid_argument("config: radius-grid must be nonempty and increasing");
  if (theorem == "thm13" && !(q > -2.0 * sigma))
    throw std::invalid_argument("config: thm13 requires q > -2 sigma");
  if (theorem == "thm13")
    for (double lam : lambda_grid)
      if (lam < 1.0)
        throw std::invalid_argument("config: thm13 requires lambda >= 1");
}

}  // namespace fraclab
