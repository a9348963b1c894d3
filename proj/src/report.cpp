#include "fraclab/report.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace fraclab {

void VerificationReport::add(CheckRecord rec) {
  if (rec.citation.empty())
    throw std::invalid_argument("VerificationReport: every check must cite its claim");
  checks_.push_back(std::move(rec));
}

void VerificationReport::add(const std::string& name, const std::string& citation,
                             double computed, double bound, double margin, bool pass) {
  add(CheckRecord{name, citation, computed, bound, margin, pass});
}

bool VerificationReport::all_pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

nlohmann::json VerificationReport::to_json(bool include_runtime) const {
  nlohmann::json j;
  j["meta"] = meta;
  j["constants"] = constants;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks_) {
    arr.push_back({{"name", c.name},
                   {"citation", c.citation},
                   {"computed", c.computed},
                   {"bound", c.bound},
                   {"margin", c.margin},
                   {"pass", c.pass}});
  }
  j["checks"] = arr;
  j["pass"] = all_pass();
  if (include_runtime) j["runtime_seconds"] = runtime_seconds;
  return j;
}

std::string VerificationReport::dump(bool include_runtime) const {
  return to_json(include_runtime).dump(2);
}

void VerificationReport::print_summary(std::ostream& os) const {
  for (const auto& c : checks_) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  (" << c.citation
       << ")  computed=" << c.computed << " bound=" << c.bound << " margin=" << c.margin
       << "\n";
  }
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  out.precision(17);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

}  // namespace fraclab
