#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace fraclab {

/// One verified claim: the computed quantity, the bound it was held against,
/// the signed margin (>= 0 means pass with room) and the claim label.
struct CheckRecord {
  std::string name;
  std::string citation;  // label of the claim being checked; never empty
  double computed = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
};

class VerificationReport {
public:
  nlohmann::json meta;
  std::map<std::string, double> constants;
  double runtime_seconds = 0.0;

  void add(CheckRecord rec);
  void add(const std::string& name, const std::string& citation, double computed,
           double bound, double margin, bool pass);

  const std::vector<CheckRecord>& checks() const { return checks_; }
  bool all_pass() const;

  /// Deterministic payload; the runtime field is the only nondeterministic
  /// part and can be excluded for byte comparisons.
  nlohmann::json to_json(bool include_runtime = true) const;
  std::string dump(bool include_runtime = true) const;

  /// one line per check on the given stream
  void print_summary(std::ostream& os) const;

private:
  std::vector<CheckRecord> checks_;
};

/// FNV-1a over the canonical config text; pins the provenance of a report.
std::uint64_t fnv1a(const std::string& text);

/// Minimal CSV writer: header row then data rows.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace fraclab
