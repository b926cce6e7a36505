#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace curvwave::acceptance {

struct Settings {
  std::uint64_t seed = 20240601;
  int threads = 1;
  double h = 0.01;             // lattice step of the kernel algebra
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;   // worst value of the gating quantity
  double tolerance = 0.0;  // its bound
  std::string detail;      // extra reported numbers
  double seconds = 0.0;
};

int criterion_count();
std::string criterion_name(int id);
CriterionResult run_criterion(int id, const Settings& s);
// runs all criteria in order, calling `each` after every one
std::vector<CriterionResult> run_all(const Settings& s,
                                     const std::function<void(const CriterionResult&)>& each = {});
std::string format_line(const CriterionResult& r);

}  // namespace curvwave::acceptance
