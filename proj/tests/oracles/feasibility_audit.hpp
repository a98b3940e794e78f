#pragma once

// Recomputes the per-slot constraints of a written run directory from its
// CSVs, layout and config alone: coverage, map bounds, UE energy, the
// legitimate UAV's computation budget and the helper energy budget.

#include <filesystem>
#include <string>
#include <vector>

namespace oracle {

struct AuditReport {
  long slots = 0;
  long ue_decisions = 0;
  std::vector<std::string> violations;
};

AuditReport audit_run_directory(const std::filesystem::path& dir);

// Every directory below `root` that holds a run summary.
std::vector<std::filesystem::path> find_run_directories(const std::filesystem::path& root);

}  // namespace oracle
