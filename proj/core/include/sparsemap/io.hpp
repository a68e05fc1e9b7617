#pragma once

#include <string>
#include <vector>

#include "sparsemap/binder.hpp"
#include "sparsemap/block.hpp"
#include "sparsemap/validator.hpp"

namespace sparsemap {

Result<std::string> read_file(const std::string& path);
Result<bool> write_file(const std::string& path, const std::string& content);

std::string config_to_json(const CgraConfig& cfg);
Result<CgraConfig> config_from_json(const std::string& text);

std::string block_to_json(const SparseBlock& block);
Result<SparseBlock> block_from_json(const std::string& text);

// Everything needed to re-validate a mapped block offline: configuration,
// block, realized graph (clones, caching ops, rebuilt trees), schedule,
// bindings and routes, plus the reported metrics.
struct MappedArtifact {
  CgraConfig config;
  SparseBlock block;
  Sdfg sdfg;
  Schedule schedule;
  Mapping mapping;
  Metrics metrics;
};

std::string artifact_to_json(const MappedArtifact& art);
Result<MappedArtifact> artifact_from_json(const std::string& text);

std::string violations_to_json(const std::vector<Violation>& violations);

// One report line per block run. Failed runs keep mapped=false and render
// their II column as "Failed".
struct ResultRow {
  std::string block;
  int mii = 0;
  int ii0 = 0;
  int cops = 0;
  int mcids = 0;
  bool success = false;  // bound on the first scheduled II
  bool mapped = false;
  int final_ii = 0;
  std::string speedup;
};

std::string results_csv(const std::vector<ResultRow>& rows);

// Block features summary: sparsity, shape, op/read/write counts and the
// number of readings fanning out past one bus column.
std::string features_table(const std::vector<SparseBlock>& blocks);

// Scheduled graph; passing the schedule ranks nodes by time.
std::string sdfg_to_dot(const Sdfg& sdfg, const Schedule* sched);

// Per-layer array occupancy with bus assignments.
std::string placement_to_dot(const Sdfg& sdfg, const Schedule& sched, const Mapping& mapping,
                             const CgraConfig& cfg);

}  // namespace sparsemap
