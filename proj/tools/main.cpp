#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparsemap/driver.hpp"
#include "sparsemap/io.hpp"
#include "sparsemap/validator.hpp"

namespace fs = std::filesystem;
using namespace sparsemap;

namespace {

struct GenerateArgs {
  int channels = 4;
  int kernels = 4;
  double zero_prob = 0.5;
  uint64_t seed = 1;
  int count = 1;
  std::string out_dir = ".";
  std::string prefix;
};

int run_generate(const GenerateArgs& a) {
  std::vector<SparseBlock> blocks;
  for (int i = 0; i < a.count; ++i) {
    std::string name = a.prefix.empty()
                           ? "C" + std::to_string(a.channels) + "K" + std::to_string(a.kernels) +
                                 "_s" + std::to_string(a.seed + uint64_t(i))
                           : a.prefix + std::to_string(i);
    auto b = generate_block(a.channels, a.kernels, a.zero_prob, a.seed + uint64_t(i), name);
    if (!b) {
      std::cerr << "error: " << b.error() << "\n";
      return 1;
    }
    blocks.push_back(std::move(b.value()));
  }
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  for (const SparseBlock& b : blocks) {
    std::string path = (fs::path(a.out_dir) / (b.name + ".block.json")).string();
    auto w = write_file(path, block_to_json(b));
    if (!w) {
      std::cerr << "error: " << w.error() << "\n";
      return 1;
    }
  }
  std::cout << features_table(blocks);
  return 0;
}

struct MapArgs {
  std::vector<std::string> files;
  std::string config_path, csv_path, out_dir;
  bool dot = false;
  bool baseline = false, no_aiba = false, no_mulci = false, no_ridat = false;
  int max_ii = 32, mis_seeds = 8, threads = 0;
  uint64_t seed = 1;
  int mis_exact_threshold = 30;
  int mis_iterations = 200000;
};

int run_map(const MapArgs& a) {
  RunOptions opts;
  if (!a.config_path.empty()) {
    auto text = read_file(a.config_path);
    if (!text) {
      std::cerr << "error: " << text.error() << "\n";
      return 1;
    }
    auto cfg = config_from_json(text.value());
    if (!cfg) {
      std::cerr << "error: " << cfg.error() << "\n";
      return 1;
    }
    opts.cfg = cfg.value();
  }
  opts.sched.baseline_mode = a.baseline;
  opts.sched.enable_aiba = !a.no_aiba;
  opts.sched.enable_mulci = !a.no_mulci;
  opts.sched.enable_ridat = !a.no_ridat;
  opts.sched.max_ii = a.max_ii;
  opts.binder.mis_seeds = a.mis_seeds;
  opts.binder.mis.seed = a.seed;
  opts.binder.mis.exact_threshold = a.mis_exact_threshold;
  opts.binder.mis.iterations = a.mis_iterations;
  opts.threads = a.threads;

  std::vector<SparseBlock> blocks;
  for (const std::string& f : a.files) {
    auto text = read_file(f);
    if (!text) {
      std::cerr << "error: " << text.error() << "\n";
      return 1;
    }
    auto b = block_from_json(text.value());
    if (!b) {
      std::cerr << "error: " << f << ": " << b.error() << "\n";
      return 1;
    }
    blocks.push_back(std::move(b.value()));
  }

  std::vector<BlockOutcome> outcomes = map_blocks(blocks, opts);
  std::vector<ResultRow> rows;
  for (const BlockOutcome& oc : outcomes) rows.push_back(oc.row);
  std::string csv = results_csv(rows);
  if (a.csv_path.empty()) {
    std::cout << csv;
  } else {
    auto w = write_file(a.csv_path, csv);
    if (!w) {
      std::cerr << "error: " << w.error() << "\n";
      return 1;
    }
  }

  if (!a.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    for (const BlockOutcome& oc : outcomes) {
      if (!oc.result.success) continue;
      MappedArtifact art{opts.cfg,           oc.block,           oc.result.sdfg,
                         oc.result.schedule, oc.result.mapping,  oc.result.metrics};
      fs::path base = fs::path(a.out_dir) / oc.block.name;
      auto w = write_file(base.string() + ".map.json", artifact_to_json(art));
      if (!w) {
        std::cerr << "error: " << w.error() << "\n";
        return 1;
      }
      if (a.dot) {
        write_file(base.string() + ".sdfg.dot",
                   sdfg_to_dot(oc.result.sdfg, &oc.result.schedule));
        write_file(base.string() + ".placement.dot",
                   placement_to_dot(oc.result.sdfg, oc.result.schedule, oc.result.mapping,
                                    opts.cfg));
      }
    }
  }
  return 0;
}

struct ValidateArgs {
  std::vector<std::string> files;
  std::string json_path;
};

int run_validate(const ValidateArgs& a) {
  int bad = 0;
  std::vector<Violation> all;
  for (const std::string& f : a.files) {
    auto text = read_file(f);
    if (!text) {
      std::cerr << "error: " << text.error() << "\n";
      return 1;
    }
    auto art = artifact_from_json(text.value());
    if (!art) {
      std::cerr << "error: " << f << ": " << art.error() << "\n";
      return 1;
    }
    const MappedArtifact& m = art.value();
    std::vector<Violation> vs = validate_mapping(m.sdfg, m.config, m.schedule, m.mapping);
    Recount rc = recount_mapping(m.sdfg, m.schedule);
    if (m.metrics.mapped && m.schedule.ii != m.metrics.final_ii)
      vs.push_back({"metrics-recount", "reported final II differs from the schedule"});
    if (rc.cops != m.metrics.cops || rc.mcids != m.metrics.mcids) {
      // First-attempt counts only match when the mapping bound on the first try.
      if (m.metrics.first_attempt_success)
        vs.push_back({"metrics-recount", "caching-op or multi-cycle counts differ from the artifact"});
    }
    std::cout << f << ": " << (vs.empty() ? "clean" : std::to_string(vs.size()) + " violations")
              << "\n";
    for (const Violation& v : vs) std::cout << "  " << v.rule << ": " << v.detail << "\n";
    if (!vs.empty()) ++bad;
    all.insert(all.end(), vs.begin(), vs.end());
  }
  if (!a.json_path.empty()) {
    auto w = write_file(a.json_path, violations_to_json(all));
    if (!w) {
      std::cerr << "error: " << w.error() << "\n";
      return 1;
    }
  }
  return bad ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse-block mapper for streaming CGRAs"};
  app.require_subcommand(1);

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "Generate random sparse blocks");
  gen->add_option("-n,--channels", ga.channels, "input channels")->check(CLI::PositiveNumber);
  gen->add_option("-m,--kernels", ga.kernels, "output kernels")->check(CLI::PositiveNumber);
  gen->add_option("-p,--zero-prob", ga.zero_prob, "per-weight pruning probability")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", ga.seed, "generator seed");
  gen->add_option("--count", ga.count, "number of blocks")->check(CLI::NonNegativeNumber);
  gen->add_option("--out-dir", ga.out_dir, "where block files go");
  gen->add_option("--prefix", ga.prefix, "name prefix (default CnKm_s<seed>)");

  MapArgs ma;
  CLI::App* map_cmd = app.add_subcommand("map", "Map blocks onto the array");
  map_cmd->add_option("blocks", ma.files, "block JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  map_cmd->add_option("--config", ma.config_path, "array configuration JSON")
      ->check(CLI::ExistingFile);
  map_cmd->add_flag("--baseline", ma.baseline, "association-blind list scheduling");
  map_cmd->add_flag("--no-aiba", ma.no_aiba, "disable association-guided bus allocation");
  map_cmd->add_flag("--no-mulci", ma.no_mulci, "disable input multicasting");
  map_cmd->add_flag("--no-ridat", ma.no_ridat, "disable adder tree reconstruction");
  map_cmd->add_option("--max-ii", ma.max_ii, "give up past this interval")
      ->check(CLI::PositiveNumber);
  map_cmd->add_option("--mis-seeds", ma.mis_seeds, "independent-set runs per interval")
      ->check(CLI::PositiveNumber);
  map_cmd->add_option("--seed", ma.seed, "base seed for the binder");
  map_cmd->add_option("--mis-exact-threshold", ma.mis_exact_threshold,
                      "exact solving up to this many candidates");
  map_cmd->add_option("--mis-iterations", ma.mis_iterations, "tabu move budget");
  map_cmd->add_option("--threads", ma.threads, "worker threads (0 = cores)");
  map_cmd->add_option("--csv", ma.csv_path, "write the report here instead of stdout");
  map_cmd->add_option("--out-dir", ma.out_dir, "write mapping artifacts here");
  map_cmd->add_flag("--dot", ma.dot, "also export graph and placement DOT files");

  ValidateArgs va;
  CLI::App* val = app.add_subcommand("validate", "Re-check emitted mappings");
  val->add_option("artifacts", va.files, "mapping artifact JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  val->add_option("--json", va.json_path, "write the violation report here");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) return run_generate(ga);
  if (map_cmd->parsed()) return run_map(ma);
  if (val->parsed()) return run_validate(va);
  return 0;
}
