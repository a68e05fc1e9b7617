#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "fixtures.hpp"
#include "sparsemap/driver.hpp"
#include "sparsemap/io.hpp"
#include "sparsemap/validator.hpp"

using namespace sparsemap;

TEST_CASE("configuration survives the JSON round trip") {
  CgraConfig cfg;
  cfg.rows = 6;
  cfg.cols = 5;
  cfg.lrf_capacity = 4;
  cfg.grf_capacity = 9;
  cfg.grf_write_ports = 2;
  cfg.grf_read_ports = 2;
  auto back = config_from_json(config_to_json(cfg));
  REQUIRE(back);
  CHECK(back.value().rows == 6);
  CHECK(back.value().cols == 5);
  CHECK(back.value().lrf_capacity == 4);
  CHECK(back.value().grf_capacity == 9);
  CHECK(back.value().grf_write_ports == 2);
  CHECK(back.value().grf_read_ports == 2);
  CHECK(!config_from_json("not json"));
  CHECK(!config_from_json("{\"rows\": 0}"));
}

TEST_CASE("blocks survive the JSON round trip") {
  auto b = generate_block(6, 6, 0.42, 5, "roundtrip").value();
  auto back = block_from_json(block_to_json(b));
  REQUIRE(back);
  CHECK(back.value().name == b.name);
  CHECK(back.value().channels == b.channels);
  CHECK(back.value().kernels == b.kernels);
  CHECK(back.value().mask == b.mask);
  CHECK(back.value().seed == b.seed);
  CHECK(!block_from_json("[]"));
}

TEST_CASE("mapping artifacts round trip and still validate") {
  CgraConfig cfg;
  SparseBlock block = fixtures::fanout5_block();
  auto g = build_sdfg(block).value();
  MapResult mr = map_with_retries(g, cfg, SchedulerOptions{}, BinderOptions{});
  REQUIRE(mr.success);

  MappedArtifact art{cfg, block, mr.sdfg, mr.schedule, mr.mapping, mr.metrics};
  auto back = artifact_from_json(artifact_to_json(art));
  REQUIRE(back);
  const MappedArtifact& rt = back.value();
  CHECK(rt.schedule.ii == mr.schedule.ii);
  CHECK(rt.schedule.time == mr.schedule.time);
  CHECK(rt.mapping.bindings.size() == mr.mapping.bindings.size());
  CHECK(rt.mapping.routes.size() == mr.mapping.routes.size());
  CHECK(rt.metrics.final_ii == mr.metrics.final_ii);
  CHECK(rt.metrics.cops == mr.metrics.cops);
  CHECK(rt.metrics.mcids == mr.metrics.mcids);
  CHECK(rt.block.mask == block.mask);

  // the re-parsed artifact must stand on its own
  CHECK(validate_mapping(rt.sdfg, rt.config, rt.schedule, rt.mapping).empty());
  Recount rc = recount_mapping(rt.sdfg, rt.schedule);
  CHECK(rc.cops == rt.metrics.cops);
  auto mc = mcid_set(rt.sdfg, rt.schedule);
  REQUIRE(mc);
  auto mcids = mc.value();
  CHECK(rc.mcids == int(mcids.size()));

  CHECK(!artifact_from_json("{}"));
}

TEST_CASE("violation reports serialize with their rules") {
  std::string s = violations_to_json({{"edge-timing", "m0 -> a1 spans 2"},
                                      {"pe-exclusive", "a1 and a2 share (0,0)"}});
  CHECK(s.find("edge-timing") != std::string::npos);
  CHECK(s.find("pe-exclusive") != std::string::npos);
  CHECK(s.find("violations") != std::string::npos);
}

TEST_CASE("result rows render like the report table") {
  ResultRow ok{"b1", 2, 2, 0, 2, true, true, 2, "1.5"};
  ResultRow late{"b2", 3, 3, 1, 4, false, true, 4, "2"};
  ResultRow dead{"b3", 4, 6, 2, 9, false, false, 0, ""};
  std::string csv = results_csv({ok, late, dead});
  CHECK(csv.find("block,MII,II_0,C,M,success,II,S\n") == 0);
  CHECK(csv.find("b1,2,2,0,2,yes,2,1.5\n") != std::string::npos);
  CHECK(csv.find("b2,3,3,1,4,no,4,2\n") != std::string::npos);
  CHECK(csv.find("b3,4,6,2,9,no,Failed,-\n") != std::string::npos);
  CHECK(csv == results_csv({ok, late, dead}));  // byte-stable
}

TEST_CASE("the features table summarizes each block") {
  std::string t = features_table({fixtures::four_six_block(), fixtures::fanout5_block()});
  CHECK(t.find("block,sparsity,shape,ops,reads,writes,wide_readings") == 0);
  CHECK(t.find("four_six,0.33,C4K6,26,4,6,1") != std::string::npos);
  CHECK(t.find("fanout5,0.40,C2K5,7,2,5,1") != std::string::npos);
}

TEST_CASE("DOT exports are well formed") {
  CgraConfig cfg;
  auto g = build_sdfg(fixtures::fanout5_block()).value();
  MapResult mr = map_with_retries(g, cfg, SchedulerOptions{}, BinderOptions{});
  REQUIRE(mr.success);
  std::string plain = sdfg_to_dot(g, nullptr);
  std::string timed = sdfg_to_dot(mr.sdfg, &mr.schedule);
  std::string placed = placement_to_dot(mr.sdfg, mr.schedule, mr.mapping, cfg);
  for (const std::string* s : {&plain, &timed, &placed}) {
    CHECK(s->find("digraph") != std::string::npos);
    CHECK(s->rfind("}") != std::string::npos);
  }
  CHECK(timed.find("->") != std::string::npos);
}

TEST_CASE("file helpers report missing paths instead of throwing") {
  namespace fs = std::filesystem;
  CHECK(!read_file("/nonexistent/truly/missing.json"));
  fs::path p = fs::temp_directory_path() / "sparsemap_io_test.txt";
  REQUIRE(write_file(p.string(), "payload\n"));
  auto back = read_file(p.string());
  REQUIRE(back);
  CHECK(back.value() == "payload\n");
  std::remove(p.string().c_str());
}
