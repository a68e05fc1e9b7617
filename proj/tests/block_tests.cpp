#include <doctest.h>

#include "fixtures.hpp"
#include "sparsemap/block.hpp"

using namespace sparsemap;

TEST_CASE("generated blocks keep every channel and kernel populated") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = generate_block(8, 8, 0.48, seed);
    REQUIRE(r);
    const SparseBlock& b = r.value();
    CHECK(b.valid());
    CHECK(b.channels == 8);
    CHECK(b.kernels == 8);
    int ones = 0;
    for (const auto& row : b.mask)
      for (uint8_t v : row) ones += v;
    CHECK(b.nnz() == ones);
    CHECK(b.sparsity() == doctest::Approx(1.0 - double(ones) / 64.0));
    for (int c = 0; c < b.channels; ++c) CHECK(b.row_fanout(c) >= 1);
    for (int k = 0; k < b.kernels; ++k) CHECK(b.col_weight(k) >= 1);
  }
}

TEST_CASE("generation is deterministic per seed") {
  auto a = generate_block(6, 6, 0.42, 7).value();
  auto b = generate_block(6, 6, 0.42, 7).value();
  CHECK(a.mask == b.mask);
  auto c = generate_block(6, 6, 0.42, 8).value();
  CHECK(a.mask != c.mask);
}

TEST_CASE("exact-population generation hits the requested count") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = generate_block_with_nnz(4, 6, 16, seed);
    REQUIRE(r);
    CHECK(r.value().nnz() == 16);
    CHECK(r.value().valid());
  }
  CHECK(generate_block_with_nnz(4, 6, 24, 1).value().sparsity() == doctest::Approx(0.0));
  CHECK_FALSE(generate_block_with_nnz(4, 6, 3, 1));  // cannot cover all six kernels
}

TEST_CASE("invalid masks are rejected with a reason") {
  SparseBlock b = fixtures::make_block("bad", {{1, 1}, {0, 0}});
  std::string why;
  CHECK_FALSE(b.valid(&why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("lowering produces the sized graph") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto b = generate_block(6, 6, 0.42, seed).value();
    auto g = build_sdfg(b).value();
    CHECK(g.op_count() == 2 * b.nnz() - b.kernels);
    CHECK(g.read_count() == b.channels);
    CHECK(g.write_count() == b.kernels);
    CHECK(g.cop_count() == 0);
    CHECK(g.is_acyclic());
    for (const KernelGroup& kg : g.kernels) {
      CHECK(int(kg.adds.size()) == int(kg.muls.size()) - 1);
      CHECK(g.single_producer(kg.write) == g.kernel_root(kg));
      for (NodeId mul : kg.muls) CHECK(g.nodes[mul].kernel == kg.kernel);
    }
  }
}

TEST_CASE("fan-out features surface wide readings") {
  SparseBlock b = fixtures::fanout5_block();
  CHECK(b.valid());
  CHECK(b.row_fanout(0) == 5);
  CHECK(b.row_fanout(1) == 1);
  CHECK(b.fanout_gt4_count() == 1);
  auto g = build_sdfg(b).value();
  for (const Node& n : g.nodes)
    if (n.kind == NodeKind::InputRead && n.channel == 0)
      CHECK(g.consumers(n.id).size() == 5);
}

TEST_CASE("association matrix counts shared kernels") {
  // channel 0 meets channel 2 in kernels 0 and 1, channel 1 nowhere
  SparseBlock b = fixtures::make_block("assoc", {{1, 1, 0, 0},
                                                 {0, 0, 1, 1},
                                                 {1, 1, 0, 0}});
  auto g = build_sdfg(b).value();
  AssociationMatrix a = association_matrix(g);
  REQUIRE(a.size() == 3);
  CHECK(a.at(0, 2) == 2);
  CHECK(a.at(2, 0) == 2);
  CHECK(a.at(0, 1) == 0);
  for (int c = 0; c < 3; ++c) CHECK(a.at(c, c) == b.row_fanout(c));
}

TEST_CASE("dense counterpart keeps geometry and fills the mask") {
  SparseBlock b = fixtures::four_six_block();
  SparseBlock d = dense_counterpart(b);
  CHECK(d.channels == b.channels);
  CHECK(d.kernels == b.kernels);
  CHECK(d.nnz() == b.channels * b.kernels);
  auto g = build_sdfg(d).value();
  CHECK(g.op_count() == 2 * 24 - 6);
}
