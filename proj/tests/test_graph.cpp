#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>

#include "fggs/graph.hpp"
#include "fggs/prng.hpp"

using namespace fggs;

TEST_CASE("undirect merges opposite directions") {
  Graph g = undirect(2, std::vector<std::pair<VertexId, VertexId>>{{0, 1}, {1, 0}});
  REQUIRE(g.undirected_edge_count == 1);
  REQUIRE(g.degree(0) == 1);
  REQUIRE(g.degree(1) == 1);
  REQUIRE(g.neighbors(0)[0] == 1);
}

TEST_CASE("undirect drops self loops") {
  Graph g = undirect(3, std::vector<std::pair<VertexId, VertexId>>{{2, 2}});
  REQUIRE(g.undirected_edge_count == 0);
  REQUIRE(g.vertex_count == 3);
}

TEST_CASE("undirect rejects out-of-range ids") {
  REQUIRE_THROWS_AS(
      undirect(2, std::vector<std::pair<VertexId, VertexId>>{{0, 5}}),
      format_error);
}

TEST_CASE("undirect matches set-based oracle on random input") {
  Rng rng(99);
  const uint64_t n = 512;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < 10000; ++i)
    edges.emplace_back(VertexId(rng.next_below(n)), VertexId(rng.next_below(n)));
  Graph g = undirect(n, edges);

  std::set<std::pair<VertexId, VertexId>> oracle;
  for (auto [u, v] : edges) {
    if (u == v) continue;
    oracle.emplace(std::min(u, v), std::max(u, v));
  }
  REQUIRE(g.undirected_edge_count == oracle.size());
  // symmetry + sortedness + exact membership
  uint64_t seen = 0;
  for (uint64_t v = 0; v < n; ++v) {
    auto nb = g.neighbors(VertexId(v));
    REQUIRE(std::is_sorted(nb.begin(), nb.end()));
    for (VertexId w : nb) {
      REQUIRE(oracle.count({std::min(VertexId(v), w), std::max(VertexId(v), w)}) == 1);
      auto back = g.neighbors(w);
      REQUIRE(std::binary_search(back.begin(), back.end(), VertexId(v)));
      seen++;
    }
  }
  REQUIRE(seen == 2 * g.undirected_edge_count);
}

TEST_CASE("degree stats on trivial graphs") {
  Graph empty = undirect(4, std::vector<std::pair<VertexId, VertexId>>{});
  DegreeStats s = degree_stats(empty);
  REQUIRE(s.max_degree == 0);
  REQUIRE(s.mean_degree == 0.0);
  REQUIRE(s.connected_vertex_count == 0);

  Graph path = undirect(3, std::vector<std::pair<VertexId, VertexId>>{{0, 1}, {1, 2}});
  s = degree_stats(path);
  REQUIRE(s.max_degree == 2);
  REQUIRE(s.mean_degree == Catch::Approx(4.0 / 3.0));
  REQUIRE(s.connected_vertex_count == 3);
}

TEST_CASE("degree sum identity holds") {
  Rng rng(7);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < 2000; ++i)
    edges.emplace_back(VertexId(rng.next_below(100)), VertexId(rng.next_below(100)));
  Graph g = undirect(100, edges);
  uint64_t sum = 0;
  for (uint64_t v = 0; v < g.vertex_count; ++v) sum += g.degree(VertexId(v));
  REQUIRE(sum == 2 * g.undirected_edge_count);
}

TEST_CASE("binary round trip preserves the graph") {
  Rng rng(3);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < 500; ++i)
    edges.emplace_back(VertexId(rng.next_below(64)), VertexId(rng.next_below(64)));
  Graph g = undirect(64, edges, 6);
  std::string path = "test_graph_roundtrip.fggs";
  save_binary(g, path);
  Graph h = load_binary(path);
  REQUIRE(h.vertex_count == g.vertex_count);
  REQUIRE(h.scale == g.scale);
  REQUIRE(h.undirected_edge_count == g.undirected_edge_count);
  REQUIRE(h.offsets == g.offsets);
  REQUIRE(h.adj == g.adj);
  std::remove(path.c_str());
}

TEST_CASE("text round trip preserves the edge set") {
  Graph g = undirect(5, std::vector<std::pair<VertexId, VertexId>>{{0, 1}, {1, 2}, {3, 4}});
  std::string path = "test_graph_roundtrip.txt";
  save_text(g, path);
  Graph h = load_text(path, 5);
  REQUIRE(h.adj == g.adj);
  std::remove(path.c_str());
}

TEST_CASE("binary load rejects bad magic") {
  std::string path = "test_graph_bad.fggs";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE garbage";
  }
  REQUIRE_THROWS_AS(load_binary(path), format_error);
  std::remove(path.c_str());
}
