#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fggs/graph.hpp"

namespace fggs {

// High-degree vertices replaced by bounded-degree chunks. A vertex keeps its
// id as chunk 0; extra chunks get fresh ids past the original vertex range.
// Edge {u,v} connects the chunk of u whose adjacency slice holds v with the
// chunk of v whose slice holds u, so chunk degrees never exceed split_size
// and merging by master reconstructs the original adjacency exactly.
struct SplitGraph {
  Graph base;                       // graph over chunk ids
  std::vector<VertexId> master_of;  // chunk id -> original vertex
  uint64_t master_count = 0;
  uint32_t split_size = 1024;
  uint32_t reduction_arity = 2;
  // extra chunks of master v (beyond v itself) occupy
  // [extra_start[v], extra_start[v] + extra_count[v])
  std::vector<uint64_t> extra_start;
  std::vector<uint32_t> extra_count;

  uint32_t chunk_count(VertexId master) const {
    return 1 + extra_count[master];
  }
  VertexId chunk_id(VertexId master, uint32_t k) const {
    return k == 0 ? master : VertexId(extra_start[master] + k - 1);
  }
};

inline SplitGraph split_vertices(const Graph& g, uint32_t split_size) {
  if (split_size < 2) throw parameter_error("split_size must be >= 2");
  SplitGraph s;
  s.master_count = g.vertex_count;
  s.split_size = split_size;
  s.extra_start.assign(g.vertex_count, 0);
  s.extra_count.assign(g.vertex_count, 0);
  uint64_t next_id = g.vertex_count;
  for (uint64_t v = 0; v < g.vertex_count; ++v) {
    uint64_t d = g.degree(VertexId(v));
    uint32_t chunks = d ? uint32_t((d + split_size - 1) / split_size) : 1;
    s.extra_start[v] = next_id;
    s.extra_count[v] = chunks - 1;
    next_id += chunks - 1;
  }
  uint64_t split_vertex_count = next_id;
  s.master_of.resize(split_vertex_count);
  for (uint64_t v = 0; v < g.vertex_count; ++v) {
    s.master_of[v] = VertexId(v);
    for (uint32_t k = 0; k < s.extra_count[v]; ++k)
      s.master_of[s.extra_start[v] + k] = VertexId(v);
  }

  auto chunk_at = [&](VertexId v, uint64_t pos) {
    return s.chunk_id(v, uint32_t(pos / split_size));
  };
  auto position_of = [&](VertexId v, VertexId u) {
    auto nb = g.neighbors(v);
    return uint64_t(std::lower_bound(nb.begin(), nb.end(), u) - nb.begin());
  };

  std::vector<uint64_t> edges;
  edges.reserve(g.undirected_edge_count);
  for (uint64_t u = 0; u < g.vertex_count; ++u) {
    auto nb = g.neighbors(VertexId(u));
    for (uint64_t i = 0; i < nb.size(); ++i) {
      VertexId v = nb[i];
      if (uint64_t(v) < u) continue;  // each undirected edge once
      VertexId cu = chunk_at(VertexId(u), i);
      VertexId cv = chunk_at(v, position_of(v, VertexId(u)));
      edges.push_back(pack_edge(cu, cv));
    }
  }
  s.base = undirect(split_vertex_count, std::move(edges), g.scale);
  return s;
}

// Original-vertex edge set recovered from a split graph; for invariant checks.
inline std::vector<uint64_t> merged_edges(const SplitGraph& s) {
  std::vector<uint64_t> out;
  out.reserve(s.base.undirected_edge_count);
  for (uint64_t c = 0; c < s.base.vertex_count; ++c) {
    VertexId mu = s.master_of[c];
    for (VertexId x : s.base.neighbors(VertexId(c))) {
      VertexId mv = s.master_of[x];
      if (mu < mv) out.push_back(pack_edge(mu, mv));
      else if (mv < mu) out.push_back(pack_edge(mv, mu));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace fggs
