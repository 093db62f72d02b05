#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "fggs/common.hpp"

namespace fggs {

// Undirected graph in compressed sparse row form. Adjacency lists are sorted,
// symmetric, self-loop free and duplicate free by construction.
struct Graph {
  uint64_t vertex_count = 0;
  int scale = 0;  // log2 of nominal vertex count
  uint64_t undirected_edge_count = 0;
  std::vector<uint64_t> offsets;  // vertex_count + 1 entries
  std::vector<VertexId> adj;      // 2 * undirected_edge_count entries

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adj.data() + offsets[v], adj.data() + offsets[v + 1]};
  }
  uint64_t degree(VertexId v) const { return offsets[v + 1] - offsets[v]; }
  uint64_t directed_edge_count() const { return 2 * undirected_edge_count; }
};

inline uint64_t pack_edge(VertexId u, VertexId v) {
  return (uint64_t(u) << 32) | v;
}

// Builds the symmetric graph from a directed edge list: self-loops dropped,
// duplicates (in either direction) collapsed. `edges` is consumed.
inline Graph undirect(uint64_t vertex_count, std::vector<uint64_t>&& edges,
                      int scale = 0) {
  for (uint64_t e : edges) {
    VertexId u = VertexId(e >> 32), v = VertexId(e & 0xffffffffu);
    if (u >= vertex_count || v >= vertex_count)
      throw format_error("edge endpoint out of range: " + std::to_string(u) +
                         " " + std::to_string(v));
  }
  // normalize to (min, max), drop loops
  size_t w = 0;
  for (uint64_t e : edges) {
    VertexId u = VertexId(e >> 32), v = VertexId(e & 0xffffffffu);
    if (u == v) continue;
    edges[w++] = u < v ? pack_edge(u, v) : pack_edge(v, u);
  }
  edges.resize(w);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.vertex_count = vertex_count;
  g.scale = scale;
  g.undirected_edge_count = edges.size();
  g.offsets.assign(vertex_count + 1, 0);
  for (uint64_t e : edges) {
    g.offsets[(e >> 32) + 1]++;
    g.offsets[(e & 0xffffffffu) + 1]++;
  }
  for (uint64_t v = 0; v < vertex_count; ++v) g.offsets[v + 1] += g.offsets[v];
  g.adj.resize(2 * edges.size());
  std::vector<uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  // single sweep over the (min,max)-sorted list yields sorted adjacency
  for (uint64_t e : edges) {
    VertexId u = VertexId(e >> 32), v = VertexId(e & 0xffffffffu);
    g.adj[cursor[u]++] = v;
    g.adj[cursor[v]++] = u;
  }
  return g;
}

inline Graph undirect(uint64_t vertex_count,
                      const std::vector<std::pair<VertexId, VertexId>>& edges,
                      int scale = 0) {
  std::vector<uint64_t> packed;
  packed.reserve(edges.size());
  for (auto [u, v] : edges) packed.push_back(pack_edge(u, v));
  return undirect(vertex_count, std::move(packed), scale);
}

struct DegreeStats {
  uint64_t max_degree = 0;
  double mean_degree = 0.0;
  uint64_t connected_vertex_count = 0;  // degree > 0
  // bucket 0: degree 0; bucket k>=1: degree in [2^(k-1), 2^k)
  std::vector<uint64_t> degree_histogram;
};

inline DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  s.degree_histogram.assign(1, 0);
  for (uint64_t v = 0; v < g.vertex_count; ++v) {
    uint64_t d = g.degree(VertexId(v));
    s.max_degree = std::max(s.max_degree, d);
    if (d > 0) s.connected_vertex_count++;
    size_t bucket = 0;
    while (d >> bucket) bucket++;  // degree d lands in bucket floor(log2 d)+1
    if (bucket >= s.degree_histogram.size())
      s.degree_histogram.resize(bucket + 1, 0);
    s.degree_histogram[bucket]++;
  }
  s.mean_degree = g.vertex_count
                      ? double(2 * g.undirected_edge_count) / double(g.vertex_count)
                      : 0.0;
  return s;
}

// ---- file formats ----------------------------------------------------------
//
// Binary: "FGGS" magic, u32 version, u64 vertex_count, u64 undirected edges,
// then (n+1) 64-bit offsets and 2E 64-bit neighbor ids, little endian.
// Text: "u v" per undirected edge, 0-based, '#' starts a comment.

inline void save_binary(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot open for write: " + path);
  const char magic[4] = {'F', 'G', 'G', 'S'};
  out.write(magic, 4);
  uint32_t version = 1;
  uint32_t scale = uint32_t(g.scale);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&scale), 4);
  out.write(reinterpret_cast<const char*>(&g.vertex_count), 8);
  out.write(reinterpret_cast<const char*>(&g.undirected_edge_count), 8);
  out.write(reinterpret_cast<const char*>(g.offsets.data()),
            std::streamsize(g.offsets.size() * 8));
  std::vector<uint64_t> wide(g.adj.begin(), g.adj.end());
  out.write(reinterpret_cast<const char*>(wide.data()),
            std::streamsize(wide.size() * 8));
  if (!out) throw format_error("short write: " + path);
}

inline Graph load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FGGS", 4) != 0)
    throw format_error("bad magic in " + path);
  uint32_t version = 0, scale = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&scale), 4);
  if (version != 1) throw format_error("unsupported graph file version");
  Graph g;
  g.scale = int(scale);
  in.read(reinterpret_cast<char*>(&g.vertex_count), 8);
  in.read(reinterpret_cast<char*>(&g.undirected_edge_count), 8);
  if (!in) throw format_error("truncated header in " + path);
  g.offsets.resize(g.vertex_count + 1);
  in.read(reinterpret_cast<char*>(g.offsets.data()),
          std::streamsize(g.offsets.size() * 8));
  std::vector<uint64_t> wide(2 * g.undirected_edge_count);
  in.read(reinterpret_cast<char*>(wide.data()),
          std::streamsize(wide.size() * 8));
  if (!in) throw format_error("truncated body in " + path);
  g.adj.assign(wide.begin(), wide.end());
  return g;
}

inline void save_text(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot open for write: " + path);
  out << "# fggs edge list: " << g.vertex_count << " vertices, "
      << g.undirected_edge_count << " undirected edges\n";
  for (uint64_t v = 0; v < g.vertex_count; ++v)
    for (VertexId w : g.neighbors(VertexId(v)))
      if (uint64_t(w) > v) out << v << ' ' << w << '\n';
}

// Reads an edge list; vertex count is max id + 1 unless a larger count is
// forced by the caller.
inline Graph load_text(const std::string& path, uint64_t vertex_count = 0,
                       int scale = 0) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open: " + path);
  std::vector<uint64_t> edges;
  uint64_t max_id = 0;
  std::string line;
  while (std::getline(in, line)) {
    size_t pos = line.find('#');
    if (pos != std::string::npos) line.resize(pos);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    uint64_t u, v;
    if (sscanf(line.c_str(), "%lu %lu", &u, &v) != 2)
      throw format_error("bad edge line: " + line);
    if (u > 0xffffffffull || v > 0xffffffffull)
      throw format_error("vertex id exceeds 32-bit range: " + line);
    max_id = std::max({max_id, u, v});
    edges.push_back(pack_edge(VertexId(u), VertexId(v)));
  }
  uint64_t n = std::max(vertex_count, edges.empty() ? 0 : max_id + 1);
  return undirect(n, std::move(edges), scale);
}

}  // namespace fggs
