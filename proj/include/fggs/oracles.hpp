#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fggs/graph.hpp"

namespace fggs {

constexpr int64_t kUnreached = -1;

// Textbook queue BFS.
inline std::vector<int64_t> seq_bfs_oracle(const Graph& g, VertexId source) {
  if (uint64_t(source) >= g.vertex_count)
    throw parameter_error("bfs source out of range");
  std::vector<int64_t> dist(g.vertex_count, kUnreached);
  std::vector<VertexId> queue{source};
  dist[source] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    VertexId v = queue[qi];
    for (VertexId w : g.neighbors(v))
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

struct PowerIterationResult {
  std::vector<double> scores;  // normalized to sum 1
  uint64_t iterations = 0;
};

// Dense synchronous power iteration with teleportation; dangling vertices
// hold teleport-only mass and send nothing. Stops when the max-norm score
// change drops below tol. Final scores are normalized to sum 1.
inline PowerIterationResult power_iteration_oracle(const Graph& g, double tol,
                                                   double alpha = 0.85,
                                                   uint64_t max_iters = 100000) {
  if (tol <= 0) throw parameter_error("tol must be positive");
  uint64_t n = g.vertex_count;
  PowerIterationResult r;
  if (n == 0) return r;
  std::vector<double> x(n, 1.0 / double(n)), nx(n);
  while (r.iterations < max_iters) {
    double teleport = (1.0 - alpha) / double(n);
    std::fill(nx.begin(), nx.end(), teleport);
    for (uint64_t v = 0; v < n; ++v) {
      uint64_t d = g.degree(VertexId(v));
      if (d == 0) continue;
      double share = alpha * x[v] / double(d);
      for (VertexId w : g.neighbors(VertexId(v))) nx[w] += share;
    }
    r.iterations++;
    double delta = 0.0;
    for (uint64_t v = 0; v < n; ++v)
      delta = std::max(delta, std::abs(nx[v] - x[v]));
    x.swap(nx);
    if (delta < tol) break;
  }
  double sum = 0.0;
  for (double s : x) sum += s;
  for (double& s : x) s /= sum;
  r.scores = std::move(x);
  return r;
}

struct SeqDataDrivenResult {
  std::vector<double> scores;  // normalized
  uint64_t iterations = 0;
  uint64_t edges_traversed = 0;
  std::vector<uint64_t> active_volume;  // per iteration, sum of active degrees
  std::vector<uint64_t> active_count;
  bool capped = false;
};

// Sequential reference of the data-driven recurrence: active vertices pull an
// exact recompute from current neighbor scores; neighbors accumulate the
// resulting residual and activate once it crosses tol. Residuals are never
// dropped, only deferred.
inline SeqDataDrivenResult seq_data_driven_pagerank(
    const Graph& g, double tol, uint64_t max_iters = 10000,
    double alpha = 0.85) {
  if (tol <= 0) throw parameter_error("tol must be positive");
  uint64_t n = g.vertex_count;
  SeqDataDrivenResult r;
  if (n == 0) return r;
  std::vector<double> x(n, 1.0 / double(n)), residual(n, 0.0);
  std::vector<uint8_t> active(n, 1);
  std::vector<double> snapshot;
  while (r.iterations < max_iters) {
    uint64_t acount = 0, avolume = 0;
    snapshot = x;
    std::vector<std::pair<VertexId, double>> deltas;
    for (uint64_t v = 0; v < n; ++v) {
      if (!active[v]) continue;
      acount++;
      uint64_t d = g.degree(VertexId(v));
      avolume += d;
      double s = (1.0 - alpha) / double(n);
      for (VertexId w : g.neighbors(VertexId(v))) {
        uint64_t dw = g.degree(w);
        if (dw) s += alpha * snapshot[w] / double(dw);
      }
      r.edges_traversed += d;
      double delta = s - x[v];
      x[v] = s;
      residual[v] = 0.0;
      if (delta != 0.0 && d) deltas.emplace_back(VertexId(v), delta);
    }
    if (acount == 0) break;
    r.active_count.push_back(acount);
    r.active_volume.push_back(avolume);
    r.iterations++;
    for (auto [v, delta] : deltas) {
      double inc = alpha * std::abs(delta) / double(g.degree(v));
      for (VertexId w : g.neighbors(v)) residual[w] += inc;
    }
    bool any = false;
    for (uint64_t v = 0; v < n; ++v) {
      active[v] = residual[v] >= tol;
      any |= bool(active[v]);
    }
    if (!any) break;
    if (r.iterations >= max_iters) r.capped = true;
  }
  double sum = 0.0;
  for (double s : x) sum += s;
  for (double& s : x) s /= sum;
  r.scores = std::move(x);
  return r;
}

}  // namespace fggs
