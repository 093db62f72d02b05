#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fggs/graph.hpp"
#include "fggs/prng.hpp"

namespace fggs {

enum class GraphFamily { ER, RMAT, ForestFire };

inline const char* family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::ER: return "er";
    case GraphFamily::RMAT: return "rmat";
    case GraphFamily::ForestFire: return "ff";
  }
  return "?";
}

inline GraphFamily family_from_name(const std::string& s) {
  if (s == "er") return GraphFamily::ER;
  if (s == "rmat") return GraphFamily::RMAT;
  if (s == "ff" || s == "forestfire") return GraphFamily::ForestFire;
  throw parameter_error("unknown graph family: " + s);
}

struct GeneratorParams {
  GraphFamily family = GraphFamily::ER;
  int scale = 8;
  double er_avg_degree = 35.0;
  double rmat_a = 0.57, rmat_b = 0.19, rmat_c = 0.19;
  double rmat_avg_degree = 16.0;
  double ff_p_burn = 0.4;
  uint64_t seed = 1;
  // Desk-scale guard; generation beyond this raises capacity_error.
  int max_scale = 26;
};

inline void validate(const GeneratorParams& p) {
  if (p.scale < 0) throw parameter_error("scale must be non-negative");
  if (p.scale > p.max_scale)
    throw capacity_error("scale " + std::to_string(p.scale) +
                         " exceeds configured memory budget (max_scale=" +
                         std::to_string(p.max_scale) + ")");
  auto prob_ok = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!prob_ok(p.rmat_a) || !prob_ok(p.rmat_b) || !prob_ok(p.rmat_c) ||
      p.rmat_a + p.rmat_b + p.rmat_c > 1.0 + 1e-12)
    throw parameter_error("rmat quadrant probabilities invalid");
  if (!prob_ok(p.ff_p_burn)) throw parameter_error("ff_p_burn out of [0,1]");
  if (p.er_avg_degree < 0) throw parameter_error("er_avg_degree negative");
}

// Erdos-Renyi G(n, p) with p = er_avg_degree / n. Pair space is traversed
// row by row with geometric skipping, so cost is O(n + E) instead of O(n^2);
// each row draws from its own counter stream.
inline Graph generate_er(const GeneratorParams& params) {
  validate(params);
  uint64_t n = 1ull << params.scale;
  double p = n ? params.er_avg_degree / double(n) : 0.0;
  if (p > 1.0) p = 1.0;
  std::vector<uint64_t> edges;
  if (p > 0.0) {
    edges.reserve(size_t(p * double(n) * double(n - 1) / 2 * 1.05) + 16);
    for (uint64_t i = 0; i + 1 < n; ++i) {
      uint64_t cols = n - 1 - i;  // candidates j in (i, n)
      uint64_t pos = 0;
      uint64_t t = 0;
      while (true) {
        uint64_t skip = geometric_skip(
            u64_to_double(hash3(params.seed, i, t++)), p);
        if (skip >= cols - pos) break;
        pos += skip;
        edges.push_back(pack_edge(VertexId(i), VertexId(i + 1 + pos)));
        pos++;
        if (pos >= cols) break;
      }
    }
  }
  return undirect(n, std::move(edges), params.scale);
}

// Reference O(n^2) sampler used to property-test the skipping construction.
inline Graph generate_er_naive(const GeneratorParams& params) {
  validate(params);
  uint64_t n = 1ull << params.scale;
  double p = n ? params.er_avg_degree / double(n) : 0.0;
  std::vector<uint64_t> edges;
  Rng rng(splitmix64(params.seed));
  for (uint64_t i = 0; i + 1 < n; ++i)
    for (uint64_t j = i + 1; j < n; ++j)
      if (rng.next_double() < p) edges.push_back(pack_edge(VertexId(i), VertexId(j)));
  return undirect(n, std::move(edges), params.scale);
}

// Graph500-style recursive quadrant sampling, no per-level noise. Draws
// n * rmat_avg_degree / 2 directed samples, then undirects and deduplicates.
inline Graph generate_rmat(const GeneratorParams& params) {
  validate(params);
  uint64_t n = 1ull << params.scale;
  uint64_t samples = uint64_t(std::llround(double(n) * params.rmat_avg_degree / 2.0));
  double a = params.rmat_a, b = params.rmat_b, c = params.rmat_c;
  std::vector<uint64_t> edges;
  edges.reserve(samples);
  for (uint64_t e = 0; e < samples; ++e) {
    uint64_t u = 0, v = 0;
    for (int lvl = 0; lvl < params.scale; ++lvl) {
      double r = u64_to_double(hash3(params.seed, e, uint64_t(lvl)));
      int quad = r < a ? 0 : r < a + b ? 1 : r < a + b + c ? 2 : 3;
      u = (u << 1) | uint64_t(quad >> 1);
      v = (v << 1) | uint64_t(quad & 1);
    }
    edges.push_back(pack_edge(VertexId(u), VertexId(v)));
  }
  return undirect(n, std::move(edges), params.scale);
}

// Forest fire (Leskovec): sequential arrivals, uniform ambassador, recursive
// burning with geometric fan-out at p_burn. Burning is direction-blind: each
// burned vertex draws one geometric count and spreads over the union of its
// in- and out-neighbors, which keeps the branching factor p/(1-p) subcritical
// at the 0.4 default. The visited set bounds every burn.
inline Graph generate_forest_fire(const GeneratorParams& params) {
  validate(params);
  uint64_t n = 1ull << params.scale;
  std::vector<std::vector<VertexId>> adj(n);  // both directions merged
  std::vector<uint64_t> edges;
  std::vector<uint32_t> visited_epoch(n, 0);
  uint32_t epoch = 0;
  std::vector<VertexId> queue, burned, picks;
  for (uint64_t v = 1; v < n; ++v) {
    Rng rng(hash3(params.seed, v, 0));
    VertexId amb = VertexId(rng.next_below(v));
    epoch++;
    visited_epoch[amb] = epoch;
    visited_epoch[v] = epoch;  // never burn back into the newcomer
    queue.assign(1, amb);
    burned.assign(1, amb);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      VertexId u = queue[qi];
      uint64_t want = geometric_skip(rng.next_double(), 1.0 - params.ff_p_burn);
      if (want == 0) continue;
      picks.clear();
      for (VertexId w : adj[u])
        if (visited_epoch[w] != epoch) picks.push_back(w);
      // partial Fisher-Yates for the first `want` picks
      uint64_t take = std::min<uint64_t>(want, picks.size());
      for (uint64_t k = 0; k < take; ++k) {
        uint64_t j = k + rng.next_below(picks.size() - k);
        std::swap(picks[k], picks[j]);
        VertexId w = picks[k];
        visited_epoch[w] = epoch;
        queue.push_back(w);
        burned.push_back(w);
      }
    }
    for (VertexId b : burned) {
      adj[v].push_back(b);
      adj[b].push_back(VertexId(v));
      edges.push_back(pack_edge(VertexId(v), b));
    }
  }
  return undirect(n, std::move(edges), params.scale);
}

inline Graph generate(const GeneratorParams& params) {
  switch (params.family) {
    case GraphFamily::ER: return generate_er(params);
    case GraphFamily::RMAT: return generate_rmat(params);
    case GraphFamily::ForestFire: return generate_forest_fire(params);
  }
  throw parameter_error("unknown family");
}

}  // namespace fggs
