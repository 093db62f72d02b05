#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fggs/graph.hpp"
#include "fggs/oracles.hpp"
#include "fggs/sim.hpp"
#include "fggs/split.hpp"

namespace fggs {

// Bitmask active set over masters, plus the counts the kernels track.
struct ActiveSet {
  std::vector<uint64_t> bits;
  uint64_t active_count = 0;
  uint64_t active_volume = 0;  // sum of degrees

  explicit ActiveSet(uint64_t n) : bits((n + 63) / 64, 0) {}
  void add(uint64_t v, uint64_t degree) {
    uint64_t& word = bits[v >> 6];
    uint64_t mask = 1ull << (v & 63);
    if (!(word & mask)) {
      word |= mask;
      active_count++;
      active_volume += degree;
    }
  }
  bool contains(uint64_t v) const {
    return bits[v >> 6] >> (v & 63) & 1;
  }
};

// Uniform view over Graph and SplitGraph: kernels iterate masters, the
// machine iterates chunks.
class MachineGraph {
 public:
  explicit MachineGraph(const Graph& g) : topo_(&g), split_(nullptr) {}
  explicit MachineGraph(const SplitGraph& s) : topo_(&s.base), split_(&s) {}

  const Graph& topo() const { return *topo_; }
  bool is_split() const { return split_ != nullptr; }
  uint64_t master_count() const {
    return split_ ? split_->master_count : topo_->vertex_count;
  }
  uint64_t chunk_vertex_count() const { return topo_->vertex_count; }
  VertexId master_of(VertexId chunk) const {
    return split_ ? split_->master_of[chunk] : chunk;
  }
  uint32_t chunk_count(VertexId master) const {
    return split_ ? split_->chunk_count(master) : 1;
  }
  VertexId chunk_id(VertexId master, uint32_t k) const {
    return split_ ? split_->chunk_id(master, k) : master;
  }
  uint64_t master_degree(VertexId master) const {
    if (!split_) return topo_->degree(master);
    uint64_t d = 0;
    for (uint32_t k = 0; k < chunk_count(master); ++k)
      d += topo_->degree(chunk_id(master, k));
    return d;
  }
  uint64_t undirected_edge_count() const { return topo_->undirected_edge_count; }

 private:
  const Graph* topo_;
  const SplitGraph* split_;
};

struct PRResult {
  std::vector<double> scores;  // per original vertex, normalized to sum 1
  uint64_t iterations = 0;
  uint64_t edges_traversed = 0;  // logical directed traversals
  double gteps = 0.0;
  double effective_gteps = 0.0;  // data-driven only
  bool capped = false;
  SimResult sim;
};

struct BFSResult {
  std::vector<int64_t> distance;  // per original vertex, -1 unreached
  struct Frontier {
    uint64_t level, vertex_count, edge_volume;
  };
  std::vector<Frontier> frontiers;
  uint64_t edges_traversed = 0;
  double gteps = 0.0;  // Graph500 convention: reached undirected edges / s
  SimResult sim;
};

struct KernelOptions {
  double alpha = 0.85;
  double tol = 0.0;  // 0 -> 1/|V|
  uint64_t max_iters = 0;  // 0 -> unbounded (safety cap applies)
  double switch_fraction = 0.10;
  uint64_t iteration_cap = 10000;
  uint64_t seed = 0;
};

// Iterations synchronous push PR needs to reach max-update < tol; host-side
// replay over masters, used for the effective-GTEPS work baseline.
inline uint64_t push_pr_iterations(const MachineGraph& mg, double tol,
                                   double alpha, uint64_t cap) {
  uint64_t n = mg.master_count();
  std::vector<double> x(n, 1.0 / double(n)), nx(n);
  double teleport = (1.0 - alpha) / double(n);
  const Graph& topo = mg.topo();
  uint64_t iters = 0;
  while (iters < cap) {
    std::fill(nx.begin(), nx.end(), teleport);
    for (uint64_t c = 0; c < mg.chunk_vertex_count(); ++c) {
      VertexId m = mg.master_of(VertexId(c));
      uint64_t d = mg.master_degree(m);
      if (d == 0) continue;
      double share = alpha * x[m] / double(d);
      for (VertexId w : topo.neighbors(VertexId(c)))
        nx[mg.master_of(w)] += share;
    }
    iters++;
    double delta = 0.0;
    for (uint64_t v = 0; v < n; ++v)
      delta = std::max(delta, std::abs(nx[v] - x[v]));
    x.swap(nx);
    if (delta < tol) break;
  }
  return iters;
}

namespace detail {

// Task kinds used by the kernel programs.
enum : uint32_t {
  kFanoutResume = kFirstUserTaskKind,  // adjacency arrived: emit updates
  kChunkGo,                            // master -> chunk dispatch
  kPrUpdate,                           // a = target chunk, x = contribution
  kPrFlush,                            // a = chunk: forward partial to master
  kPrCombine,                          // a = master, x = partial
  kBfsUpdate,                          // a = target chunk, b = level
  kBfsForward,                         // a = master,  b = level
  kPullScanResume,                     // a = master
  kDdGatherResume,                     // a = chunk
  kDdNotify,                           // a = master, x = residual increment
  kLbChunk,                            // a = vertex, b = (start<<32)|len
  kLbFanout,                           // a = vertex, b = (start<<32)|len
};

struct LaneMap {
  std::vector<uint32_t> chunk_owner;            // chunk -> lane
  std::vector<uint32_t> owner;                  // master -> lane
  std::vector<std::vector<VertexId>> owned;     // lane -> owned masters

  LaneMap(const MachineGraph& mg, const MachineConfig& cfg) {
    chunk_owner.resize(mg.chunk_vertex_count());
    for (uint64_t c = 0; c < mg.chunk_vertex_count(); ++c)
      chunk_owner[c] = uint32_t(map_vertex_lane(c, cfg));
    owner.resize(mg.master_count());
    owned.resize(cfg.total_lanes());
    for (uint64_t v = 0; v < mg.master_count(); ++v) {
      owner[v] = chunk_owner[v];  // masters own their chunk-0 id
      owned[owner[v]].push_back(VertexId(v));
    }
  }
};

// Charges ceil(words/8) DRAM issues and blocks once for the roundtrip; the
// resume handler sees the fetched range. Split-transaction chunked fetch.
inline void dram_fetch(Ctx& ctx, const MachineConfig& cfg, uint64_t location,
                       uint64_t words, const TaskMsg& resume) {
  uint64_t issues = words ? (words + 7) / 8 : 1;
  for (uint64_t i = 1; i < issues; ++i) {
    ctx.charge(cfg.cost_dram_issue);
  }
  ctx.dram_read(location, uint32_t(std::min<uint64_t>(words ? words : 1, 8)),
                resume);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Push PageRank: every connected vertex pushes alpha*score/degree to each
// neighbor every iteration; receivers merge through the software cache and
// partial sums reduce from chunks to masters. Stops when the max score change
// drops below tol.
inline PRResult push_pagerank(const MachineGraph& mg, const MachineConfig& cfg,
                              KernelOptions opt = {}) {
  using namespace detail;
  const uint64_t n = mg.master_count();
  const double tol = opt.tol > 0 ? opt.tol : 1.0 / double(n);
  const double alpha = opt.alpha;
  Sim sim(cfg, opt.seed);
  LaneMap lanes(mg, cfg);

  std::vector<double> x(n, 1.0 / double(n));
  std::vector<double> partial(mg.chunk_vertex_count(), 0.0);
  std::vector<double> share(n, 0.0);  // alpha * x / deg, per master

  const Graph& topo = mg.topo();
  sim.set_dispatcher([&](Ctx& ctx, const TaskMsg& msg) {
    switch (msg.kind) {
      case kChunkGo: {
        VertexId c = VertexId(msg.a);
        TaskMsg resume;
        resume.kind = kFanoutResume;
        resume.instr = 1;
        resume.a = msg.a;
        resume.x = msg.x;
        dram_fetch(ctx, cfg, c, topo.degree(c), resume);
        break;
      }
      case kFanoutResume: {
        VertexId c = VertexId(msg.a);
        auto nb = topo.neighbors(c);
        TaskMsg up;
        up.kind = kPrUpdate;
        up.instr = cfg.edge_update_instr;
        up.x = msg.x;
        for (VertexId w : nb) {
          up.a = w;
          ctx.send(lanes.chunk_owner[w], up);
        }
        ctx.count_edges(nb.size());
        break;
      }
      case kPrUpdate: {
        ctx.cache_touch(msg.a);
        partial[msg.a] += msg.x;
        break;
      }
      case kPrFlush: {
        VertexId c = VertexId(msg.a);
        TaskMsg comb;
        comb.kind = kPrCombine;
        comb.instr = 2;
        comb.a = mg.master_of(c);
        comb.x = partial[c];
        partial[c] = 0.0;
        ctx.send(lanes.owner[comb.a], comb);
        break;
      }
      case kPrCombine: {
        partial[msg.a] += msg.x;
        break;
      }
      default:
        throw simulation_error("push_pagerank: unexpected task kind");
    }
  });

  PRResult res;
  bool converged = false;
  uint64_t cap = opt.max_iters ? opt.max_iters : opt.iteration_cap;
  WorkerRange all{0, uint32_t(cfg.total_lanes())};
  while (res.iterations < cap) {
    for (uint64_t v = 0; v < n; ++v) {
      uint64_t d = mg.master_degree(VertexId(v));
      share[v] = d ? alpha * x[v] / double(d) : 0.0;
    }
    sim.parallel_for(0, sim.lane_count(), all,
                     [&](Ctx& ctx, uint64_t lane, WorkerRange) {
      for (VertexId v : lanes.owned[lane]) {
        uint64_t d = mg.master_degree(v);
        if (d == 0) continue;
        ctx.charge(cfg.cost_thread_create + cfg.cost_send_message +
                   cfg.vertex_task_instr);
        if (mg.chunk_count(v) == 1) {
          TaskMsg resume;
          resume.kind = kFanoutResume;
          resume.instr = 1;
          resume.a = v;
          resume.x = share[v];
          dram_fetch(ctx, cfg, v, d, resume);
        } else {
          TaskMsg go;
          go.kind = kChunkGo;
          go.instr = cfg.vertex_task_instr;
          go.x = share[v];
          for (uint32_t k = 0; k < mg.chunk_count(v); ++k) {
            go.a = mg.chunk_id(v, k);
            ctx.send(lanes.chunk_owner[go.a], go);
          }
        }
      }
    });
    sim.drain_calendar();
    if (mg.is_split()) {
      for (uint64_t c = n; c < mg.chunk_vertex_count(); ++c) {
        if (partial[c] == 0.0) continue;
        TaskMsg flush;
        flush.kind = kPrFlush;
        flush.instr = 1;
        flush.a = c;
        sim.seed_task(lanes.chunk_owner[c], flush);
      }
    }
    res.iterations++;
    sim.run_phase("pr_iter_" + std::to_string(res.iterations));
    sim.sync_barrier();

    double teleport = (1.0 - alpha) / double(n);
    double delta = 0.0;
    for (uint64_t v = 0; v < n; ++v) {
      double nv = teleport + partial[v];
      delta = std::max(delta, std::abs(nv - x[v]));
      x[v] = nv;
      partial[v] = 0.0;
    }
    for (uint64_t c = n; c < mg.chunk_vertex_count(); ++c) partial[c] = 0.0;
    if (delta < tol) {
      converged = true;
      break;
    }
  }
  res.capped = !converged;

  double sum = 0.0;
  for (double s : x) sum += s;
  for (double& s : x) s /= sum;
  res.scores = std::move(x);
  res.sim = sim.finish();
  res.edges_traversed = res.sim.total_edges_processed();
  if (res.sim.elapsed_seconds > 0)
    res.gteps = double(res.edges_traversed) / 1e9 / res.sim.elapsed_seconds;
  return res;
}

inline PRResult push_pagerank(const Graph& g, const MachineConfig& cfg,
                              KernelOptions opt = {}) {
  return push_pagerank(MachineGraph(g), cfg, opt);
}
inline PRResult push_pagerank(const SplitGraph& s, const MachineConfig& cfg,
                              KernelOptions opt = {}) {
  return push_pagerank(MachineGraph(s), cfg, opt);
}

// ---------------------------------------------------------------------------
// Data-driven PageRank: active vertices pull an exact recompute from current
// neighbor scores (remote gathers, no software cache), then notify neighbors
// with the residual increment; a vertex joins the next active set once its
// accumulated residual reaches tol. Deferred residuals are kept, not lost.
inline PRResult data_driven_pagerank(const MachineGraph& mg,
                                     const MachineConfig& cfg,
                                     KernelOptions opt = {}) {
  using namespace detail;
  const uint64_t n = mg.master_count();
  const double tol = opt.tol > 0 ? opt.tol : 1.0 / double(n);
  const double alpha = opt.alpha;
  Sim sim(cfg, opt.seed);
  LaneMap lanes(mg, cfg);
  const Graph& topo = mg.topo();

  std::vector<double> x(n, 1.0 / double(n)), snapshot, residual(n, 0.0);
  std::vector<double> delta_of(n, 0.0);
  std::vector<uint8_t> active(n, 1);

  sim.set_dispatcher([&](Ctx& ctx, const TaskMsg& msg) {
    switch (msg.kind) {
      case kChunkGo: {
        VertexId c = VertexId(msg.a);
        TaskMsg resume;
        resume.kind = kDdGatherResume;
        resume.instr = 1;
        resume.a = msg.a;
        resume.b = msg.b;  // master
        dram_fetch(ctx, cfg, c, topo.degree(c), resume);
        break;
      }
      case kDdGatherResume: {
        VertexId c = VertexId(msg.a);
        VertexId m = VertexId(msg.b);
        auto nb = topo.neighbors(c);
        // per-neighbor score gather: one random-address read each
        for (size_t i = 0; i < nb.size(); ++i) {
          ctx.charge(cfg.gather_edge_instr + cfg.cost_dram_issue);
        }
        ctx.count_edges(nb.size());
        double d = double(mg.master_degree(m));
        double inc = alpha * std::abs(delta_of[m]) / d;
        if (inc != 0.0) {
          TaskMsg note;
          note.kind = kDdNotify;
          note.instr = 2;
          note.x = inc;
          for (VertexId w : nb) {
            note.a = mg.master_of(w);
            ctx.send(lanes.owner[note.a], note);
          }
        }
        break;
      }
      case kDdNotify: {
        residual[msg.a] += msg.x;
        break;
      }
      default:
        throw simulation_error("data_driven_pagerank: unexpected task kind");
    }
  });

  PRResult res;
  uint64_t cap = opt.max_iters ? opt.max_iters : opt.iteration_cap;
  WorkerRange all{0, uint32_t(cfg.total_lanes())};
  double teleport = (1.0 - alpha) / double(n);
  while (res.iterations < cap) {
    bool any_active = false;
    for (uint64_t v = 0; v < n; ++v) any_active |= bool(active[v]);
    if (!any_active) break;
    snapshot = x;
    // exact recompute for every active master; deterministic host math
    for (uint64_t v = 0; v < n; ++v) {
      if (!active[v]) continue;
      double s = teleport;
      if (mg.chunk_count(v) == 1) {
        for (VertexId w : topo.neighbors(VertexId(v))) {
          uint64_t dw = mg.master_degree(mg.master_of(w));
          if (dw) s += alpha * snapshot[mg.master_of(w)] / double(dw);
        }
      } else {
        for (uint32_t k = 0; k < mg.chunk_count(v); ++k)
          for (VertexId w : topo.neighbors(mg.chunk_id(VertexId(v), k))) {
            uint64_t dw = mg.master_degree(mg.master_of(w));
            if (dw) s += alpha * snapshot[mg.master_of(w)] / double(dw);
          }
      }
      delta_of[v] = s - x[v];
      x[v] = s;
      residual[v] = 0.0;
    }
    sim.parallel_for(0, sim.lane_count(), all,
                     [&](Ctx& ctx, uint64_t lane, WorkerRange) {
      for (VertexId v : lanes.owned[lane]) {
        if (!active[v]) continue;
        ctx.charge(cfg.cost_thread_create + cfg.cost_send_message +
                   cfg.vertex_task_instr);
        TaskMsg go;
        go.kind = kChunkGo;
        go.instr = mg.chunk_count(v) == 1 ? 0u : cfg.vertex_task_instr;
        go.b = v;
        for (uint32_t k = 0; k < mg.chunk_count(v); ++k) {
          go.a = mg.chunk_id(v, k);
          if (mg.chunk_count(v) == 1) {
            TaskMsg resume;
            resume.kind = kDdGatherResume;
            resume.instr = 1;
            resume.a = go.a;
            resume.b = v;
            dram_fetch(ctx, cfg, go.a, topo.degree(VertexId(go.a)), resume);
          } else {
            ctx.send(lanes.chunk_owner[go.a], go);
          }
        }
      }
    });
    res.iterations++;
    sim.run_phase("dd_iter_" + std::to_string(res.iterations));
    sim.sync_barrier();
    for (uint64_t v = 0; v < n; ++v) {
      if (active[v]) delta_of[v] = 0.0;
      active[v] = residual[v] >= tol;
    }
  }
  {
    bool any = false;
    for (uint64_t v = 0; v < n; ++v) any |= bool(active[v]);
    res.capped = any;
  }

  double sum = 0.0;
  for (double s : x) sum += s;
  for (double& s : x) s /= sum;
  res.scores = std::move(x);
  res.sim = sim.finish();
  res.edges_traversed = res.sim.total_edges_processed();
  if (res.sim.elapsed_seconds > 0)
    res.gteps = double(res.edges_traversed) / 1e9 / res.sim.elapsed_seconds;
  // Effective GTEPS credits the work reduction: push-PR logical work to the
  // same tolerance over the data-driven runtime. Left 0 when capped, since
  // the normalization is undefined then.
  if (res.sim.elapsed_seconds > 0 && !res.capped) {
    uint64_t push_iters = push_pr_iterations(mg, tol, alpha, opt.iteration_cap);
    uint64_t push_work = push_iters * 2 * mg.undirected_edge_count();
    res.effective_gteps =
        double(push_work) / 1e9 / res.sim.elapsed_seconds;
  }
  return res;
}

inline PRResult data_driven_pagerank(const Graph& g, const MachineConfig& cfg,
                                     KernelOptions opt = {}) {
  return data_driven_pagerank(MachineGraph(g), cfg, opt);
}
inline PRResult data_driven_pagerank(const SplitGraph& s,
                                     const MachineConfig& cfg,
                                     KernelOptions opt = {}) {
  return data_driven_pagerank(MachineGraph(s), cfg, opt);
}

// ---------------------------------------------------------------------------
// Shared driver for the three BFS variants. Level-synchronous: each level is
// one calendar drain; the distributed frontier lives in per-lane lists and
// settles at the owning lane, so termination is "all local frontiers empty".

namespace detail {

enum class BfsMode { Push, PushPull, LoadBalanced };

struct BfsDriver {
  const MachineGraph& mg;
  const MachineConfig& cfg;
  Sim sim;
  LaneMap lanes;
  std::vector<int64_t> dist;
  std::vector<uint8_t> chunk_seen;  // split graphs: chunk already forwarded
  std::vector<std::vector<VertexId>> frontier, next;
  std::vector<uint64_t> frontier_scratch;  // lb: weight prefix
  std::vector<VertexId> frontier_flat;
  ActiveSet* in_frontier = nullptr;  // pull levels only
  uint64_t level = 0;

  BfsDriver(const MachineGraph& mg_, const MachineConfig& cfg_, uint64_t seed)
      : mg(mg_), cfg(cfg_), sim(cfg_, seed), lanes(mg_, cfg_),
        dist(mg_.master_count(), kUnreached),
        chunk_seen(mg_.is_split() ? mg_.chunk_vertex_count() : 0, 0),
        frontier(cfg_.total_lanes()), next(cfg_.total_lanes()) {}

  void settle(VertexId m) {
    if (dist[m] != kUnreached) return;
    dist[m] = int64_t(level) + 1;
    next[lanes.owner[m]].push_back(m);
  }

  void send_updates(Ctx& ctx, std::span<const VertexId> nb) {
    TaskMsg up;
    up.kind = kBfsUpdate;
    up.instr = cfg.edge_update_instr;
    for (VertexId w : nb) {
      up.a = w;
      ctx.send(lanes.chunk_owner[w], up);
    }
    ctx.count_edges(nb.size());
  }

  void handle(Ctx& ctx, const TaskMsg& msg) {
    const Graph& topo = mg.topo();
    switch (msg.kind) {
      case kChunkGo: {
        TaskMsg resume;
        resume.kind = kFanoutResume;
        resume.instr = 1;
        resume.a = msg.a;
        dram_fetch(ctx, cfg, msg.a, topo.degree(VertexId(msg.a)), resume);
        break;
      }
      case kFanoutResume:
        send_updates(ctx, topo.neighbors(VertexId(msg.a)));
        break;
      case kBfsUpdate: {
        VertexId x = VertexId(msg.a);
        VertexId m = mg.master_of(x);
        if (dist[m] != kUnreached) return;
        if (!mg.is_split() || x == m) {
          settle(m);
        } else {
          if (chunk_seen[x]) return;
          chunk_seen[x] = 1;
          TaskMsg fwd;
          fwd.kind = kBfsForward;
          fwd.instr = 2;
          fwd.a = m;
          ctx.send(lanes.owner[m], fwd);
        }
        break;
      }
      case kBfsForward:
        settle(VertexId(msg.a));
        break;
      case kPullScanResume: {
        VertexId m = VertexId(msg.a);
        uint64_t scanned = 0;
        bool found = false;
        for (uint32_t k = 0; k < mg.chunk_count(m) && !found; ++k) {
          for (VertexId w : topo.neighbors(mg.chunk_id(m, k))) {
            scanned++;
            if (in_frontier->contains(mg.master_of(w))) {
              found = true;
              break;
            }
          }
        }
        ctx.charge(scanned * cfg.pull_scan_instr +
                   (scanned + 3) / 4 * cfg.cost_dram_issue);
        ctx.count_edges(scanned);
        if (found) settle(m);
        break;
      }
      case kLbChunk: {
        TaskMsg resume;
        resume.kind = kLbFanout;
        resume.instr = 1;
        resume.a = msg.a;
        resume.b = msg.b;
        uint64_t len = msg.b & 0xffffffffu;
        dram_fetch(ctx, cfg, msg.a, len, resume);
        break;
      }
      case kLbFanout: {
        auto nb = mg.topo().neighbors(VertexId(msg.a));
        uint64_t start = msg.b >> 32, len = msg.b & 0xffffffffu;
        send_updates(ctx, nb.subspan(start, len));
        break;
      }
      default:
        throw simulation_error("bfs: unexpected task kind");
    }
  }

  void push_level() {
    WorkerRange all{0, uint32_t(cfg.total_lanes())};
    sim.parallel_for(0, sim.lane_count(), all,
                     [this](Ctx& ctx, uint64_t lane, WorkerRange) {
      for (VertexId v : frontier[lane]) {
        uint64_t d = mg.master_degree(v);
        if (d == 0) continue;
        ctx.charge(cfg.cost_thread_create + cfg.cost_send_message +
                   cfg.vertex_task_instr);
        if (mg.chunk_count(v) == 1) {
          TaskMsg resume;
          resume.kind = kFanoutResume;
          resume.instr = 1;
          resume.a = v;
          dram_fetch(ctx, cfg, v, d, resume);
        } else {
          TaskMsg go;
          go.kind = kChunkGo;
          go.instr = cfg.vertex_task_instr;
          for (uint32_t k = 0; k < mg.chunk_count(v); ++k) {
            go.a = mg.chunk_id(v, k);
            ctx.send(lanes.chunk_owner[go.a], go);
          }
        }
      }
    });
    sim.run_phase("bfs_push_" + std::to_string(level));
    sim.sync_barrier();
  }

  void pull_level(ActiveSet& fr) {
    in_frontier = &fr;
    WorkerRange all{0, uint32_t(cfg.total_lanes())};
    sim.parallel_for(0, sim.lane_count(), all,
                     [this](Ctx& ctx, uint64_t lane, WorkerRange) {
      for (VertexId m : lanes.owned[lane]) {
        if (dist[m] != kUnreached || mg.master_degree(m) == 0) continue;
        ctx.charge(cfg.cost_thread_create + cfg.cost_send_message +
                   cfg.vertex_task_instr);
        TaskMsg resume;
        resume.kind = kPullScanResume;
        resume.instr = 1;
        resume.a = m;
        // first block fetch; the scan charges the rest
        ctx.dram_read(m, 8, resume);
      }
    });
    sim.run_phase("bfs_pull_" + std::to_string(level));
    sim.sync_barrier();
    in_frontier = nullptr;
  }

  void lb_level() {
    frontier_flat.clear();
    for (auto& f : frontier)
      frontier_flat.insert(frontier_flat.end(), f.begin(), f.end());
    uint64_t F = frontier_flat.size();
    frontier_scratch.assign(F + 1, 0);
    for (uint64_t i = 0; i < F; ++i)
      frontier_scratch[i + 1] =
          frontier_scratch[i] + mg.master_degree(frontier_flat[i]);
    WorkerRange all{0, uint32_t(cfg.total_lanes())};
    sim.load_balanced_parallel_for(
        0, F, frontier_scratch, all,
        [this](Ctx& ctx, uint64_t i, WorkerRange w) {
          VertexId v = frontier_flat[i];
          uint64_t d = mg.master_degree(v);
          if (d == 0) return;
          ctx.charge(cfg.vertex_task_instr);
          uint32_t slices = uint32_t(std::min<uint64_t>(w.count, d));
          if (slices <= 1) {
            TaskMsg resume;
            resume.kind = kLbFanout;
            resume.instr = 1;
            resume.a = v;
            resume.b = d;  // start 0, len d
            dram_fetch(ctx, cfg, v, d, resume);
            return;
          }
          TaskMsg chunk;
          chunk.kind = kLbChunk;
          chunk.instr = 2;
          chunk.a = v;
          for (uint32_t k = 0; k < slices; ++k) {
            uint64_t start = d * k / slices;
            uint64_t stop = d * (k + 1) / slices;
            chunk.b = (start << 32) | (stop - start);
            ctx.send(w.first + k, chunk);
          }
        });
    sim.run_phase("bfs_lbpush_" + std::to_string(level));
    sim.sync_barrier();
  }

  BFSResult run(VertexId source, BfsMode mode, const KernelOptions& opt) {
    if (uint64_t(source) >= mg.master_count())
      throw parameter_error("bfs source out of range");
    sim.set_dispatcher([this](Ctx& ctx, const TaskMsg& m) { handle(ctx, m); });
    dist[source] = 0;
    frontier[lanes.owner[source]].push_back(source);

    BFSResult res;
    uint64_t directed_edges = 2 * mg.undirected_edge_count();
    while (true) {
      uint64_t count = 0, volume = 0;
      for (auto& f : frontier)
        for (VertexId v : f) {
          count++;
          volume += mg.master_degree(v);
        }
      if (count == 0) break;
      res.frontiers.push_back({level, count, volume});
      if (mode == BfsMode::LoadBalanced) {
        lb_level();
      } else if (mode == BfsMode::PushPull &&
                 double(volume) > opt.switch_fraction * double(directed_edges)) {
        ActiveSet fr(mg.master_count());
        for (auto& f : frontier)
          for (VertexId v : f) fr.add(v, mg.master_degree(v));
        pull_level(fr);
      } else {
        push_level();
      }
      for (auto& f : frontier) f.clear();
      frontier.swap(next);
      level++;
    }

    res.distance = std::move(dist);
    res.sim = sim.finish();
    res.edges_traversed = res.sim.total_edges_processed();
    uint64_t reached_volume = 0;
    for (uint64_t v = 0; v < mg.master_count(); ++v)
      if (res.distance[v] != kUnreached) reached_volume += mg.master_degree(VertexId(v));
    if (res.sim.elapsed_seconds > 0)
      res.gteps = double(reached_volume / 2) / 1e9 / res.sim.elapsed_seconds;
    return res;
  }
};

}  // namespace detail

inline BFSResult push_bfs(const MachineGraph& mg, const MachineConfig& cfg,
                          VertexId source, KernelOptions opt = {}) {
  detail::BfsDriver d(mg, cfg, opt.seed);
  return d.run(source, detail::BfsMode::Push, opt);
}
inline BFSResult push_pull_bfs(const MachineGraph& mg, const MachineConfig& cfg,
                               VertexId source, KernelOptions opt = {}) {
  if (opt.switch_fraction <= 0 || opt.switch_fraction >= 1)
    throw parameter_error("switch_fraction must be in (0,1)");
  detail::BfsDriver d(mg, cfg, opt.seed);
  return d.run(source, detail::BfsMode::PushPull, opt);
}
inline BFSResult lb_push_bfs(const MachineGraph& mg, const MachineConfig& cfg,
                             VertexId source, KernelOptions opt = {}) {
  if (mg.is_split())
    throw parameter_error("lb_push_bfs runs on the unsplit graph");
  detail::BfsDriver d(mg, cfg, opt.seed);
  return d.run(source, detail::BfsMode::LoadBalanced, opt);
}

inline BFSResult push_bfs(const Graph& g, const MachineConfig& cfg,
                          VertexId source, KernelOptions opt = {}) {
  return push_bfs(MachineGraph(g), cfg, source, opt);
}
inline BFSResult push_bfs(const SplitGraph& s, const MachineConfig& cfg,
                          VertexId source, KernelOptions opt = {}) {
  return push_bfs(MachineGraph(s), cfg, source, opt);
}
inline BFSResult push_pull_bfs(const Graph& g, const MachineConfig& cfg,
                               VertexId source, KernelOptions opt = {}) {
  return push_pull_bfs(MachineGraph(g), cfg, source, opt);
}
inline BFSResult push_pull_bfs(const SplitGraph& s, const MachineConfig& cfg,
                               VertexId source, KernelOptions opt = {}) {
  return push_pull_bfs(MachineGraph(s), cfg, source, opt);
}
inline BFSResult lb_push_bfs(const Graph& g, const MachineConfig& cfg,
                             VertexId source, KernelOptions opt = {}) {
  return lb_push_bfs(MachineGraph(g), cfg, source, opt);
}

}  // namespace fggs
