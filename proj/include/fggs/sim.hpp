#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "fggs/common.hpp"
#include "fggs/machine.hpp"

namespace fggs {

// Small value payload carried by every simulated task (<= 8 words).
struct TaskMsg {
  uint32_t kind = 0;
  uint32_t instr = 0;  // cycles charged when the handler executes
  uint64_t a = 0, b = 0, c = 0, d = 0;
  double x = 0.0;
};

struct PhaseStats {
  std::string label;
  uint64_t work = 0;    // edges processed during the phase
  uint64_t cycles = 0;  // includes the closing barrier when one is charged
};

struct SimResult {
  uint64_t elapsed_cycles = 0;
  double elapsed_seconds = 0.0;
  std::vector<uint64_t> tasks_run, edges_processed, messages_sent, dram_ops,
      busy_cycles;
  std::vector<PhaseStats> phases;
  uint64_t cache_hits = 0, cache_misses = 0;

  uint64_t total_edges_processed() const {
    uint64_t s = 0;
    for (uint64_t e : edges_processed) s += e;
    return s;
  }
  uint64_t total(const std::vector<uint64_t>& v) const {
    uint64_t s = 0;
    for (uint64_t x : v) s += x;
    return s;
  }
};

class Sim;

// Handler-side view of the machine. All charges accumulate into the running
// task's duration; scheduled effects happen at the charge offset reached when
// the call was made.
class Ctx {
 public:
  Ctx(Sim& sim, uint32_t lane, uint64_t start)
      : sim_(sim), lane_(lane), start_(start) {}

  uint32_t lane() const { return lane_; }
  uint64_t now() const { return start_ + cost_; }
  void charge(uint64_t cycles) { cost_ += cycles; }
  uint64_t cost() const { return cost_; }

  void send(uint32_t target_lane, const TaskMsg& msg);
  void dram_read(uint64_t owner_vertex, uint32_t words, const TaskMsg& resume);
  void dram_write(uint64_t owner_vertex, uint32_t words);
  bool cache_touch(uint64_t key);
  void count_edges(uint64_t n);

 private:
  friend class Sim;
  Sim& sim_;
  uint32_t lane_;
  uint64_t start_;
  uint64_t cost_ = 0;
};

using TaskHandler = std::function<void(Ctx&, const TaskMsg&)>;

namespace detail {
constexpr uint32_t kKindParallelFor = 0;
constexpr uint32_t kKindParallelForLeafRun = 1;
}  // namespace detail

// Kernel task kinds must start here; lower values are machine-internal.
constexpr uint32_t kFirstUserTaskKind = 16;

// Contiguous lane range acting as the worker set of a parallel_for.
struct WorkerRange {
  uint32_t first = 0;
  uint32_t count = 0;
};

// Deterministic discrete-event simulator of the lane machine. Single logical
// timeline; ties broken by (time, destination lane, sender lane, sequence).
class Sim {
 public:
  Sim(const MachineConfig& cfg, uint64_t seed = 0)
      : cfg_(cfg), lanes_(cfg.total_lanes()), seed_(seed) {
    cfg_.check();
    if (cfg_.total_lanes() > (1ull << 24))
      throw capacity_error("lane count too large for desk-scale simulation");
  }

  const MachineConfig& config() const { return cfg_; }
  uint64_t seed() const { return seed_; }
  uint64_t now() const { return global_now_; }
  uint32_t lane_count() const { return uint32_t(lanes_.size()); }

  void set_dispatcher(TaskHandler h) { dispatcher_ = std::move(h); }

  // Schedules a root task at the current global time (driver side).
  void seed_task(uint32_t lane, const TaskMsg& msg) {
    push_event(global_now_, lane, lane, EventKind::Arrival, msg);
  }

  // Drains the calendar; the phase's cycles span from the previous global
  // time to the drained calendar's completion.
  void run_phase(const std::string& label) {
    uint64_t start = phase_start_;
    drain();
    phases_.push_back({label, phase_edges_, global_now_ - start});
    phase_edges_ = 0;
    phase_start_ = global_now_;
  }

  // Drains without closing a phase; for kernels that need an ordering point
  // mid-phase (e.g. partial-sum flushes after the edge updates settle).
  void drain_calendar() { drain(); }

  // Charges an inter-phase synchronization: binary reduction + broadcast tree
  // over lanes within each node and over nodes. Pure time advance.
  void sync_barrier() {
    global_now_ += barrier_cycles();
    phase_start_ = global_now_;
    if (!phases_.empty()) phases_.back().cycles += barrier_cycles_last_;
  }

  uint64_t barrier_cycles() {
    uint64_t intra = ceil_log2(cfg_.lanes_per_node) * cfg_.local_message_cycles();
    uint64_t inter = ceil_log2(cfg_.node_count) * cfg_.remote_message_cycles();
    barrier_cycles_last_ = 2 * (intra + inter);
    return barrier_cycles_last_;
  }

  SimResult finish() {
    SimResult r;
    r.elapsed_cycles = global_now_;
    r.elapsed_seconds = double(global_now_) / cfg_.clock_hz;
    r.tasks_run.resize(lanes_.size());
    r.edges_processed.resize(lanes_.size());
    r.messages_sent.resize(lanes_.size());
    r.dram_ops.resize(lanes_.size());
    r.busy_cycles.resize(lanes_.size());
    for (size_t i = 0; i < lanes_.size(); ++i) {
      r.tasks_run[i] = lanes_[i].tasks_run;
      r.edges_processed[i] = lanes_[i].edges;
      r.messages_sent[i] = lanes_[i].sends;
      r.dram_ops[i] = lanes_[i].dram_ops;
      r.busy_cycles[i] = lanes_[i].busy_cycles;
    }
    r.phases = phases_;
    r.cache_hits = cache_hits_;
    r.cache_misses = cache_misses_;
    return r;
  }

  uint32_t owner_lane(uint64_t vertex) const {
    return uint32_t(map_vertex_lane(vertex, cfg_));
  }
  uint32_t node_of_lane(uint32_t lane) const {
    return lane / cfg_.lanes_per_node;
  }

  // ---- parallel_for ---------------------------------------------------
  //
  // Divide and conquer over [begin, end): each split spawns two child tasks
  // (thread-create plus one send each) and divides the workers between the
  // halves in proportion to their weight. With unit weights this is the plain
  // parallel_for. Once a subrange is down to one worker the remaining spawns
  // are local to that lane. Leaves call body(ctx, index, leaf_workers).

  struct PFPlan {
    std::function<void(Ctx&, uint64_t, WorkerRange)> body;
    const uint64_t* weight_prefix = nullptr;  // size end+1, or null for unit
    uint64_t begin = 0, end = 0;
  };

  // Returns total weight of [lo, hi) under the plan.
  uint64_t plan_weight(const PFPlan& p, uint64_t lo, uint64_t hi) const {
    if (!p.weight_prefix) return hi - lo;
    return p.weight_prefix[hi] - p.weight_prefix[lo];
  }

  void parallel_for(uint64_t begin, uint64_t end, WorkerRange workers,
                    std::function<void(Ctx&, uint64_t, WorkerRange)> body) {
    launch_pf(begin, end, workers, std::move(body), nullptr);
  }

  void load_balanced_parallel_for(
      uint64_t begin, uint64_t end, const std::vector<uint64_t>& weight_prefix,
      WorkerRange workers,
      std::function<void(Ctx&, uint64_t, WorkerRange)> body) {
    const uint64_t* prefix = weight_prefix.data();
    if (end > begin) {
      if (weight_prefix.size() != size_t(end + 1))
        throw parameter_error("weight prefix must have end+1 entries");
      if (prefix[end] - prefix[begin] == 0) prefix = nullptr;  // fall back
    }
    launch_pf(begin, end, workers, std::move(body), prefix);
  }

  // Spawn-tree depth of the last parallel_for issued (structure diagnostic).
  uint32_t last_pf_depth() const { return last_pf_depth_; }

  // ---- instrumentation used by Ctx ------------------------------------

  struct Lane {
    bool busy = false;
    uint32_t in_flight = 0;  // tasks blocked on a DRAM response
    std::deque<TaskMsg> resumes, pending;
    uint64_t tasks_run = 0, edges = 0, sends = 0, dram_ops = 0,
             busy_cycles = 0;
    std::vector<uint64_t> cache_tags;  // lazily sized, key+1 or 0
  };

 private:
  friend class Ctx;

  enum class EventKind : uint8_t { Arrival, Resume, Complete };

  struct Event {
    uint64_t time;
    uint32_t dest;
    uint32_t src;
    uint64_t seq;
    EventKind kind;
    TaskMsg msg;
  };
  struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.dest != b.dest) return a.dest > b.dest;
      if (a.src != b.src) return a.src > b.src;
      return a.seq > b.seq;
    }
  };

  static uint32_t ceil_log2(uint64_t n) {
    uint32_t k = 0;
    while ((1ull << k) < n) ++k;
    return k;
  }

  void push_event(uint64_t time, uint32_t dest, uint32_t src, EventKind kind,
                  const TaskMsg& msg) {
    calendar_.push(Event{time, dest, src, seq_++, kind, msg});
  }

  void drain() {
    while (!calendar_.empty()) {
      Event ev = calendar_.top();
      calendar_.pop();
      global_now_ = std::max(global_now_, ev.time);
      Lane& lane = lanes_[ev.dest];
      switch (ev.kind) {
        case EventKind::Arrival:
          lane.pending.push_back(ev.msg);
          break;
        case EventKind::Resume:
          lane.resumes.push_back(ev.msg);
          break;
        case EventKind::Complete:
          lane.busy = false;
          break;
      }
      try_start(ev.dest, ev.time);
    }
  }

  void try_start(uint32_t lane_id, uint64_t time) {
    Lane& lane = lanes_[lane_id];
    while (!lane.busy) {
      TaskMsg msg;
      if (!lane.resumes.empty()) {
        msg = lane.resumes.front();
        lane.resumes.pop_front();
        lane.in_flight--;
      } else if (!lane.pending.empty() &&
                 lane.in_flight < cfg_.hw_threads_per_lane) {
        msg = lane.pending.front();
        lane.pending.pop_front();
      } else {
        return;
      }
      Ctx ctx(*this, lane_id, time);
      ctx.charge(msg.instr);
      dispatch(ctx, msg);
      uint64_t duration = ctx.cost();
      lane.tasks_run++;
      lane.busy_cycles += duration;
      if (duration > 0) {
        lane.busy = true;
        push_event(time + duration, lane_id, lane_id, EventKind::Complete,
                   TaskMsg{});
      }
    }
  }

  void dispatch(Ctx& ctx, const TaskMsg& msg) {
    if (msg.kind == detail::kKindParallelFor) {
      pf_node(ctx, msg);
      return;
    }
    if (!dispatcher_) throw simulation_error("no task dispatcher installed");
    dispatcher_(ctx, msg);
  }

  // ---- parallel_for internals -----------------------------------------

  void launch_pf(uint64_t begin, uint64_t end, WorkerRange workers,
                 std::function<void(Ctx&, uint64_t, WorkerRange)> body,
                 const uint64_t* prefix) {
    if (end < begin) throw parameter_error("parallel_for: end < begin");
    if (workers.count == 0 || workers.first + workers.count > lane_count())
      throw parameter_error("parallel_for: bad worker range");
    last_pf_depth_ = pf_depth(begin, end);
    if (end == begin) return;
    plans_.push_back(PFPlan{std::move(body), prefix, begin, end});
    TaskMsg root;
    root.kind = detail::kKindParallelFor;
    root.instr = cfg_.cost_thread_create;
    root.a = begin;
    root.b = end;
    root.c = (uint64_t(workers.first) << 32) | workers.count;
    root.d = plans_.size() - 1;
    seed_task(workers.first, root);
  }

  static uint32_t pf_depth(uint64_t begin, uint64_t end) {
    uint32_t d = 0;
    uint64_t n = end - begin;
    while (n > 1) {
      n = (n + 1) / 2;
      ++d;
    }
    return d;
  }

  void pf_node(Ctx& ctx, const TaskMsg& msg) {
    uint64_t lo = msg.a, hi = msg.b;
    WorkerRange w{uint32_t(msg.c >> 32), uint32_t(msg.c & 0xffffffffu)};
    const PFPlan& plan = plans_[msg.d];
    if (hi - lo == 1) {
      plan.body(ctx, lo, w);
      return;
    }
    if (w.count == 1) {
      // remaining spawns are local: charge them, run bodies in sequence
      for (uint64_t i = lo; i < hi; ++i) {
        ctx.charge(cfg_.cost_thread_create + cfg_.cost_send_message);
        lanes_[ctx.lane()].sends++;
        plan.body(ctx, i, w);
      }
      return;
    }
    uint64_t mid = lo + (hi - lo) / 2;
    uint64_t wl = plan_weight(plan, lo, mid), wr = plan_weight(plan, mid, hi);
    uint32_t left_workers;
    if (wl + wr == 0) {
      left_workers = uint32_t((uint64_t(w.count) * (mid - lo)) / (hi - lo));
    } else {
      left_workers =
          uint32_t((__uint128_t(w.count) * wl + (wl + wr) / 2) / (wl + wr));
    }
    // each half keeps at least one worker when it has anything to do
    uint32_t min_left = (mid > lo) ? 1u : 0u;
    uint32_t max_left = w.count - ((hi > mid) ? 1u : 0u);
    left_workers = std::max(min_left, std::min(left_workers, max_left));
    WorkerRange lw{w.first, left_workers};
    WorkerRange rw{w.first + left_workers, w.count - left_workers};
    TaskMsg child = msg;
    if (mid > lo) {
      child.a = lo;
      child.b = mid;
      child.c = (uint64_t(lw.first) << 32) | lw.count;
      child.instr = cfg_.cost_thread_create;
      ctx.send(lw.count ? lw.first : w.first, child);
    }
    if (hi > mid) {
      child.a = mid;
      child.b = hi;
      child.c = (uint64_t(rw.first) << 32) | rw.count;
      child.instr = cfg_.cost_thread_create;
      ctx.send(rw.count ? rw.first : w.first, child);
    }
  }

  MachineConfig cfg_;
  std::vector<Lane> lanes_;
  uint64_t seed_;
  std::priority_queue<Event, std::vector<Event>, EventOrder> calendar_;
  uint64_t seq_ = 0;
  uint64_t global_now_ = 0;
  uint64_t phase_start_ = 0;
  uint64_t phase_edges_ = 0;
  uint64_t barrier_cycles_last_ = 0;
  std::vector<PhaseStats> phases_;
  std::vector<PFPlan> plans_;
  TaskHandler dispatcher_;
  uint64_t cache_hits_ = 0, cache_misses_ = 0;
  uint32_t last_pf_depth_ = 0;
};

// ---- Ctx implementation ----------------------------------------------------

inline void Ctx::send(uint32_t target_lane, const TaskMsg& msg) {
  charge(sim_.cfg_.cost_send_message);
  sim_.lanes_[lane_].sends++;
  uint64_t latency = 0;
  if (target_lane != lane_) {
    latency = sim_.node_of_lane(target_lane) == sim_.node_of_lane(lane_)
                  ? sim_.cfg_.local_message_cycles()
                  : sim_.cfg_.remote_message_cycles();
  }
  sim_.push_event(now() + latency, target_lane, lane_,
                  Sim::EventKind::Arrival, msg);
}

inline void Ctx::dram_read(uint64_t owner_vertex, uint32_t words,
                           const TaskMsg& resume) {
  if (words < 1 || words > 8)
    throw simulation_error("dram access must move 1-8 words");
  charge(sim_.cfg_.cost_dram_issue);
  sim_.lanes_[lane_].dram_ops++;
  uint32_t owner_node = sim_.node_of_lane(sim_.owner_lane(owner_vertex));
  uint64_t roundtrip = owner_node == sim_.node_of_lane(lane_)
                           ? sim_.cfg_.local_dram_cycles()
                           : sim_.cfg_.remote_dram_cycles();
  sim_.lanes_[lane_].in_flight++;
  sim_.push_event(now() + roundtrip, lane_, lane_, Sim::EventKind::Resume,
                  resume);
}

inline void Ctx::dram_write(uint64_t owner_vertex, uint32_t words) {
  if (words < 1 || words > 8)
    throw simulation_error("dram access must move 1-8 words");
  (void)owner_vertex;
  charge(sim_.cfg_.cost_dram_issue);
  sim_.lanes_[lane_].dram_ops++;
}

inline bool Ctx::cache_touch(uint64_t key) {
  auto& lane = sim_.lanes_[lane_];
  size_t capacity = sim_.cfg_.scratchpad_bytes / sim_.cfg_.cache_entry_bytes;
  if (capacity == 0) capacity = 1;
  if (lane.cache_tags.empty()) lane.cache_tags.assign(capacity, 0);
  size_t slot = size_t(u64_below(splitmix64(key), capacity));
  if (lane.cache_tags[slot] == key + 1) {
    sim_.cache_hits_++;
    return true;
  }
  lane.cache_tags[slot] = key + 1;
  sim_.cache_misses_++;
  charge(sim_.cfg_.local_dram_cycles());  // conflict penalty: a DRAM roundtrip
  sim_.lanes_[lane_].dram_ops++;
  return false;
}

inline void Ctx::count_edges(uint64_t n) {
  sim_.lanes_[lane_].edges += n;
  sim_.phase_edges_ += n;
}

}  // namespace fggs
