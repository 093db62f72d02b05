#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "fggs/common.hpp"
#include "fggs/prng.hpp"

namespace fggs {

// Abstract lane-machine parameters. Costs are cycles charged on the issuing
// lane; latencies are one-way or round-trip wall times converted to cycles
// at clock_hz.
struct MachineConfig {
  uint32_t node_count = 1;
  uint32_t lanes_per_node = 2048;
  double clock_hz = 2e9;
  uint32_t hw_threads_per_lane = 128;
  uint32_t scratchpad_bytes = 65536;

  // cost table (cycles)
  uint32_t cost_thread_create = 0;
  uint32_t cost_thread_yield = 1;
  uint32_t cost_thread_dealloc = 1;
  uint32_t cost_send_message = 2;
  uint32_t cost_dram_issue = 2;

  // latency table (nanoseconds)
  double local_dram_roundtrip_ns = 150.0;
  double remote_dram_roundtrip_ns = 1250.0;
  double local_message_ns = 150.0;
  double remote_message_ns = 500.0;

  // handler instruction budgets (calibration knobs; the hardware cost
  // structure fixes everything else)
  uint32_t vertex_task_instr = 10;
  uint32_t edge_update_instr = 10;
  uint32_t pull_scan_instr = 4;
  uint32_t gather_edge_instr = 2;
  uint32_t cache_entry_bytes = 16;

  uint64_t total_lanes() const {
    return uint64_t(node_count) * lanes_per_node;
  }
  uint64_t cycles(double ns) const {
    return uint64_t(std::llround(ns * clock_hz / 1e9));
  }
  uint64_t local_dram_cycles() const { return cycles(local_dram_roundtrip_ns); }
  uint64_t remote_dram_cycles() const { return cycles(remote_dram_roundtrip_ns); }
  uint64_t local_message_cycles() const { return cycles(local_message_ns); }
  uint64_t remote_message_cycles() const { return cycles(remote_message_ns); }

  void check() const {
    if (node_count < 1 || lanes_per_node < 1 || hw_threads_per_lane < 1)
      throw parameter_error("machine counts must be >= 1");
    if (clock_hz <= 0) throw parameter_error("clock_hz must be positive");
  }
};

// Stable hash placement of vertices onto lanes; node = lane / lanes_per_node.
inline uint64_t map_vertex_lane(uint64_t vertex, const MachineConfig& cfg) {
  return u64_below(splitmix64(vertex ^ 0x51a9c0ffee123457ULL),
                   cfg.total_lanes());
}

inline std::pair<uint32_t, uint32_t> map_vertex(uint64_t vertex,
                                                const MachineConfig& cfg) {
  uint64_t lane = map_vertex_lane(vertex, cfg);
  return {uint32_t(lane / cfg.lanes_per_node),
          uint32_t(lane % cfg.lanes_per_node)};
}

// key = value config file; '#' comments. Unknown keys are rejected so typos
// fail loudly.
inline MachineConfig load_machine_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open machine config: " + path);
  MachineConfig c;
  std::string line;
  std::map<std::string, double*> dkeys = {
      {"clock_hz", &c.clock_hz},
      {"local_dram_roundtrip_ns", &c.local_dram_roundtrip_ns},
      {"remote_dram_roundtrip_ns", &c.remote_dram_roundtrip_ns},
      {"local_message_ns", &c.local_message_ns},
      {"remote_message_ns", &c.remote_message_ns},
  };
  std::map<std::string, uint32_t*> ukeys = {
      {"node_count", &c.node_count},
      {"lanes_per_node", &c.lanes_per_node},
      {"hw_threads_per_lane", &c.hw_threads_per_lane},
      {"scratchpad_bytes", &c.scratchpad_bytes},
      {"cost_thread_create", &c.cost_thread_create},
      {"cost_thread_yield", &c.cost_thread_yield},
      {"cost_thread_dealloc", &c.cost_thread_dealloc},
      {"cost_send_message", &c.cost_send_message},
      {"cost_dram_issue", &c.cost_dram_issue},
      {"vertex_task_instr", &c.vertex_task_instr},
      {"edge_update_instr", &c.edge_update_instr},
      {"pull_scan_instr", &c.pull_scan_instr},
      {"gather_edge_instr", &c.gather_edge_instr},
      {"cache_entry_bytes", &c.cache_entry_bytes},
  };
  while (std::getline(in, line)) {
    size_t pos = line.find('#');
    if (pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::string key, eq;
    if (!(ls >> key)) continue;
    double value;
    if (!(ls >> eq >> value) || eq != "=")
      throw format_error("bad config line: " + line);
    if (auto it = dkeys.find(key); it != dkeys.end())
      *it->second = value;
    else if (auto it2 = ukeys.find(key); it2 != ukeys.end())
      *it2->second = uint32_t(value);
    else
      throw format_error("unknown machine config key: " + key);
  }
  c.check();
  return c;
}

inline void save_machine_config(const MachineConfig& c, std::ostream& out) {
  out << "node_count = " << c.node_count << "\n"
      << "lanes_per_node = " << c.lanes_per_node << "\n"
      << "clock_hz = " << c.clock_hz << "\n"
      << "hw_threads_per_lane = " << c.hw_threads_per_lane << "\n"
      << "scratchpad_bytes = " << c.scratchpad_bytes << "\n"
      << "cost_thread_create = " << c.cost_thread_create << "\n"
      << "cost_thread_yield = " << c.cost_thread_yield << "\n"
      << "cost_thread_dealloc = " << c.cost_thread_dealloc << "\n"
      << "cost_send_message = " << c.cost_send_message << "\n"
      << "cost_dram_issue = " << c.cost_dram_issue << "\n"
      << "local_dram_roundtrip_ns = " << c.local_dram_roundtrip_ns << "\n"
      << "remote_dram_roundtrip_ns = " << c.remote_dram_roundtrip_ns << "\n"
      << "local_message_ns = " << c.local_message_ns << "\n"
      << "remote_message_ns = " << c.remote_message_ns << "\n"
      << "vertex_task_instr = " << c.vertex_task_instr << "\n"
      << "edge_update_instr = " << c.edge_update_instr << "\n"
      << "pull_scan_instr = " << c.pull_scan_instr << "\n"
      << "gather_edge_instr = " << c.gather_edge_instr << "\n"
      << "cache_entry_bytes = " << c.cache_entry_bytes << "\n";
}

}  // namespace fggs
