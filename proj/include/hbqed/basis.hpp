#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hbqed/model.hpp"

namespace hbqed {

enum class ClosureMode { DecayClosure, PumpClosure };
enum class Mode { Hyd, Dist };

inline const char* to_string(Mode m) { return m == Mode::Hyd ? "hyd" : "dist"; }

// One basis ket after compression to the three-level encoding:
// a = 0 (bond formed), 1 (molecules free), 2 (critical configuration).
// Phonon registers are per unit (incoherent) or a single shared pair (coherent).
struct BasisState {
  std::vector<std::uint8_t> p_hyd;   // size m or 1
  std::vector<std::uint8_t> p_dist;  // size m or 1
  std::vector<std::uint8_t> a;       // size m

  bool operator==(const BasisState&) const = default;
  std::string label() const;  // e.g. "p=(1,0) a=201"
};

struct StateSpace {
  ClusterSpec spec;
  ClosureMode closure = ClosureMode::DecayClosure;
  std::vector<BasisState> states;  // canonical lexicographic order

  int index_of(const BasisState& s) const;  // -1 if absent
  std::size_t size() const { return states.size(); }
  int num_phonon_registers() const {
    return spec.coupling == Coupling::Incoherent ? spec.m : 1;
  }

  // Mixed-radix encoding used for the index map; stable across runs.
  std::uint64_t encode(const BasisState& s) const;

  std::unordered_map<std::uint64_t, int> index;
};

// Breadth-first closure from the all-excited state (all phonons 0, every unit
// at the critical level) over the Hamiltonian transition graph plus phonon
// decay edges; PumpClosure additionally closes under phonon creation up to
// the caps. Enumeration runs on the raw (p1,p2,l,d) registers and compresses
// afterwards; the absent (l=0,d=0) configuration is asserted, not assumed.
StateSpace enumerate_states(const ClusterSpec& spec, ClosureMode closure);

// Charge label of one state. Coherent: (d1, d2) = (n0 - p_hyd, n1 - p_dist)
// where n0/n1 count units at level 0/1. Incoherent: per-unit component ids
// (0 = critical manifold, 1 = level-0 ground, 2 = level-1 ground, 3+ = pump
// extensions), one id per unit.
std::vector<int> sector_charge(const BasisState& s, const ClusterSpec& spec);
std::string sector_label(const BasisState& s, const ClusterSpec& spec);

// Sparse single-target action of a jump channel: state -> (state', amplitude).
struct ChannelAction {
  std::vector<int> target;  // size nstates; -1 where annihilated
  std::vector<double> amp;  // sqrt(occupation) bosonic amplitudes
};

struct BlockPartition {
  std::vector<std::vector<int>> blocks;  // sorted state indices per block
  std::vector<int> block_of;             // state index -> block id
  std::vector<int> local_of;             // state index -> position within block
  std::vector<std::string> sector_labels;

  // routing[channel][block] = target block id, or -1 when the channel
  // annihilates every member of the block.
  std::vector<std::vector<int>> routing;

  std::size_t org_dim = 0;
  std::size_t num_blocks() const { return blocks.size(); }
  std::size_t max_block_dim = 0;
  double memory_ratio = 0.0;  // sum(dim_i^2) / org_dim^2
};

// Blocks are the connected components of the Hamiltonian adjacency graph;
// sector labels are attached afterwards and cross-checked by the tests.
// Throws ROUTING_AMBIGUOUS if one channel maps a block into two blocks and
// BLOCK_ROUTING_MISS if a channel action leaves the enumerated space.
BlockPartition partition_blocks(const StateSpace& space,
                                const std::vector<std::pair<int, int>>& h_edges,
                                const std::vector<ChannelAction>& channel_actions);

}  // namespace hbqed
