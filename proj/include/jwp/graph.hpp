/*
Copyright (c) 2026 The jwp authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "jwp/kernels.hpp"

namespace jwp {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Relation of neighbor v to row u in a directed graph.
enum class PairClass : std::uint8_t {
  Bidirectional = kernels::kBidirectional,  // (u,v) and (v,u) stored
  UniIncoming = kernels::kUniIncoming,      // only (v,u) stored
  UniOutgoing = kernels::kUniOutgoing,      // only (u,v) stored
};

// Sparse graph in CSR form.
//
// Every row lists its neighbors in ascending id order. Undirected graphs list
// each edge in both endpoint rows, and both entries point at one weight slot.
// Directed graphs list in- and out-neighbors together, tagged with a
// PairClass, and every row entry owns its own slot, so slot k is CSR entry k.
class Graph {
 public:
  Graph() = default;

  // Builds a graph over nodes [0, node_count). Self-loops are dropped and
  // duplicates merged; for undirected graphs (u,v) and (v,u) are one edge.
  // Throws InputError when an endpoint is out of range.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges,
                          bool directed, std::size_t* self_loops = nullptr);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  bool directed() const { return directed_; }

  // Stored edges: canonical (u < v) for undirected graphs, ordered pairs for
  // directed graphs. Sorted ascending.
  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::size_t slot_count() const { return slot_src_.size(); }

  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::span<const NodeId> neighbors(NodeId u) const;
  std::span<const std::uint32_t> row_slots(NodeId u) const;

  // Endpoints of each slot: the edge (u < v) for undirected graphs, the
  // (row, neighbor) matrix entry for directed graphs.
  std::span<const NodeId> slot_source() const { return slot_src_; }
  std::span<const NodeId> slot_target() const { return slot_dst_; }

  // Per-slot pair class; empty for undirected graphs.
  std::span<const std::uint8_t> slot_classes() const { return classes_; }

  std::optional<std::size_t> edge_slot(NodeId u, NodeId v) const;
  std::optional<PairClass> pair_class(NodeId u, NodeId v) const;

  // External id of each dense node id. Identity unless set by a transform.
  std::uint64_t original_id(NodeId u) const {
    return original_ids_.empty() ? u : original_ids_[u];
  }
  std::span<const std::uint64_t> original_ids() const { return original_ids_; }
  void set_original_ids(std::vector<std::uint64_t> ids);

  // Kernel view; slots is null for directed graphs.
  kernels::RowView rows() const;

 private:
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> cols_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint8_t> classes_;
  std::vector<NodeId> slot_src_;
  std::vector<NodeId> slot_dst_;
  std::vector<std::uint64_t> original_ids_;
};

enum class Renorm { Clamp, Rescale };

// One learnable value per slot of a graph.
struct EdgeWeights {
  std::vector<double> values;
  double clamp_bound = 0.5;

  EdgeWeights() = default;
  EdgeWeights(const Graph& g, double init, double bound = 0.5)
      : values(g.slot_count(), init), clamp_bound(bound) {}

  std::size_t size() const { return values.size(); }

  // Brings every value into [-clamp_bound, clamp_bound]: elementwise clamp,
  // or one global scale by clamp_bound / max|w| when that exceeds 1.
  void normalize(Renorm mode = Renorm::Clamp);
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

// Reads "u<TAB>v" lines ('#' lines and blank lines skipped). node_count is
// max id + 1. Throws InputError with the line number on malformed input, and
// on a file without edges.
Graph load_edge_list(const std::filesystem::path& path, bool directed,
                     LoadStats* stats = nullptr);

// Writes edges() in the same format, using original ids.
void write_edge_list(const Graph& g, const std::filesystem::path& path);

// Undirected graph of the mutual (bidirectional) pairs of a directed graph,
// restricted to its largest connected component. Ties between components of
// equal size go to the one holding the smallest original id. Node ids are
// compacted; original_ids() maps back to the input graph's original ids.
Graph mutual_projection_lcc(const Graph& g);

// 2|E|/|V| for undirected graphs, |E|/|V| (ordered pairs) for directed ones.
double average_degree(const Graph& g);

}  // namespace jwp
