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

#include "jwp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "jwp/error.hpp"

namespace jwp {

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges,
                        bool directed, std::size_t* self_loops) {
  if (node_count >= std::numeric_limits<NodeId>::max())
    throw InputError("node count exceeds 32-bit id range");
  std::size_t loops = 0;
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count)
      throw InputError("edge (" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + ") out of range for " +
                       std::to_string(node_count) + " nodes");
  }
  std::erase_if(edges, [&loops](const Edge& e) {
    if (e.u != e.v) return false;
    ++loops;
    return true;
  });
  if (self_loops) *self_loops = loops;
  if (!directed)
    for (Edge& e : edges)
      if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.directed_ = directed;
  g.edges_ = std::move(edges);

  // Row entries as (row, neighbor, slot, class) before CSR packing.
  struct Entry {
    NodeId row, col;
    std::uint32_t slot;
    std::uint8_t cls;
  };
  std::vector<Entry> entries;
  entries.reserve(2 * g.edges_.size());
  if (!directed) {
    if (g.edges_.size() >= (std::size_t{1} << 31))
      throw InputError("edge count exceeds slot index range");
    for (std::uint32_t s = 0; s < g.edges_.size(); ++s) {
      const Edge& e = g.edges_[s];
      entries.push_back({e.u, e.v, s, 0});
      entries.push_back({e.v, e.u, s, 0});
    }
  } else {
    auto stored = [&g](NodeId a, NodeId b) {
      return std::binary_search(g.edges_.begin(), g.edges_.end(), Edge{a, b});
    };
    for (const Edge& e : g.edges_) {
      if (stored(e.v, e.u)) {
        entries.push_back({e.u, e.v, 0, kernels::kBidirectional});
      } else {
        entries.push_back({e.u, e.v, 0, kernels::kUniOutgoing});
        entries.push_back({e.v, e.u, 0, kernels::kUniIncoming});
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  if (entries.size() >= (std::size_t{1} << 31))
    throw InputError("adjacency size exceeds slot index range");

  g.offsets_.assign(node_count + 1, 0);
  g.cols_.resize(entries.size());
  g.slots_.resize(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    ++g.offsets_[entries[k].row + 1];
    g.cols_[k] = entries[k].col;
    g.slots_[k] = directed ? static_cast<std::uint32_t>(k) : entries[k].slot;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

  if (!directed) {
    g.slot_src_.resize(g.edges_.size());
    g.slot_dst_.resize(g.edges_.size());
    for (std::size_t s = 0; s < g.edges_.size(); ++s) {
      g.slot_src_[s] = g.edges_[s].u;
      g.slot_dst_[s] = g.edges_[s].v;
    }
  } else {
    g.slot_src_.resize(entries.size());
    g.slot_dst_.resize(entries.size());
    g.classes_.resize(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      g.slot_src_[k] = entries[k].row;
      g.slot_dst_[k] = entries[k].col;
      g.classes_[k] = entries[k].cls;
    }
  }
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  return std::span<const NodeId>(cols_).subspan(offsets_[u], degree(u));
}

std::span<const std::uint32_t> Graph::row_slots(NodeId u) const {
  return std::span<const std::uint32_t>(slots_).subspan(offsets_[u], degree(u));
}

std::optional<std::size_t> Graph::edge_slot(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return std::nullopt;
  const auto row = neighbors(u);
  const auto it = std::lower_bound(row.begin(), row.end(), v);
  if (it == row.end() || *it != v) return std::nullopt;
  return slots_[offsets_[u] + static_cast<std::size_t>(it - row.begin())];
}

std::optional<PairClass> Graph::pair_class(NodeId u, NodeId v) const {
  if (!directed_) return std::nullopt;
  const auto slot = edge_slot(u, v);
  if (!slot) return std::nullopt;
  return static_cast<PairClass>(classes_[*slot]);
}

void Graph::set_original_ids(std::vector<std::uint64_t> ids) {
  if (ids.size() != node_count())
    throw InputError("original id map size does not match node count");
  original_ids_ = std::move(ids);
}

kernels::RowView Graph::rows() const {
  // Directed slots are the identity, so kernels read weights in row order.
  return {offsets_.data(), cols_.data(), directed_ ? nullptr : slots_.data(),
          directed_ ? classes_.data() : nullptr};
}

void EdgeWeights::normalize(Renorm mode) {
  if (mode == Renorm::Clamp) {
    for (double& w : values) w = std::clamp(w, -clamp_bound, clamp_bound);
    return;
  }
  const double peak = kernels::active().abs_max(values.data(), values.size());
  if (peak > clamp_bound)
    kernels::active().scale(values.data(), clamp_bound / peak, values.size());
}

namespace {

bool parse_id(std::string_view text, std::uint64_t& out) {
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path, bool directed,
                     LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list: " + path.string());
  std::vector<Edge> edges;
  std::uint64_t max_id = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::uint64_t u = 0, v = 0;
    if (fields.size() != 2 || !parse_id(fields[0], u) || !parse_id(fields[1], v))
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected \"u<TAB>v\" with nonnegative integer ids");
    if (u >= std::numeric_limits<NodeId>::max() - 1 ||
        v >= std::numeric_limits<NodeId>::max() - 1)
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": node id too large");
    max_id = std::max({max_id, u, v});
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  if (edges.empty()) throw InputError("edge list has no edges: " + path.string());
  const std::size_t raw = edges.size();
  std::size_t loops = 0;
  Graph g = Graph::from_edges(max_id + 1, std::move(edges), directed, &loops);
  if (g.edge_count() == 0)
    throw InputError("edge list has no edges besides self-loops: " + path.string());
  if (stats) {
    stats->lines = raw;
    stats->self_loops = loops;
    stats->duplicates = raw - loops - g.edge_count();
  }
  return g;
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write edge list: " + path.string());
  for (const Edge& e : g.edges())
    out << g.original_id(e.u) << '\t' << g.original_id(e.v) << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

Graph mutual_projection_lcc(const Graph& g) {
  if (!g.directed()) throw InputError("mutual projection needs a directed graph");
  const std::size_t n = g.node_count();

  std::vector<Edge> mutual;
  for (const Edge& e : g.edges())
    if (e.u < e.v && g.pair_class(e.u, e.v) == PairClass::Bidirectional)
      mutual.push_back(e);
  if (mutual.empty()) throw InputError("graph has no bidirectional pairs");

  // Union-find over the mutual edges.
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&parent](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<bool> touched(n, false);
  for (const Edge& e : mutual) {
    touched[e.u] = touched[e.v] = true;
    const NodeId a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::vector<std::size_t> size(n, 0);
  std::vector<std::uint64_t> min_orig(n, std::numeric_limits<std::uint64_t>::max());
  for (NodeId u = 0; u < n; ++u) {
    if (!touched[u]) continue;
    const NodeId r = find(u);
    ++size[r];
    min_orig[r] = std::min(min_orig[r], g.original_id(u));
  }
  NodeId best = 0;
  bool found = false;
  for (NodeId r = 0; r < n; ++r) {
    if (size[r] == 0) continue;
    if (!found || size[r] > size[best] ||
        (size[r] == size[best] && min_orig[r] < min_orig[best])) {
      best = r;
      found = true;
    }
  }

  std::vector<NodeId> remap(n, std::numeric_limits<NodeId>::max());
  std::vector<std::uint64_t> originals;
  for (NodeId u = 0; u < n; ++u) {
    if (touched[u] && find(u) == best) {
      remap[u] = static_cast<NodeId>(originals.size());
      originals.push_back(g.original_id(u));
    }
  }
  std::vector<Edge> kept;
  for (const Edge& e : mutual)
    if (remap[e.u] != std::numeric_limits<NodeId>::max())
      kept.push_back({remap[e.u], remap[e.v]});

  Graph out = Graph::from_edges(originals.size(), std::move(kept), false);
  out.set_original_ids(std::move(originals));
  return out;
}

double average_degree(const Graph& g) {
  if (g.node_count() == 0) throw InputError("average degree of an empty graph");
  const double e = static_cast<double>(g.edge_count());
  const double v = static_cast<double>(g.node_count());
  return g.directed() ? e / v : 2.0 * e / v;
}

}  // namespace jwp
