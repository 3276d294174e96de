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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "jwp/engine.hpp"
#include "jwp/graph.hpp"
#include "jwp/labels.hpp"

namespace jwp {

struct AucReport {
  double auc = 0.0;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
  std::size_t tie_pairs = 0;  // positive-negative pairs with equal scores
};

// Probability that a random positive outscores a random negative, ties at
// half credit, over the nodes in truth. O(k log k) in the number of test
// nodes. Throws InputError unless both classes are present.
AucReport auc(std::span<const double> scores, const LabelSet& truth);

// Same, with the nodes of `exclude` (typically the training set) removed
// from truth first.
AucReport auc(std::span<const double> scores, const LabelSet& truth,
              const LabelSet& exclude);

struct ScoreRow {
  std::uint64_t id = 0;
  double posterior = 0.0;
  int label = 0;
};

// Rows sorted by descending posterior, ties by ascending id. ids maps dense
// ids to output ids; empty means identity.
std::vector<ScoreRow> rank_scores(std::span<const double> p,
                                  std::span<const std::uint64_t> ids = {});

// Writes rank_scores as "node_id<TAB>posterior<TAB>predicted_label".
void rank_and_write(std::span<const double> p,
                    std::span<const std::uint64_t> ids,
                    const std::filesystem::path& path);

std::vector<ScoreRow> read_scores(const std::filesystem::path& path);

struct BenchRecord {
  std::string method;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t alternations = 0;
  double wall_ms_total = 0.0;
  double wall_ms_per_alt = 0.0;
};

struct BenchGrid {
  std::vector<Method> methods;
  std::vector<std::size_t> edges;     // target undirected edge counts
  std::vector<std::uint64_t> seeds;
  std::size_t alternations = 10;
  std::size_t attach = 10;            // preferential-attachment m
  double keep_fraction = 0.5;         // for directed methods
  double min_cell_ms = 0.0;           // repeat short runs up to this budget
  unsigned threads = 1;
};

// Times every method on preferential-attachment graphs of each size at a
// fixed alternation budget (no early stop). One record per (method, size)
// holding the median over seeds.
std::vector<BenchRecord> bench(const BenchGrid& grid);

void write_bench(const std::vector<BenchRecord>& records,
                 const std::filesystem::path& path);

}  // namespace jwp
