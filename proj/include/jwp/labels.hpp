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
#include <vector>

#include "jwp/graph.hpp"

namespace jwp {

// Labeled node subsets: positives L_P (y = +1) and negatives L_N (y = -1).
struct LabelSet {
  std::vector<NodeId> positives;
  std::vector<NodeId> negatives;

  std::size_t size() const { return positives.size() + negatives.size(); }
  bool empty() const { return positives.empty() && negatives.empty(); }

  // Throws InputError on ids >= node_count or a node in both sets.
  void validate(std::size_t node_count) const;

  // +1 / -1 / 0 per node.
  std::vector<std::int8_t> dense(std::size_t node_count) const;
};

// "node_id<TAB>label" lines with label in {+1, 1, -1}. '#' lines skipped.
// Ids are dense node ids of the graph the labels refer to.
LabelSet read_labels(const std::filesystem::path& path);
void write_labels(const LabelSet& labels, const std::filesystem::path& path);

}  // namespace jwp
