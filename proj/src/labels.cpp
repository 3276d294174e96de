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

#include "jwp/labels.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "jwp/error.hpp"

namespace jwp {

void LabelSet::validate(std::size_t node_count) const {
  std::vector<std::int8_t> seen(node_count, 0);
  auto mark = [&](const std::vector<NodeId>& ids, std::int8_t tag) {
    for (NodeId u : ids) {
      if (u >= node_count)
        throw InputError("label for node " + std::to_string(u) +
                         " outside graph of " + std::to_string(node_count) +
                         " nodes");
      if (seen[u] != 0 && seen[u] != tag)
        throw InputError("node " + std::to_string(u) +
                         " labeled both positive and negative");
      seen[u] = tag;
    }
  };
  mark(positives, 1);
  mark(negatives, -1);
}

std::vector<std::int8_t> LabelSet::dense(std::size_t node_count) const {
  std::vector<std::int8_t> y(node_count, 0);
  for (NodeId u : positives)
    if (u < node_count) y[u] = 1;
  for (NodeId u : negatives)
    if (u < node_count) y[u] = -1;
  return y;
}

LabelSet read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open label file: " + path.string());
  LabelSet labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string id_text, label_text, extra;
    fields >> id_text >> label_text;
    if (id_text.empty()) continue;
    std::uint64_t id = 0;
    const auto [ptr, ec] =
        std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    const bool id_ok = ec == std::errc() && ptr == id_text.data() + id_text.size() &&
                       id < std::numeric_limits<NodeId>::max();
    if (!id_ok || (fields >> extra))
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected \"node_id<TAB>label\"");
    if (label_text == "+1" || label_text == "1")
      labels.positives.push_back(static_cast<NodeId>(id));
    else if (label_text == "-1")
      labels.negatives.push_back(static_cast<NodeId>(id));
    else
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": label must be +1 or -1");
  }
  return labels;
}

void write_labels(const LabelSet& labels, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write label file: " + path.string());
  std::vector<std::pair<NodeId, int>> rows;
  rows.reserve(labels.size());
  for (NodeId u : labels.positives) rows.emplace_back(u, 1);
  for (NodeId u : labels.negatives) rows.emplace_back(u, -1);
  std::sort(rows.begin(), rows.end());
  for (const auto& [u, y] : rows) out << u << '\t' << (y > 0 ? "+1" : "-1") << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

}  // namespace jwp
