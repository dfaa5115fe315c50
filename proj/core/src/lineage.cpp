// Copyright 2026 The svtrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svtrack/lineage.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace svtrack {

const Track* LineageTable::find(Label id) const {
  auto it = std::find_if(tracks.begin(), tracks.end(),
                         [id](const Track& t) { return t.id == id; });
  return it == tracks.end() ? nullptr : &*it;
}

void LineageTable::sort_by_id() {
  std::sort(tracks.begin(), tracks.end(),
            [](const Track& a, const Track& b) { return a.id < b.id; });
}

void validate_lineage(const LineageTable& table) {
  std::set<Label> ids;
  for (const Track& t : table.tracks) {
    const std::string where = "track " + std::to_string(t.id);
    if (t.id == 0) throw std::invalid_argument("track ids must be positive");
    if (!ids.insert(t.id).second) {
      throw std::invalid_argument("duplicate " + where);
    }
    if (t.begin < 0 || t.begin > t.end) {
      throw std::invalid_argument(where + " has begin > end or negative begin");
    }
  }
  for (const Track& t : table.tracks) {
    if (t.parent == 0) continue;
    const Track* p = table.find(t.parent);
    if (p == nullptr) {
      throw std::invalid_argument("track " + std::to_string(t.id) +
                                  " references missing parent " +
                                  std::to_string(t.parent));
    }
    if (p->end >= t.begin) {
      throw std::invalid_argument("parent " + std::to_string(p->id) +
                                  " does not end before child " +
                                  std::to_string(t.id) + " begins");
    }
  }
}

}  // namespace svtrack
