// Copyright 2026 The dsmeda Authors
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

#pragma once

#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "dsmeda/permutation.hpp"

namespace dsmeda {

/// Hopcroft–Karp maximum matching on the bipartite graph rows × columns,
/// O(E·sqrt(n)). `adjacency[i]` lists the candidate columns of row i;
/// neighbor order is respected, so with ascending columns the result is
/// deterministic. Returns the perfect matching as a Permutation
/// (row -> matched column), or nullopt when no perfect matching exists.
inline std::optional<Permutation> hopcroft_karp(
    const std::vector<std::vector<int>>& adjacency, int n) {
  constexpr int kFree = -1;
  const int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_row(n, kFree);  // row -> col
  std::vector<int> match_col(n, kFree);  // col -> row
  std::vector<int> dist(n, 0);
  std::vector<int> queue_buf;
  queue_buf.reserve(n);

  auto bfs = [&]() {
    queue_buf.clear();
    for (int i = 0; i < n; ++i) {
      if (match_row[i] == kFree) {
        dist[i] = 0;
        queue_buf.push_back(i);
      } else {
        dist[i] = kInf;
      }
    }
    bool found_augmenting = false;
    for (std::size_t head = 0; head < queue_buf.size(); ++head) {
      int i = queue_buf[head];
      for (int j : adjacency[i]) {
        int next = match_col[j];
        if (next == kFree) {
          found_augmenting = true;
        } else if (dist[next] == kInf) {
          dist[next] = dist[i] + 1;
          queue_buf.push_back(next);
        }
      }
    }
    return found_augmenting;
  };

  // DFS along the BFS layering; iterative to stay safe at large n.
  std::vector<std::size_t> edge_pos(n);
  auto try_augment = [&](int start) {
    std::vector<int> stack{start};
    edge_pos[start] = 0;
    while (!stack.empty()) {
      int i = stack.back();
      if (edge_pos[i] == adjacency[i].size()) {
        dist[i] = kInf;
        stack.pop_back();
        continue;
      }
      int j = adjacency[i][edge_pos[i]++];
      int next = match_col[j];
      if (next == kFree) {
        // Augment along the stack.
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          int prev_col = match_row[*it];
          match_row[*it] = j;
          match_col[j] = *it;
          j = prev_col;
        }
        return true;
      }
      if (dist[next] == dist[i] + 1) {
        edge_pos[next] = 0;
        stack.push_back(next);
      }
    }
    return false;
  };

  int matched = 0;
  while (bfs()) {
    for (int i = 0; i < n; ++i) {
      if (match_row[i] == kFree && try_augment(i)) ++matched;
    }
  }
  if (matched != n) return std::nullopt;
  return Permutation(std::move(match_row));
}

}  // namespace dsmeda
