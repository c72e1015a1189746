#pragma once

// Internal helpers over directed graphs given in CSR form.

#include <cstdint>
#include <numeric>
#include <vector>

namespace infoloss::detail {

struct Csr {
  std::vector<std::uint32_t> offsets;  // size n + 1
  std::vector<std::uint32_t> targets;
  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// Strongly connected components (iterative Tarjan). Returns the component id
/// per node; ids are assigned in reverse topological order of the condensation.
inline std::vector<std::uint32_t> strongly_connected_components(const Csr& g, std::uint32_t& count) {
  const std::size_t n = g.size();
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<std::uint32_t> stack;
  std::vector<bool> on_stack(n, false);
  struct Frame {
    std::uint32_t node;
    std::uint32_t next_edge;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;
  count = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, g.offsets[root]});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_edge < g.offsets[f.node + 1]) {
        const std::uint32_t w = g.targets[f.next_edge++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, g.offsets[w]});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const std::uint32_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
    }
  }
  return comp;
}

/// Components with no edge leaving them.
inline std::vector<bool> closed_components(const Csr& g, const std::vector<std::uint32_t>& comp,
                                           std::uint32_t count) {
  std::vector<bool> closed(count, true);
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    for (std::uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
      if (comp[g.targets[e]] != comp[v]) closed[comp[v]] = false;
    }
  }
  return closed;
}

/// Period of the strongly connected component containing `start`
/// (gcd of level[u] + 1 - level[v] over edges inside the component).
inline std::uint64_t component_period(const Csr& g, const std::vector<std::uint32_t>& comp,
                                      std::uint32_t start) {
  const std::uint32_t c = comp[start];
  std::vector<std::int64_t> level(g.size(), -1);
  std::vector<std::uint32_t> queue{start};
  level[start] = 0;
  std::uint64_t period = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t u = queue[head];
    for (std::uint32_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      const std::uint32_t v = g.targets[e];
      if (comp[v] != c) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        const std::int64_t d = level[u] + 1 - level[v];
        period = std::gcd(period, static_cast<std::uint64_t>(d < 0 ? -d : d));
      }
    }
  }
  return period;
}

}  // namespace infoloss::detail
