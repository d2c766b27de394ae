#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "embedplan/rng.hpp"
#include "embedplan/types.hpp"

namespace embedplan::testing {

inline ModelSpec make_model(const std::vector<std::pair<std::uint64_t, std::uint32_t>>& shapes,
                            std::uint32_t elem_bits = 32,
                            std::vector<std::uint32_t> hidden = {}) {
  ModelSpec model;
  for (std::size_t i = 0; i < shapes.size(); ++i)
    model.tables.push_back(TableSpec{static_cast<int>(i), shapes[i].first, shapes[i].second,
                                     elem_bits});
  model.hidden_dims = std::move(hidden);
  return model;
}

inline MemoryHierarchySpec make_hierarchy(int channels, std::uint64_t channel_cap, int banks,
                                          std::uint64_t bank_cap, double dram_ns = 300.0,
                                          double onchip_ns = 100.0) {
  MemoryHierarchySpec h;
  h.hbm_channels = channels;
  h.hbm_channel_capacity = channel_cap;
  h.ddr_channels = 0;
  h.ddr_channel_capacity = 0;
  h.onchip_banks = banks;
  h.onchip_bank_capacity = bank_cap;
  h.dram_access_ns = dram_ns;
  h.onchip_access_ns = onchip_ns;
  return h;
}

/// Independent oracle: minimal achievable max-count over all assignments of
/// items to `bins` capacity-bounded bins. Exponential; test-sized inputs only.
inline int min_max_count_exhaustive(const std::vector<std::uint64_t>& items, int bins,
                                    std::uint64_t cap) {
  std::vector<std::uint64_t> loads(static_cast<std::size_t>(bins), 0);
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  int best = static_cast<int>(items.size()) + 1;
  auto dfs = [&](auto&& self, std::size_t i, int cur_max) -> void {
    if (cur_max >= best) return;
    if (i == items.size()) {
      best = cur_max;
      return;
    }
    for (int b = 0; b < bins; ++b) {
      auto bi = static_cast<std::size_t>(b);
      if (loads[bi] + items[i] > cap) continue;
      loads[bi] += items[i];
      counts[bi]++;
      self(self, i + 1, std::max(cur_max, counts[bi]));
      loads[bi] -= items[i];
      counts[bi]--;
    }
  };
  dfs(dfs, 0, 0);
  return best;
}

/// Random small instance for differential (semantics-preservation) tests:
/// tables tiny enough to materialize products, a couple of channels so the
/// planner actually wants pairs, a few cacheable tables for on-chip coverage.
struct DifferentialInstance {
  ModelSpec model;
  MemoryHierarchySpec hierarchy;
};

inline DifferentialInstance differential_instance(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0xd1ff0e5eull);
  DifferentialInstance inst;
  int n = 6 + static_cast<int>(rng.next_below(9));  // 6..14 tables
  const std::vector<std::uint32_t> dims{4, 8};
  for (int i = 0; i < n; ++i) {
    TableSpec t;
    t.id = i;
    t.dim = rng.pick(dims);
    t.rows = rng.next_log_uniform(4, 64);
    inst.model.tables.push_back(t);
  }
  inst.model.hidden_dims = {12, 6};
  // few channels, so merging tables genuinely pays off
  inst.hierarchy = make_hierarchy(1 + static_cast<int>(rng.next_below(2)),
                                  1ull << 30, static_cast<int>(rng.next_below(3)), 1024);
  return inst;
}

/// A pair the planner may not have chosen on its own, for forcing grouped
/// physical tables in engine tests: the two smallest tables.
inline std::vector<std::pair<int, int>> smallest_pair(const ModelSpec& model) {
  std::vector<int> ids(model.tables.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    auto ab = model.tables[static_cast<std::size_t>(a)].byte_size();
    auto bb = model.tables[static_cast<std::size_t>(b)].byte_size();
    if (ab != bb) return ab < bb;
    return a < b;
  });
  return {{ids[0], ids[1]}};
}

}  // namespace embedplan::testing
