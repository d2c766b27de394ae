#include <algorithm>
#include <optional>

#include "embedplan/planner.hpp"

namespace embedplan {

namespace {

// Minimal achievable max-count packing of items into bins with capacities,
// up to symmetry of equal-capacity bins. Items are (bytes, original position).
// Returns the assignment bin per item, or nullopt when infeasible.
class MinMaxCountPacker {
 public:
  MinMaxCountPacker(std::vector<std::uint64_t> item_bytes, std::vector<std::uint64_t> bin_caps,
                    std::vector<int> bin_class)
      : bin_caps_(std::move(bin_caps)), bin_class_(std::move(bin_class)) {
    order_.resize(item_bytes.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      return item_bytes[static_cast<std::size_t>(a)] > item_bytes[static_cast<std::size_t>(b)];
    });
    bytes_ = std::move(item_bytes);
  }

  std::optional<std::pair<int, std::vector<int>>> solve() {
    if (bytes_.empty()) return std::make_pair(0, std::vector<int>{});
    if (bin_caps_.empty()) return std::nullopt;
    loads_.assign(bin_caps_.size(), 0);
    counts_.assign(bin_caps_.size(), 0);
    assign_.assign(bytes_.size(), -1);
    best_max_ = static_cast<int>(bytes_.size()) + 1;
    dfs(0, 0);
    if (best_max_ > static_cast<int>(bytes_.size())) return std::nullopt;
    return std::make_pair(best_max_, best_assign_);
  }

 private:
  void dfs(std::size_t pos, int cur_max) {
    if (cur_max >= best_max_) return;
    if (pos == order_.size()) {
      best_max_ = cur_max;
      best_assign_ = assign_;
      return;
    }
    int item = order_[pos];
    // one empty bin per capacity class is enough; the rest are symmetric
    std::vector<bool> tried_empty_class(8, false);
    for (std::size_t b = 0; b < bin_caps_.size(); ++b) {
      if (counts_[b] == 0) {
        auto cls = static_cast<std::size_t>(bin_class_[b]);
        if (tried_empty_class[cls]) continue;
        tried_empty_class[cls] = true;
      }
      if (loads_[b] + bytes_[static_cast<std::size_t>(item)] > bin_caps_[b]) continue;
      loads_[b] += bytes_[static_cast<std::size_t>(item)];
      counts_[b]++;
      assign_[static_cast<std::size_t>(item)] = static_cast<int>(b);
      dfs(pos + 1, std::max(cur_max, counts_[b]));
      loads_[b] -= bytes_[static_cast<std::size_t>(item)];
      counts_[b]--;
      assign_[static_cast<std::size_t>(item)] = -1;
    }
  }

  std::vector<std::uint64_t> bytes_, bin_caps_;
  std::vector<int> bin_class_, order_;
  std::vector<std::uint64_t> loads_;
  std::vector<int> counts_, assign_, best_assign_;
  int best_max_ = 0;
};

struct SearchState {
  const ModelSpec* model;
  const MemoryHierarchySpec* hierarchy;
  const BruteForceOptions* options;
  std::vector<std::uint64_t> bank_caps, channel_caps;
  std::vector<int> bank_class, channel_class;

  double best_latency = 0;
  std::uint64_t best_bytes = 0;
  bool found = false;
  PlacementPlan best_plan;

  void consider(const std::vector<PhysicalTable>& physicals);
};

void SearchState::consider(const std::vector<PhysicalTable>& physicals) {
  const int count = static_cast<int>(physicals.size());
  std::uint64_t bytes = 0;
  for (const auto& p : physicals) bytes += p.byte_size();
  const double onchip_ns = hierarchy->onchip_access_ns;
  const double dram_ns = hierarchy->dram_access_ns;

  for (std::uint32_t mask = 0; mask < (1u << count); ++mask) {
    std::vector<std::uint64_t> cached_bytes, off_bytes;
    std::vector<int> cached_pos, off_pos;
    for (int i = 0; i < count; ++i) {
      if (mask & (1u << i)) {
        cached_bytes.push_back(physicals[static_cast<std::size_t>(i)].byte_size());
        cached_pos.push_back(i);
      } else {
        off_bytes.push_back(physicals[static_cast<std::size_t>(i)].byte_size());
        off_pos.push_back(i);
      }
    }
    auto bank_pack = MinMaxCountPacker(cached_bytes, bank_caps, bank_class).solve();
    if (!bank_pack) continue;
    auto chan_pack = MinMaxCountPacker(off_bytes, channel_caps, channel_class).solve();
    if (!chan_pack) continue;

    double bank_crit = bank_pack->first * onchip_ns;
    double dram_crit = chan_pack->first * dram_ns;
    if (!off_pos.empty() && bank_crit > dram_crit) continue;  // on-chip latency rule
    double latency =
        std::max(bank_crit, dram_crit) * static_cast<double>(model->lookups_per_table);

    if (found && (latency > best_latency ||
                  (latency == best_latency && bytes >= best_bytes)))
      continue;

    PlacementPlan plan;
    plan.physicals = physicals;
    plan.onchip_assignment.assign(static_cast<std::size_t>(hierarchy->onchip_banks), {});
    plan.dram_assignment.assign(static_cast<std::size_t>(hierarchy->offchip_channels()), {});
    for (std::size_t k = 0; k < cached_pos.size(); ++k)
      plan.onchip_assignment[static_cast<std::size_t>(bank_pack->second[k])].push_back(
          cached_pos[k]);
    for (std::size_t k = 0; k < off_pos.size(); ++k)
      plan.dram_assignment[static_cast<std::size_t>(chan_pack->second[k])].push_back(off_pos[k]);
    finalize_plan_layout(*model, plan);
    best_plan = std::move(plan);
    best_latency = latency;
    best_bytes = bytes;
    found = true;
  }
}

// Enumerates partitions of the tables into singles and product groups of up to
// max_group_size members, recursing on the lowest unassigned table.
void enumerate_partitions(const ModelSpec& model, std::vector<int>& remaining,
                          std::vector<PhysicalTable>& current, SearchState& state) {
  if (remaining.empty()) {
    state.consider(current);
    return;
  }
  int first = remaining.front();

  // as a single
  std::vector<int> rest(remaining.begin() + 1, remaining.end());
  current.push_back(single_table(model.tables[static_cast<std::size_t>(first)]));
  enumerate_partitions(model, rest, current, state);
  current.pop_back();

  // grouped with later tables
  const int max_extra = state.options->max_group_size - 1;
  std::vector<int> partners;
  auto grow = [&](auto&& self, std::size_t start_at) -> void {
    for (std::size_t j = start_at; j < rest.size(); ++j) {
      partners.push_back(rest[j]);
      std::vector<TableSpec> members{model.tables[static_cast<std::size_t>(first)]};
      for (int p : partners) members.push_back(model.tables[static_cast<std::size_t>(p)]);
      bool ok = true;
      for (const auto& m : members)
        if (m.elem_bits != members[0].elem_bits) ok = false;
      if (ok) {
        PhysicalTable group;
        try {
          group = combine_many(members, state.options->product_cap_bytes);
        } catch (const CapacityError&) {
          ok = false;
        }
        if (ok) {
          std::vector<int> next;
          for (std::size_t k = 0; k < rest.size(); ++k) {
            bool taken = false;
            for (int p : partners) taken = taken || rest[k] == p;
            if (!taken) next.push_back(rest[k]);
          }
          current.push_back(group);
          enumerate_partitions(model, next, current, state);
          current.pop_back();
          if (static_cast<int>(partners.size()) < max_extra) self(self, j + 1);
        }
      }
      partners.pop_back();
    }
  };
  grow(grow, 0);
}

}  // namespace

PlanResult brute_force_plan(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                            const BruteForceOptions& options) {
  validate(model);
  validate(hierarchy);
  const int n = static_cast<int>(model.tables.size());
  if (n > options.limit)
    throw ValidationError("brute_force_plan",
                          "refusing " + std::to_string(n) + " tables, limit is " +
                              std::to_string(options.limit));

  SearchState state;
  state.model = &model;
  state.hierarchy = &hierarchy;
  state.options = &options;
  state.bank_caps.assign(static_cast<std::size_t>(hierarchy.onchip_banks),
                         hierarchy.onchip_bank_capacity);
  state.bank_class.assign(static_cast<std::size_t>(hierarchy.onchip_banks), 0);
  for (int c = 0; c < hierarchy.offchip_channels(); ++c) {
    state.channel_caps.push_back(hierarchy.channel_capacity(c));
    state.channel_class.push_back(c < hierarchy.hbm_channels ? 0 : 1);
  }

  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  std::vector<PhysicalTable> current;
  enumerate_partitions(model, all, current, state);

  if (!state.found) throw InfeasibleError("brute_force_plan: no feasible placement");
  validate_plan(model, hierarchy, state.best_plan);
  CostEstimate est = cost(model, state.best_plan, hierarchy);
  return PlanResult{std::move(state.best_plan), est};
}

}  // namespace embedplan
