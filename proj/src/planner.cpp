#include "embedplan/planner.hpp"

#include <algorithm>
#include <optional>

namespace embedplan {

namespace {

// ascending (byte_size, key id): the canonical physical-table order
std::vector<PhysicalTable> sorted_physicals(std::vector<PhysicalTable> tables) {
  std::sort(tables.begin(), tables.end(), [](const PhysicalTable& a, const PhysicalTable& b) {
    if (a.byte_size() != b.byte_size()) return a.byte_size() < b.byte_size();
    return a.key_id() < b.key_id();
  });
  return tables;
}

// channel with the fewest tables, ties by smallest byte load, then lowest index
int pick_least_loaded(const std::vector<int>& counts, const std::vector<std::uint64_t>& loads,
                      const std::vector<std::uint64_t>& caps, std::uint64_t item) {
  int best = -1;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (loads[b] + item > caps[b]) continue;
    if (best < 0 || counts[b] < counts[best] ||
        (counts[b] == counts[best] && loads[b] < loads[best]))
      best = static_cast<int>(b);
  }
  return best;
}

// Largest-first onto the least-loaded feasible channel. `indices` are positions
// into `phys`; returns one list per channel.
std::vector<std::vector<int>> allocate_channels(const std::vector<PhysicalTable>& phys,
                                                std::vector<int> indices,
                                                const MemoryHierarchySpec& hierarchy) {
  std::sort(indices.begin(), indices.end(), [&](int a, int b) {
    if (phys[a].byte_size() != phys[b].byte_size())
      return phys[a].byte_size() > phys[b].byte_size();
    return phys[a].key_id() < phys[b].key_id();
  });
  const int channels = hierarchy.offchip_channels();
  std::vector<std::vector<int>> assign(channels);
  std::vector<int> counts(channels, 0);
  std::vector<std::uint64_t> loads(channels, 0), caps(channels);
  for (int c = 0; c < channels; ++c) caps[c] = hierarchy.channel_capacity(c);
  for (int pi : indices) {
    int c = pick_least_loaded(counts, loads, caps, phys[pi].byte_size());
    if (c < 0)
      throw InfeasibleError("table of " + std::to_string(phys[pi].byte_size()) +
                            " bytes fits no off-chip channel");
    assign[c].push_back(pi);
    counts[c]++;
    loads[c] += phys[pi].byte_size();
  }
  return assign;
}

int max_count(const std::vector<std::vector<int>>& assign) {
  int m = 0;
  for (const auto& bin : assign) m = std::max(m, static_cast<int>(bin.size()));
  return m;
}

}  // namespace

PlacementPlan allocate_to_banks(const ModelSpec& model,
                                const std::vector<PhysicalTable>& tables,
                                const MemoryHierarchySpec& hierarchy) {
  const std::vector<PhysicalTable> phys = sorted_physicals(tables);
  const int total = static_cast<int>(phys.size());

  // Greedy cacheable prefix: how many of the smallest tables fit on-chip at
  // all, and which bank each one would take. The choice for table k does not
  // depend on how many tables after it are cached, so prefixes are stable.
  std::vector<int> bank_choice;
  {
    std::vector<int> counts(hierarchy.onchip_banks, 0);
    std::vector<std::uint64_t> loads(hierarchy.onchip_banks, 0);
    std::vector<std::uint64_t> caps(hierarchy.onchip_banks, hierarchy.onchip_bank_capacity);
    for (int k = 0; k < total; ++k) {
      int b = pick_least_loaded(counts, loads, caps, phys[k].byte_size());
      if (b < 0) break;
      bank_choice.push_back(b);
      counts[b]++;
      loads[b] += phys[k].byte_size();
    }
  }
  const int cache_max = static_cast<int>(bank_choice.size());

  struct Candidate {
    PlacementPlan plan;
    double latency = 0;
  };
  auto build = [&](int cached) -> std::optional<Candidate> {
    Candidate c;
    c.plan.physicals = phys;
    c.plan.onchip_assignment.assign(hierarchy.onchip_banks, {});
    for (int k = 0; k < cached; ++k) c.plan.onchip_assignment[bank_choice[k]].push_back(k);
    std::vector<int> offchip;
    for (int k = cached; k < total; ++k) offchip.push_back(k);
    try {
      c.plan.dram_assignment = allocate_channels(phys, offchip, hierarchy);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
    double bank_crit = max_count(c.plan.onchip_assignment) * hierarchy.onchip_access_ns;
    double dram_crit = max_count(c.plan.dram_assignment) * hierarchy.dram_access_ns;
    c.latency = std::max(bank_crit, dram_crit);
    return c;
  };

  // Cache as many of the smallest tables as the latency rule allows: with at
  // least one off-chip table, a bank's access time must stay within the
  // off-chip critical path. Caching more only shrinks that path, so the
  // largest valid prefix is also the fastest.
  std::optional<Candidate> best;
  for (int cached = std::min(cache_max, total - 1); cached >= 0; --cached) {
    auto c = build(cached);
    if (!c) continue;
    double bank_crit = max_count(c->plan.onchip_assignment) * hierarchy.onchip_access_ns;
    double dram_crit = max_count(c->plan.dram_assignment) * hierarchy.dram_access_ns;
    if (bank_crit <= dram_crit) {
      best = std::move(c);
      break;
    }
  }
  // Fully on-chip placement needs no rule check; take it when it wins.
  if (cache_max == total) {
    auto all = build(total);
    if (all && (!best || all->latency <= best->latency)) best = std::move(all);
  }
  if (!best) throw InfeasibleError("no feasible placement for " + std::to_string(total) + " tables");

  finalize_plan_layout(model, best->plan);
  return std::move(best->plan);
}

namespace {

std::vector<TableSpec> tables_by_size(const ModelSpec& model) {
  std::vector<TableSpec> sorted = model.tables;
  std::sort(sorted.begin(), sorted.end(), [](const TableSpec& a, const TableSpec& b) {
    if (a.byte_size() != b.byte_size()) return a.byte_size() < b.byte_size();
    return a.id < b.id;
  });
  return sorted;
}

PlanResult finish(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                  PlacementPlan plan) {
  validate_plan(model, hierarchy, plan);
  CostEstimate est = cost(model, plan, hierarchy);
  return PlanResult{std::move(plan), est};
}

}  // namespace

PlanResult plan_from_pairs(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                           const std::vector<std::pair<int, int>>& pairs,
                           std::uint64_t product_cap_bytes) {
  validate(model);
  validate(hierarchy);
  std::vector<bool> used(model.tables.size(), false);
  std::vector<PhysicalTable> physicals;
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= static_cast<int>(model.tables.size()) ||
        b >= static_cast<int>(model.tables.size()) || a == b || used[a] || used[b])
      throw ValidationError("pairs", "pairs must name distinct, unused table ids");
    used[a] = used[b] = true;
    physicals.push_back(combine(model.tables[a], model.tables[b], product_cap_bytes));
  }
  for (const auto& t : model.tables)
    if (!used[t.id]) physicals.push_back(single_table(t));
  return finish(model, hierarchy, allocate_to_banks(model, physicals, hierarchy));
}

PlanResult heuristic_plan(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                          const PlannerOptions& options) {
  validate(model);
  validate(hierarchy);
  const std::vector<TableSpec> sorted = tables_by_size(model);
  const int n_tables = static_cast<int>(sorted.size());

  int n_cap = 0;
  if (options.enable_cartesian) {
    // N - C pairs already bring the off-chip count down to the channel count
    // (one round); any further product only adds storage
    n_cap = std::min(n_tables, 2 * std::max(n_tables - hierarchy.offchip_channels(), 0));
    n_cap -= n_cap % 2;
  }

  std::optional<PlanResult> best;
  for (int n = 0; n <= n_cap; n += 2) {
    std::vector<PhysicalTable> physicals;
    std::vector<bool> paired(n, false);
    for (int i = 0; i < n / 2; ++i) {
      const TableSpec& small = sorted[i];
      const TableSpec& large = sorted[n - 1 - i];
      if (small.elem_bits != large.elem_bits) continue;
      if (product_byte_size(small, large) > options.product_cap_bytes) continue;
      physicals.push_back(combine(small, large, options.product_cap_bytes));
      paired[i] = paired[n - 1 - i] = true;
    }
    for (int i = 0; i < n; ++i)
      if (!paired[i]) physicals.push_back(single_table(sorted[i]));
    for (int i = n; i < n_tables; ++i) physicals.push_back(single_table(sorted[i]));

    PlacementPlan plan;
    try {
      plan = allocate_to_banks(model, physicals, hierarchy);
    } catch (const InfeasibleError&) {
      continue;
    }
    CostEstimate est = cost(model, plan, hierarchy);
    if (!best || est.lookup_latency_ns < best->cost.lookup_latency_ns ||
        (est.lookup_latency_ns == best->cost.lookup_latency_ns &&
         est.total_bytes < best->cost.total_bytes)) {
      best = PlanResult{std::move(plan), est};
    }
  }
  if (!best)
    throw InfeasibleError("heuristic_plan: no feasible placement, even without products");
  validate_plan(model, hierarchy, best->plan);
  return std::move(*best);
}

}  // namespace embedplan
