#include "embedplan/plan.hpp"

#include <algorithm>

#include "embedplan/cost.hpp"

namespace embedplan {

bool PlacementPlan::has_offchip_tables() const {
  for (const auto& ch : dram_assignment)
    if (!ch.empty()) return true;
  return false;
}

std::uint64_t PlacementPlan::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& p : physicals) total += p.byte_size();
  return total;
}

void finalize_plan_layout(const ModelSpec& model, PlacementPlan& plan) {
  plan.cartesian_pairs.clear();
  plan.concat_map.assign(model.tables.size(), ConcatSlice{});
  std::vector<bool> covered(model.tables.size(), false);
  for (std::size_t pi = 0; pi < plan.physicals.size(); ++pi) {
    const auto& phys = plan.physicals[pi];
    if (phys.members.size() == 2)
      plan.cartesian_pairs.emplace_back(phys.members[0].table_id, phys.members[1].table_id);
    std::uint32_t offset = 0;
    for (const auto& m : phys.members) {
      if (m.table_id < 0 || m.table_id >= static_cast<int>(model.tables.size()))
        throw ValidationError("plan", "unknown table id " + std::to_string(m.table_id));
      if (covered[m.table_id])
        throw ValidationError("plan", "table " + std::to_string(m.table_id) + " covered twice");
      covered[m.table_id] = true;
      plan.concat_map[m.table_id] =
          ConcatSlice{m.table_id, static_cast<int>(pi), offset, m.dim};
      offset += m.dim;
    }
  }
  for (std::size_t t = 0; t < covered.size(); ++t) {
    if (!covered[t])
      throw ValidationError("plan", "table " + std::to_string(t) + " not covered");
  }
  std::sort(plan.cartesian_pairs.begin(), plan.cartesian_pairs.end());
}

namespace {

void check_assignment_side(const PlacementPlan& plan, const std::vector<std::vector<int>>& side,
                           const char* side_name, std::vector<int>& placed,
                           std::vector<std::string>& out) {
  for (std::size_t b = 0; b < side.size(); ++b) {
    for (int pi : side[b]) {
      if (pi < 0 || pi >= static_cast<int>(plan.physicals.size())) {
        out.push_back(std::string(side_name) + "[" + std::to_string(b) +
                      "] references unknown physical table " + std::to_string(pi));
        continue;
      }
      placed[pi]++;
    }
  }
}

}  // namespace

std::vector<std::string> plan_violations(const ModelSpec& model,
                                         const MemoryHierarchySpec& hierarchy,
                                         const PlacementPlan& plan) {
  std::vector<std::string> out;

  // every original table in exactly one physical table
  std::vector<int> covered(model.tables.size(), 0);
  for (const auto& phys : plan.physicals) {
    for (const auto& m : phys.members) {
      if (m.table_id < 0 || m.table_id >= static_cast<int>(model.tables.size())) {
        out.push_back("physical table references unknown table id " + std::to_string(m.table_id));
        continue;
      }
      const auto& t = model.tables[m.table_id];
      if (m.rows != t.rows || m.dim != t.dim)
        out.push_back("member shape mismatch for table " + std::to_string(m.table_id));
      covered[m.table_id]++;
    }
  }
  for (std::size_t t = 0; t < covered.size(); ++t) {
    if (covered[t] != 1)
      out.push_back("table " + std::to_string(t) + " covered " + std::to_string(covered[t]) +
                    " times");
  }

  // every physical table placed exactly once
  if (static_cast<int>(plan.onchip_assignment.size()) > hierarchy.onchip_banks)
    out.push_back("plan uses more banks than the hierarchy provides");
  if (static_cast<int>(plan.dram_assignment.size()) > hierarchy.offchip_channels())
    out.push_back("plan uses more channels than the hierarchy provides");
  std::vector<int> placed(plan.physicals.size(), 0);
  check_assignment_side(plan, plan.onchip_assignment, "onchip", placed, out);
  check_assignment_side(plan, plan.dram_assignment, "dram", placed, out);
  for (std::size_t pi = 0; pi < placed.size(); ++pi) {
    if (placed[pi] != 1)
      out.push_back("physical table " + std::to_string(pi) + " placed " +
                    std::to_string(placed[pi]) + " times");
  }

  // capacity sums
  for (std::size_t b = 0; b < plan.onchip_assignment.size(); ++b) {
    std::uint64_t bytes = 0;
    for (int pi : plan.onchip_assignment[b]) bytes += plan.physicals[pi].byte_size();
    if (bytes > hierarchy.onchip_bank_capacity)
      out.push_back("bank " + std::to_string(b) + " holds " + std::to_string(bytes) +
                    " bytes, capacity " + std::to_string(hierarchy.onchip_bank_capacity));
  }
  for (std::size_t c = 0; c < plan.dram_assignment.size(); ++c) {
    std::uint64_t bytes = 0;
    for (int pi : plan.dram_assignment[c]) bytes += plan.physicals[pi].byte_size();
    if (bytes > hierarchy.channel_capacity(static_cast<int>(c)))
      out.push_back("channel " + std::to_string(c) + " holds " + std::to_string(bytes) +
                    " bytes, capacity " +
                    std::to_string(hierarchy.channel_capacity(static_cast<int>(c))));
  }

  // concat map must tile [0, concat) in id order and point into the right rows
  if (plan.concat_map.size() != model.tables.size()) {
    out.push_back("concat_map has " + std::to_string(plan.concat_map.size()) + " entries, want " +
                  std::to_string(model.tables.size()));
  } else {
    for (std::size_t t = 0; t < model.tables.size(); ++t) {
      const auto& slice = plan.concat_map[t];
      if (slice.table_id != static_cast<int>(t)) {
        out.push_back("concat_map[" + std::to_string(t) + "] names table " +
                      std::to_string(slice.table_id));
        continue;
      }
      if (slice.length != model.tables[t].dim)
        out.push_back("concat_map[" + std::to_string(t) + "] length " +
                      std::to_string(slice.length) + " != dim " +
                      std::to_string(model.tables[t].dim));
      if (slice.physical_index < 0 ||
          slice.physical_index >= static_cast<int>(plan.physicals.size())) {
        out.push_back("concat_map[" + std::to_string(t) + "] points at unknown physical table");
        continue;
      }
      const auto& phys = plan.physicals[slice.physical_index];
      // the slice must be exactly the member's segment of the row
      std::uint32_t offset = 0;
      bool found = false;
      for (const auto& m : phys.members) {
        if (m.table_id == static_cast<int>(t)) {
          found = true;
          if (slice.offset != offset)
            out.push_back("concat_map[" + std::to_string(t) + "] offset " +
                          std::to_string(slice.offset) + " != member offset " +
                          std::to_string(offset));
          break;
        }
        offset += m.dim;
      }
      if (!found)
        out.push_back("concat_map[" + std::to_string(t) +
                      "] physical table does not contain the table");
    }
  }

  // on-chip latency rule: a bank's sequential accesses must not exceed the
  // off-chip critical path. Vacuous when everything is cached on-chip.
  if (plan.has_offchip_tables()) {
    int max_channel_accesses = 0;
    for (const auto& ch : plan.dram_assignment)
      max_channel_accesses = std::max(
          max_channel_accesses, static_cast<int>(ch.size()) * model.lookups_per_table);
    double dram_critical = max_channel_accesses * hierarchy.dram_access_ns;
    for (std::size_t b = 0; b < plan.onchip_assignment.size(); ++b) {
      double bank_ns = static_cast<double>(plan.onchip_assignment[b].size()) *
                       model.lookups_per_table * hierarchy.onchip_access_ns;
      if (bank_ns > dram_critical)
        out.push_back("bank " + std::to_string(b) + " needs " + std::to_string(bank_ns) +
                      " ns, exceeding the off-chip critical path of " +
                      std::to_string(dram_critical) + " ns");
    }
  }

  return out;
}

void validate_plan(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                   const PlacementPlan& plan) {
  auto violations = plan_violations(model, hierarchy, plan);
  if (!violations.empty()) {
    std::string msg = "invalid plan:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw ValidationError("plan", msg);
  }
}

}  // namespace embedplan
