#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "embedplan/cartesian.hpp"
#include "embedplan/types.hpp"

namespace embedplan {

/// Where one original table's vector lives inside a physical row.
struct ConcatSlice {
  int table_id = 0;
  int physical_index = 0;
  std::uint32_t offset = 0;  // element offset within the physical row
  std::uint32_t length = 0;  // == dim of the original table
};

/// Complete placement: physical tables (singles and products), their
/// assignment to on-chip banks and unified off-chip channels, and the map
/// restoring canonical concatenation order.
struct PlacementPlan {
  std::vector<PhysicalTable> physicals;
  std::vector<std::pair<int, int>> cartesian_pairs;   // (high-order id, low-order id)
  std::vector<std::vector<int>> onchip_assignment;    // bank -> physical indices
  std::vector<std::vector<int>> dram_assignment;      // channel -> physical indices
  std::vector<ConcatSlice> concat_map;                // indexed by original table id

  bool has_offchip_tables() const;
  std::uint64_t total_bytes() const;
};

/// Derives cartesian_pairs and the concat map from `physicals`; offsets follow
/// each group's member order, output order follows table id order.
void finalize_plan_layout(const ModelSpec& model, PlacementPlan& plan);

/// Checks every plan invariant: exact coverage, capacity sums, concat map
/// tiling, and the on-chip latency rule (a bank's access time must not exceed
/// the off-chip critical path; vacuous when nothing is stored off-chip).
/// Returns human-readable violations; empty means the plan is valid.
std::vector<std::string> plan_violations(const ModelSpec& model,
                                         const MemoryHierarchySpec& hierarchy,
                                         const PlacementPlan& plan);

/// Throws ValidationError when plan_violations is non-empty.
void validate_plan(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                   const PlacementPlan& plan);

}  // namespace embedplan
