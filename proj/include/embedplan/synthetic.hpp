#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "embedplan/types.hpp"

namespace embedplan {

/// One size band of a synthetic profile: `count` tables whose dim is picked
/// uniformly from `dims` and whose row count is log-uniform in
/// [min_rows, max_rows], clamped so byte_size never exceeds max_bytes.
struct TableBand {
  int count = 0;
  std::vector<std::uint32_t> dims;
  std::uint64_t min_rows = 1;
  std::uint64_t max_rows = 1;
  std::uint64_t max_bytes = 0;  // 0 = unlimited
};

/// Table-size skew parameters for the synthetic generator.
struct SizeProfile {
  std::string name;
  std::vector<TableBand> bands;
  std::vector<std::uint32_t> hidden_dims{1024, 512, 256};
  std::uint32_t elem_bits = 32;
  bool scalable = false;  // single-band profiles that accept any table count

  int natural_count() const;

  static SizeProfile generic();
  /// 47 tables shaped like the smaller reference model: 8 on-chip-sized
  /// tables, 10 mid tables that pair well, 29 large tables whose products
  /// with anything would blow the product cap. Dims sum to 352.
  static SizeProfile table3_small();
  /// 98-table variant (16 tiny, 28 mid, 54 large); dims sum to 876.
  static SizeProfile table3_large();
  static SizeProfile by_name(const std::string& name);
  static std::vector<std::string> names();
};

/// Deterministic synthetic model: a pure function of (n_tables, profile, seed).
/// Scalable profiles accept any n_tables >= 1; structured profiles require
/// n_tables to match their natural count.
ModelSpec generate_synthetic(int n_tables, const SizeProfile& profile, std::uint64_t seed);

struct ComparisonInstance {
  ModelSpec model;
  MemoryHierarchySpec hierarchy;
};

/// Small random instance for heuristic-vs-oracle studies: 2-4 off-chip
/// channels with ample capacity, banks too small to cache anything, one vector
/// dim per instance, row counts spread enough that some products hit the cap.
ComparisonInstance comparison_instance(int n_tables, std::uint64_t seed);

}  // namespace embedplan
