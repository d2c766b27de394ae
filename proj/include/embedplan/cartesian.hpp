#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "embedplan/types.hpp"

namespace embedplan {

/// Default hard cap on a materialized product: one HBM channel. Products that
/// would not fit a single bank are never worth forming.
constexpr std::uint64_t kDefaultProductCapBytes = 256ull * 1024 * 1024;

struct PhysicalMember {
  int table_id = 0;
  std::uint64_t rows = 0;
  std::uint32_t dim = 0;
};

/// One stored table: either a single logical table (one member) or the
/// Cartesian product of several (members in row-concatenation order, the
/// first member being the high-order digit of the row index).
struct PhysicalTable {
  std::vector<PhysicalMember> members;
  std::uint32_t elem_bits = 32;

  bool is_group() const { return members.size() > 1; }
  std::uint64_t rows() const;
  std::uint32_t dim() const;
  std::uint64_t byte_size() const { return rows() * dim() * (elem_bits / 8); }
  /// Tie-break identity: smallest member table id.
  int key_id() const;
};

PhysicalTable single_table(const TableSpec& t);

/// Cartesian product of two tables; the larger (by bytes, then lower id) comes
/// first so its index is the high-order digit. Throws CapacityError when the
/// product would exceed `cap_bytes`, ValidationError on elem_bits mismatch.
PhysicalTable combine(const TableSpec& a, const TableSpec& b,
                      std::uint64_t cap_bytes = kDefaultProductCapBytes);

/// k-ary generalization used by the brute-force planner's optional mode.
/// Member order: descending byte size, ties by ascending id.
PhysicalTable combine_many(const std::vector<TableSpec>& tables,
                           std::uint64_t cap_bytes = kDefaultProductCapBytes);

/// Byte size the product of `a` and `b` would have, for cap checks without
/// constructing the group. Saturates at uint64 max on overflow.
std::uint64_t product_byte_size(const TableSpec& a, const TableSpec& b);

/// Mixed-radix row addressing: member_indices[k] indexes member k, the first
/// member being the most significant digit. Bijective over [0, rows()).
std::uint64_t product_index(const PhysicalTable& physical,
                            std::span<const std::uint64_t> member_indices);

/// Inverse of product_index.
std::vector<std::uint64_t> product_unindex(const PhysicalTable& physical, std::uint64_t flat);

/// Fetches one logical row (dim elements) of a member table into `out`.
using RowFetcher =
    std::function<void(int table_id, std::uint64_t row, std::span<float> out)>;

/// Materializes a physical table row-major: row product_index(i0,..,ik) is the
/// concatenation of member rows i0..ik. Works for singles too (copy-through).
/// Throws CapacityError when the result exceeds `cap_bytes`.
std::vector<float> materialize(const PhysicalTable& physical, const RowFetcher& fetch,
                               std::uint64_t cap_bytes = kDefaultProductCapBytes);

/// Sum of transformed bytes over sum of original bytes. Exactly 1.0 when no
/// groups are present. Requires `transformed` to cover `original` exactly once.
double storage_overhead(const std::vector<TableSpec>& original,
                        const std::vector<PhysicalTable>& transformed);

}  // namespace embedplan
