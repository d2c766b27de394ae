#include "embedplan/cartesian.hpp"

#include <algorithm>
#include <limits>

namespace embedplan {

namespace {

std::uint64_t mul_saturating(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
  return r;
}

}  // namespace

std::uint64_t PhysicalTable::rows() const {
  std::uint64_t r = 1;
  for (const auto& m : members) r = mul_saturating(r, m.rows);
  return r;
}

std::uint32_t PhysicalTable::dim() const {
  std::uint32_t d = 0;
  for (const auto& m : members) d += m.dim;
  return d;
}

int PhysicalTable::key_id() const {
  int k = members.front().table_id;
  for (const auto& m : members) k = std::min(k, m.table_id);
  return k;
}

PhysicalTable single_table(const TableSpec& t) {
  return PhysicalTable{{{t.id, t.rows, t.dim}}, t.elem_bits};
}

std::uint64_t product_byte_size(const TableSpec& a, const TableSpec& b) {
  std::uint64_t rows = mul_saturating(a.rows, b.rows);
  std::uint64_t row_bytes =
      static_cast<std::uint64_t>(a.dim + b.dim) * (a.elem_bits / 8);
  return mul_saturating(rows, row_bytes);
}

PhysicalTable combine_many(const std::vector<TableSpec>& tables, std::uint64_t cap_bytes) {
  if (tables.size() < 2)
    throw ValidationError("combine", "a Cartesian group needs at least two members");
  for (std::size_t i = 1; i < tables.size(); ++i) {
    if (tables[i].elem_bits != tables[0].elem_bits)
      throw ValidationError("combine", "members must share elem_bits");
  }
  std::vector<TableSpec> ordered = tables;
  std::sort(ordered.begin(), ordered.end(), [](const TableSpec& x, const TableSpec& y) {
    if (x.byte_size() != y.byte_size()) return x.byte_size() > y.byte_size();
    return x.id < y.id;
  });
  PhysicalTable p;
  p.elem_bits = ordered[0].elem_bits;
  for (const auto& t : ordered) p.members.push_back({t.id, t.rows, t.dim});
  if (p.byte_size() > cap_bytes)
    throw CapacityError("product of tables would need " + std::to_string(p.byte_size()) +
                        " bytes, cap is " + std::to_string(cap_bytes));
  return p;
}

PhysicalTable combine(const TableSpec& a, const TableSpec& b, std::uint64_t cap_bytes) {
  return combine_many({a, b}, cap_bytes);
}

std::uint64_t product_index(const PhysicalTable& physical,
                            std::span<const std::uint64_t> member_indices) {
  if (member_indices.size() != physical.members.size())
    throw ValidationError("product_index", "expected " +
                                               std::to_string(physical.members.size()) +
                                               " indices, got " +
                                               std::to_string(member_indices.size()));
  std::uint64_t flat = 0;
  for (std::size_t k = 0; k < physical.members.size(); ++k) {
    if (member_indices[k] >= physical.members[k].rows)
      throw ValidationError("product_index",
                            "index " + std::to_string(member_indices[k]) +
                                " out of range for member table " +
                                std::to_string(physical.members[k].table_id));
    flat = flat * physical.members[k].rows + member_indices[k];
  }
  return flat;
}

std::vector<std::uint64_t> product_unindex(const PhysicalTable& physical, std::uint64_t flat) {
  if (flat >= physical.rows())
    throw ValidationError("product_unindex", "row " + std::to_string(flat) + " out of range");
  std::vector<std::uint64_t> indices(physical.members.size());
  for (std::size_t k = physical.members.size(); k-- > 0;) {
    indices[k] = flat % physical.members[k].rows;
    flat /= physical.members[k].rows;
  }
  return indices;
}

std::vector<float> materialize(const PhysicalTable& physical, const RowFetcher& fetch,
                               std::uint64_t cap_bytes) {
  if (physical.byte_size() > cap_bytes)
    throw CapacityError("materialize: table needs " + std::to_string(physical.byte_size()) +
                        " bytes, cap is " + std::to_string(cap_bytes));
  const std::uint64_t rows = physical.rows();
  const std::uint32_t dim = physical.dim();
  std::vector<float> out(rows * dim);
  std::vector<std::uint64_t> idx(physical.members.size(), 0);
  for (std::uint64_t r = 0; r < rows; ++r) {
    float* row = out.data() + r * dim;
    std::uint32_t offset = 0;
    for (std::size_t k = 0; k < physical.members.size(); ++k) {
      const auto& m = physical.members[k];
      fetch(m.table_id, idx[k], std::span<float>(row + offset, m.dim));
      offset += m.dim;
    }
    // odometer increment, least significant member last
    for (std::size_t k = physical.members.size(); k-- > 0;) {
      if (++idx[k] < physical.members[k].rows) break;
      idx[k] = 0;
    }
  }
  return out;
}

double storage_overhead(const std::vector<TableSpec>& original,
                        const std::vector<PhysicalTable>& transformed) {
  std::vector<int> seen(original.size(), 0);
  std::uint64_t transformed_bytes = 0;
  for (const auto& p : transformed) {
    transformed_bytes += p.byte_size();
    for (const auto& m : p.members) {
      if (m.table_id < 0 || m.table_id >= static_cast<int>(original.size()))
        throw ValidationError("storage_overhead", "unknown table id " + std::to_string(m.table_id));
      seen[m.table_id]++;
    }
  }
  std::uint64_t original_bytes = 0;
  bool any_group = false;
  for (const auto& p : transformed) any_group = any_group || p.is_group();
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (seen[i] != 1)
      throw ValidationError("storage_overhead", "table " + std::to_string(i) + " covered " +
                                                    std::to_string(seen[i]) + " times");
    original_bytes += original[i].byte_size();
  }
  if (!any_group) return 1.0;  // exact, no float division noise
  return static_cast<double>(transformed_bytes) / static_cast<double>(original_bytes);
}

}  // namespace embedplan
