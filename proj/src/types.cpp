#include "embedplan/types.hpp"

namespace embedplan {

namespace {

// rows*dim*bytes must stay well inside uint64 so downstream products can be
// guarded arithmetically instead of overflowing.
constexpr std::uint64_t kMaxRows = 1ull << 40;
constexpr std::uint32_t kMaxDim = 1u << 16;

}  // namespace

std::uint64_t ModelSpec::sum_dims() const {
  std::uint64_t total = 0;
  for (const auto& t : tables) total += t.dim;
  return total;
}

std::uint64_t ModelSpec::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& t : tables) total += t.byte_size();
  return total;
}

void validate(const TableSpec& table, const std::string& path) {
  if (table.rows < 1 || table.rows > kMaxRows)
    throw ValidationError(path + ".rows", "must be in [1, 2^40], got " + std::to_string(table.rows));
  if (table.dim < 1 || table.dim > kMaxDim)
    throw ValidationError(path + ".dim", "must be in [1, 65536], got " + std::to_string(table.dim));
  if (table.elem_bits != 16 && table.elem_bits != 32)
    throw ValidationError(path + ".elem_bits", "must be 16 or 32, got " + std::to_string(table.elem_bits));
}

void validate(const ModelSpec& model) {
  if (model.tables.empty()) throw ValidationError("tables", "model must contain at least one table");
  for (std::size_t i = 0; i < model.tables.size(); ++i) {
    const auto& t = model.tables[i];
    std::string path = "tables[" + std::to_string(i) + "]";
    if (t.id != static_cast<int>(i))
      throw ValidationError(path + ".id", "ids must be ordinals 0..N-1 in order");
    validate(t, path);
  }
  for (std::size_t i = 0; i < model.hidden_dims.size(); ++i) {
    if (model.hidden_dims[i] < 1)
      throw ValidationError("hidden_dims[" + std::to_string(i) + "]", "layer width must be >= 1");
  }
  if (model.lookups_per_table < 1)
    throw ValidationError("lookups_per_table", "must be >= 1");
}

void validate(const MemoryHierarchySpec& h) {
  if (h.hbm_channels < 0) throw ValidationError("memory.hbm_channels", "must be >= 0");
  if (h.ddr_channels < 0) throw ValidationError("memory.ddr_channels", "must be >= 0");
  if (h.onchip_banks < 0) throw ValidationError("memory.onchip_banks", "must be >= 0");
  if (h.offchip_channels() < 1)
    throw ValidationError("memory", "at least one off-chip channel is required");
  if (h.hbm_channels > 0 && h.hbm_channel_capacity == 0)
    throw ValidationError("memory.hbm_channel_capacity", "must be positive");
  if (h.ddr_channels > 0 && h.ddr_channel_capacity == 0)
    throw ValidationError("memory.ddr_channel_capacity", "must be positive");
  if (h.onchip_banks > 0 && h.onchip_bank_capacity == 0)
    throw ValidationError("memory.onchip_bank_capacity", "must be positive");
  if (h.dram_access_ns <= 0.0)
    throw ValidationError("memory.dram_access_ns", "must be positive");
  if (h.onchip_access_ns <= 0.0)
    throw ValidationError("memory.onchip_access_ns", "must be positive");
  if (h.onchip_access_ns > h.dram_access_ns)
    throw ValidationError("memory.onchip_access_ns", "on-chip access must not be slower than DRAM");
}

}  // namespace embedplan
