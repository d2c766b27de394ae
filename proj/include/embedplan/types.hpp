#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace embedplan {

/// Input document could not be parsed at all (bad JSON, wrong top-level shape).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A well-formed document violates an invariant. `field()` is the path of the
/// offending value, e.g. "tables[3].elem_bits".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// No feasible placement exists (e.g. a table exceeds every channel's free
/// capacity, or a requested product would not fit any bank).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// A materialization or product would exceed a configured byte cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// One logical embedding table. `id` is the ordinal position in the model;
/// concatenation order of lookup outputs follows id order.
struct TableSpec {
  int id = 0;
  std::uint64_t rows = 0;
  std::uint32_t dim = 0;
  std::uint32_t elem_bits = 32;  // 16 or 32

  std::uint64_t byte_size() const { return rows * dim * (elem_bits / 8); }
};

/// Memory tiers: many independent off-chip channels (HBM-like plus DDR-like)
/// and a handful of small on-chip banks. Off-chip channels are addressed by a
/// unified ordinal, HBM channels first, then DDR; they share one access
/// latency and differ only in capacity.
struct MemoryHierarchySpec {
  int hbm_channels = 32;
  std::uint64_t hbm_channel_capacity = 256ull * 1024 * 1024;
  int ddr_channels = 2;
  std::uint64_t ddr_channel_capacity = 16ull * 1024 * 1024 * 1024;
  int onchip_banks = 8;
  std::uint64_t onchip_bank_capacity = 8 * 1024;
  double dram_access_ns = 300.0;
  double onchip_access_ns = 100.0;

  int offchip_channels() const { return hbm_channels + ddr_channels; }
  std::uint64_t channel_capacity(int channel) const {
    return channel < hbm_channels ? hbm_channel_capacity : ddr_channel_capacity;
  }
};

/// A full model: ordered embedding tables plus the top MLP shape.
struct ModelSpec {
  std::vector<TableSpec> tables;
  std::vector<std::uint32_t> hidden_dims;
  int lookups_per_table = 1;

  /// Sum of vector dims across tables (no lookup multiplier).
  std::uint64_t sum_dims() const;
  /// Width of the concatenated dense vector fed to the MLP.
  std::uint64_t concat_length() const { return sum_dims() * lookups_per_table; }
  std::uint64_t total_bytes() const;
};

void validate(const TableSpec& table, const std::string& path);
void validate(const ModelSpec& model);
void validate(const MemoryHierarchySpec& hierarchy);

}  // namespace embedplan
