#include "embedplan/synthetic.hpp"

#include <algorithm>

#include "embedplan/cartesian.hpp"
#include "embedplan/rng.hpp"

namespace embedplan {

namespace {

constexpr std::uint64_t kDeskMaxTableBytes = 64ull * 1024 * 1024;

// Large tables must refuse Cartesian partners: any product with one of them
// has to exceed the product cap. The binding partner is the smallest tiny
// table (30 rows, dim 4), so rows >= 1.4 * cap / (30 * 4 * (4 + dim)).
std::uint64_t blocker_min_rows(std::uint32_t dim) {
  return 14ull * kDefaultProductCapBytes / (10ull * 30 * 4 * (4 + dim));
}

TableBand blocker_band(int count, std::uint32_t dim) {
  return TableBand{count, {dim}, blocker_min_rows(dim), kDeskMaxTableBytes / (4ull * dim),
                   kDeskMaxTableBytes};
}

}  // namespace

int SizeProfile::natural_count() const {
  int total = 0;
  for (const auto& band : bands) total += band.count;
  return total;
}

SizeProfile SizeProfile::generic() {
  SizeProfile p;
  p.name = "default";
  p.scalable = true;
  p.bands = {TableBand{0, {4, 8, 16, 32, 64}, 32, 262144, kDeskMaxTableBytes}};
  return p;
}

SizeProfile SizeProfile::table3_small() {
  SizeProfile p;
  p.name = "table3-small";
  p.bands = {
      TableBand{8, {4}, 30, 80, 0},        // on-chip sized
      TableBand{10, {16}, 144, 192, 0},    // product candidates
      blocker_band(18, 4),                 // large tables
      blocker_band(11, 8),
  };
  return p;
}

SizeProfile SizeProfile::table3_large() {
  SizeProfile p;
  p.name = "table3-large";
  p.bands = {
      TableBand{16, {4}, 30, 80, 0},
      TableBand{28, {16}, 144, 192, 0},
      blocker_band(17, 4),
      blocker_band(37, 8),
  };
  return p;
}

SizeProfile SizeProfile::by_name(const std::string& name) {
  if (name == "default") return generic();
  if (name == "table3-small") return table3_small();
  if (name == "table3-large") return table3_large();
  throw ValidationError("profile", "unknown profile '" + name + "'");
}

std::vector<std::string> SizeProfile::names() {
  return {"default", "table3-small", "table3-large"};
}

ModelSpec generate_synthetic(int n_tables, const SizeProfile& profile, std::uint64_t seed) {
  if (n_tables < 1) throw ValidationError("n_tables", "must be >= 1");
  std::vector<TableBand> bands = profile.bands;
  if (profile.scalable) {
    if (bands.size() != 1)
      throw ValidationError("profile", "scalable profiles must have exactly one band");
    bands[0].count = n_tables;
  } else if (n_tables != profile.natural_count()) {
    throw ValidationError("n_tables", "profile '" + profile.name + "' generates " +
                                          std::to_string(profile.natural_count()) +
                                          " tables, not " + std::to_string(n_tables));
  }

  SplitMix64 rng(seed ^ 0x7f4a7c15ull);
  std::vector<TableSpec> tables;
  for (const auto& band : bands) {
    for (int i = 0; i < band.count; ++i) {
      TableSpec t;
      t.elem_bits = profile.elem_bits;
      t.dim = rng.pick(band.dims);
      std::uint64_t hi = band.max_rows;
      if (band.max_bytes > 0)
        hi = std::min(hi, band.max_bytes / (static_cast<std::uint64_t>(t.dim) *
                                            (profile.elem_bits / 8)));
      t.rows = rng.next_log_uniform(std::min(band.min_rows, hi), hi);
      tables.push_back(t);
    }
  }
  rng.shuffle(tables);
  for (std::size_t i = 0; i < tables.size(); ++i) tables[i].id = static_cast<int>(i);

  ModelSpec model;
  model.tables = std::move(tables);
  model.hidden_dims = profile.hidden_dims;
  validate(model);
  return model;
}

ComparisonInstance comparison_instance(int n_tables, std::uint64_t seed) {
  if (n_tables < 1) throw ValidationError("n_tables", "must be >= 1");
  SplitMix64 rng(seed ^ 0x1ce4e5b9ull);
  ComparisonInstance inst;
  inst.hierarchy.hbm_channels = 2 + static_cast<int>(rng.next_below(3));
  inst.hierarchy.hbm_channel_capacity = 4ull * 1024 * 1024 * 1024;
  inst.hierarchy.ddr_channels = 0;
  inst.hierarchy.onchip_banks = static_cast<int>(rng.next_below(3));
  inst.hierarchy.onchip_bank_capacity = 4 * 1024;
  const std::vector<std::uint32_t> dims{4, 8, 16, 32};
  std::uint32_t dim = rng.pick(dims);  // one dim per instance
  for (int i = 0; i < n_tables; ++i) {
    TableSpec t;
    t.id = i;
    t.dim = dim;
    t.rows = rng.next_log_uniform(272, 3000);  // always above bank capacity
    inst.model.tables.push_back(t);
  }
  inst.model.hidden_dims = {16, 8};
  validate(inst.model);
  return inst;
}

}  // namespace embedplan
