#include <set>

#include "doctest.h"
#include "embedplan/cartesian.hpp"
#include "embedplan/engine.hpp"
#include "support/helpers.hpp"

using namespace embedplan;

namespace {

// logical rows for materialize tests: value encodes (table, row, col)
RowFetcher tagged_rows() {
  return [](int table_id, std::uint64_t row, std::span<float> out) {
    for (std::size_t c = 0; c < out.size(); ++c)
      out[c] = static_cast<float>(table_id * 10000 + static_cast<int>(row) * 100 +
                                  static_cast<int>(c));
  };
}

}  // namespace

TEST_CASE("combining two 2-row tables yields a 4-row product") {
  TableSpec a{0, 2, 4, 32}, b{1, 2, 4, 32};
  auto group = combine(a, b);
  CHECK(group.rows() == 4);
  CHECK(group.dim() == 8);
  CHECK(group.is_group());
}

TEST_CASE("combining with a 1-row table keeps the row count") {
  TableSpec a{0, 37, 4, 32}, b{1, 1, 8, 32};
  auto group = combine(a, b);
  CHECK(group.rows() == 37);
  CHECK(group.dim() == 12);
}

TEST_CASE("product byte size matches independent arithmetic") {
  TableSpec a{0, 100, 4, 32}, b{1, 50, 8, 32};
  // 100*50 rows, 12 elements each, 4 bytes per element
  std::uint64_t expected = std::uint64_t{100} * 50 * (4 + 8) * 4;
  CHECK(expected == 240000);
  CHECK(combine(a, b).byte_size() == expected);
  CHECK(product_byte_size(a, b) == expected);
}

TEST_CASE("combine enforces the size cap and elem_bits agreement") {
  TableSpec a{0, 1u << 20, 64, 32}, b{1, 1u << 20, 64, 32};
  CHECK_THROWS_AS(combine(a, b), CapacityError);
  TableSpec c{0, 4, 4, 32}, d{1, 4, 4, 16};
  CHECK_THROWS_AS(combine(c, d), ValidationError);
}

TEST_CASE("the larger table provides the high-order digit") {
  TableSpec small{3, 2, 4, 32}, large{1, 100, 4, 32};
  auto group = combine(small, large);
  CHECK(group.members[0].table_id == 1);
  CHECK(group.members[1].table_id == 3);
}

TEST_CASE("product_index basics") {
  TableSpec a{0, 3, 4, 32}, b{1, 2, 4, 32};
  auto group = combine(a, b);  // a first (larger bytes), rows_b = 2
  std::vector<std::uint64_t> zeros{0, 0};
  CHECK(product_index(group, zeros) == 0);
  std::vector<std::uint64_t> last{1, 1};
  CHECK(product_index(group, last) == 3);
  std::vector<std::uint64_t> bad{0, 5};
  CHECK_THROWS_AS(product_index(group, bad), ValidationError);
}

TEST_CASE("product_index is a bijection and product_unindex inverts it") {
  TableSpec a{0, 3, 4, 32}, b{1, 4, 4, 32};
  auto group = combine(a, b);
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < group.members[0].rows; ++i) {
    for (std::uint64_t j = 0; j < group.members[1].rows; ++j) {
      std::vector<std::uint64_t> idx{i, j};
      std::uint64_t flat = product_index(group, idx);
      CHECK(flat < 12);
      seen.insert(flat);
      CHECK(product_unindex(group, flat) == idx);
    }
  }
  CHECK(seen.size() == 12);  // onto 0..11
}

TEST_CASE("mixed radix addressing extends to triples") {
  TableSpec a{0, 3, 4, 32}, b{1, 4, 4, 32}, c{2, 5, 4, 32};
  auto group = combine_many({a, b, c});
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> idx(3);
  for (idx[0] = 0; idx[0] < group.members[0].rows; ++idx[0])
    for (idx[1] = 0; idx[1] < group.members[1].rows; ++idx[1])
      for (idx[2] = 0; idx[2] < group.members[2].rows; ++idx[2]) {
        std::uint64_t flat = product_index(group, idx);
        seen.insert(flat);
        CHECK(product_unindex(group, flat) == idx);
      }
  CHECK(seen.size() == 60);
}

TEST_CASE("materialized product rows concatenate the right member rows") {
  TableSpec a{0, 2, 4, 32}, b{1, 2, 2, 32};
  auto group = combine(a, b);
  auto contents = materialize(group, tagged_rows());
  REQUIRE(contents.size() == 4 * 6);
  // row 1 = (A entry 0, B entry 1)
  const float* row1 = contents.data() + 1 * 6;
  CHECK(row1[0] == 0.0f);      // table 0, row 0, col 0
  CHECK(row1[3] == 3.0f);      // table 0, row 0, col 3
  CHECK(row1[4] == 10100.0f);  // table 1, row 1, col 0
  CHECK(row1[5] == 10101.0f);
}

TEST_CASE("a 1-row partner repeats its single row in every product row") {
  TableSpec a{0, 5, 4, 32}, b{1, 1, 3, 32};
  auto group = combine(a, b);
  auto contents = materialize(group, tagged_rows());
  for (std::uint64_t r = 0; r < 5; ++r) {
    const float* row = contents.data() + r * 7;
    for (int c = 0; c < 3; ++c) CHECK(row[4 + c] == static_cast<float>(10000 + c));
  }
}

TEST_CASE("every product row equals the pairwise concatenation, exhaustively") {
  TableSpec a{0, 3, 2, 32}, b{1, 2, 4, 32};
  auto group = combine(a, b);
  auto fetch = tagged_rows();
  auto contents = materialize(group, fetch);
  const auto& first = group.members[0];
  const auto& second = group.members[1];
  std::vector<float> left(first.dim), right(second.dim);
  for (std::uint64_t i = 0; i < first.rows; ++i) {
    for (std::uint64_t j = 0; j < second.rows; ++j) {
      std::vector<std::uint64_t> idx{i, j};
      const float* row = contents.data() + product_index(group, idx) * group.dim();
      fetch(first.table_id, i, left);
      fetch(second.table_id, j, right);
      for (std::uint32_t c = 0; c < first.dim; ++c) CHECK(row[c] == left[c]);
      for (std::uint32_t c = 0; c < second.dim; ++c) CHECK(row[first.dim + c] == right[c]);
    }
  }
}

TEST_CASE("materialize respects the byte cap") {
  TableSpec a{0, 1024, 64, 32}, b{1, 1024, 64, 32};
  auto group = combine(a, b, 1ull << 30);  // 512 MiB worth of floats
  CHECK_THROWS_AS(materialize(group, tagged_rows(), 1024 * 1024), CapacityError);
}

TEST_CASE("storage_overhead is exactly 1 without groups") {
  auto model = testing::make_model({{10, 4}, {1000000, 64}});
  std::vector<PhysicalTable> transformed;
  for (const auto& t : model.tables) transformed.push_back(single_table(t));
  CHECK(storage_overhead(model.tables, transformed) == 1.0);
}

TEST_CASE("storage_overhead matches a spreadsheet-style computation") {
  // two 10-row dim-4 tables combined, next to one 10^6-row dim-64 table
  auto model = testing::make_model({{10, 4}, {10, 4}, {1000000, 64}});
  std::vector<PhysicalTable> transformed{combine(model.tables[0], model.tables[1]),
                                         single_table(model.tables[2])};
  const double original = 10 * 4 * 4 + 10 * 4 * 4 + 1000000.0 * 64 * 4;
  const double combined = 10.0 * 10 * (4 + 4) * 4 + 1000000.0 * 64 * 4;
  CHECK(storage_overhead(model.tables, transformed) ==
        doctest::Approx(combined / original).epsilon(1e-12));
  CHECK(storage_overhead(model.tables, transformed) > 1.0);
}

TEST_CASE("storage_overhead rejects double or missing coverage") {
  auto model = testing::make_model({{10, 4}, {10, 4}});
  std::vector<PhysicalTable> missing{single_table(model.tables[0])};
  CHECK_THROWS_AS(storage_overhead(model.tables, missing), ValidationError);
  std::vector<PhysicalTable> doubled{combine(model.tables[0], model.tables[1]),
                                     single_table(model.tables[1])};
  CHECK_THROWS_AS(storage_overhead(model.tables, doubled), ValidationError);
}

TEST_CASE("materialized slices reproduce the logical tables under real contents") {
  // semantic preservation at the materialize level, with engine content
  auto model = testing::make_model({{6, 4}, {4, 8}});
  const std::uint64_t seed = 17;
  RowFetcher fetch = [&](int table_id, std::uint64_t row, std::span<float> out) {
    const auto& t = model.tables[static_cast<std::size_t>(table_id)];
    for (std::uint32_t c = 0; c < t.dim; ++c)
      out[c] = logical_value(seed, table_id, row, c, t.elem_bits);
  };
  auto group = combine(model.tables[0], model.tables[1]);
  auto contents = materialize(group, fetch);
  for (std::uint64_t i = 0; i < 6; ++i) {
    for (std::uint64_t j = 0; j < 4; ++j) {
      std::uint64_t flat =
          group.members[0].table_id == 0 ? product_index(group, std::vector<std::uint64_t>{i, j})
                                         : product_index(group, std::vector<std::uint64_t>{j, i});
      const float* row = contents.data() + flat * group.dim();
      std::uint32_t offset_a = group.members[0].table_id == 0 ? 0 : group.members[0].dim;
      std::uint32_t offset_b = group.members[0].table_id == 1 ? 0 : group.members[0].dim;
      for (std::uint32_t c = 0; c < 4; ++c)
        CHECK(row[offset_a + c] == logical_value(seed, 0, i, c, 32));
      for (std::uint32_t c = 0; c < 8; ++c)
        CHECK(row[offset_b + c] == logical_value(seed, 1, j, c, 32));
    }
  }
}
