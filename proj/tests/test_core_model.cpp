#include <string>

#include "doctest.h"
#include "embedplan/spec_io.hpp"
#include "embedplan/synthetic.hpp"
#include "support/helpers.hpp"

using namespace embedplan;

namespace {

// 47 tables whose dims sum to 352: 44 x dim4 + 2 x dim64 + 1 x dim48
std::string small_model_fixture() {
  std::string out = R"({"tables":[)";
  for (int i = 0; i < 44; ++i) out += R"({"rows":8,"dim":4},)";
  out += R"({"rows":8,"dim":64},{"rows":8,"dim":64},{"rows":8,"dim":48}],)";
  out += R"("hidden_dims":[1024,512,256]})";
  return out;
}

}  // namespace

TEST_CASE("load_spec fills defaults and computes concat length") {
  SpecDocument doc = load_spec(small_model_fixture());
  CHECK(doc.model.tables.size() == 47);
  CHECK(doc.model.concat_length() == 352);
  // omitted memory block falls back to defaults
  CHECK(doc.hierarchy.hbm_channels == 32);
  CHECK(doc.hierarchy.ddr_channels == 2);
  CHECK(doc.hierarchy.offchip_channels() == 34);
  CHECK(doc.model.tables[0].elem_bits == 32);
}

TEST_CASE("load_spec accepts the minimal single-table model") {
  SpecDocument doc = load_spec(R"({"tables":[{"rows":1,"dim":1}]})");
  CHECK(doc.model.tables.size() == 1);
  CHECK(doc.model.concat_length() == 1);
}

TEST_CASE("load_spec rejects invalid element width, naming the field") {
  try {
    load_spec(R"({"tables":[{"rows":4,"dim":4,"elem_bits":8}]})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& err) {
    CHECK(err.field() == "tables[0].elem_bits");
  }
}

TEST_CASE("load_spec separates parse errors from validation errors") {
  CHECK_THROWS_AS(load_spec("{not json"), ParseError);
  CHECK_THROWS_AS(load_spec(R"({"hidden_dims":[4]})"), ParseError);  // missing tables
  CHECK_THROWS_AS(load_spec(R"({"tables":[{"rows":0,"dim":4}]})"), ValidationError);
  CHECK_THROWS_AS(load_spec(R"({"tables":[{"rows":4,"dim":4}],"memory":{"hbm_channels":0,"ddr_channels":0}})"),
                  ValidationError);
  CHECK_THROWS_AS(
      load_spec(R"({"tables":[{"rows":4,"dim":4}],"memory":{"onchip_access_ns":500.0}})"),
      ValidationError);  // slower than DRAM
}

TEST_CASE("spec serialize/parse round-trip is identity") {
  for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
    SpecDocument doc;
    doc.model = generate_synthetic(12, SizeProfile::generic(), seed);
    SpecDocument back = load_spec(save_spec(doc));
    REQUIRE(back.model.tables.size() == doc.model.tables.size());
    for (std::size_t i = 0; i < doc.model.tables.size(); ++i) {
      CHECK(back.model.tables[i].rows == doc.model.tables[i].rows);
      CHECK(back.model.tables[i].dim == doc.model.tables[i].dim);
      CHECK(back.model.tables[i].elem_bits == doc.model.tables[i].elem_bits);
    }
    CHECK(back.model.hidden_dims == doc.model.hidden_dims);
    CHECK(back.hierarchy.hbm_channels == doc.hierarchy.hbm_channels);
    CHECK(save_spec(back) == save_spec(doc));
    CHECK(spec_digest(back) == spec_digest(doc));
  }
}

TEST_CASE("concat_length equals the brute-force sum over member dims") {
  auto model = testing::make_model({{10, 4}, {20, 8}, {5, 16}});
  model.lookups_per_table = 2;
  std::uint64_t expected = 0;
  for (const auto& t : model.tables) expected += t.dim * 2;
  CHECK(model.concat_length() == expected);
}

TEST_CASE("generate_synthetic is a pure function of (parameters, seed)") {
  auto d1 = generate_synthetic(47, SizeProfile::generic(), 7);
  auto d2 = generate_synthetic(47, SizeProfile::generic(), 7);
  REQUIRE(d1.tables.size() == 47);
  for (std::size_t i = 0; i < d1.tables.size(); ++i)
    CHECK(d1.tables[i].rows == d2.tables[i].rows);

  auto a = generate_synthetic(47, SizeProfile::table3_small(), 7);
  auto b = generate_synthetic(47, SizeProfile::table3_small(), 7);
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    CHECK(a.tables[i].rows == b.tables[i].rows);
    CHECK(a.tables[i].dim == b.tables[i].dim);
  }
  auto c = generate_synthetic(47, SizeProfile::table3_small(), 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.tables.size(); ++i)
    any_diff = any_diff || a.tables[i].rows != c.tables[i].rows;
  CHECK(any_diff);
}

TEST_CASE("table3-small profile has its 8 on-chip-sized tables") {
  MemoryHierarchySpec h;
  for (std::uint64_t seed : {7ull, 21ull, 400ull}) {
    auto model = generate_synthetic(47, SizeProfile::table3_small(), seed);
    CHECK(model.concat_length() == 352);
    int onchip_sized = 0;
    for (const auto& t : model.tables)
      if (t.byte_size() <= h.onchip_bank_capacity) ++onchip_sized;
    CHECK(onchip_sized >= 8);
  }
}

TEST_CASE("table3-large profile spans at least four orders of magnitude") {
  auto model = generate_synthetic(98, SizeProfile::table3_large(), 7);
  CHECK(model.concat_length() == 876);
  std::uint64_t smallest = model.tables[0].byte_size(), largest = 0;
  for (const auto& t : model.tables) {
    smallest = std::min(smallest, t.byte_size());
    largest = std::max(largest, t.byte_size());
  }
  CHECK(largest / smallest >= 10000);
}

TEST_CASE("structured profiles reject mismatched table counts") {
  CHECK_THROWS_AS(generate_synthetic(48, SizeProfile::table3_small(), 1), ValidationError);
  CHECK_NOTHROW(generate_synthetic(3, SizeProfile::generic(), 1));
}
