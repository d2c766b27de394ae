#include "embedplan/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace embedplan {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t read_u64(const ordered_json& obj, const char* key, const std::string& path,
                       std::uint64_t fallback, bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw ParseError("missing field " + path);
    return fallback;
  }
  if (!it->is_number_integer() && !it->is_number_unsigned())
    throw ParseError(path + " must be an integer");
  if (it->is_number_integer() && it->get<std::int64_t>() < 0)
    throw ValidationError(path, "must be non-negative");
  return it->get<std::uint64_t>();
}

double read_double(const ordered_json& obj, const char* key, const std::string& path,
                   double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ParseError(path + " must be a number");
  return it->get<double>();
}

}  // namespace

SpecDocument load_spec(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ParseError("top-level value must be an object");

  SpecDocument out;

  auto tables_it = doc.find("tables");
  if (tables_it == doc.end()) throw ParseError("missing field tables");
  if (!tables_it->is_array()) throw ParseError("tables must be an array");
  int id = 0;
  for (const auto& entry : *tables_it) {
    std::string path = "tables[" + std::to_string(id) + "]";
    if (!entry.is_object()) throw ParseError(path + " must be an object");
    TableSpec t;
    t.id = id++;
    t.rows = read_u64(entry, "rows", path + ".rows", 0, true);
    t.dim = static_cast<std::uint32_t>(read_u64(entry, "dim", path + ".dim", 0, true));
    t.elem_bits =
        static_cast<std::uint32_t>(read_u64(entry, "elem_bits", path + ".elem_bits", 32, false));
    out.model.tables.push_back(t);
  }

  if (auto it = doc.find("hidden_dims"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("hidden_dims must be an array");
    int i = 0;
    for (const auto& d : *it) {
      std::string path = "hidden_dims[" + std::to_string(i++) + "]";
      if (!d.is_number_integer() && !d.is_number_unsigned())
        throw ParseError(path + " must be an integer");
      if (d.is_number_integer() && d.get<std::int64_t>() < 1)
        throw ValidationError(path, "layer width must be >= 1");
      out.model.hidden_dims.push_back(d.get<std::uint32_t>());
    }
  }
  out.model.lookups_per_table =
      static_cast<int>(read_u64(doc, "lookups_per_table", "lookups_per_table", 1, false));

  if (auto it = doc.find("memory"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("memory must be an object");
    const auto& m = *it;
    MemoryHierarchySpec defaults;
    auto& h = out.hierarchy;
    h.hbm_channels = static_cast<int>(
        read_u64(m, "hbm_channels", "memory.hbm_channels", defaults.hbm_channels, false));
    h.hbm_channel_capacity = read_u64(m, "hbm_channel_capacity", "memory.hbm_channel_capacity",
                                      defaults.hbm_channel_capacity, false);
    h.ddr_channels = static_cast<int>(
        read_u64(m, "ddr_channels", "memory.ddr_channels", defaults.ddr_channels, false));
    h.ddr_channel_capacity = read_u64(m, "ddr_channel_capacity", "memory.ddr_channel_capacity",
                                      defaults.ddr_channel_capacity, false);
    h.onchip_banks = static_cast<int>(
        read_u64(m, "onchip_banks", "memory.onchip_banks", defaults.onchip_banks, false));
    h.onchip_bank_capacity = read_u64(m, "onchip_bank_capacity", "memory.onchip_bank_capacity",
                                      defaults.onchip_bank_capacity, false);
    h.dram_access_ns = read_double(m, "dram_access_ns", "memory.dram_access_ns",
                                   defaults.dram_access_ns);
    h.onchip_access_ns = read_double(m, "onchip_access_ns", "memory.onchip_access_ns",
                                     defaults.onchip_access_ns);
  }

  validate(out.model);
  validate(out.hierarchy);
  return out;
}

SpecDocument load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_spec(buffer.str());
}

std::string save_spec(const SpecDocument& doc) {
  ordered_json out;
  out["tables"] = ordered_json::array();
  for (const auto& t : doc.model.tables) {
    ordered_json entry;
    entry["rows"] = t.rows;
    entry["dim"] = t.dim;
    entry["elem_bits"] = t.elem_bits;
    out["tables"].push_back(entry);
  }
  out["hidden_dims"] = doc.model.hidden_dims;
  out["lookups_per_table"] = doc.model.lookups_per_table;
  ordered_json mem;
  mem["hbm_channels"] = doc.hierarchy.hbm_channels;
  mem["hbm_channel_capacity"] = doc.hierarchy.hbm_channel_capacity;
  mem["ddr_channels"] = doc.hierarchy.ddr_channels;
  mem["ddr_channel_capacity"] = doc.hierarchy.ddr_channel_capacity;
  mem["onchip_banks"] = doc.hierarchy.onchip_banks;
  mem["onchip_bank_capacity"] = doc.hierarchy.onchip_bank_capacity;
  mem["dram_access_ns"] = doc.hierarchy.dram_access_ns;
  mem["onchip_access_ns"] = doc.hierarchy.onchip_access_ns;
  out["memory"] = mem;
  return out.dump(2) + "\n";
}

void save_spec_file(const SpecDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << save_spec(doc);
}

std::string spec_digest(const SpecDocument& doc) {
  std::string text = save_spec(doc);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace embedplan
