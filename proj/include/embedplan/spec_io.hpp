#pragma once

#include <string>

#include "embedplan/types.hpp"

namespace embedplan {

struct SpecDocument {
  ModelSpec model;
  MemoryHierarchySpec hierarchy;
};

/// Parses and validates a model/hierarchy document. Omitted memory fields (or
/// the whole "memory" object) fall back to defaults; elem_bits defaults to 32.
/// Throws ParseError for malformed documents, ValidationError (with the field
/// path) for violated invariants.
SpecDocument load_spec(const std::string& json_text);
SpecDocument load_spec_file(const std::string& path);

/// Serializes with stable key order; load_spec(save_spec(x)) == x.
std::string save_spec(const SpecDocument& doc);
void save_spec_file(const SpecDocument& doc, const std::string& path);

/// FNV-1a digest of the canonical serialization; stable across runs.
std::string spec_digest(const SpecDocument& doc);

}  // namespace embedplan
