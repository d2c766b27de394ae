#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "embedplan/plan.hpp"
#include "embedplan/types.hpp"

namespace embedplan {

/// Per-query lookup indices, one per original table, in id order.
struct Query {
  std::vector<std::uint64_t> indices;
};

enum class Precision { bits32, bits16 };

/// Q1.15 grid used to emulate 16-bit fixed-point storage (embeddings,
/// weights): round-to-nearest onto multiples of 2^-15, clamped to [-1, 1).
float quantize_q15(float x);

/// Q5.10 grid for 16-bit activations, which need integer headroom that Q1.15
/// lacks: multiples of 2^-10, clamped to [-32, 32).
float quantize_act16(float x);

/// Deterministic pseudo-random content of logical table `table_id` at
/// (row, col). 16-bit tables return values already on the Q1.15 grid.
float logical_value(std::uint64_t seed, int table_id, std::uint64_t row, std::uint64_t col,
                    std::uint32_t elem_bits);

struct MlpWeights {
  struct Layer {
    std::uint32_t in = 0, out = 0;
    std::vector<float> weights;  // row-major, out x in
    std::vector<float> biases;   // out
  };
  std::vector<Layer> layers;  // hidden layers then the 1-wide output layer
};

/// Deterministic weights for the model's MLP (hidden_dims then output).
MlpWeights make_mlp_weights(const ModelSpec& model, std::uint64_t seed);

enum class Activation { rectifier, identity };

/// Forward pass: the chosen activation on hidden layers, logistic squashing on
/// the output; the result is a CTR in (0, 1). 16-bit mode stores weights and
/// inputs on the Q1.15 grid and activations on the Q5.10 grid.
float mlp_forward(const MlpWeights& weights, std::span<const float> input, Precision precision,
                  Activation activation = Activation::rectifier);

struct EngineOptions {
  std::uint64_t max_total_bytes = 2ull * 1024 * 1024 * 1024;
  std::uint64_t max_physical_bytes = kDefaultProductCapBytes;
  bool parallel_lookup = false;  // per-physical-table threads; output identical
};

/// Materialized physical tables honoring a placement plan. Contents are a pure
/// function of (model, plan, seed); products are materialized from the same
/// logical rows as the singles they replace.
class EmbeddingStore {
 public:
  static EmbeddingStore build(const ModelSpec& model, const PlacementPlan& plan,
                              std::uint64_t seed, const EngineOptions& options = {});

  /// Concatenated dense vector for a query, in table id order.
  std::vector<float> lookup_concat(const Query& query) const;
  void lookup_concat(const Query& query, std::span<float> out) const;

  std::uint64_t concat_length() const { return concat_length_; }
  const PlacementPlan& plan() const { return plan_; }
  std::span<const float> physical_contents(int physical_index) const;

 private:
  PlacementPlan plan_;
  std::vector<std::vector<float>> contents_;   // per physical table, row-major
  std::vector<std::uint64_t> out_offsets_;     // per original table id
  std::vector<std::uint32_t> table_dims_;
  std::uint64_t concat_length_ = 0;
  bool parallel_ = false;
};

}  // namespace embedplan
