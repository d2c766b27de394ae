#include "embedplan/engine.hpp"

#include <cmath>
#include <mutex>
#include <thread>

#include "embedplan/cartesian.hpp"
#include "embedplan/rng.hpp"

namespace embedplan {

float quantize_q15(float x) {
  float scaled = std::nearbyintf(x * 32768.0f);
  if (scaled < -32768.0f) scaled = -32768.0f;
  if (scaled > 32767.0f) scaled = 32767.0f;
  return scaled / 32768.0f;
}

float quantize_act16(float x) {
  float scaled = std::nearbyintf(x * 1024.0f);
  if (scaled < -32768.0f) scaled = -32768.0f;
  if (scaled > 32767.0f) scaled = 32767.0f;
  return scaled / 1024.0f;
}

float logical_value(std::uint64_t seed, int table_id, std::uint64_t row, std::uint64_t col,
                    std::uint32_t elem_bits) {
  std::uint64_t h = hash_mix(seed, static_cast<std::uint64_t>(table_id) + 1, row + 1, col + 1);
  float v = hash_to_unit_float(h);
  return elem_bits == 16 ? quantize_q15(v) : v;
}

MlpWeights make_mlp_weights(const ModelSpec& model, std::uint64_t seed) {
  MlpWeights w;
  std::vector<std::uint32_t> widths;
  widths.push_back(static_cast<std::uint32_t>(model.concat_length()));
  for (auto h : model.hidden_dims) widths.push_back(h);
  widths.push_back(1);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    MlpWeights::Layer layer;
    layer.in = widths[l];
    layer.out = widths[l + 1];
    float limit = std::sqrt(6.0f / (static_cast<float>(layer.in) + static_cast<float>(layer.out)));
    layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
    layer.biases.resize(layer.out);
    for (std::uint32_t o = 0; o < layer.out; ++o) {
      for (std::uint32_t i = 0; i < layer.in; ++i) {
        std::uint64_t h = hash_mix(seed ^ 0xa5a5a5a5ull, l + 1, o + 1, i + 1);
        layer.weights[static_cast<std::size_t>(o) * layer.in + i] =
            hash_to_unit_float(h) * limit;
      }
      layer.biases[o] =
          hash_to_unit_float(hash_mix(seed ^ 0x5a5a5a5aull, l + 1, o + 1, 0)) * 0.01f;
    }
    w.layers.push_back(std::move(layer));
  }
  return w;
}

float mlp_forward(const MlpWeights& weights, std::span<const float> input, Precision precision,
                  Activation activation) {
  if (weights.layers.empty())
    throw ValidationError("weights", "at least the output layer is required");
  if (input.size() != weights.layers.front().in)
    throw ValidationError("input", "got " + std::to_string(input.size()) + " values, expected " +
                                       std::to_string(weights.layers.front().in));
  const bool q15 = precision == Precision::bits16;
  std::vector<float> current(input.begin(), input.end());
  if (q15)
    for (auto& v : current) v = quantize_q15(v);

  for (std::size_t l = 0; l < weights.layers.size(); ++l) {
    const auto& layer = weights.layers[l];
    if (current.size() != layer.in)
      throw ValidationError("weights", "layer " + std::to_string(l) + " expects " +
                                           std::to_string(layer.in) + " inputs, got " +
                                           std::to_string(current.size()));
    std::vector<float> next(layer.out);
    for (std::uint32_t o = 0; o < layer.out; ++o) {
      float acc = q15 ? quantize_q15(layer.biases[o]) : layer.biases[o];
      const float* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
      for (std::uint32_t i = 0; i < layer.in; ++i) {
        float wi = q15 ? quantize_q15(w[i]) : w[i];
        acc += wi * current[i];
      }
      next[o] = acc;
    }
    const bool last = l + 1 == weights.layers.size();
    if (!last) {
      for (auto& v : next) {
        if (activation == Activation::rectifier && v < 0.0f) v = 0.0f;
        if (q15) v = quantize_act16(v);
      }
    }
    current = std::move(next);
  }
  // logistic squashing onto (0, 1)
  return 1.0f / (1.0f + std::exp(-current[0]));
}

EmbeddingStore EmbeddingStore::build(const ModelSpec& model, const PlacementPlan& plan,
                                     std::uint64_t seed, const EngineOptions& options) {
  if (model.lookups_per_table != 1)
    throw ValidationError("lookups_per_table",
                          "the functional engine supports exactly one lookup per table");
  EmbeddingStore store;
  store.plan_ = plan;
  store.parallel_ = options.parallel_lookup;
  store.table_dims_.reserve(model.tables.size());
  store.out_offsets_.reserve(model.tables.size());
  for (const auto& t : model.tables) {
    store.out_offsets_.push_back(store.concat_length_);
    store.table_dims_.push_back(t.dim);
    store.concat_length_ += t.dim;
  }

  std::uint64_t total = 0;
  for (const auto& phys : plan.physicals) {
    total += phys.byte_size();
    if (total > options.max_total_bytes)
      throw CapacityError("store would exceed the memory cap of " +
                          std::to_string(options.max_total_bytes) + " bytes");
  }

  RowFetcher fetch = [&](int table_id, std::uint64_t row, std::span<float> out) {
    const auto& t = model.tables[static_cast<std::size_t>(table_id)];
    for (std::uint32_t c = 0; c < t.dim; ++c)
      out[c] = logical_value(seed, table_id, row, c, t.elem_bits);
  };
  store.contents_.reserve(plan.physicals.size());
  for (const auto& phys : plan.physicals)
    store.contents_.push_back(materialize(phys, fetch, options.max_physical_bytes));
  return store;
}

std::span<const float> EmbeddingStore::physical_contents(int physical_index) const {
  return contents_[static_cast<std::size_t>(physical_index)];
}

std::vector<float> EmbeddingStore::lookup_concat(const Query& query) const {
  std::vector<float> out(concat_length_);
  lookup_concat(query, out);
  return out;
}

void EmbeddingStore::lookup_concat(const Query& query, std::span<float> out) const {
  if (query.indices.size() != table_dims_.size())
    throw ValidationError("query", "expected " + std::to_string(table_dims_.size()) +
                                       " indices, got " + std::to_string(query.indices.size()));
  if (out.size() != concat_length_)
    throw ValidationError("out", "output span has the wrong length");

  // Each physical table contributes disjoint output slices, so execution
  // order cannot change the result; the parallel mode relies on this.
  auto process_physical = [&](std::size_t pi) {
    const PhysicalTable& phys = plan_.physicals[pi];
    std::vector<std::uint64_t> member_indices(phys.members.size());
    for (std::size_t k = 0; k < phys.members.size(); ++k) {
      int t = phys.members[k].table_id;
      std::uint64_t idx = query.indices[static_cast<std::size_t>(t)];
      if (idx >= phys.members[k].rows)
        throw ValidationError("query[" + std::to_string(t) + "]",
                              "index " + std::to_string(idx) + " out of range for " +
                                  std::to_string(phys.members[k].rows) + " rows");
      member_indices[k] = idx;
    }
    std::uint64_t row = product_index(phys, member_indices);
    const float* row_data = contents_[pi].data() + row * phys.dim();
    std::uint32_t offset = 0;
    for (const auto& m : phys.members) {
      float* dst = out.data() + out_offsets_[static_cast<std::size_t>(m.table_id)];
      const float* src = row_data + offset;
      for (std::uint32_t c = 0; c < m.dim; ++c) dst[c] = src[c];
      offset += m.dim;
    }
  };

  const std::size_t count = plan_.physicals.size();
  if (!parallel_ || count < 2) {
    for (std::size_t pi = 0; pi < count; ++pi) process_physical(pi);
    return;
  }
  unsigned workers = std::min<unsigned>(4, std::thread::hardware_concurrency());
  workers = std::max(workers, 1u);
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t pi = w; pi < count; pi += workers) process_physical(pi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace embedplan
