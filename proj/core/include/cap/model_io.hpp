#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cap/types.hpp"

namespace cap {

/// Fit provenance stored next to the model.
struct ModelMeta {
  double d_factor = 3.0;
  int knots = 10;
  std::uint64_t seed = 0;
  Eigen::Index n = 0;
};

/// Schema: {"orientation", "p", "hyperplanes": [{"alpha", "beta": [...]}...],
/// "subsets": [[...]...], "meta": {"D", "L", "seed", "n"}}. Subset indices are
/// 1-based on disk; floats round-trip exactly.
std::string model_to_json(const PartitionModel& model, const ModelMeta& meta);

PartitionModel model_from_json(const std::string& text, ModelMeta* meta = nullptr);

void save_model(const std::filesystem::path& path, const PartitionModel& model,
                const ModelMeta& meta);
PartitionModel load_model(const std::filesystem::path& path, ModelMeta* meta = nullptr);

}  // namespace cap
