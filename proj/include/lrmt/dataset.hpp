#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "lrmt/network.hpp"
#include "lrmt/tensor.hpp"

namespace lrmt {

struct LabeledSample {
  Tensor input;
  std::vector<int> labels;  // each entry -1 or +1
};

struct Dataset {
  std::vector<LabeledSample> samples;
  std::size_t task_count = 0;
  std::vector<std::size_t> input_shape;

  std::size_t size() const { return samples.size(); }
};

struct SplitSpec {
  std::uint64_t seed = 1;
  double fraction = 0.5;
};

/// JSON-lines reader; the first line is the {"m", "input_shape"} header.
Dataset load_dataset(const std::filesystem::path& path);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Block-average feature map used when planting synthetic labels:
/// non-overlapping windows of 8 (shrunk to the input length when shorter).
Tensor reference_features(const Tensor& input);

/// Standard-normal sequences of length input_len labeled through a planted
/// rank-limited linear map of their block averages, with optional label
/// noise. Fully determined by gen_seed.
Dataset generate_synthetic(std::uint64_t gen_seed, std::size_t n, std::size_t m,
                           std::size_t input_len, std::size_t latent_rank, double noise_std);

/// The label map generate_synthetic plants for the same seed and geometry.
Tensor synthetic_planted_map(std::uint64_t gen_seed, std::size_t m, std::size_t input_len,
                             std::size_t latent_rank);

/// Seeded shuffle, then a prefix/suffix cut at floor(n * fraction).
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

struct Evaluation {
  std::vector<double> per_task_accuracy;
  double average_accuracy = 0.0;
};

Evaluation evaluate(const Params& params, const NetworkConfig& config, const Dataset& dataset);

}  // namespace lrmt
