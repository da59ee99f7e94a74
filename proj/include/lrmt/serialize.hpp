#pragma once

#include <filesystem>
#include <string>

#include "lrmt/optimizer.hpp"

namespace lrmt {

std::string csv_header();
std::string csv_row(std::size_t iter, const ObjectiveBreakdown& b);

std::string network_config_to_json(const NetworkConfig& config);
NetworkConfig network_config_from_json(const std::string& text);

std::string hyper_to_json(const Hyper& hyper);
Hyper hyper_from_json(const std::string& text);

struct ModelDoc {
  NetworkConfig config;
  Params params;
};

/// Single JSON document {config, filters, w1, w2}; numbers carry 17
/// significant digits so a round trip is value-exact.
std::string params_to_json(const NetworkConfig& config, const Params& params);
ModelDoc params_from_json(const std::string& text);

/// Model document plus {iter, seed, hyper, history, warnings}.
std::string checkpoint_to_json(const TrainState& state);
TrainState checkpoint_from_json(const std::string& text);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

void save_checkpoint(const TrainState& state, const std::filesystem::path& path);
TrainState load_checkpoint(const std::filesystem::path& path);

}  // namespace lrmt
