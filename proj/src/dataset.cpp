#include "lrmt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include <json.hpp>

#include "lrmt/format.hpp"
#include "lrmt/linalg.hpp"
#include "lrmt/rng.hpp"

namespace lrmt {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(std::size_t lineno, const std::string& what) {
  throw ParseError("line " + std::to_string(lineno) + ": " + what);
}

// Flattens a nested JSON array into values, checking extents against the
// declared shape axis by axis.
void flatten_input(const json& node, const std::vector<std::size_t>& shape, std::size_t axis,
                   std::vector<double>& out, std::size_t lineno) {
  if (axis == shape.size()) {
    if (!node.is_number()) line_error(lineno, "input entries must be numbers");
    const double v = node.get<double>();
    if (!std::isfinite(v)) line_error(lineno, "input entries must be finite");
    out.push_back(v);
    return;
  }
  if (!node.is_array() || node.size() != shape[axis]) {
    line_error(lineno, "input does not match declared shape " + shape_str(shape));
  }
  for (const json& child : node) flatten_input(child, shape, axis + 1, out, lineno);
}

void write_input(std::string& out, const Tensor& input, std::size_t axis, std::size_t offset,
                 std::size_t block) {
  out += '[';
  const std::size_t extent = input.shape[axis];
  const std::size_t sub = block / extent;
  for (std::size_t i = 0; i < extent; ++i) {
    if (i > 0) out += ',';
    if (axis + 1 == input.rank()) {
      out += format_g17(input.values[offset + i]);
    } else {
      write_input(out, input, axis + 1, offset + i * sub, sub);
    }
  }
  out += ']';
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file " + path.string());

  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty dataset");
  ++lineno;

  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) line_error(lineno, "header is not a JSON object");
  if (!header.contains("m") || !header["m"].is_number_unsigned() || header["m"].get<std::size_t>() == 0) {
    line_error(lineno, "header needs a positive integer \"m\"");
  }
  if (!header.contains("input_shape") || !header["input_shape"].is_array()) {
    line_error(lineno, "header needs an \"input_shape\" array");
  }

  Dataset ds;
  ds.task_count = header["m"].get<std::size_t>();
  for (const json& e : header["input_shape"]) {
    if (!e.is_number_unsigned() || e.get<std::size_t>() == 0) {
      line_error(lineno, "input_shape entries must be positive integers");
    }
    ds.input_shape.push_back(e.get<std::size_t>());
  }
  if (ds.input_shape.empty()) line_error(lineno, "input_shape must be nonempty");

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) line_error(lineno, "record is not a JSON object");
    if (!rec.contains("input") || !rec.contains("labels")) {
      line_error(lineno, "record needs \"input\" and \"labels\"");
    }

    std::vector<double> values;
    values.reserve(shape_product(ds.input_shape));
    flatten_input(rec["input"], ds.input_shape, 0, values, lineno);

    if (!rec["labels"].is_array() || rec["labels"].size() != ds.task_count) {
      line_error(lineno, "labels must be an array of length " + std::to_string(ds.task_count));
    }
    std::vector<int> labels;
    labels.reserve(ds.task_count);
    for (const json& l : rec["labels"]) {
      if (!l.is_number_integer()) line_error(lineno, "labels must be integers");
      const int v = l.get<int>();
      if (v != 1 && v != -1) line_error(lineno, "labels must be -1 or +1, got " + std::to_string(v));
      labels.push_back(v);
    }

    ds.samples.push_back({Tensor(ds.input_shape, std::move(values)), std::move(labels)});
  }

  if (ds.samples.empty()) throw ParseError("empty dataset");
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write dataset file " + path.string());

  std::string header = "{\"m\":" + std::to_string(dataset.task_count) + ",\"input_shape\":[";
  for (std::size_t i = 0; i < dataset.input_shape.size(); ++i) {
    if (i > 0) header += ',';
    header += std::to_string(dataset.input_shape[i]);
  }
  header += "]}";
  out << header << '\n';

  for (const LabeledSample& s : dataset.samples) {
    std::string rec = "{\"input\":";
    write_input(rec, s.input, 0, 0, s.input.size());
    rec += ",\"labels\":[";
    for (std::size_t j = 0; j < s.labels.size(); ++j) {
      if (j > 0) rec += ',';
      rec += std::to_string(s.labels[j]);
    }
    rec += "]}";
    out << rec << '\n';
  }
  if (!out) throw ParseError("failed writing dataset file " + path.string());
}

Tensor reference_features(const Tensor& input) {
  const std::size_t len = input.size();
  const std::size_t window = std::min<std::size_t>(8, len);
  const std::size_t q = len / window;
  Tensor feats({q});
  for (std::size_t i = 0; i < q; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < window; ++k) acc += input.values[i * window + k];
    feats.values[i] = acc / static_cast<double>(window);
  }
  return feats;
}

namespace {

void check_generator_args(std::size_t n, std::size_t m, std::size_t input_len,
                          std::size_t latent_rank, double noise_std) {
  if (n == 0) throw ConfigError("need at least one sample");
  if (m == 0 || input_len == 0) throw ConfigError("task count and input length must be positive");
  if (latent_rank == 0) throw ConfigError("latent rank must be positive");
  if (latent_rank > m) {
    throw ConfigError("latent rank " + std::to_string(latent_rank) + " exceeds task count " +
                      std::to_string(m));
  }
  if (noise_std < 0.0) throw ConfigError("noise_std must be nonnegative");
}

// Rank-limited product of two unit-variance factors, drawn first from the
// generator stream so the map is recoverable for a given seed.
Tensor planted_map(Rng& rng, std::size_t m, std::size_t input_len, std::size_t latent_rank) {
  const std::size_t q = reference_features(Tensor({1, input_len})).size();
  Tensor a({m, latent_rank});
  for (double& v : a.values) v = rng.next_normal();
  Tensor b({latent_rank, q});
  for (double& v : b.values) v = rng.next_normal();
  return matmul(a, b);
}

}  // namespace

Tensor synthetic_planted_map(std::uint64_t gen_seed, std::size_t m, std::size_t input_len,
                             std::size_t latent_rank) {
  check_generator_args(1, m, input_len, latent_rank, 0.0);
  Rng rng(gen_seed);
  return planted_map(rng, m, input_len, latent_rank);
}

Dataset generate_synthetic(std::uint64_t gen_seed, std::size_t n, std::size_t m,
                           std::size_t input_len, std::size_t latent_rank, double noise_std) {
  check_generator_args(n, m, input_len, latent_rank, noise_std);

  Rng rng(gen_seed);
  const Tensor planted = planted_map(rng, m, input_len, latent_rank);

  Dataset ds;
  ds.task_count = m;
  ds.input_shape = {1, input_len};
  ds.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tensor x({1, input_len});
    for (double& v : x.values) v = rng.next_normal();
    const Tensor score = matvec(planted, reference_features(x));
    std::vector<int> labels(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double noisy = score.values[j] + noise_std * rng.next_normal();
      labels[j] = noisy >= 0.0 ? 1 : -1;
    }
    ds.samples.push_back({std::move(x), std::move(labels)});
  }
  return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
  if (dataset.size() < 2) throw ConfigError("need at least two samples to split");
  if (!(spec.fraction > 0.0 && spec.fraction < 1.0)) {
    throw ConfigError("split fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = dataset.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = rng.next_below(i + 1);
    std::swap(order[i], order[j]);
  }

  const std::size_t cut = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * spec.fraction));
  Dataset train{{}, dataset.task_count, dataset.input_shape};
  Dataset test{{}, dataset.task_count, dataset.input_shape};
  for (std::size_t i = 0; i < n; ++i) {
    (i < cut ? train : test).samples.push_back(dataset.samples[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

Evaluation evaluate(const Params& params, const NetworkConfig& config, const Dataset& dataset) {
  if (dataset.size() == 0) throw ConfigError("cannot evaluate an empty dataset");
  const std::size_t m = config.task_count;
  std::vector<std::size_t> correct(m, 0);
  for (const LabeledSample& s : dataset.samples) {
    const ForwardTrace trace = forward_features(params.extractor, s.input, config);
    const HeadOutputs heads = forward_heads(params.heads, trace.phi);
    const std::vector<int> pred = predict_labels(heads.g);
    if (s.labels.size() != m) {
      throw ShapeError("sample has " + std::to_string(s.labels.size()) + " labels, expected " +
                       std::to_string(m));
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (pred[j] == s.labels[j]) ++correct[j];
    }
  }
  Evaluation ev;
  ev.per_task_accuracy.resize(m);
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    ev.per_task_accuracy[j] = static_cast<double>(correct[j]) / static_cast<double>(dataset.size());
    sum += ev.per_task_accuracy[j];
  }
  ev.average_accuracy = sum / static_cast<double>(m);
  return ev;
}

}  // namespace lrmt
