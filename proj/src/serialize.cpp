#include "lrmt/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lrmt/format.hpp"

namespace lrmt {

namespace {

using nlohmann::json;

void append_size_array(std::string& out, const std::vector<std::size_t>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(xs[i]);
  }
  out += ']';
}

void append_double_array(std::string& out, const std::vector<double>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += format_g17(xs[i]);
  }
  out += ']';
}

void append_tensor(std::string& out, const Tensor& t) {
  out += "{\"shape\":";
  append_size_array(out, t.shape);
  out += ",\"values\":";
  append_double_array(out, t.values);
  out += '}';
}

void append_config(std::string& out, const NetworkConfig& c) {
  out += "{\"input_shape\":";
  append_size_array(out, c.input_shape);
  out += ",\"conv\":[";
  for (std::size_t l = 0; l < 4; ++l) {
    if (l > 0) out += ',';
    out += "{\"out_channels\":" + std::to_string(c.conv[l].out_channels) +
           ",\"kernel\":" + std::to_string(c.conv[l].kernel) +
           ",\"stride\":" + std::to_string(c.conv[l].stride) +
           ",\"rectify\":" + (c.conv[l].rectify ? "true" : "false") + "}";
  }
  out += "],\"pool\":[";
  for (std::size_t l = 0; l < 3; ++l) {
    if (l > 0) out += ',';
    out += "{\"window\":" + std::to_string(c.pool[l].window) +
           ",\"stride\":" + std::to_string(c.pool[l].stride) + "}";
  }
  out += "],\"task_count\":" + std::to_string(c.task_count) + "}";
}

void append_hyper(std::string& out, const Hyper& h) {
  out += "{\"c1\":" + format_g17(h.c1) + ",\"c2\":" + format_g17(h.c2) +
         ",\"c3\":" + format_g17(h.c3) + ",\"c4\":" + format_g17(h.c4) +
         ",\"step_size\":" + format_g17(h.step_size) +
         ",\"l1_epsilon\":" + format_g17(h.l1_epsilon) +
         ",\"svd_sigma_tol\":" + format_g17(h.svd_sigma_tol) + "}";
}

void append_breakdown(std::string& out, const ObjectiveBreakdown& b) {
  out += "{\"total\":" + format_g17(b.total) + ",\"complexity\":" + format_g17(b.complexity) +
         ",\"error\":" + format_g17(b.error) + ",\"nuclear\":" + format_g17(b.nuclear) +
         ",\"sparsity\":" + format_g17(b.sparsity) +
         ",\"consistency\":" + format_g17(b.consistency) + "}";
}

void append_model(std::string& out, const NetworkConfig& config, const Params& params) {
  out += "\"config\":";
  append_config(out, config);
  out += ",\"filters\":[";
  for (std::size_t l = 0; l < 4; ++l) {
    if (l > 0) out += ',';
    append_tensor(out, params.extractor.filters[l]);
  }
  out += "],\"w1\":";
  append_tensor(out, params.heads.w1);
  out += ",\"w2\":";
  append_tensor(out, params.heads.w2);
}

std::size_t require_size(const json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number_unsigned()) {
    throw ParseError(std::string("expected unsigned integer field \"") + key + "\"");
  }
  return node[key].get<std::size_t>();
}

double require_double(const json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number()) {
    throw ParseError(std::string("expected numeric field \"") + key + "\"");
  }
  return node[key].get<double>();
}

Tensor parse_tensor(const json& node, const char* what) {
  if (!node.is_object() || !node.contains("shape") || !node.contains("values")) {
    throw ParseError(std::string(what) + ": expected {shape, values}");
  }
  std::vector<std::size_t> shape;
  for (const json& e : node["shape"]) {
    if (!e.is_number_unsigned()) throw ParseError(std::string(what) + ": bad shape entry");
    shape.push_back(e.get<std::size_t>());
  }
  std::vector<double> values;
  values.reserve(node["values"].size());
  for (const json& e : node["values"]) {
    if (!e.is_number()) throw ParseError(std::string(what) + ": bad value entry");
    values.push_back(e.get<double>());
  }
  try {
    return Tensor(std::move(shape), std::move(values));
  } catch (const std::runtime_error& err) {
    throw ParseError(std::string(what) + ": " + err.what());
  }
}

NetworkConfig parse_config(const json& node) {
  if (!node.is_object()) throw ParseError("config: expected an object");
  NetworkConfig c;
  for (const json& e : node.at("input_shape")) c.input_shape.push_back(e.get<std::size_t>());
  const json& conv = node.at("conv");
  const json& pool = node.at("pool");
  if (!conv.is_array() || conv.size() != 4) throw ParseError("config: need exactly 4 conv layers");
  if (!pool.is_array() || pool.size() != 3) throw ParseError("config: need exactly 3 pool layers");
  for (std::size_t l = 0; l < 4; ++l) {
    c.conv[l].out_channels = require_size(conv[l], "out_channels");
    c.conv[l].kernel = require_size(conv[l], "kernel");
    c.conv[l].stride = require_size(conv[l], "stride");
    if (!conv[l].contains("rectify") || !conv[l]["rectify"].is_boolean()) {
      throw ParseError("config: conv layers need a boolean \"rectify\"");
    }
    c.conv[l].rectify = conv[l]["rectify"].get<bool>();
  }
  for (std::size_t l = 0; l < 3; ++l) {
    c.pool[l].window = require_size(pool[l], "window");
    c.pool[l].stride = require_size(pool[l], "stride");
  }
  c.task_count = require_size(node, "task_count");
  return c;
}

Hyper parse_hyper(const json& node) {
  Hyper h;
  h.c1 = require_double(node, "c1");
  h.c2 = require_double(node, "c2");
  h.c3 = require_double(node, "c3");
  h.c4 = require_double(node, "c4");
  h.step_size = require_double(node, "step_size");
  h.l1_epsilon = require_double(node, "l1_epsilon");
  h.svd_sigma_tol = require_double(node, "svd_sigma_tol");
  return h;
}

ModelDoc parse_model(const json& doc) {
  ModelDoc model;
  model.config = parse_config(doc.at("config"));
  validate(model.config);
  const json& filters = doc.at("filters");
  if (!filters.is_array() || filters.size() != 4) throw ParseError("expected 4 filter banks");
  for (std::size_t l = 0; l < 4; ++l) {
    model.params.extractor.filters[l] = parse_tensor(filters[l], "filters");
    if (model.params.extractor.filters[l].shape != filter_shape(model.config, l)) {
      throw ParseError("filter bank " + std::to_string(l) + " does not match the configuration");
    }
  }
  model.params.heads.w1 = parse_tensor(doc.at("w1"), "w1");
  model.params.heads.w2 = parse_tensor(doc.at("w2"), "w2");
  const std::vector<std::size_t> head_shape{model.config.task_count, feature_dim(model.config)};
  if (model.params.heads.w1.shape != head_shape || model.params.heads.w2.shape != head_shape) {
    throw ParseError("head matrices do not match the configuration");
  }
  return model;
}

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ParseError("malformed JSON document");
  return doc;
}

}  // namespace

std::string csv_header() { return "iter,total,complexity,error,nuclear,sparsity,consistency"; }

std::string network_config_to_json(const NetworkConfig& config) {
  std::string out;
  append_config(out, config);
  return out;
}

NetworkConfig network_config_from_json(const std::string& text) {
  try {
    return parse_config(parse_document(text));
  } catch (const json::exception& err) {
    throw ParseError(std::string("malformed network config: ") + err.what());
  }
}

std::string hyper_to_json(const Hyper& hyper) {
  std::string out;
  append_hyper(out, hyper);
  return out;
}

Hyper hyper_from_json(const std::string& text) {
  try {
    return parse_hyper(parse_document(text));
  } catch (const json::exception& err) {
    throw ParseError(std::string("malformed hyper block: ") + err.what());
  }
}

std::string csv_row(std::size_t iter, const ObjectiveBreakdown& b) {
  return std::to_string(iter) + ',' + format_g17(b.total) + ',' + format_g17(b.complexity) + ',' +
         format_g17(b.error) + ',' + format_g17(b.nuclear) + ',' + format_g17(b.sparsity) + ',' +
         format_g17(b.consistency);
}

std::string params_to_json(const NetworkConfig& config, const Params& params) {
  std::string out = "{";
  append_model(out, config, params);
  out += "}";
  return out;
}

ModelDoc params_from_json(const std::string& text) {
  try {
    return parse_model(parse_document(text));
  } catch (const json::exception& err) {
    throw ParseError(std::string("malformed model document: ") + err.what());
  }
}

std::string checkpoint_to_json(const TrainState& state) {
  std::string out = "{";
  append_model(out, state.config, state.params);
  out += ",\"iter\":" + std::to_string(state.iter);
  out += ",\"seed\":" + std::to_string(state.seed);
  out += ",\"hyper\":";
  append_hyper(out, state.hyper);
  out += ",\"history\":[";
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    if (i > 0) out += ',';
    append_breakdown(out, state.history[i]);
  }
  out += "],\"warnings\":[";
  for (std::size_t i = 0; i < state.warnings.size(); ++i) {
    if (i > 0) out += ',';
    out += '"' + json_escape(state.warnings[i]) + '"';
  }
  out += "]}";
  return out;
}

TrainState checkpoint_from_json(const std::string& text) try {
  const json doc = parse_document(text);
  ModelDoc model = parse_model(doc);

  TrainState state;
  state.config = std::move(model.config);
  state.params = std::move(model.params);
  state.iter = require_size(doc, "iter");
  state.seed = doc.at("seed").get<std::uint64_t>();
  state.hyper = parse_hyper(doc.at("hyper"));

  const json& history = doc.at("history");
  if (!history.is_array()) throw ParseError("history must be an array");
  for (const json& e : history) {
    ObjectiveBreakdown b;
    b.total = require_double(e, "total");
    b.complexity = require_double(e, "complexity");
    b.error = require_double(e, "error");
    b.nuclear = require_double(e, "nuclear");
    b.sparsity = require_double(e, "sparsity");
    b.consistency = require_double(e, "consistency");
    state.history.push_back(b);
  }
  if (!state.history.empty() && state.history.size() != state.iter + 1) {
    throw ParseError("history length does not match the iteration counter");
  }

  if (doc.contains("warnings")) {
    for (const json& w : doc["warnings"]) {
      if (!w.is_string()) throw ParseError("warnings must be strings");
      state.warnings.push_back(w.get<std::string>());
    }
  }
  return state;
} catch (const json::exception& err) {
  throw ParseError(std::string("malformed checkpoint: ") + err.what());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file " + path.string());
  out << text;
  if (!out) throw ParseError("failed writing file " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_checkpoint(const TrainState& state, const std::filesystem::path& path) {
  write_text_file(path, checkpoint_to_json(state) + "\n");
}

TrainState load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(read_text_file(path));
}

}  // namespace lrmt
