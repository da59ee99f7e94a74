// Command-line front end: dataset generation, training, evaluation,
// gradient checking, and single-parameter sweeps.
//
// Exit codes: 0 success, 1 check failure, 2 usage or config error,
// 3 numeric failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrmt/dataset.hpp"
#include "lrmt/format.hpp"
#include "lrmt/linalg.hpp"
#include "lrmt/optimizer.hpp"
#include "lrmt/serialize.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kGradcheckSeed = 11;

struct RunConfig {
  lrmt::NetworkConfig network = lrmt::NetworkConfig::default_config();
  lrmt::Hyper hyper;
  lrmt::StopRule stop{100, 0.0};
  lrmt::SplitSpec split{1, 0.5};
  std::uint64_t seed = 7;
};

std::string run_config_to_json(const RunConfig& rc) {
  std::string out = "{\"network\":" + lrmt::network_config_to_json(rc.network);
  out += ",\"hyper\":" + lrmt::hyper_to_json(rc.hyper);
  out += ",\"stop\":{\"max_outer_iters\":" + std::to_string(rc.stop.max_outer_iters) +
         ",\"rel_tol\":" + lrmt::format_g17(rc.stop.rel_tol) + "}";
  out += ",\"split\":{\"seed\":" + std::to_string(rc.split.seed) +
         ",\"fraction\":" + lrmt::format_g17(rc.split.fraction) + "}";
  out += ",\"seed\":" + std::to_string(rc.seed) + "}";
  return out;
}

// Keys present in the file override the defaults; everything else stays.
void apply_config_file(RunConfig& rc, const std::filesystem::path& path) {
  json doc = json::parse(lrmt::read_text_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw lrmt::ParseError("config file " + path.string() + " is not a JSON object");
  }
  if (doc.contains("network")) rc.network = lrmt::network_config_from_json(doc["network"].dump());
  if (doc.contains("hyper")) rc.hyper = lrmt::hyper_from_json(doc["hyper"].dump());
  if (doc.contains("stop")) {
    const json& s = doc["stop"];
    if (s.contains("max_outer_iters")) rc.stop.max_outer_iters = s["max_outer_iters"].get<std::size_t>();
    if (s.contains("rel_tol")) rc.stop.rel_tol = s["rel_tol"].get<double>();
  }
  if (doc.contains("split")) {
    const json& s = doc["split"];
    if (s.contains("seed")) rc.split.seed = s["seed"].get<std::uint64_t>();
    if (s.contains("fraction")) rc.split.fraction = s["fraction"].get<double>();
  }
  if (doc.contains("seed")) rc.seed = doc["seed"].get<std::uint64_t>();
}

struct TrainFlags {
  std::string data;
  std::string checkpoint;
  std::string metrics;
  std::string config_file;
  std::optional<double> c1, c2, c3, c4, step_size, l1_epsilon, rel_tol, split_fraction;
  std::optional<std::size_t> max_iters;
  std::optional<std::uint64_t> seed, split_seed;
  std::optional<bool> rectifiers;
};

void register_train_flags(CLI::App* cmd, TrainFlags& f, bool need_outputs) {
  cmd->add_option("--data", f.data, "dataset file (JSON lines)")->required();
  if (need_outputs) {
    cmd->add_option("--checkpoint", f.checkpoint, "checkpoint output path")->required();
    cmd->add_option("--metrics", f.metrics, "metrics CSV output path")->required();
  }
  cmd->add_option("--config", f.config_file, "run config JSON file");
  cmd->add_option("--c1", f.c1, "data-fit weight");
  cmd->add_option("--c2", f.c2, "nuclear-norm weight");
  cmd->add_option("--c3", f.c3, "l1 weight");
  cmd->add_option("--c4", f.c4, "consistency weight");
  cmd->add_option("--step-size", f.step_size, "initial descent step");
  cmd->add_option("--l1-epsilon", f.l1_epsilon, "l1 reweighting floor");
  cmd->add_option("--max-iters", f.max_iters, "outer iteration cap");
  cmd->add_option("--rel-tol", f.rel_tol, "relative objective-change stop");
  cmd->add_option("--seed", f.seed, "parameter init seed");
  cmd->add_option("--split-seed", f.split_seed, "train/test shuffle seed");
  cmd->add_option("--split-fraction", f.split_fraction, "train fraction");
  cmd->add_option("--rectifiers", f.rectifiers, "rectifier flag for all conv layers");
}

RunConfig resolve_run_config(const TrainFlags& f) {
  RunConfig rc;
  if (!f.config_file.empty()) apply_config_file(rc, f.config_file);
  if (f.c1) rc.hyper.c1 = *f.c1;
  if (f.c2) rc.hyper.c2 = *f.c2;
  if (f.c3) rc.hyper.c3 = *f.c3;
  if (f.c4) rc.hyper.c4 = *f.c4;
  if (f.step_size) rc.hyper.step_size = *f.step_size;
  if (f.l1_epsilon) rc.hyper.l1_epsilon = *f.l1_epsilon;
  if (f.max_iters) rc.stop.max_outer_iters = *f.max_iters;
  if (f.rel_tol) rc.stop.rel_tol = *f.rel_tol;
  if (f.seed) rc.seed = *f.seed;
  if (f.split_seed) rc.split.seed = *f.split_seed;
  if (f.split_fraction) rc.split.fraction = *f.split_fraction;
  if (f.rectifiers) {
    for (auto& conv : rc.network.conv) conv.rectify = *f.rectifiers;
  }
  return rc;
}

struct TrainOutcome {
  lrmt::TrainState state;
  lrmt::Evaluation train_eval;
  lrmt::Evaluation test_eval;
};

TrainOutcome run_training(RunConfig rc, const lrmt::Dataset& dataset,
                          const std::filesystem::path& checkpoint_path,
                          const std::filesystem::path& metrics_path) {
  // The dataset fixes the geometry the config must match.
  if (rc.network.input_shape != dataset.input_shape &&
      rc.network.input_shape != lrmt::NetworkConfig::default_config().input_shape) {
    throw lrmt::ConfigError("config input_shape " + lrmt::shape_str(rc.network.input_shape) +
                            " does not match dataset " + lrmt::shape_str(dataset.input_shape));
  }
  rc.network.input_shape = dataset.input_shape;
  rc.network.task_count = dataset.task_count;
  lrmt::validate(rc.network);
  lrmt::validate(rc.hyper);
  lrmt::validate(rc.stop);

  auto [train_set, test_set] = lrmt::split(dataset, rc.split);

  std::string metrics = "# " + run_config_to_json(rc) + "\n";
  metrics += lrmt::csv_header() + ",train_accuracy,test_accuracy\n";

  lrmt::TrainState state = lrmt::make_train_state(rc.network, rc.hyper, rc.seed);
  TrainOutcome outcome;
  const auto log_row = [&](const lrmt::TrainState& s) {
    outcome.train_eval = lrmt::evaluate(s.params, s.config, train_set);
    outcome.test_eval = lrmt::evaluate(s.params, s.config, test_set);
    metrics += lrmt::csv_row(s.iter, s.history.back());
    metrics += ',' + lrmt::format_g17(outcome.train_eval.average_accuracy);
    metrics += ',' + lrmt::format_g17(outcome.test_eval.average_accuracy);
    metrics += '\n';
  };

  outcome.state = lrmt::train(std::move(state), train_set, rc.stop, log_row);

  lrmt::write_text_file(metrics_path, metrics);
  lrmt::save_checkpoint(outcome.state, checkpoint_path);
  return outcome;
}

int run_generate(std::size_t n, std::size_t m, std::size_t len, std::size_t rank, double noise,
                 std::uint64_t seed, const std::string& out_path) {
  const lrmt::Dataset ds = lrmt::generate_synthetic(seed, n, m, len, rank, noise);
  lrmt::save_dataset(ds, out_path);
  std::cout << "{\"n\":" << ds.size() << ",\"m\":" << ds.task_count << ",\"input_shape\":[";
  for (std::size_t i = 0; i < ds.input_shape.size(); ++i) {
    if (i > 0) std::cout << ',';
    std::cout << ds.input_shape[i];
  }
  std::cout << "]}" << std::endl;
  return 0;
}

int run_train(const TrainFlags& flags) {
  const RunConfig rc = resolve_run_config(flags);
  const lrmt::Dataset dataset = lrmt::load_dataset(flags.data);
  run_training(rc, dataset, flags.checkpoint, flags.metrics);
  return 0;
}

int run_eval(const std::string& data_path, const std::string& checkpoint_path) {
  const lrmt::TrainState state = lrmt::load_checkpoint(checkpoint_path);
  const lrmt::Dataset dataset = lrmt::load_dataset(data_path);
  if (dataset.input_shape != state.config.input_shape ||
      dataset.task_count != state.config.task_count) {
    throw lrmt::ConfigError("dataset (" + lrmt::shape_str(dataset.input_shape) + ", m=" +
                            std::to_string(dataset.task_count) + ") does not match checkpoint (" +
                            lrmt::shape_str(state.config.input_shape) + ", m=" +
                            std::to_string(state.config.task_count) + ")");
  }

  const lrmt::Evaluation ev = lrmt::evaluate(state.params, state.config, dataset);
  const lrmt::ObjectiveBreakdown b =
      lrmt::objective_total(state.params, state.config, dataset, state.hyper);

  std::string out = "{\"per_task_accuracy\":[";
  for (std::size_t j = 0; j < ev.per_task_accuracy.size(); ++j) {
    if (j > 0) out += ',';
    out += lrmt::format_g17(ev.per_task_accuracy[j]);
  }
  out += "],\"average_accuracy\":" + lrmt::format_g17(ev.average_accuracy);
  out += ",\"objective\":{\"total\":" + lrmt::format_g17(b.total) +
         ",\"complexity\":" + lrmt::format_g17(b.complexity) +
         ",\"error\":" + lrmt::format_g17(b.error) + ",\"nuclear\":" + lrmt::format_g17(b.nuclear) +
         ",\"sparsity\":" + lrmt::format_g17(b.sparsity) +
         ",\"consistency\":" + lrmt::format_g17(b.consistency) + "}";
  out += ",\"numerical_rank_w1\":" +
         std::to_string(lrmt::numerical_rank(state.params.heads.w1, 1e-3));
  out += ",\"sparsity_w2\":" + lrmt::format_g17(lrmt::near_zero_fraction(state.params.heads.w2, 1e-4));
  out += "}";
  std::cout << out << std::endl;
  return 0;
}

int run_gradcheck(double epsilon, double tolerance, bool rectifiers) {
  const lrmt::GradcheckSetup setup = lrmt::gradcheck_setup(rectifiers, kGradcheckSeed);
  const lrmt::GradcheckReport report =
      lrmt::gradcheck(setup.params, setup.config, setup.dataset, setup.hyper, epsilon, tolerance);

  const lrmt::GradcheckBlock* worst = nullptr;
  for (const lrmt::GradcheckBlock& b : report.blocks) {
    std::cout << "block " << b.name << ": max_rel_err=" << lrmt::format_g17(b.max_rel_err)
              << " checked=" << b.checked << " skipped=" << b.skipped << ' '
              << (b.pass ? "PASS" : "FAIL") << '\n';
    if (!worst || b.max_rel_err > worst->max_rel_err) worst = &b;
  }
  if (!report.pass && worst) {
    std::cout << "worst offender: " << worst->name << " at "
              << lrmt::format_g17(worst->max_rel_err) << " (tolerance "
              << lrmt::format_g17(tolerance) << ")" << std::endl;
    return 1;
  }
  return 0;
}

int run_sweep(const TrainFlags& base_flags, const std::string& param,
              const std::vector<std::string>& value_tokens, const std::string& out_dir) {
  if (param != "c1" && param != "c2" && param != "c3" && param != "c4") {
    throw lrmt::ConfigError("sweep parameter must be one of c1, c2, c3, c4");
  }
  std::filesystem::create_directories(out_dir);
  const lrmt::Dataset dataset = lrmt::load_dataset(base_flags.data);

  std::string summary =
      "param,value,final_total,train_accuracy,test_accuracy,numerical_rank_w1,sparsity_w2\n";
  for (const std::string& token : value_tokens) {
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw lrmt::ConfigError("sweep value '" + token + "' is not a number");
    }

    RunConfig rc = resolve_run_config(base_flags);
    if (param == "c1") rc.hyper.c1 = value;
    if (param == "c2") rc.hyper.c2 = value;
    if (param == "c3") rc.hyper.c3 = value;
    if (param == "c4") rc.hyper.c4 = value;

    const std::filesystem::path dir(out_dir);
    const std::string stem = "train_" + param + "_" + token;
    const TrainOutcome outcome =
        run_training(rc, dataset, dir / (stem + ".json"), dir / (stem + ".csv"));

    summary += param + ',' + token + ',' +
               lrmt::format_g17(outcome.state.history.back().total) + ',' +
               lrmt::format_g17(outcome.train_eval.average_accuracy) + ',' +
               lrmt::format_g17(outcome.test_eval.average_accuracy) + ',' +
               std::to_string(lrmt::numerical_rank(outcome.state.params.heads.w1, 1e-3)) + ',' +
               lrmt::format_g17(lrmt::near_zero_fraction(outcome.state.params.heads.w2, 1e-4)) +
               '\n';
    std::cout << "swept " << param << "=" << token << std::endl;
  }
  lrmt::write_text_file(std::filesystem::path(out_dir) / ("sweep_" + param + ".csv"), summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-headed low-rank + sparse convolutional multi-task learner"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  std::size_t gen_n = 200, gen_m = 8, gen_len = 64, gen_rank = 2;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 7;
  std::string gen_out;
  gen->add_option("--n", gen_n, "sample count");
  gen->add_option("--m", gen_m, "task count");
  gen->add_option("--len", gen_len, "input sequence length");
  gen->add_option("--rank", gen_rank, "planted latent rank");
  gen->add_option("--noise", gen_noise, "label noise level");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path")->required();

  auto* train_cmd = app.add_subcommand("train", "train on the dataset's train split");
  TrainFlags train_flags;
  register_train_flags(train_cmd, train_flags, true);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  std::string eval_data, eval_checkpoint;
  eval_cmd->add_option("--data", eval_data, "dataset file")->required();
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint file")->required();

  auto* gc = app.add_subcommand("gradcheck", "finite-difference check on a tiny built-in model");
  double gc_epsilon = 1e-5, gc_tolerance = 1e-4;
  bool gc_rectifiers = true;
  gc->add_option("--epsilon", gc_epsilon, "finite-difference step");
  gc->add_option("--tolerance", gc_tolerance, "max relative error allowed");
  gc->add_option("--rectifiers", gc_rectifiers, "rectifiers on or off");

  auto* sweep_cmd = app.add_subcommand("sweep", "repeat train over one parameter's value list");
  TrainFlags sweep_flags;
  std::string sweep_param = "c2", sweep_out_dir;
  std::vector<std::string> sweep_values{"0.01", "0.1", "1", "10", "100", "1000"};
  register_train_flags(sweep_cmd, sweep_flags, false);
  sweep_cmd->add_option("--param", sweep_param, "one of c1, c2, c3, c4");
  sweep_cmd->add_option("--values", sweep_values, "value list")->delimiter(',');
  sweep_cmd->add_option("--out-dir", sweep_out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      return run_generate(gen_n, gen_m, gen_len, gen_rank, gen_noise, gen_seed, gen_out);
    }
    if (train_cmd->parsed()) return run_train(train_flags);
    if (eval_cmd->parsed()) return run_eval(eval_data, eval_checkpoint);
    if (gc->parsed()) return run_gradcheck(gc_epsilon, gc_tolerance, gc_rectifiers);
    if (sweep_cmd->parsed()) return run_sweep(sweep_flags, sweep_param, sweep_values, sweep_out_dir);
  } catch (const lrmt::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}
