#include "lrmt/objective.hpp"

#include <string>

#include "lrmt/linalg.hpp"

namespace lrmt {

void validate(const Hyper& hyper) {
  if (hyper.c1 < 0 || hyper.c2 < 0 || hyper.c3 < 0 || hyper.c4 < 0) {
    throw ConfigError("term weights c1..c4 must be nonnegative");
  }
  if (!(hyper.step_size > 0)) throw ConfigError("step_size must be positive");
  if (!(hyper.l1_epsilon > 0)) throw ConfigError("l1_epsilon must be positive");
  if (!(hyper.svd_sigma_tol > 0)) throw ConfigError("svd_sigma_tol must be positive");
}

std::vector<ForwardTrace> forward_dataset(const FeatureExtractor& extractor,
                                          const NetworkConfig& config, const Dataset& dataset) {
  std::vector<ForwardTrace> traces;
  traces.reserve(dataset.size());
  for (const LabeledSample& s : dataset.samples) {
    traces.push_back(forward_features(extractor, s.input, config));
  }
  return traces;
}

std::vector<Tensor> extract_phis(const std::vector<ForwardTrace>& traces) {
  std::vector<Tensor> phis;
  phis.reserve(traces.size());
  for (const ForwardTrace& t : traces) phis.push_back(t.phi);
  return phis;
}

namespace {

void check_labels(const Dataset& dataset, std::size_t m) {
  for (const LabeledSample& s : dataset.samples) {
    if (s.labels.size() != m) {
      throw ShapeError("label vector of length " + std::to_string(s.labels.size()) +
                       " does not match " + std::to_string(m) + " tasks");
    }
  }
}

}  // namespace

double term_error(const Heads& heads, const std::vector<Tensor>& phis, const Dataset& dataset,
                  double c1) {
  const std::size_t m = heads.w1.rows();
  check_labels(dataset, m);
  const Tensor fused = add(heads.w1, heads.w2);
  double acc = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Tensor score = matvec(fused, phis[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const double r = static_cast<double>(dataset.samples[i].labels[j]) - score.values[j];
      acc += r * r;
    }
  }
  return 0.5 * c1 * acc;
}

double term_nuclear(const Tensor& w1, double c2) { return c2 * nuclear_norm(w1); }

double term_sparsity(const Tensor& w2, double c3) { return 0.5 * c3 * l1_norm(w2); }

double term_consistency(const Heads& heads, const std::vector<Tensor>& phis, double c4) {
  const Tensor gap = sub(heads.w1, heads.w2);
  double acc = 0.0;
  for (const Tensor& phi : phis) {
    const Tensor d = matvec(gap, phi);
    for (double v : d.values) acc += v * v;
  }
  return 0.5 * c4 * acc;
}

double term_complexity(const FeatureExtractor& extractor) {
  double acc = 0.0;
  for (const Tensor& f : extractor.filters) acc += frobenius_sq(f);
  return 0.5 * acc;
}

ObjectiveBreakdown objective_from_phis(const Params& params, const std::vector<Tensor>& phis,
                                       const Dataset& dataset, const Hyper& hyper) {
  ObjectiveBreakdown b;
  b.complexity = term_complexity(params.extractor);
  b.error = term_error(params.heads, phis, dataset, hyper.c1);
  b.nuclear = term_nuclear(params.heads.w1, hyper.c2);
  b.sparsity = term_sparsity(params.heads.w2, hyper.c3);
  b.consistency = term_consistency(params.heads, phis, hyper.c4);
  b.total = b.complexity + b.error + b.nuclear + b.sparsity + b.consistency;
  return b;
}

ObjectiveBreakdown objective_total(const Params& params, const NetworkConfig& config,
                                   const Dataset& dataset, const Hyper& hyper) {
  const std::vector<ForwardTrace> traces = forward_dataset(params.extractor, config, dataset);
  return objective_from_phis(params, extract_phis(traces), dataset, hyper);
}

double term_error(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                  double c1) {
  return term_error(params.heads, extract_phis(forward_dataset(params.extractor, config, dataset)),
                    dataset, c1);
}

double term_consistency(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                        double c4) {
  return term_consistency(params.heads,
                          extract_phis(forward_dataset(params.extractor, config, dataset)), c4);
}

}  // namespace lrmt
