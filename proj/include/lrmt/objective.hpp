#pragma once

#include <vector>

#include "lrmt/dataset.hpp"
#include "lrmt/network.hpp"

namespace lrmt {

/// Term weights and optimizer constants.
struct Hyper {
  double c1 = 4.0;          // data fit
  double c2 = 0.4;          // nuclear norm of w1
  double c3 = 2.0;          // l1 norm of w2
  double c4 = 0.4;          // head consistency
  double step_size = 0.025;
  double l1_epsilon = 1e-8;
  double svd_sigma_tol = 1e-10;
};

void validate(const Hyper& hyper);

/// One objective evaluation, term by term. total is the plain sum of the
/// five stored components.
struct ObjectiveBreakdown {
  double complexity = 0.0;
  double error = 0.0;
  double nuclear = 0.0;
  double sparsity = 0.0;
  double consistency = 0.0;
  double total = 0.0;
};

std::vector<ForwardTrace> forward_dataset(const FeatureExtractor& extractor,
                                          const NetworkConfig& config, const Dataset& dataset);

std::vector<Tensor> extract_phis(const std::vector<ForwardTrace>& traces);

/// (c1/2) sum_i ||y_i - (w1 + w2) phi_i||^2
double term_error(const Heads& heads, const std::vector<Tensor>& phis, const Dataset& dataset,
                  double c1);
/// c2 ||w1||_*
double term_nuclear(const Tensor& w1, double c2);
/// (c3/2) ||w2||_1
double term_sparsity(const Tensor& w2, double c3);
/// (c4/2) sum_i ||(w1 - w2) phi_i||^2
double term_consistency(const Heads& heads, const std::vector<Tensor>& phis, double c4);
/// (1/2) ||filters||^2 over all four banks
double term_complexity(const FeatureExtractor& extractor);

ObjectiveBreakdown objective_from_phis(const Params& params, const std::vector<Tensor>& phis,
                                       const Dataset& dataset, const Hyper& hyper);

/// Full evaluation; features are computed once per sample and shared
/// across the terms.
ObjectiveBreakdown objective_total(const Params& params, const NetworkConfig& config,
                                   const Dataset& dataset, const Hyper& hyper);

// Convenience overloads that run the feature stack internally.
double term_error(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                  double c1);
double term_consistency(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                        double c4);

}  // namespace lrmt
