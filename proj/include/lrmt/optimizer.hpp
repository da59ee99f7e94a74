#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lrmt/objective.hpp"

namespace lrmt {

struct StopRule {
  std::size_t max_outer_iters = 100;
  double rel_tol = 0.0;  // 0 disables the plateau stop
};

void validate(const StopRule& stop);

struct TrainState {
  NetworkConfig config;
  Params params;
  Hyper hyper;
  std::size_t iter = 0;
  std::vector<ObjectiveBreakdown> history;  // one entry per iteration, from 0
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

TrainState make_train_state(const NetworkConfig& config, const Hyper& hyper, std::uint64_t seed);

// Gradient of the quadratic part of the w1 subproblem:
// -c1 sum_i (y_i - (w1+w2) phi_i) phi_i^T + c4 sum_i ((w1-w2) phi_i) phi_i^T
Tensor grad_w1_smooth(const Heads& heads, const std::vector<Tensor>& phis, const Dataset& dataset,
                      const Hyper& hyper);

// Same with the consistency sign flipped (-c4).
Tensor grad_w2_smooth(const Heads& heads, const std::vector<Tensor>& phis, const Dataset& dataset,
                      const Hyper& hyper);

/// Nuclear-norm subgradient U_r V_r^T, keeping singular triples with
/// sigma > sigma_tol * sigma_max; the zero matrix at w1 = 0.
Tensor grad_nuclear(const Tensor& w1, double sigma_tol);

/// Entrywise w / max(|w|, l1_epsilon); equals sign(w) away from zero.
Tensor grad_l1_reweighted(const Tensor& w2, double l1_epsilon);

/// Filter gradients of the feature subproblem: the ridge term plus each
/// sample's head residual pushed back through the stack.
FeatureExtractor grad_phi(const Params& params, const NetworkConfig& config,
                          const std::vector<ForwardTrace>& traces, const Dataset& dataset,
                          const Hyper& hyper);

// Overloads that run the feature stack internally.
Tensor grad_w1_smooth(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                      const Hyper& hyper);
Tensor grad_w2_smooth(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                      const Hyper& hyper);
FeatureExtractor grad_phi(const Params& params, const NetworkConfig& config,
                          const Dataset& dataset, const Hyper& hyper);

// Sub-objectives the three line searches monotonize.
double sub_objective_w1(const Heads& heads, const std::vector<Tensor>& phis,
                        const Dataset& dataset, const Hyper& hyper);
// The l1 part enters smoothed as sum sqrt(w^2 + eps^2) so a descent test
// is meaningful at zeros; monitoring still reports the exact l1 value.
double sub_objective_w2_smoothed(const Heads& heads, const std::vector<Tensor>& phis,
                                 const Dataset& dataset, const Hyper& hyper);
double sub_objective_phi(const Params& params, const NetworkConfig& config,
                         const Dataset& dataset, const Hyper& hyper);

struct UpdateResult {
  bool accepted = false;
  double step_used = 0.0;
  std::size_t halvings = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
};

/// Backtracking step on one parameter block: halve the step (30 times at
/// most) until the block's sub-objective does not increase; on
/// exhaustion the block is left unchanged and a warning is recorded.
UpdateResult update_w1(TrainState& state, const std::vector<Tensor>& phis, const Dataset& dataset);
UpdateResult update_w2(TrainState& state, const std::vector<Tensor>& phis, const Dataset& dataset);
UpdateResult update_phi(TrainState& state, const std::vector<ForwardTrace>& traces,
                        const Dataset& dataset);

// Overloads that run the feature stack internally.
UpdateResult update_w1(TrainState& state, const Dataset& dataset);
UpdateResult update_w2(TrainState& state, const Dataset& dataset);
UpdateResult update_phi(TrainState& state, const Dataset& dataset);

struct OuterIterationReport {
  UpdateResult w1;
  UpdateResult w2;
  UpdateResult phi;
};

using IterCallback = std::function<void(const TrainState&)>;
using UpdateCallback = std::function<void(std::size_t iter, const OuterIterationReport&)>;

/// Alternating descent, one w1 / w2 / filter cycle per outer iteration.
/// Runs until stop.max_outer_iters or until the relative change of the
/// total objective over one iteration falls below stop.rel_tol. The
/// objective is logged every iteration, including iteration 0.
TrainState train(TrainState state, const Dataset& dataset, const StopRule& stop,
                 const IterCallback& on_iteration = {}, const UpdateCallback& on_update = {});

struct GradcheckBlock {
  std::string name;
  double max_rel_err = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // coordinates filtered at rectifier/pool kinks
  bool pass = false;
};

struct GradcheckReport {
  std::vector<GradcheckBlock> blocks;
  bool pass = false;
};

/// Central finite differences against every analytic gradient, plus the
/// algebraic identities of the two subgradients. Intended for tiny
/// models.
GradcheckReport gradcheck(const Params& params, const NetworkConfig& config,
                          const Dataset& dataset, const Hyper& hyper, double epsilon,
                          double tolerance);

struct GradcheckSetup {
  NetworkConfig config;
  Params params;
  Dataset dataset;
  Hyper hyper;
};

/// Small fixed model and dataset used by the gradcheck command and the
/// verification suite.
GradcheckSetup gradcheck_setup(bool rectifiers_on, std::uint64_t seed);

}  // namespace lrmt
