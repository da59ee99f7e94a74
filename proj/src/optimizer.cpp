#include "lrmt/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "lrmt/linalg.hpp"
#include "lrmt/rng.hpp"

namespace lrmt {

namespace {

constexpr std::size_t kMaxHalvings = 30;

}  // namespace

void validate(const StopRule& stop) {
  if (stop.max_outer_iters == 0) throw ConfigError("max_outer_iters must be at least 1");
  if (stop.rel_tol < 0) throw ConfigError("rel_tol must be nonnegative");
}

TrainState make_train_state(const NetworkConfig& config, const Hyper& hyper, std::uint64_t seed) {
  validate(config);
  validate(hyper);
  TrainState state;
  state.config = config;
  state.params = init_params(config, seed);
  state.hyper = hyper;
  state.seed = seed;
  return state;
}

namespace {

// Accumulates sum_i weight * r_i phi_i^T into grad.
void accumulate_outer(Tensor& grad, double weight, const Tensor& r, const Tensor& phi) {
  const std::size_t m = grad.rows(), p = grad.cols();
  for (std::size_t a = 0; a < m; ++a) {
    const double w = weight * r.values[a];
    for (std::size_t b = 0; b < p; ++b) grad.values[a * p + b] += w * phi.values[b];
  }
}

void check_feature_count(const std::vector<Tensor>& phis, const Dataset& dataset) {
  if (phis.size() != dataset.size()) {
    throw ConfigError("feature cache holds " + std::to_string(phis.size()) + " entries for " +
                      std::to_string(dataset.size()) + " samples");
  }
}

Tensor head_residual(const Tensor& fused, const std::vector<int>& labels, const Tensor& phi) {
  Tensor r = matvec(fused, phi);
  if (labels.size() != r.size()) {
    throw ShapeError("label vector of length " + std::to_string(labels.size()) +
                     " does not match " + std::to_string(r.size()) + " tasks");
  }
  for (std::size_t j = 0; j < r.size(); ++j) {
    r.values[j] = static_cast<double>(labels[j]) - r.values[j];
  }
  return r;
}

}  // namespace

Tensor grad_w1_smooth(const Heads& heads, const std::vector<Tensor>& phis, const Dataset& dataset,
                      const Hyper& hyper) {
  check_feature_count(phis, dataset);
  const Tensor fused = add(heads.w1, heads.w2);
  const Tensor gap = sub(heads.w1, heads.w2);
  Tensor grad({heads.w1.rows(), heads.w1.cols()});
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Tensor r = head_residual(fused, dataset.samples[i].labels, phis[i]);
    accumulate_outer(grad, -hyper.c1, r, phis[i]);
    const Tensor d = matvec(gap, phis[i]);
    accumulate_outer(grad, hyper.c4, d, phis[i]);
  }
  return grad;
}

Tensor grad_w2_smooth(const Heads& heads, const std::vector<Tensor>& phis, const Dataset& dataset,
                      const Hyper& hyper) {
  check_feature_count(phis, dataset);
  const Tensor fused = add(heads.w1, heads.w2);
  const Tensor gap = sub(heads.w1, heads.w2);
  Tensor grad({heads.w2.rows(), heads.w2.cols()});
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Tensor r = head_residual(fused, dataset.samples[i].labels, phis[i]);
    accumulate_outer(grad, -hyper.c1, r, phis[i]);
    const Tensor d = matvec(gap, phis[i]);
    accumulate_outer(grad, -hyper.c4, d, phis[i]);
  }
  return grad;
}

Tensor grad_nuclear(const Tensor& w1, double sigma_tol) {
  const SvdResult dec = svd(w1);
  const std::size_t m = w1.rows(), p = w1.cols(), r = dec.sigma.size();
  Tensor grad({m, p});
  if (dec.sigma.empty() || dec.sigma[0] <= 0.0) return grad;  // subgradient 0 at the origin
  const double cutoff = sigma_tol * dec.sigma[0];
  for (std::size_t l = 0; l < r; ++l) {
    if (dec.sigma[l] <= cutoff) continue;
    for (std::size_t a = 0; a < m; ++a) {
      const double u_al = dec.u.values[a * r + l];
      for (std::size_t b = 0; b < p; ++b) {
        grad.values[a * p + b] += u_al * dec.vt.values[l * p + b];
      }
    }
  }
  return grad;
}

Tensor grad_l1_reweighted(const Tensor& w2, double l1_epsilon) {
  Tensor grad(w2.shape);
  for (std::size_t i = 0; i < w2.size(); ++i) {
    const double w = w2.values[i];
    grad.values[i] = w / std::max(std::fabs(w), l1_epsilon);
  }
  return grad;
}

namespace {

Tensor rectifier_mask_applied(const Tensor& upstream, const Tensor& pre) {
  Tensor out(upstream.shape);
  for (std::size_t i = 0; i < upstream.size(); ++i) {
    out.values[i] = pre.values[i] > 0.0 ? upstream.values[i] : 0.0;
  }
  return out;
}

}  // namespace

FeatureExtractor grad_phi(const Params& params, const NetworkConfig& config,
                          const std::vector<ForwardTrace>& traces, const Dataset& dataset,
                          const Hyper& hyper) {
  if (traces.size() != dataset.size()) {
    throw ConfigError("trace cache holds " + std::to_string(traces.size()) + " entries for " +
                      std::to_string(dataset.size()) + " samples");
  }
  const Tensor fused = add(params.heads.w1, params.heads.w2);
  const Tensor fused_t = transpose(fused);
  const Tensor gap = sub(params.heads.w1, params.heads.w2);
  const Tensor gap_t = transpose(gap);

  FeatureExtractor grads;
  for (std::size_t l = 0; l < 4; ++l) grads.filters[l] = Tensor(params.extractor.filters[l].shape);

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const ForwardTrace& trace = traces[i];

    // d(sub-objective)/d(phi): -c1 (w1+w2)^T residual + c4 (w1-w2)^T gap.
    const Tensor r = head_residual(fused, dataset.samples[i].labels, trace.phi);
    const Tensor d = matvec(gap, trace.phi);
    Tensor up_phi = matvec(fused_t, r);
    for (std::size_t k = 0; k < up_phi.size(); ++k) {
      up_phi.values[k] = -hyper.c1 * up_phi.values[k];
    }
    axpy(hyper.c4, matvec(gap_t, d), up_phi);

    // Push back through conv4, then pool/rectifier/conv for each block.
    Tensor upstream(trace.pre_activations[3].shape);
    upstream.values = up_phi.values;
    if (config.conv[3].rectify) {
      upstream = rectifier_mask_applied(upstream, trace.pre_activations[3]);
    }
    ConvGrads cg = conv_backward(trace.conv_inputs[3], params.extractor.filters[3], upstream,
                                 config.conv[3].stride);
    axpy(1.0, cg.filters, grads.filters[3]);

    for (std::size_t block = 3; block-- > 0;) {
      Tensor g =
          maxpool_backward(trace.pools[block], cg.input, trace.pre_activations[block].shape);
      if (config.conv[block].rectify) {
        g = rectifier_mask_applied(g, trace.pre_activations[block]);
      }
      cg = conv_backward(trace.conv_inputs[block], params.extractor.filters[block], g,
                         config.conv[block].stride);
      axpy(1.0, cg.filters, grads.filters[block]);
    }
  }

  // Ridge part of the subproblem.
  for (std::size_t l = 0; l < 4; ++l) axpy(1.0, params.extractor.filters[l], grads.filters[l]);
  return grads;
}

double sub_objective_w1(const Heads& heads, const std::vector<Tensor>& phis,
                        const Dataset& dataset, const Hyper& hyper) {
  return term_error(heads, phis, dataset, hyper.c1) + term_nuclear(heads.w1, hyper.c2) +
         term_consistency(heads, phis, hyper.c4);
}

namespace {

double smoothed_l1(const Tensor& w, double eps) {
  double acc = 0.0;
  for (double v : w.values) acc += std::sqrt(v * v + eps * eps);
  return acc;
}

}  // namespace

double sub_objective_w2_smoothed(const Heads& heads, const std::vector<Tensor>& phis,
                                 const Dataset& dataset, const Hyper& hyper) {
  return term_error(heads, phis, dataset, hyper.c1) +
         0.5 * hyper.c3 * smoothed_l1(heads.w2, hyper.l1_epsilon) +
         term_consistency(heads, phis, hyper.c4);
}

namespace {

double sub_objective_phi_from_phis(const Params& params, const std::vector<Tensor>& phis,
                                   const Dataset& dataset, const Hyper& hyper) {
  return term_complexity(params.extractor) + term_error(params.heads, phis, dataset, hyper.c1) +
         term_consistency(params.heads, phis, hyper.c4);
}

}  // namespace

double sub_objective_phi(const Params& params, const NetworkConfig& config,
                         const Dataset& dataset, const Hyper& hyper) {
  return sub_objective_phi_from_phis(
      params, extract_phis(forward_dataset(params.extractor, config, dataset)), dataset, hyper);
}

namespace {

// Shared backtracking shell: try step_size, halve until the candidate
// objective stops exceeding the current one. Non-finite candidates count
// as increases and keep halving.
template <typename TryStep>
UpdateResult backtrack(double base_objective, double step_size, TrainState& state,
                       const char* block, TryStep&& try_step) {
  UpdateResult res;
  res.objective_before = base_objective;
  res.objective_after = base_objective;
  double step = step_size;
  for (std::size_t halving = 0; halving <= kMaxHalvings; ++halving, step *= 0.5) {
    double candidate;
    try {
      candidate = try_step(step);
    } catch (const NumericError&) {
      continue;
    }
    if (std::isfinite(candidate) && candidate <= base_objective) {
      res.accepted = true;
      res.step_used = step;
      res.halvings = halving;
      res.objective_after = candidate;
      return res;
    }
  }
  state.warnings.push_back("iteration " + std::to_string(state.iter + 1) + ": " + block +
                           " step rejected after " + std::to_string(kMaxHalvings) + " halvings");
  return res;
}

}  // namespace

UpdateResult update_w1(TrainState& state, const std::vector<Tensor>& phis, const Dataset& dataset) {
  Tensor direction = grad_w1_smooth(state.params.heads, phis, dataset, state.hyper);
  axpy(state.hyper.c2, grad_nuclear(state.params.heads.w1, state.hyper.svd_sigma_tol), direction);

  const Heads& heads = state.params.heads;
  const double base = sub_objective_w1(heads, phis, dataset, state.hyper);
  Tensor best;
  UpdateResult res =
      backtrack(base, state.hyper.step_size, state, "w1", [&](double step) {
        Tensor candidate = heads.w1;
        axpy(-step, direction, candidate);
        const double value =
            sub_objective_w1({candidate, heads.w2}, phis, dataset, state.hyper);
        best = std::move(candidate);
        return value;
      });
  if (res.accepted) state.params.heads.w1 = std::move(best);
  return res;
}

UpdateResult update_w2(TrainState& state, const std::vector<Tensor>& phis, const Dataset& dataset) {
  Tensor direction = grad_w2_smooth(state.params.heads, phis, dataset, state.hyper);
  axpy(0.5 * state.hyper.c3, grad_l1_reweighted(state.params.heads.w2, state.hyper.l1_epsilon),
       direction);

  const Heads& heads = state.params.heads;
  const double base = sub_objective_w2_smoothed(heads, phis, dataset, state.hyper);
  Tensor best;
  UpdateResult res =
      backtrack(base, state.hyper.step_size, state, "w2", [&](double step) {
        Tensor candidate = heads.w2;
        axpy(-step, direction, candidate);
        const double value =
            sub_objective_w2_smoothed({heads.w1, candidate}, phis, dataset, state.hyper);
        best = std::move(candidate);
        return value;
      });
  if (res.accepted) state.params.heads.w2 = std::move(best);
  return res;
}

UpdateResult update_phi(TrainState& state, const std::vector<ForwardTrace>& traces,
                        const Dataset& dataset) {
  const FeatureExtractor direction =
      grad_phi(state.params, state.config, traces, dataset, state.hyper);

  // The traces are current for the incoming filters, so the base value
  // can reuse their features.
  const double base =
      sub_objective_phi_from_phis(state.params, extract_phis(traces), dataset, state.hyper);
  FeatureExtractor best;
  UpdateResult res =
      backtrack(base, state.hyper.step_size, state, "phi", [&](double step) {
        Params candidate = state.params;
        for (std::size_t l = 0; l < 4; ++l) {
          axpy(-step, direction.filters[l], candidate.extractor.filters[l]);
        }
        const double value = sub_objective_phi(candidate, state.config, dataset, state.hyper);
        best = std::move(candidate.extractor);
        return value;
      });
  if (res.accepted) state.params.extractor = std::move(best);
  return res;
}

UpdateResult update_w1(TrainState& state, const Dataset& dataset) {
  return update_w1(
      state, extract_phis(forward_dataset(state.params.extractor, state.config, dataset)), dataset);
}

UpdateResult update_w2(TrainState& state, const Dataset& dataset) {
  return update_w2(
      state, extract_phis(forward_dataset(state.params.extractor, state.config, dataset)), dataset);
}

UpdateResult update_phi(TrainState& state, const Dataset& dataset) {
  return update_phi(state, forward_dataset(state.params.extractor, state.config, dataset), dataset);
}

Tensor grad_w1_smooth(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                      const Hyper& hyper) {
  return grad_w1_smooth(params.heads,
                        extract_phis(forward_dataset(params.extractor, config, dataset)), dataset,
                        hyper);
}

Tensor grad_w2_smooth(const Params& params, const NetworkConfig& config, const Dataset& dataset,
                      const Hyper& hyper) {
  return grad_w2_smooth(params.heads,
                        extract_phis(forward_dataset(params.extractor, config, dataset)), dataset,
                        hyper);
}

FeatureExtractor grad_phi(const Params& params, const NetworkConfig& config,
                          const Dataset& dataset, const Hyper& hyper) {
  return grad_phi(params, config, forward_dataset(params.extractor, config, dataset), dataset,
                  hyper);
}

namespace {

const char* first_non_finite_term(const ObjectiveBreakdown& b) {
  if (!std::isfinite(b.complexity)) return "complexity";
  if (!std::isfinite(b.error)) return "error";
  if (!std::isfinite(b.nuclear)) return "nuclear";
  if (!std::isfinite(b.sparsity)) return "sparsity";
  if (!std::isfinite(b.consistency)) return "consistency";
  if (!std::isfinite(b.total)) return "total";
  return nullptr;
}

void check_finite(const ObjectiveBreakdown& b, std::size_t iter) {
  if (const char* term = first_non_finite_term(b)) {
    throw NumericError("objective term '" + std::string(term) + "' became non-finite at iteration " +
                       std::to_string(iter));
  }
}

}  // namespace

TrainState train(TrainState state, const Dataset& dataset, const StopRule& stop,
                 const IterCallback& on_iteration, const UpdateCallback& on_update) {
  validate(stop);
  validate(state.hyper);
  validate(state.config);
  if (dataset.size() == 0) throw ConfigError("cannot train on an empty dataset");
  if (!state.history.empty() && state.history.size() != state.iter + 1) {
    throw ConfigError("history length does not match iteration counter");
  }
  if (state.history.empty() && state.iter != 0) {
    throw ConfigError("resumed state is missing its objective history");
  }

  std::vector<ForwardTrace> traces =
      forward_dataset(state.params.extractor, state.config, dataset);
  if (state.history.empty()) {
    state.history.push_back(
        objective_from_phis(state.params, extract_phis(traces), dataset, state.hyper));
    check_finite(state.history.back(), state.iter);
    if (on_iteration) on_iteration(state);
  }

  while (state.iter < stop.max_outer_iters) {
    const std::vector<Tensor> phis = extract_phis(traces);
    OuterIterationReport report;
    report.w1 = update_w1(state, phis, dataset);
    report.w2 = update_w2(state, phis, dataset);
    report.phi = update_phi(state, traces, dataset);

    traces = forward_dataset(state.params.extractor, state.config, dataset);
    const ObjectiveBreakdown breakdown =
        objective_from_phis(state.params, extract_phis(traces), dataset, state.hyper);
    state.iter += 1;
    state.history.push_back(breakdown);
    check_finite(breakdown, state.iter);

    if (on_update) on_update(state.iter, report);
    if (on_iteration) on_iteration(state);

    const double prev = state.history[state.history.size() - 2].total;
    const double rel_change = std::fabs(breakdown.total - prev) / std::max(1.0, std::fabs(prev));
    if (rel_change < stop.rel_tol) break;
  }
  return state;
}

// ---------------------------------------------------------------------------
// Finite-difference verification
// ---------------------------------------------------------------------------

namespace {

// Rectifier signs and pool winners; finite differences are only trusted
// for coordinates whose probes leave this signature unchanged.
std::vector<std::size_t> kink_signature(const NetworkConfig& config,
                                        const std::vector<ForwardTrace>& traces) {
  std::vector<std::size_t> sig;
  for (const ForwardTrace& t : traces) {
    for (std::size_t l = 0; l < 4; ++l) {
      if (!config.conv[l].rectify) continue;
      for (double v : t.pre_activations[l].values) sig.push_back(v > 0.0 ? 1 : 0);
    }
    for (const PoolRecord& p : t.pools) {
      sig.insert(sig.end(), p.argmax.begin(), p.argmax.end());
    }
  }
  return sig;
}

double quadratic_part_w(const Heads& heads, const std::vector<Tensor>& phis,
                        const Dataset& dataset, const Hyper& hyper) {
  return term_error(heads, phis, dataset, hyper.c1) + term_consistency(heads, phis, hyper.c4);
}

struct BlockAccumulator {
  double max_abs_diff = 0.0;
  double max_analytic = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;

  void add(double analytic, double numeric) {
    max_abs_diff = std::max(max_abs_diff, std::fabs(analytic - numeric));
    max_analytic = std::max(max_analytic, std::fabs(numeric));
    ++checked;
  }

  double rel_err() const {
    if (checked == 0) return 0.0;
    return max_abs_diff / std::max(max_analytic, 1e-12);
  }
};

GradcheckBlock finish_block(std::string name, const BlockAccumulator& acc, double tolerance) {
  GradcheckBlock b;
  b.name = std::move(name);
  b.max_rel_err = acc.rel_err();
  b.checked = acc.checked;
  b.skipped = acc.skipped;
  b.pass = b.max_rel_err < tolerance;
  return b;
}

}  // namespace

GradcheckReport gradcheck(const Params& params, const NetworkConfig& config,
                          const Dataset& dataset, const Hyper& hyper, double epsilon,
                          double tolerance) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  GradcheckReport report;
  const std::vector<ForwardTrace> traces = forward_dataset(params.extractor, config, dataset);
  const std::vector<Tensor> phis = extract_phis(traces);

  // Quadratic head blocks: features are fixed, so no kinks are involved.
  {
    const Tensor analytic = grad_w1_smooth(params.heads, phis, dataset, hyper);
    BlockAccumulator acc;
    Heads probe = params.heads;
    for (std::size_t k = 0; k < probe.w1.size(); ++k) {
      const double saved = probe.w1.values[k];
      probe.w1.values[k] = saved + epsilon;
      const double plus = quadratic_part_w(probe, phis, dataset, hyper);
      probe.w1.values[k] = saved - epsilon;
      const double minus = quadratic_part_w(probe, phis, dataset, hyper);
      probe.w1.values[k] = saved;
      acc.add(analytic.values[k], (plus - minus) / (2.0 * epsilon));
    }
    report.blocks.push_back(finish_block("w1_smooth", acc, tolerance));
  }
  {
    const Tensor analytic = grad_w2_smooth(params.heads, phis, dataset, hyper);
    BlockAccumulator acc;
    Heads probe = params.heads;
    for (std::size_t k = 0; k < probe.w2.size(); ++k) {
      const double saved = probe.w2.values[k];
      probe.w2.values[k] = saved + epsilon;
      const double plus = quadratic_part_w(probe, phis, dataset, hyper);
      probe.w2.values[k] = saved - epsilon;
      const double minus = quadratic_part_w(probe, phis, dataset, hyper);
      probe.w2.values[k] = saved;
      acc.add(analytic.values[k], (plus - minus) / (2.0 * epsilon));
    }
    report.blocks.push_back(finish_block("w2_smooth", acc, tolerance));
  }

  // Filter block against the full feature subproblem.
  {
    const FeatureExtractor analytic = grad_phi(params, config, traces, dataset, hyper);
    const std::vector<std::size_t> base_sig = kink_signature(config, traces);
    BlockAccumulator acc;
    Params probe = params;
    for (std::size_t l = 0; l < 4; ++l) {
      for (std::size_t k = 0; k < probe.extractor.filters[l].size(); ++k) {
        double& slot = probe.extractor.filters[l].values[k];
        const double saved = slot;

        slot = saved + epsilon;
        const std::vector<ForwardTrace> plus_traces =
            forward_dataset(probe.extractor, config, dataset);
        const std::vector<Tensor> plus_phis = extract_phis(plus_traces);
        const double plus = term_complexity(probe.extractor) +
                            term_error(probe.heads, plus_phis, dataset, hyper.c1) +
                            term_consistency(probe.heads, plus_phis, hyper.c4);

        slot = saved - epsilon;
        const std::vector<ForwardTrace> minus_traces =
            forward_dataset(probe.extractor, config, dataset);
        const std::vector<Tensor> minus_phis = extract_phis(minus_traces);
        const double minus = term_complexity(probe.extractor) +
                             term_error(probe.heads, minus_phis, dataset, hyper.c1) +
                             term_consistency(probe.heads, minus_phis, hyper.c4);
        slot = saved;

        if (kink_signature(config, plus_traces) != base_sig ||
            kink_signature(config, minus_traces) != base_sig) {
          ++acc.skipped;
          continue;
        }
        acc.add(analytic.filters[l].values[k], (plus - minus) / (2.0 * epsilon));
      }
    }
    report.blocks.push_back(finish_block("phi", acc, tolerance));
  }

  // Nuclear subgradient: directional probes plus the trace identity.
  {
    BlockAccumulator acc;
    const Tensor w = params.heads.w1;
    const Tensor grad = grad_nuclear(w, hyper.svd_sigma_tol);
    Rng rng(0x5eedd1f5ULL);
    for (std::size_t trial = 0; trial < 4; ++trial) {
      Tensor dir(w.shape);
      double analytic = 0.0, numeric = 0.0;
      // Resample near-flat directions; give up after a few attempts so a
      // degenerate w (for example the zero matrix) cannot hang the check.
      for (std::size_t attempt = 0; attempt < 16; ++attempt) {
        for (double& v : dir.values) v = rng.next_normal();
        const double norm = std::sqrt(frobenius_sq(dir));
        for (double& v : dir.values) v /= norm;
        analytic = dot(grad, dir);
        Tensor probe = w;
        axpy(epsilon, dir, probe);
        const double plus = nuclear_norm(probe);
        axpy(-2.0 * epsilon, dir, probe);
        const double minus = nuclear_norm(probe);
        numeric = (plus - minus) / (2.0 * epsilon);
        if (std::fabs(numeric) >= 1e-2) break;
      }
      if (std::fabs(numeric) < 1e-2) continue;
      acc.add(analytic, numeric);
    }
    const double identity_gap = std::fabs(dot(grad, w) - nuclear_norm(w));
    acc.max_abs_diff = std::max(acc.max_abs_diff, identity_gap);
    acc.max_analytic = std::max(acc.max_analytic, nuclear_norm(w));
    ++acc.checked;
    report.blocks.push_back(finish_block("nuclear", acc, tolerance));
  }

  // Reweighted l1: trace identity and the [-1, 1] bound.
  {
    BlockAccumulator acc;
    const Tensor& w = params.heads.w2;
    const Tensor grad = grad_l1_reweighted(w, hyper.l1_epsilon);
    acc.max_abs_diff = std::fabs(dot(grad, w) - l1_norm(w));
    acc.max_analytic = l1_norm(w);
    acc.checked = 1;
    for (double v : grad.values) {
      if (v < -1.0 || v > 1.0) {
        acc.max_abs_diff = std::numeric_limits<double>::infinity();
      }
    }
    report.blocks.push_back(finish_block("l1", acc, tolerance));
  }

  report.pass = true;
  for (const GradcheckBlock& b : report.blocks) report.pass = report.pass && b.pass;
  return report;
}

GradcheckSetup gradcheck_setup(bool rectifiers_on, std::uint64_t seed) {
  GradcheckSetup setup;
  setup.config.input_shape = {1, 32};
  setup.config.conv = {{{2, 3, 1, rectifiers_on},
                        {3, 3, 1, rectifiers_on},
                        {3, 3, 1, rectifiers_on},
                        {4, 2, 1, rectifiers_on}}};
  setup.config.pool = {{{2, 2}, {2, 2}, {2, 2}}};
  setup.config.task_count = 4;
  setup.params = init_params(setup.config, seed);
  setup.dataset = generate_synthetic(seed + 1, 12, 4, 32, 2, 0.1);
  setup.hyper = Hyper{};
  return setup;
}

}  // namespace lrmt
