// Acceptance suite: runs every criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
//
// --print-reference re-measures the pinned regression values.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lrmt/dataset.hpp"
#include "lrmt/linalg.hpp"
#include "lrmt/optimizer.hpp"
#include "lrmt/rng.hpp"
#include "lrmt/serialize.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Values recorded from the reference configuration (seeds and hyper
// defaults below); tracked as regressions.
constexpr std::size_t kPinnedRankLowC2 = 8;
constexpr std::size_t kPinnedRankHighC2 = 1;
constexpr double kPinnedSparsityLowC3 = 0.0;
constexpr double kPinnedSparsityHighC3 = 0.99609375;
constexpr double kPinnedTestAccuracy = 0.72125;
constexpr double kAccuracyRegressionTol = 0.02;

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
  g_results.push_back({id, name, pass, detail});
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Shared reference setup: the default synthetic dataset and an equal
// split, trained with the default hyperparameters.
struct ReferenceRun {
  lrmt::Dataset train_set;
  lrmt::Dataset test_set;
  lrmt::TrainState state;
  std::vector<lrmt::OuterIterationReport> reports;
};

ReferenceRun run_reference(lrmt::Hyper hyper, std::size_t iters = 100) {
  const lrmt::Dataset full = lrmt::generate_synthetic(7, 200, 8, 64, 2, 0.0);
  auto [train_set, test_set] = lrmt::split(full, {1, 0.5});

  ReferenceRun run;
  run.train_set = std::move(train_set);
  run.test_set = std::move(test_set);
  lrmt::TrainState state =
      lrmt::make_train_state(lrmt::NetworkConfig::default_config(), hyper, 7);
  run.state = lrmt::train(
      std::move(state), run.train_set, {iters, 0.0}, {},
      [&](std::size_t, const lrmt::OuterIterationReport& r) { run.reports.push_back(r); });
  return run;
}

double mean_head_gap(const lrmt::Params& params, const lrmt::NetworkConfig& config,
                     const lrmt::Dataset& data) {
  double acc = 0.0;
  for (const auto& sample : data.samples) {
    const lrmt::ForwardTrace trace = lrmt::forward_features(params.extractor, sample.input, config);
    const lrmt::HeadOutputs heads = lrmt::forward_heads(params.heads, trace.phi);
    for (std::size_t j = 0; j < heads.f1.size(); ++j) {
      const double d = heads.f1.values[j] - heads.f2.values[j];
      acc += d * d;
    }
  }
  return acc / static_cast<double>(data.size());
}

double majority_baseline(const lrmt::Dataset& data) {
  double acc = 0.0;
  for (std::size_t j = 0; j < data.task_count; ++j) {
    std::size_t pos = 0;
    for (const auto& s : data.samples) {
      if (s.labels[j] == 1) ++pos;
    }
    acc += static_cast<double>(std::max(pos, data.size() - pos)) /
           static_cast<double>(data.size());
  }
  return acc / static_cast<double>(data.task_count);
}

// --------------------------------------------------------------------------

void criterion_gradients() {
  const auto start = Clock::now();
  const lrmt::GradcheckSetup plain = lrmt::gradcheck_setup(false, 11);
  const lrmt::GradcheckReport off =
      lrmt::gradcheck(plain.params, plain.config, plain.dataset, plain.hyper, 1e-5, 1e-6);
  const lrmt::GradcheckSetup rect = lrmt::gradcheck_setup(true, 11);
  const lrmt::GradcheckReport on =
      lrmt::gradcheck(rect.params, rect.config, rect.dataset, rect.hyper, 1e-5, 1e-5);

  double worst_off = 0.0, worst_on = 0.0;
  for (const auto& b : off.blocks) {
    if (b.name == "w1_smooth" || b.name == "w2_smooth" || b.name == "phi") {
      worst_off = std::max(worst_off, b.max_rel_err);
    }
  }
  for (const auto& b : on.blocks) {
    if (b.name == "w1_smooth" || b.name == "w2_smooth" || b.name == "phi") {
      worst_on = std::max(worst_on, b.max_rel_err);
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst_off < 1e-6 && worst_on < 1e-5 && elapsed < 5.0;
  record(1, "smooth gradients vs central differences", pass,
         "rect-off max rel err " + fmt(worst_off) + ", rect-on " + fmt(worst_on) + ", " +
             fmt(elapsed) + "s");
}

void criterion_nuclear() {
  const auto start = Clock::now();
  lrmt::Rng rng(501);
  double worst_dir = 0.0, worst_identity = 0.0;
  int matrices = 0;
  while (matrices < 50) {
    lrmt::Tensor w({6, 10});
    for (double& v : w.values) v = rng.next_normal();
    const lrmt::SvdResult dec = lrmt::svd(w);
    bool distinct = dec.sigma.back() > 1e-3;
    for (std::size_t l = 0; l + 1 < dec.sigma.size(); ++l) {
      distinct = distinct && dec.sigma[l] - dec.sigma[l + 1] > 1e-3;
    }
    if (!distinct) continue;
    ++matrices;

    const lrmt::Tensor grad = lrmt::grad_nuclear(w, 1e-10);
    const double nuc = lrmt::nuclear_norm(w);
    worst_identity = std::max(worst_identity, std::fabs(lrmt::dot(grad, w) - nuc) / nuc);

    for (int probe = 0; probe < 2; ++probe) {
      lrmt::Tensor dir({6, 10});
      double fd = 0.0;
      do {
        for (double& v : dir.values) v = rng.next_normal();
        const double norm = std::sqrt(lrmt::frobenius_sq(dir));
        for (double& v : dir.values) v /= norm;
        lrmt::Tensor shifted = w;
        lrmt::axpy(1e-5, dir, shifted);
        const double plus = lrmt::nuclear_norm(shifted);
        lrmt::axpy(-2e-5, dir, shifted);
        const double minus = lrmt::nuclear_norm(shifted);
        fd = (plus - minus) / 2e-5;
      } while (std::fabs(fd) < 1e-2);
      worst_dir = std::max(worst_dir, std::fabs(lrmt::dot(grad, dir) - fd) / std::fabs(fd));
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst_dir < 1e-4 && worst_identity < 1e-8 && elapsed < 1.0;
  record(2, "nuclear subgradient directional and trace identities", pass,
         "dir " + fmt(worst_dir) + ", identity " + fmt(worst_identity) + ", " + fmt(elapsed) +
             "s");
}

void criterion_l1() {
  const auto start = Clock::now();
  lrmt::Rng rng(601);
  double worst_identity = 0.0;
  bool bound_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    lrmt::Tensor w({5, 7});
    for (double& v : w.values) {
      v = rng.next_normal();
      if (std::fabs(v) < 1e-3) v = v < 0 ? -1e-3 : 1e-3;
    }
    const lrmt::Tensor grad = lrmt::grad_l1_reweighted(w, 1e-8);
    const double l1 = lrmt::l1_norm(w);
    worst_identity = std::max(worst_identity, std::fabs(lrmt::dot(grad, w) - l1) / l1);

    lrmt::Tensor mixed = w;
    for (std::size_t k = 0; k < mixed.size(); k += 3) mixed.values[k] = 0.0;
    mixed.values[1] = 1e-12;
    for (double v : lrmt::grad_l1_reweighted(mixed, 1e-8).values) {
      bound_ok = bound_ok && v >= -1.0 && v <= 1.0;
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst_identity < 1e-8 && bound_ok && elapsed < 1.0;
  record(3, "reweighted l1 trace identity and bound", pass,
         "identity " + fmt(worst_identity) + ", bound " + (bound_ok ? "held" : "violated") +
             ", " + fmt(elapsed) + "s");
}

void criterion_monotone_and_accuracy(const ReferenceRun& ref, double elapsed) {
  std::size_t violations = 0, accepted = 0;
  for (const auto& r : ref.reports) {
    for (const lrmt::UpdateResult* u : {&r.w1, &r.w2, &r.phi}) {
      if (!u->accepted) continue;
      ++accepted;
      if (u->objective_after > u->objective_before) ++violations;
    }
  }
  const double initial = ref.state.history.front().total;
  const double final_total = ref.state.history.back().total;
  const bool pass =
      violations == 0 && final_total < initial && ref.state.iter == 100 && elapsed < 60.0;
  record(4, "accepted sub-updates are monotone; total objective drops", pass,
         std::to_string(accepted) + " accepted updates, " + std::to_string(violations) +
             " violations, total " + fmt(initial) + " -> " + fmt(final_total) + ", " +
             fmt(elapsed) + "s");

  const lrmt::Evaluation ev = lrmt::evaluate(ref.state.params, ref.state.config, ref.test_set);
  const double baseline = majority_baseline(ref.test_set);
  const bool pass8 = ev.average_accuracy >= baseline + 0.15 &&
                     std::fabs(ev.average_accuracy - kPinnedTestAccuracy) <= kAccuracyRegressionTol;
  record(8, "planted structure is learned well above the majority baseline", pass8,
         "test accuracy " + fmt(ev.average_accuracy) + ", baseline " + fmt(baseline) +
             ", pinned " + fmt(kPinnedTestAccuracy));
}

void criterion_rank_response(bool print_reference) {
  lrmt::Hyper low;
  low.c2 = 0.01;
  lrmt::Hyper high;
  high.c2 = 100.0;
  const ReferenceRun low_run = run_reference(low);
  const ReferenceRun high_run = run_reference(high);
  const std::size_t rank_low = lrmt::numerical_rank(low_run.state.params.heads.w1, 1e-3);
  const std::size_t rank_high = lrmt::numerical_rank(high_run.state.params.heads.w1, 1e-3);
  if (print_reference) {
    std::cout << "reference rank c2=0.01: " << rank_low << ", c2=100: " << rank_high << "\n";
  }
  const bool pass = rank_high <= rank_low && rank_high < rank_low &&
                    rank_low == kPinnedRankLowC2 && rank_high == kPinnedRankHighC2;
  record(5, "stronger nuclear weight shrinks the numerical rank of w1", pass,
         "rank " + std::to_string(rank_low) + " at c2=0.01 vs " + std::to_string(rank_high) +
             " at c2=100 (pinned " + std::to_string(kPinnedRankLowC2) + "/" +
             std::to_string(kPinnedRankHighC2) + ")");
}

void criterion_sparsity_response(bool print_reference) {
  lrmt::Hyper low;
  low.c3 = 0.01;
  lrmt::Hyper high;
  high.c3 = 100.0;
  const ReferenceRun low_run = run_reference(low);
  const ReferenceRun high_run = run_reference(high);
  const double frac_low = lrmt::near_zero_fraction(low_run.state.params.heads.w2, 1e-4);
  const double frac_high = lrmt::near_zero_fraction(high_run.state.params.heads.w2, 1e-4);
  if (print_reference) {
    std::cout.precision(17);
    std::cout << "reference sparsity c3=0.01: " << frac_low << ", c3=100: " << frac_high << "\n";
  }
  const bool pass = frac_high >= frac_low && frac_high > frac_low &&
                    std::fabs(frac_low - kPinnedSparsityLowC3) < 1e-9 &&
                    std::fabs(frac_high - kPinnedSparsityHighC3) < 1e-9;
  record(6, "stronger l1 weight drives w2 entries to zero", pass,
         "near-zero fraction " + fmt(frac_low) + " at c3=0.01 vs " + fmt(frac_high) +
             " at c3=100 (pinned " + fmt(kPinnedSparsityLowC3) + "/" +
             fmt(kPinnedSparsityHighC3) + ")");
}

void criterion_consistency_response() {
  lrmt::Hyper off;
  off.c4 = 0.0;
  lrmt::Hyper strong;
  strong.c4 = 100.0;
  const ReferenceRun off_run = run_reference(off);
  const ReferenceRun strong_run = run_reference(strong);
  const double gap_off =
      mean_head_gap(off_run.state.params, off_run.state.config, off_run.train_set);
  const double gap_strong =
      mean_head_gap(strong_run.state.params, strong_run.state.config, strong_run.train_set);
  record(7, "consistency coupling pulls the two heads together", gap_strong < gap_off,
         "mean ||f1-f2||^2 " + fmt(gap_strong) + " at c4=100 vs " + fmt(gap_off) + " at c4=0");
}

void criterion_cli_determinism() {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("lrmt_acc_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::create_directories(dir);
  const std::string cli = LRMT_CLI_PATH;
  const auto shell = [&](const std::string& args) {
    return std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  bool ok = shell("generate --n 60 --m 4 --len 64 --rank 2 --seed 5 --out " +
                  (dir / "d.jsonl").string()) == 0;
  const std::string base = "train --data " + (dir / "d.jsonl").string() + " --max-iters 5";
  ok = ok && shell(base + " --checkpoint " + (dir / "c1.json").string() + " --metrics " +
                   (dir / "m1.csv").string()) == 0;
  ok = ok && shell(base + " --checkpoint " + (dir / "c2.json").string() + " --metrics " +
                   (dir / "m2.csv").string()) == 0;
  const bool checkpoints_equal = slurp(dir / "c1.json") == slurp(dir / "c2.json");
  const bool metrics_equal = slurp(dir / "m1.csv") == slurp(dir / "m2.csv");
  record(9, "repeated train runs produce byte-identical outputs",
         ok && checkpoints_equal && metrics_equal,
         std::string("checkpoints ") + (checkpoints_equal ? "equal" : "differ") + ", metrics " +
             (metrics_equal ? "equal" : "differ"));
}

void criterion_kernel_oracles() {
  const auto start = Clock::now();
  lrmt::Rng rng(701);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool two_d = rng.next_below(2) == 1;
    const std::size_t c = 1 + rng.next_below(3);
    const std::size_t oc = 1 + rng.next_below(3);
    const std::size_t extent = 4 + rng.next_below(5);
    const std::size_t kernel = 1 + rng.next_below(std::min<std::size_t>(3, extent));
    const std::size_t stride = 1 + rng.next_below(2);
    const std::size_t window = 1 + rng.next_below(2);

    lrmt::Tensor x(two_d ? std::vector<std::size_t>{c, extent, extent}
                         : std::vector<std::size_t>{c, extent});
    for (double& v : x.values) v = rng.next_normal();
    lrmt::Tensor f(two_d ? std::vector<std::size_t>{oc, c, kernel, kernel}
                         : std::vector<std::size_t>{oc, c, kernel});
    for (double& v : f.values) v = rng.next_normal();

    // Forward against the nested-loop oracle.
    const lrmt::Tensor out = lrmt::conv_forward(x, f, stride);
    const lrmt::Tensor want = oracle::conv_naive(x, f, stride);
    for (std::size_t k = 0; k < out.size(); ++k) {
      worst = std::max(worst, std::fabs(out.values[k] - want.values[k]) /
                                  std::max(1.0, std::fabs(want.values[k])));
    }

    // Backward via the adjoint identities.
    lrmt::Tensor u(out.shape);
    for (double& v : u.values) v = rng.next_normal();
    const lrmt::ConvGrads grads = lrmt::conv_backward(x, f, u, stride);
    lrmt::Tensor dx(x.shape);
    for (double& v : dx.values) v = rng.next_normal();
    const double lhs_x = lrmt::dot(lrmt::conv_forward(dx, f, stride), u);
    const double rhs_x = lrmt::dot(dx, grads.input);
    worst = std::max(worst, std::fabs(lhs_x - rhs_x) / std::max(1.0, std::fabs(lhs_x)));
    lrmt::Tensor df(f.shape);
    for (double& v : df.values) v = rng.next_normal();
    const double lhs_f = lrmt::dot(lrmt::conv_forward(x, df, stride), u);
    const double rhs_f = lrmt::dot(df, grads.filters);
    worst = std::max(worst, std::fabs(lhs_f - rhs_f) / std::max(1.0, std::fabs(lhs_f)));

    // Pooling forward against the oracle, backward against a naive
    // re-derivation of the scatter.
    const lrmt::PoolRecord rec = lrmt::maxpool_forward(x, window, 1 + window / 2);
    const lrmt::Tensor pool_want = oracle::maxpool_naive(x, window, 1 + window / 2);
    for (std::size_t k = 0; k < rec.output.size(); ++k) {
      worst = std::max(worst, std::fabs(rec.output.values[k] - pool_want.values[k]));
    }
    lrmt::Tensor pu(rec.output.shape);
    for (double& v : pu.values) v = std::floor(rng.next_symmetric(8.0));
    const lrmt::Tensor back = lrmt::maxpool_backward(rec, pu, x.shape);
    lrmt::Tensor naive_back(x.shape);
    for (std::size_t k = 0; k < pu.size(); ++k) {
      naive_back.values[rec.argmax[k]] += pu.values[k];
    }
    for (std::size_t k = 0; k < back.size(); ++k) {
      worst = std::max(worst, std::fabs(back.values[k] - naive_back.values[k]));
    }
    double mass_in = 0.0, mass_out = 0.0;
    for (double v : pu.values) mass_in += v;
    for (double v : back.values) mass_out += v;
    worst = std::max(worst, std::fabs(mass_in - mass_out));
  }
  const double elapsed = seconds_since(start);
  record(10, "kernels match nested-loop oracles and adjoint identities", worst <= 1e-8 && elapsed < 5.0,
         "worst deviation " + fmt(worst) + ", " + fmt(elapsed) + "s");
}

}  // namespace

int main(int argc, char** argv) {
  const bool print_reference = argc > 1 && std::string(argv[1]) == "--print-reference";

  criterion_gradients();
  criterion_nuclear();
  criterion_l1();

  const auto ref_start = Clock::now();
  const ReferenceRun ref = run_reference(lrmt::Hyper{});
  const double ref_elapsed = seconds_since(ref_start);
  if (print_reference) {
    const lrmt::Evaluation ev = lrmt::evaluate(ref.state.params, ref.state.config, ref.test_set);
    std::cout.precision(17);
    std::cout << "reference test accuracy: " << ev.average_accuracy
              << ", baseline: " << majority_baseline(ref.test_set) << "\n";
  }
  criterion_monotone_and_accuracy(ref, ref_elapsed);

  criterion_rank_response(print_reference);
  criterion_sparsity_response(print_reference);
  criterion_consistency_response();
  criterion_cli_determinism();
  criterion_kernel_oracles();

  std::sort(g_results.begin(), g_results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  bool all_pass = true;
  for (const Criterion& c : g_results) {
    std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " ("
              << c.detail << ")\n";
    all_pass = all_pass && c.pass;
  }
  return all_pass ? 0 : 1;
}
