#pragma once

// Classifier search: enumerate templates shortest first, skip templates
// whose signature was already seen, and for each remaining template walk
// boundary points of its validity domain over the label-1 traces until an
// instance misclassifies fewer traces than the threshold.

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stlmine/boundary.hpp"
#include "stlmine/enumerator.hpp"
#include "stlmine/formula.hpp"
#include "stlmine/monitor.hpp"
#include "stlmine/param_space.hpp"
#include "stlmine/signature.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

enum class McrMode {
  PaperFaithful,  // label-0 traces that satisfy, over all traces
  Symmetric,      // plus label-1 traces that violate
};

struct LearnerConfig {
  double threshold = 0.1;
  double delta = 0.01;
  double diag_tol = 1e-3;
  std::size_t max_length = 5;
  bool use_signatures = true;
  SignatureConfig signature;
  McrMode mcr_mode = McrMode::PaperFaithful;
  /// Boundary points examined per template before moving on; 0 = no cap.
  std::size_t max_points_per_template = 400;
};

struct LearnStats {
  std::size_t templates_tried = 0;
  std::size_t templates_pruned = 0;
  std::size_t boundary_points = 0;
  double elapsed_ms = 0;
};

struct LearnedClassifier {
  Formula formula = Formula::truth();
  Formula tmpl = Formula::truth();
  Valuation valuation;
  double mcr = 1.0;
  LearnStats stats;
};

/// Misclassification rate of a concrete formula, evaluated at each trace start.
inline double mcr(const Formula& f, const Dataset& ds, McrMode mode = McrMode::PaperFaithful) {
  if (ds.empty()) throw data_error("misclassification rate of an empty dataset");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const bool sat = satisfies(f, ds.trace(i));
    if (ds.label(i) == 0 && sat) ++wrong;
    if (mode == McrMode::Symmetric && ds.label(i) == 1 && !sat) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(ds.size());
}

/// Per-run search state: class split, signature sample and index, counters.
class Learner {
 public:
  Learner(const Dataset& ds, LearnerConfig cfg)
      : ds_(ds), cfg_(cfg), positives_(ds.with_label(1)), negatives_(ds.with_label(0)) {
    if (!(cfg_.threshold > 0 && cfg_.threshold < 1)) throw std::invalid_argument("threshold must lie in (0,1)");
    ds_.require_both_classes();
    if (cfg_.use_signatures) sampler_.emplace(ds_, cfg_.signature);
  }

  /// Returns a classifier built from `tmpl`, or nullopt if the template is a
  /// signature duplicate or no boundary point is good enough.
  std::optional<LearnedClassifier> try_classifier(const Formula& tmpl) {
    ++stats_.templates_tried;
    if (sampler_ && !is_new(sampler_->compute(tmpl), index_)) {
      ++stats_.templates_pruned;
      last_pruned_ = true;
      return std::nullopt;
    }
    last_pruned_ = false;

    BoundaryQuery q;
    q.tmpl = tmpl;
    try {
      q.polarity = infer_polarity(tmpl);
      q.space = default_bounds(tmpl, ds_);
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
    q.traces = positives_;
    q.delta = cfg_.delta;
    q.diag_tol = cfg_.diag_tol;
    q.max_points = cfg_.max_points_per_template;
    BoundarySearch search(std::move(q));
    const auto& prog = search.compiled();
    const double total = static_cast<double>(ds_.size());
    while (auto v = search.next()) {
      ++stats_.boundary_points;
      const auto values = values_in_compiled_order(prog, *v);
      if (fast_error_count(prog, values, total) / total >= cfg_.threshold) continue;
      LearnedClassifier out;
      out.tmpl = tmpl;
      out.valuation = *v;
      out.formula = instantiate(tmpl, *v);
      out.mcr = mcr(out.formula, ds_, cfg_.mcr_mode);
      if (out.mcr >= cfg_.threshold)
        throw std::logic_error("compiled and instantiated evaluation disagree on " + to_string(out.formula));
      return out;
    }
    return std::nullopt;
  }

  /// Whether the last try_classifier call was a signature duplicate.
  bool last_pruned() const { return last_pruned_; }
  const LearnStats& stats() const { return stats_; }
  const LearnerConfig& config() const { return cfg_; }

 private:
  static std::vector<double> values_in_compiled_order(const CompiledFormula& prog, const Valuation& v) {
    std::vector<double> out;
    for (const auto& p : prog.params()) out.push_back(v.at(p.id));
    return out;
  }

  // Misclassified count, abandoning once the threshold is reached.
  double fast_error_count(const CompiledFormula& prog, const std::vector<double>& values, double total) const {
    const double limit = cfg_.threshold * total;
    double wrong = 0;
    for (const auto& tr : negatives_) {
      if (robustness_at_start(prog, values, tr) > 0) ++wrong;
      if (wrong >= limit) return wrong;
    }
    if (cfg_.mcr_mode == McrMode::Symmetric)
      for (const auto& tr : positives_) {
        if (robustness_at_start(prog, values, tr) <= 0) ++wrong;
        if (wrong >= limit) return wrong;
      }
    return wrong;
  }

  const Dataset& ds_;
  LearnerConfig cfg_;
  std::vector<Trace> positives_;
  std::vector<Trace> negatives_;
  std::optional<SignatureSampler> sampler_;
  SignatureIndex index_;
  LearnStats stats_;
  bool last_pruned_ = false;
};

struct LearnOutcome {
  std::optional<LearnedClassifier> classifier;
  LearnStats stats;
  EnumerationReport report;
};

/// Enumerates templates of `grammar` and returns the first classifier whose
/// misclassification rate on `ds` is below the threshold.
inline LearnOutcome learn(const Dataset& ds, const Grammar& grammar, const LearnerConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Learner learner(ds, cfg);
  LearnOutcome out;
  out.report = enumerate(grammar, cfg.max_length, [&](const Formula& tmpl) {
    auto found = learner.try_classifier(tmpl);
    if (found) {
      out.classifier = std::move(found);
      return Visit::Stop;
    }
    return learner.last_pruned() ? Visit::Pruned : Visit::Continue;
  });
  out.stats = learner.stats();
  out.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (out.classifier) out.classifier->stats = out.stats;
  return out;
}

}  // namespace stlmine
