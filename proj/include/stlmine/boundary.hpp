#pragma once

// Multi-dimensional binary search for the satisfaction boundary of a
// monotone PSTL template over a set of traces.
//
// g(v) = min over traces of the robustness of template(v) at the trace start.
// For a monotone template g is non-decreasing along the diagonal of any box
// oriented from its hardest corner (every Increasing parameter at its lower
// end, every Decreasing one at its upper end) to its easiest corner. Each
// step bisects one such diagonal to find a point with g > 0 next to the zero
// crossing, splits the box at that point into 2^m sub-boxes, drops the two
// corner boxes whose status is known, and queues the rest (FIFO).

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stlmine/formula.hpp"
#include "stlmine/monitor.hpp"
#include "stlmine/param_space.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

/// g(v): min robustness over `traces` of the instantiated template.
inline double min_robustness(const Formula& tmpl, const Valuation& v, std::span<const Trace> traces) {
  const Formula f = instantiate(tmpl, v);
  double g = kBig;
  for (const auto& tr : traces) g = std::min(g, robustness(f, tr));
  return g;
}

/// Same as above on a compiled template. Stops early once the running
/// minimum drops to `stop_at` or below.
inline double min_robustness(const CompiledFormula& prog, std::span<const double> values,
                             std::span<const Trace> traces,
                             double stop_at = -std::numeric_limits<double>::infinity()) {
  double g = kBig;
  for (const auto& tr : traces) {
    g = std::min(g, robustness_at_start(prog, values, tr));
    if (g <= stop_at) break;
  }
  return g;
}

struct BoundaryQuery {
  Formula tmpl = Formula::truth();
  PolarityMap polarity;
  ParamSpace space;
  std::span<const Trace> traces;  // must outlive the search
  double delta = 0.01;            // relative box diagonal below which boxes are not refined
  double diag_tol = 1e-3;         // relative bisection tolerance
  std::size_t max_points = 0;     // 0 = until exhausted
};

struct BoundaryStats {
  std::size_t points = 0;
  std::size_t boxes_visited = 0;
  std::size_t evaluations = 0;
  // Volumes are in normalized coordinates (the full box has volume 1).
  double valid_volume = 0;
  double invalid_volume = 0;
  double remainder_volume = 0;
};

class BoundarySearch {
 public:
  /// Hard ceiling on visited boxes; reaching it is a bug, not a result.
  static constexpr std::size_t kIterationCap = 50'000'000;

  explicit BoundarySearch(BoundaryQuery q)
      : q_(std::move(q)), prog_(q_.tmpl, signal_names(q_.traces)) {
    if (!(q_.delta > 0 && q_.delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
    if (!(q_.diag_tol > 0 && q_.diag_tol < q_.delta))
      throw std::invalid_argument("diag_tol must lie in (0, delta)");
    const auto& params = prog_.params();
    if (params.size() != q_.space.size())
      throw std::invalid_argument("parameter space does not match template parameters");
    // coordinate i of the space feeds value slot slot_[i] of the compiled template
    for (std::size_t i = 0; i < q_.space.size(); ++i) {
      const auto& spec = q_.space[i];
      std::size_t k = 0;
      while (k < params.size() && params[k].id != spec.id) ++k;
      if (k == params.size()) throw std::invalid_argument("template has no parameter $" + spec.id);
      slot_.push_back(k);
      auto pol = q_.polarity.find(spec.id);
      if (pol == q_.polarity.end()) throw std::invalid_argument("no polarity for $" + spec.id);
      increasing_.push_back(pol->second == Polarity::Increasing);
    }
    values_.resize(params.size());
    const std::size_t m = q_.space.size();
    queue_.push_back(Box(m, Range{0, 1}));
    full_diag_ = std::sqrt(static_cast<double>(m));
  }

  /// Next boundary valuation, or nullopt once every box is resolved or
  /// smaller than delta (or max_points was reached).
  std::optional<Valuation> next() {
    if (q_.space.size() == 0) return next_without_params();
    while (!queue_.empty()) {
      if (q_.max_points && stats_.points >= q_.max_points) return std::nullopt;
      if (++stats_.boxes_visited > kIterationCap) throw std::logic_error("boundary search did not terminate");
      Box box = std::move(queue_.front());
      queue_.pop_front();
      const double vol = volume(box);
      const auto hard = corner(box, false);
      const auto easy = corner(box, true);
      if (!positive(easy)) {
        stats_.invalid_volume += vol;
        continue;
      }
      if (positive(hard)) {
        stats_.valid_volume += vol;
        continue;
      }
      // invariant: g(hard + lo*d) <= 0 < g(hard + hi*d)
      double lo = 0, hi = 1;
      const double diag = diagonal(box);
      std::vector<double> mid(box.size());
      while ((hi - lo) * diag > q_.diag_tol * full_diag_) {
        const double s = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < box.size(); ++i) mid[i] = hard[i] + s * (easy[i] - hard[i]);
        (positive(mid) ? hi : lo) = s;
      }
      std::vector<double> point(box.size());
      for (std::size_t i = 0; i < box.size(); ++i) point[i] = hard[i] + hi * (easy[i] - hard[i]);
      split(box, point);
      ++stats_.points;
      return to_valuation(point);
    }
    return std::nullopt;
  }

  const BoundaryStats& stats() const { return stats_; }
  std::size_t queued() const { return queue_.size(); }

  double queued_volume() const {
    double v = 0;
    for (const auto& b : queue_) v += volume(b);
    return v;
  }

  /// g at a valuation, through the compiled template.
  double g(const Valuation& v) {
    set_values(q_.space.to_values(v), false);
    return min_robustness(prog_, values_, q_.traces);
  }

  const CompiledFormula& compiled() const { return prog_; }
  const BoundaryQuery& query() const { return q_; }

 private:
  static std::vector<std::string> signal_names(std::span<const Trace> traces) {
    if (traces.empty()) throw std::invalid_argument("boundary search needs at least one trace");
    return traces.front().signal_names();
  }

  std::optional<Valuation> next_without_params() {
    if (done_) return std::nullopt;
    done_ = true;
    ++stats_.boxes_visited;
    if (min_robustness(prog_, values_, q_.traces, 0.0) > 0) {
      ++stats_.points;
      stats_.valid_volume = 1;
      return Valuation{};
    }
    stats_.invalid_volume = 1;
    return std::nullopt;
  }

  static double volume(const Box& b) {
    double v = 1;
    for (const auto& r : b) v *= r.width();
    return v;
  }

  static double diagonal(const Box& b) {
    double s = 0;
    for (const auto& r : b) s += r.width() * r.width();
    return std::sqrt(s);
  }

  std::vector<double> corner(const Box& b, bool easiest) const {
    std::vector<double> c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      c[i] = (increasing_[i] == easiest) ? b[i].hi : b[i].lo;
    return c;
  }

  void set_values(std::span<const double> coords, bool normalized) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const auto& spec = q_.space[i];
      values_[slot_[i]] = normalized ? spec.lo + coords[i] * (spec.hi - spec.lo) : coords[i];
    }
  }

  bool positive(std::span<const double> normalized) {
    set_values(normalized, true);
    ++stats_.evaluations;
    return min_robustness(prog_, values_, q_.traces, 0.0) > 0;
  }

  Valuation to_valuation(std::span<const double> normalized) const {
    std::vector<double> v(normalized.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& spec = q_.space[i];
      v[i] = spec.lo + normalized[i] * (spec.hi - spec.lo);
    }
    return q_.space.to_valuation(v);
  }

  void split(const Box& box, std::span<const double> point) {
    const std::size_t m = box.size();
    const std::size_t all = (std::size_t{1} << m) - 1;
    for (std::size_t mask = 0; mask <= all; ++mask) {
      Box child(m);
      for (std::size_t i = 0; i < m; ++i) {
        const bool easy_side = (mask >> i) & 1U;
        // the easy side of coordinate i is above the point when Increasing
        const bool upper = easy_side == increasing_[i];
        child[i] = upper ? Range{point[i], box[i].hi} : Range{box[i].lo, point[i]};
      }
      const double vol = volume(child);
      // a point on the box surface leaves flat children; they hold no volume
      if (vol <= 0) continue;
      if (mask == all) {
        stats_.valid_volume += vol;
      } else if (mask == 0) {
        stats_.invalid_volume += vol;
      } else if (diagonal(child) > q_.delta * full_diag_) {
        queue_.push_back(std::move(child));
      } else {
        stats_.remainder_volume += vol;
      }
    }
  }

  BoundaryQuery q_;
  CompiledFormula prog_;
  std::vector<std::size_t> slot_;
  std::vector<bool> increasing_;
  std::vector<double> values_;
  std::deque<Box> queue_;
  double full_diag_ = 0;
  bool done_ = false;
  BoundaryStats stats_;
};

}  // namespace stlmine
