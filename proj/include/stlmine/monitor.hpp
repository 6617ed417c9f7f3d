#pragma once

// Quantitative (robustness) and Boolean monitoring of STL on sampled traces.
//
// All temporal quantifiers range over the trace's sample grid: the window
// t + I is intersected with the sample times inside the trace domain.
// An empty window gives -kBig for F and U and +kBig for G. Atoms hold their
// last sample between grid points. A robustness of exactly 0 counts as
// "not satisfied".

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlmine/formula.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

inline double clamp_big(double v) { return std::clamp(v, -kBig, kBig); }

/// Flattened formula with parameters resolved to positions in a value
/// vector (the order of `parameters(f)`) and signals resolved to columns.
class CompiledFormula {
 public:
  struct Slot {
    double constant = 0;
    int param = -1;  // index into the value vector, -1 for a constant
  };
  struct Op {
    NodeKind kind = NodeKind::True;
    int signal = -1;
    bool lower = true;  // x > c style atom
    Slot threshold, lo, hi;
    bool lo_closed = true, hi_closed = true;
    int left = -1, right = -1;
  };

  CompiledFormula() = default;

  CompiledFormula(const Formula& f, const std::vector<std::string>& signal_names)
      : params_(parameters(f)) {
    root_ = add(f, signal_names);
  }

  const std::vector<ParamInfo>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }
  const std::vector<Op>& ops() const { return ops_; }
  int root() const { return root_; }

 private:
  Slot slot(const Bound& b) const {
    if (!b.is_param()) return {b.value(), -1};
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (params_[i].id == b.param_id()) return {0, static_cast<int>(i)};
    throw std::logic_error("unregistered parameter $" + b.param_id());
  }

  int add(const Formula& f, const std::vector<std::string>& names) {
    Op op;
    op.kind = f.kind();
    if (f.kind() == NodeKind::Atom) {
      auto it = std::find(names.begin(), names.end(), f.signal());
      if (it == names.end()) throw data_error("unknown signal '" + f.signal() + "' in formula");
      op.signal = static_cast<int>(it - names.begin());
      op.lower = is_lower_bound(f.comparison());
      op.threshold = slot(f.threshold());
    }
    if (f.is_temporal()) {
      op.lo = slot(f.interval().lo);
      op.hi = slot(f.interval().hi);
      op.lo_closed = f.interval().lo_closed;
      op.hi_closed = f.interval().hi_closed;
    }
    if (f.arity() > 0) op.left = add(f.child(0), names);
    if (f.arity() > 1) op.right = add(f.child(1), names);
    ops_.push_back(op);
    return static_cast<int>(ops_.size() - 1);
  }

  std::vector<ParamInfo> params_;
  std::vector<Op> ops_;
  int root_ = -1;
};

namespace detail {

class Evaluator {
 public:
  Evaluator(const CompiledFormula& prog, std::span<const double> values, const Trace& tr)
      : prog_(prog), values_(values), tr_(tr), n_(static_cast<long long>(tr.size())) {
    if (values.size() != prog.param_count())
      throw std::invalid_argument("valuation size does not match formula parameters");
  }

  /// Robustness at fractional sample position s (0 = start of trace).
  double at(int op_idx, double s) const {
    const auto& op = prog_.ops()[static_cast<std::size_t>(op_idx)];
    switch (op.kind) {
      case NodeKind::True: return kBig;
      case NodeKind::Atom: {
        auto k = std::min<long long>(n_ - 1, static_cast<long long>(std::floor(s + 1e-9)));
        return atom_value(op, static_cast<std::size_t>(std::max<long long>(0, k)));
      }
      case NodeKind::Not: return -at(op.left, s);
      case NodeKind::And: return std::min(at(op.left, s), at(op.right, s));
      case NodeKind::Or: return std::max(at(op.left, s), at(op.right, s));
      case NodeKind::Implies: return std::max(-at(op.left, s), at(op.right, s));
      case NodeKind::Eventually:
      case NodeKind::Always: {
        const bool ev = op.kind == NodeKind::Eventually;
        auto [jlo, jhi] = window(op, s);
        if (jlo > jhi) return ev ? -kBig : kBig;
        auto child = series(op.left, static_cast<std::size_t>(jhi + 1));
        double r = ev ? -kBig : kBig;
        for (long long j = jlo; j <= jhi; ++j)
          r = ev ? std::max(r, child[static_cast<std::size_t>(j)]) : std::min(r, child[static_cast<std::size_t>(j)]);
        return r;
      }
      case NodeKind::Until: {
        auto [jlo, jhi] = window(op, s);
        if (jlo > jhi) return -kBig;
        const auto first = static_cast<long long>(std::ceil(s - 1e-9));
        auto lhs = series(op.left, static_cast<std::size_t>(jhi + 1));
        auto rhs = series(op.right, static_cast<std::size_t>(jhi + 1));
        return until_at(lhs, rhs, first, jlo, jhi);
      }
    }
    return 0;
  }

  /// Robustness at sample indices [0, count).
  std::vector<double> series(int op_idx, std::size_t count) const {
    const auto& op = prog_.ops()[static_cast<std::size_t>(op_idx)];
    std::vector<double> out(count);
    switch (op.kind) {
      case NodeKind::True: std::fill(out.begin(), out.end(), kBig); break;
      case NodeKind::Atom:
        for (std::size_t k = 0; k < count; ++k) out[k] = atom_value(op, k);
        break;
      case NodeKind::Not: {
        out = series(op.left, count);
        for (auto& v : out) v = -v;
        break;
      }
      case NodeKind::And:
      case NodeKind::Or:
      case NodeKind::Implies: {
        out = series(op.left, count);
        auto r = series(op.right, count);
        for (std::size_t k = 0; k < count; ++k) {
          if (op.kind == NodeKind::And) out[k] = std::min(out[k], r[k]);
          else if (op.kind == NodeKind::Or) out[k] = std::max(out[k], r[k]);
          else out[k] = std::max(-out[k], r[k]);
        }
        break;
      }
      case NodeKind::Eventually:
      case NodeKind::Always: sliding(op, count, out); break;
      case NodeKind::Until: {
        const auto [olo, ohi] = raw_window(op, 0.0);
        const auto need = static_cast<std::size_t>(std::clamp<long long>(
            static_cast<long long>(count) - 1 + ohi + 1, 0, n_));
        auto lhs = series(op.left, need);
        auto rhs = series(op.right, need);
        for (std::size_t k = 0; k < count; ++k) {
          const auto kk = static_cast<long long>(k);
          const long long jlo = std::max(kk + olo, 0LL);
          const long long jhi = std::min(kk + ohi, n_ - 1);
          out[k] = jlo > jhi ? -kBig : until_at(lhs, rhs, kk, jlo, jhi);
        }
        break;
      }
    }
    return out;
  }

 private:
  double value(const CompiledFormula::Slot& s) const {
    return s.param < 0 ? s.constant : values_[static_cast<std::size_t>(s.param)];
  }

  double atom_value(const CompiledFormula::Op& op, std::size_t k) const {
    const double x = tr_.samples(static_cast<std::size_t>(op.signal))[k];
    const double c = value(op.threshold);
    return clamp_big(op.lower ? x - c : c - x);
  }

  /// Sample indices j with (j - s) * period in the interval, not yet clipped.
  std::pair<long long, long long> raw_window(const CompiledFormula::Op& op, double s) const {
    constexpr double eps = 1e-9;
    const double a = value(op.lo), b = value(op.hi);
    if (a < 0 || b < 0) throw std::invalid_argument("negative time bound");
    const double p = tr_.period();
    const double limit = static_cast<double>(n_) + 2;
    const double lo = std::min(s + a / p, limit);
    const double hi = std::min(s + b / p, limit);
    const long long jlo = op.lo_closed ? static_cast<long long>(std::ceil(lo - eps))
                                       : static_cast<long long>(std::floor(lo + eps)) + 1;
    const long long jhi = op.hi_closed ? static_cast<long long>(std::floor(hi + eps))
                                       : static_cast<long long>(std::ceil(hi - eps)) - 1;
    return {jlo, jhi};
  }

  /// raw_window clipped to the trace.
  std::pair<long long, long long> window(const CompiledFormula::Op& op, double s) const {
    auto [jlo, jhi] = raw_window(op, s);
    return {std::max(jlo, 0LL), std::min(jhi, n_ - 1)};
  }

  // max over j in [jlo, jhi] of min(rhs[j], min lhs[first .. j-1])
  static double until_at(const std::vector<double>& lhs, const std::vector<double>& rhs,
                         long long first, long long jlo, long long jhi) {
    double best = -kBig;
    double prefix = kBig;
    for (long long i = first; i < jlo; ++i) prefix = std::min(prefix, lhs[static_cast<std::size_t>(i)]);
    for (long long j = jlo; j <= jhi; ++j) {
      if (prefix <= best) break;  // later candidates cannot beat best
      best = std::max(best, std::min(rhs[static_cast<std::size_t>(j)], prefix));
      prefix = std::min(prefix, lhs[static_cast<std::size_t>(j)]);
    }
    return best;
  }

  // F/G over windows [k+olo, k+ohi] for k in [0, count) via a monotone deque.
  void sliding(const CompiledFormula::Op& op, std::size_t count, std::vector<double>& out) const {
    const bool ev = op.kind == NodeKind::Eventually;
    const double empty = ev ? -kBig : kBig;
    const auto [olo, ohi] = raw_window(op, 0.0);
    if (olo > ohi) {
      std::fill(out.begin(), out.end(), empty);
      return;
    }
    const auto need = static_cast<std::size_t>(
        std::clamp<long long>(static_cast<long long>(count) - 1 + ohi + 1, 0, n_));
    auto child = series(op.left, need);
    auto better = [ev](double x, double y) { return ev ? x >= y : x <= y; };
    std::deque<long long> dq;
    long long next = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const auto kk = static_cast<long long>(k);
      const long long lo = kk + olo;
      const long long hi = std::min(kk + ohi, static_cast<long long>(need) - 1);
      for (; next <= hi; ++next) {
        if (next < lo) continue;
        while (!dq.empty() && better(child[static_cast<std::size_t>(next)], child[static_cast<std::size_t>(dq.back())]))
          dq.pop_back();
        dq.push_back(next);
      }
      while (!dq.empty() && dq.front() < lo) dq.pop_front();
      out[k] = dq.empty() ? empty : child[static_cast<std::size_t>(dq.front())];
    }
  }

  const CompiledFormula& prog_;
  std::span<const double> values_;
  const Trace& tr_;
  long long n_;
};

}  // namespace detail

/// Robustness of a compiled formula under `values` at absolute time t.
inline double robustness(const CompiledFormula& prog, std::span<const double> values,
                         const Trace& tr, double t) {
  (void)tr.index_at(t);  // domain check
  const double s = std::max(0.0, (t - tr.start_time()) / tr.period());
  return detail::Evaluator(prog, values, tr).at(prog.root(), s);
}

/// Robustness at the first sample of the trace.
inline double robustness_at_start(const CompiledFormula& prog, std::span<const double> values,
                                  const Trace& tr) {
  return detail::Evaluator(prog, values, tr).at(prog.root(), 0.0);
}

/// Robustness of a concrete formula. Throws data_error for unknown signals
/// or t outside the trace, std::invalid_argument if f has parameters.
inline double robustness(const Formula& f, const Trace& tr, double t) {
  CompiledFormula prog(f, tr.signal_names());
  if (prog.param_count() != 0)
    throw std::invalid_argument("formula has unassigned parameter $" + prog.params().front().id);
  return robustness(prog, {}, tr, t);
}

inline double robustness(const Formula& f, const Trace& tr) { return robustness(f, tr, tr.start_time()); }

inline bool satisfies(const Formula& f, const Trace& tr, double t) { return robustness(f, tr, t) > 0; }
inline bool satisfies(const Formula& f, const Trace& tr) { return robustness(f, tr) > 0; }

}  // namespace stlmine
