#pragma once

// Random formula/trace generators and brute-force reference semantics.
// The oracles walk every sample and test window membership directly; they
// share no code with the library's index arithmetic.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "stlmine/stlmine.hpp"

namespace testing_support {

using namespace stlmine;

inline double pick(std::mt19937_64& rng, const std::vector<double>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

inline int roll(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct FormulaGen {
  std::vector<std::string> signals{"x", "y"};
  bool with_params = false;
  bool with_true = true;
  int next_param = 0;

  Bound value(std::mt19937_64& rng) {
    if (with_params && roll(rng, 0, 2) == 0) return Bound::param("c" + std::to_string(++next_param));
    if (roll(rng, 0, 1)) return pick(rng, {-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2});
    return std::round(real(rng, -3, 3) * 1000) / 1000;
  }

  Interval interval(std::mt19937_64& rng) {
    Interval iv;
    if (with_params && roll(rng, 0, 2) == 0) {
      iv.lo = roll(rng, 0, 1) ? Bound(0.0) : Bound::param("a" + std::to_string(++next_param));
      iv.hi = Bound::param("b" + std::to_string(++next_param));
      iv.lo_closed = roll(rng, 0, 3) != 0;
      iv.hi_closed = roll(rng, 0, 3) != 0;
      return iv;
    }
    double a = pick(rng, {0, 0, 0.5, 1, 1.5, 2, 0.25});
    double b = a + pick(rng, {0, 0.5, 1, 1.5, 2, 3, 0.75, 10});
    iv.lo = a;
    iv.hi = b;
    iv.lo_closed = roll(rng, 0, 3) != 0;
    iv.hi_closed = roll(rng, 0, 3) != 0;
    if (a == b) iv.lo_closed = iv.hi_closed = true;
    return iv;
  }

  Formula leaf(std::mt19937_64& rng) {
    if (with_true && roll(rng, 0, 7) == 0) return Formula::truth();
    const auto& s = signals[std::uniform_int_distribution<std::size_t>(0, signals.size() - 1)(rng)];
    const Comparison cmps[] = {Comparison::Less, Comparison::Greater, Comparison::LessEqual,
                               Comparison::GreaterEqual};
    return Formula::atom(s, cmps[roll(rng, 0, 3)], value(rng));
  }

  /// A formula with exactly `len` nodes.
  Formula exact(std::mt19937_64& rng, int len) {
    if (len <= 1) return leaf(rng);
    if (len == 2 || roll(rng, 0, 2) == 0) {
      Formula c = exact(rng, len - 1);
      switch (roll(rng, 0, 2)) {
        case 0: return Formula::negation(c);
        case 1: return Formula::eventually(interval(rng), c);
        default: return Formula::always(interval(rng), c);
      }
    }
    const int left = roll(rng, 1, len - 2);
    Formula l = exact(rng, left);
    Formula r = exact(rng, len - 1 - left);
    switch (roll(rng, 0, 3)) {
      case 0: return Formula::conjunction(l, r);
      case 1: return Formula::disjunction(l, r);
      case 2: return Formula::implication(l, r);
      default: return Formula::until(interval(rng), l, r);
    }
  }
};

inline Trace random_trace(std::mt19937_64& rng, int max_samples = 6, bool grid_values = true) {
  const int n = roll(rng, 1, max_samples);
  const double period = pick(rng, {0.5, 1.0, 0.25});
  const double start = pick(rng, {0.0, 0.0, 1.5});
  std::vector<std::vector<double>> cols(2, std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& c : cols)
    for (auto& v : c) v = grid_values && roll(rng, 0, 1) ? pick(rng, {-2, -1, -0.5, 0, 0.5, 1, 2}) : real(rng, -3, 3);
  return Trace({"x", "y"}, cols, period, start);
}

// ---- brute-force semantics at sample index i --------------------------------

inline bool in_window(long k, long i, double period, const Interval& iv) {
  // offsets in index units; 1e-9 absorbs representation error of a/p
  const double d = static_cast<double>(k - i);
  const double a = iv.lo.value() / period, b = iv.hi.value() / period;
  const bool above = iv.lo_closed ? d >= a - 1e-9 : d > a + 1e-9;
  const bool below = iv.hi_closed ? d <= b + 1e-9 : d < b - 1e-9;
  return above && below;
}

inline double oracle_robustness(const Formula& f, const Trace& tr, long i) {
  const long n = static_cast<long>(tr.size());
  switch (f.kind()) {
    case NodeKind::True: return kBig;
    case NodeKind::Atom: {
      const double v = tr.samples(f.signal())[static_cast<std::size_t>(i)];
      const double c = f.threshold().value();
      const bool lower = f.comparison() == Comparison::Greater || f.comparison() == Comparison::GreaterEqual;
      return lower ? v - c : c - v;
    }
    case NodeKind::Not: return -oracle_robustness(f.child(0), tr, i);
    case NodeKind::And: return std::min(oracle_robustness(f.left(), tr, i), oracle_robustness(f.right(), tr, i));
    case NodeKind::Or: return std::max(oracle_robustness(f.left(), tr, i), oracle_robustness(f.right(), tr, i));
    case NodeKind::Implies:
      return std::max(-oracle_robustness(f.left(), tr, i), oracle_robustness(f.right(), tr, i));
    case NodeKind::Eventually: {
      double best = -kBig;
      for (long k = 0; k < n; ++k)
        if (in_window(k, i, tr.period(), f.interval())) best = std::max(best, oracle_robustness(f.child(0), tr, k));
      return best;
    }
    case NodeKind::Always: {
      double best = kBig;
      for (long k = 0; k < n; ++k)
        if (in_window(k, i, tr.period(), f.interval())) best = std::min(best, oracle_robustness(f.child(0), tr, k));
      return best;
    }
    case NodeKind::Until: {
      double best = -kBig;
      for (long j = 0; j < n; ++j) {
        if (!in_window(j, i, tr.period(), f.interval())) continue;
        double inner = kBig;
        for (long k = i; k < j; ++k) inner = std::min(inner, oracle_robustness(f.left(), tr, k));
        best = std::max(best, std::min(oracle_robustness(f.right(), tr, j), inner));
      }
      return best;
    }
  }
  return 0;
}

inline bool oracle_boolean(const Formula& f, const Trace& tr, long i) {
  const long n = static_cast<long>(tr.size());
  switch (f.kind()) {
    case NodeKind::True: return true;
    case NodeKind::Atom: {
      const double v = tr.samples(f.signal())[static_cast<std::size_t>(i)];
      const double c = f.threshold().value();
      switch (f.comparison()) {
        case Comparison::Less: return v < c;
        case Comparison::Greater: return v > c;
        case Comparison::LessEqual: return v <= c;
        case Comparison::GreaterEqual: return v >= c;
      }
      return false;
    }
    case NodeKind::Not: return !oracle_boolean(f.child(0), tr, i);
    case NodeKind::And: return oracle_boolean(f.left(), tr, i) && oracle_boolean(f.right(), tr, i);
    case NodeKind::Or: return oracle_boolean(f.left(), tr, i) || oracle_boolean(f.right(), tr, i);
    case NodeKind::Implies: return !oracle_boolean(f.left(), tr, i) || oracle_boolean(f.right(), tr, i);
    case NodeKind::Eventually:
      for (long k = 0; k < n; ++k)
        if (in_window(k, i, tr.period(), f.interval()) && oracle_boolean(f.child(0), tr, k)) return true;
      return false;
    case NodeKind::Always:
      for (long k = 0; k < n; ++k)
        if (in_window(k, i, tr.period(), f.interval()) && !oracle_boolean(f.child(0), tr, k)) return false;
      return true;
    case NodeKind::Until:
      for (long j = 0; j < n; ++j) {
        if (!in_window(j, i, tr.period(), f.interval()) || !oracle_boolean(f.right(), tr, j)) continue;
        bool hold = true;
        for (long k = i; k < j && hold; ++k) hold = oracle_boolean(f.left(), tr, k);
        if (hold) return true;
      }
      return false;
  }
  return false;
}

/// Independent count of templates per length for a grammar with `atoms`
/// atom schemas, `unary` unary and `binary` binary operators.
inline std::vector<std::size_t> count_templates(std::size_t atoms, std::size_t unary, std::size_t binary,
                                                std::size_t max_len) {
  std::vector<std::size_t> c(max_len + 1, 0);
  for (std::size_t l = 1; l <= max_len; ++l) {
    if (l == 1) {
      c[l] = atoms;
      continue;
    }
    c[l] = unary * c[l - 1];
    for (std::size_t i = 1; i + 2 <= l; ++i) c[l] += binary * c[i] * c[l - 1 - i];
  }
  return c;
}

/// Points on the easy side of `v` (ν ≤ ν' in the satisfaction order).
inline Valuation easier(std::mt19937_64& rng, const Valuation& v, const ParamSpace& space, const PolarityMap& pol) {
  Valuation out = v;
  for (const auto& s : space.specs()) {
    const double x = v.at(s.id);
    const bool inc = pol.at(s.id) == Polarity::Increasing;
    out[s.id] = roll(rng, 0, 3) == 0 ? x : (inc ? real(rng, x, s.hi) : real(rng, s.lo, x));
  }
  return out;
}

inline Valuation random_valuation(std::mt19937_64& rng, const ParamSpace& space) {
  Valuation v;
  for (const auto& s : space.specs()) v[s.id] = real(rng, s.lo, s.hi);
  return v;
}

struct MergedPair {
  Formula kept = Formula::truth();
  Formula dropped = Formula::truth();
};

/// Runs the unpruned enumeration and pairs every template whose signature
/// was seen before with the first template that produced it.
inline std::vector<MergedPair> merged_pairs(const Grammar& g, std::size_t max_len, const Dataset& ds,
                                            const SignatureConfig& cfg) {
  const SignatureSampler sampler(ds, cfg);
  std::vector<std::pair<SignatureMatrix, Formula>> seen;
  std::vector<MergedPair> out;
  enumerate(g, max_len, [&](const Formula& f) {
    const auto sig = sampler.compute(f);
    for (const auto& [s, first] : seen)
      if (s == sig) {
        out.push_back({first, f});
        return Visit::Pruned;
      }
    seen.emplace_back(sig, f);
    return Visit::Continue;
  });
  return out;
}

/// Fraction of random (pair, trace, valuation) probes on which both
/// templates of a pair give the same verdict. Position k of both templates
/// receives the same relative offset within its own bounds.
inline double probe_agreement(const std::vector<MergedPair>& pairs, const Dataset& ds, int probes,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int agree = 0;
  for (int n = 0; n < probes; ++n) {
    const auto& p = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
    const Trace& tr = ds.trace(std::uniform_int_distribution<std::size_t>(0, ds.size() - 1)(rng));
    const ParamSpace a = default_bounds(p.kept, ds), b = default_bounds(p.dropped, ds);
    std::vector<double> va(a.size()), vb(b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double u = real(rng, 0, 1);
      va[k] = a[k].lo + u * (a[k].hi - a[k].lo);
      vb[k] = b[k].lo + u * (b[k].hi - b[k].lo);
    }
    const bool sa = satisfies(instantiate(p.kept, a.to_valuation(va)), tr);
    const bool sb = satisfies(instantiate(p.dropped, b.to_valuation(vb)), tr);
    agree += sa == sb;
  }
  return static_cast<double>(agree) / probes;
}

}  // namespace testing_support
