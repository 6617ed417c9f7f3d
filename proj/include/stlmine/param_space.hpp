#pragma once

// Parameter bounds, valuations and template instantiation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlmine/formula.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

using Valuation = std::map<std::string, double>;

struct ParamSpec {
  std::string id;
  ParamKind kind = ParamKind::Value;
  double lo = 0;
  double hi = 1;
  Polarity polarity = Polarity::Increasing;
};

struct Range {
  double lo = 0;
  double hi = 0;
  double width() const { return hi - lo; }
  friend bool operator==(const Range&, const Range&) = default;
};

/// Axis-aligned box, one closed range per ParamSpace coordinate.
using Box = std::vector<Range>;

/// Ordered parameter bounds; coordinate i of a Box or value vector is
/// parameter i of `specs()`.
class ParamSpace {
 public:
  ParamSpace() = default;
  explicit ParamSpace(std::vector<ParamSpec> specs) : specs_(std::move(specs)) {
    for (const auto& s : specs_) {
      if (!(s.lo < s.hi)) throw std::invalid_argument("parameter $" + s.id + " needs lo < hi");
      if (s.kind == ParamKind::Time && s.lo < 0)
        throw std::invalid_argument("time parameter $" + s.id + " must be >= 0");
    }
  }

  std::size_t size() const { return specs_.size(); }
  const std::vector<ParamSpec>& specs() const { return specs_; }
  const ParamSpec& operator[](std::size_t i) const { return specs_.at(i); }

  Box box() const {
    Box b;
    for (const auto& s : specs_) b.push_back({s.lo, s.hi});
    return b;
  }

  Valuation to_valuation(std::span<const double> values) const {
    if (values.size() != specs_.size()) throw std::invalid_argument("value vector size mismatch");
    Valuation v;
    for (std::size_t i = 0; i < specs_.size(); ++i) v[specs_[i].id] = values[i];
    return v;
  }

  std::vector<double> to_values(const Valuation& v) const {
    std::vector<double> out;
    for (const auto& s : specs_) {
      auto it = v.find(s.id);
      if (it == v.end()) throw std::invalid_argument("valuation misses parameter $" + s.id);
      out.push_back(it->second);
    }
    return out;
  }

  bool contains(const Valuation& v) const {
    for (const auto& s : specs_) {
      auto it = v.find(s.id);
      if (it == v.end() || it->second < s.lo || it->second > s.hi) return false;
    }
    return true;
  }

 private:
  std::vector<ParamSpec> specs_;
};

/// Replaces every parameter of `f` by its value in `v`. Throws
/// std::invalid_argument on a missing parameter or an ill-formed interval.
inline Formula instantiate(const Formula& f, const Valuation& v) {
  return detail::rebuild(f, [&](const Bound& b, ParamKind) -> Bound {
    if (!b.is_param()) return b;
    auto it = v.find(b.param_id());
    if (it == v.end()) throw std::invalid_argument("valuation misses parameter $" + b.param_id());
    return it->second;
  });
}

/// Search bounds derived from data: value thresholds span the observed range
/// of their signal padded by 10% (or by 1.0 for a constant signal); time
/// bounds span [0, shortest trace duration].
inline ParamSpace default_bounds(const Formula& f, const Dataset& ds) {
  if (ds.empty()) throw data_error("cannot derive bounds from an empty dataset");
  double min_duration = std::numeric_limits<double>::infinity();
  for (const auto& tr : ds.traces()) min_duration = std::min(min_duration, tr.duration());
  // a one-sample trace still leaves a window of one period to search
  const double time_hi = min_duration > 0 ? min_duration : ds.trace(0).period();

  std::map<std::string, Range> ranges;
  auto signal_range = [&](const std::string& sig) -> Range {
    auto it = ranges.find(sig);
    if (it != ranges.end()) return it->second;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& tr : ds.traces()) {
      const auto& s = tr.samples(sig);
      auto [mn, mx] = std::minmax_element(s.begin(), s.end());
      lo = std::min(lo, *mn);
      hi = std::max(hi, *mx);
    }
    const double pad = hi > lo ? 0.1 * (hi - lo) : 1.0;
    Range r{lo - pad, hi + pad};
    ranges.emplace(sig, r);
    return r;
  };

  std::vector<ParamSpec> specs;
  for (const auto& p : parameters(f)) {
    ParamSpec s{p.id, p.kind, 0, time_hi, p.polarity};
    if (p.kind == ParamKind::Value) {
      auto r = signal_range(p.signal);
      s.lo = r.lo;
      s.hi = r.hi;
    }
    specs.push_back(s);
  }
  return ParamSpace(std::move(specs));
}

}  // namespace stlmine
