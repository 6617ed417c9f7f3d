#pragma once

// Abstract syntax for STL and parametric STL (PSTL) formulas.
//
// Formulas are immutable trees of shared nodes. A numeric slot (atom threshold
// or interval end) holds either a constant or a named parameter; a formula
// with no parameters is "concrete" and can be monitored directly.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace stlmine {

/// Finite stand-in for +/- infinity in robustness values.
inline constexpr double kBig = 1e9;

enum class Comparison { Less, Greater, LessEqual, GreaterEqual };

enum class NodeKind { True, Atom, Not, And, Or, Implies, Eventually, Always, Until };

enum class ParamKind { Value, Time };

enum class Polarity { Increasing, Decreasing };

inline Polarity flip(Polarity p) {
  return p == Polarity::Increasing ? Polarity::Decreasing : Polarity::Increasing;
}

/// True for `>` and `>=`.
inline bool is_lower_bound(Comparison c) {
  return c == Comparison::Greater || c == Comparison::GreaterEqual;
}

inline std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::Less: return "<";
    case Comparison::Greater: return ">";
    case Comparison::LessEqual: return "<=";
    case Comparison::GreaterEqual: return ">=";
  }
  return "?";
}

/// Shortest text that parses back to exactly `v`.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct ParamRef {
  std::string id;
  friend bool operator==(const ParamRef&, const ParamRef&) = default;
};

/// A numeric slot: either a constant or a parameter reference.
class Bound {
 public:
  Bound(double v) : v_(v) {}  // NOLINT: implicit by intent
  Bound(ParamRef p) : v_(std::move(p)) {}  // NOLINT
  static Bound param(std::string id) { return Bound(ParamRef{std::move(id)}); }

  bool is_param() const { return std::holds_alternative<ParamRef>(v_); }
  double value() const {
    if (is_param()) throw std::logic_error("bound is parameter $" + param_id());
    return std::get<double>(v_);
  }
  const std::string& param_id() const { return std::get<ParamRef>(v_).id; }

  std::string str() const { return is_param() ? "$" + param_id() : format_number(value()); }

  friend bool operator==(const Bound& a, const Bound& b) {
    if (a.is_param() != b.is_param()) return false;
    if (a.is_param()) return a.param_id() == b.param_id();
    // bitwise-style equality; 0 and -0 are the same threshold
    return std::get<double>(a.v_) == std::get<double>(b.v_);
  }

 private:
  std::variant<double, ParamRef> v_;
};

struct Interval {
  Bound lo = 0.0;
  Bound hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool is_concrete() const { return !lo.is_param() && !hi.is_param(); }

  /// Empty windows only arise from concrete ends with lo > hi, or lo == hi
  /// with an open end.
  bool is_empty_window() const {
    if (!is_concrete()) return false;
    const double a = lo.value(), b = hi.value();
    return a > b || (a == b && !(lo_closed && hi_closed));
  }

  std::string str() const {
    return std::string(lo_closed ? "[" : "(") + lo.str() + "," + hi.str() + (hi_closed ? "]" : ")");
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Throws std::invalid_argument if a concrete interval is ill-formed.
inline void check_interval(const Interval& iv) {
  if (!iv.lo.is_param() && (iv.lo.value() < 0 || !std::isfinite(iv.lo.value())))
    throw std::invalid_argument("interval lower bound must be finite and >= 0: " + iv.str());
  if (!iv.hi.is_param() && (iv.hi.value() < 0 || !std::isfinite(iv.hi.value())))
    throw std::invalid_argument("interval upper bound must be finite and >= 0: " + iv.str());
  if (iv.is_concrete()) {
    if (iv.lo.value() > iv.hi.value())
      throw std::invalid_argument("interval lower bound exceeds upper bound: " + iv.str());
    if (iv.lo.value() == iv.hi.value() && !(iv.lo_closed && iv.hi_closed))
      throw std::invalid_argument("point interval must be closed: " + iv.str());
  }
}

class Formula {
 public:
  struct Node;

  static Formula truth();
  static Formula atom(std::string signal, Comparison cmp, Bound threshold);
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula implication(Formula l, Formula r);
  static Formula eventually(Interval iv, Formula f);
  static Formula always(Interval iv, Formula f);
  static Formula until(Interval iv, Formula l, Formula r);

  /// Builds a node of `kind` from parts; used by rewriting passes.
  static Formula make(NodeKind kind, std::vector<Formula> children, Interval iv = {},
                      std::string signal = {}, Comparison cmp = Comparison::Greater,
                      Bound threshold = 0.0);

  NodeKind kind() const;
  const std::string& signal() const;
  Comparison comparison() const;
  const Bound& threshold() const;
  const Interval& interval() const;
  std::size_t arity() const;
  const Formula& child(std::size_t i) const;
  const Formula& left() const { return child(0); }
  const Formula& right() const { return child(1); }

  bool is_temporal() const {
    auto k = kind();
    return k == NodeKind::Eventually || k == NodeKind::Always || k == NodeKind::Until;
  }
  bool is_binary() const {
    auto k = kind();
    return k == NodeKind::And || k == NodeKind::Or || k == NodeKind::Implies ||
           k == NodeKind::Until;
  }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  NodeKind kind = NodeKind::True;
  std::string signal;
  Comparison cmp = Comparison::Greater;
  Bound threshold = 0.0;
  Interval interval;
  std::vector<Formula> children;
};

inline Formula Formula::make(NodeKind kind, std::vector<Formula> children, Interval iv,
                             std::string signal, Comparison cmp, Bound threshold) {
  std::size_t want = 0;
  switch (kind) {
    case NodeKind::True:
    case NodeKind::Atom: want = 0; break;
    case NodeKind::Not:
    case NodeKind::Eventually:
    case NodeKind::Always: want = 1; break;
    default: want = 2;
  }
  if (children.size() != want) throw std::invalid_argument("formula node arity mismatch");
  if (kind == NodeKind::Eventually || kind == NodeKind::Always || kind == NodeKind::Until)
    check_interval(iv);
  if (kind == NodeKind::Atom) {
    if (signal.empty()) throw std::invalid_argument("atom needs a signal name");
    if (!threshold.is_param() && !std::isfinite(threshold.value()))
      throw std::invalid_argument("atom threshold must be finite");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(children);
  n->interval = std::move(iv);
  n->signal = std::move(signal);
  n->cmp = cmp;
  n->threshold = std::move(threshold);
  return Formula(std::move(n));
}

inline Formula Formula::truth() { return make(NodeKind::True, {}); }
inline Formula Formula::atom(std::string signal, Comparison cmp, Bound threshold) {
  return make(NodeKind::Atom, {}, {}, std::move(signal), cmp, std::move(threshold));
}
inline Formula Formula::negation(Formula f) { return make(NodeKind::Not, {std::move(f)}); }
inline Formula Formula::conjunction(Formula l, Formula r) {
  return make(NodeKind::And, {std::move(l), std::move(r)});
}
inline Formula Formula::disjunction(Formula l, Formula r) {
  return make(NodeKind::Or, {std::move(l), std::move(r)});
}
inline Formula Formula::implication(Formula l, Formula r) {
  return make(NodeKind::Implies, {std::move(l), std::move(r)});
}
inline Formula Formula::eventually(Interval iv, Formula f) {
  return make(NodeKind::Eventually, {std::move(f)}, std::move(iv));
}
inline Formula Formula::always(Interval iv, Formula f) {
  return make(NodeKind::Always, {std::move(f)}, std::move(iv));
}
inline Formula Formula::until(Interval iv, Formula l, Formula r) {
  return make(NodeKind::Until, {std::move(l), std::move(r)}, std::move(iv));
}

inline NodeKind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::signal() const { return node_->signal; }
inline Comparison Formula::comparison() const { return node_->cmp; }
inline const Bound& Formula::threshold() const { return node_->threshold; }
inline const Interval& Formula::interval() const { return node_->interval; }
inline std::size_t Formula::arity() const { return node_->children.size(); }
inline const Formula& Formula::child(std::size_t i) const { return node_->children.at(i); }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::True: return true;
    case NodeKind::Atom: return x.signal == y.signal && x.cmp == y.cmp && x.threshold == y.threshold;
    case NodeKind::Eventually:
    case NodeKind::Always:
    case NodeKind::Until:
      if (!(x.interval == y.interval)) return false;
      break;
    default: break;
  }
  return x.children == y.children;
}

/// Number of AST nodes.
inline std::size_t length(const Formula& f) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < f.arity(); ++i) n += length(f.child(i));
  return n;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

// Higher binds tighter. Primaries (true, atoms, temporal operators) are 4.
inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Implies: return 0;
    case NodeKind::Or: return 1;
    case NodeKind::And: return 2;
    case NodeKind::Not: return 3;
    default: return 4;
  }
}

inline void print(const Formula& f, std::string& out);

inline void print_wrapped(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  print(f, out);
  if (parens) out += ')';
}

inline void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case NodeKind::True: out += "true"; return;
    case NodeKind::Atom:
      out += f.signal();
      out += ' ';
      out += to_string(f.comparison());
      out += ' ';
      out += f.threshold().str();
      return;
    case NodeKind::Not:
      out += "not ";
      print_wrapped(f.child(0), precedence(f.child(0)) < 3, out);
      return;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies: {
      // and/or group to the left, implies to the right
      const int p = precedence(f);
      const bool right_assoc = f.kind() == NodeKind::Implies;
      print_wrapped(f.left(), right_assoc ? precedence(f.left()) <= p : precedence(f.left()) < p, out);
      out += f.kind() == NodeKind::And ? " and " : f.kind() == NodeKind::Or ? " or " : " implies ";
      print_wrapped(f.right(), right_assoc ? precedence(f.right()) < p : precedence(f.right()) <= p, out);
      return;
    }
    case NodeKind::Eventually:
    case NodeKind::Always:
      out += f.kind() == NodeKind::Eventually ? "F" : "G";
      out += f.interval().str();
      print_wrapped(f.child(0), true, out);
      return;
    case NodeKind::Until:
      print_wrapped(f.left(), true, out);
      out += " U";
      out += f.interval().str();
      print_wrapped(f.right(), true, out);
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string s;
  detail::print(f, s);
  return s;
}

// ---------------------------------------------------------------------------
// Parameters and polarity

struct ParamInfo {
  std::string id;
  ParamKind kind = ParamKind::Value;
  Polarity polarity = Polarity::Increasing;
  std::string signal;  // owning atom's signal, Value parameters only
};

using PolarityMap = std::map<std::string, Polarity>;

namespace detail {

inline void collect_params(const Formula& f, Polarity ctx, std::vector<ParamInfo>& out) {
  auto add = [&](const Bound& b, ParamKind kind, Polarity pol, const std::string& sig) {
    if (!b.is_param()) return;
    for (const auto& p : out)
      if (p.id == b.param_id())
        throw std::invalid_argument("parameter $" + b.param_id() + " occurs more than once");
    out.push_back({b.param_id(), kind, pol, sig});
  };
  const auto same = ctx;
  const auto inv = flip(ctx);
  switch (f.kind()) {
    case NodeKind::True: return;
    case NodeKind::Atom:
      // x > c gets harder as c grows; x < c gets easier.
      add(f.threshold(), ParamKind::Value, is_lower_bound(f.comparison()) ? inv : same, f.signal());
      return;
    case NodeKind::Not: collect_params(f.child(0), inv, out); return;
    case NodeKind::And:
    case NodeKind::Or:
      collect_params(f.left(), ctx, out);
      collect_params(f.right(), ctx, out);
      return;
    case NodeKind::Implies:
      collect_params(f.left(), inv, out);
      collect_params(f.right(), ctx, out);
      return;
    case NodeKind::Eventually:
    case NodeKind::Until:
      // widening the window to the right helps an existential, a later start hurts it
      add(f.interval().lo, ParamKind::Time, inv, {});
      add(f.interval().hi, ParamKind::Time, same, {});
      for (std::size_t i = 0; i < f.arity(); ++i) collect_params(f.child(i), ctx, out);
      return;
    case NodeKind::Always:
      add(f.interval().lo, ParamKind::Time, same, {});
      add(f.interval().hi, ParamKind::Time, inv, {});
      collect_params(f.child(0), ctx, out);
      return;
  }
}

}  // namespace detail

/// Parameters in pre-order of first occurrence (node slots before children,
/// interval lower end before upper end), with their syntactic polarity.
inline std::vector<ParamInfo> parameters(const Formula& f) {
  std::vector<ParamInfo> out;
  detail::collect_params(f, Polarity::Increasing, out);
  return out;
}

inline PolarityMap infer_polarity(const Formula& f) {
  PolarityMap m;
  for (auto& p : parameters(f)) m.emplace(p.id, p.polarity);
  return m;
}

inline bool is_concrete(const Formula& f) { return parameters(f).empty(); }

inline void collect_signals(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == NodeKind::Atom) out.insert(f.signal());
  for (std::size_t i = 0; i < f.arity(); ++i) collect_signals(f.child(i), out);
}

namespace detail {

inline Formula rebuild(const Formula& f, const auto& map_bound) {
  Interval iv = f.interval();
  Bound thr = f.threshold();
  if (f.kind() == NodeKind::Atom) thr = map_bound(thr, ParamKind::Value);
  if (f.is_temporal()) {
    iv.lo = map_bound(iv.lo, ParamKind::Time);
    iv.hi = map_bound(iv.hi, ParamKind::Time);
  }
  std::vector<Formula> kids;
  kids.reserve(f.arity());
  for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(rebuild(f.child(i), map_bound));
  return Formula::make(f.kind(), std::move(kids), std::move(iv), f.signal(), f.comparison(),
                       std::move(thr));
}

}  // namespace detail

/// Renames every parameter in pre-order: value thresholds become c1, c2, ...
/// and time bounds t1, t2, ...
inline Formula renumber_parameters(const Formula& f) {
  int nc = 0, nt = 0;
  return detail::rebuild(f, [&](const Bound& b, ParamKind kind) -> Bound {
    if (!b.is_param()) return b;
    return Bound::param(kind == ParamKind::Value ? "c" + std::to_string(++nc)
                                                 : "t" + std::to_string(++nt));
  });
}

}  // namespace stlmine
