#pragma once

// Length-ordered enumeration of PSTL templates.
//
// Length 1 emits the atom schemas; length 2 applies each unary operator to
// every stored length-1 template; from length 3 on, unary operators are
// applied to length l-1 templates and then every binary operator to every
// (lhs, rhs) pair of lengths (i, l-1-i). Every template receives fresh
// parameters (c1.., t1.. in pre-order) and is handed to a visitor, which
// decides whether it is kept for building longer templates.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlmine/formula.hpp"

namespace stlmine {

struct AtomSchema {
  std::string signal;
  Comparison cmp = Comparison::Greater;
};

enum class UnaryOp { Not, Eventually, Always };
enum class BinaryOp { Or, And, Until, Implies };

struct Grammar {
  std::vector<AtomSchema> atoms;
  std::vector<UnaryOp> unary_ops;
  std::vector<BinaryOp> binary_ops;
  /// Temporal operators get [$a,$b] instead of [0,$b].
  bool two_sided_intervals = false;
  /// Do not emit `not` directly above an atom whose complement is an atom
  /// schema of the grammar.
  bool skip_complement_negation = true;

  /// `sig > $c` and `sig < $c` per signal; unary not, F, G; binary or, and,
  /// U, implies.
  static Grammar standard(const std::vector<std::string>& signals, bool negation = true) {
    Grammar g;
    for (const auto& s : signals) {
      g.atoms.push_back({s, Comparison::Greater});
      g.atoms.push_back({s, Comparison::Less});
    }
    if (negation) g.unary_ops.push_back(UnaryOp::Not);
    g.unary_ops.push_back(UnaryOp::Eventually);
    g.unary_ops.push_back(UnaryOp::Always);
    g.binary_ops = {BinaryOp::Or, BinaryOp::And, BinaryOp::Until, BinaryOp::Implies};
    return g;
  }
};

/// Kept templates, bucketed by length.
class FormulaDB {
 public:
  /// Makes buckets up to `len` exist; references to buckets stay valid
  /// until the next call that grows the table.
  void ensure(std::size_t len) {
    if (by_length_.size() <= len) by_length_.resize(len + 1);
  }
  void add(std::size_t len, Formula f) {
    ensure(len);
    by_length_[len].push_back(std::move(f));
  }
  const std::vector<Formula>& at(std::size_t len) const {
    static const std::vector<Formula> none;
    return len < by_length_.size() ? by_length_[len] : none;
  }
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& v : by_length_) n += v.size();
    return n;
  }

 private:
  std::vector<std::vector<Formula>> by_length_;
};

enum class Visit {
  Continue,  // keep the template
  Pruned,    // duplicate; do not keep
  Stop,      // abort enumeration
};

struct EnumerationReport {
  std::size_t emitted = 0;
  std::size_t pruned = 0;
  std::size_t attempts = 0;  // emitted templates that were not pruned
  std::vector<std::size_t> emitted_per_length;  // index = length
  bool stopped = false;
};

namespace detail {

class Enumeration {
 public:
  Enumeration(const Grammar& g, std::function<Visit(const Formula&)> visit)
      : g_(g), visit_(std::move(visit)) {}

  EnumerationReport run(std::size_t max_length) {
    for (std::size_t len = 1; len <= max_length && !report_.stopped; ++len) {
      report_.emitted_per_length.resize(len + 1, 0);
      db_.ensure(len);
      if (len == 1) {
        atoms();
      } else {
        unary(len);
        if (len >= 3) binary(len);
      }
    }
    return report_;
  }

 private:
  bool emit(std::size_t len, const Formula& raw) {
    if (report_.stopped) return false;
    Formula f = renumber_parameters(raw);
    ++report_.emitted;
    ++report_.emitted_per_length[len];
    switch (visit_(f)) {
      case Visit::Continue:
        ++report_.attempts;
        db_.add(len, std::move(f));
        return true;
      case Visit::Pruned: ++report_.pruned; return true;
      case Visit::Stop:
        ++report_.attempts;
        report_.stopped = true;
        return false;
    }
    return true;
  }

  Interval fresh_interval() const {
    Interval iv;
    iv.lo = g_.two_sided_intervals ? Bound::param("a") : Bound(0.0);
    iv.hi = Bound::param("b");
    return iv;
  }

  bool complement_in_grammar(const Formula& atom) const {
    const bool lower = is_lower_bound(atom.comparison());
    for (const auto& a : g_.atoms)
      if (a.signal == atom.signal() && is_lower_bound(a.cmp) != lower) return true;
    return false;
  }

  void atoms() {
    for (const auto& a : g_.atoms)
      if (!emit(1, Formula::atom(a.signal, a.cmp, Bound::param("c")))) return;
  }

  void unary(std::size_t len) {
    for (auto op : g_.unary_ops) {
      const auto& args = db_.at(len - 1);
      for (std::size_t k = 0; k < args.size(); ++k) {
        const Formula& arg = args[k];
        Formula f = Formula::truth();
        switch (op) {
          case UnaryOp::Not:
            if (g_.skip_complement_negation && arg.kind() == NodeKind::Atom && complement_in_grammar(arg))
              continue;
            f = Formula::negation(arg);
            break;
          case UnaryOp::Eventually: f = Formula::eventually(fresh_interval(), arg); break;
          case UnaryOp::Always: f = Formula::always(fresh_interval(), arg); break;
        }
        if (!emit(len, f)) return;
      }
    }
  }

  void binary(std::size_t len) {
    for (auto op : g_.binary_ops) {
      for (std::size_t i = 1; i + 2 <= len; ++i) {
        const auto& lhs_args = db_.at(i);
        const auto& rhs_args = db_.at(len - 1 - i);
        for (std::size_t a = 0; a < lhs_args.size(); ++a) {
          for (std::size_t b = 0; b < rhs_args.size(); ++b) {
            const Formula& l = lhs_args[a];
            const Formula& r = rhs_args[b];
            Formula f = op == BinaryOp::Or    ? Formula::disjunction(l, r)
                        : op == BinaryOp::And ? Formula::conjunction(l, r)
                        : op == BinaryOp::Implies
                            ? Formula::implication(l, r)
                            : Formula::until(fresh_interval(), l, r);
            if (!emit(len, f)) return;
          }
        }
      }
    }
  }

  const Grammar& g_;
  std::function<Visit(const Formula&)> visit_;
  FormulaDB db_;
  EnumerationReport report_;

 public:
  const FormulaDB& db() const { return db_; }
};

}  // namespace detail

/// Enumerates templates up to `max_length` nodes in length order, calling
/// `visit` on each.
inline EnumerationReport enumerate(const Grammar& g, std::size_t max_length,
                                   std::function<Visit(const Formula&)> visit) {
  if (max_length < 1) throw std::invalid_argument("max_length must be >= 1");
  return detail::Enumeration(g, std::move(visit)).run(max_length);
}

}  // namespace stlmine
