#pragma once

// Robustness signatures: a template is summarized by its robustness on n
// sampled traces under m sampled valuations. Templates with equal
// signatures are treated as equivalent.
//
// The trace sample is drawn once per run. Valuation j assigns to the
// parameter at position k a value drawn from a stream keyed by
// (seed, k, j), scaled into that parameter's bounds, so templates with the
// same parameter count and bounds see the same valuation tuples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "stlmine/formula.hpp"
#include "stlmine/monitor.hpp"
#include "stlmine/param_space.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

struct SignatureConfig {
  std::size_t n = 3;
  std::size_t m = 5;
  std::uint64_t seed = 0;
  double quantum = 1e-9;
};

struct SignatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t param_count = 0;
  std::vector<std::int64_t> cells;  // row-major, in units of `quantum`
  double quantum = 1e-9;

  double at(std::size_t i, std::size_t j) const {
    return static_cast<double>(cells.at(i * cols + j)) * quantum;
  }

  friend bool operator==(const SignatureMatrix& a, const SignatureMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.param_count == b.param_count && a.cells == b.cells;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform in [0,1) determined by (seed, position, sample).
inline double keyed_uniform(std::uint64_t seed, std::uint64_t position, std::uint64_t sample) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (position * 0x632BE59BD9B4E019ULL));
  h = splitmix64(h ^ (sample * 0x85157AF5ULL + 0x1234567ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Holds the per-run trace sample and computes signatures against it.
class SignatureSampler {
 public:
  SignatureSampler(const Dataset& ds, SignatureConfig cfg) : ds_(&ds), cfg_(cfg) {
    if (cfg_.n < 1 || cfg_.m < 1) throw std::invalid_argument("signature dimensions must be >= 1");
    if (!(cfg_.quantum > 0)) throw std::invalid_argument("signature quantum must be > 0");
    if (ds.empty()) throw std::invalid_argument("signature needs at least one trace");
    std::vector<std::size_t> all(ds.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::mt19937_64 rng(cfg_.seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(cfg_.n, all.size()));
    picked_ = std::move(all);
  }

  const std::vector<std::size_t>& sample_indices() const { return picked_; }
  const SignatureConfig& config() const { return cfg_; }

  /// The m valuations used for a template with parameter space `space`.
  std::vector<std::vector<double>> valuations(const ParamSpace& space) const {
    std::vector<std::vector<double>> out(cfg_.m, std::vector<double>(space.size()));
    for (std::size_t j = 0; j < cfg_.m; ++j)
      for (std::size_t k = 0; k < space.size(); ++k) {
        const double u = detail::keyed_uniform(cfg_.seed, k, j);
        out[j][k] = space[k].lo + u * (space[k].hi - space[k].lo);
      }
    return out;
  }

  SignatureMatrix compute(const Formula& tmpl) const {
    const ParamSpace space = default_bounds(tmpl, *ds_);
    const CompiledFormula prog(tmpl, ds_->signal_names());
    SignatureMatrix sig;
    sig.rows = picked_.size();
    sig.cols = cfg_.m;
    sig.param_count = space.size();
    sig.quantum = cfg_.quantum;
    sig.cells.resize(sig.rows * sig.cols);
    const auto vals = valuations(space);
    for (std::size_t j = 0; j < cfg_.m; ++j)
      for (std::size_t i = 0; i < picked_.size(); ++i) {
        const double r = clamp_big(robustness_at_start(prog, vals[j], ds_->trace(picked_[i])));
        sig.cells[i * sig.cols + j] = std::llround(r / cfg_.quantum);
      }
    return sig;
  }

 private:
  const Dataset* ds_;
  SignatureConfig cfg_;
  std::vector<std::size_t> picked_;
};

inline SignatureMatrix compute_signature(const Formula& tmpl, const Dataset& ds, const SignatureConfig& cfg) {
  return SignatureSampler(ds, cfg).compute(tmpl);
}

/// Set of seen signatures. Lookup-and-insert is atomic.
class SignatureIndex {
 public:
  /// True and records `sig` if no equal signature was seen before.
  bool insert_if_new(const SignatureMatrix& sig) {
    std::vector<std::int64_t> key;
    key.reserve(sig.cells.size() + 3);
    key.push_back(static_cast<std::int64_t>(sig.rows));
    key.push_back(static_cast<std::int64_t>(sig.cols));
    key.push_back(static_cast<std::int64_t>(sig.param_count));
    key.insert(key.end(), sig.cells.begin(), sig.cells.end());
    std::lock_guard lock(mu_);
    return seen_.insert(std::move(key)).second;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return seen_.size();
  }

 private:
  mutable std::mutex mu_;
  std::set<std::vector<std::int64_t>> seen_;
};

inline bool is_new(const SignatureMatrix& sig, SignatureIndex& index) { return index.insert_if_new(sig); }

}  // namespace stlmine
