#pragma once

// Uniformly sampled multi-signal traces and labeled datasets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stlmine {

/// Raised for malformed or inconsistent input data.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Trace {
 public:
  Trace() = default;

  /// `samples[s]` is the series of signal `names[s]`.
  Trace(std::vector<std::string> names, std::vector<std::vector<double>> samples, double period,
        double start_time = 0.0)
      : names_(std::move(names)), samples_(std::move(samples)), period_(period), start_(start_time) {
    if (!(period_ > 0) || !std::isfinite(period_)) throw data_error("trace period must be > 0");
    if (!std::isfinite(start_)) throw data_error("trace start time must be finite");
    if (names_.empty() || names_.size() != samples_.size())
      throw data_error("trace needs one sample array per signal");
    const std::size_t n = samples_.front().size();
    if (n == 0) throw data_error("trace must hold at least one sample");
    for (std::size_t s = 0; s < samples_.size(); ++s) {
      if (samples_[s].size() != n) throw data_error("signal '" + names_[s] + "' has a different length");
      for (double v : samples_[s])
        if (!std::isfinite(v)) throw data_error("signal '" + names_[s] + "' contains a non-finite sample");
    }
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j]) throw data_error("duplicate signal '" + names_[i] + "'");
  }

  const std::vector<std::string>& signal_names() const { return names_; }
  double period() const { return period_; }
  double start_time() const { return start_; }
  std::size_t size() const { return samples_.front().size(); }
  double end_time() const { return start_ + static_cast<double>(size() - 1) * period_; }
  double duration() const { return static_cast<double>(size() - 1) * period_; }
  double time_at(std::size_t k) const { return start_ + static_cast<double>(k) * period_; }

  bool has_signal(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
  }

  /// Index of `name`, or throws data_error.
  std::size_t signal_index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw data_error("unknown signal '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
  }

  const std::vector<double>& samples(std::size_t signal) const { return samples_.at(signal); }
  const std::vector<double>& samples(const std::string& name) const { return samples_[signal_index(name)]; }

  /// Sample index in force at time t under sample-and-hold.
  std::size_t index_at(double t) const {
    constexpr double eps = 1e-9;
    if (!(t >= start_ - eps * period_) || !(t <= end_time() + eps * period_))
      throw data_error("time " + std::to_string(t) + " outside trace domain");
    const double s = (t - start_) / period_;
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor(s + eps)));
    return std::min(k, size() - 1);
  }

  double value_at(const std::string& signal, double t) const {
    return samples_[signal_index(signal)][index_at(t)];
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> samples_;
  double period_ = 1.0;
  double start_ = 0.0;
};

/// Labeled traces; label 1 is the class the learned formula describes.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Trace> traces, std::vector<int> labels, std::vector<std::string> ids = {})
      : traces_(std::move(traces)), labels_(std::move(labels)), ids_(std::move(ids)) {
    if (traces_.size() != labels_.size()) throw data_error("one label per trace required");
    if (ids_.empty())
      for (std::size_t i = 0; i < traces_.size(); ++i) ids_.push_back("trace_" + std::to_string(i));
    if (ids_.size() != traces_.size()) throw data_error("one id per trace required");
    for (int l : labels_)
      if (l != 0 && l != 1) throw data_error("labels must be 0 or 1");
    for (const auto& tr : traces_) {
      if (tr.signal_names() != traces_.front().signal_names())
        throw data_error("traces disagree on signal columns");
      if (std::abs(tr.period() - traces_.front().period()) > 1e-6 * traces_.front().period())
        throw data_error("traces disagree on sampling period");
    }
  }

  std::size_t size() const { return traces_.size(); }
  bool empty() const { return traces_.empty(); }
  const Trace& trace(std::size_t i) const { return traces_.at(i); }
  int label(std::size_t i) const { return labels_.at(i); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<Trace>& traces() const { return traces_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& ids() const { return ids_; }

  const std::vector<std::string>& signal_names() const {
    if (traces_.empty()) throw data_error("empty dataset");
    return traces_.front().signal_names();
  }

  std::size_t count(int label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
  }

  /// Traces carrying `label`, in dataset order.
  std::vector<Trace> with_label(int label) const {
    std::vector<Trace> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (labels_[i] == label) out.push_back(traces_[i]);
    return out;
  }

  void require_both_classes() const {
    if (count(0) == 0) throw data_error("dataset has no label-0 traces");
    if (count(1) == 0) throw data_error("dataset has no label-1 traces");
  }

  /// Same traces with labels 0 and 1 exchanged.
  Dataset swapped_labels() const {
    std::vector<int> l = labels_;
    for (int& v : l) v = 1 - v;
    return Dataset(traces_, std::move(l), ids_);
  }

  /// Subset by index, preserving the given order.
  Dataset subset(const std::vector<std::size_t>& idx) const {
    std::vector<Trace> t;
    std::vector<int> l;
    std::vector<std::string> ids;
    for (auto i : idx) {
      t.push_back(traces_.at(i));
      l.push_back(labels_.at(i));
      ids.push_back(ids_.at(i));
    }
    return Dataset(std::move(t), std::move(l), std::move(ids));
  }

 private:
  std::vector<Trace> traces_;
  std::vector<int> labels_;
  std::vector<std::string> ids_;
};

struct TrainTest {
  Dataset train;
  Dataset test;
};

/// Stratified split: each class is shuffled with `seed` and its first
/// round(fraction * n) traces go to training. Both sides keep dataset order.
inline TrainTest split_train_test(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (!(fraction > 0 && fraction < 1)) throw std::invalid_argument("split fraction must lie in (0,1)");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train, test;
  for (int label : {1, 0}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds.label(i) == label) idx.push_back(i);
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
    train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    test.insert(test.end(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  if (train.empty() || test.empty()) throw data_error("split leaves an empty side");
  return {ds.subset(train), ds.subset(test)};
}

}  // namespace stlmine
