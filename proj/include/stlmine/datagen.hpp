#pragma once

// Synthetic labeled datasets shaped after classic STL-mining case studies,
// and readers for two public UCI time-series datasets.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stlmine/formula.hpp"
#include "stlmine/monitor.hpp"
#include "stlmine/parser.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

namespace detail {

inline std::string numbered(const std::string& stem, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02zu", i);
  return stem + "_" + buf;
}

inline Trace single_signal(const std::string& name, std::vector<double> xs, double period) {
  return Trace({name}, {std::move(xs)}, period);
}

}  // namespace detail

/// 10 upward steps (label 1), 10 downward steps and 8 sinusoids (label 0).
/// Steps start in [-11.5, -10.5]; upward steps settle in [-7.5, -6.5],
/// downward ones in [-14.5, -13.5]. The sinusoids are small oscillations
/// around -7, inside the upward steps' final band, so only "starts low and
/// later rises" tells label 1 apart. 50 s at 0.2 s.
inline Dataset gen_steps_and_sinusoids(std::uint64_t seed) {
  constexpr double period = 0.2;
  constexpr std::size_t n = 251;
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

  std::vector<Trace> traces;
  std::vector<int> labels;
  std::vector<std::string> ids;
  auto step = [&](double final_lo, double final_hi) {
    const double start = uni(-11.4, -10.6);
    const double final_level = uni(final_lo, final_hi);
    const double at = uni(5.0, 30.0);
    std::vector<double> xs(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * period;
      xs[k] = (t < at ? start : final_level) + uni(-0.05, 0.05);
    }
    return detail::single_signal("x", std::move(xs), period);
  };
  for (std::size_t i = 0; i < 10; ++i) {
    traces.push_back(step(-7.4, -6.6));
    labels.push_back(1);
    ids.push_back(detail::numbered("step_up", i));
  }
  for (std::size_t i = 0; i < 10; ++i) {
    traces.push_back(step(-14.4, -13.6));
    labels.push_back(0);
    ids.push_back(detail::numbered("step_down", i));
  }
  for (std::size_t i = 0; i < 8; ++i) {
    const double center = uni(-7.1, -6.9);
    const double amp = uni(0.1, 0.25);
    const double wave = uni(8.0, 15.0);
    const double phase = uni(0.0, 2 * std::numbers::pi);
    std::vector<double> xs(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * period;
      xs[k] = center + amp * std::sin(2 * std::numbers::pi * t / wave + phase);
    }
    traces.push_back(detail::single_signal("x", std::move(xs), period));
    labels.push_back(0);
    ids.push_back(detail::numbered("sine", i));
  }
  return Dataset(std::move(traces), std::move(labels), std::move(ids));
}

/// Noisy oscillation around a cruising level with one dip per trace.
/// Label-1 dips bottom out in [theta + gap/2, theta + gap/2 + spread],
/// label-0 dips in [theta - gap/2 - spread, theta - gap/2]; with gap == 0
/// both classes draw their dip from [theta - spread, theta + spread].
/// Dips happen between 5 s and 60 s; 100 s at 0.5 s.
inline Dataset gen_anomaly_threshold(std::uint64_t seed, std::size_t n_per_class, double gap,
                                     double theta = 34.0, double spread = 1.0) {
  if (gap < 0) throw std::invalid_argument("gap must be >= 0");
  constexpr double period = 0.5;
  constexpr std::size_t n = 201;
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

  const double cruise = theta + gap / 2 + spread + 2.0;
  std::vector<Trace> traces;
  std::vector<int> labels;
  std::vector<std::string> ids;
  for (int label : {1, 0}) {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      double bottom = 0;
      if (gap > 0)
        bottom = label == 1 ? theta + gap / 2 + uni(0, spread) : theta - gap / 2 - uni(0, spread);
      else
        bottom = theta + uni(-spread, spread);
      const double wave = uni(15.0, 30.0);
      const double phase = uni(0.0, 2 * std::numbers::pi);
      const double dip_at = std::round(uni(5.0, 60.0) / period) * period;
      const double half_width = uni(2.0, 5.0);
      std::vector<double> xs(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * period;
        // base never drops below cruise - 1.7
        const double base = cruise + 1.5 * std::sin(2 * std::numbers::pi * t / wave + phase) + uni(-0.2, 0.2);
        const double d = std::abs(t - dip_at);
        const double dip = d < half_width ? bottom + (cruise - 1.7 - bottom) * d / half_width : base;
        xs[k] = std::min(base, dip);
      }
      traces.push_back(detail::single_signal("x", std::move(xs), period));
      labels.push_back(label);
      ids.push_back(detail::numbered(label == 1 ? "normal" : "anomaly", i));
    }
  }
  return Dataset(std::move(traces), std::move(labels), std::move(ids));
}

/// The reference classifier for the square-wave inputs below.
inline const char* kOscillatorReference = "G[0,368](F[0,21](x >= 1))";

/// Square waves of amplitude 2 (high first) with periods 10, 12, ..., 70 s,
/// 400 s at 0.5 s. Label 1 iff the wave satisfies kOscillatorReference.
/// Amplitude 1 would sit exactly on the atom's threshold, where robustness
/// is 0 and nothing is satisfied.
inline Dataset gen_oscillator_inputs() {
  constexpr double period = 0.5;
  constexpr std::size_t n = 801;
  const Formula reference = parse(kOscillatorReference);
  std::vector<Trace> traces;
  std::vector<int> labels;
  std::vector<std::string> ids;
  for (int wave = 10; wave <= 70; wave += 2) {
    std::vector<double> xs(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * period;
      xs[k] = std::fmod(t, wave) < wave / 2.0 ? 2.0 : -2.0;
    }
    Trace tr = detail::single_signal("x", std::move(xs), period);
    labels.push_back(satisfies(reference, tr) ? 1 : 0);
    traces.push_back(std::move(tr));
    ids.push_back("square_" + std::to_string(wave));
  }
  return Dataset(std::move(traces), std::move(labels), std::move(ids));
}

// ---------------------------------------------------------------------------
// UCI readers

/// UCI HAR style matrix: one whitespace-separated row of samples per trace,
/// with activity ids (1-6) in `label_file`. Walking activities (1-3) are
/// label 1, static postures (4-6) label 0.
inline Dataset load_uci_har(const std::filesystem::path& signal_file, const std::filesystem::path& label_file,
                            const std::string& signal = "stdx", double period = 0.02) {
  std::ifstream sig(signal_file), lab(label_file);
  if (!sig) throw data_error(signal_file.string() + ": cannot open");
  if (!lab) throw data_error(label_file.string() + ": cannot open");
  std::vector<Trace> traces;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::string row;
  while (std::getline(sig, row)) {
    std::istringstream ss(row);
    std::vector<double> xs;
    double v = 0;
    while (ss >> v) xs.push_back(v);
    if (xs.empty()) continue;
    int activity = 0;
    if (!(lab >> activity)) throw data_error(label_file.string() + ": fewer labels than traces");
    if (activity < 1 || activity > 6) throw data_error(label_file.string() + ": unknown activity id " + std::to_string(activity));
    labels.push_back(activity <= 3 ? 1 : 0);
    traces.push_back(detail::single_signal(signal, std::move(xs), period));
    ids.push_back(detail::numbered("har", traces.size() - 1));
  }
  return Dataset(std::move(traces), std::move(labels), std::move(ids));
}

/// UCI robot execution failures (lp1..lp5.data): a class name line followed
/// by 15 rows of Fx Fy Fz Tx Ty Tz. Instances of `positive` get label 1,
/// of `negative` label 0; other classes are skipped.
inline Dataset load_uci_robot(const std::filesystem::path& file, const std::string& positive,
                              const std::string& negative) {
  std::ifstream in(file);
  if (!in) throw data_error(file.string() + ": cannot open");
  const std::vector<std::string> names{"Fx", "Fy", "Fz", "Tx", "Ty", "Tz"};
  std::vector<Trace> traces;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::string line, current;
  std::vector<std::vector<double>> cols(names.size());
  std::size_t instance = 0;
  auto flush = [&] {
    if (!current.empty() && !cols[0].empty() && (current == positive || current == negative)) {
      traces.emplace_back(names, cols, 1.0);
      labels.push_back(current == positive ? 1 : 0);
      ids.push_back(detail::numbered(current, instance));
    }
    if (!current.empty()) ++instance;
    for (auto& c : cols) c.clear();
  };
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (std::isalpha(static_cast<unsigned char>(first[0]))) {
      flush();
      current = first;
      continue;
    }
    std::vector<double> row{std::stod(first)};
    double v = 0;
    while (ss >> v) row.push_back(v);
    if (row.size() != names.size()) throw data_error(file.string() + ": expected 6 values per row");
    for (std::size_t s = 0; s < names.size(); ++s) cols[s].push_back(row[s]);
  }
  flush();
  return Dataset(std::move(traces), std::move(labels), std::move(ids));
}

}  // namespace stlmine
