#pragma once

// CSV storage for traces and label manifests.
//
// Trace file:  header `time,<sig1>,<sig2>,...`, one row per sample.
// Manifest:    `filename,label` rows, label in {0,1}; an optional header
//              line `filename,label` is skipped.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stlmine/formula.hpp"
#include "stlmine/trace.hpp"

namespace stlmine {

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
      cell.remove_suffix(1);
    out.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_real(const std::string& s, const std::string& where) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  double v = 0;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw data_error(where + ": not a finite number: '" + s + "'");
  return v;
}

}  // namespace detail

/// Reads one trace file. A single-row file gets `default_period`.
inline Trace load_trace_csv(const std::filesystem::path& path, double default_period = 1.0) {
  std::ifstream in(path);
  if (!in) throw data_error(path.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) throw data_error(path.string() + ": empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto header = detail::split_csv_line(line);
  if (header.size() < 2 || header[0] != "time")
    throw data_error(path.string() + ": header must be 'time,<signal>,...'");
  std::vector<std::string> names(header.begin() + 1, header.end());
  std::vector<std::vector<double>> cols(names.size());
  std::vector<double> times;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_csv_line(line);
    const std::string where = path.string() + ":" + std::to_string(row);
    if (cells.size() != header.size()) throw data_error(where + ": wrong number of columns");
    times.push_back(detail::parse_real(cells[0], where));
    for (std::size_t s = 0; s < names.size(); ++s)
      cols[s].push_back(detail::parse_real(cells[s + 1], where));
  }
  if (times.empty()) throw data_error(path.string() + ": no sample rows");
  double period = default_period;
  if (times.size() > 1) {
    period = times[1] - times[0];
    if (!(period > 0)) throw data_error(path.string() + ": timestamps must increase");
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double dt = times[k] - times[k - 1];
      if (std::abs(dt - period) > 1e-6 * period)
        throw data_error(path.string() + ": non-uniform timestamps at row " + std::to_string(k + 2));
    }
  }
  try {
    return Trace(std::move(names), std::move(cols), period, times.front());
  } catch (const data_error& e) {
    throw data_error(path.string() + ": " + e.what());
  }
}

struct LoadOptions {
  bool require_both_classes = true;
};

/// Loads every trace named in `manifest` from `dir`. The manifest defaults
/// to `<dir>/labels.csv`.
inline Dataset load_csv_dir(const std::filesystem::path& dir, std::filesystem::path manifest = {},
                            LoadOptions opts = {}) {
  if (manifest.empty()) manifest = dir / "labels.csv";
  std::ifstream in(manifest);
  if (!in) throw data_error(manifest.string() + ": cannot open label manifest");
  std::vector<std::string> files;
  std::vector<int> labels;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_csv_line(line);
    const std::string where = manifest.string() + ":" + std::to_string(row);
    if (cells.size() != 2) throw data_error(where + ": expected 'filename,label'");
    if (row == 1 && (cells[0] == "filename" || cells[1] == "label")) continue;
    if (cells[1] != "0" && cells[1] != "1") throw data_error(where + ": unknown label '" + cells[1] + "'");
    files.push_back(cells[0]);
    labels.push_back(cells[1] == "1" ? 1 : 0);
  }
  if (files.empty()) throw data_error(manifest.string() + ": no traces listed");

  std::vector<Trace> traces;
  double period = 0;
  std::vector<std::size_t> single_rows;
  for (std::size_t i = 0; i < files.size(); ++i) {
    traces.push_back(load_trace_csv(dir / files[i]));
    if (traces.back().size() == 1) {
      single_rows.push_back(i);
    } else if (period == 0) {
      period = traces.back().period();
    }
  }
  // single-row files inherit the dataset period
  if (period > 0)
    for (auto i : single_rows) {
      const auto& t = traces[i];
      std::vector<std::vector<double>> s;
      for (std::size_t k = 0; k < t.signal_names().size(); ++k) s.push_back(t.samples(k));
      traces[i] = Trace(t.signal_names(), std::move(s), period, t.start_time());
    }
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i].signal_names() != traces.front().signal_names())
      throw data_error((dir / files[i]).string() + ": signal columns differ from " +
                       (dir / files.front()).string());
    if (std::abs(traces[i].period() - traces.front().period()) > 1e-6 * traces.front().period())
      throw data_error((dir / files[i]).string() + ": sampling period differs from " +
                       (dir / files.front()).string());
  }
  Dataset ds(std::move(traces), std::move(labels), std::move(files));
  if (opts.require_both_classes) {
    try {
      ds.require_both_classes();
    } catch (const data_error& e) {
      throw data_error(manifest.string() + ": " + e.what());
    }
  }
  return ds;
}

inline void write_trace_csv(const std::filesystem::path& path, const Trace& tr) {
  std::ofstream out(path);
  if (!out) throw data_error(path.string() + ": cannot write");
  out << "time";
  for (const auto& n : tr.signal_names()) out << ',' << n;
  out << '\n';
  for (std::size_t k = 0; k < tr.size(); ++k) {
    out << format_number(tr.time_at(k));
    for (std::size_t s = 0; s < tr.signal_names().size(); ++s) out << ',' << format_number(tr.samples(s)[k]);
    out << '\n';
  }
}

/// Writes one CSV per trace (named by its dataset id, `.csv` appended when
/// missing) plus `labels.csv`.
inline void write_csv_dir(const std::filesystem::path& dir, const Dataset& ds) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "labels.csv");
  if (!manifest) throw data_error((dir / "labels.csv").string() + ": cannot write");
  manifest << "filename,label\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::string name = ds.id(i);
    if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") name += ".csv";
    write_trace_csv(dir / name, ds.trace(i));
    manifest << name << ',' << ds.label(i) << '\n';
  }
}

}  // namespace stlmine
