// stlmine command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stlmine/stlmine.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace stlmine;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_quiet = false;

void note(const std::string& msg) {
  if (!g_quiet) std::cerr << msg << "\n";
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw data_error(*path + ": cannot open for writing");
  out << text;
  if (!out) throw data_error(*path + ": write failed");
}

// ---- monitor ----------------------------------------------------------------

struct MonitorArgs {
  std::string formula;
  std::string trace;
  std::optional<double> time;
};

int run_monitor(const MonitorArgs& a) {
  const Formula f = parse(a.formula);
  if (!is_concrete(f)) throw UsageError("--formula must not contain parameters");
  const Trace tr = load_trace_csv(a.trace);
  std::set<std::string> used;
  collect_signals(f, used);
  for (const auto& s : used)
    if (!tr.has_signal(s)) throw data_error(a.trace + ": no signal named '" + s + "'");
  const double t = a.time.value_or(tr.start_time());
  const double r = robustness(f, tr, t);
  std::cout << (r > 0 ? "SAT" : "UNSAT") << " robustness=" << format_number(r) << "\n";
  return kExitOk;
}

// ---- enumerate --------------------------------------------------------------

struct EnumerateArgs {
  std::vector<std::string> signals;
  std::size_t max_length = 3;
  bool no_negation = false;
  bool two_sided = false;
};

int run_enumerate(const EnumerateArgs& a) {
  Grammar g = Grammar::standard(a.signals, !a.no_negation);
  g.two_sided_intervals = a.two_sided;
  g.skip_complement_negation = false;  // list the full grammar
  const auto rep = enumerate(g, a.max_length, [](const Formula& f) {
    std::cout << length(f) << "\t" << to_string(f) << "\n";
    return Visit::Continue;
  });
  std::ostringstream s;
  s << "templates:";
  for (std::size_t l = 1; l < rep.emitted_per_length.size(); ++l) s << " L" << l << "=" << rep.emitted_per_length[l];
  s << " total=" << rep.emitted;
  note(s.str());
  return kExitOk;
}

// ---- learn ------------------------------------------------------------------

struct LearnArgs {
  std::string data;
  std::string labels;
  std::vector<std::string> signals;
  std::size_t max_length = 5;
  double threshold = 0.1;
  double delta = 0.01;
  std::uint64_t seed = 0;
  bool no_signatures = false;
  std::string mcr = "paper";
  std::optional<double> split;
  std::optional<std::string> out;
  std::optional<std::string> dump;
  std::size_t max_points = LearnerConfig{}.max_points_per_template;
  bool no_negation = false;
  bool two_sided = false;
};

ordered_json stats_json(const LearnStats& s) {
  ordered_json j;
  j["templates_tried"] = s.templates_tried;
  j["templates_pruned"] = s.templates_pruned;
  j["boundary_points"] = s.boundary_points;
  j["elapsed_ms"] = s.elapsed_ms;
  return j;
}

void dump_robustness(const std::string& path, const Formula& f, const Dataset& train,
                     const std::optional<Dataset>& test) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error(path + ": cannot open for writing");
  out << "id,label,split,robustness\n";
  auto rows = [&](const Dataset& ds, const char* side) {
    for (std::size_t i = 0; i < ds.size(); ++i)
      out << ds.id(i) << "," << ds.label(i) << "," << side << "," << format_number(robustness(f, ds.trace(i))) << "\n";
  };
  rows(train, "train");
  if (test) rows(*test, "test");
}

int run_learn(const LearnArgs& a) {
  if (a.mcr != "paper" && a.mcr != "symmetric") throw UsageError("--mcr must be 'paper' or 'symmetric'");
  const fs::path dir(a.data);
  const fs::path manifest = a.labels.empty() ? dir / "labels.csv" : fs::path(a.labels);
  const Dataset all = load_csv_dir(dir, manifest);

  std::vector<std::string> signals = a.signals.empty() ? all.signal_names() : a.signals;
  for (const auto& s : signals)
    if (!all.trace(0).has_signal(s)) throw data_error(a.data + ": no signal named '" + s + "'");

  std::optional<Dataset> test;
  Dataset train = all;
  if (a.split) {
    auto parts = split_train_test(all, *a.split, a.seed);
    train = std::move(parts.train);
    test = std::move(parts.test);
  }

  LearnerConfig cfg;
  cfg.threshold = a.threshold;
  cfg.delta = a.delta;
  cfg.max_length = a.max_length;
  cfg.use_signatures = !a.no_signatures;
  cfg.signature.seed = a.seed;
  cfg.mcr_mode = a.mcr == "symmetric" ? McrMode::Symmetric : McrMode::PaperFaithful;
  cfg.max_points_per_template = a.max_points;
  Grammar g = Grammar::standard(signals, !a.no_negation);
  g.two_sided_intervals = a.two_sided;

  const LearnOutcome res = learn(train, g, cfg);

  ordered_json j;
  if (res.classifier) {
    const auto& c = *res.classifier;
    j["status"] = "found";
    j["formula"] = to_string(c.formula);
    j["mcr_train"] = c.mcr;
    j["mcr_test"] = test ? ordered_json(mcr(c.formula, *test, cfg.mcr_mode)) : ordered_json(nullptr);
    j["template"] = to_string(c.tmpl);
    ordered_json v = ordered_json::object();
    for (const auto& [k, x] : c.valuation) v[k] = x;
    j["valuation"] = v;
    j["length"] = length(c.tmpl);
  } else {
    j["status"] = "not_found";
    j["formula"] = nullptr;
    j["mcr_train"] = nullptr;
    j["mcr_test"] = nullptr;
    j["template"] = nullptr;
    j["valuation"] = nullptr;
    j["reason"] = "no template up to max length reached an MCR below the threshold";
    j["max_length"] = a.max_length;
    j["threshold"] = a.threshold;
  }
  j["stats"] = stats_json(res.stats);
  j["train_size"] = train.size();
  j["test_size"] = test ? test->size() : 0;

  write_text(a.out, j.dump(2) + "\n");
  if (res.classifier) {
    note("learned " + to_string(res.classifier->formula) + "  mcr_train=" + format_number(res.classifier->mcr));
    if (a.dump) dump_robustness(*a.dump, res.classifier->formula, train, test);
  } else {
    note("no classifier found (templates tried: " + std::to_string(res.stats.templates_tried) + ")");
  }
  return kExitOk;
}

// ---- gen-data ---------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::uint64_t seed = 0;
  std::string out;
  double gap = 2.0;
  std::size_t per_class = 50;
};

int run_gen(const GenArgs& a) {
  Dataset ds = a.kind == "steps"     ? gen_steps_and_sinusoids(a.seed)
               : a.kind == "anomaly" ? gen_anomaly_threshold(a.seed, a.per_class, a.gap)
                                     : gen_oscillator_inputs();
  write_csv_dir(a.out, ds);
  note("wrote " + std::to_string(ds.size()) + " traces to " + a.out);
  return kExitOk;
}

// ---- convert ----------------------------------------------------------------

struct ConvertArgs {
  std::string format;
  std::string input;
  std::string labels;
  std::string signal = "stdx";
  double period = 0.02;
  std::string positive = "normal";
  std::string negative;
  std::string out;
};

int run_convert(const ConvertArgs& a) {
  Dataset ds = [&] {
    if (a.format == "har") {
      if (a.labels.empty()) throw UsageError("convert --format har needs --labels");
      return load_uci_har(a.input, a.labels, a.signal, a.period);
    }
    if (a.negative.empty()) throw UsageError("convert --format robot needs --negative");
    return load_uci_robot(a.input, a.positive, a.negative);
  }();
  write_csv_dir(a.out, ds);
  note("wrote " + std::to_string(ds.size()) + " traces to " + a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn signal temporal logic classifiers from labeled time series"};
  app.set_version_flag("--version", std::string(kVersion));
  app.add_flag("--quiet", g_quiet, "Suppress human-readable messages on stderr");
  app.require_subcommand(1);

  MonitorArgs mon;
  auto* c_mon = app.add_subcommand("monitor", "Evaluate a concrete formula on one trace");
  c_mon->add_option("--formula", mon.formula, "Formula text")->required();
  c_mon->add_option("--trace", mon.trace, "Trace CSV (time,<signals...>)")->required()->check(CLI::ExistingFile);
  c_mon->add_option("--time", mon.time, "Evaluation time (default: trace start)");

  EnumerateArgs en;
  auto* c_en = app.add_subcommand("enumerate", "List templates in length order");
  c_en->add_option("--signals", en.signals, "Signal names")->required()->delimiter(',');
  c_en->add_option("--max-length", en.max_length, "Maximum template length")->required()->check(CLI::Range(1, 12));
  c_en->add_flag("--no-negation", en.no_negation, "Leave out the not operator");
  c_en->add_flag("--two-sided-intervals", en.two_sided, "Use [$a,$b] instead of [0,$b]");

  LearnArgs ln;
  auto* c_ln = app.add_subcommand("learn", "Learn a classifier from a labeled dataset");
  c_ln->add_option("--data", ln.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  c_ln->add_option("--labels", ln.labels, "Label manifest (default: <data>/labels.csv)");
  c_ln->add_option("--signals", ln.signals, "Signals used by the grammar (default: all)")->delimiter(',');
  c_ln->add_option("--max-length", ln.max_length, "Maximum template length")->check(CLI::Range(1, 12));
  c_ln->add_option("--threshold", ln.threshold, "Accept the first classifier with MCR below this")
      ->check(CLI::Range(0.0, 1.0));
  c_ln->add_option("--delta", ln.delta, "Boundary search resolution")->check(CLI::Range(1e-6, 0.5));
  c_ln->add_option("--seed", ln.seed, "Seed for signatures and the split");
  c_ln->add_flag("--no-signatures", ln.no_signatures, "Disable signature pruning");
  c_ln->add_option("--mcr", ln.mcr, "paper | symmetric")->check(CLI::IsMember({"paper", "symmetric"}));
  c_ln->add_option("--split", ln.split, "Training fraction; the rest is the test set")
      ->check(CLI::Range(0.0, 1.0));
  c_ln->add_option("--out", ln.out, "result.json path (default: stdout)");
  c_ln->add_option("--dump-robustness", ln.dump, "Write per-trace robustness of the result as CSV");
  c_ln->add_option("--max-points", ln.max_points, "Boundary points per template (0 = unlimited)");
  c_ln->add_flag("--no-negation", ln.no_negation, "Leave out the not operator");
  c_ln->add_flag("--two-sided-intervals", ln.two_sided, "Use [$a,$b] instead of [0,$b]");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen-data", "Write a synthetic dataset");
  c_gen->add_option("--case", gen.kind, "steps | anomaly | oscillator")
      ->required()
      ->check(CLI::IsMember({"steps", "anomaly", "oscillator"}));
  c_gen->add_option("--seed", gen.seed, "Random seed");
  c_gen->add_option("--out", gen.out, "Output directory")->required();
  c_gen->add_option("--gap", gen.gap, "anomaly: class gap around the threshold")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--n-per-class", gen.per_class, "anomaly: traces per class")->check(CLI::Range(1, 100000));

  ConvertArgs cv;
  auto* c_cv = app.add_subcommand("convert", "Convert UCI HAR or robot failure files into a dataset directory");
  c_cv->add_option("--format", cv.format, "har | robot")->required()->check(CLI::IsMember({"har", "robot"}));
  c_cv->add_option("--input", cv.input, "Signal matrix (har) or lpN.data file (robot)")
      ->required()
      ->check(CLI::ExistingFile);
  c_cv->add_option("--labels", cv.labels, "har: activity id file")->check(CLI::ExistingFile);
  c_cv->add_option("--signal", cv.signal, "har: signal name");
  c_cv->add_option("--period", cv.period, "har: sample period")->check(CLI::PositiveNumber);
  c_cv->add_option("--positive", cv.positive, "robot: class labelled 1");
  c_cv->add_option("--negative", cv.negative, "robot: class labelled 0");
  c_cv->add_option("--out", cv.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_mon) return run_monitor(mon);
    if (*c_en) return run_enumerate(en);
    if (*c_ln) return run_learn(ln);
    if (*c_gen) return run_gen(gen);
    if (*c_cv) return run_convert(cv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
