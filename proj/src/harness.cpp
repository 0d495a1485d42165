#include "qps/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "qps/compressed_model.hpp"
#include "qps/excitation_model.hpp"

namespace qps {

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError(0, "trials must be positive");
  if (agents < 1) throw ConfigError(0, "agents must be positive");
  if (damping < 0.0 || damping > 1.0) throw ConfigError(0, "damping must lie in [0,1]");
  if (reward < 0.0) throw ConfigError(0, "reward must be nonnegative");
  if (kappa < 0.0) throw ConfigError(0, "kappa must be nonnegative");
  if (decay < 0.0) throw ConfigError(0, "decay must be nonnegative");
  if (!(t_max > 0.0)) throw ConfigError(0, "t_max must be positive");
  if (grid_points < 2) throw ConfigError(0, "grid_points must be at least 2");
  if (d < 2 || d > 4)
    throw ConfigError(0, "d must lie in [2,4] (register dimension d*2^d is capped at 64)");
}

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

double parse_double(const std::string& value, const std::string& key, int line) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw ConfigError(line, "value for '" + key + "' is not a number: '" + value + "'");
  return v;
}

long long parse_int(const std::string& value, const std::string& key, int line) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size())
    throw ConfigError(line, "value for '" + key + "' is not an integer: '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key, int line) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || value.front() == '-')
    throw ConfigError(line, "value for '" + key + "' is not an unsigned integer: '" + value + "'");
  return v;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
               int line) {
  const auto range_error = [&](const std::string& what) {
    throw ConfigError(line, "value for '" + key + "' out of range: " + what);
  };

  if (key == "model") {
    if (value == "classical") cfg.model = Model::Classical;
    else if (value == "qm1") cfg.model = Model::Qm1;
    else if (value == "qm2") cfg.model = Model::Qm2;
    else range_error("expected classical | qm1 | qm2");
  } else if (key == "trials") {
    const long long v = parse_int(value, key, line);
    if (v < 1 || v > std::numeric_limits<int>::max()) range_error("trials must be positive");
    cfg.trials = static_cast<int>(v);
  } else if (key == "agents") {
    const long long v = parse_int(value, key, line);
    if (v < 1 || v > std::numeric_limits<int>::max()) range_error("agents must be positive");
    cfg.agents = static_cast<int>(v);
  } else if (key == "damping") {
    const double v = parse_double(value, key, line);
    if (v < 0.0 || v > 1.0) range_error("damping must lie in [0,1]");
    cfg.damping = v;
  } else if (key == "reward") {
    const double v = parse_double(value, key, line);
    if (v < 0.0) range_error("reward must be nonnegative");
    cfg.reward = v;
  } else if (key == "kappa") {
    const double v = parse_double(value, key, line);
    if (v < 0.0) range_error("kappa must be nonnegative");
    cfg.kappa = v;
  } else if (key == "decay") {
    const double v = parse_double(value, key, line);
    if (v < 0.0) range_error("decay must be nonnegative");
    cfg.decay = v;
  } else if (key == "t_max") {
    const double v = parse_double(value, key, line);
    if (!(v > 0.0)) range_error("t_max must be positive");
    cfg.t_max = v;
  } else if (key == "grid_points") {
    const long long v = parse_int(value, key, line);
    if (v < 2 || v > 1000000) range_error("grid_points must lie in [2, 1000000]");
    cfg.grid_points = static_cast<int>(v);
  } else if (key == "d") {
    const long long v = parse_int(value, key, line);
    if (v < 2 || v > 4) range_error("d must lie in [2,4]");
    cfg.d = static_cast<int>(v);
  } else if (key == "interaction") {
    if (value == "none") cfg.interaction = Interaction::None;
    else if (value == "mode1") cfg.interaction = Interaction::Mode1;
    else if (value == "mode2") cfg.interaction = Interaction::Mode2;
    else range_error("expected none | mode1 | mode2");
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, key, line);
  } else if (key == "peak_strategy") {
    if (value == "global-max") cfg.peak_strategy = PeakStrategy::GlobalMax;
    else if (value == "first-local-max") cfg.peak_strategy = PeakStrategy::FirstLocalMax;
    else range_error("expected global-max | first-local-max");
  } else if (key == "efficiency_source") {
    if (value == "probability") cfg.efficiency_source = EfficiencySource::Probability;
    else if (value == "outcome") cfg.efficiency_source = EfficiencySource::Outcome;
    else range_error("expected probability | outcome");
  } else {
    throw ConfigError(line, "unknown key '" + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    apply_key(cfg, key, value, line_no);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* model_name(Model m) {
  switch (m) {
    case Model::Classical: return "classical";
    case Model::Qm1: return "qm1";
    case Model::Qm2: return "qm2";
  }
  return "classical";
}

const char* interaction_name(Interaction i) {
  switch (i) {
    case Interaction::None: return "none";
    case Interaction::Mode1: return "mode1";
    case Interaction::Mode2: return "mode2";
  }
  return "none";
}

}  // namespace

std::string resolved_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "model = " << model_name(c.model) << '\n'
      << "trials = " << c.trials << '\n'
      << "agents = " << c.agents << '\n'
      << "damping = " << format_double(c.damping) << '\n'
      << "reward = " << format_double(c.reward) << '\n'
      << "kappa = " << format_double(c.kappa) << '\n'
      << "decay = " << format_double(c.decay) << '\n'
      << "t_max = " << format_double(c.t_max) << '\n'
      << "grid_points = " << c.grid_points << '\n'
      << "d = " << c.d << '\n'
      << "interaction = " << interaction_name(c.interaction) << '\n'
      << "seed = " << c.seed << '\n'
      << "peak_strategy = "
      << (c.peak_strategy == PeakStrategy::GlobalMax ? "global-max" : "first-local-max") << '\n'
      << "efficiency_source = "
      << (c.efficiency_source == EfficiencySource::Probability ? "probability" : "outcome")
      << '\n';
  return out.str();
}

namespace {

std::unique_ptr<Agent> make_agent(const ExperimentConfig& cfg) {
  const int n = cfg.n_symbols();
  switch (cfg.model) {
    case Model::Classical:
      return std::make_unique<ClassicalAgent>(WeightedClipGraph::invasion_toy(n),
                                              LearningParams{cfg.damping, cfg.reward});
    case Model::Qm1: {
      QuantumAgentOptions opts;
      opts.damping = cfg.damping;
      opts.reward = cfg.reward;
      opts.kappa = cfg.kappa;
      opts.decay = cfg.decay;
      opts.grid = TimeGrid(0.0, cfg.t_max, cfg.grid_points);
      opts.peak_strategy = cfg.peak_strategy;
      return std::make_unique<ExcitationAgent>(n, opts);
    }
    case Model::Qm2: {
      QuantumAgentOptions opts;
      opts.damping = cfg.damping;
      opts.reward = cfg.reward;
      opts.decay = cfg.decay;       // action-qubit amplitude damping
      opts.dephasing = cfg.kappa;   // percept-register dephasing
      opts.grid = TimeGrid(0.0, cfg.t_max, cfg.grid_points);
      opts.peak_strategy = cfg.peak_strategy;
      return std::make_unique<CompressedAgent>(n, opts);
    }
  }
  throw Error("unreachable model");
}

struct MemberRecords {
  std::vector<TrialRecord> primary;
  std::vector<TrialRecord> partner;  // interacting runs only
};

MemberRecords run_member(const ExperimentConfig& cfg, const InvasionGame& game, int index) {
  Rng rng = Rng::child(cfg.seed, static_cast<std::uint64_t>(index));
  MemberRecords records;
  records.primary.reserve(static_cast<std::size_t>(cfg.trials));

  const std::unique_ptr<Agent> agent1 = make_agent(cfg);
  std::unique_ptr<Agent> agent2;
  if (cfg.interaction != Interaction::None) {
    agent2 = make_agent(cfg);
    records.partner.reserve(static_cast<std::size_t>(cfg.trials));
  }

  for (int t = 0; t < cfg.trials; ++t) {
    try {
      if (!agent2) {
        records.primary.push_back(run_trial(*agent1, game, t, rng));
      } else {
        const InteractionMode mode = cfg.interaction == Interaction::Mode1
                                         ? InteractionMode::Mode1
                                         : InteractionMode::Mode2;
        auto [rec1, rec2] = run_interacting_trial(*agent1, *agent2, game, mode, t, rng);
        records.primary.push_back(rec1);
        records.partner.push_back(rec2);
      }
    } catch (const Error& e) {
      throw Error("agent " + std::to_string(index) + ", trial " + std::to_string(t) + ": " +
                  e.what());
    }
  }
  return records;
}

}  // namespace

EnsembleResult run_ensemble(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const InvasionGame game = InvasionGame::uniform(cfg.n_symbols());

  std::vector<MemberRecords> members(static_cast<std::size_t>(cfg.agents));
  const int workers = std::max(1, std::min(threads, cfg.agents));

  if (workers == 1) {
    for (int i = 0; i < cfg.agents; ++i)
      members[static_cast<std::size_t>(i)] = run_member(cfg, game, i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(cfg.agents));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < cfg.agents; i = next.fetch_add(1)) {
          try {
            members[static_cast<std::size_t>(i)] = run_member(cfg, game, i);
          } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& p : failures)
      if (p) std::rethrow_exception(p);  // first failure in member order
  }

  EnsembleResult result;
  std::vector<std::vector<TrialRecord>> primary;
  primary.reserve(members.size());
  for (auto& m : members) primary.push_back(std::move(m.primary));
  result.curves.push_back(efficiency_curve(primary, game, cfg.efficiency_source));

  if (cfg.interaction != Interaction::None) {
    std::vector<std::vector<TrialRecord>> partner;
    partner.reserve(members.size());
    for (auto& m : members) partner.push_back(std::move(m.partner));
    result.curves.push_back(efficiency_curve(partner, game, cfg.efficiency_source));
  }
  return result;
}

namespace {

void append_value(std::string& out, double v) {
  char buf[32];
  if (std::isnan(v)) {
    out += "nan";
  } else {
    std::snprintf(buf, sizeof buf, "%.9f", v);
    out += buf;
  }
}

}  // namespace

std::string curve_to_csv(const LearningCurve& curve) {
  std::string out = "trial,mean,std";
  for (int p = 0; p < curve.n_percepts; ++p) out += ",p" + std::to_string(p) + "_mean";
  out += '\n';
  for (const LearningCurve::Row& row : curve.rows) {
    out += std::to_string(row.trial);
    out += ',';
    append_value(out, row.mean);
    out += ',';
    append_value(out, row.stddev);
    for (double pm : row.percept_mean) {
      out += ',';
      append_value(out, pm);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const LearningCurve& curve, std::ostream& out) { out << curve_to_csv(curve); }

void write_csv_file(const LearningCurve& curve, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << curve_to_csv(curve);
  if (!out) throw Error("write failed: " + path);
}

LearningCurve parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error("parse_csv: empty input");

  int n_percepts = 0;
  {
    std::istringstream header(line);
    std::string col;
    int col_no = 0;
    while (std::getline(header, col, ',')) {
      ++col_no;
      if (col_no <= 3) {
        const char* expected[] = {"trial", "mean", "std"};
        if (col != expected[col_no - 1]) throw Error("parse_csv: unexpected header column " + col);
      } else {
        ++n_percepts;
      }
    }
    if (col_no < 3) throw Error("parse_csv: header too short");
  }

  LearningCurve curve;
  curve.n_percepts = n_percepts;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    LearningCurve::Row row;
    int col = 0;
    while (std::getline(fields, cell, ',')) {
      ++col;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw ConfigError(line_no, "parse_csv: bad cell '" + cell + "'");
      if (col == 1) row.trial = static_cast<int>(v);
      else if (col == 2) row.mean = v;
      else if (col == 3) row.stddev = v;
      else row.percept_mean.push_back(v);
    }
    if (col != 3 + n_percepts) throw ConfigError(line_no, "parse_csv: wrong column count");
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

namespace {

constexpr double kPlotWidth = 880.0, kPlotHeight = 560.0;
constexpr double kMarginLeft = 80.0, kMarginRight = 24.0;
constexpr double kMarginTop = 24.0, kMarginBottom = 64.0;

double x_of(int trial, int trials) {
  const double span = kPlotWidth - kMarginLeft - kMarginRight;
  const double frac = trials > 1 ? static_cast<double>(trial) / (trials - 1) : 0.0;
  return kMarginLeft + frac * span;
}

double y_of(double value) {
  const double span = kPlotHeight - kMarginTop - kMarginBottom;
  const double clamped = std::min(1.0, std::max(0.0, value));
  return kMarginTop + (1.0 - clamped) * span;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void emit_svg(const LearningCurve& curve, std::ostream& out) {
  const int trials = static_cast<int>(curve.rows.size());
  if (trials == 0) throw Error("emit_svg: empty curve");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotWidth << "\" height=\""
      << kPlotHeight << "\" viewBox=\"0 0 " << kPlotWidth << ' ' << kPlotHeight << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // gridlines and y labels
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    const double y = y_of(v);
    out << "  <line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(y) << "\" x2=\""
        << coord(kPlotWidth - kMarginRight) << "\" y2=\"" << coord(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "  <text x=\"" << coord(kMarginLeft - 10.0) << "\" y=\"" << coord(y + 4.0)
        << "\" font-size=\"13\" text-anchor=\"end\">" << coord(v) << "</text>\n";
  }

  // x ticks
  const int n_ticks = std::min(5, trials);
  for (int i = 0; i < n_ticks; ++i) {
    const int trial = n_ticks > 1 ? (trials - 1) * i / (n_ticks - 1) : 0;
    const double x = x_of(trial, trials);
    out << "  <line x1=\"" << coord(x) << "\" y1=\"" << coord(kPlotHeight - kMarginBottom)
        << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(kPlotHeight - kMarginBottom + 6.0)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "  <text x=\"" << coord(x) << "\" y=\"" << coord(kPlotHeight - kMarginBottom + 22.0)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << trial << "</text>\n";
  }

  // axes
  out << "  <line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(kMarginTop) << "\" x2=\""
      << coord(kMarginLeft) << "\" y2=\"" << coord(kPlotHeight - kMarginBottom)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "  <line x1=\"" << coord(kMarginLeft) << "\" y1=\""
      << coord(kPlotHeight - kMarginBottom) << "\" x2=\"" << coord(kPlotWidth - kMarginRight)
      << "\" y2=\"" << coord(kPlotHeight - kMarginBottom)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  // +-1 std band, omitted when the whole curve has zero spread
  bool any_spread = false;
  for (const auto& row : curve.rows)
    if (row.stddev > 0.0) any_spread = true;
  if (any_spread) {
    out << "  <polygon fill=\"#9ecae1\" fill-opacity=\"0.45\" stroke=\"none\" points=\"";
    for (int t = 0; t < trials; ++t) {
      const auto& row = curve.rows[static_cast<std::size_t>(t)];
      out << coord(x_of(t, trials)) << ',' << coord(y_of(row.mean + row.stddev)) << ' ';
    }
    for (int t = trials - 1; t >= 0; --t) {
      const auto& row = curve.rows[static_cast<std::size_t>(t)];
      out << coord(x_of(t, trials)) << ',' << coord(y_of(row.mean - row.stddev));
      if (t > 0) out << ' ';
    }
    out << "\"/>\n";
  }

  // mean
  out << "  <polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"1.5\" points=\"";
  for (int t = 0; t < trials; ++t) {
    const auto& row = curve.rows[static_cast<std::size_t>(t)];
    out << coord(x_of(t, trials)) << ',' << coord(y_of(row.mean));
    if (t + 1 < trials) out << ' ';
  }
  out << "\"/>\n";

  // axis labels
  out << "  <text x=\"" << coord((kMarginLeft + kPlotWidth - kMarginRight) / 2.0) << "\" y=\""
      << coord(kPlotHeight - 16.0) << "\" font-size=\"15\" text-anchor=\"middle\">trial</text>\n";
  out << "  <text x=\"" << coord(20.0) << "\" y=\""
      << coord((kMarginTop + kPlotHeight - kMarginBottom) / 2.0)
      << "\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << coord((kMarginTop + kPlotHeight - kMarginBottom) / 2.0)
      << ")\">learning efficiency</text>\n";
  out << "</svg>\n";
}

void write_svg_file(const LearningCurve& curve, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  emit_svg(curve, out);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace qps
