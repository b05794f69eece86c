#include "sparsevar/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "sparsevar/logging.hpp"
#include "sparsevar/parallel.hpp"
#include "sparsevar/sparsevar.hpp"

namespace sparsevar::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Invalid configuration; carries every violation found.
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> list) : std::runtime_error("invalid configuration"), problems(std::move(list)) {}
  std::vector<std::string> problems;
};

struct Problems {
  std::vector<std::string> list;
  void add(std::string p) { list.push_back(std::move(p)); }
  void raise() const {
    if (!list.empty()) throw ConfigError(list);
  }
};

// Flat `key = value` file; '#' starts a comment.
std::map<std::string, std::string> read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
  std::map<std::string, std::string> out;
  std::vector<std::string> problems;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out[key] = value;
  }
  if (!problems.empty()) throw ConfigError(problems);
  return out;
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::string long_name(const CLI::Option* opt) {
  const auto& names = opt->get_lnames();
  return names.empty() ? std::string() : names.front();
}

// Fills options not given on the command line from the config file.
void apply_config(CLI::App* sub, const std::map<std::string, std::string>& config) {
  for (CLI::Option* opt : sub->get_options()) {
    const std::string name = long_name(opt);
    if (name.empty() || name == "config" || opt->count() > 0) continue;
    const auto it = config.find(name);
    if (it == config.end()) continue;
    if (opt->get_expected_max() > 1) {
      std::stringstream ss(it->second);
      std::string item;
      while (std::getline(ss, item, ',')) opt->add_result(item);
    } else {
      opt->add_result(it->second);
    }
    opt->run_callback();
  }
}

// Shared run configuration; each command registers the subset it uses.
struct Options {
  std::string out;
  std::string panel;
  int lag = 14;
  std::string estimator = "lasso";
  double lambda = 0.0;
  std::string grid;
  int splits = 3;
  long test_size = 0;
  long min_train = 0;
  int horizons = 4;
  std::string origins;
  double threshold = 0.01;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double tol = 1e-8;
  int max_sweeps = 100000;

  CLI::App* active = nullptr;  // the parsed subcommand

  bool given(const std::string& flag) const {
    const CLI::Option* opt = active == nullptr ? nullptr : active->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  }
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", "Flat 'key = value' file; command-line flags override it");
  sub->add_option("--out", o.out, "Output directory (required)");
  sub->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
  sub->add_option("--seed", o.seed, "Random seed");
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("--lag", o.lag, "VAR lag order p");
  sub->add_option("--estimator", o.estimator, "ols | lasso | fgls-lasso");
  sub->add_option("--lambda", o.lambda, "Fixed LASSO penalty (skips cross-validation)");
  sub->add_option("--grid", o.grid, "Penalty grid N,RATIO below lambda_max");
  sub->add_option("--splits", o.splits, "Walk-forward folds");
  sub->add_option("--test-size", o.test_size, "Observations per validation fold");
  sub->add_option("--min-train", o.min_train, "Training length of the first fold");
  sub->add_option("--tol", o.tol, "Coordinate-descent tolerance");
  sub->add_option("--max-sweeps", o.max_sweeps, "Coordinate-descent sweep limit");
}

LambdaGrid parse_grid(const std::string& text, Problems& problems) {
  LambdaGrid grid;
  if (text.empty()) return grid;
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    problems.add("--grid expects N,RATIO, got '" + text + "'");
    return grid;
  }
  try {
    std::size_t used = 0;
    const std::string n = text.substr(0, comma), r = text.substr(comma + 1);
    grid.n_points = std::stoi(n, &used);
    if (used != n.size()) throw std::invalid_argument(n);
    grid.ratio = std::stod(r, &used);
    if (used != r.size()) throw std::invalid_argument(r);
  } catch (const std::exception&) {
    problems.add("--grid expects N,RATIO, got '" + text + "'");
    return grid;
  }
  if (grid.n_points < 1) problems.add("--grid point count must be >= 1");
  if (!(grid.ratio > 0.0 && grid.ratio <= 1.0)) problems.add("--grid ratio must lie in (0, 1]");
  return grid;
}

Estimator check_estimator(const Options& o, Problems& problems) {
  try {
    return parse_estimator(o.estimator);
  } catch (const Error&) {
    problems.add("--estimator must be one of ols, lasso, fgls-lasso (got '" + o.estimator + "')");
    return Estimator::Lasso;
  }
}

LassoConfig lasso_config(const Options& o, Problems& problems) {
  LassoConfig cfg;
  cfg.grid = parse_grid(o.grid, problems);
  if (o.given("--lambda")) {
    if (!(o.lambda >= 0.0)) problems.add("--lambda must be >= 0");
    if (o.given("--grid")) problems.add("--lambda and --grid are mutually exclusive");
    cfg.lambda = o.lambda;
  }
  if (!(o.tol > 0.0)) problems.add("--tol must be > 0");
  if (o.max_sweeps < 1) problems.add("--max-sweeps must be >= 1");
  cfg.tol = o.tol;
  cfg.max_sweeps = o.max_sweeps;
  return cfg;
}

bool fixed_lambda(const Options& o) { return o.given("--lambda"); }

void check_common(const Options& o, Problems& problems) {
  if (o.out.empty()) problems.add("--out must name a directory");
}

void check_model(const Options& o, Problems& problems) {
  if (o.lag < 1) problems.add("--lag must be >= 1");
  if (o.splits < 1) problems.add("--splits must be >= 1");
  if (o.test_size < 0) problems.add("--test-size must be >= 0 (0 = automatic)");
  if (o.min_train < 0) problems.add("--min-train must be >= 0 (0 = automatic)");
}

void check_file(const std::string& path, const std::string& flag, Problems& problems) {
  if (path.empty()) {
    problems.add(flag + " is required");
  } else if (!fs::is_regular_file(path)) {
    problems.add(flag + " file '" + path + "' does not exist");
  }
}

// Automatic walk-forward plan: folds of ~10% of the sample at the end.
WalkForwardPlan make_plan(const Options& o, Index sample) {
  WalkForwardPlan plan;
  plan.n_splits = o.splits;
  plan.test_size = o.test_size > 0 ? o.test_size : std::max<Index>(1, sample / 10);
  plan.min_train = o.min_train > 0 ? o.min_train : sample - plan.n_splits * plan.test_size;
  return plan;
}

void setup_threads(const Options& o) {
  unsigned n = o.threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  set_thread_limit(n);
}

fs::path prepare_out(const Options& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

std::pair<Date, Date> parse_origins(const std::string& text, Problems& problems) {
  const auto colon = text.find(':');
  if (text.empty() || colon == std::string::npos) {
    problems.add("--origins expects START:END dates, got '" + text + "'");
    return {};
  }
  try {
    const Date a = parse_date(text.substr(0, colon));
    const Date b = parse_date(text.substr(colon + 1));
    if (b < a) problems.add("--origins end precedes start");
    return {a, b};
  } catch (const Error& e) {
    problems.add(std::string("--origins: ") + e.what());
    return {};
  }
}

std::pair<std::string, std::string> split_named(const std::string& text, const std::string& flag, Problems& problems) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    problems.add(flag + " expects NAME=PATH, got '" + text + "'");
    return {};
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

json ok_line(const std::string& command, const std::vector<fs::path>& outputs) {
  json j;
  j["status"] = "ok";
  j["command"] = command;
  j["outputs"] = json::array();
  for (const auto& p : outputs) j["outputs"].push_back(p.string());
  return j;
}

// ---- commands ---------------------------------------------------------------

struct SimulateArgs {
  Index k = 5;
  Index t = 500;
  double density = 0.1;
  double magnitude = 0.3;
  std::string error = "iid";
  double rho = 0.0;
  double sd = 1.0;
  int burn_in = 200;
  std::string start = "2018-01-01";
};

json run_simulate(const Options& o, const SimulateArgs& a) {
  Problems problems;
  check_common(o, problems);
  if (o.lag < 1) problems.add("--lag must be >= 1");
  SyntheticSpec spec;
  spec.k = a.k;
  spec.p = o.lag;
  spec.t = a.t;
  spec.recipe = {a.density, a.magnitude, o.seed};
  spec.seed = o.seed;
  spec.innovation_sd = a.sd;
  spec.burn_in = a.burn_in;
  if (a.error == "iid") {
    spec.error = ErrorKind::Iid;
  } else if (a.error == "ar1") {
    spec.error = ErrorKind::Ar1;
    spec.rho = a.rho;
  } else {
    problems.add("--error must be iid or ar1 (got '" + a.error + "')");
  }
  try {
    spec.start_date = parse_date(a.start);
  } catch (const Error& e) {
    problems.add(std::string("--start: ") + e.what());
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    problems.add(e.what());
  }
  problems.raise();
  setup_threads(o);
  const auto sim = simulate(spec);
  const fs::path dir = prepare_out(o);
  csv::write_panel(dir / "panel.csv", sim.panel);
  write_truth(dir / "truth.json", sim);
  return ok_line("simulate", {dir / "panel.csv", dir / "truth.json"});
}

struct IngestArgs {
  std::string prices;
  std::vector<std::string> sentiment;
  std::vector<std::string> gtrends;
  double alpha = 15.0;
  std::string fill = "zero";
};

json run_ingest(const Options& o, const IngestArgs& a) {
  Problems problems;
  check_common(o, problems);
  check_file(a.prices, "--prices", problems);
  if (!(a.alpha > 0.0)) problems.add("--alpha must be > 0");
  FillPolicy fill = FillPolicy::Zero;
  if (a.fill == "carry-forward") {
    fill = FillPolicy::CarryForward;
  } else if (a.fill != "zero") {
    problems.add("--fill must be zero or carry-forward (got '" + a.fill + "')");
  }
  std::vector<std::pair<std::string, std::string>> sentiment, trends;
  for (const auto& s : a.sentiment) {
    auto nv = split_named(s, "--sentiment", problems);
    if (!nv.first.empty()) {
      check_file(nv.second, "--sentiment", problems);
      sentiment.push_back(nv);
    }
  }
  for (const auto& s : a.gtrends) {
    auto nv = split_named(s, "--gtrends", problems);
    if (!nv.first.empty()) {
      if (!fs::is_directory(nv.second)) problems.add("--gtrends directory '" + nv.second + "' does not exist");
      trends.push_back(nv);
    }
  }
  problems.raise();
  setup_threads(o);

  const TimePanel returns = log_returns(csv::read_panel(a.prices));
  const DateRange window{returns.dates.front(), returns.dates.back()};
  std::vector<TimePanel> parts{returns};
  SentimentConfig scfg;
  scfg.alpha = a.alpha;
  for (const auto& [name, path] : sentiment) {
    parts.push_back(daily_aggregate(read_scored_items(path), scfg, window, fill, name));
  }
  for (const auto& [name, dir] : trends) {
    const auto [chunks, monthly] = read_gtrends_dir(dir);
    const TimePanel daily = rescale_gtrends(chunks, monthly, name);
    const auto first = std::find(daily.dates.begin(), daily.dates.end(), window.first);
    if (first == daily.dates.end() || daily.dates.back() < window.last) {
      throw Error("Google-Trends series '" + name + "' does not cover " + format_date(window.first) + " to " +
                  format_date(window.last));
    }
    const Index begin = first - daily.dates.begin();
    parts.push_back(daily.slice(begin, begin + returns.rows()));
  }
  const TimePanel panel = hstack(parts);
  const fs::path dir = prepare_out(o);
  csv::write_panel(dir / "panel.csv", panel);
  return ok_line("ingest", {dir / "panel.csv"});
}

json run_cv(const Options& o) {
  Problems problems;
  check_common(o, problems);
  check_model(o, problems);
  check_file(o.panel, "--panel", problems);
  const Estimator est = check_estimator(o, problems);
  LassoConfig cfg = lasso_config(o, problems);
  if (est == Estimator::Ols) problems.add("cv needs a penalized estimator (lasso or fgls-lasso)");
  problems.raise();
  setup_threads(o);
  const TimePanel panel = csv::read_panel(o.panel);
  if (fixed_lambda(o)) cfg.lambdas = {cfg.lambda};
  const CvResult cv = select_lambda(panel, o.lag, cfg, make_plan(o, panel.rows()), est);

  const fs::path dir = prepare_out(o);
  std::ostringstream table;
  table << "lambda,fold,loss\n";
  for (std::size_t i = 0; i < cv.lambdas.size(); ++i) {
    for (Index f = 0; f < cv.losses.cols(); ++f) {
      table << csv::format_double(cv.lambdas[i]) << ',' << f + 1 << ','
            << csv::format_double(cv.losses(static_cast<Index>(i), f)) << '\n';
    }
  }
  write_text(dir / "cv.csv", table.str());
  std::size_t best = 0;
  for (std::size_t i = 0; i < cv.lambdas.size(); ++i)
    if (cv.lambdas[i] == cv.lambda_star) best = i;
  write_text(dir / "cv_summary.txt", "lambda_star=" + csv::format_double(cv.lambda_star) +
                                          " mean_loss=" + csv::format_double(cv.mean_loss[static_cast<Index>(best)]) +
                                          " estimator=" + to_string(est) + " lag=" + std::to_string(o.lag) + "\n");
  json j = ok_line("cv", {dir / "cv.csv", dir / "cv_summary.txt"});
  j["lambda_star"] = cv.lambda_star;
  return j;
}

VarModel fit_from_options(const TimePanel& panel, const Options& o, Estimator est, LassoConfig cfg) {
  if (est != Estimator::Ols && !fixed_lambda(o)) {
    cfg.lambda = select_lambda(panel, o.lag, cfg, make_plan(o, panel.rows()), est).lambda_star;
  }
  return fit_var(panel, o.lag, est, cfg);
}

json run_fit(const Options& o) {
  Problems problems;
  check_common(o, problems);
  check_model(o, problems);
  check_file(o.panel, "--panel", problems);
  const Estimator est = check_estimator(o, problems);
  const LassoConfig cfg = lasso_config(o, problems);
  problems.raise();
  setup_threads(o);
  const TimePanel panel = csv::read_panel(o.panel);
  const VarModel model = fit_from_options(panel, o, est, cfg);
  const fs::path dir = prepare_out(o);
  write_model(dir / "model.json", model);
  if (!model.solver.converged) sparsevar::log::warn("fit: coordinate descent did not converge; model flagged");
  json j = ok_line("fit", {dir / "model.json"});
  j["lambda"] = model.solver.lambda;
  j["converged"] = model.solver.converged;
  return j;
}

struct ForecastArgs {
  std::string model;
  bool reselect = false;
  bool force = false;
};

json run_forecast(const Options& o, const ForecastArgs& a) {
  Problems problems;
  check_common(o, problems);
  check_model(o, problems);
  check_file(o.panel, "--panel", problems);
  if (!a.model.empty()) check_file(a.model, "--model", problems);
  if (o.horizons < 1) problems.add("--horizons must be >= 1");
  const auto [start, end] = parse_origins(o.origins, problems);
  const Estimator est = check_estimator(o, problems);
  const LassoConfig cfg = lasso_config(o, problems);
  problems.raise();
  setup_threads(o);
  const TimePanel panel = csv::read_panel(o.panel);

  ForecastSet set;
  if (!a.model.empty()) {
    set = forecast_with_model(panel, read_model(a.model), start, end, o.horizons, a.force);
  } else {
    RecursiveConfig rc;
    rc.p = o.lag;
    rc.estimator = est;
    rc.lasso = cfg;
    rc.fixed_lambda = fixed_lambda(o) || est == Estimator::Ols;
    rc.start_origin = start;
    rc.end_origin = end;
    rc.horizons = o.horizons;
    rc.refit = a.reselect ? RefitPolicy::SelectEachOrigin : RefitPolicy::SelectOnce;
    rc.force_nonconverged = a.force;
    const auto it = std::find(panel.dates.begin(), panel.dates.end(), start);
    if (it == panel.dates.end()) throw Error("start origin " + format_date(start) + " not in panel");
    rc.plan = make_plan(o, (it - panel.dates.begin()) + 1);
    set = recursive_exercise(panel, rc);
  }
  const fs::path dir = prepare_out(o);
  write_forecasts(dir / "forecasts.csv", set);
  json j = ok_line("forecast", {dir / "forecasts.csv"});
  j["origins"] = set.origins.size();
  return j;
}

struct EvaluateArgs {
  std::vector<std::string> forecasts;
  std::string benchmark;
  std::string mda_form = "consecutive";
};

// Checks forecast origins and recorded actuals against the panel and fills
// missing actuals from it. Every mismatching date is reported.
void align_with_panel(ForecastSet& set, const std::string& model, const TimePanel& panel, Problems& problems) {
  std::map<Date, Index> row;
  for (std::size_t t = 0; t < panel.dates.size(); ++t) row[panel.dates[t]] = static_cast<Index>(t);
  std::vector<Index> cols;
  for (const auto& n : set.names) {
    try {
      cols.push_back(panel.column(n));
    } catch (const Error&) {
      problems.add("forecasts '" + model + "': series '" + n + "' not in panel");
      return;
    }
  }
  std::vector<std::string> bad_origins, bad_actuals;
  for (std::size_t o = 0; o < set.origins.size(); ++o) {
    if (!row.count(set.origins[o])) {
      bad_origins.push_back(format_date(set.origins[o]));
      continue;
    }
    for (int h = 1; h <= set.horizons; ++h) {
      const auto it = row.find(set.target_date(o, h));
      for (std::size_t k = 0; k < cols.size(); ++k) {
        double& actual = set.actuals[o](h - 1, static_cast<Index>(k));
        if (it == row.end()) continue;
        const double truth = panel.values(it->second, cols[k]);
        if (std::isnan(actual)) {
          actual = truth;
        } else if (std::abs(actual - truth) > 1e-9 * std::max(1.0, std::abs(truth))) {
          bad_actuals.push_back(format_date(set.target_date(o, h)));
        }
      }
    }
  }
  auto join = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  if (!bad_origins.empty()) problems.add("forecasts '" + model + "': origins not in panel: " + join(bad_origins));
  if (!bad_actuals.empty()) problems.add("forecasts '" + model + "': actuals differ from panel at " + join(bad_actuals));
}

json run_evaluate(const Options& o, const EvaluateArgs& a) {
  Problems problems;
  check_common(o, problems);
  if (a.forecasts.empty()) problems.add("--forecasts NAME=PATH is required at least once");
  std::vector<std::pair<std::string, std::string>> inputs;
  std::set<std::string> seen;
  for (const auto& f : a.forecasts) {
    auto nv = split_named(f, "--forecasts", problems);
    if (nv.first.empty()) continue;
    if (!seen.insert(nv.first).second) problems.add("--forecasts name '" + nv.first + "' given twice");
    check_file(nv.second, "--forecasts", problems);
    inputs.push_back(nv);
  }
  if (!a.benchmark.empty() && !seen.count(a.benchmark)) {
    problems.add("--benchmark '" + a.benchmark + "' is not one of the --forecasts names");
  }
  EvalOptions opt;
  if (a.mda_form == "within-path") {
    opt.mda_form = MdaForm::WithinPath;
  } else if (a.mda_form != "consecutive") {
    problems.add("--mda-form must be consecutive or within-path (got '" + a.mda_form + "')");
  }
  if (!o.panel.empty()) check_file(o.panel, "--panel", problems);
  problems.raise();
  setup_threads(o);

  std::vector<NamedForecasts> models;
  for (const auto& [name, path] : inputs) models.push_back({name, read_forecasts(path)});
  if (!o.panel.empty()) {
    const TimePanel panel = csv::read_panel(o.panel);
    Problems mismatch;
    for (auto& m : models) align_with_panel(m.set, m.model, panel, mismatch);
    mismatch.raise();
  }
  if (!a.benchmark.empty()) opt.benchmark = a.benchmark;
  const EvalPanel panel = evaluate(models, opt);
  const fs::path dir = prepare_out(o);
  write_eval_report(dir / "evaluation.csv", panel);
  return ok_line("evaluate", {dir / "evaluation.csv"});
}

struct GrangerArgs {
  std::vector<std::string> variables;
  bool robust = false;
};

json run_granger(const Options& o, const GrangerArgs& a) {
  Problems problems;
  check_common(o, problems);
  check_file(o.panel, "--panel", problems);
  if (o.lag < 1) problems.add("--lag must be >= 1");
  if (!(o.threshold >= 0.0 && o.threshold <= 1.0)) problems.add("--threshold must lie in [0, 1]");
  NetworkOptions net_opt;
  net_opt.p = o.lag;
  net_opt.threshold = o.threshold;
  net_opt.grid = parse_grid(o.grid, problems);
  net_opt.robust_lm = a.robust;
  LassoConfig solver;
  solver.tol = o.tol;
  solver.max_sweeps = o.max_sweeps;
  if (!(o.tol > 0.0)) problems.add("--tol must be > 0");
  problems.raise();
  setup_threads(o);
  const TimePanel panel = csv::read_panel(o.panel);
  const GrangerNetwork net = granger_network(panel, a.variables, net_opt, solver);
  const fs::path dir = prepare_out(o);
  write_granger_matrix(dir / "granger_matrix.csv", net);
  write_granger_edges(dir / "granger_edges.csv", net);
  write_granger_dot(dir / "granger.dot", net);
  json j = ok_line("granger", {dir / "granger_matrix.csv", dir / "granger_edges.csv", dir / "granger.dot"});
  j["edges"] = net.edges.size();
  j["failed_pairs"] = net.failures.size();
  return j;
}

void error_line(std::ostream& err, const std::string& kind, const std::vector<std::string>& messages) {
  json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["errors"] = messages;
  err << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  sparsevar::log::init_from_env();
  CLI::App app{"Sparse VAR estimation, forecasting and Granger-causality toolkit", "sparsevar"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--config", "Flat 'key = value' file; command-line flags override it");

  Options o;
  SimulateArgs sim;
  IngestArgs ing;
  ForecastArgs fc;
  EvaluateArgs ev;
  GrangerArgs gr;

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a sparse VAR panel and its ground truth");
  add_common(simulate_cmd, o);
  simulate_cmd->add_option("--lag", o.lag, "VAR lag order p");
  simulate_cmd->add_option("--k", sim.k, "Number of series");
  simulate_cmd->add_option("--t", sim.t, "Number of observations");
  simulate_cmd->add_option("--density", sim.density, "Fraction of nonzero coefficients");
  simulate_cmd->add_option("--magnitude", sim.magnitude, "Absolute coefficient value");
  simulate_cmd->add_option("--error", sim.error, "iid | ar1");
  simulate_cmd->add_option("--rho", sim.rho, "AR(1) error parameter");
  simulate_cmd->add_option("--sd", sim.sd, "Innovation standard deviation");
  simulate_cmd->add_option("--burn-in", sim.burn_in, "Discarded initial draws");
  simulate_cmd->add_option("--start", sim.start, "First date (YYYY-MM-DD)");

  auto* ingest_cmd = app.add_subcommand("ingest", "Build the modelling panel from raw inputs");
  add_common(ingest_cmd, o);
  ingest_cmd->add_option("--prices", ing.prices, "Price CSV (date + one column per asset)");
  ingest_cmd->add_option("--sentiment", ing.sentiment, "NAME=PATH scored-item CSV (repeatable)");
  ingest_cmd->add_option("--gtrends", ing.gtrends, "NAME=DIR Google-Trends directory (repeatable)");
  ingest_cmd->add_option("--alpha", ing.alpha, "Compound-score normalization constant");
  ingest_cmd->add_option("--fill", ing.fill, "Empty sentiment days: zero | carry-forward");

  auto* cv_cmd = app.add_subcommand("cv", "Select the LASSO penalty by walk-forward cross-validation");
  add_common(cv_cmd, o);
  cv_cmd->add_option("--panel", o.panel, "Panel CSV");
  add_model_options(cv_cmd, o);

  auto* fit_cmd = app.add_subcommand("fit", "Estimate a VAR and write the model JSON");
  add_common(fit_cmd, o);
  fit_cmd->add_option("--panel", o.panel, "Panel CSV");
  add_model_options(fit_cmd, o);

  auto* forecast_cmd = app.add_subcommand("forecast", "Recursive out-of-sample forecasts");
  add_common(forecast_cmd, o);
  forecast_cmd->add_option("--panel", o.panel, "Panel CSV");
  add_model_options(forecast_cmd, o);
  forecast_cmd->add_option("--horizons", o.horizons, "Maximum horizon H");
  forecast_cmd->add_option("--origins", o.origins, "START:END forecast origins");
  forecast_cmd->add_option("--model", fc.model, "Use this model JSON instead of refitting");
  forecast_cmd->add_flag("--reselect", fc.reselect, "Re-run cross-validation at every origin");
  forecast_cmd->add_flag("--force", fc.force, "Forecast even with non-converged fits");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "RMSE, MDA and equal-predictive-accuracy tests");
  add_common(evaluate_cmd, o);
  evaluate_cmd->add_option("--forecasts", ev.forecasts, "NAME=PATH forecast CSV (repeatable)");
  evaluate_cmd->add_option("--benchmark", ev.benchmark, "Model name used as the EPA benchmark");
  evaluate_cmd->add_option("--panel", o.panel, "Panel CSV used to validate and fill actuals");
  evaluate_cmd->add_option("--mda-form", ev.mda_form, "consecutive | within-path");

  auto* granger_cmd = app.add_subcommand("granger", "Post-double-selection Granger network");
  add_common(granger_cmd, o);
  granger_cmd->add_option("--panel", o.panel, "Panel CSV");
  granger_cmd->add_option("--lag", o.lag, "VAR lag order p");
  granger_cmd->add_option("--threshold", o.threshold, "Edge p-value threshold");
  granger_cmd->add_option("--variables", gr.variables, "Variables to test (default: all)")->delimiter(',');
  granger_cmd->add_option("--grid", o.grid, "Per-stage penalty grid N,RATIO");
  granger_cmd->add_option("--tol", o.tol, "Coordinate-descent tolerance");
  granger_cmd->add_option("--max-sweeps", o.max_sweeps, "Coordinate-descent sweep limit");
  granger_cmd->add_flag("--robust", gr.robust, "Heteroskedasticity-robust LM statistic");

  try {
    std::map<std::string, std::string> config;
    if (const auto path = config_path(args)) config = read_config(*path);

    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 consumes from the back
    app.parse(reversed);

    CLI::App* sub = app.get_subcommands().front();
    o.active = sub;
    if (!config.empty()) {
      std::set<std::string> known{"config"};
      for (auto* s : app.get_subcommands({})) {
        for (auto* opt : s->get_options()) known.insert(long_name(opt));
      }
      std::vector<std::string> unknown;
      for (const auto& [key, value] : config) {
        if (!known.count(key)) unknown.push_back("unknown config key '" + key + "'");
      }
      if (!unknown.empty()) throw ConfigError(unknown);
      apply_config(sub, config);
    }

    json result;
    const std::string name = sub->get_name();
    if (name == "simulate") result = run_simulate(o, sim);
    else if (name == "ingest") result = run_ingest(o, ing);
    else if (name == "cv") result = run_cv(o);
    else if (name == "fit") result = run_fit(o);
    else if (name == "forecast") result = run_forecast(o, fc);
    else if (name == "evaluate") result = run_evaluate(o, ev);
    else if (name == "granger") result = run_granger(o, gr);
    out << result.dump() << '\n';
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", {e.what()});
    return 2;
  } catch (const ConfigError& e) {
    error_line(err, "config", e.problems);
    return 2;
  } catch (const std::exception& e) {
    error_line(err, "runtime", {e.what()});
    return 1;
  }
}

}  // namespace sparsevar::cli
