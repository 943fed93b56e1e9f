// dqest: diversification-index estimation toolkit.
//
// Subcommands:
//   estimate  point estimates of DQ/DR indices on a CSV of joint losses
//   truth     closed-form elliptical ground truth
//   variance  plug-in asymptotic variances (analytic model or CSV data)
//   simulate  sampling-distribution and variance-curve experiments
//   rolldq    rolling-window estimates with residual-bootstrap bands
//
// All outputs embed the configuration and seed needed to reproduce them.
// Exit codes: 0 ok, 2 input error, 3 computation error, 4 assumption violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dqest/asymvar.hpp"
#include "dqest/dqcore.hpp"
#include "dqest/elliptical.hpp"
#include "dqest/errors.hpp"
#include "dqest/simharness.hpp"
#include "dqest/tsboot.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;
using namespace dqest;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitComputation = 3;
constexpr int kExitAssumption = 4;

struct CommonOptions {
  double alpha = 0.1;
  std::string family = "normal";
  double nu = 3.0;
  int n = 5;
  double r = 0.3;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string output = "json";
  int threads = 0;
};

std::uint64_t resolve_seed(const CommonOptions& opts) {
  if (opts.seed_given) return opts.seed;
  if (const char* env = std::getenv("DQEST_SEED")) {
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }
  return 1;
}

Family parse_family(const std::string& name) {
  if (name == "normal") return Family::NORMAL;
  if (name == "t") return Family::STUDENT_T;
  throw InvalidInput("unknown family (expected normal|t): " + name);
}

IndexKind parse_index(const std::string& name) {
  auto kind = index_kind_from_string(name);
  if (!kind) throw InvalidInput("unknown index: " + name);
  return *kind;
}

ModelSpec model_spec(const CommonOptions& opts) {
  ModelSpec spec;
  spec.family = parse_family(opts.family);
  spec.n = opts.n;
  spec.r = opts.r;
  spec.nu = opts.nu;
  return spec;
}

json provenance(const CommonOptions& opts, const json& config) {
  json p;
  p["version"] = kVersion;
  p["seed"] = resolve_seed(opts);
  p["config"] = config;
  return p;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

// Numeric CSV -> LossSample.  An unparsable first line is treated as a header;
// a leading `date` column is skipped.  Any other unparsable or non-finite cell
// is an input error.
LossSample load_loss_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open CSV: " + path);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool skip_first_col = false;
  bool first_line = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::vector<std::string> cells;
    {
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
    }
    if (first_line) {
      first_line = false;
      bool numeric = true;
      for (const auto& cell : cells) {
        try {
          std::size_t pos = 0;
          (void)std::stod(cell, &pos);
          if (pos != cell.find_last_not_of(" \t\r\n") + 1) numeric = false;
        } catch (const std::exception&) {
          numeric = false;
        }
        if (!numeric) break;
      }
      if (!numeric) {
        std::string head = cells.empty() ? "" : cells[0];
        const auto b = head.find_first_not_of(" \t\r\n");
        if (b != std::string::npos) head = head.substr(b, head.find_last_not_of(" \t\r\n") - b + 1);
        skip_first_col = (head == "date");
        continue;  // header consumed
      }
    }
    std::vector<double> row;
    for (std::size_t i = skip_first_col ? 1 : 0; i < cells.size(); ++i) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[i], &pos);
      } catch (const std::exception&) {
        throw InvalidInput("non-numeric CSV cell: " + cells[i]);
      }
      if (!std::isfinite(v)) throw InvalidInput("non-finite CSV cell: " + cells[i]);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput("ragged CSV: inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw InvalidInput("CSV needs at least 2 data rows");
  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      data(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[k][i];
    }
  }
  return LossSample(std::move(data));
}

json estimate_to_json(const DqEstimate& est) {
  json j;
  j["index"] = to_string(est.kind);
  j["alpha"] = est.alpha;
  j["value"] = est.value;
  j["marginal_stats"] = est.marginal_stats;
  j["threshold"] = est.threshold;
  if (est.alpha_star) j["alpha_star"] = *est.alpha_star;
  if (est.minimizer_r) j["minimizer_r"] = *est.minimizer_r;
  j["canonical"] = est.canonical;
  return j;
}

json variance_to_json(const AsymVariance& av) {
  json j;
  j["sigma2"] = av.sigma2;
  j["a_vec"] = std::vector<double>(av.a_vec.begin(), av.a_vec.end());
  std::vector<std::vector<double>> cov;
  for (Eigen::Index row = 0; row < av.cov_mat.rows(); ++row) {
    cov.emplace_back(av.cov_mat.row(row).begin(), av.cov_mat.row(row).end());
  }
  j["cov_mat"] = cov;
  if (av.c_const) j["c_const"] = *av.c_const;
  j["lag_window"] = av.lag_window;
  j["floored_negative"] = av.floored_negative;
  j["ties_warning"] = av.ties_warning;
  j["mc_std_err"] = av.mc_std_err;
  return j;
}

// --- subcommand bodies -------------------------------------------------------

int cmd_estimate(const CommonOptions& opts, const std::string& input,
                 const std::vector<std::string>& index_names, bool allow_noncanonical) {
  const LossSample data = load_loss_csv(input);
  const RiskLevel a(opts.alpha);
  std::vector<std::string> names = index_names;
  if (names.empty()) names = {"dq-var", "dq-es", "dq-ex", "dr-var", "dr-es"};

  json results = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "index,alpha,value,threshold\n";
  for (const auto& name : names) {
    const DqEstimate est = estimate_index(data, a, parse_index(name), allow_noncanonical);
    results.push_back(estimate_to_json(est));
    csv << to_string(est.kind) << ',' << est.alpha << ',' << est.value << ',' << est.threshold
        << "\n";
  }

  if (opts.output == "csv") {
    std::cout << csv.str();
  } else {
    json doc;
    doc["provenance"] = provenance(opts, {{"subcommand", "estimate"},
                                          {"input", input},
                                          {"alpha", opts.alpha},
                                          {"indices", names}});
    doc["estimates"] = results;
    doc["rows"] = data.rows();
    doc["cols"] = data.cols();
    emit(doc);
  }
  return kExitOk;
}

int cmd_truth(const CommonOptions& opts, const std::string& index_name) {
  const ModelSpec spec = model_spec(opts);
  const EllipticalModel model = spec.build();
  const RiskLevel a(opts.alpha);
  const double value = true_index_value(model, a, parse_index(index_name));

  if (opts.output == "csv") {
    std::cout << "index,alpha,family,n,r,nu,value\n";
    std::cout.precision(17);
    std::cout << index_name << ',' << opts.alpha << ',' << opts.family << ',' << opts.n << ','
              << opts.r << ',' << opts.nu << ',' << value << "\n";
  } else {
    json doc;
    doc["provenance"] = provenance(opts, {{"subcommand", "truth"},
                                          {"index", index_name},
                                          {"alpha", opts.alpha},
                                          {"family", opts.family},
                                          {"n", opts.n},
                                          {"r", opts.r},
                                          {"nu", opts.nu}});
    doc["value"] = value;
    emit(doc);
  }
  return kExitOk;
}

int cmd_variance(const CommonOptions& opts, const std::string& index_name,
                 const std::string& input, int max_lag, std::int64_t mc_draws) {
  const IndexKind kind = parse_index(index_name);
  const RiskLevel a(opts.alpha);
  AsymVariance av;

  if (!input.empty()) {
    // data path: empirical quantiles with KDE density plug-ins
    const LossSample data = load_loss_csv(input);
    Margins margins;
    for (Eigen::Index i = 0; i < data.cols(); ++i) {
      margins.push_back(std::make_shared<EmpiricalDistribution>(data.column_sample(i)));
    }
    const EmpiricalDistribution sumplug(data.sum_sample());
    int lag = max_lag;
    if (lag < 0) lag = static_cast<int>(std::floor(std::cbrt(static_cast<double>(data.rows()))));
    switch (kind) {
      case IndexKind::DQ_VAR:
        av = sigma2_dq_var_mixing(data, margins, sumplug, a, lag);
        break;
      case IndexKind::DQ_ES:
        av = sigma2_dq_es_mixing(data, margins, sumplug, a, lag);
        break;
      case IndexKind::DQ_EX:
        if (lag != 0) throw InvalidInput("dq-ex variance supports i.i.d. sampling only");
        av = sigma2_dq_ex_iid(data, margins, sumplug, a);
        break;
      case IndexKind::DR_VAR:
        if (lag != 0) throw InvalidInput("dr variance supports i.i.d. sampling only");
        av = sigma2_dr(data, margins, sumplug, a, RiskMeasureKind::VAR);
        break;
      case IndexKind::DR_ES:
        if (lag != 0) throw InvalidInput("dr variance supports i.i.d. sampling only");
        av = sigma2_dr(data, margins, sumplug, a, RiskMeasureKind::ES);
        break;
    }
  } else {
    // analytic model path: Monte Carlo covariance at a fixed seed unless the
    // user overrides it
    MonteCarlo mc;
    if (opts.seed_given) mc.seed = opts.seed;
    if (mc_draws > 0) mc.draws = mc_draws;

    const EllipticalModel model = model_spec(opts).build();
    Margins margins;
    for (int i = 0; i < opts.n; ++i) margins.push_back(model.margin_plugin(i));
    const auto sumplug = model.sum_plugin();
    switch (kind) {
      case IndexKind::DQ_VAR:
        av = sigma2_dq_var_iid(model.sampler(), margins, *sumplug, a, mc);
        break;
      case IndexKind::DQ_ES:
        av = sigma2_dq_es_iid(model.sampler(), margins, *sumplug, a, mc);
        break;
      case IndexKind::DQ_EX:
        av = sigma2_dq_ex_iid(model.sampler(), margins, *sumplug, a, mc);
        break;
      case IndexKind::DR_VAR:
        av = sigma2_dr(model.sampler(), margins, *sumplug, a, RiskMeasureKind::VAR, mc);
        break;
      case IndexKind::DR_ES:
        av = sigma2_dr(model.sampler(), margins, *sumplug, a, RiskMeasureKind::ES, mc);
        break;
    }
  }

  if (opts.output == "csv") {
    std::cout << "index,alpha,sigma2,mc_std_err,lag_window\n";
    std::cout.precision(17);
    std::cout << index_name << ',' << opts.alpha << ',' << av.sigma2 << ',' << av.mc_std_err
              << ',' << av.lag_window << "\n";
  } else {
    json doc;
    doc["provenance"] = provenance(opts, {{"subcommand", "variance"},
                                          {"index", index_name},
                                          {"alpha", opts.alpha},
                                          {"family", opts.family},
                                          {"n", opts.n},
                                          {"r", opts.r},
                                          {"nu", opts.nu},
                                          {"input", input},
                                          {"max_lag", max_lag},
                                          {"mc_draws", mc_draws}});
    doc["variance"] = variance_to_json(av);
    emit(doc);
  }
  return kExitOk;
}

int cmd_simulate(const CommonOptions& opts, const std::string& index_name,
                 std::int64_t n_samples, int reps, const std::string& sweep,
                 std::vector<double> grid, bool shift_sweep, std::vector<double> eps_grid,
                 std::int64_t mc_draws) {
  const std::uint64_t seed = resolve_seed(opts);
  ExperimentSpec spec;
  spec.estimator = parse_index(index_name);
  spec.model = model_spec(opts);
  spec.alpha = opts.alpha;
  spec.n_samples = n_samples;
  spec.n_reps = reps;
  spec.seed = seed;
  spec.threads = opts.threads;
  if (mc_draws > 0) spec.mc.draws = mc_draws;

  json config = {{"subcommand", "simulate"}, {"index", index_name},
                 {"alpha", opts.alpha},      {"family", opts.family},
                 {"n", opts.n},              {"r", opts.r},
                 {"nu", opts.nu},            {"samples", n_samples},
                 {"reps", reps},             {"sweep", sweep},
                 {"grid", grid},             {"eps_grid", eps_grid}};

  if (shift_sweep) {
    if (eps_grid.empty()) throw InvalidInput("--eps-grid required for the shift sweep");
    const EllipticalModel model = spec.model.build();
    const auto points = run_dr_shift_sweep(model, RiskLevel(opts.alpha), eps_grid, spec.mc);
    if (opts.output == "csv") {
      std::cout << "eps,sigma2_var,sigma2_es,divergent_var,divergent_es\n";
      std::cout.precision(17);
      for (const auto& pt : points) {
        std::cout << pt.eps << ',' << pt.sigma2_var << ',' << pt.sigma2_es << ','
                  << pt.divergent_var << ',' << pt.divergent_es << "\n";
      }
    } else {
      json rows = json::array();
      for (const auto& pt : points) {
        rows.push_back({{"eps", pt.eps},
                        {"sigma2_var", pt.sigma2_var},
                        {"sigma2_es", pt.sigma2_es},
                        {"divergent_var", pt.divergent_var},
                        {"divergent_es", pt.divergent_es}});
      }
      json doc;
      doc["provenance"] = provenance(opts, config);
      doc["dr_shift_sweep"] = rows;
      emit(doc);
    }
    return kExitOk;
  }

  if (!sweep.empty()) {
    if (grid.empty()) throw InvalidInput("--grid required for a sweep");
    SweepVar var;
    if (sweep == "alpha") {
      var = SweepVar::ALPHA;
    } else if (sweep == "r") {
      var = SweepVar::R;
    } else if (sweep == "n") {
      var = SweepVar::N;
    } else if (sweep == "nu") {
      var = SweepVar::NU;
    } else {
      throw InvalidInput("unknown sweep variable (expected alpha|r|n|nu): " + sweep);
    }
    const auto curve = run_variance_curve(spec, var, grid);
    if (opts.output == "csv") {
      std::cout << sweep << ",sigma2\n";
      std::cout.precision(17);
      for (const auto& pt : curve) std::cout << pt.grid_value << ',' << pt.sigma2 << "\n";
    } else {
      json rows = json::array();
      for (const auto& pt : curve) {
        rows.push_back({{"grid_value", pt.grid_value}, {"sigma2", pt.sigma2}});
      }
      json doc;
      doc["provenance"] = provenance(opts, config);
      doc["variance_curve"] = rows;
      emit(doc);
    }
    return kExitOk;
  }

  const ExperimentResult result = run_histogram_experiment(spec);
  if (opts.output == "csv") {
    std::cout << "rep,estimate\n";
    std::cout.precision(17);
    for (std::size_t k = 0; k < result.estimates.size(); ++k) {
      std::cout << k << ',' << result.estimates[k] << "\n";
    }
  } else {
    json doc;
    doc["provenance"] = provenance(opts, config);
    doc["true_value"] = result.true_value;
    doc["theory_sigma2"] = result.theory_sigma2;
    doc["sample_mean"] = result.sample_mean;
    if (result.sample_var_scaled) doc["sample_var_scaled"] = *result.sample_var_scaled;
    doc["normal_overlay"] = {{"mean", result.normal_overlay_mean},
                             {"variance", result.normal_overlay_var}};
    doc["estimates"] = result.estimates;
    doc["failed_reps"] = result.failed_reps;
    doc["failure_messages"] = result.failure_messages;
    doc["histogram"] = {{"edges", result.histogram.edges}, {"counts", result.histogram.counts}};
    emit(doc);
  }
  return kExitOk;
}

int cmd_rolldq(const CommonOptions& opts, const std::string& input, const std::string& index_name,
               int window, int step, int boot_reps, double ci, bool from_prices) {
  const Panel panel = load_panel_csv(input, from_prices);
  RollingConfig cfg;
  cfg.window = window;
  cfg.step = step;
  cfg.boot_reps = boot_reps;
  cfg.ci_level = ci;
  cfg.alpha = opts.alpha;
  cfg.index_kind = parse_index(index_name);
  cfg.threads = opts.threads;

  const DqSeries series = rolling_dq_with_ci(panel, cfg, resolve_seed(opts));

  if (opts.output == "csv") {
    std::cout << dq_series_to_csv(series);
  } else {
    json rows = json::array();
    for (std::size_t w = 0; w < series.points.size(); ++w) {
      const auto& pt = series.points[w];
      json row;
      row["date"] = pt.date;
      row["ok"] = pt.ok;
      if (pt.ok) {
        row["estimate"] = pt.estimate;
        row["boot_mean"] = pt.boot_mean;
        row["ci_lo"] = pt.ci_lo;
        row["ci_hi"] = pt.ci_hi;
        row["boot_var"] = pt.boot_var;
        json fits = json::array();
        for (const auto& p : series.window_fits[w]) {
          fits.push_back({{"c", p.c},
                          {"phi", p.phi},
                          {"omega", p.omega},
                          {"alpha_g", p.alpha_g},
                          {"beta_g", p.beta_g},
                          {"nu", p.nu}});
        }
        row["garch_fits"] = fits;
      } else {
        row["error"] = pt.error;
      }
      rows.push_back(row);
    }
    json doc;
    doc["provenance"] = provenance(opts, {{"subcommand", "rolldq"},
                                          {"input", input},
                                          {"index", index_name},
                                          {"alpha", opts.alpha},
                                          {"window", window},
                                          {"step", step},
                                          {"boot_reps", boot_reps},
                                          {"ci", ci},
                                          {"from_prices", from_prices}});
    doc["tickers"] = panel.tickers;
    doc["dropped_rows"] = panel.dropped_rows;
    doc["series"] = rows;
    emit(doc);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diversification-quotient estimation toolkit"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto add_common = [&](CLI::App* cmd, bool with_model) {
    cmd->add_option("--alpha", opts.alpha, "risk level in (0,1)")->capture_default_str();
    if (with_model) {
      cmd->add_option("--family", opts.family, "elliptical family: normal|t")
          ->capture_default_str();
      cmd->add_option("--nu", opts.nu, "Student-t degrees of freedom")->capture_default_str();
      cmd->add_option("--n", opts.n, "portfolio dimension")->capture_default_str();
      cmd->add_option("--r", opts.r, "equicorrelation")->capture_default_str();
    }
    cmd->add_option("--seed", opts.seed, "master seed (fallback: DQEST_SEED env, then 1)")
        ->each([&](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--output", opts.output, "output format: json|csv")->capture_default_str();
    cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
  };

  // estimate
  std::string est_input;
  std::vector<std::string> est_indices;
  bool est_allow_noncanonical = false;
  auto* est = app.add_subcommand("estimate", "estimate indices on a loss CSV");
  est->add_option("--input", est_input, "CSV of joint losses")->required();
  est->add_option("--index", est_indices,
                  "index (repeatable): dq-var|dq-es|dq-ex|dr-var|dr-es; default all");
  est->add_flag("--allow-noncanonical-alpha", est_allow_noncanonical,
                "allow dq-ex with alpha >= 1/2");
  add_common(est, false);

  // truth
  std::string truth_index = "dq-var";
  auto* truth = app.add_subcommand("truth", "closed-form elliptical value");
  truth->add_option("--index", truth_index, "index")->required();
  add_common(truth, true);

  // variance
  std::string var_index = "dq-var";
  std::string var_input;
  int var_max_lag = 0;
  std::int64_t var_mc_draws = 0;
  auto* var = app.add_subcommand("variance", "plug-in asymptotic variance");
  var->add_option("--index", var_index, "index")->required();
  var->add_option("--input", var_input, "loss CSV (data path); omit for the analytic model");
  var->add_option("--max-lag", var_max_lag,
                  "long-run covariance lag for data inputs (-1 = floor(N^(1/3)))")
      ->capture_default_str();
  var->add_option("--mc-draws", var_mc_draws, "Monte Carlo draws for model covariances");
  add_common(var, true);

  // simulate
  std::string sim_index = "dq-var";
  std::int64_t sim_samples = 5000;
  int sim_reps = 2000;
  std::string sim_sweep;
  std::vector<double> sim_grid;
  bool sim_shift_sweep = false;
  std::vector<double> sim_eps_grid;
  std::int64_t sim_mc_draws = 0;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  sim->add_option("--index", sim_index, "index")->required();
  sim->add_option("--samples", sim_samples, "draws per replication")->capture_default_str();
  sim->add_option("--reps", sim_reps, "replications")->capture_default_str();
  sim->add_option("--sweep", sim_sweep, "variance sweep variable: alpha|r|n|nu");
  sim->add_option("--grid", sim_grid, "sweep grid values")->delimiter(',');
  sim->add_flag("--shift-sweep", sim_shift_sweep, "DR location-shift variance sweep");
  sim->add_option("--eps-grid", sim_eps_grid, "shift-sweep eps values")->delimiter(',');
  sim->add_option("--mc-draws", sim_mc_draws, "Monte Carlo draws for theory variances");
  add_common(sim, true);

  // rolldq
  std::string roll_input;
  std::string roll_index = "dq-var";
  int roll_window = 500;
  int roll_step = 21;
  int roll_boot = 500;
  double roll_ci = 0.95;
  bool roll_from_prices = false;
  auto* roll = app.add_subcommand("rolldq", "rolling-window bootstrap bands");
  roll->add_option("--input", roll_input, "panel CSV: date,TICKER1,...")->required();
  roll->add_option("--index", roll_index, "index")->required();
  roll->add_option("--window", roll_window, "rolling window length")->capture_default_str();
  roll->add_option("--step", roll_step, "stride between windows")->capture_default_str();
  roll->add_option("--boot-reps", roll_boot, "bootstrap replications")->capture_default_str();
  roll->add_option("--ci", roll_ci, "confidence level")->capture_default_str();
  roll->add_flag("--from-prices", roll_from_prices,
                 "input contains prices; compute log-losses -log(P_t/P_{t-1})");
  add_common(roll, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInput;
  }

  try {
    if (est->parsed()) {
      return cmd_estimate(opts, est_input, est_indices, est_allow_noncanonical);
    }
    if (truth->parsed()) return cmd_truth(opts, truth_index);
    if (var->parsed()) {
      return cmd_variance(opts, var_index, var_input, var_max_lag, var_mc_draws);
    }
    if (sim->parsed()) {
      return cmd_simulate(opts, sim_index, sim_samples, sim_reps, sim_sweep, sim_grid,
                          sim_shift_sweep, sim_eps_grid, sim_mc_draws);
    }
    if (roll->parsed()) {
      return cmd_rolldq(opts, roll_input, roll_index, roll_window, roll_step, roll_boot, roll_ci,
                        roll_from_prices);
    }
  } catch (const AssumptionViolated& e) {
    std::cerr << "AssumptionViolated: " << e.what() << "\n";
    return kExitAssumption;
  } catch (const InvalidInput& e) {
    std::cerr << "InvalidInput: " << e.what() << "\n";
    return kExitInput;
  } catch (const ZeroDenominator& e) {
    std::cerr << "ZeroDenominator: " << e.what() << "\n";
    return kExitComputation;
  } catch (const DegenerateDenominator& e) {
    std::cerr << "DegenerateDenominator: " << e.what() << "\n";
    return kExitComputation;
  } catch (const DegenerateSample& e) {
    std::cerr << "DegenerateSample: " << e.what() << "\n";
    return kExitComputation;
  } catch (const NonPositiveDensity& e) {
    std::cerr << "NonPositiveDensity: " << e.what() << "\n";
    return kExitComputation;
  } catch (const FitFailed& e) {
    std::cerr << "FitFailed: " << e.what() << "\n";
    return kExitComputation;
  } catch (const NotCentered& e) {
    std::cerr << "NotCentered: " << e.what() << "\n";
    return kExitComputation;
  } catch (const Error& e) {
    std::cerr << "Error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitOk;
}
