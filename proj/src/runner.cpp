#include "ottoforge/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ottoforge/dynamics.hpp"
#include "ottoforge/qutrit.hpp"
#include "ottoforge/simple_relaxation.hpp"
#include "ottoforge/validate.hpp"

namespace ottoforge {

namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_atomic(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write to '" + tmp.string() + "'");
    out << content;
  }
  fs::rename(tmp, target);
}

void write_json(const fs::path& target, const Json& j) { write_atomic(target, j.dump(2) + "\n"); }

class Csv {
 public:
  explicit Csv(std::string header) { rows_ = std::move(header) + "\n"; }
  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i) rows_ += ',';
      rows_ += fmt17(vals[i]);
    }
    rows_ += '\n';
  }
  void row_int_first(long long n, const std::vector<double>& vals) {
    rows_ += std::to_string(n);
    for (double v : vals) {
      rows_ += ',';
      rows_ += fmt17(v);
    }
    rows_ += '\n';
  }
  const std::string& str() const { return rows_; }

 private:
  std::string rows_;
};

Json cycle_to_json(const GeneralizedOttoCycle& cycle) {
  Json legs = Json::array();
  for (const Leg& l : cycle.legs) {
    Json jl;
    jl["mu"] = fmt17(l.mu);
    jl["bath"] = l.bath + 1;  // 1-based in outputs, matching level labels
    for (int m = 0; m < l.control.size(); ++m) {
      jl["eps" + std::to_string(m + 2)] = fmt17(l.control[m]);
    }
    legs.push_back(std::move(jl));
  }
  return legs;
}

Json trace_summary(const OptimizationResult& res) {
  Json per_assignment = Json::array();
  int cur = -1;
  double best = 0.0;
  int starts = 0;
  auto flush = [&]() {
    if (cur >= 0) {
      per_assignment.push_back(Json{{"assignment", cur}, {"starts", starts}, {"best_gap", fmt17(best)}});
    }
  };
  for (const StartTrace& t : res.trace) {
    if (t.assignment != cur) {
      flush();
      cur = t.assignment;
      best = t.final_value;
      starts = 0;
    }
    best = std::max(best, t.final_value);
    ++starts;
  }
  flush();
  return Json{{"total_starts", res.trace.size()}, {"per_assignment", std::move(per_assignment)}};
}

int task_validate(const ScenarioConfig& cfg, const fs::path& out) {
  std::vector<Leg> probes;
  for (int a = 0; a < cfg.model.n_baths(); ++a) {
    Leg leg;
    leg.bath = a;
    leg.mu = 1.0 / cfg.model.n_baths();
    ControlVector u(cfg.model.dimension - 1);
    if (cfg.model.baths[a].family == BathFamily::Peaked) {
      for (int m = 0; m < u.size(); ++m) u[m] = cfg.model.baths[a].targets[m];
    } else {
      for (int m = 0; m < u.size(); ++m) {
        const auto& [lo, hi] = cfg.model.domain.boxes[m];
        u[m] = 0.5 * (lo + hi);
      }
    }
    leg.control = std::move(u);
    probes.push_back(std::move(leg));
  }
  const ModelDiagnostics diag = validate_model(cfg.model, probes);

  const double rate_scale = std::max(diag.max_rate, 1e-300);
  const bool db_ok = diag.detailed_balance_residual <= 1e-12 * rate_scale;
  const bool cs_ok = diag.column_sum_residual <= 1e-12 * rate_scale;
  const bool ok = diag.strongly_connected && db_ok && cs_ok;

  Json out_levels = Json::array();
  for (int n : diag.unreachable_levels) out_levels.push_back(n + 1);
  Json j;
  j["task"] = "validate";
  j["valid"] = ok;
  j["strongly_connected"] = diag.strongly_connected;
  j["unreachable_levels"] = std::move(out_levels);
  j["detailed_balance_residual"] = fmt17(diag.detailed_balance_residual);
  j["column_sum_residual"] = fmt17(diag.column_sum_residual);
  j["max_rate"] = fmt17(diag.max_rate);
  j["summary"] = diag.summary();
  write_json(out / "result.json", j);
  return ok ? 0 : 2;
}

int task_optimize(const ScenarioConfig& cfg, const fs::path& out) {
  OptimizationProblem prob{cfg.model, cfg.weights, cfg.optimizer};
  const OptimizationResult res = optimize_cycle(prob);

  double min_mu = 1.0;
  for (const Leg& l : res.raw_cycle.legs) min_mu = std::min(min_mu, l.mu);

  Json j;
  j["task"] = "optimize";
  j["gap"] = fmt17(res.gap);
  j["legs"] = cycle_to_json(res.cycle);
  j["effective_L"] = res.cycle.size();
  j["raw_min_mu"] = fmt17(min_mu);
  Json assign = Json::array();
  for (int a : res.assignment) assign.push_back(a + 1);
  j["assignment"] = std::move(assign);
  Json heats = Json::array();
  for (double h : res.leg_heat_rates) heats.push_back(fmt17(h));
  j["leg_heat_rates"] = std::move(heats);
  j["trace"] = trace_summary(res);
  write_json(out / "result.json", j);
  return 0;
}

int task_sweep(const ScenarioConfig& cfg, const fs::path& out) {
  if (cfg.task.periods.values.empty()) throw InvalidInput("sweep-period task needs a period grid");
  OptimizationProblem prob{cfg.model, cfg.weights, cfg.optimizer};
  const OptimizationResult res = optimize_cycle(prob);
  const auto rows = sweep_period(cfg.model, res.cycle, cfg.weights, cfg.task.periods.values);

  double peak = rows.front().gap;
  for (const auto& r : rows) peak = std::max(peak, r.gap);
  Csv csv("period,gap,gap_over_peak");
  for (const auto& r : rows) csv.row({r.period, r.gap, peak != 0.0 ? r.gap / peak : 0.0});
  write_atomic(out / "sweep.csv", csv.str());

  Json j;
  j["task"] = "sweep-period";
  j["gap_fast"] = fmt17(rows.front().gap);
  j["gap_peak"] = fmt17(peak);
  j["legs"] = cycle_to_json(res.cycle);
  j["rows"] = rows.size();
  j["trace"] = trace_summary(res);
  write_json(out / "result.json", j);
  return 0;
}

int task_contour(const ScenarioConfig& cfg, const fs::path& out) {
  if (cfg.model.dimension != 3 || cfg.model.n_baths() != 3) {
    throw InvalidInput("contour task requires a 3-level model with 3 peaked baths");
  }
  for (const BathModel& b : cfg.model.baths) {
    if (b.family != BathFamily::Peaked) throw InvalidInput("contour task requires peaked baths");
  }
  PeakedScenario sc{cfg.model};
  const ContourResult res = contour_xy(sc, cfg.task.resolution);

  Csv csv("x,y,gap");
  for (int i = 0; i < res.resolution; ++i) {
    for (int k = 0; k < res.resolution; ++k) {
      csv.row({res.xs[i], res.ys[k], res.grid[static_cast<std::size_t>(i) * res.resolution + k]});
    }
  }
  write_atomic(out / "contour.csv", csv.str());

  Json j;
  j["task"] = "contour";
  j["resolution"] = res.resolution;
  j["grid_max"] = fmt17(res.grid_max);
  j["argmax_x"] = fmt17(res.refined_x);
  j["argmax_y"] = fmt17(res.refined_y);
  j["argmax_gap"] = fmt17(res.refined_value);
  j["boundary_max"] = fmt17(res.boundary_max);
  j["interior_margin"] = fmt17(res.interior_margin);
  write_json(out / "result.json", j);
  return 0;
}

int task_many_qubit(const ScenarioConfig& cfg, const fs::path& out) {
  if (cfg.model.n_baths() != 2) throw InvalidInput("many-qubit task requires exactly two baths");
  for (const BathModel& b : cfg.model.baths) {
    if (b.family != BathFamily::FixedRate) {
      throw InvalidInput("many-qubit task requires fixed-rate baths (single thermalization scale)");
    }
  }
  const bool first_hot = cfg.model.baths[0].beta < cfg.model.baths[1].beta;
  const BathModel& hot = first_hot ? cfg.model.baths[0] : cfg.model.baths[1];
  const BathModel& cold = first_hot ? cfg.model.baths[1] : cfg.model.baths[0];
  SimpleRelaxModel model{hot.beta, cold.beta, hot.rate, cold.rate};

  MachineKind kind;
  if (cfg.task.machine == "engine") {
    kind = MachineKind::Engine;
  } else if (cfg.task.machine == "fridge" || cfg.task.machine == "refrigerator") {
    kind = MachineKind::Refrigerator;
  } else {
    throw InvalidInput("many-qubit machine must be engine or fridge");
  }
  if (cfg.task.qubits.empty()) throw InvalidInput("many-qubit task needs a list of qubit counts n");

  Csv csv("n,gap_I,gap_NI,ratio,asymptote");
  ManyQubitComparison last;
  for (int n : cfg.task.qubits) {
    last = many_qubit_compare(n, model, kind);
    csv.row_int_first(n, {last.gap_interacting, last.gap_noninteracting, last.ratio, last.asymptote});
  }
  write_atomic(out / "many_qubit.csv", csv.str());

  Json j;
  j["task"] = "many-qubit";
  j["machine"] = cfg.task.machine;
  j["n_final"] = cfg.task.qubits.back();
  j["ratio_final"] = fmt17(last.ratio);
  j["gap_I_final"] = fmt17(last.gap_interacting);
  j["gap_NI_final"] = fmt17(last.gap_noninteracting);
  write_json(out / "result.json", j);
  return 0;
}

}  // namespace

int run_task(const Json& raw_config, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out(out_dir);
  fs::create_directories(out);

  int code = 0;
  std::string error;
  try {
    const ScenarioConfig cfg = parse_config(raw_config);
    switch (cfg.task.kind) {
      case TaskKind::Validate: code = task_validate(cfg, out); break;
      case TaskKind::Optimize: code = task_optimize(cfg, out); break;
      case TaskKind::SweepPeriod: code = task_sweep(cfg, out); break;
      case TaskKind::Contour: code = task_contour(cfg, out); break;
      case TaskKind::ManyQubit: code = task_many_qubit(cfg, out); break;
    }
  } catch (const InvalidInput& e) {
    code = 2;
    error = e.what();
  } catch (const NotApplicable& e) {
    code = 2;
    error = e.what();
  } catch (const OptimizationFailed& e) {
    code = 3;
    error = e.what();
  } catch (const DegenerateCycle& e) {
    code = 3;
    error = e.what();
  } catch (const NoUniqueLimitCycle& e) {
    code = 3;
    error = e.what();
  }

  if (!error.empty()) {
    std::fprintf(stderr, "ottoforge: %s\n", error.c_str());
    write_json(out / "result.json", Json{{"error", error}, {"exit_code", code}});
  }

  const auto t1 = std::chrono::steady_clock::now();
  Json meta;
  meta["elapsed_seconds"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0;
  meta["threads"] = par::max_threads();
  meta["timestamp_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
          .count();
  write_json(out / "run_meta.json", meta);
  return code;
}

}  // namespace ottoforge
