/******************************************************************************
 * Copyright 2026 The EcoDrive Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "ecodrive/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "ecodrive/dp_parallel.hpp"
#include "ecodrive/fixtures.hpp"
#include "json.hpp"

namespace ecodrive {

namespace {

using nlohmann::json;

template <typename T>
void Opt(const json& j, const char* key, T& dst, const std::string& ctx) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + key + ": " + e.what());
  }
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path q(p);
  return q.is_absolute() ? q : base / q;
}

double NowMs() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void WriteFile(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + p.string() + "'");
  os << text;
}

json TimingJson(const TimingStats& t) {
  return {{"count", t.count}, {"mean_ms", t.mean}, {"variance_ms2", t.variance}, {"max_ms", t.max}};
}

struct Loaded {
  Powertrain pt;
  RouteBundle bundle;
};

Loaded LoadInputs(const ExperimentConfig& cfg, const std::filesystem::path& route) {
  Loaded l;
  l.pt = LoadPowertrain(cfg.vehicle);
  l.bundle = LoadRoute(route);
  if (l.bundle.route.step != cfg.step) {
    throw ConfigError("route '" + route.string() + "' has step " +
                      std::to_string(l.bundle.route.step) + " m, config expects " +
                      std::to_string(cfg.step) + " m");
  }
  const auto& vm = l.bundle.route.v_max;
  cfg.driver.Validate(vm.empty() ? 0.0 : *std::max_element(vm.begin(), vm.end()));
  if (cfg.max_nodes > 0 && cfg.max_nodes < l.bundle.route.node_count()) {
    l.bundle = TruncateRoute(l.bundle, cfg.max_nodes);
  }
  return l;
}

void PrintRun(std::ostream& out, const ControllerRun& r) {
  const auto& t = r.trajectory;
  out << r.route << " / " << t.controller << ": fuel " << Fixed(t.total_fuel, 2) << " g, time "
      << Fixed(t.TravelTime(), 2) << " s, SoC " << Fixed(t.SocStart(), 4) << " -> "
      << Fixed(t.SocEnd(), 4);
  if (r.timing.count > 0) {
    out << ", solve mean " << Fixed(r.timing.mean, 2) << " ms var "
        << Fixed(r.timing.variance, 2) << " ms^2 max " << Fixed(r.timing.max, 2) << " ms";
  }
  if (r.fallbacks > 0) out << ", " << r.fallbacks << " fallbacks";
  if (!t.completed) out << " [INCOMPLETE: " << t.diagnostic << "]";
  out << '\n';
}

}  // namespace

Backend ParseBackend(const std::string& name) {
  if (name == "serial") return Backend::kSerial;
  if (name == "parallel") return Backend::kParallel;
  throw ConfigError("backend must be 'serial' or 'parallel', got '" + name + "'");
}

ExperimentConfig ExperimentConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str(), path.parent_path());
}

ExperimentConfig ExperimentConfig::Parse(const std::string& text,
                                         const std::filesystem::path& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  ExperimentConfig c;
  const std::string ctx = "config.";
  std::string s;
  if (doc.contains("route")) {
    Opt(doc, "route", s, ctx);
    c.route = Resolve(base, s);
  }
  if (doc.contains("bench_routes")) {
    std::vector<std::string> rs;
    Opt(doc, "bench_routes", rs, ctx);
    for (const auto& r : rs) c.bench_routes.push_back(Resolve(base, r));
  }
  if (doc.contains("vehicle")) {
    Opt(doc, "vehicle", s, ctx);
    c.vehicle = Resolve(base, s);
  }
  Opt(doc, "gamma", c.solver.gamma, ctx);
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    Opt(g, "n_v", c.solver.grid.n_v, ctx + "grid.");
    Opt(g, "n_soc", c.solver.grid.n_soc, ctx + "grid.");
    Opt(g, "n_t", c.solver.grid.n_t, ctx + "grid.");
    Opt(g, "n_eng", c.solver.grid.n_eng, ctx + "grid.");
    Opt(g, "n_bsg", c.solver.grid.n_bsg, ctx + "grid.");
  }
  Opt(doc, "step_m", c.step, ctx);
  Opt(doc, "horizon_steps", c.solver.horizon_steps, ctx);
  Opt(doc, "horizon_time_s", c.solver.horizon_time, ctx);
  if (doc.contains("penalty")) {
    const json& p = doc["penalty"];
    Opt(p, "j_inf", c.solver.penalty.j_inf, ctx + "penalty.");
    Opt(p, "soc_weight", c.solver.penalty.soc_weight, ctx + "penalty.");
    Opt(p, "soc_target", c.solver.penalty.soc_target, ctx + "penalty.");
    Opt(p, "time_weight", c.solver.penalty.time_weight, ctx + "penalty.");
  }
  if (doc.contains("backend")) {
    Opt(doc, "backend", s, ctx);
    c.backend = ParseBackend(s);
  }
  Opt(doc, "workers", c.workers, ctx);
  if (doc.contains("out")) {
    Opt(doc, "out", s, ctx);
    c.out_dir = Resolve(base, s);
  }
  Opt(doc, "seed", c.seed, ctx);
  Opt(doc, "controllers", c.controllers, ctx);
  if (doc.contains("start")) {
    const json& st = doc["start"];
    Opt(st, "velocity_mps", c.start_velocity, ctx + "start.");
    Opt(st, "time_s", c.start_time, ctx + "start.");
    if (st.contains("soc") && !st["soc"].is_null()) {
      double soc = 0.0;
      Opt(st, "soc", soc, ctx + "start.");
      c.start_soc = soc;
    }
  }
  if (doc.contains("driver")) {
    const json& d = doc["driver"];
    const std::string dc = ctx + "driver.";
    Opt(d, "speed_margin_mps", c.driver.speed_margin, dc);
    Opt(d, "gain_per_s", c.driver.gain, dc);
    Opt(d, "accel_mps2", c.driver.accel, dc);
    Opt(d, "decel_mps2", c.driver.decel, dc);
    Opt(d, "line_of_sight_m", c.driver.line_of_sight, dc);
    Opt(d, "brake_onset_mps2", c.driver.brake_onset, dc);
    Opt(d, "arrival_margin_s", c.driver.arrival_margin, dc);
    Opt(d, "stop_tolerance_m", c.driver.stop_tolerance, dc);
  }
  if (doc.contains("split")) {
    const json& d = doc["split"];
    const std::string sc = ctx + "split.";
    Opt(d, "assist_threshold_nm", c.split.assist_threshold, sc);
    Opt(d, "regen_fraction", c.split.regen_fraction, sc);
    Opt(d, "soc_lo", c.split.soc_lo, sc);
    Opt(d, "soc_hi", c.split.soc_hi, sc);
    Opt(d, "charge_torque_nm", c.split.charge_torque, sc);
  }
  if (doc.contains("bench")) {
    Opt(doc["bench"], "reps", c.bench_reps, ctx + "bench.");
    Opt(doc["bench"], "warmup", c.bench_warmup, ctx + "bench.");
  }
  return c;
}

std::vector<std::string> ExperimentConfig::Validate() const {
  std::vector<std::string> warnings;
  if (route.empty()) throw ConfigError("config: no route file given");
  if (vehicle.empty()) throw ConfigError("config: no vehicle file given");
  for (const auto& p : [&] {
         std::vector<std::filesystem::path> all = {route, vehicle};
         all.insert(all.end(), bench_routes.begin(), bench_routes.end());
         return all;
       }()) {
    if (!std::filesystem::is_regular_file(p)) {
      throw ConfigError("file '" + p.string() + "' does not exist");
    }
  }
  const GridSizes& g = solver.grid;
  if (g.n_v == 0 || g.n_soc == 0 || g.n_t == 0 || g.n_eng == 0 || g.n_bsg == 0) {
    throw ConfigError("config.grid: all sizes must be positive");
  }
  if (!(solver.gamma >= 0.0 && solver.gamma <= 1.0)) {
    throw ConfigError("config.gamma must lie in [0, 1]");
  }
  if (solver.horizon_steps == 0) throw ConfigError("config.horizon_steps must be positive");
  if (!(solver.horizon_time > 0.0)) throw ConfigError("config.horizon_time_s must be positive");
  if (!(step > 0.0)) throw ConfigError("config.step_m must be positive");
  if (workers == 0) throw ConfigError("config.workers must be at least 1");
  if (!(solver.penalty.j_inf > 0.0)) throw ConfigError("config.penalty.j_inf must be positive");
  for (const auto& c : controllers) {
    if (c != "baseline" && c != "mpc") throw ConfigError("config.controllers: unknown '" + c + "'");
  }
  driver.Validate(0.0);
  split.Validate();
  return warnings;
}

TimingStats TimingStats::From(const std::vector<double>& xs) {
  TimingStats t;
  t.count = xs.size();
  if (xs.empty()) return t;
  double sum = 0.0;
  for (double x : xs) sum += x;
  t.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - t.mean) * (x - t.mean);
  t.variance = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  t.max = *std::max_element(xs.begin(), xs.end());
  return t;
}

RouteBundle TruncateRoute(const RouteBundle& b, std::size_t nodes) {
  RouteBundle out;
  const Route& r = b.route;
  nodes = std::min(nodes, r.node_count());
  out.route = r;
  out.route.v_min.resize(nodes);
  out.route.v_max.resize(nodes);
  out.route.grade.resize(nodes);
  out.route.traffic_lights.clear();
  out.route.stop_signs.clear();
  for (const auto& [node, id] : r.traffic_lights) {
    if (node < nodes) {
      out.route.traffic_lights[node] = id;
      if (!out.spat.Contains(id)) out.spat.Add(id, b.spat.Timing(id));
    }
  }
  for (std::size_t s : r.stop_signs) {
    if (s < nodes) out.route.stop_signs.insert(s);
  }
  return out;
}

StateVector StartState(const ExperimentConfig& cfg) {
  return {cfg.start_velocity, cfg.start_soc.value_or(cfg.solver.penalty.soc_target),
          cfg.start_time};
}

ControllerRun RunBaseline(const RouteBundle& bundle, const Powertrain& pt,
                          const ExperimentConfig& cfg) {
  ControllerRun run;
  run.route = bundle.route.name;
  BaselineController ctl(bundle, pt, cfg.driver, cfg.split);
  run.trajectory = SimulateClosedLoop(bundle, pt, ctl, StartState(cfg));
  run.compliance = CheckCompliance(run.trajectory, bundle, pt);
  return run;
}

ControllerRun RunMpc(const RouteBundle& bundle, const Powertrain& pt,
                     const ExperimentConfig& cfg,
                     std::shared_ptr<const TerminalCostField> terminal) {
  if (!terminal) {
    terminal = std::make_shared<const TerminalCostField>(
        BuildTerminalCost(bundle.route, pt, cfg.solver, cfg.workers));
  }
  MpcOptions opt;
  opt.settings = cfg.solver;
  opt.backend = cfg.backend;
  opt.workers = cfg.workers;
  opt.cross_check = cfg.cross_check;
  opt.record_digests = cfg.record_digests;
  opt.perturb_parallel_ties = cfg.perturb_parallel_ties;
  MpcController ctl(bundle, pt, opt, terminal);

  ControllerRun run;
  run.route = bundle.route.name;
  run.trajectory = SimulateClosedLoop(bundle, pt, ctl, StartState(cfg));
  for (auto& r : run.trajectory.records) r.backend = BackendName(cfg.backend);
  run.compliance = CheckCompliance(run.trajectory, bundle, pt);
  std::vector<double> ms;
  for (std::size_t i = 0; i + 1 < run.trajectory.records.size(); ++i) {
    if (!run.trajectory.records[i].fallback) ms.push_back(run.trajectory.records[i].solve_ms);
  }
  run.timing = TimingStats::From(ms);
  run.fallbacks = ctl.fallback_count();
  run.diffs = ctl.diffs();
  run.digests = ctl.digests();
  return run;
}

std::string SummaryJson(const std::vector<ControllerRun>& runs) {
  json doc;
  doc["route"] = runs.empty() ? std::string() : runs.front().route;
  doc["controllers"] = json::object();
  const ControllerRun* base = nullptr;
  const ControllerRun* mpc = nullptr;
  for (const auto& r : runs) {
    const auto& t = r.trajectory;
    const auto& c = r.compliance;
    doc["controllers"][t.controller] = {
        {"fuel_g", t.total_fuel},
        {"travel_time_s", t.TravelTime()},
        {"soc_start", t.SocStart()},
        {"soc_end", t.SocEnd()},
        {"nodes", t.records.size()},
        {"completed", t.completed},
        {"diagnostic", t.diagnostic},
        {"fallbacks", r.fallbacks},
        {"timing", TimingJson(r.timing)},
        {"compliance",
         {{"signal_crossings", c.signal_crossings},
          {"red_crossings", c.red_crossings},
          {"stop_sign_violations", c.stop_sign_violations},
          {"speed_violations", c.speed_violations},
          {"soc_violations", c.soc_violations},
          {"accel_violations", c.accel_violations}}},
    };
    if (t.controller == "baseline") base = &r;
    if (t.controller == "mpc") mpc = &r;
  }
  if (base != nullptr && mpc != nullptr && base->trajectory.total_fuel > 0.0 &&
      base->trajectory.TravelTime() > 0.0) {
    const double bf = base->trajectory.total_fuel;
    const double bt = base->trajectory.TravelTime();
    doc["comparison"] = {
        {"fuel_delta_pct", 100.0 * (mpc->trajectory.total_fuel - bf) / bf},
        {"time_delta_pct", 100.0 * (mpc->trajectory.TravelTime() - bt) / bt},
    };
  }
  return doc.dump(2) + "\n";
}

int CmdRun(const ExperimentConfig& cfg, std::ostream& out) {
  for (const auto& w : cfg.Validate()) out << "warning: " << w << '\n';
  const Loaded in = LoadInputs(cfg, cfg.route);
  const Route& route = in.bundle.route;
  const double v_top = *std::max_element(route.v_max.begin(), route.v_max.end());
  if (v_top > 0.0 &&
      cfg.solver.horizon_time < static_cast<double>(cfg.solver.horizon_steps) * cfg.step / v_top) {
    out << "warning: horizon_time_s is shorter than the horizon length at top speed\n";
  }
  std::vector<ControllerRun> runs;
  for (const auto& c : cfg.controllers) {
    runs.push_back(c == "mpc" ? RunMpc(in.bundle, in.pt, cfg) : RunBaseline(in.bundle, in.pt, cfg));
    const ControllerRun& r = runs.back();
    const std::string stem = route.name + "_" + c;
    std::ostringstream traj, timing;
    WriteTrajectoryCsv(traj, r.trajectory);
    WriteFile(cfg.out_dir / (stem + ".csv"), traj.str());
    if (c == "mpc") {
      WriteTimingCsv(timing, r.trajectory);
      WriteFile(cfg.out_dir / (stem + "_timing.csv"), timing.str());
      if (cfg.record_digests) {
        std::ostringstream d;
        for (auto h : r.digests) d << std::hex << h << '\n';
        WriteFile(cfg.out_dir / (stem + "_digests.txt"), d.str());
      }
    }
    PrintRun(out, r);
  }
  const std::string summary = SummaryJson(runs);
  WriteFile(cfg.out_dir / (route.name + "_summary.json"), summary);
  const json doc = json::parse(summary);
  if (doc.contains("comparison")) {
    out << "mpc vs baseline: fuel " << Fixed(doc["comparison"]["fuel_delta_pct"].get<double>(), 2)
        << " %, time " << Fixed(doc["comparison"]["time_delta_pct"].get<double>(), 2) << " %\n";
  }
  out << "wrote " << (cfg.out_dir / (route.name + "_summary.json")).string() << '\n';
  for (const auto& r : runs) {
    if (!r.trajectory.completed) return kExitInfeasible;
  }
  return kExitOk;
}

int CmdDiffBackends(const ExperimentConfig& cfg, std::ostream& out) {
  for (const auto& w : cfg.Validate()) out << "warning: " << w << '\n';
  const Loaded in = LoadInputs(cfg, cfg.route);
  ExperimentConfig c = cfg;
  c.cross_check = true;
  c.backend = Backend::kSerial;
  const ControllerRun run = RunMpc(in.bundle, in.pt, c);
  out << "node,max_abs_diff,policy_mismatches,start_action_equal\n";
  double worst = 0.0;
  std::size_t mismatches = 0;
  std::size_t start_diffs = 0;
  for (const auto& d : run.diffs) {
    out << d.node << ',' << d.max_abs_diff << ',' << d.policy_mismatches << ','
        << (d.start_action_equal ? 1 : 0) << '\n';
    worst = std::max(worst, d.max_abs_diff);
    mismatches += d.policy_mismatches;
    start_diffs += d.start_action_equal ? 0 : 1;
  }
  out << "steps " << run.diffs.size() << ", max |dJ| " << worst << ", policy mismatches "
      << mismatches << ", start-action differences " << start_diffs << ", workers "
      << cfg.workers << '\n';
  if (!run.trajectory.completed) return kExitInfeasible;
  return worst == 0.0 && mismatches == 0 && start_diffs == 0 ? kExitOk : kExitBackendsDiffer;
}

std::vector<BenchRow> BenchRoute(const RouteBundle& bundle, const Powertrain& pt,
                                 const ExperimentConfig& cfg) {
  const Route& route = bundle.route;
  const std::size_t n = route.node_count();
  const std::size_t h = cfg.solver.horizon_steps;
  if (n < h + 2) throw ConfigError("route '" + route.name + "' is shorter than one horizon");

  // Realistic start states: a baseline drive over the same route.
  const ControllerRun drive = RunBaseline(bundle, pt, cfg);
  std::vector<StateVector> states;
  std::vector<std::size_t> nodes;
  for (const auto& r : drive.trajectory.records) {
    if (r.node + h <= n - 1 && r.node + 1 < n) {
      states.push_back(r.state);
      nodes.push_back(r.node);
    }
  }
  const std::size_t total = cfg.bench_warmup + cfg.bench_reps;
  const auto terminal = std::make_shared<const TerminalCostField>(
      BuildTerminalCost(route, pt, cfg.solver, cfg.workers));
  const EcoDrivingModel model(pt, route);

  std::vector<BenchRow> rows;
  for (Backend b : {Backend::kSerial, Backend::kParallel}) {
    const std::size_t workers = b == Backend::kSerial ? 1 : cfg.workers;
    std::vector<double> ms;
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t k = total > 1 ? i * (states.size() - 1) / (total - 1) : 0;
      const HorizonProblem p =
          MakeHorizonProblem(bundle, model, *terminal, nodes[k], states[k].t, cfg.solver);
      const double t0 = NowMs();
      try {
        if (b == Backend::kSerial) {
          (void)SolveHorizon(states[k], p);
        } else {
          (void)SolveHorizonParallel(states[k], p, workers);
        }
      } catch (const StartStateInfeasible&) {
        // The backward pass ran in full; its time still counts.
      }
      const double dt = NowMs() - t0;
      if (i >= cfg.bench_warmup) ms.push_back(dt);
    }
    rows.push_back({route.name, BackendName(b), workers, TimingStats::From(ms)});
  }
  return rows;
}

std::string MachineInfo() {
  std::ostringstream os;
  os << "hardware threads " << std::thread::hardware_concurrency() << ", OpenMP procs "
     << omp_get_num_procs() << ", compiler "
#if defined(__clang__)
     << "clang " << __clang_version__
#elif defined(__GNUC__)
     << "gcc " << __VERSION__
#else
     << "unknown"
#endif
#ifdef NDEBUG
     << ", optimized build";
#else
     << ", debug build";
#endif
  return os.str();
}

void WriteBenchTable(std::ostream& os, const std::vector<BenchRow>& rows,
                     const ExperimentConfig& cfg) {
  std::vector<std::string> routes;
  for (const auto& r : rows) {
    if (std::find(routes.begin(), routes.end(), r.route) == routes.end()) routes.push_back(r.route);
  }
  const GridSizes& g = cfg.solver.grid;
  os << "Solver time comparison (ms); grid " << g.n_v << "x" << g.n_soc << "x" << g.n_t
     << ", actions " << g.n_eng << "x" << g.n_bsg << ", N_H " << cfg.solver.horizon_steps
     << ", reps " << cfg.bench_reps << " (+" << cfg.bench_warmup << " warm-up)\n";
  os << "machine: " << MachineInfo() << "\n";
  char buf[64];
  os << std::string(10, ' ');
  for (const auto& r : routes) {
    std::snprintf(buf, sizeof(buf), "| %-29s", r.c_str());
    os << buf;
  }
  os << "\n" << std::string(10, ' ');
  for (std::size_t i = 0; i < routes.size(); ++i) {
    for (const auto& r : rows) {
      if (r.route != routes[i]) continue;
      const std::string name = r.backend + "(" + std::to_string(r.workers) + ")";
      std::snprintf(buf, sizeof(buf), "| %-13s", name.c_str());
      os << buf;
    }
  }
  os << "\n";
  const char* labels[] = {"mean", "variance", "maximum"};
  for (int k = 0; k < 3; ++k) {
    std::snprintf(buf, sizeof(buf), "%-10s", labels[k]);
    os << buf;
    for (const auto& route : routes) {
      for (const auto& r : rows) {
        if (r.route != route) continue;
        const double v = k == 0 ? r.stats.mean : k == 1 ? r.stats.variance : r.stats.max;
        std::snprintf(buf, sizeof(buf), "| %13.3f", v);
        os << buf;
      }
    }
    os << "\n";
  }
}

void WriteBenchCsv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "route,backend,workers,reps,mean_ms,variance_ms2,max_ms\n";
  for (const auto& r : rows) {
    os << r.route << ',' << r.backend << ',' << r.workers << ',' << r.stats.count << ','
       << Fixed(r.stats.mean, 6) << ',' << Fixed(r.stats.variance, 6) << ','
       << Fixed(r.stats.max, 6) << '\n';
  }
}

int CmdBench(const ExperimentConfig& cfg, std::ostream& out) {
  for (const auto& w : cfg.Validate()) out << "warning: " << w << '\n';
  if (cfg.bench_reps < 30) throw ConfigError("bench needs at least 30 repetitions");
  std::vector<std::filesystem::path> routes = cfg.bench_routes;
  if (routes.empty()) routes.push_back(cfg.route);
  std::vector<BenchRow> rows;
  for (const auto& r : routes) {
    const Loaded in = LoadInputs(cfg, r);
    const auto got = BenchRoute(in.bundle, in.pt, cfg);
    rows.insert(rows.end(), got.begin(), got.end());
  }
  WriteBenchTable(out, rows, cfg);
  std::ostringstream csv;
  WriteBenchCsv(csv, rows);
  WriteFile(cfg.out_dir / "bench.csv", csv.str());
  out << "wrote " << (cfg.out_dir / "bench.csv").string() << '\n';
  return kExitOk;
}

int CmdMakeFixtures(const std::filesystem::path& dir, std::uint64_t seed, std::ostream& out) {
  WriteFixtureFiles(dir, seed);
  out << "wrote vehicle.json and routes/{urban,mixed,redwall}.json under " << dir.string()
      << " (seed " << seed << ")\n";
  return kExitOk;
}

}  // namespace ecodrive
