// Copyright 2026 The sdnlw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sdnlw/besov.hpp"
#include "sdnlw/dynamics.hpp"
#include "sdnlw/error.hpp"
#include "sdnlw/functionals.hpp"
#include "sdnlw/gaussian.hpp"
#include "sdnlw/lab.hpp"
#include "sdnlw/snapshot.hpp"

namespace sdnlw::cli {
namespace {

std::vector<OptionSpec> lab_options(const std::string& N, const std::string& dt, const std::string& T,
                                    const std::string& samples) {
  return {
      {"s", "regularity parameter s", "1"},
      {"N", "Galerkin cutoff", N},
      {"dt", "time step", dt},
      {"T", "horizon", T},
      {"samples", "Monte Carlo sample count", samples},
      {"seed", "master seed", "1"},
      {"threads", "worker threads", "1"},
  };
}

std::vector<OptionSpec> join(std::vector<OptionSpec> a, const std::vector<OptionSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

LabConfig lab_config(const Params& p) {
  LabConfig c;
  c.s = p.real("s");
  c.N = static_cast<int>(p.integer("N"));
  c.dt = p.real("dt");
  c.T = p.real("T");
  c.samples = p.count("samples");
  c.seed = p.count("seed");
  c.threads = static_cast<int>(p.integer("threads"));
  c.validate();
  return c;
}

std::string csv_real(double x) { return format_real(x); }

std::vector<std::vector<std::string>> report_rows(const std::vector<EstimatorReport>& reps) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reps) {
    rows.push_back({r.name, csv_real(r.mean), csv_real(r.stderr_), std::to_string(r.count), csv_real(r.ess)});
  }
  return rows;
}

void write_reports(OutputDir& dir, const std::string& stem, const std::vector<EstimatorReport>& reps) {
  std::vector<Json> lines;
  for (const auto& r : reps) lines.push_back(report_json(r));
  dir.write_jsonl(stem + ".jsonl", lines);
  dir.write_csv(stem + ".csv", {"name", "mean", "stderr", "count", "ess"}, report_rows(reps));
}

Json record(std::uint64_t seed, std::uint64_t sample, double t, const std::string& name, double value) {
  Json j;
  j["seed"] = seed;
  j["sample"] = sample;
  j["t"] = t;
  j["name"] = name;
  j["value"] = value;
  return j;
}

std::vector<int> dyadic_up_to(int lo, int hi) {
  std::vector<int> out;
  for (int n = std::max(lo, 1); n <= hi; n *= 2) out.push_back(n);
  if (out.empty()) throw ValidationError("empty dyadic range");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_sample_mu(const Params& p, OutputDir& dir, std::ostream& out) {
  const MeasureSpec spec{p.real("s"), static_cast<int>(p.integer("N"))};
  spec.validate();
  const std::uint64_t seed = p.count("seed"), count = p.count("count");
  const int threads = static_cast<int>(p.integer("threads"));
  std::vector<PhaseState> xs(count);
  parallel_for(count, threads, [&](std::uint64_t i) {
    xs[i] = sample_mu(spec, RngStream(seed, i, StreamPurpose::initial_data));
  });
  std::ostringstream bin;
  std::vector<Json> lines;
  for (std::uint64_t i = 0; i < count; ++i) {
    write_state(bin, xs[i], spec.s);
    lines.push_back(record(seed, i, 0.0, "G", gaussian_energy(xs[i], spec.s, spec.N)));
    lines.push_back(record(seed, i, 0.0, "H", hamiltonian(xs[i], spec.N)));
    lines.push_back(record(seed, i, 0.0, "u_sup", lp_norm(xs[i].u, std::numeric_limits<double>::infinity())));
  }
  dir.write("samples.bin", bin.str());
  dir.write_jsonl("samples.jsonl", lines);
  out << "wrote " << count << " samples to " << dir.path().string() << "\n";
  return 0;
}

int cmd_evolve(const Params& p, OutputDir& dir, std::ostream& out) {
  FlowConfig cfg;
  cfg.s = p.real("s");
  cfg.N = static_cast<int>(p.integer("N"));
  cfg.storage_cutoff = static_cast<int>(p.integer("storage_cutoff"));
  cfg.dt = p.real("dt");
  cfg.T = p.real("T");
  cfg.splitting = parse_splitting(p.str("splitting"));
  cfg.cubic = p.flag("cubic");
  cfg.noise = p.flag("noise");
  cfg.damped = p.flag("damped");
  cfg.validate();
  const std::uint64_t seed = p.count("seed"), count = p.count("count"), every = p.count("snapshot_every");
  const int threads = static_cast<int>(p.integer("threads"));
  const int store = cfg.store_cutoff();
  std::optional<PhaseState> given;
  if (p.has("in")) given = load_state(p.str("in")).resized(store);
  const TruncatedFlow flow(cfg);

  struct Trajectory {
    std::string snapshots;
    std::vector<Json> records;
    double h_final = 0.0;
  };
  std::vector<Trajectory> runs(count);
  parallel_for(count, threads, [&](std::uint64_t i) {
    const PhaseState x0 = given ? *given : sample_mu({cfg.s, store}, RngStream(seed, i, StreamPurpose::initial_data));
    Trajectory& tr = runs[i];
    std::ostringstream bin;
    auto observe = [&](std::uint64_t, double t, const PhaseState& x) {
      tr.records.push_back(record(seed, i, t, "H", hamiltonian(x, cfg.N)));
      tr.records.push_back(record(seed, i, t, "E", gaussian_energy(x, cfg.s, cfg.N) + r_potential(x.u, cfg.s, cfg.N)));
      tr.records.push_back(record(seed, i, t, "u_sup", lp_norm(x.u, std::numeric_limits<double>::infinity())));
      if (every > 0) write_state(bin, x, cfg.s);
    };
    PhaseState end;
    try {
      end = flow.evolve(x0, RngStream(seed, i, StreamPurpose::noise), observe, every);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.step(), "sample " + std::to_string(i) + ": " + e.what());
    }
    if (every == 0) write_state(bin, end, cfg.s);
    tr.snapshots = bin.str();
    tr.h_final = hamiltonian(end, cfg.N);
  });
  std::vector<Json> lines;
  std::vector<std::vector<std::string>> rows;
  for (std::uint64_t i = 0; i < count; ++i) {
    dir.write("trajectory_" + std::to_string(i) + ".bin", runs[i].snapshots);
    lines.insert(lines.end(), runs[i].records.begin(), runs[i].records.end());
    rows.push_back({std::to_string(i), std::to_string(cfg.steps()), csv_real(cfg.horizon()), csv_real(runs[i].h_final)});
  }
  dir.write_jsonl("observables.jsonl", lines);
  dir.write_csv("summary.csv", {"sample", "steps", "horizon", "H_final"}, rows);
  out << "evolved " << count << " trajectories over " << cfg.steps() << " steps (T = " << format_real(cfg.horizon())
      << ")\n";
  return 0;
}

int cmd_functionals(const Params& p, OutputDir& dir, std::ostream& out) {
  SnapshotHeader h;
  const PhaseState x = load_state(p.str("in"), &h);
  const double s = p.has("s") ? p.real("s") : h.s;
  const int N = p.has("N") ? static_cast<int>(p.integer("N")) : x.cutoff();
  if (N < 0 || N > x.cutoff()) throw ValidationError("--N must lie in [0, cutoff of the state]");
  const FunctionalReport r = energy(x, s, N);
  Json j;
  j["s"] = r.s;
  j["N"] = r.N;
  j["sigma_N"] = r.sigma_N;
  j["H"] = r.H;
  j["R"] = r.R;
  j["G"] = r.G;
  j["E_mod"] = r.E_mod;
  j["E"] = r.E;
  j["bracket"] = r.bracket;
  dir.write("functionals.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_bracket_check(const Params& p, OutputDir& dir, std::ostream& out) {
  const int trials = static_cast<int>(p.integer("trials"));
  const auto res = bracket_flow_check(p.real("s"), static_cast<int>(p.integer("N")), p.real("dt"), trials,
                                      p.count("seed"));
  std::vector<std::vector<std::string>> rows;
  double worst = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    rows.push_back({std::to_string(i), csv_real(res[i].fd_rate), csv_real(res[i].bracket), csv_real(res[i].rel_error)});
    worst = std::max(worst, res[i].rel_error);
  }
  dir.write_csv("bracket.csv", {"trial", "fd_rate", "bracket", "rel_error"}, rows);
  out << "max relative error " << format_real(worst) << " over " << trials << " trials\n";
  return 0;
}

int cmd_besov(const Params& p, OutputDir& dir, std::ostream& out) {
  SnapshotHeader h;
  const SpectralField f = load_field(p.str("in"), &h);
  const double alpha = p.real("alpha"), pp = p.real("p"), q = p.real("q");
  const double value = besov_norm(f, alpha, pp, q);
  Json j;
  j["alpha"] = alpha;
  j["p"] = format_real(pp);
  j["q"] = format_real(q);
  j["N"] = f.cutoff();
  j["value"] = value;
  dir.write("besov.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_commutator_sweep(const Params& p, OutputDir& dir, std::ostream& out) {
  LabConfig c;
  c.s = p.real("s");
  c.samples = p.count("samples");
  c.seed = p.count("seed");
  c.threads = static_cast<int>(p.integer("threads"));
  c.validate();
  const auto Ns = dyadic_up_to(static_cast<int>(p.integer("Nmin")), static_cast<int>(p.integer("Nmax")));
  const auto reps = commutator_sweep(c, p.real("eps"), Ns);
  std::vector<Json> lines;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    lines.push_back(report_json(reps[i]));
    rows.push_back({std::to_string(Ns[i]), csv_real(reps[i].mean), csv_real(reps[i].extras.at("max"))});
  }
  dir.write_jsonl("commutator.jsonl", lines);
  dir.write_csv("commutator.csv", {"N", "ratio_mean", "ratio_max"}, rows);
  out << "commutator sweep over " << Ns.size() << " cutoffs\n";
  return 0;
}

int cmd_invariance(const Params& p, OutputDir& dir, std::ostream& out) {
  const LabConfig c = lab_config(p);
  const InvarianceResult r = linear_invariance_test(c);
  std::vector<Json> lines;
  std::vector<std::vector<std::string>> rows;
  for (const auto& st : r.stats) {
    EstimatorReport rep;
    rep.name = st.statistic + "[" + std::to_string(st.n.n1) + "," + std::to_string(st.n.n2) + "]";
    rep.mean = st.estimate;
    rep.stderr_ = st.stderr_;
    rep.count = r.count;
    rep.ess = static_cast<double>(r.count);
    rep.metadata = c.metadata();
    rep.extras["target"] = st.target;
    rep.extras["z"] = st.z;
    lines.push_back(report_json(rep));
    rows.push_back({st.statistic, std::to_string(st.n.n1), std::to_string(st.n.n2), csv_real(st.estimate),
                    csv_real(st.target), csv_real(st.stderr_), csv_real(st.z)});
  }
  EstimatorReport summary;
  summary.name = "invariance_summary";
  summary.mean = r.variance_within;
  summary.count = r.count;
  summary.ess = static_cast<double>(r.count);
  summary.metadata = c.metadata();
  summary.extras = {{"variance_within", r.variance_within}, {"cross_within", r.cross_within},
                    {"cross_max_abs_z", r.cross_max_abs_z}, {"drift_within", r.drift_within},
                    {"max_abs_z", r.max_abs_z},             {"bonferroni_z", r.bonferroni_z},
                    {"horizon", r.horizon}};
  lines.push_back(report_json(summary));
  dir.write_jsonl("invariance.jsonl", lines);
  dir.write_csv("invariance.csv", {"statistic", "n1", "n2", "estimate", "target", "stderr", "z"}, rows);
  out << "variance |z|<=3 fraction " << format_real(r.variance_within) << ", cross " << format_real(r.cross_within)
      << "\n";
  return 0;
}

int cmd_partition(const Params& p, OutputDir& dir, std::ostream& out) {
  const EstimatorReport r = partition_estimate(lab_config(p), p.flag("zero_potential"));
  write_reports(dir, "partition", {r});
  out << "Z = " << format_real(r.mean) << " +- " << format_real(r.stderr_) << " (log Z = "
      << format_real(r.extras.at("log_Z")) << ")\n";
  return 0;
}

int cmd_bd_bound(const Params& p, OutputDir& dir, std::ostream& out) {
  BdConfig c;
  c.lab = lab_config(p);
  c.ascent_steps = static_cast<int>(p.integer("ascent_steps"));
  c.step_size = p.real("step_size");
  c.ceiling = p.real("ceiling");
  const std::string f = p.str("functional");
  if (f == "r") {
    c.functional = BdFunctional::r_potential;
  } else if (f == "quadratic") {
    c.functional = BdFunctional::quadratic;
  } else {
    throw ValidationError("--functional must be r or quadratic");
  }
  const BdResult r = bd_bound(c);
  std::vector<EstimatorReport> reps{r.rhs};
  if (c.functional == BdFunctional::r_potential) reps.push_back(r.lhs);
  write_reports(dir, "bd", reps);
  out << "rhs " << format_real(r.rhs.mean) << " +- " << format_real(r.rhs.stderr_)
      << (c.functional == BdFunctional::quadratic
              ? ", closed-form error " + format_real(r.closed_form_max_error)
              : ", log Z " + format_real(r.lhs.extras.at("log_Z")))
      << "\n";
  return 0;
}

int cmd_density_check(const Params& p, OutputDir& dir, std::ostream& out) {
  DensityConfig c;
  c.lab = lab_config(p);
  c.observables = p.str_list("observables");
  c.nonlinear = p.flag("nonlinear");
  c.ess_floor = p.real("ess_floor");
  const DensityResult r = density_derivative_check(c);
  std::vector<EstimatorReport> reps;
  for (const auto& o : r.observables) {
    EstimatorReport rep;
    rep.name = o.observable;
    rep.mean = o.D;
    rep.stderr_ = o.D_se;
    rep.count = r.count;
    rep.ess = r.ess;
    rep.metadata = c.lab.metadata();
    rep.extras = {{"D_t", o.D_t},       {"D_half", o.D_half},   {"B", o.B},
                  {"B_se", o.B_se},     {"diff", o.diff},       {"diff_se", o.diff_se},
                  {"combined", o.combined}, {"within", o.within ? 1.0 : 0.0}};
    reps.push_back(rep);
  }
  write_reports(dir, "density", reps);
  for (const auto& o : r.observables) {
    out << o.observable << ": D = " << format_real(o.D) << ", B = " << format_real(o.B) << ", |D - B| / combined = "
        << format_real(o.combined > 0 ? std::abs(o.diff) / o.combined : 0.0) << "\n";
  }
  return 0;
}

int cmd_qi_scan(const Params& p, OutputDir& dir, std::ostream& out) {
  QIConfig c;
  c.lab = lab_config(p);
  c.nonlinear = p.flag("nonlinear");
  c.significance = p.real("significance");
  const QIResult r = quasi_invariance_scan(c);
  std::vector<Json> lines;
  std::vector<std::vector<std::string>> rows;
  for (const auto& st : r.stats) {
    Json j;
    j["ensemble"] = st.ensemble;
    j["coordinate"] = st.coordinate;
    j["ks"] = st.ks;
    j["ks_critical"] = st.ks_critical;
    j["mean_z"] = st.mean_z;
    j["variance_ratio"] = st.variance_ratio;
    lines.push_back(j);
    rows.push_back({st.ensemble, st.coordinate, csv_real(st.ks), csv_real(st.ks_critical), csv_real(st.mean_z),
                    csv_real(st.variance_ratio)});
  }
  dir.write_jsonl("qi.jsonl", lines);
  dir.write_csv("qi.csv", {"ensemble", "coordinate", "ks", "ks_critical", "mean_z", "variance_ratio"}, rows);
  out << "max KS " << format_real(r.max_ks) << ", ESS " << format_real(r.ess)
      << (r.all_finite ? "" : ", non-finite statistics") << "\n";
  return 0;
}

int cmd_kr_check(const Params& p, OutputDir& dir, std::ostream& out) {
  const LabConfig c = lab_config(p);
  const std::vector<int> grid = p.has("M") ? p.int_list("M") : dyadic_up_to(1, c.N);
  const EstimatorReport r = kr_scan(c, p.real("alpha"), grid, p.real("R"));
  write_reports(dir, "kr", {r});
  out << "K_R value median " << format_real(r.extras.at("q50")) << ", member fraction "
      << format_real(r.extras.at("member_fraction")) << "\n";
  return 0;
}

int cmd_selftest(const Params& p, OutputDir& dir, std::ostream& out) {
  return run_selftest(p.flag("quick"), dir, out) == 0 ? 0 : 3;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> table = [] {
    std::vector<Command> t;
    t.push_back({"sample-mu",
                 "draw samples of the Gaussian measure mu_{s,N}",
                 {{"s", "regularity parameter s", "1"},
                  {"N", "Galerkin cutoff", "8"},
                  {"seed", "master seed", "1"},
                  {"count", "number of samples", "1"},
                  {"threads", "worker threads", "1"}},
                 cmd_sample_mu});
    t.push_back({"evolve",
                 "run the truncated stochastic flow",
                 {{"s", "regularity parameter s", "1"},
                  {"N", "Galerkin cutoff", "8"},
                  {"storage-cutoff", "stored cutoff (-1: N)", "-1"},
                  {"dt", "time step", "0.01"},
                  {"T", "horizon", "1"},
                  {"seed", "master seed", "1"},
                  {"count", "number of trajectories", "1"},
                  {"splitting", "lie or strang", "strang"},
                  {"snapshot-every", "snapshot and observe every k steps (0: final state only)", "0"},
                  {"no-cubic", "disable the cubic term", "true", OptionKind::set_false, "cubic"},
                  {"no-noise", "disable the forcing", "true", OptionKind::set_false, "noise"},
                  {"undamped", "undamped noise-free test flow", "true", OptionKind::set_false, "damped"},
                  {"in", "initial state snapshot (default: sample mu)", std::nullopt},
                  {"threads", "worker threads", "1"}},
                 cmd_evolve});
    t.push_back({"functionals",
                 "evaluate H, R, E and the bracket on a stored state",
                 {{"in", "state snapshot", std::nullopt},
                  {"s", "regularity parameter (default: from the snapshot)", std::nullopt},
                  {"N", "cutoff (default: that of the state)", std::nullopt}},
                 cmd_functionals});
    t.push_back({"bracket-check",
                 "finite-difference energy rate against the bracket",
                 {{"s", "regularity parameter s", "1"},
                  {"N", "Galerkin cutoff", "8"},
                  {"dt", "time step", "1e-4"},
                  {"trials", "number of random states", "20"},
                  {"seed", "master seed", "1"}},
                 cmd_bracket_check});
    t.push_back({"besov",
                 "Besov norm of a stored field",
                 {{"in", "field or state snapshot (u block)", std::nullopt},
                  {"alpha", "regularity", "0"},
                  {"p", "integrability (inf allowed)", "2"},
                  {"q", "summability (inf allowed)", "2"}},
                 cmd_besov});
    t.push_back({"commutator-sweep",
                 "commutator ratio over dyadic cutoffs",
                 {{"s", "regularity parameter s", "1"},
                  {"eps", "Holder loss", "0.2"},
                  {"Nmin", "smallest cutoff", "8"},
                  {"Nmax", "largest cutoff", "128"},
                  {"samples", "samples per cutoff", "20"},
                  {"seed", "master seed", "1"},
                  {"threads", "worker threads", "1"}},
                 cmd_commutator_sweep});
    t.push_back({"invariance", "linear invariance test", lab_options("16", "0.05", "5", "1000"), cmd_invariance});
    t.push_back({"partition",
                 "partition function estimate",
                 join(lab_options("8", "0.05", "1", "1000"),
                      {{"zero-potential", "force R = 0", "false", OptionKind::set_true}}),
                 cmd_partition});
    t.push_back({"bd-bound",
                 "Boue-Dupuis variational bound",
                 join(lab_options("8", "0.05", "1", "200"),
                      {{"ascent-steps", "gradient ascent steps", "200"},
                       {"step-size", "initial ascent step", "0.5"},
                       {"ceiling", "divergence ceiling", "1e8"},
                       {"functional", "r or quadratic", "r"}}),
                 cmd_bd_bound});
    t.push_back({"density-check",
                 "short-time density derivative against the bracket",
                 join(lab_options("4", "1e-3", "0.04", "1000"),
                      {{"observables", "comma-separated observable names", "one,uv0,uv10"},
                       {"linear", "disable the cubic term", "true", OptionKind::set_false, "nonlinear"},
                       {"ess-floor", "minimum ESS fraction", "0.01"}}),
                 cmd_density_check});
    t.push_back({"qi-scan",
                 "quasi-invariance statistics",
                 join(lab_options("8", "0.05", "1", "1000"),
                      {{"linear", "disable the cubic term", "true", OptionKind::set_false, "nonlinear"},
                       {"significance", "test level", "1e-3"}}),
                 cmd_qi_scan});
    t.push_back({"kr-check",
                 "K_R membership diagnostics",
                 join(lab_options("8", "0.05", "1", "1000"),
                      {{"alpha", "Holder exponent (< s)", "0.8"},
                       {"M", "comma-separated M grid (default: dyadic up to N)", std::nullopt},
                       {"R", "radius", "inf"}}),
                 cmd_kr_check});
    t.push_back({"selftest",
                 "built-in checks",
                 {{"quick", "trivial tier only", "false", OptionKind::set_true}},
                 cmd_selftest});
    return t;
  }();
  return table;
}

}  // namespace sdnlw::cli
