#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>

#include "anyon/fields.hpp"
#include "anyon/lab.hpp"
#include "anyon/observables.hpp"
#include "anyon/verify.hpp"
#include "json.hpp"

namespace anyon::lab {

using nlohmann::json;

namespace {

constexpr const char* kFftConvention =
    "forward unnormalized, inverse scaled by 1/n^2; wavenumbers 2 pi m / L with m in [-n/2, n/2); "
    "free-space convolution on the zero-padded (2n)^2 grid";

struct Outcome {
  int exit_code = 0;
  std::string message = "ok";
  json summary = json::object();
};

WaveField initial_field(const RunConfig& c) {
  if (c.initial.kind == InitialCondition::Kind::File) {
    WaveField u = ArtifactStore::load_field(c.initial.path);
    require_same_grid(u.grid, c.grid, "initial field");
    return u;
  }
  WaveField u = c.initial.kind == InitialCondition::Kind::GaussianSum
                    ? gaussian_sum(c.grid, c.initial.packets, c.initial.weights, 0.0)
                    : gaussian(c.grid, c.initial.gaussian);
  normalize(u);
  return u;
}

// Exact free evolution of a packet initial condition, normalized like initial_field.
std::optional<WaveField> free_solution(const RunConfig& c, double t) {
  std::vector<GaussianSpec> packets{c.initial.gaussian};
  std::vector<double> weights{1.0};
  if (c.initial.kind == InitialCondition::Kind::File) return std::nullopt;
  if (c.initial.kind == InitialCondition::Kind::GaussianSum) {
    packets = c.initial.packets;
    weights = c.initial.weights;
  }
  const double scale = 1.0 / norm(gaussian_sum(c.grid, packets, weights, 0.0));
  WaveField u = gaussian_sum(c.grid, packets, weights, t);
  for (auto& z : u.data) z *= scale;
  return u;
}

json report_json(const InequalityReport& r) {
  json j{{"id", r.id},         {"samples", r.samples}, {"worst_margin", r.worst_margin},
         {"tolerance", r.tolerance}, {"seed", r.seed}, {"pass", r.pass}};
  j["fitted_constant"] = r.fitted_constant ? json(*r.fitted_constant) : json(nullptr);
  json by_r = json::array();
  for (const auto& [R, C] : r.fitted_by_radius) by_r.push_back({{"R", R}, {"C", C}});
  j["fitted_by_radius"] = by_r;
  j["parameters"] = r.parameters;
  return j;
}

Outcome run_evolve(const RunConfig& c, const ArtifactStore& store) {
  const WaveField u0 = initial_field(c);
  CssParams p = c.params;
  p.keep_snapshots = false;
  const Trajectory traj = evolve(u0, p);

  std::vector<std::string> rows;
  for (const auto& d : traj.diagnostics) rows.push_back(to_csv(d));
  store.write_csv("diagnostics.csv", diagnostics_csv_header(), rows);
  store.save_field("u_final", traj.final_state);

  Outcome out;
  out.summary = {{"final_time", traj.times.empty() ? 0.0 : traj.times.back()},
                 {"max_mass_drift", traj.max_mass_drift},
                 {"max_energy_drift", traj.max_energy_drift},
                 {"boundary_flagged", traj.boundary_flagged},
                 {"h1_bound_violated", traj.h1_bound_violated},
                 {"h2_growth_flagged", traj.h2_growth_flagged}};
  if (p.beta == 0.0 && p.g == 0.0) {
    if (const auto exact = free_solution(c, p.T)) out.summary["free_flow_error"] = l2_distance(traj.final_state, *exact);
  }
  std::vector<std::string> problems;
  if (traj.max_mass_drift > c.monitors.mass_drift_limit) problems.push_back("mass drift above limit");
  if (traj.max_energy_drift > c.monitors.energy_drift_limit) problems.push_back("energy drift above limit");
  if (traj.boundary_flagged) problems.push_back("mass reached the boundary frame");
  if (!problems.empty()) {
    out.exit_code = 4;
    out.message = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) out.message += "; " + problems[i];
  }
  return out;
}

Outcome run_sweep(const RunConfig& c, const ArtifactStore& store) {
  const WaveField u0 = initial_field(c);
  const ConvergenceTable t = sweep_R(c.params, c.sweep.radii, u0, c.sweep.reference_R, c.threads);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < t.radii.size(); ++i) {
    rows.push_back(format_double(t.radii[i]) + "," + format_double(t.sup_errors[i]) + "," +
                   format_double(t.energy_gaps[i]));
  }
  store.write_csv("sweep_R.csv", "R,sup_error,energy_gap", rows);
  Outcome out;
  out.summary = {{"reference_R", t.reference_radius},
                 {"error_slope", t.error_slope},
                 {"gap_slope", t.gap_slope},
                 {"radii", t.radii},
                 {"sup_errors", t.sup_errors},
                 {"energy_gaps", t.energy_gaps}};
  return out;
}

Outcome run_manybody_dynamics(const RunConfig& c, const ArtifactStore& store) {
  const WaveField phi0 = initial_field(c);
  const auto& mb = c.manybody;

  CssParams p = c.params;
  p.sample_every = static_cast<int>(std::lround(mb.dt / p.dt));
  p.keep_snapshots = true;
  const KernelSpectrum kspec(c.grid, p.R);
  const Trajectory traj = evolve(phi0, p, kspec);

  ManyBodyOptions opts;
  opts.displacement = mb.displacement;
  opts.dimension_budget = mb.budget;
  const ManyBodyOperator H = build_hamiltonian(mb.N, c.grid, p.beta, p.R, opts);
  const ManyBodyState psi0 = tensor_power(phi0, mb.N);
  const double E0 = H.expectation(psi0);

  PropagationOptions popts;
  popts.krylov_dim = mb.krylov_dim;
  popts.tolerance = mb.tolerance;

  std::vector<std::string> rows;
  double max_drift = 0.0, max_depletion = 0.0, worst_distance_margin = -1e300;
  std::size_t idx = 0;
  ManyBodyState last;
  const PropagationStats stats = propagate(
      psi0, H, p.T, mb.dt,
      [&](double t, const ManyBodyState& psi) {
        if (idx >= traj.snapshots.size()) throw Error(ErrorKind::Invariant, "mean-field samples out of step");
        const WaveField& phi = traj.snapshots[idx++];
        const CondensateObservables obs = mn_observables(psi, phi);
        const DepletionReport dep = depletion_and_distance(rdm1(psi), phi);
        const double e = H.expectation(psi);
        const double e_per = e / mb.N;
        const double gap = energy_gap_manybody(psi, H, phi);
        max_drift = std::max(max_drift, std::abs(e - E0) / std::abs(E0));
        max_depletion = std::max(max_depletion, dep.depletion);
        worst_distance_margin = std::max(worst_distance_margin,
                                         dep.trace_distance - std::sqrt(8.0 * std::max(dep.depletion, 0.0)));
        rows.push_back(format_double(t) + "," + format_double(dep.depletion) + "," + format_double(obs.m_half) +
                       "," + format_double(obs.grad_q1_norm) + "," + format_double(e_per) + "," +
                       format_double(gap) + "," + format_double(dep.trace_distance));
        last = psi;
      },
      popts);

  store.write_csv("diagnostics.csv", "t,E1,M_N,grad_q1_norm,E_N,gap,trace_distance", rows);
  std::vector<std::string> css_rows;
  for (const auto& d : traj.diagnostics) css_rows.push_back(to_csv(d));
  store.write_csv("mean_field.csv", diagnostics_csv_header(), css_rows);
  store.save_state("psi_final", last);
  store.save_field("phi_final", traj.final_state);

  Outcome out;
  out.summary = {{"N", mb.N},
                 {"dimension", psi0.dim()},
                 {"max_energy_drift", max_drift},
                 {"max_depletion", max_depletion},
                 {"trace_distance_margin", worst_distance_margin},
                 {"substeps", stats.substeps},
                 {"operator_applications", stats.operator_applications},
                 {"max_error_estimate", stats.max_error_estimate},
                 {"max_norm_drift", stats.max_norm_drift}};
  if (max_drift > c.monitors.manybody_energy_drift_limit) {
    out.exit_code = 4;
    out.message = "many-body energy drift above limit";
  }
  return out;
}

Outcome run_manybody_gap(const RunConfig& c, const ArtifactStore& store) {
  const WaveField phi = initial_field(c);
  const auto& mb = c.manybody;
  const KernelSpectrum kspec(c.grid, c.params.R);
  const double e_af = energy_af(phi, c.params.beta, kspec).total;
  std::vector<std::string> rows;
  json entries = json::array();
  for (int N : mb.particle_numbers) {
    ManyBodyOptions opts;
    opts.displacement = mb.displacement;
    opts.dimension_budget = mb.budget;
    const ManyBodyOperator H = build_hamiltonian(N, c.grid, c.params.beta, c.params.R, opts);
    const ManyBodyState psi = tensor_power(phi, N);
    const double e_per = H.expectation(psi) / N;
    const double gap = std::abs(e_per - e_af);
    rows.push_back(std::to_string(N) + "," + format_double(e_per) + "," + format_double(e_af) + "," +
                   format_double(gap));
    entries.push_back({{"N", N}, {"E_N", e_per}, {"gap", gap}});
  }
  store.write_csv("gap_scaling.csv", "N,E_N,E_af,gap", rows);
  Outcome out;
  out.summary = {{"E_af", e_af}, {"entries", entries}};
  return out;
}

Outcome run_verify(const RunConfig& c, const ArtifactStore& store) {
  const auto& v = c.verify;
  std::vector<InequalityReport> reports;
  auto add = [&](std::vector<InequalityReport> more) {
    for (auto& r : more) reports.push_back(std::move(r));
  };
  for (const std::string& check : v.checks) {
    if (check == "kernel-norms") {
      reports.push_back(check_kernel_norms({3.0, 4.0, 6.0}, {0.1, 0.5, 1.0}));
    } else if (check == "gauge-oracle") {
      reports.push_back(check_gauge_oracle(c.grid, c.initial.gaussian.sigma));
    } else if (check == "two-body") {
      add(check_two_body_forms(v.two_body_grid, v.radii, v.samples, c.seed));
    } else if (check == "three-body") {
      for (double r : v.radii) add(check_three_body_positivity(v.three_body_grid, SmearingRadius(r), v.samples, c.seed));
    } else if (check == "gauge-bounds") {
      TestFunctionSampler sampler(c.grid, c.seed);
      add(check_gauge_bounds(sampler, c.params.R, c.params.beta, v.samples));
    } else if (check == "projectors") {
      for (int N : {2, 3}) add(check_projector_algebra(v.projector_grid, N, 20, c.seed));
    }
  }
  json arr = json::array();
  std::vector<std::string> failed;
  for (const auto& r : reports) {
    arr.push_back(report_json(r));
    if (!r.pass) failed.push_back(r.id);
  }
  store.write_text("reports.json", arr.dump(2) + "\n");
  Outcome out;
  out.summary = {{"reports", reports.size()}, {"failed", failed}};
  if (!failed.empty()) {
    out.exit_code = 4;
    out.message = "check failed: " + failed.front();
  }
  return out;
}

Outcome run_hierarchy(const RunConfig& c, const ArtifactStore& store) {
  const WaveField phi = initial_field(c);
  const KernelSpectrum kspec(c.grid, c.params.R);
  const double product = hierarchy_residual(phi, c.params.beta, c.params.R, kspec);

  // Probe: mix in a boosted copy of phi so that the two-body state is no longer a product.
  GaussianSpec other = c.initial.gaussian;
  other.momentum = {other.momentum.x, other.momentum.y + 2.0 / other.sigma};
  WaveField chi = gaussian(c.grid, other);
  normalize(chi);
  ManyBodyState probe = tensor_power(phi, 2);
  const ManyBodyState extra = tensor_power(chi, 2);
  for (std::size_t i = 0; i < probe.data.size(); ++i) probe.data[i] += c.hierarchy.perturbation * extra.data[i];
  normalize(probe);
  const double perturbed = hierarchy_residual(phi, c.params.beta, c.params.R, kspec, probe);

  const json result{{"product_residual", product},
                    {"perturbed_residual", perturbed},
                    {"perturbation", c.hierarchy.perturbation},
                    {"closure_tolerance", c.monitors.closure_tolerance}};
  store.write_text("hierarchy.json", result.dump(2) + "\n");
  Outcome out;
  out.summary = result;
  if (!(product < c.monitors.closure_tolerance)) {
    out.exit_code = 4;
    out.message = "hierarchy closure residual above tolerance";
  }
  return out;
}

}  // namespace

RunResult run(Subcommand sub, const RunConfig& config) {
  RunResult result;
  result.directory = config.output;
  set_quiet(config.quiet);
  const auto start = std::chrono::steady_clock::now();
  const std::string hash = config_hash(config);

  Outcome out;
  std::vector<std::string> warnings = config.warnings;
  std::optional<ArtifactStore> store;
  {
    WarningCapture capture;
    try {
      store.emplace(config.output, hash);
      store->write_text("config.json", normalized_json(config));
      switch (sub) {
        case Subcommand::Evolve: out = run_evolve(config, *store); break;
        case Subcommand::SweepR: out = run_sweep(config, *store); break;
        case Subcommand::ManyBody:
          out = config.manybody.mode == ManyBodySettings::Mode::Dynamics ? run_manybody_dynamics(config, *store)
                                                                          : run_manybody_gap(config, *store);
          break;
        case Subcommand::Verify: out = run_verify(config, *store); break;
        case Subcommand::HierarchyCheck: out = run_hierarchy(config, *store); break;
      }
    } catch (const Error& e) {
      out.exit_code = exit_code_for(e.kind());
      out.message = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const std::exception& e) {
      out.exit_code = 4;
      out.message = e.what();
    }
    for (const auto& w : capture.messages()) {
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (store) {
    const json meta{{"version", ANYONLAB_VERSION},
                    {"subcommand", std::string(to_string(sub))},
                    {"config_hash", hash},
                    {"fft_convention", kFftConvention},
                    {"wall_seconds", seconds},
                    {"exit_code", out.exit_code},
                    {"message", out.message},
                    {"warnings", warnings},
                    {"summary", out.summary}};
    try {
      store->write_text("meta.json", meta.dump(2) + "\n");
    } catch (const Error& e) {
      if (out.exit_code == 0) {
        out.exit_code = exit_code_for(e.kind());
        out.message = e.what();
      }
    }
  }
  if (!config.quiet) {
    for (const auto& w : warnings) std::fprintf(stderr, "[warn] %s\n", w.c_str());
  }
  result.exit_code = out.exit_code;
  result.message = out.message;
  return result;
}

}  // namespace anyon::lab
