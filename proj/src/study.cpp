#include "feec2d/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace feec2d {

std::string problem_name(Problem p) {
  switch (p) {
    case Problem::Elliptic:
      return "elliptic";
    case Problem::Heat:
      return "heat";
    case Problem::Wave:
      return "wave";
    case Problem::SemiLinear:
      return "semilinear";
  }
  return "?";
}

double DtRule::dt_for(double h) const {
  switch (kind) {
    case Kind::ProportionalH:
      return h / 8.0;
    case Kind::ProportionalH2:
      return h * h / 4.0;
    case Kind::Fixed:
      return value;
  }
  return value;
}

std::string DtRule::str() const {
  switch (kind) {
    case Kind::ProportionalH:
      return "h/8";
    case Kind::ProportionalH2:
      return "h2/4";
    case Kind::Fixed: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", value);
      return buf;
    }
  }
  return "?";
}

DtRule DtRule::parse(const std::string& s) {
  if (s == "h/8" || s == "h") return {Kind::ProportionalH, 0.0};
  if (s == "h2/4" || s == "h2" || s == "h^2/4") return {Kind::ProportionalH2, 0.0};
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && v > 0.0) return {Kind::Fixed, v};
  } catch (...) {
  }
  throw ConfigError("dt rule must be 'h/8', 'h2/4' or a positive number, got '" + s + "'");
}

const std::vector<PairInfo>& element_pairs() {
  static const std::vector<PairInfo> pairs = {
      {"rt0-dg0", ElementFamily::raviart_thomas(0), ElementFamily::discontinuous(0), 0,
       Family::Trimmed, "lowest-order trimmed flux with piecewise constants"},
      {"bdm1-dg0", ElementFamily::brezzi_douglas_marini(1), ElementFamily::discontinuous(0),
       0, Family::Full, "full linear flux with piecewise constants"},
      {"rt1-dg1", ElementFamily::raviart_thomas(1), ElementFamily::discontinuous(1), 1,
       Family::Trimmed, "next trimmed flux with piecewise linears"},
  };
  return pairs;
}

const PairInfo& pair_info(const std::string& id) {
  for (const auto& p : element_pairs())
    if (p.id == id) return p;
  throw ConfigError("unknown element pair '" + id + "' (have: rt0-dg0, bdm1-dg0, rt1-dg1)");
}

std::vector<Prediction> predicted_orders(Problem problem, const PairInfo& pair) {
  const int r = pair.r;
  const bool full = pair.flux_family == Family::Full;
  std::vector<Prediction> out;
  switch (problem) {
    case Problem::Elliptic:
      out.push_back({"u", r == 0 ? 1.0 : 2.0, r == 0 ? "elliptic-u-r0" : "elliptic-u-r1"});
      out.push_back({"sigma", full ? double(r + 2) : double(r + 1),
                     full ? "elliptic-sigma-full" : "elliptic-sigma-trimmed"});
      out.push_back({"div_sigma", double(r + 1), "elliptic-div-sigma"});
      break;
    case Problem::Heat:
    case Problem::SemiLinear:
      out.push_back({"u", r == 0 ? 1.0 : 2.0,
                     problem == Problem::SemiLinear
                         ? (r == 0 ? "parabolic-sl-u-r0" : "parabolic-sl-u-r1")
                         : (r == 0 ? "parabolic-u-r0" : "parabolic-u-r1")});
      if (problem == Problem::SemiLinear && r > 0) out.back().order = 1.0;
      // the flux estimate keeps an O(h) time-derivative term in every r=0
      // branch; for r>0 the shared Sobolev index is pinned to s <= r-1
      out.push_back({"sigma", 1.0, r == 0 ? (full ? "parabolic-sigma-r0-full"
                                                  : "parabolic-sigma-r0-trimmed")
                                          : "parabolic-sigma-r1"});
      if (r == 0) {
        out.push_back({"div_sigma", 1.0, "parabolic-div-sigma-r0"});
      } else {
        // the r>0 branch admits s = 0, i.e. no guaranteed decay: report only
        out.push_back({"div_sigma", 0.0, "parabolic-div-sigma-r1", false});
      }
      break;
    case Problem::Wave:
      out.push_back({"mu_plus_sigma", double(r + 1), "wave-combined"});
      out.push_back({"e1", double(r + 1), "wave-initial-data"});
      break;
  }
  return out;
}

void StudyConfig::validate() const {
  pair_info(pair);
  if (level_min < 0 || level_max > 8 || level_min > level_max)
    throw ConfigError("levels must satisfy 0 <= min <= max <= 8");
  if (problem != Problem::Elliptic && !(final_time > 0.0))
    throw ConfigError("final time T must be positive");
  if (problem == Problem::SemiLinear && scheme != Scheme::BackwardEuler)
    throw ConfigError("the semi-linear driver is IMEX backward Euler only");
  if (problem == Problem::SemiLinear) nonlinear_term(nonlinearity);
  if (dt_rule && dt_rule->kind == DtRule::Kind::Fixed && !(dt_rule->value > 0.0))
    throw ConfigError("fixed dt must be positive");
}

DtRule StudyConfig::effective_dt_rule() const {
  if (dt_rule) return *dt_rule;
  return scheme == Scheme::CrankNicolson ? DtRule{DtRule::Kind::ProportionalH, 0.0}
                                         : DtRule{DtRule::Kind::ProportionalH2, 0.0};
}

double StudyConfig::effective_tolerance() const {
  if (eoc_tolerance) return *eoc_tolerance;
  return problem == Problem::Wave ? 0.2 : 0.15;
}

std::string StudyConfig::study_name() const {
  return problem_name(problem) + "-" + pair;
}

std::optional<double> NormTrack::final_eoc() const {
  for (auto it = eoc.rbegin(); it != eoc.rend(); ++it)
    if (it->has_value()) return **it;
  return std::nullopt;
}

bool NormTrack::pass(double tolerance) const {
  if (!asserted) return true;
  const auto fe = final_eoc();
  if (!fe.has_value()) return true;  // every gap "exact"
  return *fe >= predicted_order - tolerance;
}

bool ConvergenceReport::pass() const {
  for (const auto& n : norms)
    if (!n.pass(eoc_tolerance)) return false;
  return true;
}

const NormTrack& ConvergenceReport::track(const std::string& name) const {
  for (const auto& n : norms)
    if (n.name == name) return n;
  throw ConfigError("report has no norm track '" + name + "'");
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_eoc(const std::vector<std::optional<double>>& eoc, std::size_t level_idx) {
  if (level_idx == 0) return "";
  const auto& e = eoc[level_idx - 1];
  return e.has_value() ? fmt(*e) : "exact";
}

ManufacturedSolution resolve_solution(const StudyConfig& cfg) {
  const ProblemKind kind = cfg.problem == Problem::Wave ? ProblemKind::Hyperbolic
                           : cfg.problem == Problem::SemiLinear ? ProblemKind::SemiLinear
                                                                : ProblemKind::Parabolic;
  if (!cfg.expression.empty())
    return make_manufactured(kind, cfg.expression,
                             cfg.problem == Problem::SemiLinear ? cfg.nonlinearity : "",
                             "inline");
  std::string id = cfg.solution;
  if (id.empty()) {
    switch (cfg.problem) {
      case Problem::Elliptic:
        id = "elliptic-sine";
        break;
      case Problem::Heat:
        id = "heat-separable";
        break;
      case Problem::Wave:
        id = "wave-standing";
        break;
      case Problem::SemiLinear:
        id = "semilinear-sine";
        break;
    }
  }
  ManufacturedSolution ms = builtin_solution(id);
  if (cfg.problem == Problem::Elliptic) {
    ms.kind = ProblemKind::Parabolic;  // elliptic runs reuse the parabolic fields
    return ms;
  }
  // rebuild under the requested kind when it differs (forcing changes)
  if ((cfg.problem == Problem::Wave) != (ms.kind == ProblemKind::Hyperbolic) ||
      (cfg.problem == Problem::SemiLinear) != (ms.kind == ProblemKind::SemiLinear)) {
    for (const auto& b : builtin_solutions())
      if (b.id == id)
        return make_manufactured(kind, b.expression,
                                 cfg.problem == Problem::SemiLinear ? cfg.nonlinearity : "",
                                 b.id);
  }
  if (cfg.problem == Problem::SemiLinear && ms.nonlinearity != cfg.nonlinearity)
    return make_manufactured(kind, builtin_solution(id).u.str(), cfg.nonlinearity, id);
  return ms;
}

struct LevelRun {
  SpatialError spatial;   // elliptic
  BochnerError bochner;   // evolution
  LevelDiagnostics diag;
  HyperbolicTerms hyper;
};

LevelRun run_level(const StudyConfig& cfg, const ManufacturedSolution& ms,
                   const SimplicialMesh& mesh) {
  const PairInfo& pinfo = pair_info(cfg.pair);
  const FESpace sigma_space(mesh, pinfo.sigma_element);
  const FESpace u_space(mesh, pinfo.u_element);
  const MixedOperator op = assemble_mixed(sigma_space, u_space);
  const SaddleSolver solver(op);
  LevelRun out;

  if (cfg.problem == Problem::Elliptic) {
    const auto [u, sigma] = elliptic_projection(solver, ms, 0.0);
    out.spatial = spatial_error(sigma_space, u_space, sigma, u, ms, 0.0);
    return out;
  }

  LoadAssembler load(u_space, ms.scalar(ms.f));
  const double dt = cfg.effective_dt_rule().dt_for(mesh.h());
  std::vector<double> times = uniform_time_grid(cfg.final_time, dt);
  out.diag.steps = static_cast<int>(times.size()) - 1;
  out.diag.dt = times[1] - times[0];

  Trajectory traj;
  if (cfg.problem == Problem::Wave) {
    Eigen::VectorXd mu0 = canonical_interpolation(u_space, ms.scalar_at(ms.u_t, 0.0));
    Eigen::VectorXd sigma0 = canonical_interpolation(sigma_space, ms.gradient_at(0.0));
    traj = make_trajectory(cfg.scheme, ProblemKind::Hyperbolic, std::move(times),
                           std::move(mu0), std::move(sigma0));
    run_steps(solver, load, traj);
    out.bochner = bochner_error(traj, ms, sigma_space, u_space);
    const int s = std::min(pinfo.r + 1, 2);
    out.hyper = hyperbolic_error_terms(ms, sigma_space, u_space, traj, s);
    out.diag.e2 = out.hyper.e2;
    out.diag.e3 = out.hyper.e3;
    if (load.is_zero()) {
      const auto energy = trajectory_energy(traj, op);
      double drift = 0.0;
      for (double e : energy)
        if (energy.front() > 0.0)
          drift = std::max(drift, std::abs(e - energy.front()) / energy.front());
      out.diag.energy_drift = drift;
    }
    return out;
  }

  // parabolic / semi-linear: initial data from the time-ignorant elliptic
  // solve with load -lap u(0), so theta(0) = eps(0) = 0
  auto [g_h, sigma0] = elliptic_projection(solver, ms, 0.0);
  const ProblemKind kind =
      cfg.problem == Problem::SemiLinear ? ProblemKind::SemiLinear : ProblemKind::Parabolic;
  traj = make_trajectory(cfg.scheme, kind, std::move(times), std::move(g_h),
                         std::move(sigma0));
  NonlinearTerm nl;
  if (cfg.problem == Problem::SemiLinear) {
    nl = nonlinear_term(cfg.nonlinearity);
    run_steps(solver, load, traj, &nl);
  } else {
    run_steps(solver, load, traj);
  }
  out.bochner = bochner_error(traj, ms, sigma_space, u_space);

  {  // theta(0), eps(0) against a fresh elliptic projection
    const auto [u0, s0] = elliptic_projection(solver, ms, 0.0);
    out.diag.theta0 = solver.a_norm(traj.u[0] - u0);
    out.diag.eps0 = solver.d_norm(traj.sigma[0] - s0);
  }
  if (cfg.problem == Problem::SemiLinear) {
    double lo = 0.0, hi = 0.0;
    for (const auto& u : traj.u) {
      lo = std::min(lo, u.minCoeff());
      hi = std::max(hi, u.maxCoeff());
    }
    out.diag.lipschitz_ratio = nl.sampled_lipschitz(lo - 0.5, hi + 0.5, 4000, 777u);
  }
  return out;
}

}  // namespace

ConvergenceReport run_study(const StudyConfig& cfg) {
  cfg.validate();
  const ManufacturedSolution ms = resolve_solution(cfg);
  verify_consistency(ms);

  ConvergenceReport rep;
  rep.config = cfg;
  rep.eoc_tolerance = cfg.effective_tolerance();
  const PairInfo& pinfo = pair_info(cfg.pair);
  for (const auto& pred : predicted_orders(cfg.problem, pinfo))
    rep.norms.push_back({pred.norm, pred.order, pred.branch, pred.asserted, {}, {}});

  SimplicialMesh mesh = SimplicialMesh::unit_square();
  for (int level = 0; level <= cfg.level_max; ++level) {
    if (level >= cfg.level_min) {
      const LevelRun run = run_level(cfg, ms, mesh);
      rep.levels.push_back(level);
      rep.hs.push_back(mesh.h());
      rep.diagnostics.push_back(run.diag);
      for (auto& track : rep.norms) {
        double v = 0.0;
        if (cfg.problem == Problem::Elliptic) {
          v = track.name == "u"       ? run.spatial.u
              : track.name == "sigma" ? run.spatial.sigma
                                      : run.spatial.div_sigma;
        } else if (cfg.problem == Problem::Wave) {
          v = track.name == "mu_plus_sigma" ? run.bochner.mu + run.bochner.sigma
                                            : run.hyper.e1;
        } else {
          v = track.name == "u"       ? run.bochner.u
              : track.name == "sigma" ? run.bochner.sigma
                                      : run.bochner.div_sigma;
        }
        track.errors.push_back(v);
      }
    }
    if (level < cfg.level_max) mesh = mesh.refine_uniform();
  }

  for (auto& track : rep.norms) track.eoc = compute_eoc(rep.hs, track.errors);
  if (!cfg.out_dir.empty()) rep.write_files();
  return rep;
}

//------------------------------------------------------------------------------
// serialization
//------------------------------------------------------------------------------

std::string ConvergenceReport::csv() const {
  std::ostringstream os;
  os << "level,h";
  for (const auto& n : norms) os << ",err_" << n.name;
  for (const auto& n : norms) os << ",eoc_" << n.name;
  const bool heatlike =
      config.problem == Problem::Heat || config.problem == Problem::SemiLinear;
  if (heatlike) os << ",theta0,eps0";
  if (config.problem == Problem::SemiLinear) os << ",lipschitz_ratio";
  if (config.problem == Problem::Wave) os << ",e2,e3,energy_drift";
  if (config.problem != Problem::Elliptic) os << ",steps,dt";
  os << "\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    os << levels[i] << "," << fmt(hs[i]);
    for (const auto& n : norms) os << "," << fmt(n.errors[i]);
    for (const auto& n : norms) os << "," << fmt_eoc(n.eoc, i);
    const auto& d = diagnostics[i];
    if (heatlike)
      os << "," << (d.theta0 ? fmt(*d.theta0) : "") << ","
         << (d.eps0 ? fmt(*d.eps0) : "");
    if (config.problem == Problem::SemiLinear)
      os << "," << (d.lipschitz_ratio ? fmt(*d.lipschitz_ratio) : "");
    if (config.problem == Problem::Wave)
      os << "," << (d.e2 ? fmt(*d.e2) : "") << "," << (d.e3 ? fmt(*d.e3) : "") << ","
         << (d.energy_drift ? fmt(*d.energy_drift) : "");
    if (config.problem != Problem::Elliptic) os << "," << d.steps << "," << fmt(d.dt);
    os << "\n";
  }
  return os.str();
}

std::string ConvergenceReport::json() const {
  nlohmann::ordered_json j;
  j["study"] = config.study_name();
  j["problem"] = problem_name(config.problem);
  j["pair"] = config.pair;
  j["scheme"] = config.scheme == Scheme::CrankNicolson ? "crank-nicolson" : "backward-euler";
  if (config.problem != Problem::Elliptic) {
    j["final_time"] = config.final_time;
    j["dt_rule"] = config.effective_dt_rule().str();
  }
  j["solution"] =
      !config.expression.empty() ? ("inline:" + config.expression) : config.solution;
  if (config.problem == Problem::SemiLinear) j["nonlinearity"] = config.nonlinearity;
  j["eoc_tolerance"] = eoc_tolerance;
  j["levels"] = levels;
  j["h"] = hs;
  j["norms"] = nlohmann::ordered_json::array();
  for (const auto& n : norms) {
    nlohmann::ordered_json t;
    t["name"] = n.name;
    t["predicted_order"] = n.predicted_order;
    t["branch"] = n.branch;
    t["asserted"] = n.asserted;
    t["errors"] = n.errors;
    auto eocs = nlohmann::ordered_json::array();
    for (const auto& e : n.eoc)
      e.has_value() ? eocs.push_back(*e) : eocs.push_back("exact");
    t["eoc"] = eocs;
    if (n.final_eoc()) t["final_eoc"] = *n.final_eoc();
    t["pass"] = n.pass(eoc_tolerance);
    j["norms"].push_back(t);
  }
  j["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& d : diagnostics) {
    nlohmann::ordered_json t;
    if (config.problem != Problem::Elliptic) {
      t["steps"] = d.steps;
      t["dt"] = d.dt;
    }
    if (d.theta0) t["theta0"] = *d.theta0;
    if (d.eps0) t["eps0"] = *d.eps0;
    if (d.lipschitz_ratio) t["lipschitz_ratio"] = *d.lipschitz_ratio;
    if (d.e2) t["e2"] = *d.e2;
    if (d.e3) t["e3"] = *d.e3;
    if (d.energy_drift) t["energy_drift"] = *d.energy_drift;
    j["diagnostics"].push_back(t);
  }
  j["pass"] = pass();
  return j.dump(2) + "\n";
}

void ConvergenceReport::write_files() const {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const fs::path base = fs::path(config.out_dir) / config.study_name();
  {
    std::ofstream os(base.string() + ".csv", std::ios::binary);
    os << csv();
  }
  if (config.write_json) {
    std::ofstream os(base.string() + ".json", std::ios::binary);
    os << json();
  }
}

}  // namespace feec2d
