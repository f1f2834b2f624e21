#ifndef FEEC2D_STUDY_HPP
#define FEEC2D_STUDY_HPP

#include <optional>
#include <string>
#include <vector>

#include "feec2d/analysis.hpp"

namespace feec2d {

enum class Problem { Elliptic, Heat, Wave, SemiLinear };

std::string problem_name(Problem p);

/// Time-step schedule.  The proportional rules keep the temporal error
/// subdominant to the spatial rates being measured: dt = h^2/4 for the
/// first-order-in-time scheme, dt = h/8 with Crank-Nicolson.
struct DtRule {
  enum class Kind { ProportionalH, ProportionalH2, Fixed };
  Kind kind = Kind::ProportionalH2;
  double value = 0.0;  // Fixed only

  double dt_for(double h) const;
  std::string str() const;
  static DtRule parse(const std::string& s);  // "h/8", "h2/4", or a number
};

struct StudyConfig {
  Problem problem = Problem::Heat;
  std::string pair = "rt0-dg0";
  int level_min = 2;
  int level_max = 5;
  double final_time = 0.5;
  Scheme scheme = Scheme::BackwardEuler;
  std::optional<DtRule> dt_rule;          // defaulted from the scheme
  std::string solution;                   // builtin id; empty = problem default
  std::string expression;                 // inline u(x,y,t); overrides `solution`
  std::string nonlinearity = "sin";       // semi-linear only
  std::string out_dir;                    // empty = no files written
  bool write_json = true;
  std::optional<double> eoc_tolerance;    // default 0.15 (0.2 for wave)

  void validate() const;
  DtRule effective_dt_rule() const;
  double effective_tolerance() const;
  std::string study_name() const;
};

/// One tracked norm: per-level errors, per-gap EOCs, and the rate the
/// theory predicts for this element pair (with a branch identifier).
/// `pass` uses the finest-gap EOC; levels with exactly-zero errors count
/// as "exact" and pass.
struct NormTrack {
  std::string name;
  double predicted_order = 0.0;
  std::string branch;
  bool asserted = true;  // report-only tracks never fail a study
  std::vector<double> errors;
  std::vector<std::optional<double>> eoc;

  std::optional<double> final_eoc() const;
  bool pass(double tolerance) const;
};

/// Per-level scalars outside the norm tracks.
struct LevelDiagnostics {
  int steps = 0;
  double dt = 0.0;
  // heat / semi-linear
  std::optional<double> theta0, eps0;
  std::optional<double> lipschitz_ratio;
  // wave
  std::optional<double> e2, e3, energy_drift;
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<int> levels;
  std::vector<double> hs;
  std::vector<NormTrack> norms;
  std::vector<LevelDiagnostics> diagnostics;
  double eoc_tolerance = 0.15;

  bool pass() const;
  const NormTrack& track(const std::string& name) const;
  std::string csv() const;
  std::string json() const;
  /// Writes <out_dir>/<study_name>.csv (and .json when enabled).
  void write_files() const;
};

ConvergenceReport run_study(const StudyConfig& config);

/// Admissible element pairs and their rate table entries.
struct PairInfo {
  std::string id;
  ElementFamily sigma_element;
  ElementFamily u_element;
  int r = 0;               // polynomial index of the theorems
  Family flux_family = Family::Trimmed;
  std::string description;
};

const std::vector<PairInfo>& element_pairs();
const PairInfo& pair_info(const std::string& id);

struct Prediction {
  std::string norm;
  double order = 0.0;
  std::string branch;
  bool asserted = true;
};
std::vector<Prediction> predicted_orders(Problem problem, const PairInfo& pair);

}  // namespace feec2d

#endif
