#pragma once

// Physical model of the carbonation front: material constants, the front
// kinetics psi, the Henry-law exchange nonlinearity phi (and its truncation
// phi_m), boundary and initial data, and validation of the admissibility
// assumptions every solver run relies on.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carbofront/error.hpp"
#include "carbofront/profile.hpp"

namespace carbofront {

struct ModelParams {
  double kappa0 = 1.0;  ///< front-speed coefficient
  double kappa1 = 1.0;  ///< diffusivity of u (CO2 in water)
  double kappa2 = 1.0;  ///< diffusivity of v (CO2 in air)
  double gamma = 1.0;   ///< Henry partition coefficient
};

/// psi(r) = kappa0 * ([r]^+)^p
struct FrontSpeedPsi {
  double kappa0 = 1.0;
  double p = 1.0;
};

enum class PhiFamily { power_law, tabulated };

/// Exchange nonlinearity. The built-in family is
///   phi(r) = a*r + b*sign(r)*|r|^q,
/// which is coercive with c_phi = b. A tabulated monotone phi is accepted
/// with user-asserted q and c_phi; outside the table it is extended linearly
/// with the end-segment slopes.
struct NonlinearityPhi {
  PhiFamily family = PhiFamily::power_law;
  double a = 0.0;
  double b = 1.0;
  double q = 1.0;
  double c_phi = 1.0;
  std::vector<double> table_r;
  std::vector<double> table_phi;

  static NonlinearityPhi power_law(double a, double b, double q);
  static NonlinearityPhi tabulated(std::vector<double> r,
                                   std::vector<double> values, double q,
                                   double c_phi);
};

/// c_inf + amp * exp(-lambda * t)
struct ExponentialApproach {
  double cinf = 1.0;
  double amp = 0.0;
  double lambda = 0.0;

  double operator()(double t) const;
  double derivative(double t) const;
  double sup() const;  ///< over t >= 0
  double inf() const;  ///< over t >= 0
};

struct BoundaryData {
  ExponentialApproach g;  ///< u(t, 0)
  ExponentialApproach h;  ///< v(t, 0)

  double g0() const { return g.inf(); }
  double g_star() const { return g.cinf; }
  double h_star() const { return h.cinf; }
};

/// Initial front position and equally spaced samples of u0, v0 on [0, s0].
struct InitialData {
  double s0 = 1.0;
  std::vector<double> u0{1.0};
  std::vector<double> v0{1.0};

  PiecewiseLinearProfile u0_profile() const { return {u0, s0}; }
  PiecewiseLinearProfile v0_profile() const { return {v0, s0}; }
};

struct Scenario {
  ModelParams params;
  double p = 1.0;  ///< front-speed exponent
  NonlinearityPhi phi;
  BoundaryData boundary;
  InitialData initial;
  std::optional<double> truncation_m;

  FrontSpeedPsi psi() const { return {params.kappa0, p}; }
};

double psi_eval(const FrontSpeedPsi& psi, double r);
double phi_eval(const NonlinearityPhi& phi, double r);
/// phi clamped to phi(+-m) outside [-m, m]. Throws InvalidParameter if m <= 0.
double phi_m_eval(const NonlinearityPhi& phi, double m, double r);
/// f(u, v) = phi(gamma v - u), or phi_m when the scenario carries a cutoff.
double f_eval(const Scenario& scenario, double u, double v);
std::pair<double, double> boundary_eval(const BoundaryData& boundary, double t);

struct ComparisonBounds {
  double u_star = 0.0;
  double v_star = 0.0;
};

/// Smallest pair with u_star = gamma * v_star dominating the initial and
/// boundary suprema.
ComparisonBounds comparison_bounds(const Scenario& scenario);

struct AssumptionFailure {
  std::string assumption;  ///< "(A1)", "(A2)", "(A3)" or "model"
  std::string message;
  double value = 0.0;
};

struct ValidationReport {
  std::vector<AssumptionFailure> failures;
  std::vector<std::string> warnings;

  bool ok() const { return failures.empty(); }
  bool failed(const std::string& assumption) const;
  std::string summary() const;
};

ValidationReport validate_scenario(const Scenario& scenario);

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// A scenario that has passed validate_scenario. Solver and diagnostics entry
/// points only accept this type.
class ValidatedScenario {
 public:
  /// Throws ValidationError listing every failed assumption.
  static ValidatedScenario create(Scenario scenario);

  const Scenario& scenario() const noexcept { return scenario_; }
  const ModelParams& params() const noexcept { return scenario_.params; }
  const ComparisonBounds& bounds() const noexcept { return bounds_; }
  const std::vector<std::string>& warnings() const noexcept {
    return warnings_;
  }

  double psi(double r) const { return psi_eval(scenario_.psi(), r); }
  double f(double u, double v) const { return f_eval(scenario_, u, v); }
  /// Secant slope f(u, v) / (gamma v - u) >= 0, used to linearize the
  /// exchange term without losing monotonicity.
  double exchange_slope(double u, double v) const;
  /// Secant slope psi(r) / r >= 0 (zero for r <= 0).
  double psi_slope(double r) const;

 private:
  ValidatedScenario(Scenario scenario, ComparisonBounds bounds,
                    std::vector<std::string> warnings);

  Scenario scenario_;
  ComparisonBounds bounds_;
  std::vector<std::string> warnings_;
};

}  // namespace carbofront
