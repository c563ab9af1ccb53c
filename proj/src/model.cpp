#include "carbofront/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace carbofront {

namespace {

constexpr double kCoercivitySampleRadius = 10.0;
constexpr int kCoercivitySamples = 2001;

double tabulated_eval(const NonlinearityPhi& phi, double r) {
  const auto& xs = phi.table_r;
  const auto& ys = phi.table_phi;
  const std::size_t n = xs.size();
  std::size_t i;
  if (r <= xs.front()) {
    i = 0;
  } else if (r >= xs.back()) {
    i = n - 2;
  } else {
    i = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end(), r) - xs.begin()) - 1;
  }
  const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + slope * (r - xs[i]);
}

bool finite(double x) { return std::isfinite(x); }

void check_finite(ValidationReport& report, const std::string& tag,
                  const std::string& name, double value) {
  if (!finite(value)) {
    report.failures.push_back({tag, name + " is not finite", value});
  }
}

void validate_phi(const Scenario& sc, ValidationReport& report) {
  const NonlinearityPhi& phi = sc.phi;
  const std::string tag = "(A1)";
  check_finite(report, tag, "phi.q", phi.q);
  check_finite(report, tag, "phi.c", phi.c_phi);
  if (!(phi.q >= 1.0)) {
    report.failures.push_back({tag, "phi exponent q must be >= 1", phi.q});
  }
  if (!(phi.c_phi > 0.0)) {
    report.failures.push_back(
        {tag, "coercivity constant c_phi must be positive", phi.c_phi});
  }
  double lo = -kCoercivitySampleRadius;
  double hi = kCoercivitySampleRadius;
  if (phi.family == PhiFamily::power_law) {
    check_finite(report, tag, "phi.a", phi.a);
    check_finite(report, tag, "phi.b", phi.b);
    if (!(phi.a >= 0.0)) {
      report.failures.push_back(
          {tag, "phi linear coefficient a must be >= 0", phi.a});
    }
    if (!(phi.b > 0.0)) {
      report.failures.push_back(
          {tag, "phi power coefficient b must be positive", phi.b});
    }
  } else {
    const auto& xs = phi.table_r;
    const auto& ys = phi.table_phi;
    if (xs.size() < 2 || xs.size() != ys.size()) {
      report.failures.push_back(
          {tag, "phi table needs >= 2 matching (r, phi) pairs",
           static_cast<double>(xs.size())});
      return;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!finite(xs[i]) || !finite(ys[i])) {
        report.failures.push_back({tag, "phi table entry not finite", xs[i]});
        return;
      }
      if (i > 0 && !(xs[i] > xs[i - 1])) {
        report.failures.push_back(
            {tag, "phi table abscissae must be strictly increasing", xs[i]});
        return;
      }
      if (i > 0 && ys[i] < ys[i - 1]) {
        report.failures.push_back(
            {tag, "phi table values must be nondecreasing", ys[i]});
      }
    }
    if (xs.front() > 0.0 || xs.back() < 0.0) {
      report.failures.push_back(
          {tag, "phi table must bracket r = 0", xs.front()});
      return;
    }
    lo = std::max(lo, xs.front());
    hi = std::min(hi, xs.back());
  }
  if (!report.ok()) return;

  const double at_zero = phi_eval(phi, 0.0);
  if (std::abs(at_zero) > 1e-12) {
    report.failures.push_back({tag, "phi(0) must vanish", at_zero});
  }
  // Sign-symmetric sampling of monotonicity and coercivity.
  double prev = phi_eval(phi, lo);
  for (int k = 0; k < kCoercivitySamples; ++k) {
    const double r = lo + (hi - lo) * k / (kCoercivitySamples - 1);
    for (double x : {r, -r}) {
      if (x < lo || x > hi) continue;
      const double val = phi_eval(phi, x);
      const double bound = phi.c_phi * std::pow(std::abs(x), 1.0 + phi.q);
      if (val * x < bound - 1e-12) {
        report.failures.push_back(
            {tag, "coercivity phi(r) r >= c_phi |r|^(1+q) violated at r", x});
        return;
      }
    }
    const double cur = phi_eval(phi, r);
    if (cur < prev) {
      report.failures.push_back({tag, "phi is decreasing near r", r});
      return;
    }
    prev = cur;
  }
}

void validate_profile_samples(ValidationReport& report, const std::string& name,
                              const std::vector<double>& samples) {
  if (samples.empty()) {
    report.failures.push_back({"(A3)", name + " has no samples", 0.0});
    return;
  }
  for (double x : samples) {
    if (!finite(x)) {
      report.failures.push_back({"(A3)", name + " sample not finite", x});
      return;
    }
    if (x < 0.0) {
      report.failures.push_back({"(A3)", name + " must be nonnegative", x});
      return;
    }
  }
}

void validate_profile_fn(ValidationReport& report, const std::string& name,
                         const ExponentialApproach& fn) {
  const std::string tag = "(A2)";
  check_finite(report, tag, name + ".cinf", fn.cinf);
  check_finite(report, tag, name + ".amp", fn.amp);
  check_finite(report, tag, name + ".lambda", fn.lambda);
  if (!(fn.lambda >= 0.0)) {
    report.failures.push_back(
        {tag, name + ".lambda must be >= 0", fn.lambda});
  }
  if (fn.amp != 0.0 && !(fn.lambda > 0.0)) {
    report.failures.push_back(
        {tag, name + " - " + name + "_star is not integrable (lambda = 0)",
         fn.amp});
  }
  if (!(fn.cinf > 0.0)) {
    report.failures.push_back(
        {tag, name + "_star must be positive", fn.cinf});
  }
}

}  // namespace

NonlinearityPhi NonlinearityPhi::power_law(double a, double b, double q) {
  NonlinearityPhi phi;
  phi.family = PhiFamily::power_law;
  phi.a = a;
  phi.b = b;
  phi.q = q;
  phi.c_phi = b;
  return phi;
}

NonlinearityPhi NonlinearityPhi::tabulated(std::vector<double> r,
                                           std::vector<double> values,
                                           double q, double c_phi) {
  NonlinearityPhi phi;
  phi.family = PhiFamily::tabulated;
  phi.table_r = std::move(r);
  phi.table_phi = std::move(values);
  phi.q = q;
  phi.c_phi = c_phi;
  phi.a = 0.0;
  phi.b = 0.0;
  return phi;
}

double ExponentialApproach::operator()(double t) const {
  if (amp == 0.0) return cinf;
  return cinf + amp * std::exp(-lambda * t);
}

double ExponentialApproach::derivative(double t) const {
  if (amp == 0.0 || lambda == 0.0) return 0.0;
  return -lambda * amp * std::exp(-lambda * t);
}

double ExponentialApproach::sup() const {
  if (lambda == 0.0) return cinf + amp;
  return std::max(cinf, cinf + amp);
}

double ExponentialApproach::inf() const {
  if (lambda == 0.0) return cinf + amp;
  return std::min(cinf, cinf + amp);
}

double psi_eval(const FrontSpeedPsi& psi, double r) {
  if (!(r > 0.0)) return 0.0;
  if (psi.p == 1.0) return psi.kappa0 * r;
  return psi.kappa0 * std::pow(r, psi.p);
}

double phi_eval(const NonlinearityPhi& phi, double r) {
  if (phi.family == PhiFamily::tabulated) return tabulated_eval(phi, r);
  double power;
  if (phi.q == 1.0) {
    power = r;
  } else {
    power = std::copysign(std::pow(std::abs(r), phi.q), r);
    if (r == 0.0) power = 0.0;
  }
  return phi.a * r + phi.b * power;
}

double phi_m_eval(const NonlinearityPhi& phi, double m, double r) {
  if (!(m > 0.0)) throw InvalidParameter("truncation level m must be positive");
  return phi_eval(phi, std::clamp(r, -m, m));
}

double f_eval(const Scenario& scenario, double u, double v) {
  const double w = scenario.params.gamma * v - u;
  if (scenario.truncation_m) return phi_m_eval(scenario.phi, *scenario.truncation_m, w);
  return phi_eval(scenario.phi, w);
}

std::pair<double, double> boundary_eval(const BoundaryData& boundary,
                                        double t) {
  if (!(t >= 0.0)) throw InvalidParameter("boundary data evaluated at t < 0");
  return {boundary.g(t), boundary.h(t)};
}

ComparisonBounds comparison_bounds(const Scenario& scenario) {
  const double gamma = scenario.params.gamma;
  const double sup_u0 = scenario.initial.u0_profile().sup();
  const double sup_v0 = scenario.initial.v0_profile().sup();
  const double sup_g = scenario.boundary.g.sup();
  const double sup_h = scenario.boundary.h.sup();
  const double u_star =
      std::max({sup_u0, sup_g, gamma * sup_v0, gamma * sup_h});
  return {u_star, u_star / gamma};
}

bool ValidationReport::failed(const std::string& assumption) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const auto& f) { return f.assumption == assumption; });
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& f : failures) {
    out << f.assumption << ' ' << f.message << " (value " << f.value << ")\n";
  }
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  return out.str();
}

ValidationReport validate_scenario(const Scenario& sc) {
  ValidationReport report;
  const ModelParams& mp = sc.params;

  check_finite(report, "model", "kappa0", mp.kappa0);
  check_finite(report, "model", "kappa1", mp.kappa1);
  check_finite(report, "model", "kappa2", mp.kappa2);
  check_finite(report, "model", "gamma", mp.gamma);
  check_finite(report, "model", "p", sc.p);
  if (mp.kappa0 < 0.0) {
    report.failures.push_back({"model", "kappa0 must be positive", mp.kappa0});
  } else if (mp.kappa0 == 0.0) {
    report.warnings.push_back(
        "kappa0 = 0 freezes the front; the sqrt(t) law is not expected");
  }
  if (!(mp.kappa1 > 0.0)) {
    report.failures.push_back({"model", "kappa1 must be positive", mp.kappa1});
  }
  if (!(mp.kappa2 > 0.0)) {
    report.failures.push_back({"model", "kappa2 must be positive", mp.kappa2});
  }
  if (!(mp.gamma > 0.0)) {
    report.failures.push_back({"model", "gamma must be positive", mp.gamma});
  }
  if (!(sc.p >= 1.0)) {
    report.failures.push_back({"model", "psi exponent p must be >= 1", sc.p});
  }
  if (sc.truncation_m && !(*sc.truncation_m > 0.0)) {
    report.failures.push_back(
        {"model", "truncation level m must be positive", *sc.truncation_m});
  }

  validate_phi(sc, report);

  validate_profile_fn(report, "g", sc.boundary.g);
  validate_profile_fn(report, "h", sc.boundary.h);
  const double g0 = sc.boundary.g0();
  if (!(g0 > 0.0)) {
    report.failures.push_back({"(A2)", "g must stay >= g0 > 0", g0});
  }
  if (!(sc.boundary.h.inf() >= 0.0)) {
    report.failures.push_back(
        {"(A2)", "h must stay nonnegative", sc.boundary.h.inf()});
  }
  const double g_star = sc.boundary.g_star();
  const double gh_star = mp.gamma * sc.boundary.h_star();
  if (std::abs(gh_star - g_star) >
      1e-12 * std::max(std::abs(g_star), std::abs(gh_star))) {
    report.failures.push_back(
        {"(A2)", "gamma * h_star must equal g_star", gh_star - g_star});
  }

  check_finite(report, "(A3)", "s0", sc.initial.s0);
  if (!(sc.initial.s0 > 0.0)) {
    report.failures.push_back({"(A3)", "s0 must be positive", sc.initial.s0});
  }
  validate_profile_samples(report, "u0", sc.initial.u0);
  validate_profile_samples(report, "v0", sc.initial.v0);
  return report;
}

ValidationError::ValidationError(ValidationReport report)
    : Error("scenario failed validation:\n" + report.summary()),
      report_(std::move(report)) {}

ValidatedScenario::ValidatedScenario(Scenario scenario, ComparisonBounds bounds,
                                     std::vector<std::string> warnings)
    : scenario_(std::move(scenario)),
      bounds_(bounds),
      warnings_(std::move(warnings)) {}

ValidatedScenario ValidatedScenario::create(Scenario scenario) {
  ValidationReport report = validate_scenario(scenario);
  if (!report.ok()) throw ValidationError(std::move(report));
  const ComparisonBounds bounds = comparison_bounds(scenario);
  return ValidatedScenario(std::move(scenario), bounds,
                           std::move(report.warnings));
}

double ValidatedScenario::exchange_slope(double u, double v) const {
  const double w = scenario_.params.gamma * v - u;
  if (w != 0.0) return f(u, v) / w;
  constexpr double eps = 1e-8;
  const double m = scenario_.truncation_m.value_or(0.0);
  auto eval = [&](double r) {
    return m > 0.0 ? phi_m_eval(scenario_.phi, m, r)
                   : phi_eval(scenario_.phi, r);
  };
  return (eval(eps) - eval(-eps)) / (2.0 * eps);
}

double ValidatedScenario::psi_slope(double r) const {
  if (!(r > 0.0)) return 0.0;
  return psi(r) / r;
}

}  // namespace carbofront
