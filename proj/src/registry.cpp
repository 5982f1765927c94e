#include "svlift/registry.h"

#include "svlift/errors.h"

#include <cmath>
#include <limits>

namespace svlift {

std::vector<std::string> registry_names() {
  return {"linear", "mean_revert", "bounded_sin", "sqrt_growth", "const", "cubic"};
}

RegistryEntry registry_coefficients(const std::string& name, const ConfigTable& params) {
  RegistryEntry e;
  e.name = name;
  if (name == "linear") {
    const double a = params.number_or("a", 1.0), c = params.number_or("c", 0.0);
    e.fn = [a, c](double x) { return a * x + c; };
    e.c_lg = std::max(std::abs(a), std::abs(c));
    e.lipschitz = std::abs(a);
  } else if (name == "mean_revert") {
    const double kappa = params.number_or("kappa", 1.0);
    e.fn = [kappa](double x) { return -kappa * x; };
    e.c_lg = std::abs(kappa);
    e.lipschitz = std::abs(kappa);
  } else if (name == "bounded_sin") {
    const double a = params.number_or("a", 1.0);
    e.fn = [a](double x) { return a * std::sin(x); };
    e.c_lg = std::abs(a);
    e.lipschitz = std::abs(a);
  } else if (name == "sqrt_growth") {
    // Odd square-root growth; continuous, not Lipschitz at the origin.
    const double a = params.number_or("a", 1.0);
    e.fn = [a](double x) { return a * std::copysign(std::sqrt(std::abs(x)), x); };
    e.c_lg = std::abs(a);
  } else if (name == "const") {
    const double v = params.number_or("value", 1.0);
    e.fn = [v](double) { return v; };
    e.c_lg = std::abs(v);
    e.lipschitz = 0.0;
  } else if (name == "cubic") {
    const double a = params.number_or("a", 1.0);
    e.fn = [a](double x) { return a * x * x * x; };
    e.c_lg = std::numeric_limits<double>::infinity();
  } else {
    const ConfigValue* v = params.find("name");
    throw ConfigError("unknown coefficient '" + name + "'", v ? v->line : params.line);
  }
  return e;
}

RegistryEntry registry_coefficients(const ConfigTable& spec) { return registry_coefficients(spec.string("name"), spec); }

RegistryEntry with_envelope(const RegistryEntry& e, double k) {
  if (e.lipschitz) return e;
  if (!std::isfinite(e.c_lg)) throw std::invalid_argument("envelope requires a finite linear-growth constant");
  RegistryEntry out = e;
  out.name = e.name + "_envelope";
  out.fn = LipschitzEnvelope(e.fn, e.c_lg, k);
  out.lipschitz = k;
  return out;
}

Coefficients make_coefficients(const RegistryEntry& drift, const RegistryEntry& diffusion) {
  Coefficients c;
  auto b = drift.fn;
  auto s = diffusion.fn;
  c.b = [b](double, double x) { return b(x); };
  c.sigma = [s](double, double x) { return s(x); };
  c.c_lg = std::max(drift.c_lg, diffusion.c_lg);
  if (drift.lipschitz && diffusion.lipschitz) c.lipschitz = std::max(*drift.lipschitz, *diffusion.lipschitz);
  c.name = drift.name + "/" + diffusion.name;
  return c;
}

}  // namespace svlift
