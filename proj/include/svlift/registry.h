#pragma once

#include "svlift/config.h"
#include "svlift/lifted_sde.h"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace svlift {

/// A time-independent coefficient x -> F(x) with its declared constants.
struct RegistryEntry {
  std::string name;
  std::function<double(double)> fn;
  double c_lg = 0.0;                // +inf when the entry has no linear-growth bound
  std::optional<double> lipschitz;  // absent for non-Lipschitz entries
};

/// Names: linear (a, c), mean_revert (kappa), bounded_sin (a), sqrt_growth (a), const (value), cubic (a).
RegistryEntry registry_coefficients(const std::string& name, const ConfigTable& params);
RegistryEntry registry_coefficients(const ConfigTable& spec);  // name read from the `name` key
std::vector<std::string> registry_names();

/// Replaces a non-Lipschitz entry by its k-Lipschitz envelope.
RegistryEntry with_envelope(const RegistryEntry& e, double k);

Coefficients make_coefficients(const RegistryEntry& drift, const RegistryEntry& diffusion);

}  // namespace svlift
