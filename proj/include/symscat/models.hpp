#pragma once

#include <map>
#include <string>
#include <vector>

#include "symscat/network.hpp"
#include "symscat/symmetry.hpp"

namespace symscat {

/// A named scattering centre together with the symmetries it is known to
/// carry. Symmetries refer to the effective two-port centre for `ports`.
struct CatalogEntry {
  std::string name;
  ScatteringNetwork network;
  int port_m = 1;
  int port_n = 2;
  std::vector<DetectedSymmetry> known_symmetries;
  std::string notes;
};

/// Three resonators with a Peierls phase on the 2-3 bond:
///   [[V1, J, J], [J, V2, J e^{-i phi}], [J, J e^{i phi}, V3]],
/// leads 1 and 3 on sites 1 and 3 (plus lead 2 on site 2 when
/// `third_lead`). Ports are (1, 3).
CatalogEntry three_resonator_flux(Complex v1, Complex v2, Complex v3, double phi, double j,
                                  bool third_lead = false);

/// Three resonators with dissipative coupling -i kappa on the 1-2 bond:
///   [[V1, -i kappa, J], [-i kappa, V2, J e^{-i phi}], [J, J e^{i phi}, V3]].
CatalogEntry dissipative_three(double kappa, double phi, Complex v1, Complex v2, Complex v3,
                               double j);

/// Named model parameters: J, gamma, phi, kappa, v2. Unused keys are an error.
using ModelParameters = std::map<std::string, double>;

std::vector<std::string> model_names();
/// Throws ValidationError for unknown names or parameters.
CatalogEntry make_model(const std::string& name, const ModelParameters& overrides = {});
std::vector<CatalogEntry> catalog();

}  // namespace symscat
