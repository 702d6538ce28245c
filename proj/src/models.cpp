#include "symscat/models.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "symscat/errors.hpp"

namespace symscat {

namespace {

constexpr double kPi = std::numbers::pi;

bool close(Complex a, Complex b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }
bool real(Complex z) { return std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)); }

DetectedSymmetry symmetry(SymmetryKind kind, CMatrix u, std::size_t m, std::size_t n) {
  const MappingClass mapping = classify_mapping(u, m, n);
  return {SymmetrySpec{kind, 1, std::move(u)}, mapping};
}

ScatteringNetwork two_port_network(CMatrix hc, double j) {
  ScatteringNetwork net;
  net.hc = std::move(hc);
  net.j_lead = j;
  net.leads = {{1, 0, j}, {2, 1, j}};
  return net;
}

CMatrix sigma_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }

/// Antidiagonal exchange of sites 1 and 3 with phase exp(-i phi) on site 2.
CMatrix flux_exchange(double phi) {
  return {{0.0, 0.0, 1.0}, {0.0, std::polar(1.0, -phi), 0.0}, {1.0, 0.0, 0.0}};
}

}  // namespace

CatalogEntry three_resonator_flux(Complex v1, Complex v2, Complex v3, double phi, double j,
                                  bool third_lead) {
  CatalogEntry e;
  e.name = "three_resonator_flux";
  e.network.j_lead = j;
  e.network.hc = {{v1, j, j}, {j, v2, j * std::polar(1.0, -phi)}, {j, j * std::polar(1.0, phi), v3}};
  e.network.leads = {{1, 0, j}, {3, 2, j}};
  if (third_lead) e.network.leads.insert(e.network.leads.begin() + 1, LeadAttachment{2, 1, j});
  e.port_m = 1;
  e.port_n = 3;

  // A third lead adds a complex self-energy J e^{ik} to V2 in H_c'.
  const bool v2_real = real(v2) && !third_lead;
  const bool symmetric_hopping = std::abs(std::sin(phi)) <= 1e-15;
  if (v2_real && real(v1) && real(v3))
    e.known_symmetries.push_back(symmetry(SymmetryKind::Q, CMatrix::identity(3), 0, 2));
  if (symmetric_hopping)
    e.known_symmetries.push_back(symmetry(SymmetryKind::C, CMatrix::identity(3), 0, 2));
  if (close(v1, v3))
    e.known_symmetries.push_back(symmetry(SymmetryKind::C, flux_exchange(phi), 0, 2));
  if (close(v1, std::conj(v3)) && v2_real)
    e.known_symmetries.push_back(symmetry(SymmetryKind::K, flux_exchange(phi), 0, 2));
  return e;
}

CatalogEntry dissipative_three(double kappa, double phi, Complex v1, Complex v2, Complex v3,
                               double j) {
  CatalogEntry e;
  e.name = "dissipative_three";
  e.network.j_lead = j;
  const Complex link = -kI * kappa;
  e.network.hc = {{v1, link, j}, {link, v2, j * std::polar(1.0, -phi)},
                  {j, j * std::polar(1.0, phi), v3}};
  e.network.leads = {{1, 0, j}, {3, 2, j}};
  e.port_m = 1;
  e.port_n = 3;
  return e;
}

std::vector<std::string> model_names() {
  return {"uniform_two_site",   "c1_phase",    "q1_example",           "qI_gain_loss",
          "asym_two_site",      "isolator_single_loss", "unidirectional", "kI_three_resonator",
          "circulator_three_port", "dissipative_figS1"};
}

CatalogEntry make_model(const std::string& name, const ModelParameters& overrides) {
  ModelParameters p;
  std::set<std::string> allowed;
  auto param = [&](const std::string& key, double fallback) {
    allowed.insert(key);
    auto it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
  };
  auto check_unused = [&] {
    for (const auto& [key, _] : overrides)
      if (!allowed.contains(key))
        throw ValidationError("model '" + name + "' has no parameter '" + key + "'");
  };

  CatalogEntry e;
  if (name == "uniform_two_site") {
    const double j = param("J", 1.0);
    e.network = two_port_network({{0.0, j}, {j, 0.0}}, j);
    e.known_symmetries = {symmetry(SymmetryKind::Q, CMatrix::identity(2), 0, 1),
                          symmetry(SymmetryKind::C, CMatrix::identity(2), 0, 1),
                          symmetry(SymmetryKind::P, sigma_x(), 0, 1)};
    e.notes = "uniform chain segment; reflectionless";
  } else if (name == "c1_phase") {
    const double phi = param("phi", kPi / 3.0);
    e.network = two_port_network({{1.0, std::polar(1.0, -phi)}, {std::polar(1.0, phi), kI}},
                                 param("J", 1.0));
    e.known_symmetries = {symmetry(SymmetryKind::C,
                                   CMatrix{{1.0, 0.0}, {0.0, std::polar(1.0, 2.0 * phi)}}, 0, 1)};
    e.notes = "C_1 with c = diag(1, e^{2i phi}); tL = e^{2i phi} tR";
  } else if (name == "q1_example") {
    e.network = two_port_network({{0.0, kI - 1.0}, {kI + 1.0, 1.0}}, param("J", 1.0));
    e.known_symmetries = {symmetry(SymmetryKind::Q, CMatrix{{1.0, 0.0}, {0.0, -1.0}}, 0, 1)};
    e.notes = "pseudo-Hermitian, Q_1 with q = sigma_z";
  } else if (name == "qI_gain_loss") {
    const double j = param("J", 1.0);
    const double gamma = param("gamma", 1.0);
    const double phi = param("phi", 0.5);
    e.network = two_port_network(
        {{kI * gamma, j * std::exp(-phi)}, {j * std::exp(phi), -kI * gamma}}, j);
    e.known_symmetries = {symmetry(SymmetryKind::Q, sigma_x(), 0, 1)};
    e.notes = "Q_I with q = sigma_x; no protected constraint";
  } else if (name == "asym_two_site") {
    const double j = param("J", 1.0);
    const double phi = param("phi", 0.5);
    e.network = two_port_network({{0.0, j * std::exp(-phi)}, {j * std::exp(phi), 0.0}}, j);
    e.known_symmetries = {symmetry(SymmetryKind::C, sigma_x(), 0, 1)};
    e.notes = "asymmetric coupling; C_I keeps rL = rR";
  } else if (name == "isolator_single_loss") {
    const double j = param("J", 1.0);
    e = three_resonator_flux(0.0, -kI * param("gamma", 1.0), 0.0, param("phi", -kPi / 2.0), j);
    e.notes = "single loss {0, -i gamma, 0}; ideal isolator at gamma = J, phi = -+pi/2";
  } else if (name == "unidirectional") {
    const double j = param("J", 1.0);
    const double gamma = param("gamma", 1.0);
    e = three_resonator_flux(kI * gamma, -kI * gamma, 0.0, param("phi", -kPi / 2.0), j);
    e.notes = "{i gamma, -i gamma, 0}; not symmetry protected";
  } else if (name == "kI_three_resonator") {
    const double j = param("J", 1.0);
    const double gamma = param("gamma", 1.0);
    e = three_resonator_flux(kI * gamma, param("v2", 0.5), -kI * gamma, param("phi", -kPi / 2.0),
                             j);
    e.notes = "V1 = V3*, real V2; K_I only";
  } else if (name == "circulator_three_port") {
    e = three_resonator_flux(0.0, 0.0, 0.0, param("phi", kPi / 2.0), param("J", 1.0), true);
    e.notes = "three-port circulator; C_I of H_c' protects zero reflection";
  } else if (name == "dissipative_figS1") {
    const double j = param("J", 1.0);
    e = dissipative_three(param("kappa", j), param("phi", -kPi / 2.0), 0.0, param("v2", j), 0.0,
                          j);
    e.notes = "dissipative coupling, kappa = J, V = {0, J, 0}";
  } else {
    throw ValidationError("unknown model '" + name + "'");
  }
  check_unused();
  e.name = name;
  validate(e.network);
  return e;
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& name : model_names()) out.push_back(make_model(name));
  return out;
}

}  // namespace symscat
