#pragma once

#include <span>
#include <vector>

#include "symscat/network.hpp"
#include "symscat/numerics.hpp"

namespace symscat {

/// Forward (L, incidence in lead m) and backward (R, incidence in lead n)
/// coefficients for one port pair at one momentum.
struct ScatteringCoefficients {
  double k = 0.0;
  Complex t_l, r_l, t_r, r_r;
  /// Set at (or numerically at) a spectral singularity. Values are then raw
  /// and must not be used in equality assertions.
  bool divergent = false;
  /// |denominator| relative to the magnitude of its terms and numerators.
  double denominator_ratio = 1.0;
};

/// The 2x2 block of Delta^{-1} on the port sites,
/// Delta = H_c' - 2J cos(k) 1.
struct DeltaInverseElements {
  Complex mm, mn, nm, nn;
};

/// S[out][in]; the diagonal holds reflections. For ports (m, n) this reads
/// [[r_L, t_R], [t_L, r_R]].
struct SMatrix {
  std::vector<int> ports;
  CMatrix s;
  bool divergent = false;

  std::size_t index_of(int lead_id) const;
};

struct SingularityHit {
  double k;
  double denominator_ratio;
};

inline constexpr double kDivergenceThreshold = 1e-10;

/// Throws SingularMatrix when Delta itself is singular, which happens at
/// bound states of H_c' embedded in the band (for example the ring models at
/// phi = +-pi/2, k = -pi/2). two_port does not need the inverse and stays finite there.
DeltaInverseElements delta_inverse_elements(const ScatteringNetwork& net, int lead_m, int lead_n,
                                            Momentum k);

/// Closed-form coefficients evaluated from the four Delta^{-1} elements.
ScatteringCoefficients coefficients_from_elements(const DeltaInverseElements& d, double j_lead,
                                                  Momentum k);

/// Closed-form two-port coefficients. The four fractions are evaluated with
/// the common factor det(Delta) cleared from numerator and denominator, so
/// only cofactors of Delta and the principal minor complementary to {m, n}
/// enter. Leads with g not in {0, J} are absorbed first.
ScatteringCoefficients two_port(const ScatteringNetwork& net, int lead_m, int lead_n, Momentum k);

/// Direct solve of the stationary equations for centre amplitudes and the
/// outgoing amplitude of every lead. Independent of the closed form; handles
/// any coupling g. A lead with g != J has its reference plane on its first
/// site, the same plane augment_general_coupling produces.
ScatteringCoefficients oracle_two_port(const ScatteringNetwork& net, int lead_m, int lead_n,
                                       Momentum k);

/// Full S-matrix from pairwise closed-form reductions. Reflections obtained
/// from different partner leads must agree within 1e-9, otherwise
/// InconsistentReflection is thrown.
SMatrix s_matrix(const ScatteringNetwork& net, Momentum k);

/// Full S-matrix from one direct solve per input lead.
SMatrix oracle_s_matrix(const ScatteringNetwork& net, Momentum k);

std::vector<SingularityHit> singularity_scan(const ScatteringNetwork& net, int lead_m, int lead_n,
                                             std::span<const double> k_grid);

/// `count` equally spaced points strictly inside (a, b) when open, or
/// spanning [a, b] inclusive when not.
std::vector<double> linspace(double a, double b, std::size_t count, bool open);
/// `count` equally spaced momenta strictly inside (-pi, 0).
std::vector<double> band_grid(std::size_t count);

}  // namespace symscat
