#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "symscat/numerics.hpp"

namespace symscat {

/// Lead momentum on the right-moving branch k in (-pi, 0). With
/// omega = omega0 + 2J cos k and time factor exp(-i omega t), exp(iks) moves
/// toward larger s exactly when sin k < 0.
class Momentum {
 public:
  /// Throws OutOfBand unless -pi < k < 0.
  explicit Momentum(double k);

  double value() const noexcept { return k_; }
  static bool in_band(double k) noexcept;

 private:
  double k_;
};

struct LeadAttachment {
  int id = 0;
  std::size_t site = 0;  // 0-based center site
  double g = 1.0;        // connection coupling, same units as J

  bool operator==(const LeadAttachment&) const = default;
};

/// Scattering center plus the uniform leads attached to it.
struct ScatteringNetwork {
  CMatrix hc;
  std::vector<LeadAttachment> leads;
  double j_lead = 1.0;
  double omega0 = 0.0;

  std::size_t size() const noexcept { return hc.rows(); }
  bool operator==(const ScatteringNetwork&) const = default;
};

/// Throws ValidationError on a non-square or non-finite center, J <= 0,
/// out-of-range lead sites, duplicate lead ids or two leads on one site.
void validate(const ScatteringNetwork& net);

const LeadAttachment& find_lead(const ScatteringNetwork& net, int lead_id);

double dispersion(const ScatteringNetwork& net, Momentum k);
/// Inverse of dispersion on the right-moving branch. Throws OutOfBand when
/// |omega - omega0| >= 2J.
Momentum momentum_for_frequency(const ScatteringNetwork& net, double omega);

/// True when every lead couples with exactly g = J (after dropping g = 0).
bool is_normalized(const ScatteringNetwork& net);

/// Absorbs the first site of every lead with g not in {0, J} into the center
/// and reattaches the lead to it with g = J. Leads with g = 0 are dropped.
ScatteringNetwork augment_general_coupling(const ScatteringNetwork& net);

/// H_c' for the port pair (m, n): every other lead j is replaced by its
/// self-energy g_j^2 exp(ik) / J on the attachment site.
CMatrix effective_two_port(const ScatteringNetwork& net, int lead_m, int lead_n, Momentum k);

/// Network document:
///   { "n": int, "omega0": real, "J": real,
///     "hc": [[[re, im], ...], ...],
///     "leads": [{"id": int, "site": int (1-based), "g": real}, ...] }
/// Unknown keys are rejected. omega0 is optional and defaults to 0.
ScatteringNetwork parse_network(std::string_view text);
std::string serialize_network(const ScatteringNetwork& net);

ScatteringNetwork load_network(const std::filesystem::path& path);

}  // namespace symscat
