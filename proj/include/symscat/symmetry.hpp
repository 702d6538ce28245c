#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symscat/network.hpp"
#include "symscat/numerics.hpp"
#include "symscat/scattering.hpp"

namespace symscat {

/// f(H) in H = eps * U f(H) U^{-1}: transpose (C), entrywise conjugate (K),
/// conjugate transpose (Q), identity (P).
enum class SymmetryKind { C, K, Q, P };

char to_char(SymmetryKind kind);
SymmetryKind kind_from_char(char c);

struct SymmetrySpec {
  SymmetryKind kind = SymmetryKind::P;
  int parity = 1;  // +1 or -1
  CMatrix u;
};

/// How U acts on the two connection sites m, n (up to the phase exp(i alpha)).
struct MappingClass {
  enum class Variant { Identity, Interchange, Neither };
  Variant variant = Variant::Neither;
  double alpha = 0.0;  // in (-pi, pi]; meaningless for Neither

  static MappingClass identity(double alpha) { return {Variant::Identity, alpha}; }
  static MappingClass interchange(double alpha) { return {Variant::Interchange, alpha}; }
  static MappingClass neither() { return {}; }
};

std::string to_string(const MappingClass& mapping);
/// e.g. "C_1", "K_I", "Q_1", "P_I" (N for a Neither mapping).
std::string class_label(SymmetryKind kind, const MappingClass& mapping);

/// Coefficient relations a symmetry guarantees for one port pair.
struct ConstraintPrediction {
  bool t_modulus = false;                // |t_L| = |t_R|
  std::optional<double> t_phase_relation;  // t_L = exp(i alpha) t_R
  bool r_modulus = false;                // |r_L| = |r_R|
  bool r_complex = false;                // r_L = r_R

  bool none() const { return !t_modulus && !r_modulus; }
  bool operator==(const ConstraintPrediction&) const = default;
};

std::string describe(const ConstraintPrediction& p);

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kConstraintTolerance = 1e-8;

/// Checks unitarity (1e-10) and U U* = +-1 for C/K or U^2 = 1 for Q/P.
/// Throws InvalidOperator. Returns the sign s of U U* = s 1 for C/K and +1
/// for Q/P.
int check_operator(const SymmetrySpec& spec);

CMatrix apply_transform(const CMatrix& h, const SymmetrySpec& spec);

/// ||h - eps U f(h) U^{-1}||_F / max(1, ||h||_F). Validates the operator first.
double verify(const CMatrix& h, const SymmetrySpec& spec);
inline bool is_symmetric_under(const CMatrix& h, const SymmetrySpec& spec,
                               double tol = kSymmetryTolerance) {
  return verify(h, spec) <= tol;
}

/// Classifies the action of u on sites (m, n), 0-based. Entries count as zero
/// below 1e-10; the phase of the entry taken from row m is divided out.
MappingClass classify_mapping(const CMatrix& u, std::size_t m_site, std::size_t n_site);

/// Symmetry-protected constraints for one symmetry class. Odd parity and the
/// Q_I, P_1 classes predict nothing. Throws InvalidOperator for a Q_1
/// operator with exp(2i alpha) != 1.
ConstraintPrediction predict(const SymmetrySpec& spec, const MappingClass& mapping);

struct DeltaConditionReport {
  bool t_equal = false;          // D_mn = D_nm
  bool t_modulus = false;        // |D_mn| = |D_nm|
  bool r_equal = false;          // D_mm = D_nn
  bool r_modulus = false;        // D_mm, D_nn, D_mn D_nm all real
  bool accidental_reflection = false;
  double accidental_residual_1 = 0.0;  // |J^-2 + D*_mm D*_nn - D*_mn D*_nm|
  double accidental_residual_2 = 0.0;  // |D_nn D*_mm - D_mm D*_nn|
};

/// Sufficient conditions on Delta^{-1} for symmetric coefficients, each
/// tested at 1e-9 relative to the element magnitudes.
DeltaConditionReport check_delta_conditions(const DeltaInverseElements& d, double j_lead,
                                            Momentum k);

struct ConstraintCheck {
  std::string name;      // e.g. "|tL|=|tR|"
  double max_violation = 0.0;
  bool satisfied = true;
};

struct SpecValidation {
  SymmetrySpec spec;
  MappingClass mapping;
  ConstraintPrediction prediction;
  std::vector<ConstraintCheck> checks;
  double max_spec_residual = 0.0;
};

struct SweepReport {
  std::vector<SpecValidation> specs;
  std::size_t points = 0;
  std::size_t skipped_divergent = 0;
  /// Largest ||t_L|-|t_R|| and ||r_L|-|r_R|| seen, reported as witnesses of
  /// asymmetry when nothing is predicted.
  double max_t_modulus_gap = 0.0;
  double max_r_modulus_gap = 0.0;

  bool passed() const;
};

/// Checks every spec against H_c' at each momentum (SymmetryNotSatisfied on
/// failure), then checks the predicted relations on two_port output at 1e-8.
SweepReport validate_sweep(const ScatteringNetwork& net, int lead_m, int lead_n,
                           const std::vector<SymmetrySpec>& specs,
                           std::span<const double> k_grid);

struct DetectedSymmetry {
  SymmetrySpec spec;
  MappingClass mapping;
};

/// Exhaustive search over generalized permutation operators (involutive
/// permutation times diagonal phases) that fix or swap the sites m and n.
/// Phases follow from the nonzero entries of h over a spanning forest and
/// are cross-checked on every remaining entry. Each result passes verify().
/// Limited to N <= 8.
std::vector<DetectedSymmetry> detect(const CMatrix& h, std::size_t m_site, std::size_t n_site);

/// True when a and b differ only by a global phase.
bool equal_up_to_phase(const CMatrix& a, const CMatrix& b, double tol = 1e-9);

/// H = (A + eps U f(A) U^{-1}) / 2 for seeded complex Gaussian A.
std::vector<CMatrix> generate_ensemble(SymmetryKind kind, int parity, const CMatrix& u,
                                       std::uint64_t seed, std::size_t count);

/// Symmetry spec document: { "kind": "C|K|Q|P", "parity": 1|-1, "u": [[[re, im], ...]] }.
SymmetrySpec parse_symmetry_spec(std::string_view text);
std::string serialize_symmetry_spec(const SymmetrySpec& spec);
SymmetrySpec load_symmetry_spec(const std::filesystem::path& path);

}  // namespace symscat
