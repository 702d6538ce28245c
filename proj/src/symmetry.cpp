#include "symscat/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "json_util.hpp"
#include "symscat/errors.hpp"

namespace symscat {

namespace {

constexpr double kZero = 1e-10;

double wrap_phase(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

CMatrix transform_argument(const CMatrix& h, SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::C: return h.transpose();
    case SymmetryKind::K: return h.conjugate();
    case SymmetryKind::Q: return h.adjoint();
    case SymmetryKind::P: return h;
  }
  return h;
}

bool near_identity(const CMatrix& m, Complex sign, double tol) {
  return frobenius_norm(m - CMatrix::identity(m.rows()) * sign) <= tol;
}

double relative_gap(Complex a, Complex b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

char to_char(SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::C: return 'C';
    case SymmetryKind::K: return 'K';
    case SymmetryKind::Q: return 'Q';
    case SymmetryKind::P: return 'P';
  }
  return '?';
}

SymmetryKind kind_from_char(char c) {
  switch (c) {
    case 'C': return SymmetryKind::C;
    case 'K': return SymmetryKind::K;
    case 'Q': return SymmetryKind::Q;
    case 'P': return SymmetryKind::P;
    default: throw InvalidOperator(std::string("unknown symmetry kind '") + c + "'");
  }
}

std::string to_string(const MappingClass& mapping) {
  char buf[64];
  switch (mapping.variant) {
    case MappingClass::Variant::Identity:
      std::snprintf(buf, sizeof buf, "Identity(alpha=%.12g)", mapping.alpha);
      return buf;
    case MappingClass::Variant::Interchange:
      std::snprintf(buf, sizeof buf, "Interchange(alpha=%.12g)", mapping.alpha);
      return buf;
    case MappingClass::Variant::Neither: return "Neither";
  }
  return "Neither";
}

std::string class_label(SymmetryKind kind, const MappingClass& mapping) {
  std::string label(1, to_char(kind));
  switch (mapping.variant) {
    case MappingClass::Variant::Identity: return label + "_1";
    case MappingClass::Variant::Interchange: return label + "_I";
    case MappingClass::Variant::Neither: return label + "_N";
  }
  return label;
}

std::string describe(const ConstraintPrediction& p) {
  std::vector<std::string> parts;
  if (p.t_phase_relation) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "tL=exp(i*%.12g)*tR", *p.t_phase_relation);
    parts.emplace_back(buf);
  } else if (p.t_modulus) {
    parts.emplace_back("|tL|=|tR|");
  }
  if (p.r_complex)
    parts.emplace_back("rL=rR");
  else if (p.r_modulus)
    parts.emplace_back("|rL|=|rR|");
  if (parts.empty()) return "none";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += ", " + parts[i];
  return out;
}

int check_operator(const SymmetrySpec& spec) {
  if (spec.parity != 1 && spec.parity != -1) throw InvalidOperator("parity must be +1 or -1");
  if (spec.u.empty() || !spec.u.square()) throw InvalidOperator("operator must be square");
  if (!is_unitary(spec.u, 1e-10)) throw InvalidOperator("operator is not unitary within 1e-10");
  if (spec.kind == SymmetryKind::C || spec.kind == SymmetryKind::K) {
    const CMatrix w = spec.u * spec.u.conjugate();
    if (near_identity(w, 1.0, 1e-10)) return 1;
    if (near_identity(w, -1.0, 1e-10)) return -1;
    throw InvalidOperator(std::string("operator of a ") + to_char(spec.kind) +
                          " symmetry must satisfy U U* = +-1");
  }
  if (!near_identity(spec.u * spec.u, 1.0, 1e-10))
    throw InvalidOperator(std::string("operator of a ") + to_char(spec.kind) +
                          " symmetry must satisfy U^2 = 1");
  return 1;
}

CMatrix apply_transform(const CMatrix& h, const SymmetrySpec& spec) {
  if (!h.square() || h.rows() != spec.u.rows() || !spec.u.square())
    throw DimensionMismatch("symmetry operator is " + std::to_string(spec.u.rows()) + "x" +
                            std::to_string(spec.u.cols()) + " but the matrix is " +
                            std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
  return spec.u * transform_argument(h, spec.kind) * spec.u.adjoint() *
         static_cast<double>(spec.parity);
}

double verify(const CMatrix& h, const SymmetrySpec& spec) {
  check_operator(spec);
  return frobenius_norm(h - apply_transform(h, spec)) / std::max(1.0, frobenius_norm(h));
}

MappingClass classify_mapping(const CMatrix& u, std::size_t m, std::size_t n) {
  if (!u.square() || m >= u.rows() || n >= u.rows() || m == n) return MappingClass::neither();
  auto zero = [](Complex z) { return std::abs(z) <= kZero; };
  auto unit = [](Complex z) { return std::abs(std::abs(z) - 1.0) <= 1e-9; };
  for (std::size_t j = 0; j < u.rows(); ++j) {
    if (j == m || j == n) continue;
    if (!zero(u(m, j)) || !zero(u(j, n))) return MappingClass::neither();
  }
  if (zero(u(m, n)) && zero(u(n, m)) && unit(u(m, m)) && unit(u(n, n)))
    return MappingClass::identity(wrap_phase(std::arg(u(n, n) / u(m, m))));
  if (zero(u(m, m)) && zero(u(n, n)) && unit(u(m, n)) && unit(u(n, m)))
    return MappingClass::interchange(wrap_phase(std::arg(u(n, m) / u(m, n))));
  return MappingClass::neither();
}

ConstraintPrediction predict(const SymmetrySpec& spec, const MappingClass& mapping) {
  ConstraintPrediction p;
  if (spec.parity != 1 || mapping.variant == MappingClass::Variant::Neither) return p;
  const bool identity = mapping.variant == MappingClass::Variant::Identity;
  switch (spec.kind) {
    case SymmetryKind::C:
      if (identity) {
        p.t_modulus = true;
        p.t_phase_relation = mapping.alpha;
      } else {
        p.r_complex = p.r_modulus = true;
      }
      break;
    case SymmetryKind::K:
      if (identity)
        p.r_modulus = true;
      else
        p.t_modulus = true;
      break;
    case SymmetryKind::Q:
      if (identity) {
        if (std::abs(std::exp(2.0 * kI * mapping.alpha) - 1.0) > 1e-9)
          throw InvalidOperator("a Q_1 operator requires exp(2i alpha) = 1");
        p.t_modulus = p.r_modulus = true;
      }
      break;
    case SymmetryKind::P:
      if (!identity) {
        p.t_modulus = true;
        p.r_complex = p.r_modulus = true;
      }
      break;
  }
  return p;
}

DeltaConditionReport check_delta_conditions(const DeltaInverseElements& d, double j_lead,
                                            Momentum /*k*/) {
  constexpr double tol = 1e-9;
  auto scale = [](std::initializer_list<Complex> zs) {
    double s = 1.0;
    for (const auto& z : zs) s = std::max(s, std::abs(z));
    return s;
  };
  DeltaConditionReport r;
  r.t_equal = std::abs(d.mn - d.nm) <= tol * scale({d.mn, d.nm});
  r.t_modulus = std::abs(std::abs(d.mn) - std::abs(d.nm)) <= tol * scale({d.mn, d.nm});
  r.r_equal = std::abs(d.mm - d.nn) <= tol * scale({d.mm, d.nn});
  const Complex cross = d.mn * d.nm;
  r.r_modulus = std::abs(d.mm.imag()) <= tol * scale({d.mm}) &&
                std::abs(d.nn.imag()) <= tol * scale({d.nn}) &&
                std::abs(cross.imag()) <= tol * scale({cross});
  const double ji2 = 1.0 / (j_lead * j_lead);
  const Complex first = ji2 + std::conj(d.mm) * std::conj(d.nn) - std::conj(d.mn) * std::conj(d.nm);
  const Complex second = d.nn * std::conj(d.mm) - d.mm * std::conj(d.nn);
  r.accidental_residual_1 = std::abs(first);
  r.accidental_residual_2 = std::abs(second);
  r.accidental_reflection =
      r.accidental_residual_1 <= tol * scale({ji2, d.mm * d.nn, cross}) &&
      r.accidental_residual_2 <= tol * scale({d.mm * d.nn});
  return r;
}

bool SweepReport::passed() const {
  for (const auto& s : specs)
    for (const auto& c : s.checks)
      if (!c.satisfied) return false;
  return true;
}

SweepReport validate_sweep(const ScatteringNetwork& input, int lead_m, int lead_n,
                           const std::vector<SymmetrySpec>& specs,
                           std::span<const double> k_grid) {
  validate(input);
  const ScatteringNetwork net = is_normalized(input) ? input : augment_general_coupling(input);
  const std::size_t m_site = find_lead(net, lead_m).site;
  const std::size_t n_site = find_lead(net, lead_n).site;

  SweepReport report;
  for (const auto& spec : specs) {
    SpecValidation v;
    v.spec = spec;
    v.mapping = classify_mapping(spec.u, m_site, n_site);
    v.prediction = predict(spec, v.mapping);
    if (v.prediction.t_phase_relation)
      v.checks.push_back({"tL=exp(i*alpha)*tR", 0.0, true});
    if (v.prediction.t_modulus) v.checks.push_back({"|tL|=|tR|", 0.0, true});
    if (v.prediction.r_complex) v.checks.push_back({"rL=rR", 0.0, true});
    if (v.prediction.r_modulus) v.checks.push_back({"|rL|=|rR|", 0.0, true});
    report.specs.push_back(std::move(v));
  }

  for (const double kv : k_grid) {
    const Momentum k(kv);
    const CMatrix effective = effective_two_port(net, lead_m, lead_n, k);
    for (auto& v : report.specs) {
      const double residual = verify(effective, v.spec);
      v.max_spec_residual = std::max(v.max_spec_residual, residual);
      if (residual > kSymmetryTolerance) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%c symmetry (parity %+d) fails on the effective centre at k=%.12g "
                      "(residual %.3g)",
                      to_char(v.spec.kind), v.spec.parity, kv, residual);
        throw SymmetryNotSatisfied(buf);
      }
    }
    ++report.points;
    const auto c = two_port(net, lead_m, lead_n, k);
    if (c.divergent) {
      ++report.skipped_divergent;
      continue;
    }
    const double t_gap = std::abs(std::abs(c.t_l) - std::abs(c.t_r));
    const double r_gap = std::abs(std::abs(c.r_l) - std::abs(c.r_r));
    report.max_t_modulus_gap = std::max(report.max_t_modulus_gap, t_gap);
    report.max_r_modulus_gap = std::max(report.max_r_modulus_gap, r_gap);
    const double t_scale = std::max({1.0, std::abs(c.t_l), std::abs(c.t_r)});
    const double r_scale = std::max({1.0, std::abs(c.r_l), std::abs(c.r_r)});
    for (auto& v : report.specs)
      for (auto& check : v.checks) {
        double violation = 0.0;
        if (check.name == "|tL|=|tR|") {
          violation = t_gap / t_scale;
        } else if (check.name == "|rL|=|rR|") {
          violation = r_gap / r_scale;
        } else if (check.name == "rL=rR") {
          violation = relative_gap(c.r_l, c.r_r);
        } else {
          violation = relative_gap(c.t_l, std::exp(kI * *v.prediction.t_phase_relation) * c.t_r);
        }
        check.max_violation = std::max(check.max_violation, violation);
        check.satisfied = check.max_violation <= kConstraintTolerance;
      }
  }
  return report;
}

bool equal_up_to_phase(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const auto ea = a.entries();
  const auto eb = b.entries();
  std::size_t pivot = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < ea.size(); ++i)
    if (std::abs(ea[i]) > best) {
      best = std::abs(ea[i]);
      pivot = i;
    }
  if (best == 0.0) return frobenius_norm(b) <= tol;
  if (std::abs(eb[pivot]) <= tol) return false;
  const Complex phase = eb[pivot] / ea[pivot];
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  return frobenius_norm(a * phase - b) <= tol * std::max(1.0, frobenius_norm(a));
}

namespace {

/// Operator with U e_j = exp(i theta_j) e_{perm[j]}.
CMatrix generalized_permutation(const std::vector<std::size_t>& perm,
                                const std::vector<double>& theta) {
  CMatrix u(perm.size(), perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) u(perm[j], j) = std::polar(1.0, theta[j]);
  return u;
}

/// Global phase fixed so the first nonzero entry of row m is real positive.
/// Q and P operators are first rescaled so U^2 = 1, leaving a sign to fix.
std::optional<CMatrix> fix_gauge(CMatrix u, SymmetryKind kind, std::size_t m) {
  Complex lead{};
  for (std::size_t j = 0; j < u.cols(); ++j)
    if (std::abs(u(m, j)) > kZero) {
      lead = u(m, j);
      break;
    }
  if (kind == SymmetryKind::Q || kind == SymmetryKind::P) {
    const CMatrix sq = u * u;
    const Complex chi = sq(0, 0);
    if (!near_identity(sq, chi, 1e-9)) return std::nullopt;
    u *= std::polar(1.0, -0.5 * std::arg(chi));
    lead *= std::polar(1.0, -0.5 * std::arg(chi));
    if (lead.real() < -1e-12 || (std::abs(lead.real()) <= 1e-12 && lead.imag() < 0.0)) u *= -1.0;
  } else {
    u *= std::polar(1.0, -std::arg(lead));
  }
  for (auto& z : u.entries()) {
    if (std::abs(z.real()) < 1e-15) z.real(0.0);
    if (std::abs(z.imag()) < 1e-15) z.imag(0.0);
  }
  return u;
}

}  // namespace

std::vector<DetectedSymmetry> detect(const CMatrix& h, std::size_t m, std::size_t n) {
  if (!h.square() || h.rows() > 8 || h.rows() < 2)
    throw DimensionMismatch("detect supports square matrices with 2 <= N <= 8");
  if (m >= h.rows() || n >= h.rows() || m == n)
    throw DimensionMismatch("connection sites must be distinct and inside the matrix");
  const std::size_t size = h.rows();
  const double zero = kZero * std::max(1.0, frobenius_norm(h));

  std::vector<DetectedSymmetry> found;
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    bool involution = true;
    for (std::size_t i = 0; i < size && involution; ++i) involution = perm[perm[i]] == i;
    if (!involution) continue;
    const bool fixes = perm[m] == m && perm[n] == n;
    const bool swaps = perm[m] == n && perm[n] == m;
    if (!fixes && !swaps) continue;

    for (const SymmetryKind kind :
         {SymmetryKind::C, SymmetryKind::K, SymmetryKind::Q, SymmetryKind::P}) {
      const CMatrix f = transform_argument(h, kind);
      for (const int parity : {1, -1}) {
        // H_{perm(i) perm(j)} = parity * exp(i(theta_i - theta_j)) * F_ij.
        std::vector<double> theta(size, 0.0);
        std::vector<bool> seen(size, false);
        for (std::size_t root = 0; root < size; ++root) {
          if (seen[root]) continue;
          seen[root] = true;
          std::queue<std::size_t> frontier;
          frontier.push(root);
          while (!frontier.empty()) {
            const std::size_t i = frontier.front();
            frontier.pop();
            for (std::size_t j = 0; j < size; ++j) {
              if (seen[j] || i == j) continue;
              Complex fij = f(i, j);
              Complex hij = h(perm[i], perm[j]);
              double diff = 0.0;
              if (std::abs(fij) > zero) {
                diff = std::arg(hij / (static_cast<double>(parity) * fij));
                theta[j] = theta[i] - diff;
              } else if (std::abs(f(j, i)) > zero) {
                diff = std::arg(h(perm[j], perm[i]) / (static_cast<double>(parity) * f(j, i)));
                theta[j] = theta[i] + diff;
              } else {
                continue;
              }
              seen[j] = true;
              frontier.push(j);
            }
          }
        }
        SymmetrySpec spec{kind, parity, generalized_permutation(perm, theta)};
        auto gauged = fix_gauge(spec.u, kind, m);
        if (!gauged) continue;
        spec.u = std::move(*gauged);
        try {
          if (verify(h, spec) > kSymmetryTolerance) continue;
        } catch (const InvalidOperator&) {
          continue;
        }
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& d) {
          return d.spec.kind == spec.kind && d.spec.parity == spec.parity &&
                 equal_up_to_phase(d.spec.u, spec.u);
        });
        if (duplicate) continue;
        const MappingClass mapping = classify_mapping(spec.u, m, n);
        found.push_back({std::move(spec), mapping});
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

std::vector<CMatrix> generate_ensemble(SymmetryKind kind, int parity, const CMatrix& u,
                                       std::uint64_t seed, std::size_t count) {
  const SymmetrySpec spec{kind, parity, u};
  check_operator(spec);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t size = u.rows();
  std::vector<CMatrix> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    CMatrix a(size, size);
    for (auto& z : a.entries()) z = {normal(rng), normal(rng)};
    CMatrix h = (a + apply_transform(a, spec)) * 0.5;
    out.push_back(std::move(h));
  }
  return out;
}

SymmetrySpec parse_symmetry_spec(std::string_view text) {
  using detail::json;
  const json doc = detail::parse_document(text);
  detail::reject_unknown_keys(doc, {"kind", "parity", "u"}, "");
  const json& kind = detail::require(doc, "kind", "");
  if (!kind.is_string() || kind.get<std::string>().size() != 1 ||
      std::string("CKQP").find(kind.get<std::string>()[0]) == std::string::npos)
    throw ParseError("kind must be one of \"C\", \"K\", \"Q\", \"P\"", 0, "kind");
  SymmetrySpec spec;
  spec.kind = kind_from_char(kind.get<std::string>()[0]);
  const auto parity = detail::as_integer(detail::require(doc, "parity", ""), "parity");
  if (parity != 1 && parity != -1) throw ParseError("parity must be 1 or -1", 0, "parity");
  spec.parity = static_cast<int>(parity);
  spec.u = detail::as_matrix(detail::require(doc, "u", ""), "u");
  if (!spec.u.square()) throw ValidationError("operator u must be square");
  return spec;
}

std::string serialize_symmetry_spec(const SymmetrySpec& spec) {
  std::ostringstream out;
  out << "{\n  \"kind\": \"" << to_char(spec.kind) << "\",\n  \"parity\": " << spec.parity
      << ",\n  \"u\": " << detail::matrix_literal(spec.u, "  ") << "\n}\n";
  return out.str();
}

SymmetrySpec load_symmetry_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open symmetry spec file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_symmetry_spec(buffer.str());
}

}  // namespace symscat
