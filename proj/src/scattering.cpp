#include "symscat/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "symscat/errors.hpp"

namespace symscat {

namespace {

struct PortSites {
  ScatteringNetwork net;  // normalized
  std::size_t m;
  std::size_t n;
};

PortSites normalized_ports(const ScatteringNetwork& input, int lead_m, int lead_n) {
  if (lead_m == lead_n) throw SamePort("ports must be distinct leads");
  validate(input);
  find_lead(input, lead_m);
  find_lead(input, lead_n);
  PortSites p{is_normalized(input) ? input : augment_general_coupling(input), 0, 0};
  p.m = find_lead(p.net, lead_m).site;
  p.n = find_lead(p.net, lead_n).site;
  return p;
}

CMatrix delta_matrix(const ScatteringNetwork& net, int lead_m, int lead_n, Momentum k) {
  CMatrix delta = effective_two_port(net, lead_m, lead_n, k);
  const double shift = 2.0 * net.j_lead * std::cos(k.value());
  for (std::size_t i = 0; i < delta.rows(); ++i) delta(i, i) -= shift;
  return delta;
}

/// (adj A)_{ij} = (-1)^{i+j} det(A without row j and column i).
Complex cofactor_adjugate(const CMatrix& a, std::size_t i, std::size_t j) {
  const std::array<std::size_t, 1> row{j};
  const std::array<std::size_t, 1> col{i};
  const Complex minor = determinant(remove_rows_cols(a, row, col));
  return ((i + j) % 2 == 0) ? minor : -minor;
}

ScatteringCoefficients finish(double k, Complex den, double den_scale, Complex t_l, Complex r_l,
                              Complex t_r, Complex r_r) {
  const double num_scale =
      std::max({std::abs(t_l), std::abs(r_l), std::abs(t_r), std::abs(r_r)});
  const double scale = std::max({den_scale, num_scale, std::numeric_limits<double>::min()});
  ScatteringCoefficients c;
  c.k = k;
  c.denominator_ratio = std::abs(den) / scale;
  c.divergent = c.denominator_ratio < kDivergenceThreshold;
  c.t_l = t_l / den;
  c.r_l = r_l / den;
  c.t_r = t_r / den;
  c.r_r = r_r / den;
  return c;
}

}  // namespace

std::size_t SMatrix::index_of(int lead_id) const {
  auto it = std::find(ports.begin(), ports.end(), lead_id);
  if (it == ports.end()) throw UnknownLead("no port with lead id " + std::to_string(lead_id));
  return static_cast<std::size_t>(it - ports.begin());
}

DeltaInverseElements delta_inverse_elements(const ScatteringNetwork& net, int lead_m, int lead_n,
                                            Momentum k) {
  const PortSites p = normalized_ports(net, lead_m, lead_n);
  const CMatrix inv = invert(delta_matrix(p.net, lead_m, lead_n, k));
  return {inv(p.m, p.m), inv(p.m, p.n), inv(p.n, p.m), inv(p.n, p.n)};
}

ScatteringCoefficients coefficients_from_elements(const DeltaInverseElements& d, double j_lead,
                                                  Momentum k) {
  const double ji = 1.0 / j_lead;
  const Complex e = std::exp(kI * k.value());
  const Complex ec = std::conj(e);
  const Complex den = (ji + d.mm * e) * (ji + d.nn * e) - d.mn * d.nm * e * e;
  const Complex t_l = d.nm * ji * (e - ec);
  const Complex r_l = d.mn * d.nm - (ji * e + d.mm) * (ji * ec + d.nn);
  const Complex t_r = d.mn * ji * (e - ec);
  const Complex r_r = d.mn * d.nm - (ji * e + d.nn) * (ji * ec + d.mm);
  const double den_scale = std::abs(ji * ji) + std::abs(ji * (d.mm + d.nn)) +
                           std::abs(d.mm * d.nn) + std::abs(d.mn * d.nm);
  return finish(k.value(), den, den_scale, t_l, r_l, t_r, r_r);
}

ScatteringCoefficients two_port(const ScatteringNetwork& net, int lead_m, int lead_n, Momentum k) {
  const PortSites p = normalized_ports(net, lead_m, lead_n);
  const CMatrix delta = delta_matrix(p.net, lead_m, lead_n, k);

  // Each Delta^{-1} element is adj(Delta)/det(Delta); the 2x2 minor of
  // Delta^{-1} on {m, n} is the complementary principal minor over det.
  const Complex det = determinant(delta);
  const Complex c_mm = cofactor_adjugate(delta, p.m, p.m);
  const Complex c_mn = cofactor_adjugate(delta, p.m, p.n);
  const Complex c_nm = cofactor_adjugate(delta, p.n, p.m);
  const Complex c_nn = cofactor_adjugate(delta, p.n, p.n);
  const std::array<std::size_t, 2> ports{p.m, p.n};
  const Complex minor = determinant(remove_rows_cols(delta, ports, ports));

  const double ji = 1.0 / p.net.j_lead;
  const Complex e = std::exp(kI * k.value());
  const Complex ec = std::conj(e);

  const Complex den = det * ji * ji + ji * e * (c_mm + c_nn) + e * e * minor;
  const Complex t_l = c_nm * ji * (e - ec);
  const Complex t_r = c_mn * ji * (e - ec);
  const Complex r_l = -minor - det * ji * ji - ji * e * c_nn - ji * ec * c_mm;
  const Complex r_r = -minor - det * ji * ji - ji * e * c_mm - ji * ec * c_nn;
  const double den_scale =
      std::abs(det) * ji * ji + ji * (std::abs(c_mm) + std::abs(c_nn)) + std::abs(minor);
  return finish(k.value(), den, den_scale, t_l, r_l, t_r, r_r);
}

namespace {

/// Outgoing amplitudes of every attached lead for unit incidence in `source`.
/// Unknowns: centre amplitudes, then one outgoing amplitude per lead.
CVector solve_stationary(const ScatteringNetwork& net, const std::vector<LeadAttachment>& leads,
                         std::size_t source, Momentum k) {
  const std::size_t n = net.size();
  const std::size_t p = leads.size();
  const double kk = k.value();
  const double j = net.j_lead;
  CMatrix a(n + p, n + p);
  CVector b(n + p);

  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = net.hc(r, c);
  for (std::size_t r = 0; r < n; ++r) a(r, r) -= 2.0 * j * std::cos(kk);

  for (std::size_t l = 0; l < p; ++l) {
    const auto& lead = leads[l];
    // Lead amplitude psi(s) = A exp(-ik(s - o)) + B exp(ik(s - o)), s >= 1.
    const double o = std::abs(lead.g - j) <= 1e-14 * j ? 0.0 : 1.0;
    const double incoming = l == source ? 1.0 : 0.0;
    const Complex in_first = std::exp(-kI * kk * (1.0 - o));
    const Complex out_first = std::exp(kI * kk * (1.0 - o));
    // Centre row: coupling to the first lead site.
    a(lead.site, n + l) += lead.g * out_first;
    b[lead.site] -= lead.g * incoming * in_first;
    // First lead site: J psi(0) = g psi_c, with psi extended to s = 0.
    a(n + l, n + l) = j * std::exp(-kI * kk * o);
    a(n + l, lead.site) = -lead.g;
    b[n + l] = -j * incoming * std::exp(kI * kk * o);
  }
  const CVector x = solve(a, b);
  return CVector(x.begin() + static_cast<std::ptrdiff_t>(n), x.end());
}

std::vector<LeadAttachment> connected_leads(const ScatteringNetwork& net) {
  std::vector<LeadAttachment> out;
  for (const auto& lead : net.leads)
    if (lead.g != 0.0) out.push_back(lead);
  return out;
}

std::size_t position(const std::vector<LeadAttachment>& leads, int id) {
  for (std::size_t i = 0; i < leads.size(); ++i)
    if (leads[i].id == id) return i;
  throw UnknownLead("lead " + std::to_string(id) + " is not connected (g = 0)");
}

}  // namespace

ScatteringCoefficients oracle_two_port(const ScatteringNetwork& net, int lead_m, int lead_n,
                                       Momentum k) {
  if (lead_m == lead_n) throw SamePort("ports must be distinct leads");
  validate(net);
  find_lead(net, lead_m);
  find_lead(net, lead_n);
  const auto leads = connected_leads(net);
  const std::size_t im = position(leads, lead_m);
  const std::size_t in = position(leads, lead_n);
  const CVector forward = solve_stationary(net, leads, im, k);
  const CVector backward = solve_stationary(net, leads, in, k);
  ScatteringCoefficients c;
  c.k = k.value();
  c.r_l = forward[im];
  c.t_l = forward[in];
  c.t_r = backward[im];
  c.r_r = backward[in];
  return c;
}

SMatrix s_matrix(const ScatteringNetwork& net, Momentum k) {
  validate(net);
  const auto leads = connected_leads(net);
  if (leads.size() < 2) throw ValidationError("an S-matrix needs at least two connected leads");
  const std::size_t p = leads.size();
  SMatrix out;
  for (const auto& lead : leads) out.ports.push_back(lead.id);
  out.s = CMatrix(p, p);

  std::vector<std::vector<Complex>> reflections(p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      const auto c = two_port(net, leads[a].id, leads[b].id, k);
      out.divergent = out.divergent || c.divergent;
      out.s(b, a) = c.t_l;
      out.s(a, b) = c.t_r;
      reflections[a].push_back(c.r_l);
      reflections[b].push_back(c.r_r);
    }
  for (std::size_t a = 0; a < p; ++a) {
    const Complex first = reflections[a].front();
    if (!out.divergent)
      for (const Complex& r : reflections[a])
        if (std::abs(r - first) > 1e-9 * std::max(1.0, std::abs(first)))
          throw InconsistentReflection("reflection in lead " + std::to_string(leads[a].id) +
                                       " depends on the partner lead used for the reduction");
    out.s(a, a) = first;
  }
  return out;
}

SMatrix oracle_s_matrix(const ScatteringNetwork& net, Momentum k) {
  validate(net);
  const auto leads = connected_leads(net);
  if (leads.size() < 2) throw ValidationError("an S-matrix needs at least two connected leads");
  SMatrix out;
  for (const auto& lead : leads) out.ports.push_back(lead.id);
  out.s = CMatrix(leads.size(), leads.size());
  for (std::size_t in = 0; in < leads.size(); ++in) {
    const CVector column = solve_stationary(net, leads, in, k);
    for (std::size_t o = 0; o < leads.size(); ++o) out.s(o, in) = column[o];
  }
  return out;
}

std::vector<SingularityHit> singularity_scan(const ScatteringNetwork& net, int lead_m, int lead_n,
                                             std::span<const double> k_grid) {
  std::vector<SingularityHit> hits;
  for (const double k : k_grid) {
    const auto c = two_port(net, lead_m, lead_n, Momentum(k));
    if (c.divergent) hits.push_back({k, c.denominator_ratio});
  }
  return hits;
}

std::vector<double> linspace(double a, double b, std::size_t count, bool open) {
  std::vector<double> out;
  out.reserve(count);
  if (count == 0) return out;
  if (open) {
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(count + 1));
  } else if (count == 1) {
    out.push_back(a);
  } else {
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

std::vector<double> band_grid(std::size_t count) {
  return linspace(-std::numbers::pi, 0.0, count, true);
}

}  // namespace symscat
