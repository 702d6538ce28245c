#include "symscat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "symscat/errors.hpp"
#include "symscat/scattering.hpp"

namespace symscat {

namespace {

constexpr double kRunaway = 1e12;
constexpr double kClearedFraction = 1e-4;

/// Compressed-row copy of a (mostly banded) dense matrix.
struct SparseRows {
  explicit SparseRows(const CMatrix& m) : offsets{0} {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (m(r, c) != Complex{}) {
          columns.push_back(c);
          values.push_back(m(r, c));
        }
      offsets.push_back(columns.size());
    }
  }

  /// out = -i * H * x
  void apply(const CVector& x, CVector& out) const {
    for (std::size_t r = 0; r + 1 < offsets.size(); ++r) {
      Complex acc{};
      for (std::size_t p = offsets[r]; p < offsets[r + 1]; ++p) acc += values[p] * x[columns[p]];
      out[r] = Complex(acc.imag(), -acc.real());
    }
  }

  std::vector<std::size_t> offsets;
  std::vector<std::size_t> columns;
  std::vector<Complex> values;
};

void rk4_steps(LatticeState& state, const SparseRows& h, double dt, std::size_t steps) {
  const std::size_t n = state.amplitudes.size();
  CVector k1(n), k2(n), k3(n), k4(n), tmp(n);
  CVector& y = state.amplitudes;
  for (std::size_t s = 0; s < steps; ++s) {
    h.apply(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    h.apply(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    h.apply(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    h.apply(tmp, k4);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      peak = std::max(peak, std::abs(y[i]));
    }
    state.t += dt;
    if (!(peak <= kRunaway)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "amplitude %.3g exceeds 1e12 at t=%.6g (runaway gain)", peak,
                    state.t);
      throw Instability(buf);
    }
  }
}

void advance(LatticeState& state, const SparseRows& h, double dt, double t_end) {
  if (t_end <= state.t) return;
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - state.t) / dt - 1e-9));
  const double step = (t_end - state.t) / static_cast<double>(steps);
  rk4_steps(state, h, step, steps);
  state.t = t_end;
}

std::vector<LeadAttachment> connected(const ScatteringNetwork& net) {
  std::vector<LeadAttachment> out;
  for (const auto& lead : net.leads)
    if (lead.g != 0.0) out.push_back(lead);
  return out;
}

}  // namespace

LatticeLayout::LatticeLayout(const ScatteringNetwork& net, std::size_t lead_length)
    : center_(net.size()), lead_length_(lead_length) {
  for (const auto& lead : connected(net)) leads_.push_back(lead.id);
}

std::size_t LatticeLayout::slot(int lead_id) const {
  auto it = std::find(leads_.begin(), leads_.end(), lead_id);
  if (it == leads_.end()) throw UnknownLead("lattice has no lead " + std::to_string(lead_id));
  return static_cast<std::size_t>(it - leads_.begin());
}

std::size_t LatticeLayout::center_index(std::size_t site) const {
  if (site >= center_) throw DimensionMismatch("centre site out of range");
  return site;
}

std::size_t LatticeLayout::lead_index(int lead_id, std::size_t offset) const {
  if (offset < 1 || offset > lead_length_) throw DimensionMismatch("lead offset out of range");
  return center_ + slot(lead_id) * lead_length_ + (offset - 1);
}

std::string LatticeLayout::label(std::size_t index) const {
  if (index < center_) return "c" + std::to_string(index + 1);
  const std::size_t rel = index - center_;
  return "L" + std::to_string(leads_.at(rel / lead_length_)) + ":" +
         std::to_string(rel % lead_length_ + 1);
}

double LatticeState::norm2() const {
  double acc = 0.0;
  for (const auto& z : amplitudes) acc += std::norm(z);
  return acc;
}

CMatrix build_full_hamiltonian(const ScatteringNetwork& net, std::size_t lead_length) {
  validate(net);
  if (lead_length < 50) throw ValidationError("lead length must be at least 50 sites");
  const LatticeLayout layout(net, lead_length);
  CMatrix h(layout.size(), layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) h(i, i) = net.omega0;
  for (std::size_t r = 0; r < net.size(); ++r)
    for (std::size_t c = 0; c < net.size(); ++c) h(r, c) += net.hc(r, c);
  for (const auto& lead : connected(net)) {
    const std::size_t first = layout.lead_index(lead.id, 1);
    h(lead.site, first) = lead.g;
    h(first, lead.site) = lead.g;
    for (std::size_t s = 1; s < lead_length; ++s) {
      const std::size_t a = layout.lead_index(lead.id, s);
      h(a, a + 1) = net.j_lead;
      h(a + 1, a) = net.j_lead;
    }
  }
  return h;
}

LatticeState init_packet(const LatticeLayout& layout, const PacketSpec& spec) {
  if (!(spec.sigma >= 5.0)) throw PacketDoesNotFit("packet width sigma must be at least 5 sites");
  if (spec.s0 - 4.0 * spec.sigma < 1.0 ||
      spec.s0 + 4.0 * spec.sigma > static_cast<double>(layout.lead_length()))
    throw PacketDoesNotFit("packet envelope s0 +- 4 sigma must lie within lead sites 1.." +
                           std::to_string(layout.lead_length()));
  if (!Momentum::in_band(spec.k0)) throw OutOfBand("packet momentum must lie in (-pi, 0)");

  LatticeState state;
  state.amplitudes.assign(layout.size(), Complex{});
  double norm = 0.0;
  for (std::size_t s = 1; s <= layout.lead_length(); ++s) {
    const double x = static_cast<double>(s);
    const double envelope = std::exp(-(x - spec.s0) * (x - spec.s0) / (2.0 * spec.sigma * spec.sigma));
    const Complex amp = envelope * std::exp(-kI * spec.k0 * x);
    state.amplitudes[layout.lead_index(spec.lead, s)] = amp;
    norm += std::norm(amp);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& z : state.amplitudes) z *= scale;
  return state;
}

LatticeState evolve(LatticeState state, const CMatrix& h_full, double dt, double t_end) {
  if (!h_full.square() || h_full.rows() != state.amplitudes.size())
    throw DimensionMismatch("Hamiltonian and state sizes differ");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const SparseRows h(h_full);
  advance(state, h, dt, t_end);
  return state;
}

Intensities measure_intensities(const LatticeState& state, const LatticeLayout& layout,
                                int incident_lead, bool require_cleared) {
  Intensities out;
  for (std::size_t i = 0; i < layout.center_size(); ++i) out.center += std::norm(state.amplitudes[i]);
  if (require_cleared && out.center >= kClearedFraction) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "centre still holds intensity %.3g at t=%.6g", out.center,
                  state.t);
    throw PacketNotCleared(buf);
  }
  bool incident_found = false;
  for (const int id : layout.lead_ids()) {
    double total = 0.0;
    for (std::size_t s = 1; s <= layout.lead_length(); ++s)
      total += std::norm(state.amplitudes[layout.lead_index(id, s)]);
    if (id == incident_lead) {
      out.reflected = total;
      incident_found = true;
    } else {
      out.transmitted[id] = total;
    }
  }
  if (!incident_found) throw UnknownLead("lattice has no lead " + std::to_string(incident_lead));
  return out;
}

SimulationResult run_simulation(const ScatteringNetwork& net, const PacketSpec& packet,
                                const SimulationParams& params,
                                const std::optional<SnapshotSink>& snapshots,
                                double snapshot_every) {
  const CMatrix h_full = build_full_hamiltonian(net, params.lead_length);
  const LatticeLayout layout(net, params.lead_length);
  LatticeState state = init_packet(layout, packet);
  const SparseRows h(h_full);

  const double speed = 2.0 * net.j_lead * std::abs(std::sin(packet.k0));
  const double arrived = (packet.s0 + 4.0 * packet.sigma) / speed;
  const double wall = 0.95 * (packet.s0 - 4.0 * packet.sigma +
                              static_cast<double>(params.lead_length)) / speed;

  SimulationResult result;
  double next_snapshot = 0.0;
  auto emit = [&] {
    if (snapshots && snapshot_every > 0.0 && state.t + 1e-9 >= next_snapshot) {
      (*snapshots)(state, layout);
      next_snapshot += snapshot_every;
    }
  };
  emit();
  while (true) {
    advance(state, h, params.dt, state.t + params.check_interval);
    result.norm_history.push_back(state.norm2());
    emit();
    if (state.t < arrived) continue;
    double center = 0.0;
    for (std::size_t i = 0; i < layout.center_size(); ++i) center += std::norm(state.amplitudes[i]);
    if (center < kClearedFraction) break;
    if (state.t > wall) {
      if (params.measure_uncleared) {
        result.cleared = false;
        break;
      }
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "centre not depleted before outgoing waves reach the lead ends "
                    "(centre %.3g, total norm %.3g); %s",
                    center, state.norm2(),
                    state.norm2() > 2.0 ? "the centre amplifies without bound"
                                        : "increase the lead length");
      throw PacketNotCleared(buf);
    }
  }
  if (snapshots && snapshot_every > 0.0) (*snapshots)(state, layout);
  result.measured = measure_intensities(state, layout, packet.lead, result.cleared);
  result.finish_time = state.t;
  return result;
}

ComparisonReport compare_with_steady_state(const ScatteringNetwork& net, const PacketSpec& packet,
                                           const SimulationParams& params,
                                           const std::optional<SnapshotSink>& snapshots,
                                           double snapshot_every) {
  const SMatrix s = s_matrix(net, Momentum(packet.k0));
  const std::size_t in = s.index_of(packet.lead);

  ComparisonReport report;
  const SimulationResult sim = run_simulation(net, packet, params, snapshots, snapshot_every);
  report.measured = sim.measured;
  report.finish_time = sim.finish_time;
  report.expected_reflected = std::norm(s.s(in, in));
  auto deviation = [](double measured, double expected) {
    return std::abs(measured - expected) / std::max(1.0, expected);
  };
  report.max_relative_deviation = deviation(sim.measured.reflected, report.expected_reflected);
  for (std::size_t out = 0; out < s.ports.size(); ++out) {
    if (out == in) continue;
    const int id = s.ports[out];
    const double expected = std::norm(s.s(out, in));
    report.expected_transmitted[id] = expected;
    report.max_relative_deviation =
        std::max(report.max_relative_deviation, deviation(sim.measured.transmitted.at(id), expected));
  }
  report.cleared = sim.cleared;
  report.passed = sim.cleared && report.max_relative_deviation <= kDynamicsTolerance;
  report.informational = packet.sigma < 20.0 || !sim.cleared;
  return report;
}

void write_snapshot_csv(std::ostream& out, const LatticeState& state, const LatticeLayout& layout,
                        bool header) {
  if (header) out << "time,site_label,re,im,intensity\n";
  char buf[160];
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    const Complex z = state.amplitudes[i];
    std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%.12g,%.12g\n", state.t,
                  layout.label(i).c_str(), z.real(), z.imag(), std::norm(z));
    out << buf;
  }
}

}  // namespace symscat
