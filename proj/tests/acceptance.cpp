// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ensemble_support.hpp"
#include "symscat/dynamics.hpp"
#include "symscat/errors.hpp"
#include "symscat/models.hpp"
#include "symscat/scattering.hpp"
#include "symscat/symmetry.hpp"

using namespace symscat;
using std::numbers::pi;

namespace {

const Complex I = kI;
const Momentum kResonant(-pi / 2);

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_gap(const ScatteringCoefficients& c, Complex tl, Complex rl, Complex tr, Complex rr) {
  return std::max({std::abs(c.t_l - tl), std::abs(c.r_l - rl), std::abs(c.t_r - tr),
                   std::abs(c.r_r - rr)});
}

ScatteringNetwork gain_loss(double gamma, double phi) {
  return three_resonator_flux(I * gamma, -I * gamma, 0.0, phi, 1.0).network;
}

// Closed form and oracle must both hit the target.
Outcome coefficient_point(const ScatteringNetwork& net, Complex tl, Complex rl, Complex tr,
                          Complex rr) {
  const auto c = two_port(net, 1, 3, kResonant);
  const auto o = oracle_two_port(net, 1, 3, kResonant);
  const double e = std::max(max_gap(c, tl, rl, tr, rr), max_gap(o, tl, rl, tr, rr));
  return {!c.divergent && e <= 1e-9, fmt("max |error| %.2e (closed form and oracle)", e)};
}

Outcome ac1() {
  return coefficient_point(gain_loss(1.0, -pi / 2), 0.0, 1.0, -2.0 * I, 0.0);
}

Outcome ac2() {
  return coefficient_point(gain_loss(1.0, pi / 2), -2.0 * I, 1.0, 0.0, 0.0);
}

Outcome ac3() {
  const CMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
  const CMatrix sy{{0.0, -I}, {I, 0.0}};
  double worst = 0.0;
  // phi = -pi/2 pairs with the + sign, phi = +pi/2 with the - sign.
  for (const auto& [phi, sign] : {std::pair{-pi / 2, 1.0}, std::pair{pi / 2, -1.0}}) {
    const CMatrix target = (sx * (-I) + sy * sign) * 0.5;
    const auto net = three_resonator_flux(0.0, -I, 0.0, phi, 1.0).network;
    for (const auto& c : {two_port(net, 1, 3, kResonant), oracle_two_port(net, 1, 3, kResonant)}) {
      const CMatrix s{{c.r_l, c.t_r}, {c.t_l, c.r_r}};
      for (std::size_t i = 0; i < 4; ++i)
        worst = std::max(worst, std::abs(s.entries()[i] - target.entries()[i]));
    }
  }
  return {worst <= 1e-9,
          fmt("phi=-pi/2 -> (-i sx + sy)/2, phi=+pi/2 -> (-i sx - sy)/2; max |error| %.2e", worst)};
}

Outcome ac4() {
  double worst = 0.0;
  int divergent = 0, wrong_flags = 0, checked = 0;
  for (const double g : {0.25, 0.5, 1.0, 2.0})
    for (const double phi : {pi / 4, -pi / 4, pi / 2, -pi / 2, 3 * pi / 4, -3 * pi / 4}) {
      const auto c = two_port(gain_loss(g, phi), 1, 3, kResonant);
      const bool expect_divergent = g == 2.0 && std::abs(std::abs(phi) - pi / 2) < 1e-12;
      if (c.divergent != expect_divergent) ++wrong_flags;
      if (c.divergent) {
        ++divergent;
        continue;
      }
      ++checked;
      // Ratios compared by cross-multiplication; t_L vanishes at g = 1, phi = -pi/2.
      const Complex t_num = std::exp(-I * phi) + I * g, t_den = std::exp(I * phi) + I * g;
      const Complex r_num = 2.0 * std::cos(phi) - I * g + I * g * g;
      const Complex r_den = 2.0 * std::cos(phi) - I * g - I * g * g;
      worst = std::max(worst, std::abs(c.t_r * t_den - c.t_l * t_num));
      worst = std::max(worst, std::abs(c.r_r * r_den - c.r_l * r_num));
      if (std::abs(c.t_l) > 1e-6 && std::abs(t_den) > 1e-6)
        worst = std::max(worst, std::abs(c.t_r / c.t_l - t_num / t_den));
      if (std::abs(c.r_l) > 1e-6 && std::abs(r_den) > 1e-6)
        worst = std::max(worst, std::abs(c.r_r / c.r_l - r_num / r_den));
    }
  return {worst <= 1e-9 && wrong_flags == 0 && divergent == 2,
          fmt("%d points checked, max error %.2e; %d divergent (gamma=2J, phi=+-pi/2), %d "
              "misflagged",
              checked, worst, divergent, wrong_flags)};
}

Outcome ac5() {
  double worst = 0.0;
  bool divergent = false;
  const auto check = [&](double phi, Complex tl, Complex rl, Complex tr, Complex rr) {
    const auto net = make_model("dissipative_figS1", {{"phi", phi}}).network;
    const auto c = two_port(net, 1, 3, kResonant);
    const auto o = oracle_two_port(net, 1, 3, kResonant);
    divergent = divergent || c.divergent;
    worst = std::max({worst, max_gap(c, tl, rl, tr, rr), max_gap(o, tl, rl, tr, rr)});
  };
  check(-pi / 2, -2.0 * I, -I, 0.0, I);
  check(pi / 2, 0.0, -I, -2.0 * I, I);
  return {!divergent && worst <= 1e-9, fmt("max |error| %.2e", worst)};
}

Outcome ac6() {
  std::string detail;
  bool ok = true;
  double slowest = 0.0;
  for (const double phi : {-pi / 2, pi / 2}) {
    const auto net = make_model("dissipative_figS1", {{"phi", phi}}).network;
    const auto target = two_port(net, 1, 3, kResonant);
    for (const int lead : {1, 3}) {
      const auto start = std::chrono::steady_clock::now();
      const auto sim = run_simulation(net, {lead, -pi / 2, 100.0, 20.0}, {});
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      slowest = std::max(slowest, secs);
      const double exp_t = std::norm(lead == 1 ? target.t_l : target.t_r);
      const double exp_r = std::norm(lead == 1 ? target.r_l : target.r_r);
      const double got_t = sim.measured.transmitted.at(lead == 1 ? 3 : 1);
      const double got_r = sim.measured.reflected;
      const double dev = std::max(std::abs(got_t - exp_t) / std::max(1.0, exp_t),
                                  std::abs(got_r - exp_r) / std::max(1.0, exp_r));
      ok = ok && dev <= 0.05 && secs < 30.0;
      detail += fmt("%s phi=%+.2f: |t|^2 %.3f (%.0f) |r|^2 %.3f (%.0f) dev %.3f; ",
                    lead == 1 ? "fwd" : "bwd", phi, got_t, exp_t, got_r, exp_r, dev);
    }
  }
  return {ok, detail + fmt("slowest run %.2f s", slowest)};
}

Outcome ac7() {
  const auto net = make_model("circulator_three_port").network;
  double worst_r = 0.0, worst_t = 0.0;
  // Entries fixed by the direct-solve oracle.
  const std::vector<std::tuple<int, int, Complex>> expected{
      {3, 1, -I}, {1, 2, -I}, {2, 3, -1.0}, {2, 1, 0.0}, {3, 2, 0.0}, {1, 3, 0.0}};
  for (const auto& s : {s_matrix(net, kResonant), oracle_s_matrix(net, kResonant)}) {
    for (const int p : {1, 2, 3}) worst_r = std::max(worst_r, std::abs(s.s(s.index_of(p), s.index_of(p))));
    for (const auto& [out, in, v] : expected)
      worst_t = std::max(worst_t, std::abs(s.s(s.index_of(out), s.index_of(in)) - v));
  }
  return {worst_r < 1e-9 && worst_t <= 1e-9,
          fmt("1->3 = -i, 2->1 = -i, 3->2 = -1, reverse paths 0; max |r| %.2e, max transmission "
              "error %.2e",
              worst_r, worst_t)};
}

ScatteringNetwork two_leads(const CMatrix& h, std::size_t m, std::size_t n) {
  ScatteringNetwork net;
  net.hc = h;
  net.leads = {{1, m, 1.0}, {2, n, 1.0}};
  return net;
}

Outcome ac8() {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> k_dist(-pi, 0.0);
  double worst_abs = 0.0, worst_rel = 0.0;
  int skipped = 0;
  std::string missing_witness;
  for (const auto kind : {SymmetryKind::C, SymmetryKind::K, SymmetryKind::Q, SymmetryKind::P})
    for (const bool interchange : {false, true})
      for (const int parity : {1, -1}) {
        bool witnessed = false;
        bool protected_class = false;
        for (int member = 0; member < 500; ++member) {
          const std::size_t n = 2 + member % 5;
          std::uniform_int_distribution<std::size_t> site(0, n - 1);
          const std::size_t m = site(rng);
          std::size_t nn = site(rng);
          while (nn == m) nn = site(rng);
          const CMatrix u = symscat::testing::random_class_operator(rng, kind, n, m, nn, interchange);
          const SymmetrySpec spec{kind, parity, u};
          const auto prediction = predict(spec, classify_mapping(u, m, nn));
          protected_class = !prediction.none();
          const CMatrix h = generate_ensemble(kind, parity, u, rng(), 1)[0];
          double kv = k_dist(rng);
          while (!Momentum::in_band(kv)) kv = k_dist(rng);
          const auto c = two_port(two_leads(h, m, nn), 1, 2, Momentum(kv));
          if (c.divergent) {
            ++skipped;
            continue;
          }
          const double t_gap = std::abs(std::abs(c.t_l) - std::abs(c.t_r));
          const double r_gap = std::abs(std::abs(c.r_l) - std::abs(c.r_r));
          if (!protected_class) {
            witnessed = witnessed || (t_gap > 1e-3 && r_gap > 1e-3);
            continue;
          }
          const double t_scale = std::max({1.0, std::abs(c.t_l), std::abs(c.t_r)});
          const double r_scale = std::max({1.0, std::abs(c.r_l), std::abs(c.r_r)});
          auto record = [&](double v, double scale) {
            worst_abs = std::max(worst_abs, v);
            worst_rel = std::max(worst_rel, v / scale);
          };
          if (prediction.t_phase_relation)
            record(std::abs(c.t_l - std::polar(1.0, *prediction.t_phase_relation) * c.t_r), t_scale);
          if (prediction.t_modulus) record(t_gap, t_scale);
          if (prediction.r_complex) record(std::abs(c.r_l - c.r_r), r_scale);
          if (prediction.r_modulus) record(r_gap, r_scale);
        }
        if (!protected_class && !witnessed)
          missing_witness += fmt(" %c%s%+d", to_char(kind), interchange ? "_I" : "_1", parity);
      }
  return {worst_abs <= 1e-8 && missing_witness.empty(),
          fmt("16 classes x 500 members; protected max violation %.2e abs (%.2e rel), %d "
              "divergent skipped; unwitnessed unprotected classes:%s",
              worst_abs, worst_rel, skipped, missing_witness.empty() ? " none" : missing_witness.c_str())};
}

Complex random_entry(std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> mod(0.0, bound), arg(-pi, pi);
  return std::polar(mod(rng), arg(rng));
}

Outcome ac9() {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  const auto grid = band_grid(50);
  double worst_abs = 0.0, worst_rel = 0.0;
  std::size_t compared = 0, skipped = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = size(rng);
    std::uniform_int_distribution<std::size_t> lead_count(2, std::min<std::size_t>(4, n));
    const std::size_t leads = lead_count(rng);
    ScatteringNetwork net;
    net.hc = CMatrix(n, n);
    for (auto& z : net.hc.entries()) z = random_entry(rng, 3.0);
    std::vector<std::size_t> sites(n);
    for (std::size_t i = 0; i < n; ++i) sites[i] = i;
    std::shuffle(sites.begin(), sites.end(), rng);
    for (std::size_t l = 0; l < leads; ++l) net.leads.push_back({static_cast<int>(l + 1), sites[l], 1.0});
    for (std::size_t a = 0; a < leads; ++a)
      for (std::size_t b = a + 1; b < leads; ++b)
        for (const double kv : grid) {
          const int lm = static_cast<int>(a + 1), ln = static_cast<int>(b + 1);
          const auto c = two_port(net, lm, ln, Momentum(kv));
          const auto o = oracle_two_port(net, lm, ln, Momentum(kv));
          if (c.divergent || o.divergent) {
            ++skipped;
            continue;
          }
          ++compared;
          const double gap = max_gap(c, o.t_l, o.r_l, o.t_r, o.r_r);
          const double scale = std::max({1.0, std::abs(o.t_l), std::abs(o.r_l), std::abs(o.t_r),
                                         std::abs(o.r_r)});
          worst_abs = std::max(worst_abs, gap);
          worst_rel = std::max(worst_rel, gap / scale);
        }
  }
  return {worst_abs <= 1e-9,
          fmt("%zu (network, pair, k) points, %zu divergent skipped; max |closed - oracle| %.2e "
              "abs (%.2e rel)",
              compared, skipped, worst_abs, worst_rel)};
}

Outcome ac10() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_unitary = 0.0, worst_column = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = size(rng);
    const std::size_t leads = std::min<std::size_t>(2 + trial % 3, n);
    CMatrix a(n, n), b(n, n);
    for (auto& z : a.entries()) z = {2.0 * u(rng), 2.0 * u(rng)};
    for (auto& z : b.entries()) z = {u(rng), u(rng)};
    const CMatrix herm = (a + a.adjoint()) * 0.5;
    const CMatrix passive = herm - b * b.adjoint() * I;  // anti-Hermitian part <= 0
    std::vector<std::size_t> sites(n);
    for (std::size_t i = 0; i < n; ++i) sites[i] = i;
    std::shuffle(sites.begin(), sites.end(), rng);
    ScatteringNetwork h_net, p_net;
    h_net.hc = herm;
    p_net.hc = passive;
    for (std::size_t l = 0; l < leads; ++l) {
      h_net.leads.push_back({static_cast<int>(l + 1), sites[l], 1.0});
      p_net.leads.push_back({static_cast<int>(l + 1), sites[l], 1.0});
    }
    for (const double kv : band_grid(10)) {
      const auto s = s_matrix(h_net, Momentum(kv));
      worst_unitary = std::max(
          worst_unitary, frobenius_norm(s.s.adjoint() * s.s - CMatrix::identity(s.s.rows())));
      const auto sp = s_matrix(p_net, Momentum(kv));
      for (std::size_t in = 0; in < sp.s.cols(); ++in) {
        double total = 0.0;
        for (std::size_t out = 0; out < sp.s.rows(); ++out) total += std::norm(sp.s(out, in));
        worst_column = std::max(worst_column, total);
      }
    }
  }
  return {worst_unitary <= 1e-9 && worst_column <= 1.0 + 1e-9,
          fmt("max ||S^dag S - 1||_F %.2e; passive max column sum %.12f", worst_unitary,
              worst_column)};
}

bool contains(const std::vector<DetectedSymmetry>& found, SymmetryKind kind,
              MappingClass::Variant variant, const CMatrix& u) {
  for (const auto& d : found)
    if (d.spec.kind == kind && d.spec.parity == 1 && d.mapping.variant == variant &&
        equal_up_to_phase(d.spec.u, u))
      return true;
  return false;
}

Outcome ac11() {
  using V = MappingClass::Variant;
  std::string misses;
  const double phi = pi / 3;
  {
    const auto e = make_model("c1_phase", {{"phi", phi}});
    const auto found = detect(e.network.hc, 0, 1);
    bool alpha_ok = false;
    for (const auto& d : found)
      if (d.spec.kind == SymmetryKind::C && d.spec.parity == 1 && d.mapping.variant == V::Identity)
        alpha_ok = alpha_ok || std::abs(d.mapping.alpha - 2 * phi) < 1e-9;
    if (!contains(found, SymmetryKind::C, V::Identity,
                  CMatrix{{1.0, 0.0}, {0.0, std::polar(1.0, 2 * phi)}}) || !alpha_ok)
      misses += " C_1(alpha=2phi)";
  }
  if (!contains(detect(make_model("q1_example").network.hc, 0, 1), SymmetryKind::Q, V::Identity,
                CMatrix{{1.0, 0.0}, {0.0, -1.0}}))
    misses += " Q_1(sigma_z)";
  if (!contains(detect(make_model("qI_gain_loss").network.hc, 0, 1), SymmetryKind::Q,
                V::Interchange, CMatrix{{0.0, 1.0}, {1.0, 0.0}}))
    misses += " Q_I(sigma_x)";
  for (const double p : {0.4, -pi / 2, 2.0}) {
    const CMatrix exchange{{0.0, 0.0, 1.0}, {0.0, std::polar(1.0, -p), 0.0}, {1.0, 0.0, 0.0}};
    const auto loss = three_resonator_flux(0.0, -I * 0.8, 0.0, p, 1.0).network;
    if (!contains(detect(loss.hc, 0, 2), SymmetryKind::C, V::Interchange, exchange))
      misses += fmt(" C_I(phi=%.2f)", p);
    const auto k = three_resonator_flux(I * 0.8, 0.3, -I * 0.8, p, 1.0).network;
    if (!contains(detect(k.hc, 0, 2), SymmetryKind::K, V::Interchange, exchange))
      misses += fmt(" K_I(phi=%.2f)", p);
  }
  int protecting = 0, samples = 0;
  for (const double gamma : {0.3, 0.7, 1.3, 2.6})
    for (const double p : {0.4, 1.1, -0.9, 2.3, -2.7}) {
      ++samples;
      for (const auto& d : detect(gain_loss(gamma, p).hc, 0, 2))
        if (!predict(d.spec, d.mapping).none()) ++protecting;
    }
  return {misses.empty() && protecting == 0,
          fmt("missing exhibited specs:%s; protecting classes found on {i g, -i g, 0} across %d "
              "generic points: %d",
              misses.empty() ? " none" : misses.c_str(), samples, protecting)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 unidirectional transmissionless point", ac1},
      {"AC2 unidirectional absorption point", ac2},
      {"AC3 isolator S-matrix", ac3},
      {"AC4 gain-loss ratio formulas", ac4},
      {"AC5 dissipative coupling closed form", ac5},
      {"AC6 wave-packet dynamics", ac6},
      {"AC7 circulator", ac7},
      {"AC8 symmetry ensembles", ac8},
      {"AC9 closed form vs oracle", ac9},
      {"AC10 unitarity and passivity", ac10},
      {"AC11 detection regression", ac11},
  };
  int failures = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures,
              criteria.size(), secs);
  return failures == 0 ? 0 : 1;
}
