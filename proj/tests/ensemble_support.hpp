#pragma once

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "symscat/symmetry.hpp"

namespace symscat::testing {

/// Random generalized permutation operator valid for `kind` that fixes
/// (Identity) or swaps (Interchange) the sites m and n.
inline CMatrix random_class_operator(std::mt19937_64& rng, SymmetryKind kind, std::size_t n_sites,
                                     std::size_t m, std::size_t n, bool interchange) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<std::size_t> perm(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) perm[i] = i;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n_sites; ++i)
    if (i != m && i != n) rest.push_back(i);
  std::shuffle(rest.begin(), rest.end(), rng);
  std::bernoulli_distribution pair(0.5);
  for (std::size_t i = 0; i + 1 < rest.size(); i += 2)
    if (pair(rng)) std::swap(perm[rest[i]], perm[rest[i + 1]]);
  if (interchange) std::swap(perm[m], perm[n]);

  const bool antiunitary_like = kind == SymmetryKind::C || kind == SymmetryKind::K;
  bool has_fixed = false;
  for (std::size_t i = 0; i < n_sites; ++i) has_fixed = has_fixed || perm[i] == i;
  // U U* = s for C/K; with a fixed point s must be +1.
  const double s = antiunitary_like && !has_fixed && pair(rng) ? -1.0 : 1.0;

  std::vector<Complex> d(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) {
    const std::size_t j = perm[i];
    if (j == i) {
      d[i] = antiunitary_like ? std::polar(1.0, angle(rng)) : Complex(pair(rng) ? 1.0 : -1.0);
    } else if (i < j) {
      d[i] = std::polar(1.0, angle(rng));
      d[j] = antiunitary_like ? s * d[i] : std::conj(d[i]);
    }
  }
  CMatrix u(n_sites, n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) u(perm[i], i) = d[i];
  return u;
}

}  // namespace symscat::testing
