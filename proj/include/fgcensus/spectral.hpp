#pragma once

// Spectral side of the counting identities for the one-vertex graph with k
// loops. For a character chi given by a point eps on the torus R^k/Z^k, the
// twisted adjacency value is
//
//     A(eps) = 2 * sum_j cos(2 pi eps_j),
//
// and the generating function of the twisted counts n(eps, m) over
// cyclically reduced words is rational:
//
//     sum_m n(eps,m) u^m = 2(k-1)u^2/(1-u^2)
//                        + (u A - 2(2k-1)u^2) / (1 - u A + (2k-1)u^2).
//
// Writing q = 2k-1 and mu_1, mu_2 for the roots of x^2 - A x + q (the
// inverse roots of the denominator), the coefficients are
//
//     n(eps, m) = mu_1^m + mu_2^m + (k-1)(1 + (-1)^m).
//
// The parity term follows from 2(k-1)u^2/(1-u^2), which only feeds even
// powers; at the trivial character this reproduces the count
// q^m + 1 + (k-1)(1+(-1)^m) exactly. The eigenvalues of the identity are
// lambda_i = mu_i / q, so lambda_1 lambda_2 = 1/q and
// lambda_1 + lambda_2 = A/q.

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "fgcensus/count_table.hpp"
#include "fgcensus/word.hpp"

namespace fgc {

inline constexpr double kPi = 3.14159265358979323846;

inline double mod1(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? r - 1.0 : r;
}

/// A point on the character torus; coordinates are reduced into [0,1).
struct CharacterPoint {
  std::vector<double> eps;

  explicit CharacterPoint(std::vector<double> e) : eps(std::move(e)) {
    for (double& x : eps) x = mod1(x);
  }
  static CharacterPoint zero(int k) { return CharacterPoint(std::vector<double>(static_cast<std::size_t>(k), 0.0)); }
  int rank() const { return static_cast<int>(eps.size()); }
};

/// Character value chi_eps(gamma) = exp(2 pi i <Phi(gamma), eps>).
inline std::complex<double> character_value(const Homology& beta, const CharacterPoint& p) {
  double phase = 0.0;
  for (std::size_t j = 0; j < beta.size(); ++j) phase += static_cast<double>(beta[j]) * p.eps[j];
  return std::exp(std::complex<double>(0.0, 2.0 * kPi * phase));
}

/// Twisted adjacency value A(eps) = 2 sum_j cos(2 pi eps_j), in [-2k, 2k].
inline double adjacency_value(const CharacterPoint& p) {
  double a = 0.0;
  for (double e : p.eps) a += std::cos(2.0 * kPi * e);
  return 2.0 * a;
}

/// The eigenvalue pair of the counting identity at adjacency value A.
struct EigenPair {
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  double adjacency = 0.0;
  int rank = 2;
};

/// Roots of 1 - u A + q u^2 with q = 2k-1, computed through the monic
/// companion x^2 - A x + q (x = 1/u): mu = (A +- sqrt(A^2-4q))/2 and
/// lambda_i = mu_i / q. The principal complex branch is used when
/// A^2 < 4q, making |lambda_1| = |lambda_2| = 1/sqrt(q) there. lambda_1
/// carries the + sign, which is the branch through 1 at A = 2k.
inline EigenPair eigenpair(double A, int k) {
  if (k < 2) throw std::invalid_argument("rank must be >= 2");
  const double q = 2.0 * k - 1.0;
  const std::complex<double> disc(A * A - 4.0 * q, 0.0);
  const std::complex<double> root = std::sqrt(disc);
  EigenPair e;
  e.adjacency = A;
  e.rank = k;
  e.lambda1 = (A + root) / (2.0 * q);
  e.lambda2 = (A - root) / (2.0 * q);
  return e;
}

namespace detail {
inline std::complex<double> pow_int(std::complex<double> b, long long n) {
  std::complex<double> r(1.0, 0.0);
  while (n > 0) {
    if (n & 1) r *= b;
    n >>= 1;
    if (n > 0) b *= b;
  }
  return r;
}
}  // namespace detail

/// Closed-form twisted count n(eps, m) = mu_1^m + mu_2^m + (k-1)(1+(-1)^m).
inline std::complex<double> char_count_closed_form(const CharacterPoint& p, int k, int m) {
  if (m < 1) throw std::invalid_argument("word length must be >= 1");
  const double q = 2.0 * k - 1.0;
  const double A = adjacency_value(p);
  const std::complex<double> root = std::sqrt(std::complex<double>(A * A - 4.0 * q, 0.0));
  const std::complex<double> mu1 = (A + root) / 2.0;
  const std::complex<double> mu2 = (A - root) / 2.0;
  const double parity = (m % 2 == 0) ? 2.0 * (k - 1.0) : 0.0;
  return detail::pow_int(mu1, m) + detail::pow_int(mu2, m) + parity;
}

/// Oracle side of the identity check: the character sum over a census slice,
/// sum_beta n_beta(m) chi_eps(beta).
inline std::complex<double> character_sum_from_table(const CountTable& t, int m,
                                                     const CharacterPoint& p) {
  std::complex<double> s(0.0, 0.0);
  auto it = t.by_length.find(m);
  if (it == t.by_length.end()) return s;
  for (const auto& [beta, c] : it->second) s += c.to_double() * character_value(beta, p);
  return s;
}

/// Expand the rational generating function to order M and compare its
/// coefficients with the enumerated character sums in `oracle` (a census
/// table covering lengths 1..M). Returns max_m |rhs_m - oracle_m| / q^m.
inline double ihara_identity_check(const CharacterPoint& p, int k, int M,
                                   const CountTable& oracle) {
  const double q = 2.0 * k - 1.0;
  const double A = adjacency_value(p);
  double worst = 0.0;
  // Series of (uA - 2q u^2)/(1 - uA + q u^2): b_m = A b_{m-1} - q b_{m-2}
  // with impulses A at m=1 and -2q at m=2. The 2(k-1)u^2/(1-u^2) part adds
  // 2(k-1) at even orders.
  double bm2 = 0.0, bm1 = 0.0;
  double qpow = 1.0;
  for (int m = 1; m <= M; ++m) {
    double b = A * bm1 - q * bm2;
    if (m == 1) b += A;
    if (m == 2) b += -2.0 * q;
    bm2 = bm1;
    bm1 = b;
    double coeff = b + ((m % 2 == 0) ? 2.0 * (k - 1.0) : 0.0);
    qpow *= q;
    const std::complex<double> lhs = character_sum_from_table(oracle, m, p);
    worst = std::max(worst, std::abs(lhs - coeff) / qpow);
  }
  return worst;
}

/// lambda_1(eps0 / (rho sqrt(m)))^m with rho^2 = 4 pi^2/(k-1); tends to
/// exp(-<eps0,eps0>/2) as m grows.
inline double scaled_eigenpower(const std::vector<double>& eps0, int k, long long m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const double rho = 2.0 * kPi / std::sqrt(static_cast<double>(k - 1));
  std::vector<double> eps(eps0.size());
  for (std::size_t j = 0; j < eps0.size(); ++j) eps[j] = eps0[j] / (rho * std::sqrt(static_cast<double>(m)));
  const CharacterPoint p(std::move(eps));
  const EigenPair e = eigenpair(adjacency_value(p), k);
  if (e.lambda1.imag() == 0.0) return std::pow(e.lambda1.real(), static_cast<double>(m));
  return detail::pow_int(e.lambda1, m).real();
}

/// One sieve node: a rational character point and its weight.
struct SievePoint {
  CharacterPoint eps;
  std::complex<double> weight;
};

/// Finite-character sieve for the congruence conditions
/// log_j(gamma) == a_j (mod l_j): returns the l_1*...*l_k rational points
/// eps = (g_1/l_1, ..., g_k/l_k) weighted by conj(chi(a))/(l_1...l_k), so
/// that sum_p w_p chi_{eps_p}(gamma) is the indicator of the condition.
inline std::vector<SievePoint> finite_character_sieve(const std::vector<long long>& moduli,
                                                      const std::vector<long long>& residues) {
  if (moduli.size() != residues.size())
    throw std::invalid_argument("moduli/residues size mismatch");
  const std::size_t k = moduli.size();
  long long total = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (moduli[j] < 1) throw std::invalid_argument("moduli must be >= 1");
    if (residues[j] < 0 || residues[j] >= moduli[j])
      throw std::invalid_argument("residue out of range");
    total *= moduli[j];
  }
  std::vector<SievePoint> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<long long> g(k, 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    for (std::size_t j = k; j-- > 0;) {
      g[j] = rest % moduli[j];
      rest /= moduli[j];
    }
    std::vector<double> eps(k);
    double phase = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      eps[j] = static_cast<double>(g[j]) / static_cast<double>(moduli[j]);
      phase += static_cast<double>(g[j]) * static_cast<double>(residues[j]) /
               static_cast<double>(moduli[j]);
    }
    std::complex<double> w =
        std::exp(std::complex<double>(0.0, -2.0 * kPi * phase)) / static_cast<double>(total);
    out.push_back(SievePoint{CharacterPoint(std::move(eps)), w});
  }
  return out;
}

}  // namespace fgc
