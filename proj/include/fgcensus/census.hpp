#pragma once

// Three independent engines for the same exact counts:
//
//   oracle  - depth-first enumeration of every cyclically reduced word
//   dp      - transfer-style dynamic programming over (last letter, running
//             abelianization), with the cyclic closure condition enforced by
//             fixing the first letter
//   fourier - inverse discrete Fourier transform of the closed-form twisted
//             counts sampled on a (2m+1)^k grid
//
// A word of length m is cyclically reduced iff consecutive letters are never
// mutually inverse, including the wrap-around pair (last, first). The total
// over all abelianization classes is q^m + 1 + (k-1)(1+(-1)^m) with q = 2k-1,
// which every engine is tested against.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fgcensus/count_table.hpp"
#include "fgcensus/errors.hpp"
#include "fgcensus/parallel.hpp"
#include "fgcensus/word.hpp"

namespace fgc {

/// Enumeration cost guard. A length-m run touches about 2k*(2k-1)^(m-1)
/// words; the default budget admits m <= 14 at rank 2 and m <= 10 at rank 3.
struct EnumGuard {
  long long word_budget = 12'000'000;

  long long estimate(int k, int m) const {
    long long q = 2LL * k - 1;
    long long est = 2LL * k;
    for (int i = 1; i < m; ++i) {
      if (est > word_budget) return est;
      est *= q;
    }
    return est;
  }

  int max_length(int k) const {
    int m = 1;
    while (estimate(k, m + 1) <= word_budget) ++m;
    return m;
  }

  void check(int k, int m) const {
    if (m < 1) throw std::invalid_argument("word length must be >= 1");
    if (estimate(k, m) > word_budget)
      throw GuardError("enumeration guard: k=" + std::to_string(k) + ", m=" + std::to_string(m) +
                       " exceeds word budget " + std::to_string(word_budget) +
                       " (max m here is " + std::to_string(max_length(k)) + ")");
  }
};

/// Work estimate for one dp slice: states times positions times fanout.
/// The full-length budget admits roughly m <= 700 at rank 2 and m <= 60 at
/// rank 3, far past every downstream consumer.
inline constexpr double kDpCostBudget = 2e10;

inline double dp_cost_estimate(int k, int m) {
  double cells = 1.0;
  for (int i = 0; i < k; ++i) cells *= 2.0 * m + 1.0;
  return cells * (2.0 * k) * (2.0 * k - 1.0) * m;
}

namespace detail {

/// Dense cube [-r, r]^k addressed by flattened index.
class HomologyBox {
 public:
  HomologyBox(int k, int r) : k_(k), r_(r), side_(2 * r + 1) {
    size_ = 1;
    for (int i = 0; i < k; ++i) {
      size_ *= static_cast<std::size_t>(side_);
      if (size_ > (1u << 28))
        throw GuardError("homology box exceeds memory guard: (2r+1)^k too large");
    }
  }

  int rank() const { return k_; }
  int radius() const { return r_; }
  std::size_t size() const { return size_; }

  std::size_t index(std::span<const int> delta) const {
    std::size_t idx = 0;
    for (int i = 0; i < k_; ++i)
      idx = idx * static_cast<std::size_t>(side_) + static_cast<std::size_t>(delta[static_cast<std::size_t>(i)] + r_);
    return idx;
  }

  Homology decode(std::size_t idx) const {
    Homology h(static_cast<std::size_t>(k_));
    for (int i = k_ - 1; i >= 0; --i) {
      h[static_cast<std::size_t>(i)] = static_cast<long long>(idx % static_cast<std::size_t>(side_)) - r_;
      idx /= static_cast<std::size_t>(side_);
    }
    return h;
  }

 private:
  int k_;
  int r_;
  int side_ = 1;
  std::size_t size_ = 1;
};

}  // namespace detail

/// Visit every cyclically reduced word of length exactly m once, as a span
/// of letter codes. Enumeration order: lexicographic in codes.
template <class Visitor>
void enumerate_cyclically_reduced(int k, int m, Visitor&& visit,
                                  const EnumGuard& guard = {}) {
  if (k < 2) throw std::invalid_argument("rank must be >= 2");
  guard.check(k, m);
  const int nletters = 2 * k;
  std::vector<std::uint8_t> word(static_cast<std::size_t>(m));
  // Iterative DFS: pos is the next position to fill.
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == m) {
      visit(std::span<const std::uint8_t>(word));
      return;
    }
    for (int c = 0; c < nletters; ++c) {
      if (pos > 0 && c == inverse_code(word[static_cast<std::size_t>(pos - 1)])) continue;
      if (pos == m - 1 && m > 1 && c == inverse_code(word[0])) continue;
      word[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(c);
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
}

/// Variant restricted to words whose first letter has the given code; used
/// to shard enumeration deterministically.
template <class Visitor>
void enumerate_cyclically_reduced_from(int k, int m, int first_code, Visitor&& visit) {
  const int nletters = 2 * k;
  std::vector<std::uint8_t> word(static_cast<std::size_t>(m));
  word[0] = static_cast<std::uint8_t>(first_code);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == m) {
      visit(std::span<const std::uint8_t>(word));
      return;
    }
    for (int c = 0; c < nletters; ++c) {
      if (c == inverse_code(word[static_cast<std::size_t>(pos - 1)])) continue;
      if (pos == m - 1 && c == inverse_code(word[0])) continue;
      word[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(c);
      self(self, pos + 1);
    }
  };
  if (m == 1) {
    visit(std::span<const std::uint8_t>(word));
  } else {
    rec(rec, 1);
  }
}

/// Exact counts by brute-force enumeration. Shards by first letter; shard
/// results are merged in letter order, so output is independent of the
/// thread count.
inline CountTable oracle_count_by_homology(int k, int m, const EnumGuard& guard = {},
                                           int threads = 1) {
  if (k < 2) throw std::invalid_argument("rank must be >= 2");
  guard.check(k, m);
  const detail::HomologyBox box(k, m);
  const int nshards = 2 * k;
  std::vector<std::vector<long long>> shard_counts(
      static_cast<std::size_t>(nshards));
  run_sharded(nshards, threads, [&](int shard) {
    std::vector<long long> acc(box.size(), 0);
    std::vector<int> delta(static_cast<std::size_t>(k));
    enumerate_cyclically_reduced_from(k, m, shard, [&](std::span<const std::uint8_t> codes) {
      std::fill(delta.begin(), delta.end(), 0);
      for (std::uint8_t c : codes) delta[static_cast<std::size_t>(c / 2)] += (c & 1) ? -1 : +1;
      acc[box.index(delta)] += 1;
    });
    shard_counts[static_cast<std::size_t>(shard)] = std::move(acc);
  });

  CountTable t;
  t.rank = k;
  t.max_length = m;
  for (std::size_t i = 0; i < box.size(); ++i) {
    long long total = 0;
    for (const auto& acc : shard_counts) total += acc[i];
    if (total != 0) t.by_length[m][box.decode(i)] = total;
  }
  return t;
}

/// Exact counts by dynamic programming, no enumeration. For each first
/// letter f the state after p letters is (last letter, running
/// abelianization); transitions forbid immediate cancellation and the final
/// state must not close with the inverse of f. Counts are exact 128-bit
/// integers; overflow throws, never wraps.
///
/// `radius`: when set, entries with max|beta_i| > radius are omitted from
/// the result. Intermediate states are pruned only when they provably
/// cannot re-enter the radius box in the remaining steps (each step moves
/// one coordinate by one), so the reported entries stay exact.
inline CountTable dp_count_by_homology(int k, int m, std::optional<int> radius = {},
                                       int threads = 1) {
  if (k < 2) throw std::invalid_argument("rank must be >= 2");
  if (m < 1) throw std::invalid_argument("word length must be >= 1");
  const int nletters = 2 * k;
  const detail::HomologyBox box(k, m);
  const std::size_t cells = box.size();
  if (cells * static_cast<std::size_t>(nletters) > (1u << 26))
    throw GuardError("dp state space exceeds memory guard");
  if (dp_cost_estimate(k, m) > kDpCostBudget)
    throw GuardError("dp cost guard: k=" + std::to_string(k) + ", m=" + std::to_string(m) +
                     " exceeds the work budget");
  const int rad = radius ? *radius : m;

  const int nshards = nletters;
  std::vector<std::vector<CheckedInt128>> shard_out(static_cast<std::size_t>(nshards));

  run_sharded(nshards, threads, [&](int first) {
    std::vector<CheckedInt128> cur(cells * static_cast<std::size_t>(nletters));
    std::vector<CheckedInt128> nxt;
    std::vector<int> delta(static_cast<std::size_t>(k), 0);
    delta[static_cast<std::size_t>(first / 2)] = (first & 1) ? -1 : +1;
    cur[box.index(delta) * static_cast<std::size_t>(nletters) + static_cast<std::size_t>(first)] = 1;

    std::vector<int> d(static_cast<std::size_t>(k));
    for (int pos = 2; pos <= m; ++pos) {
      nxt.assign(cells * static_cast<std::size_t>(nletters), CheckedInt128(0));
      const int steps_left = m - pos;  // after placing letter `pos`
      for (std::size_t cell = 0; cell < cells; ++cell) {
        Homology h = box.decode(cell);
        for (int i = 0; i < k; ++i) d[static_cast<std::size_t>(i)] = static_cast<int>(h[static_cast<std::size_t>(i)]);
        for (int last = 0; last < nletters; ++last) {
          const CheckedInt128& c = cur[cell * static_cast<std::size_t>(nletters) + static_cast<std::size_t>(last)];
          if (c.is_zero()) continue;
          for (int nextc = 0; nextc < nletters; ++nextc) {
            if (nextc == inverse_code(last)) continue;
            const int axis = nextc / 2;
            const int step = (nextc & 1) ? -1 : +1;
            d[static_cast<std::size_t>(axis)] += step;
            if (d[static_cast<std::size_t>(axis)] > m || d[static_cast<std::size_t>(axis)] < -m) {
              d[static_cast<std::size_t>(axis)] -= step;
              continue;
            }
            // Prune states that cannot return to the radius box.
            long long excess = 0;
            for (int i = 0; i < k; ++i) {
              int a = d[static_cast<std::size_t>(i)] < 0 ? -d[static_cast<std::size_t>(i)] : d[static_cast<std::size_t>(i)];
              if (a > rad) excess += a - rad;
            }
            if (excess <= steps_left) {
              nxt[box.index(d) * static_cast<std::size_t>(nletters) + static_cast<std::size_t>(nextc)] += c;
            }
            d[static_cast<std::size_t>(axis)] -= step;
          }
        }
      }
      cur.swap(nxt);
    }

    // Close the cycle: keep states whose last letter is not the inverse of f.
    std::vector<CheckedInt128> out(cells);
    const int banned = inverse_code(first);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      CheckedInt128 total(0);
      for (int last = 0; last < nletters; ++last) {
        if (m > 1 && last == banned) continue;
        total += cur[cell * static_cast<std::size_t>(nletters) + static_cast<std::size_t>(last)];
      }
      out[cell] = total;
    }
    shard_out[static_cast<std::size_t>(first)] = std::move(out);
  });

  CountTable t;
  t.rank = k;
  t.max_length = m;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    CheckedInt128 total(0);
    for (const auto& out : shard_out) total += out[cell];
    if (!total.is_zero()) {
      Homology beta = box.decode(cell);
      bool inside = true;
      for (long long b : beta)
        if (b > rad || b < -rad) inside = false;
      if (inside) t.by_length[m][std::move(beta)] = total;
    }
  }
  return t;
}

/// Convenience: per-length table for all m in 1..m_max from the chosen
/// engine ("dp" or "oracle").
inline CountTable count_table_up_to(int k, int m_max, const std::string& engine = "dp",
                                    std::optional<int> radius = {}, int threads = 1,
                                    const EnumGuard& guard = {}) {
  if (engine != "oracle") {
    double total_cost = 0.0;
    for (int m = 1; m <= m_max; ++m) total_cost += dp_cost_estimate(k, m);
    if (total_cost > kDpCostBudget)
      throw GuardError("dp cost guard: cumulative table to m=" + std::to_string(m_max) +
                       " exceeds the work budget");
  }
  CountTable t;
  t.rank = k;
  for (int m = 1; m <= m_max; ++m) {
    CountTable slice = engine == "oracle" ? oracle_count_by_homology(k, m, guard, threads)
                                          : dp_count_by_homology(k, m, radius, threads);
    t.by_length[m] = std::move(slice.by_length[m]);
    t.max_length = m;
  }
  return t;
}

/// Fourier-inversion engine output: rounded integer counts plus the
/// distance of every raw value to its nearest integer.
struct FourierSlice {
  CountTable rounded;
  std::map<Homology, double> residuals;    // |value - nearest integer| per returned entry
  double max_residual = 0.0;               // max residual over the whole support box
  double max_residual_normalized = 0.0;    // the above divided by q^m
  std::vector<std::pair<Homology, double>> flagged;  // entries beyond tolerance, normalized
};

/// Counts via the character-sum closed form and exact grid inversion.
/// The twisted count n(eps, m) is a trigonometric polynomial in eps with
/// frequencies in [-m, m]^k, so sampling on the (2m+1)-point grid per axis
/// and applying the inverse DFT recovers the coefficients up to round-off.
inline FourierSlice fourier_count_by_homology(int k, int m, double rel_tol = 1e-6,
                                              int threads = 1) {
  if (k < 2) throw std::invalid_argument("rank must be >= 2");
  if (m < 1) throw std::invalid_argument("word length must be >= 1");
  const int G = 2 * m + 1;
  const long long q = 2LL * k - 1;
  std::size_t npoints = 1;
  for (int i = 0; i < k; ++i) {
    npoints *= static_cast<std::size_t>(G);
    if (npoints > (1u << 28)) throw GuardError("fourier grid exceeds memory guard");
  }
  // DFT work is k * G^(k+1); refuse upfront rather than grind.
  if (static_cast<double>(k) * std::pow(static_cast<double>(G), k + 1) > kDpCostBudget)
    throw GuardError("fourier cost guard: grid transform exceeds the work budget");

  // Sample n(eps, m) on the grid; eps = g/G per axis. Sharded by the first
  // grid axis into fixed slabs, so values are identical for any thread count.
  std::vector<std::complex<double>> values(npoints);
  const std::size_t slab = npoints / static_cast<std::size_t>(G);
  std::vector<double> cos_table(static_cast<std::size_t>(G));
  for (int g = 0; g < G; ++g)
    cos_table[static_cast<std::size_t>(g)] =
        2.0 * std::cos(2.0 * 3.14159265358979323846 * g / G);
  run_sharded(G, threads, [&](int g0) {
    std::vector<int> gg(static_cast<std::size_t>(k), 0);
    gg[0] = g0;
    for (std::size_t off = 0; off < slab; ++off) {
      std::size_t rest = off;
      for (int i = k - 1; i >= 1; --i) {
        gg[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(G));
        rest /= static_cast<std::size_t>(G);
      }
      double a = 0.0;
      for (int i = 0; i < k; ++i) a += cos_table[static_cast<std::size_t>(gg[static_cast<std::size_t>(i)])];
      // Power sums of the roots of x^2 - A x + q: p_j = A p_{j-1} - q p_{j-2}.
      double pm2 = 2.0, pm1 = a, p = (m == 1) ? a : 0.0;
      for (int j = 2; j <= m; ++j) {
        p = a * pm1 - static_cast<double>(q) * pm2;
        pm2 = pm1;
        pm1 = p;
      }
      double parity = (m % 2 == 0) ? 2.0 * (k - 1) : 0.0;
      values[static_cast<std::size_t>(g0) * slab + off] = p + parity;
    }
  });

  // Separable inverse DFT, axis by axis; beta indexed as residues mod G
  // (decode maps g > m to g - G).
  const double pi2 = 2.0 * 3.14159265358979323846;
  std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(G) * static_cast<std::size_t>(G));
  for (int b = 0; b < G; ++b)
    for (int g = 0; g < G; ++g)
      twiddle[static_cast<std::size_t>(b) * static_cast<std::size_t>(G) + static_cast<std::size_t>(g)] =
          std::exp(std::complex<double>(0.0, -pi2 * b * g / G)) / static_cast<double>(G);
  std::vector<std::complex<double>> work(npoints);
  std::size_t stride = npoints / static_cast<std::size_t>(G);
  for (int axis = 0; axis < k; ++axis) {
    // Transform along the first axis, then rotate axes by reindexing:
    // out[b, rest] = sum_g twiddle[b,g] * in[g, rest], written transposed so
    // after k passes the layout is back to the original axis order.
    for (std::size_t rest = 0; rest < stride; ++rest) {
      for (int b = 0; b < G; ++b) {
        std::complex<double> s = 0.0;
        const std::complex<double>* tw = &twiddle[static_cast<std::size_t>(b) * static_cast<std::size_t>(G)];
        for (int g = 0; g < G; ++g)
          s += tw[g] * values[static_cast<std::size_t>(g) * stride + rest];
        work[rest * static_cast<std::size_t>(G) + static_cast<std::size_t>(b)] = s;
      }
    }
    values.swap(work);
  }

  FourierSlice out;
  out.rounded.rank = k;
  out.rounded.max_length = m;
  const double qm = std::pow(static_cast<double>(q), m);
  std::vector<int> g(static_cast<std::size_t>(k));
  for (std::size_t idx = 0; idx < npoints; ++idx) {
    std::size_t rest = idx;
    for (int i = k - 1; i >= 0; --i) {
      g[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(G));
      rest /= static_cast<std::size_t>(G);
    }
    Homology beta(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      beta[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)] <= m
                                              ? g[static_cast<std::size_t>(i)]
                                              : g[static_cast<std::size_t>(i)] - G;
    const std::complex<double> v = values[idx];
    const double nearest = std::round(v.real());
    const double resid = std::hypot(v.real() - nearest, v.imag());
    out.max_residual = std::max(out.max_residual, resid);
    if (resid / qm > rel_tol) out.flagged.emplace_back(beta, resid / qm);
    if (nearest != 0.0) {
      out.residuals[beta] = resid;
      out.rounded.by_length[m][std::move(beta)] = static_cast<long long>(nearest);
    }
  }
  out.max_residual_normalized = out.max_residual / qm;
  return out;
}

}  // namespace fgc
