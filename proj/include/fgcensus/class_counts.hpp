#pragma once

#include <map>
#include <string>
#include <vector>

#include "fgcensus/census.hpp"
#include "fgcensus/lattice_set.hpp"

namespace fgc {

/// Conjugacy classes of a given length are the rotation orbits of the
/// cyclically reduced words of that length. Orbit sizes divide the length;
/// they are strictly smaller exactly for proper powers, so dividing word
/// counts by m is only an approximation (flagged as such in approx mode).
struct ClassCountTable {
  int rank = 2;
  int max_length = 0;
  bool exact = true;
  CountTable classes;  // exact mode: classes by (m, beta); empty in approx mode
  CountTable words;    // word-level counts by (m, beta)
  std::string note;

  /// Class count at (m, beta): exact integer, or word-count/m in approx mode.
  double class_value(int m, const Homology& beta) const {
    if (exact) return classes.at(m, beta).to_double();
    return words.at(m, beta).to_double() / static_cast<double>(m);
  }

  double class_total(int m) const {
    if (exact) return classes.row_sum(m).to_double();
    return words.row_sum(m).to_double() / static_cast<double>(m);
  }
};

namespace detail {

struct ClassSliceAcc {
  std::vector<CheckedInt128> classes;
  std::vector<CheckedInt128> orbit_words;  // sum of orbit sizes, must equal word counts
};

}  // namespace detail

/// Exact class census at length m: enumerate cyclically reduced words and
/// keep each orbit's lexicographically least rotation as its representative.
/// Also returns the orbit-size sums, which must reproduce the word table.
inline std::pair<CountTable, CountTable> class_count_slice_exact(int k, int m,
                                                                 const EnumGuard& guard = {},
                                                                 int threads = 1) {
  guard.check(k, m);
  const detail::HomologyBox box(k, m);
  const int nshards = 2 * k;
  std::vector<detail::ClassSliceAcc> shards(static_cast<std::size_t>(nshards));
  run_sharded(nshards, threads, [&](int shard) {
    detail::ClassSliceAcc acc;
    acc.classes.assign(box.size(), CheckedInt128(0));
    acc.orbit_words.assign(box.size(), CheckedInt128(0));
    std::vector<int> delta(static_cast<std::size_t>(k));
    enumerate_cyclically_reduced_from(k, m, shard, [&](std::span<const std::uint8_t> codes) {
      if (least_rotation_index(codes) != 0) return;
      // Representative: this word IS the least rotation of its orbit.
      std::fill(delta.begin(), delta.end(), 0);
      for (std::uint8_t c : codes) delta[static_cast<std::size_t>(c / 2)] += (c & 1) ? -1 : +1;
      const std::size_t idx = box.index(delta);
      acc.classes[idx] += 1;
      acc.orbit_words[idx] += static_cast<long long>(rotation_orbit_size(codes));
    });
    shards[static_cast<std::size_t>(shard)] = std::move(acc);
  });

  CountTable classes, orbit_words;
  classes.rank = orbit_words.rank = k;
  classes.max_length = orbit_words.max_length = m;
  for (std::size_t i = 0; i < box.size(); ++i) {
    CheckedInt128 c(0), w(0);
    for (const auto& s : shards) {
      c += s.classes[i];
      w += s.orbit_words[i];
    }
    if (!c.is_zero()) {
      Homology beta = box.decode(i);
      classes.by_length[m][beta] = c;
      orbit_words.by_length[m][std::move(beta)] = w;
    }
  }
  return {std::move(classes), std::move(orbit_words)};
}

/// Class counts for all lengths 1..m_max. Exact (orbit census) while the
/// enumeration guard admits it, otherwise the divide-by-m approximation on
/// DP word counts, with an explanatory flag.
inline ClassCountTable class_counts(int k, int m_max, const EnumGuard& guard = {},
                                    bool allow_approx = true, int threads = 1) {
  ClassCountTable out;
  out.rank = k;
  out.max_length = m_max;
  const int exact_limit = guard.max_length(k);
  out.exact = m_max <= exact_limit;
  if (!out.exact && !allow_approx)
    throw GuardError("exact class census beyond enumeration guard (max m " +
                     std::to_string(exact_limit) + ")");
  if (out.exact) {
    for (int m = 1; m <= m_max; ++m) {
      auto [cls, words] = class_count_slice_exact(k, m, guard, threads);
      out.classes.by_length[m] = std::move(cls.by_length[m]);
      out.words.by_length[m] = std::move(words.by_length[m]);
    }
    out.classes.rank = out.words.rank = k;
    out.classes.max_length = out.words.max_length = m_max;
  } else {
    out.words = count_table_up_to(k, m_max, "dp", {}, threads);
    out.note =
        "approximate: word counts divided by m; proper powers make this an "
        "undercount/overcount of bounded relative size, unquantified here";
  }
  return out;
}

/// Sum of table entries with beta in B over lengths <= m. Works on word
/// tables and class tables alike.
inline CheckedInt128 restricted_count(const CountTable& per_length, const LatticeSet& B, int m) {
  CheckedInt128 total(0);
  for (const auto& [len, slice] : per_length.by_length) {
    if (len > m) break;
    for (const auto& [beta, c] : slice) {
      if (B.contains(beta)) total += c;
    }
  }
  return total;
}

}  // namespace fgc
