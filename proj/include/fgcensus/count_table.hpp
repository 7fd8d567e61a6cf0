#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fgcensus/checked_int.hpp"
#include "fgcensus/word.hpp"

namespace fgc {

constexpr int kTableSchemaVersion = 1;

/// Exact census indexed by word length m and abelianization vector.
/// Entries are stored sparsely; absent keys mean a count of zero. The
/// ordered map gives a canonical (lexicographic) serialization order.
struct CountTable {
  int rank = 2;
  int max_length = 0;
  std::map<int, std::map<Homology, CheckedInt128>> by_length;

  CheckedInt128 at(int m, const Homology& beta) const {
    auto it = by_length.find(m);
    if (it == by_length.end()) return 0;
    auto jt = it->second.find(beta);
    return jt == it->second.end() ? CheckedInt128(0) : jt->second;
  }

  void add(int m, const Homology& beta, CheckedInt128 c) {
    if (c.is_zero()) return;
    by_length[m][beta] += c;
    max_length = std::max(max_length, m);
  }

  CheckedInt128 row_sum(int m) const {
    CheckedInt128 total(0);
    auto it = by_length.find(m);
    if (it == by_length.end()) return total;
    for (const auto& [beta, c] : it->second) total += c;
    return total;
  }

  friend bool operator==(const CountTable& a, const CountTable& b) {
    return a.rank == b.rank && a.by_length == b.by_length;
  }
};

/// Number of cyclically reduced words of length exactly m: q^m + 1 + (k-1)(1+(-1)^m).
inline CheckedInt128 cyclically_reduced_word_count(int k, int m) {
  const long long q = 2LL * k - 1;
  CheckedInt128 c = CheckedInt128::pow(q, m);
  c += 1;
  if (m % 2 == 0) c += 2LL * (k - 1);
  return c;
}

/// Prefix sums over length: entry (m, beta) of the result counts words of
/// length <= m with the given abelianization.
inline CountTable cumulative_counts(const CountTable& t) {
  CountTable out;
  out.rank = t.rank;
  out.max_length = t.max_length;
  std::map<Homology, CheckedInt128> running;
  for (int m = 1; m <= t.max_length; ++m) {
    auto it = t.by_length.find(m);
    if (it != t.by_length.end())
      for (const auto& [beta, c] : it->second) running[beta] += c;
    if (!running.empty()) out.by_length[m] = running;
  }
  return out;
}

/// One fixed-length slice serialized as
///   {"schema_version":1,"rank":k,"length":m,"entries":[[[b1,..,bk],"count"],...]}
/// with entries in lexicographic beta order and counts as decimal strings.
inline nlohmann::json slice_to_json(const CountTable& t, int m) {
  nlohmann::json entries = nlohmann::json::array();
  auto it = t.by_length.find(m);
  if (it != t.by_length.end()) {
    for (const auto& [beta, c] : it->second) {
      entries.push_back(nlohmann::json::array({beta, c.str()}));
    }
  }
  return nlohmann::json{{"schema_version", kTableSchemaVersion},
                        {"rank", t.rank},
                        {"length", m},
                        {"entries", entries}};
}

inline nlohmann::json table_to_json(const CountTable& t) {
  nlohmann::json slices = nlohmann::json::array();
  for (const auto& [m, slice] : t.by_length) {
    (void)slice;
    slices.push_back(slice_to_json(t, m));
  }
  return nlohmann::json{
      {"schema_version", kTableSchemaVersion}, {"rank", t.rank}, {"slices", slices}};
}

inline void slice_from_json(const nlohmann::json& j, CountTable& t) {
  if (j.at("schema_version").get<int>() != kTableSchemaVersion)
    throw std::runtime_error("unsupported table schema version");
  const int rank = j.at("rank").get<int>();
  if (t.by_length.empty()) t.rank = rank;
  if (t.rank != rank) throw std::runtime_error("rank mismatch across slices");
  const int m = j.at("length").get<int>();
  auto& slice = t.by_length[m];
  for (const auto& e : j.at("entries")) {
    Homology beta = e.at(0).get<Homology>();
    if (beta.size() != static_cast<std::size_t>(rank))
      throw std::runtime_error("entry dimension does not match rank");
    slice[beta] = CheckedInt128::parse(e.at(1).get<std::string>());
  }
  t.max_length = std::max(t.max_length, m);
}

inline CountTable table_from_json(const nlohmann::json& j) {
  CountTable t;
  if (j.contains("slices")) {
    for (const auto& s : j.at("slices")) slice_from_json(s, t);
  } else {
    slice_from_json(j, t);
  }
  return t;
}

/// CSV columns: m, b1..bk, count.
inline std::string table_to_csv(const CountTable& t) {
  std::ostringstream os;
  os << "m";
  for (int j = 1; j <= t.rank; ++j) os << ",b" << j;
  os << ",count\n";
  for (const auto& [m, slice] : t.by_length) {
    for (const auto& [beta, c] : slice) {
      os << m;
      for (long long b : beta) os << ',' << b;
      os << ',' << c.str() << '\n';
    }
  }
  return os.str();
}

}  // namespace fgc
