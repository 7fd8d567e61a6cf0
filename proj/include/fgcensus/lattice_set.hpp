#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgcensus/word.hpp"

namespace fgc {

/// A decidable set of integer lattice vectors, with an optional known
/// asymptotic density. Every built-in constructor records where its density
/// value comes from, and reports validate that provenance is present.
struct LatticeSet {
  int dim = 0;
  std::string name;
  std::function<bool(std::span<const long long>)> contains;
  std::optional<double> known_density;
  std::string density_provenance;

  bool operator()(std::span<const long long> v) const { return contains(v); }
};

inline LatticeSet full_lattice(int d) {
  return {d, "full", [](std::span<const long long>) { return true; }, 1.0,
          "whole lattice"};
}

inline LatticeSet empty_set(int d) {
  return {d, "empty", [](std::span<const long long>) { return false; }, 0.0, "empty set"};
}

inline LatticeSet singleton_set(Homology v) {
  const int d = static_cast<int>(v.size());
  std::string nm = "singleton:";
  for (std::size_t i = 0; i < v.size(); ++i) nm += (i ? "," : "") + std::to_string(v[i]);
  auto target = std::make_shared<Homology>(std::move(v));
  return {d, nm,
          [target](std::span<const long long> x) {
            return std::equal(x.begin(), x.end(), target->begin(), target->end());
          },
          0.0, "finite set has density zero"};
}

inline LatticeSet finite_set(std::vector<Homology> vs, int d) {
  auto members = std::make_shared<std::set<Homology>>(vs.begin(), vs.end());
  return {d, "finite",
          [members](std::span<const long long> x) {
            return members->count(Homology(x.begin(), x.end())) > 0;
          },
          0.0, "finite set has density zero"};
}

/// Shifted sublattice {v : v_j == a_j (mod l_j) for all j}. Density 1/(l1...lk).
inline LatticeSet progression_set(std::vector<long long> l, std::vector<long long> a) {
  if (l.size() != a.size()) throw std::invalid_argument("moduli/residue size mismatch");
  const int d = static_cast<int>(l.size());
  double dens = 1.0;
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (l[j] < 1) throw std::invalid_argument("moduli must be >= 1");
    if (a[j] < 0 || a[j] >= l[j]) throw std::invalid_argument("residue out of range");
    dens /= static_cast<double>(l[j]);
  }
  std::ostringstream nm;
  nm << "progression:l=";
  for (std::size_t j = 0; j < l.size(); ++j) nm << (j ? "," : "") << l[j];
  nm << ";a=";
  for (std::size_t j = 0; j < a.size(); ++j) nm << (j ? "," : "") << a[j];
  auto lp = std::make_shared<std::vector<long long>>(std::move(l));
  auto ap = std::make_shared<std::vector<long long>>(std::move(a));
  return {d, nm.str(),
          [lp, ap](std::span<const long long> x) {
            for (std::size_t j = 0; j < lp->size(); ++j) {
              long long r = x[j] % (*lp)[j];
              if (r < 0) r += (*lp)[j];
              if (r != (*ap)[j]) return false;
            }
            return true;
          },
          dens, "exact sublattice proportion 1/(l1*...*lk)"};
}

/// Vectors whose coordinates are relatively prime: gcd over absolute values
/// is 1. The zero vector is excluded; unit vectors belong. Density 1/zeta(k).
inline LatticeSet coprime_set(int d) {
  return {d, "coprime",
          [](std::span<const long long> x) {
            long long g = 0;
            for (long long v : x) g = std::gcd(g, v < 0 ? -v : v);
            return g == 1;
          },
          std::nullopt,  // filled by callers that know zeta(d)
          "classical density of relatively prime k-tuples, 1/zeta(k)"};
}

/// Half-space {v : v_axis >= 0}; axis is 0-based.
inline LatticeSet halfspace_set(int d, int axis) {
  if (axis < 0 || axis >= d) throw std::invalid_argument("halfspace axis out of range");
  return {d, "halfspace:" + std::to_string(axis),
          [axis](std::span<const long long> x) { return x[static_cast<std::size_t>(axis)] >= 0; },
          0.5, "symmetric half-space"};
}

/// Planar angular sector [from_deg, to_deg) measured counterclockwise from
/// the positive first axis; the origin is excluded. Dimension 2 only.
inline LatticeSet sector_set(double from_deg, double to_deg) {
  return {2, "sector:" + std::to_string(from_deg) + "," + std::to_string(to_deg),
          [from_deg, to_deg](std::span<const long long> x) {
            if (x[0] == 0 && x[1] == 0) return false;
            double ang = std::atan2(static_cast<double>(x[1]), static_cast<double>(x[0]));
            double deg = ang * 180.0 / 3.14159265358979323846;
            if (deg < 0) deg += 360.0;
            double a = from_deg, b = to_deg;
            if (a <= b) return a <= deg && deg < b;
            return deg >= a || deg < b;  // wrap-around sector
          },
          std::nullopt, "euclidean sector proportion (angle/360)"};
}

inline LatticeSet complement_set(LatticeSet s) {
  auto inner = std::make_shared<LatticeSet>(std::move(s));
  std::optional<double> dens;
  if (inner->known_density) dens = 1.0 - *inner->known_density;
  return {inner->dim, "complement:" + inner->name,
          [inner](std::span<const long long> x) { return !inner->contains(x); }, dens,
          inner->known_density ? "one minus density of " + inner->name : ""};
}

namespace detail {
inline std::vector<long long> parse_int_list(std::string_view s) {
  std::vector<long long> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(std::stoll(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::stoll(cur));
  return out;
}
}  // namespace detail

/// Parse a set specification string. Accepted forms:
///   full | empty | coprime | singleton:0,0 | progression:l=2,2;a=0,0
///   halfspace:0 | sector:0,90 | complement:<spec> | finite-json:<path-or-inline>
inline LatticeSet parse_lattice_set(const std::string& spec, int d) {
  auto starts = [&](const char* p) { return spec.rfind(p, 0) == 0; };
  if (spec == "full") return full_lattice(d);
  if (spec == "empty") return empty_set(d);
  if (spec == "coprime") return coprime_set(d);
  if (starts("singleton:")) {
    Homology v = detail::parse_int_list(spec.substr(10));
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument("singleton dimension mismatch");
    return singleton_set(std::move(v));
  }
  if (starts("progression:")) {
    std::string body = spec.substr(12);
    auto semi = body.find(';');
    if (semi == std::string::npos || body.rfind("l=", 0) != 0 || body.find("a=", semi) != semi + 1)
      throw std::invalid_argument("progression spec must look like progression:l=2,2;a=0,0");
    auto l = detail::parse_int_list(body.substr(2, semi - 2));
    auto a = detail::parse_int_list(body.substr(semi + 3));
    if (static_cast<int>(l.size()) != d) throw std::invalid_argument("progression dimension mismatch");
    return progression_set(std::move(l), std::move(a));
  }
  if (starts("halfspace:")) return halfspace_set(d, std::stoi(spec.substr(10)));
  if (starts("sector:")) {
    auto v = detail::parse_int_list(spec.substr(7));
    if (v.size() != 2 || d != 2) throw std::invalid_argument("sector needs two angles and dim 2");
    return sector_set(static_cast<double>(v[0]), static_cast<double>(v[1]));
  }
  if (starts("complement:")) return complement_set(parse_lattice_set(spec.substr(11), d));
  if (starts("finite-json:")) {
    nlohmann::json j = nlohmann::json::parse(spec.substr(12));
    std::vector<Homology> vs;
    for (const auto& e : j) vs.push_back(e.get<Homology>());
    for (const auto& v : vs)
      if (static_cast<int>(v.size()) != d) throw std::invalid_argument("finite set dim mismatch");
    return finite_set(std::move(vs), d);
  }
  throw std::invalid_argument("unknown lattice set spec: " + spec);
}

}  // namespace fgc
