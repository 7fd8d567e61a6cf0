// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit status 0 iff all pass.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fgcensus/census.hpp"
#include "fgcensus/class_counts.hpp"
#include "fgcensus/experiments.hpp"
#include "fgcensus/limit_laws.hpp"
#include "fgcensus/spectral.hpp"

using namespace fgc;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string label)
      : number_(number), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}

  void finish(bool pass, double limit_seconds, const std::string& detail) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const bool in_time = secs < limit_seconds;
    const bool ok = pass && in_time;
    if (!ok) ++g_failures;
    std::printf("%s  criterion %2d: %s  [%s; %.2fs%s]\n", ok ? "PASS" : "FAIL", number_,
                label_.c_str(), detail.c_str(), secs,
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(FGC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

void criterion_1_count_formula() {
  Criterion c(1, "enumeration totals match q^m + 1 + (k-1)(1+(-1)^m), k in {2,3}, m <= 10");
  bool ok = true;
  std::string detail = "all lengths exact";
  for (int k : {2, 3}) {
    for (int m = 1; m <= 10 && ok; ++m) {
      long long n = 0;
      enumerate_cyclically_reduced(k, m, [&](std::span<const std::uint8_t>) { ++n; });
      if (CheckedInt128(n) != cyclically_reduced_word_count(k, m)) {
        ok = false;
        detail = "mismatch at k=" + std::to_string(k) + " m=" + std::to_string(m);
      }
    }
  }
  c.finish(ok, 60.0, detail);
}

void criterion_2_ihara_identity() {
  Criterion c(2, "generating-function coefficients match oracle sums, 20 random characters");
  std::mt19937_64 rng(0xACCE97ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int k : {2, 3}) {
    CountTable oracle = count_table_up_to(k, 8, "oracle");
    for (int t = 0; t < 20; ++t) {
      std::vector<double> e(static_cast<std::size_t>(k));
      for (double& x : e) x = unif(rng);
      worst = std::max(worst, ihara_identity_check(CharacterPoint(std::move(e)), k, 8, oracle));
    }
  }
  std::ostringstream d;
  d << "max normalized discrepancy " << worst << " (tol 1e-9)";
  c.finish(worst <= 1e-9, 60.0, d.str());
}

void criterion_3_triple_engine() {
  Criterion c(3, "oracle, dp, and rounded fourier tables identical (k=2 m<=12, k=3 m<=8)");
  bool ok = true;
  double worst_resid = 0.0;
  std::string detail;
  for (auto [k, top] : std::vector<std::pair<int, int>>{{2, 12}, {3, 8}}) {
    for (int m = 1; m <= top && ok; ++m) {
      CountTable o = oracle_count_by_homology(k, m, {}, 2);
      CountTable d = dp_count_by_homology(k, m, {}, 2);
      FourierSlice f = fourier_count_by_homology(k, m, 1e-6, 2);
      worst_resid = std::max(worst_resid, f.max_residual_normalized);
      if (!(o.by_length == d.by_length) || !(o.by_length == f.rounded.by_length) ||
          !f.flagged.empty()) {
        ok = false;
        detail = "disagreement at k=" + std::to_string(k) + " m=" + std::to_string(m);
      }
    }
  }
  if (ok) {
    std::ostringstream d;
    d << "identical; max fourier residual/q^m = " << worst_resid << " (tol 1e-6)";
    detail = d.str();
    ok = worst_resid <= 1e-6;
  }
  c.finish(ok, 300.0, detail);
}

void criterion_4_eigenvalue_algebra() {
  Criterion c(4, "eigenvalue pair algebra at 1e4 random adjacency values, both ranks");
  std::mt19937_64 rng(0xE16E2ULL);
  bool ok = true;
  double worst = 0.0;
  for (int k : {2, 3}) {
    const double q = 2.0 * k - 1.0;
    std::uniform_real_distribution<double> unif(-2.0 * k, 2.0 * k);
    for (int t = 0; t < 10000; ++t) {
      const double a = unif(rng);
      EigenPair e = eigenpair(a, k);
      worst = std::max(worst, std::abs(e.lambda1 * e.lambda2 - 1.0 / q));
      worst = std::max(worst, std::abs(e.lambda1 + e.lambda2 - a / q));
    }
    EigenPair triv = eigenpair(2.0 * k, k);
    worst = std::max(worst, std::abs(triv.lambda1 - 1.0));
    worst = std::max(worst, std::abs(triv.lambda2 - 1.0 / q));
    EigenPair sign = eigenpair(-2.0 * k, k);
    worst = std::max(worst, std::abs(sign.lambda1 + 1.0 / q));
    worst = std::max(worst, std::abs(sign.lambda2 + 1.0));
  }
  ok = worst <= 1e-12;
  std::ostringstream d;
  d << "max defect " << worst << " (tol 1e-12)";
  c.finish(ok, 60.0, d.str());
}

void criterion_5_local_limit() {
  Criterion c(5, "sup-over-beta scaled error strictly smaller at m=32 than at m=8 (k=2)");
  ExperimentReport r = local_limit_error_curve(2, {8, 32}, nullptr, 2);
  const auto* sup = r.find_series("sup_error");
  bool ok = sup && sup->size() == 2 && (*sup)[1].value < (*sup)[0].value;
  std::ostringstream d;
  if (sup && sup->size() == 2)
    d << "sup(8) = " << (*sup)[0].value << ", sup(32) = " << (*sup)[1].value;
  c.finish(ok, 300.0, d.str());
}

void criterion_6_coprime() {
  Criterion c(6, "coprime averaged word-level ratio at m=30 within 0.05 of 1/zeta(2)");
  const double target = 1.0 / riemann_zeta(2);
  CountTable words = count_table_up_to(2, 31, "dp", {}, 2);
  const double ratio = equidistribution_ratio(words, coprime_set(2), 30);
  const double err = std::abs(ratio - target);
  std::ostringstream d;
  d << "ratio " << ratio << " vs " << target << ", |err| = " << err << " (tol 0.05)";
  c.finish(err <= 0.05, 300.0, d.str());
}

void criterion_7_progression() {
  Criterion c(7, "congruence parity splits at m=24: 0.375 / 0.125 / 0.25 and odd-modulus 0.5");
  ExperimentReport even_case = progression_experiment(2, {2, 2}, {0, 0}, 24, 2);
  const auto* even_s = even_case.find_series("ratio_even_m");
  const auto* odd_s = even_case.find_series("ratio_odd_m");
  const auto* avg_s = even_case.find_series("averaged_ratio");
  bool ok = even_s && odd_s && avg_s;
  double e_err = 1.0, o_err = 1.0, a_err = 1.0, u_err = 1.0;
  if (ok) {
    e_err = std::abs(even_s->back().value - 0.375);
    o_err = std::abs(odd_s->back().value - 0.125);
    a_err = std::abs(avg_s->back().value - 0.25);
  }
  ExperimentReport odd_case = progression_experiment(2, {2, 1}, {0, 0}, 24, 2);
  const auto* plain = odd_case.find_series("ratio");
  if (plain) u_err = std::abs(plain->back().value - 0.5);
  ok = ok && plain && e_err <= 0.02 && o_err <= 0.02 && a_err <= 0.01 && u_err <= 0.02;
  std::ostringstream d;
  d << "errors even " << e_err << ", odd " << o_err << ", avg " << a_err << ", unaveraged "
    << u_err;
  c.finish(ok, 300.0, d.str());
}

void criterion_8_lattice_sums() {
  Criterion c(8, "gaussian lattice sums: full ~ 1, even sublattice ~ 1/2, additivity");
  QuadraticNorm I2 = QuadraticNorm::identity(2);
  const double full_val = lattice_gaussian_sum(I2, full_lattice(2), 1e4, 1.0);
  const double full_err = std::abs(full_val - 1.0);
  const double even_val = lattice_gaussian_sum(I2, progression_set({2, 1}, {0, 0}), 1e4, 1.0);
  const double even_err = std::abs(even_val - 0.5);
  LatticeSet B = coprime_set(2);
  const double in_b = lattice_gaussian_sum(I2, B, 1e4, 1.0);
  const double out_b = lattice_gaussian_sum(I2, complement_set(B), 1e4, 1.0);
  const double add_err = std::abs(in_b + out_b - full_val);
  const bool ok = full_err <= 1e-4 && even_err <= 1e-3 && add_err <= 1e-12 * full_val;
  std::ostringstream d;
  d << "|full-1| = " << full_err << " (1e-4), |even-1/2| = " << even_err
    << " (1e-3), additivity defect " << add_err << " (1e-12 rel)";
  c.finish(ok, 300.0, d.str());
}

void criterion_9_eigenpower() {
  Criterion c(9, "scaled eigenpower at m=1e4 within 1e-3 of the gaussian limit");
  const double e1 = std::abs(scaled_eigenpower({1.0, 0.0}, 2, 10000) - std::exp(-0.5));
  const double e2 = std::abs(scaled_eigenpower({1.0, 1.0}, 2, 10000) - std::exp(-1.0));
  std::ostringstream d;
  d << "|err(1,0)| = " << e1 << ", |err(1,1)| = " << e2 << " (tol 1e-3)";
  c.finish(e1 < 1e-3 && e2 < 1e-3, 60.0, d.str());
}

void criterion_10_determinism() {
  Criterion c(10, "CLI integer outputs byte-identical across --threads 1, 2, 8");
  bool ok = true;
  std::string detail = "dp, oracle, and fourier outputs identical";
  for (const char* engine : {"dp", "oracle", "fourier"}) {
    std::string base;
    for (int threads : {1, 2, 8}) {
      std::ostringstream cmd;
      cmd << "count --k 2 --m 10 --engine " << engine << " --threads " << threads
          << " --no-cache --format json";
      std::string out = run_cli(cmd.str());
      if (out.empty() || out.front() != '{') {
        ok = false;
        detail = std::string("unexpected output from engine ") + engine;
        break;
      }
      if (base.empty()) {
        base = out;
      } else if (out != base) {
        ok = false;
        detail = std::string("outputs differ for engine ") + engine;
      }
    }
    if (!ok) break;
  }
  c.finish(ok, 300.0, detail);
}

}  // namespace

int main() {
  criterion_1_count_formula();
  criterion_2_ihara_identity();
  criterion_3_triple_engine();
  criterion_4_eigenvalue_algebra();
  criterion_5_local_limit();
  criterion_6_coprime();
  criterion_7_progression();
  criterion_8_lattice_sums();
  criterion_9_eigenpower();
  criterion_10_determinism();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
