// fgcensus command line front end.
//
// Subcommands: count, classes, predict, density, surface-predictor,
// experiment {coprime|progression|local-limit|regression}, identity-check.
//
// Exit codes: 0 success, 1 verdict failure, 2 configuration error,
// 3 guard violation, 4 numeric failure (overflow / precision breakdown),
// 5 I/O error. Errors are reported as machine-readable JSON on stdout.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgcensus/cache.hpp"
#include "fgcensus/census.hpp"
#include "fgcensus/class_counts.hpp"
#include "fgcensus/experiments.hpp"
#include "fgcensus/limit_laws.hpp"
#include "fgcensus/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError {
  int code;
  std::string klass;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& klass, const std::string& message) {
  throw CliError{code, klass, message};
}

std::vector<long long> parse_csv_ints(const std::string& s) {
  std::vector<long long> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoll(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

fs::path default_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FGCENSUS_CACHE_DIR"); env && *env) return env;
  return ".fgcensus-cache";
}

fgc::QuadraticNorm load_norm(const std::string& norm_file, int dim) {
  if (norm_file.empty()) return fgc::QuadraticNorm::identity(dim);
  std::ifstream in(norm_file);
  if (!in) fail(5, "io", "cannot open norm file " + norm_file);
  json j;
  in >> j;
  std::vector<double> mat;
  for (const auto& row : j)
    for (const auto& v : row) mat.push_back(v.get<double>());
  return fgc::QuadraticNorm(dim, std::move(mat));
}

void emit_report(const fgc::ExperimentReport& report, const std::string& out_dir,
                 const std::string& format) {
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(5, "io", "cannot create output directory " + dir.string());
  const std::string base = report.name;
  {
    std::ofstream out(dir / (base + "_report.json"));
    out << report.to_json().dump(2) << "\n";
    if (!out) fail(5, "io", "cannot write report json");
  }
  {
    std::ofstream out(dir / (base + "_report.csv"));
    out << report.to_csv();
    if (!out) fail(5, "io", "cannot write report csv");
  }
  if (format == "json") {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    std::cout << report.to_text();
  }
}

std::string table_text(const fgc::CountTable& t) {
  std::ostringstream os;
  for (const auto& [m, slice] : t.by_length) {
    os << "m=" << m << "  (rank " << t.rank << ")\n";
    for (const auto& [beta, c] : slice) {
      os << "  (";
      for (std::size_t i = 0; i < beta.size(); ++i) os << (i ? "," : "") << beta[i];
      os << ")  " << c.str() << "\n";
    }
  }
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"fgcensus: exact censuses of cyclically reduced words in free groups,\n"
               "stratified by abelianization, with spectral identities, Gaussian limit\n"
               "predictors, and equidistribution experiments."};
  app.require_subcommand(1);

  // ---- count ----------------------------------------------------------
  auto* count = app.add_subcommand("count", "exact counts by length and abelianization");
  int c_k = 2, c_m = 1, c_threads = 1;
  std::string c_engine = "dp", c_format = "json", c_cache;
  std::optional<int> c_radius;
  bool c_no_cache = false;
  count->add_option("--k", c_k, "free group rank (>= 2)")->required();
  count->add_option("--m", c_m, "word length")->required();
  count->add_option("--engine", c_engine, "oracle | dp | fourier")
      ->check(CLI::IsMember({"oracle", "dp", "fourier"}));
  count->add_option("--radius", c_radius, "omit entries with max|beta_i| above this");
  count->add_option("--threads", c_threads, "worker threads");
  count->add_option("--cache-dir", c_cache, "cache directory (default $FGCENSUS_CACHE_DIR)");
  count->add_flag("--no-cache", c_no_cache, "bypass the result cache");
  count->add_option("--format", c_format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  long long c_word_budget = fgc::EnumGuard{}.word_budget;
  count->add_option("--word-budget", c_word_budget, "enumeration guard budget (oracle engine)");

  // ---- classes --------------------------------------------------------
  auto* classes = app.add_subcommand("classes", "conjugacy class counts by abelianization");
  int l_k = 2, l_m = 1, l_threads = 1;
  std::string l_mode = "auto", l_format = "json";
  classes->add_option("--k", l_k, "free group rank")->required();
  classes->add_option("--m", l_m, "class length")->required();
  classes->add_option("--mode", l_mode, "exact | approx | auto")
      ->check(CLI::IsMember({"exact", "approx", "auto"}));
  classes->add_option("--threads", l_threads, "worker threads");
  classes->add_option("--format", l_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  long long l_word_budget = fgc::EnumGuard{}.word_budget;
  classes->add_option("--word-budget", l_word_budget, "enumeration guard budget (exact mode)");

  // ---- predict --------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "Gaussian prediction vs exact count");
  int p_k = 2, p_m = 1, p_threads = 1;
  std::string p_beta;
  bool p_cumulative = false;
  predict->add_option("--k", p_k, "free group rank")->required();
  predict->add_option("--m", p_m, "word length")->required();
  predict->add_option("--beta", p_beta, "abelianization vector, e.g. 0,0")->required();
  predict->add_flag("--cumulative", p_cumulative, "predict cumulative counts instead");
  predict->add_option("--threads", p_threads, "worker threads");

  // ---- density --------------------------------------------------------
  auto* density = app.add_subcommand("density", "lattice set densities and gaussian sums");
  int d_dim = 2;
  std::string d_set = "full", d_norm_file;
  std::optional<double> d_r, d_T;
  double d_sigma2 = 1.0;
  density->add_option("--dim", d_dim, "lattice dimension");
  density->add_option("--set", d_set, "lattice set spec (full, coprime, ...)");
  density->add_option("--norm-file", d_norm_file, "JSON matrix for the quadratic norm");
  density->add_option("--r", d_r, "ball radius: report the scanned density");
  density->add_option("--T", d_T, "scale: report the truncated gaussian lattice sum");
  density->add_option("--sigma2", d_sigma2, "variance parameter for the gaussian sum");

  // ---- surface-predictor ----------------------------------------------
  auto* surf = app.add_subcommand("surface-predictor",
                                  "genus-g predictor sum over a 2g-dimensional set");
  int s_g = 2;
  double s_T = 100.0;
  std::string s_set = "full", s_norm_file;
  surf->add_option("--g", s_g, "genus (>= 2)")->required();
  surf->add_option("--T", s_T, "scale")->required();
  surf->add_option("--set", s_set, "lattice set spec in dimension 2g");
  surf->add_option("--norm-file", s_norm_file, "JSON matrix (det 1) for the norm");

  // ---- experiment -----------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "end-to-end equidistribution experiments");
  exp->require_subcommand(1);
  int e_k = 2, e_mmax = 16, e_threads = 1;
  std::string e_out, e_format = "text";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--k", e_k, "free group rank");
    sub->add_option("--threads", e_threads, "worker threads");
    sub->add_option("--out-dir", e_out, "directory for report files");
    sub->add_option("--format", e_format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto* exp_cop = exp->add_subcommand("coprime", "coprime abelianization density");
  exp_cop->add_option("--m-max", e_mmax, "largest length");
  add_common(exp_cop);
  auto* exp_prog = exp->add_subcommand("progression", "congruence parity splits");
  std::string prog_l = "2,2", prog_a = "0,0";
  exp_prog->add_option("--l", prog_l, "moduli, e.g. 2,2");
  exp_prog->add_option("--a", prog_a, "residues, e.g. 0,0");
  exp_prog->add_option("--m-max", e_mmax, "largest length");
  add_common(exp_prog);
  auto* exp_ll = exp->add_subcommand("local-limit", "local limit error curves");
  std::string ll_mlist = "8,16,24,32", ll_set = "coprime";
  exp_ll->add_option("--m-list", ll_mlist, "lengths, e.g. 8,16,24,32");
  exp_ll->add_option("--set", ll_set, "lattice set for the summed statistic");
  add_common(exp_ll);
  auto* exp_reg = exp->add_subcommand("regression", "consolidated identity battery");
  int reg_formula = 0, reg_engines = 0, reg_order = 8, reg_eps = 5;
  unsigned long long reg_seed = 20240915ULL;
  exp_reg->add_option("--formula-depth", reg_formula, "largest length for the count formula");
  exp_reg->add_option("--engine-depth", reg_engines, "largest length for engine agreement");
  exp_reg->add_option("--order", reg_order, "series order for the identity check");
  exp_reg->add_option("--eps-count", reg_eps, "number of random characters");
  exp_reg->add_option("--seed", reg_seed, "random seed");
  add_common(exp_reg);

  // ---- identity-check --------------------------------------------------
  auto* idc = app.add_subcommand("identity-check",
                                 "generating-function identity vs enumeration");
  int i_k = 2, i_order = 8, i_random = 0, i_threads = 1;
  std::string i_eps;
  double i_tol = 1e-9;
  unsigned long long i_seed = 20240915ULL;
  idc->add_option("--k", i_k, "free group rank");
  idc->add_option("--order", i_order, "series order");
  idc->add_option("--eps", i_eps, "character point, e.g. 0.3,0.7");
  idc->add_option("--random", i_random, "number of random characters");
  idc->add_option("--seed", i_seed, "random seed");
  idc->add_option("--tol", i_tol, "normalized discrepancy tolerance");
  idc->add_option("--threads", i_threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  // ----------------------------------------------------------------------
  if (count->parsed()) {
    if (c_k < 2) fail(2, "config", "rank must be >= 2");
    fgc::CacheKey key{c_k, c_m, c_engine, fgc::kEngineVersion};
    fs::path cache_dir = default_cache_dir(c_cache);
    if (!c_no_cache && c_format == "json") {
      if (auto hit = fgc::cache_load(cache_dir, key)) {
        std::cout << *hit << "\n";
        return 0;
      }
    }
    fgc::CountTable t;
    if (c_engine == "oracle") {
      fgc::EnumGuard guard;
      guard.word_budget = c_word_budget;
      t = fgc::oracle_count_by_homology(c_k, c_m, guard, c_threads);
    } else if (c_engine == "dp") {
      t = fgc::dp_count_by_homology(c_k, c_m, c_radius, c_threads);
    } else {
      fgc::FourierSlice f = fgc::fourier_count_by_homology(c_k, c_m, 1e-6, c_threads);
      if (!f.flagged.empty())
        fail(4, "precision",
             "fourier inversion residuals exceed tolerance at " +
                 std::to_string(f.flagged.size()) + " entries (max normalized residual " +
                 std::to_string(f.max_residual_normalized) + ")");
      t = std::move(f.rounded);
    }
    const std::string payload = fgc::slice_to_json(t, c_m).dump();
    if (c_format == "json") {
      if (!c_no_cache) fgc::cache_store(cache_dir, key, payload);
      std::cout << payload << "\n";
    } else if (c_format == "csv") {
      std::cout << fgc::table_to_csv(t);
    } else {
      std::cout << table_text(t);
    }
    return 0;
  }

  if (classes->parsed()) {
    if (l_k < 2) fail(2, "config", "rank must be >= 2");
    fgc::EnumGuard guard;
    guard.word_budget = l_word_budget;
    bool exact = l_mode == "exact" || (l_mode == "auto" && l_m <= guard.max_length(l_k));
    if (l_mode == "exact") guard.check(l_k, l_m);
    fgc::ClassCountTable cc = fgc::class_counts(l_k, l_m, guard, !exact, l_threads);
    json j;
    j["schema_version"] = fgc::kTableSchemaVersion;
    j["rank"] = l_k;
    j["length"] = l_m;
    j["mode"] = cc.exact ? "exact-orbit" : "approx-divide-by-m";
    if (cc.exact) {
      j["classes"] = fgc::slice_to_json(cc.classes, l_m)["entries"];
      j["class_total"] = cc.classes.row_sum(l_m).str();
    } else {
      j["approx_class_total"] = cc.class_total(l_m);
      j["note"] = cc.note;
    }
    j["words"] = fgc::slice_to_json(cc.words, l_m)["entries"];
    j["word_total"] = cc.words.row_sum(l_m).str();
    if (l_format == "json") {
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "classes at m=" << l_m << " (" << j["mode"].get<std::string>()
                << "): " << (cc.exact ? cc.classes.row_sum(l_m).str()
                                      : std::to_string(cc.class_total(l_m)))
                << ", words: " << cc.words.row_sum(l_m).str() << "\n";
    }
    return 0;
  }

  if (predict->parsed()) {
    if (p_k < 2) fail(2, "config", "rank must be >= 2");
    fgc::Homology beta = parse_csv_ints(p_beta);
    if (static_cast<int>(beta.size()) != p_k)
      fail(2, "config", "beta must have k coordinates");
    json j;
    j["k"] = p_k;
    j["m"] = p_m;
    j["beta"] = beta;
    double pred = p_cumulative
                      ? fgc::gaussian_cumulative_prediction(p_k, beta, p_m)
                      : fgc::gaussian_local_limit_prediction(p_k, beta, p_m);
    j["prediction"] = pred;  // serializes as null when q^m overflows a double
    if (pred != 0.0) {
      // log10 form stays finite far beyond the floating range of q^m
      const double q = 2.0 * p_k - 1.0;
      const double sigma2 = 1.0 / (p_k - 1.0);
      double b2 = 0.0;
      for (long long b : beta) b2 += static_cast<double>(b) * static_cast<double>(b);
      const double ln10 = std::log(10.0);
      double log10p;
      if (p_cumulative) {
        log10p = -0.5 * p_k * std::log(2.0 * 3.14159265358979323846 * sigma2 * p_m) / ln10 -
                 b2 / (2.0 * sigma2 * p_m) / ln10 + (p_m + 1) * std::log(q) / ln10 -
                 std::log(q - 1.0) / ln10;
      } else {
        log10p = p_m * std::log(q) / ln10 - 0.5 * p_k * std::log(static_cast<double>(p_m)) / ln10 +
                 std::log(2.0) / ln10 -
                 0.5 * p_k * std::log(2.0 * 3.14159265358979323846 * sigma2) / ln10 -
                 b2 / (2.0 * sigma2 * p_m) / ln10;
      }
      j["log10_prediction"] = log10p;
    }
    try {
      fgc::CountTable t = p_cumulative
                              ? fgc::cumulative_counts(fgc::count_table_up_to(p_k, p_m, "dp", {},
                                                                              p_threads))
                              : fgc::dp_count_by_homology(p_k, p_m, {}, p_threads);
      fgc::CheckedInt128 exact = t.at(p_m, beta);
      j["exact"] = exact.str();
      if (exact.is_zero() && pred == 0.0) {
        j["relation"] = "exact-match";
      } else if (exact.is_zero()) {
        j["relation"] = "prediction-only-nonzero";
      } else {
        j["ratio"] = pred / exact.to_double();
        j["relative_error"] = std::abs(pred - exact.to_double()) / exact.to_double();
      }
    } catch (const fgc::GuardError& e) {
      j["exact"] = nullptr;
      j["note"] = std::string("exact count unavailable: ") + e.what();
    }
    std::cout << j.dump() << "\n";
    return 0;
  }

  if (density->parsed()) {
    if (d_r.has_value() == d_T.has_value())
      fail(2, "config", "density needs exactly one of --r (ball) or --T (gaussian sum)");
    fgc::LatticeSet set = fgc::parse_lattice_set(d_set, d_dim);
    if (set.name == "coprime") {
      set.known_density = 1.0 / fgc::riemann_zeta(d_dim);
    }
    fgc::QuadraticNorm norm = load_norm(d_norm_file, d_dim);
    json j;
    j["set"] = set.name;
    j["dim"] = d_dim;
    if (set.known_density) {
      j["known_density"] = *set.known_density;
      j["density_provenance"] = set.density_provenance;
    }
    if (d_r) {
      j["mode"] = "ball";
      j["r"] = *d_r;
      j["value"] = fgc::ball_density_estimate(set, norm, *d_r);
    } else {
      j["mode"] = "gaussian-sum";
      j["T"] = *d_T;
      j["sigma2"] = d_sigma2;
      j["value"] = fgc::lattice_gaussian_sum(norm, set, *d_T, d_sigma2);
    }
    std::cout << j.dump() << "\n";
    return 0;
  }

  if (surf->parsed()) {
    fgc::LatticeSet set = fgc::parse_lattice_set(s_set, 2 * s_g);
    if (set.name == "coprime") set.known_density = 1.0 / fgc::riemann_zeta(2 * s_g);
    fgc::QuadraticNorm norm = load_norm(s_norm_file, 2 * s_g);
    json j;
    j["g"] = s_g;
    j["T"] = s_T;
    j["set"] = set.name;
    j["value"] = fgc::surface_predictor_sum(s_g, norm, set, s_T);
    if (set.known_density) j["known_density"] = *set.known_density;
    std::cout << j.dump() << "\n";
    return 0;
  }

  if (exp->parsed()) {
    if (e_k < 2) fail(2, "config", "rank must be >= 2");
    fgc::ExperimentReport report;
    if (exp_cop->parsed()) {
      report = fgc::coprime_experiment(e_k, e_mmax, e_threads);
    } else if (exp_prog->parsed()) {
      report = fgc::progression_experiment(e_k, parse_csv_ints(prog_l), parse_csv_ints(prog_a),
                                           e_mmax, e_threads);
    } else if (exp_ll->parsed()) {
      std::vector<int> ms;
      for (long long v : parse_csv_ints(ll_mlist)) ms.push_back(static_cast<int>(v));
      fgc::LatticeSet set = fgc::parse_lattice_set(ll_set, e_k);
      report = fgc::local_limit_error_curve(e_k, ms, &set, e_threads);
    } else {
      report = fgc::identity_regression_suite(e_k, reg_formula, reg_engines, reg_order, reg_eps,
                                              reg_seed, e_threads);
    }
    emit_report(report, e_out, e_format);
    return report.all_pass() ? 0 : 1;
  }

  if (idc->parsed()) {
    if (i_k < 2) fail(2, "config", "rank must be >= 2");
    fgc::CountTable oracle = fgc::count_table_up_to(i_k, i_order, "oracle", {}, i_threads);
    std::vector<fgc::CharacterPoint> points;
    if (!i_eps.empty()) {
      std::vector<double> e = parse_csv_doubles(i_eps);
      if (static_cast<int>(e.size()) != i_k) fail(2, "config", "eps must have k coordinates");
      points.emplace_back(std::move(e));
    }
    std::mt19937_64 rng(i_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < i_random; ++t) {
      std::vector<double> e(static_cast<std::size_t>(i_k));
      for (double& x : e) x = unif(rng);
      points.emplace_back(std::move(e));
    }
    if (points.empty()) points.push_back(fgc::CharacterPoint::zero(i_k));
    json per_point = json::array();
    double worst = 0.0;
    for (const auto& p : points) {
      double d = fgc::ihara_identity_check(p, i_k, i_order, oracle);
      per_point.push_back({{"eps", p.eps}, {"discrepancy", d}});
      worst = std::max(worst, d);
    }
    json j;
    j["order"] = i_order;
    j["tolerance"] = i_tol;
    j["max_discrepancy"] = worst;
    j["points"] = per_point;
    j["pass"] = worst <= i_tol;
    std::cout << j.dump() << "\n";
    return worst <= i_tol ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    json j;
    j["error"] = {{"class", e.klass}, {"message", e.message}};
    std::cout << j.dump() << "\n";
    std::cerr << "error (" << e.klass << "): " << e.message << "\n";
    return e.code;
  } catch (const fgc::GuardError& e) {
    json j;
    j["error"] = {{"class", "guard"}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
    std::cerr << "guard violation: " << e.what() << "\n";
    return 3;
  } catch (const fgc::OverflowError& e) {
    json j;
    j["error"] = {{"class", "overflow"}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
    std::cerr << "overflow: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    json j;
    j["error"] = {{"class", "config"}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json j;
    j["error"] = {{"class", "internal"}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
}
