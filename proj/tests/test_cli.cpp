#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
};

CliResult cli(const std::string& args) {
  const std::string cmd = std::string(FGC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("fgc_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("count serves repeated invocations from cache bit-identically") {
  TempDir tmp;
  const std::string base = "count --k 2 --m 5 --engine dp --cache-dir " + tmp.path.string();
  CliResult first = cli(base);
  CHECK(first.code == 0);
  CHECK(fs::exists(tmp.path / "count_k2_m5_dp_v1.json"));
  CliResult second = cli(base);
  CHECK(second.code == 0);
  CHECK(second.out == first.out);
  // the cached file holds exactly the payload that was printed
  std::ifstream in(tmp.path / "count_k2_m5_dp_v1.json");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes + "\n" == first.out);
}

TEST_CASE("dp and oracle emit identical bytes") {
  TempDir tmp;
  CliResult dp = cli("count --k 2 --m 6 --engine dp --no-cache");
  CliResult oracle = cli("count --k 2 --m 6 --engine oracle --no-cache");
  CliResult fourier = cli("count --k 2 --m 6 --engine fourier --no-cache");
  CHECK(dp.code == 0);
  CHECK(dp.out == oracle.out);
  CHECK(dp.out == fourier.out);
}

TEST_CASE("environment variable supplies the default cache directory") {
  TempDir tmp;
  const std::string cmd = "FGCENSUS_CACHE_DIR=" + tmp.path.string() + " " +
                          std::string(FGC_CLI_PATH) + " count --k 2 --m 4 --engine dp";
  std::array<char, 4096> buf{};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fread(buf.data(), 1, buf.size(), pipe) > 0) {
  }
  CHECK(WEXITSTATUS(pclose(pipe)) == 0);
  CHECK(fs::exists(tmp.path / "count_k2_m4_dp_v1.json"));
}

TEST_CASE("error classes map to exit codes and error json") {
  CliResult guard = cli("count --k 2 --m 99 --engine oracle --no-cache");
  CHECK(guard.code == 3);
  nlohmann::json gj = nlohmann::json::parse(guard.out);
  CHECK(gj["error"]["class"] == "guard");

  CliResult config = cli("predict --k 2 --m 4 --beta 0,0,0");
  CHECK(config.code == 2);
  CHECK(nlohmann::json::parse(config.out)["error"]["class"] == "config");

  CliResult usage = cli("count --m 4");  // missing --k
  CHECK(usage.code != 0);

  CliResult verdict = cli("identity-check --k 2 --order 6 --eps 0.3,0.7 --tol 1e-30");
  CHECK(verdict.code == 1);  // generic-point discrepancy above an impossible tolerance
  CHECK(nlohmann::json::parse(verdict.out)["pass"] == false);
}

TEST_CASE("predict beyond engine reach still reports the prediction") {
  CliResult r = cli("predict --k 2 --m 4000 --beta 0,0");
  CHECK(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["exact"].is_null());
  // q^4000 overflows a double, so the literal prediction degrades to null
  // while the log10 form stays finite
  CHECK(j["log10_prediction"].is_number());
  CHECK(j["log10_prediction"].get<double>() == doctest::Approx(4000 * std::log10(3.0)).epsilon(0.01));
  CHECK(j.contains("note"));

  // within double range both forms are present and consistent
  CliResult ok = cli("predict --k 2 --m 30 --beta 2,0");
  nlohmann::json j2 = nlohmann::json::parse(ok.out);
  CHECK(j2["prediction"].is_number());
  CHECK(std::pow(10.0, j2["log10_prediction"].get<double>()) ==
        doctest::Approx(j2["prediction"].get<double>()).epsilon(1e-9));
}

TEST_CASE("count with a radius omits far entries but keeps exact values") {
  CliResult full = cli("count --k 2 --m 8 --engine dp --no-cache");
  CliResult trunc = cli("count --k 2 --m 8 --engine dp --radius 2 --no-cache");
  REQUIRE(full.code == 0);
  REQUIRE(trunc.code == 0);
  nlohmann::json fj = nlohmann::json::parse(full.out);
  nlohmann::json tj = nlohmann::json::parse(trunc.out);
  CHECK(tj["entries"].size() < fj["entries"].size());
  for (const auto& e : tj["entries"]) {
    for (const auto& b : e[0]) CHECK(std::abs(b.get<long long>()) <= 2);
    bool found = false;
    for (const auto& fe : fj["entries"])
      if (fe[0] == e[0]) {
        CHECK(fe[1] == e[1]);
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("count output formats") {
  CliResult csv = cli("count --k 2 --m 2 --engine dp --no-cache --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("m,b1,b2,count\n", 0) == 0);
  CliResult text = cli("count --k 2 --m 2 --engine dp --no-cache --format text");
  CHECK(text.code == 0);
  CHECK(text.out.find("m=2") != std::string::npos);
}

TEST_CASE("experiment writes report files and exit code tracks verdicts") {
  TempDir tmp;
  CliResult r = cli("experiment progression --k 2 --l 2,1 --a 0,0 --m-max 10 --out-dir " +
                    tmp.path.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path / "progression_report.json"));
  CHECK(fs::exists(tmp.path / "progression_report.csv"));
  std::ifstream in(tmp.path / "progression_report.json");
  nlohmann::json j;
  in >> j;
  CHECK(j["all_pass"] == true);
}
