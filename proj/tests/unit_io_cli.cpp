#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "spectralset/io.hpp"

using namespace spectralset;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "spectralset_cli_tests";
  fs::create_directories(dir);
  return dir;
}

/// Runs the CLI under test (path from SPECTRALSET_CLI) and captures stdout.
int run_cli(const std::string& args, std::string* out = nullptr) {
  const char* bin = std::getenv("SPECTRALSET_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "SPECTRALSET_CLI must point at the binary");
  const std::string cmd = "\"" + std::string(bin) + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) {
    text.append(buf, got);
  }
  const int status = pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_matrix(const std::string& name, const Matrix& m) {
  const auto path = temp_dir() / name;
  write_matrix_file(path.string(), m);
  return path.string();
}

Matrix nilpotent2() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 2.0;
  return m;
}

}  // namespace

TEST_CASE("matrix json round trip is bit exact") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  Matrix m(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, j) = Complex(g(rng) * std::pow(10, int(rng() % 7) - 3), g(rng));
    }
  }
  const auto path = temp_dir() / "roundtrip.json";
  write_matrix_file(path.string(), m);
  const Matrix back = read_matrix_file(path.string()).matrix();
  REQUIRE(back.rows() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(back(i, j).real() == m(i, j).real());
      CHECK(back(i, j).imag() == m(i, j).imag());
    }
  }
}

TEST_CASE("matrix json parse errors") {
  CHECK_THROWS_AS((void)parse_matrix_json("{", "t"), const InputError&);
  CHECK_THROWS_AS((void)parse_matrix_json("[]", "t"), const InputError&);
  CHECK_THROWS_AS((void)parse_matrix_json(R"({"re":[[0]],"im":[[0]]})", "t"),
                  const InputError&);
  CHECK_THROWS_AS((void)parse_matrix_json(R"({"n":0,"re":[],"im":[]})", "t"),
                  const InputError&);
  CHECK_THROWS_AS(
      (void)parse_matrix_json(R"({"n":2,"re":[[0,1]],"im":[[0,0],[0,0]]})", "t"),
      const InputError&);
  CHECK_THROWS_AS(
      (void)parse_matrix_json(R"({"n":1,"re":[[1e999]],"im":[[0]]})", "t"),
      const InputError&);
  CHECK_THROWS_AS((void)read_matrix_file("/nonexistent_zzz/m.json"),
                  const InputError&);
}

TEST_CASE("atomic writes replace whole files") {
  const auto path = temp_dir() / "atomic.txt";
  atomic_write_text(path.string(), "first\n");
  atomic_write_text(path.string(), "second\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second\n");
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
}

TEST_CASE("cli bounds pipeline on the nilpotent anchor") {
  const std::string path = write_matrix("nilpotent.json", nilpotent2());
  std::string out;
  const int rc = run_cli("bounds --matrix \"" + path + "\"", &out);
  CHECK(rc == 0);
  const auto report = nlohmann::json::parse(out);
  CHECK(report.at("const_thm22").get<double>() ==
        doctest::Approx(2.414213562373095).epsilon(1e-6));
  CHECK(std::abs(report.at("gamma1").get<double>()) < 1e-8);
  CHECK(report.at("meta").at("omega").get<std::string>() == "W(A)");

  // Determinism: byte-identical stdout for identical config.
  std::string again;
  CHECK(run_cli("bounds --matrix \"" + path + "\"", &again) == 0);
  CHECK(out == again);
}

TEST_CASE("cli exit codes") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  const std::string normal_path = write_matrix("diag.json", d);
  const std::string nil_path = write_matrix("nilpotent2.json", nilpotent2());

  // Flat numerical-range boundary -> 3.
  CHECK(run_cli("range --matrix \"" + normal_path + "\" --out " +
                (temp_dir() / "flat").string()) == 3);
  // Missing file -> 2.
  CHECK(run_cli("bounds --matrix /nonexistent_zzz/m.json") == 2);
  // Bad grid (not a power of two) -> 2.
  CHECK(run_cli("bounds --matrix \"" + nil_path + "\" --grid 100") == 2);
  // Bad q -> 2.
  CHECK(run_cli("bounds --matrix \"" + nil_path + "\" --q 1.5") == 2);
  // Bad omega string -> 2.
  CHECK(run_cli("bounds --matrix \"" + nil_path + "\" --omega egg") == 2);
  // Unknown flag -> 2.
  CHECK(run_cli("bounds --matrix \"" + nil_path + "\" --frobnicate") == 2);
  // Spectrum outside the domain -> pipeline stage failure 4.
  Matrix big = Matrix::Zero(2, 2);
  big(0, 0) = 9;
  const std::string big_path = write_matrix("big.json", big);
  CHECK(run_cli("bounds --matrix \"" + big_path + "\" --omega disk:0,0,1") == 4);
  // Help -> 0.
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli range emits boundary polylines") {
  const std::string path = write_matrix("nilpotent3.json", nilpotent2());
  const std::string base = (temp_dir() / "rng").string();
  std::string out;
  const int rc =
      run_cli("range --matrix \"" + path + "\" --q 0.6 --out " + base, &out);
  CHECK(rc == 0);
  const auto summary = nlohmann::json::parse(out);
  CHECK(summary.at("perimeter").get<double>() ==
        doctest::Approx(2 * 3.14159265358979).epsilon(1e-6));
  CHECK(summary.at("omega_q_perimeter").get<double>() ==
        doctest::Approx(6 * 3.14159265358979).epsilon(1e-5));
  REQUIRE(fs::exists(base + "_w.csv"));
  REQUIRE(fs::exists(base + "_omega_q.csv"));
  std::ifstream in(base + "_w.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "theta,re,im,weight,rho");
}

TEST_CASE("cli conjecture trial writes findings and a summary") {
  const std::string path = write_matrix("nilpotent4.json", nilpotent2());
  const std::string findings = (temp_dir() / "f.jsonl").string();
  fs::remove(findings);
  std::string out;
  // Degree 1 keeps the 2/3 anchor: higher degrees admit boundary-flattening
  // coefficient pairings whose honest optimum exceeds it.
  const int rc = run_cli("conjecture --matrix \"" + path +
                             "\" --q 0.6 --degree 1 --restarts 4 --grid 256 "
                             "--fourier-k 32 --out \"" +
                             findings + "\"",
                         &out);
  CHECK(rc == 0);
  const auto summary = nlohmann::json::parse(out);
  CHECK(summary.at("total_violations").get<int>() == 0);
  REQUIRE(summary.at("per_q").size() == 1);
  CHECK(summary.at("per_q")[0].at("max_ratio").get<double>() ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-4));
  CHECK(summary.at("per_q")[0].at("bound").get<double>() == 1.0);

  std::ifstream in(findings);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  const auto rec = nlohmann::json::parse(line);
  CHECK_FALSE(rec.at("violation").get<bool>());
}

TEST_CASE("cli verify honors criteria subsets and coarse grids") {
  std::string out;
  // The scalar anchor is cheap and passes at defaults.
  CHECK(run_cli("verify --criteria 12", &out) == 0);
  CHECK(out.find("PASS") != std::string::npos);
  CHECK(out.find("scalar-anchor") != std::string::npos);

  // Documented behavior: a deliberately coarse grid breaks the quadrature
  // criteria (the partition identity cannot reach 1e-8 with 16 nodes).
  out.clear();
  CHECK(run_cli("verify --grid 16 --fourier-k 7 --criteria 2", &out) == 1);
  CHECK(out.find("FAIL") != std::string::npos);
}
