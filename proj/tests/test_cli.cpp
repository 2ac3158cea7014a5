#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("AUTORES_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::current_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("preset fig2a writes the pinned reduced CSV schema") {
  auto dir = fresh_dir("cli_fig2a");
  REQUIRE(run("--out-dir " + dir.string() + " preset fig2a") == 0);
  const std::string csv = slurp(dir / "fig2a.csv");
  CHECK(first_line(csv) == "tau,rho,psi");
  // 0..50 in 0.05 steps
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1002);

  json manifest = json::parse(slurp(dir / "fig2a_manifest.json"));
  CHECK(manifest["command"] == "preset");
  CHECK(manifest["params"]["rho0"] == 0.27);
  CHECK(manifest["params"]["psi0"] == 0.01);
  for (const auto& out : manifest["outputs"])
    CHECK(fs::exists(dir / out.get<std::string>()));
}

TEST_CASE("oscillator simulate writes the pinned CSV schema") {
  auto dir = fresh_dir("cli_osc");
  REQUIRE(run("--out-dir " + dir.string() +
              " simulate --system oscillator --eps 0.02 --alpha 0.0027 "
              "--gamma 0.1666666 --f0 4 --h0 0 --u0 0.1 --v0 0 --t1 50") ==
          0);
  CHECK(first_line(slurp(dir / "sim.csv")) == "t,u,v,E,Delta");
}

TEST_CASE("manifest replay reproduces byte-identical outputs") {
  auto dir = fresh_dir("cli_replay");
  REQUIRE(run("--out-dir " + dir.string() + " preset fig2b") == 0);
  const std::string before = slurp(dir / "fig2b.csv");

  json manifest = json::parse(slurp(dir / "fig2b_manifest.json"));
  std::string args;
  for (const auto& tok : manifest["argv"])
    args += tok.get<std::string>() + " ";
  fs::remove(dir / "fig2b.csv");
  REQUIRE(run(args) == 0);
  CHECK(slurp(dir / "fig2b.csv") == before);
}

TEST_CASE("basin output is independent of the worker count") {
  auto dir1 = fresh_dir("cli_basin1");
  auto dir4 = fresh_dir("cli_basin4");
  const std::string grid =
      " basin --lambda 1 --f 1 --m 4 --rho-min 0.1 --rho-max 1.5 --rho-n 4"
      " --psi-min -1 --psi-max 1 --psi-n 3 --horizon 30";
  REQUIRE(run("--out-dir " + dir1.string() + " --workers 1" + grid) == 0);
  REQUIRE(run("--out-dir " + dir4.string() + " --workers 4" + grid) == 0);
  CHECK(slurp(dir1 / "basin.csv") == slurp(dir4 / "basin.csv"));
  CHECK(first_line(slurp(dir1 / "basin.csv")) ==
        "index,rho0,psi0,status,rho_end,psi_end");
}

TEST_CASE("degenerate pumping exits with the model-error code") {
  auto dir = fresh_dir("cli_degen");
  // m = m_* = 0.5
  CHECK(run("--out-dir " + dir.string() +
            " asymptotics --lambda 1 --f 1 --m 0.5 --branch 1 --K 2") == 2);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("simulate --system bogus") == 1);
  CHECK(run("no-such-command") == 1);
}

TEST_CASE("classify writes verdicts for every branch") {
  auto dir = fresh_dir("cli_classify");
  REQUIRE(run("--out-dir " + dir.string() +
              " classify --lambda 1 --f 1 --m 4") == 0);
  json out = json::parse(slurp(dir / "classify.json"));
  REQUIRE(out["verdicts"].size() == 4);
  CHECK(out["verdicts"][0]["regime"] == "stable");
  CHECK(out["verdicts"][2]["regime"] == "unstable");
}

TEST_CASE("config file supplies flags") {
  auto dir = fresh_dir("cli_config");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"lambda": 1.0, "f": 1.0, "m": 4.0, "branch": 1, "K": 4})";
  }
  REQUIRE(run("--out-dir " + dir.string() + " asymptotics --config " +
              (dir / "cfg.json").string()) == 0);
  json coeffs = json::parse(slurp(dir / "asym_coefficients.json"));
  CHECK(coeffs["rho_coeffs"][2] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("lyapunov reports non-applicable for an uncovered branch") {
  auto dir = fresh_dir("cli_lyap_na");
  REQUIRE(run("--out-dir " + dir.string() +
              " lyapunov --lambda 1 --f 1 --m 0 --branch 1 --n 10") == 0);
  json out = json::parse(slurp(dir / "lyapunov.json"));
  CHECK(out["applicable"] == false);
}
