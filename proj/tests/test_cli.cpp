// End-to-end checks of the command-line tool: every invocation here spawns
// the real binary (path injected by the build as ENSO_CLI_PATH) inside a
// scratch directory and inspects exit codes, stdout and the files written.
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include "enso/io.hpp"

#ifndef ENSO_CLI_PATH
#error "ENSO_CLI_PATH must point at the built CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string& work_dir() {
  static const std::string dir = [] {
    const fs::path p = fs::temp_directory_path() / "enso_cli_tests";
    fs::create_directories(p);
    return p.string();
  }();
  return dir;
}

std::string path_in(const std::string& name) { return work_dir() + "/" + name; }

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out_file = path_in("stdout." + tag);
  const std::string err_file = path_in("stderr." + tag);
  const std::string cmd = "cd '" + work_dir() + "' && '" + ENSO_CLI_PATH +
                          "' " + args + " > '" + out_file + "' 2> '" +
                          err_file + "'";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = enso::read_text_file(out_file);
  r.err = enso::read_text_file(err_file);
  return r;
}

json load_json(const std::string& name) {
  return json::parse(enso::read_text_file(path_in(name)));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and help exit cleanly; junk input does not") {
  const CliResult version = run_cli("--version");
  CHECK(version.code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);

  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("").code == 2);            // a subcommand is required
  CHECK(run_cli("frobnicate").code == 2);  // unknown subcommand
}

TEST_CASE("simulate writes a parseable trajectory with its manifest") {
  const CliResult r = run_cli(
      "simulate --preset fig4 --tspan 0 50 --sample-dt 0.05 --out sim1.csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("wrote sim1.csv") != std::string::npos);

  const enso::CsvTable table = enso::read_csv(path_in("sim1.csv"));
  REQUIRE(table.columns ==
          std::vector<std::string>({"t", "x", "y", "z"}));
  CHECK(table.rows.size() == 1001);  // 0..50 in steps of 0.05
  CHECK(table.rows.front()[0] == 0.0);
  CHECK(table.rows.back()[0] == doctest::Approx(50.0).epsilon(1e-12));
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(table.rows[i][0] > table.rows[i - 1][0]);
  }

  const json m = load_json("sim1.csv.manifest.json");
  CHECK(m["command"] == "simulate");
  CHECK(m["preset"] == "fig4");
  CHECK(m["params"]["delta"] == doctest::Approx(0.1));
  CHECK(m["results"]["status"] == "success");
  CHECK(m["results"]["samples"] == 1001);
  CHECK(m["version"] == "0.1.0");
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string args =
      "simulate --preset fig4 --tspan 0 20 --sample-dt 0.1 --out det";
  REQUIRE(run_cli(args + "_a.csv").code == 0);
  REQUIRE(run_cli(args + "_b.csv").code == 0);
  CHECK(enso::read_text_file(path_in("det_a.csv")) ==
        enso::read_text_file(path_in("det_b.csv")));
  // Manifests differ only in the output name they record.
  json ma = load_json("det_a.csv.manifest.json");
  json mb = load_json("det_b.csv.manifest.json");
  ma.erase("outputs");
  mb.erase("outputs");
  CHECK(ma == mb);
}

TEST_CASE("bad parameter sources exit with code 2") {
  CHECK(run_cli("simulate --preset fig4 --params delta=0.1").code == 2);
  CHECK(run_cli("simulate --preset no-such-preset").code == 2);
  CHECK(run_cli("simulate --params c=-1").code == 2);
  CHECK(run_cli("simulate --params delta=abc").code == 2);
  CHECK(run_cli("manifold --sheet bogus").code == 2);
  CHECK(run_cli("signature missing_file.csv").code == 2);
}

TEST_CASE("folds covers both the folded and the monostable regime") {
  REQUIRE(run_cli("folds --c 1.0 --out folds_c1.json").code == 0);
  const json flat = load_json("folds_c1.json");
  CHECK(flat["has_folds"] == false);
  CHECK(flat["curves"].empty());
  CHECK(flat["note"].get<std::string>().find("no folds") != std::string::npos);

  REQUIRE(run_cli("folds --branch-z 0 --out folds_fig4.json").code == 0);
  const json j = load_json("folds_fig4.json");
  CHECK(j["has_folds"] == true);
  CHECK(j["eta"].get<double>() ==
        doctest::Approx(1.2794894885143063).epsilon(1e-12));
  CHECK(j["eta_bisection"].get<double>() ==
        doctest::Approx(1.2794894885143063).epsilon(1e-9));
  CHECK(j["defining_residual"].get<double>() < 1e-12);
  REQUIRE(j["branch_roots"]["roots"].size() == 3);
  CHECK(j["branch_roots"]["roots"][0].get<double>() ==
        doctest::Approx(-1.2794894885143063).epsilon(1e-7));
  CHECK(std::abs(j["branch_roots"]["roots"][1].get<double>()) < 1e-8);
  CHECK(j["branch_roots"]["roots"][2].get<double>() ==
        doctest::Approx(1.2794894885143063).epsilon(1e-7));
  CHECK(j["branch_roots"]["ordering_case"] == 2);
}

TEST_CASE("singularities classifies the default geometry") {
  REQUIRE(run_cli("singularities --out sing.json").code == 0);
  const json j = load_json("sing.json");
  REQUIRE(j["folded_singularities"].size() == 4);
  CHECK(j["folded_singularities"][0]["x"].get<double>() ==
        doctest::Approx(-3.11254187011155).epsilon(1e-9));
  CHECK(j["folded_singularities"][0]["kind"] == "node");
  REQUIRE(j["reduced_equilibria"].size() == 2);
  CHECK(j["reduced_equilibria"][0]["kind"] == "saddle");

  CHECK(run_cli("singularities --params c=0.9").code == 2);
}

TEST_CASE("equilibria lists the three rest states with spectra") {
  REQUIRE(run_cli("equilibria --preset fig4 --out eq.json").code == 0);
  const json j = load_json("eq.json");
  CHECK(j["delta"] == doctest::Approx(0.1));
  REQUIRE(j["equilibria"].size() == 3);
  int trivial_count = 0;
  for (const auto& e : j["equilibria"]) {
    if (e["trivial"].get<bool>()) ++trivial_count;
    CHECK(e["eig_fast"].size() == 3);
    CHECK(e["char_residual"].get<double>() < 1e-6);
  }
  CHECK(trivial_count == 1);
}

TEST_CASE("scan-fsn2 pins the collision parameter") {
  const CliResult r =
      run_cli("scan-fsn2 --a-lo 2.7 --a-hi 2.9 --n 41 --out scan.csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("a_star = ") != std::string::npos);

  const std::string csv = enso::read_text_file(path_in("scan.csv"));
  CHECK(csv.find("a,fn_x,fn_z,eq_x,eq_z,side,re1,im1,re2,im2,re3,im3,flags") !=
        std::string::npos);

  const json m = load_json("scan.csv.manifest.json");
  CHECK(m["results"]["a_star"].get<double>() ==
        doctest::Approx(2.8183925550816591).epsilon(1e-6));
  CHECK(m["results"]["a_star_closed_form"].get<double>() ==
        doctest::Approx(2.8183925550816591).epsilon(1e-10));
  CHECK(m["results"]["collision_residual"].get<double>() < 1e-8);
}

TEST_CASE("hopf locates the crossing and the eigenvalue scaling") {
  REQUIRE(run_cli("hopf --delta 0.1 --a-lo 2.7 --a-hi 2.9 --n 41 "
                  "--im-deltas 0.2,0.1,0.05 --out hopf.json")
              .code == 0);
  const json j = load_json("hopf.json");
  REQUIRE(j["found"] == true);
  CHECK(j["a_H"].get<double>() ==
        doctest::Approx(2.8272533716195022).epsilon(1e-6));
  CHECK(j["re_residual"].get<double>() < 1e-6);
  REQUIRE(j.contains("im_scaling"));
  CHECK(j["im_scaling"]["im_values"].size() == 3);
  const double slope = j["im_scaling"]["slope"].get<double>();
  CHECK(slope < -0.25);
  CHECK(slope > -0.75);
}

TEST_CASE("signature digests a simulated burst train") {
  // The deep troughs in this regime arrive roughly 140 time units apart, so
  // the span must cover several of them for interval statistics to exist.
  REQUIRE(run_cli("simulate --preset fig2b --tspan 0 600 --sample-dt 0.02 "
                  "--out sim2b.csv")
              .code == 0);
  REQUIRE(run_cli("signature sim2b.csv --t0-days 104.98186676846726 "
                  "--out sig2b.json --peaks-out peaks2b.csv")
              .code == 0);
  const json j = load_json("sig2b.json");
  CHECK(j["signature"]["peak_count"].get<int>() > 0);
  CHECK_FALSE(j["signature"]["text"].get<std::string>().empty());
  CHECK(j["burst"]["count"].get<int>() >= 2);
  CHECK(j["burst"]["mean_interval_years"].get<double>() > 0.0);

  const enso::CsvTable peaks = enso::read_csv(path_in("peaks2b.csv"));
  CHECK(peaks.columns ==
        std::vector<std::string>({"index", "t", "value", "prominence",
                                  "large"}));
  CHECK(peaks.rows.size() == j["signature"]["peak_count"].get<std::size_t>());

  // Transient fraction outside [0, 1) is a usage error.
  CHECK(run_cli("signature sim2b.csv --transient-frac 1.5").code == 2);
}

TEST_CASE("signature rejects a CSV without trajectory columns") {
  enso::write_text_file(path_in("junk.csv"), "a,b\n1,2\n3,4\n5,6\n");
  CHECK(run_cli("signature junk.csv").code == 2);
}

TEST_CASE("singular-cycle writes the labeled skeleton") {
  const CliResult r =
      run_cli("singular-cycle --z-dep 0.5 --out cycle.csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("closure gap") != std::string::npos);

  const std::string csv = enso::read_text_file(path_in("cycle.csv"));
  CHECK(csv.find("segment,kind,x,y,z") != std::string::npos);
  CHECK(csv.find("S1,reduced-Ms,") != std::string::npos);
  CHECK(csv.find("S3,reduced-M0,") != std::string::npos);
  CHECK(csv.find("F2,layer,") != std::string::npos);

  const json m = load_json("cycle.csv.manifest.json");
  CHECK(m["results"]["z_dep"] == doctest::Approx(0.5));
  CHECK(m["results"]["f2_target"].get<double>() < -6.0);
  CHECK(m["results"]["closure_gap"].get<double>() < 1e-4);
  REQUIRE(m["results"]["segments"].size() == 5);
  CHECK(m["results"]["segments"][0]["label"] == "S1");
  CHECK(m["results"]["segments"][4]["label"] == "F2");

  // Unreachable departure heights surface as numerical failures (exit 3).
  CHECK(run_cli("singular-cycle --z-dep 0.2").code == 3);
}

TEST_CASE("compare measures a real orbit against the skeleton") {
  REQUIRE(run_cli("simulate --preset fig4 --tspan 0 120 --transient 60 "
                  "--sample-dt 0.05 --out orbit.csv")
              .code == 0);
  REQUIRE(run_cli("compare --orbit orbit.csv --out cmp.json").code == 0);
  const json j = load_json("cmp.json");
  REQUIRE(j["segments"].size() == 5);
  const double overall = j["overall_max"].get<double>();
  CHECK(overall > 0.0);
  CHECK(overall < 3.0);
  for (const auto& s : j["segments"]) {
    CHECK(s["max_distance"].get<double>() <= overall + 1e-15);
  }
  CHECK(j["cycle"]["z_dep"].get<double>() > 0.3);
  CHECK(j["cycle"]["z_dep"].get<double>() < 1.9);
}

TEST_CASE("nondim reproduces the canonical scales") {
  REQUIRE(run_cli("nondim --out nd.json").code == 0);
  const json j = load_json("nd.json");
  CHECK(j["params"]["delta"].get<double>() ==
        doctest::Approx(0.26245466692116816).epsilon(1e-12));
  CHECK(j["scales"]["t0_days"].get<double>() ==
        doctest::Approx(104.98186676846726).epsilon(1e-12));
  CHECK(j["physical"]["H"] == doctest::Approx(100.0));

  CHECK(run_cli("nondim --preset otherpreset").code == 2);
}

TEST_CASE("manifold rasterizes stability codes over the grid") {
  REQUIRE(run_cli("manifold --nx 21 --nz 21 --out grid.csv").code == 0);
  const enso::CsvTable grid = enso::read_csv(path_in("grid.csv"));
  REQUIRE(grid.columns == std::vector<std::string>({"x", "z", "stability"}));
  REQUIRE(grid.rows.size() == 441);
  bool saw_attracting = false, saw_repelling = false;
  for (const auto& row : grid.rows) {
    const double code = row[2];
    CHECK((code == -1.0 || code == 0.0 || code == 1.0));
    if (code == -1.0) saw_attracting = true;
    if (code == 1.0) saw_repelling = true;
  }
  CHECK(saw_attracting);
  CHECK(saw_repelling);

  REQUIRE(run_cli("manifold --sheet m0 --nx 5 --nz 5 --out grid_m0.csv")
              .code == 0);
  CHECK(enso::read_csv(path_in("grid_m0.csv")).columns ==
        std::vector<std::string>({"y", "z", "stability"}));
}

}  // TEST_SUITE
