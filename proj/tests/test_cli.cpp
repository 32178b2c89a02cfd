#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"
#include "plasmonqd/errors.hpp"
#include "plasmonqd/model.hpp"

using namespace plasmonqd;
using namespace plasmonqd::cli;
namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "plasmonqd_test_cli";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run(const std::string& args, const std::string& log = "cli.log") {
    fs::create_directories(scratch);
    const std::string cmd = std::string("\"") + PLASMONQD_CLI_PATH + "\" " + args + " > \"" +
                            (scratch / log).string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> r;
        std::stringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) r.push_back(f);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_CASE("number parsing") {
    CHECK(parse_number("pi/4") == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(parse_number("2pi") == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(parse_number("-pi") == -pi);
    CHECK(parse_number("0.5*pi") == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(parse_number(" 1e-3 ") == 1e-3);
    CHECK(std::isinf(parse_number("inf")));
    CHECK_THROWS_AS(parse_number("abc"), InvalidParams);
    CHECK_THROWS_AS(parse_number("1.0x"), InvalidParams);
    CHECK_THROWS_AS(parse_number("pi*4"), InvalidParams);
    const auto v = parse_list("0, pi, 3pi/2");
    REQUIRE(v.size() == 3);
    CHECK(v[2] == doctest::Approx(1.5 * pi));
}

TEST_CASE("config keys are checked") {
    CHECK_THROWS_AS(parse_config("[spectrum]\nkdd = 1\n"), InvalidParams);
    CHECK_THROWS_AS(parse_config("[nonsense]\na = 1\n"), InvalidParams);
    CHECK_THROWS_AS(parse_config("[spectrum]\npoints = 2.5\n"), InvalidParams);
    CHECK_THROWS_AS(parse_config("[run]\nformat = xml\n"), InvalidParams);
    const auto c = parse_config("[run]\nexperiment = spectrum\n[spectrum]\nkd = pi/4, pi\ngamma_nr = 0.1\n");
    CHECK_FALSE(c.spectrum.preset);
    REQUIRE(c.spectrum.kd.size() == 2);
    CHECK(c.spectrum.gamma_nr[0] == 0.1);
    auto bad = RunConfig{};
    bad.storage.P = {0.5};
    CHECK_THROWS_AS(bad.validate(), InvalidParams);
    bad = RunConfig{};
    bad.spectrum.delta_min = 4.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);
}

TEST_CASE("effective config round-trips") {
    RunConfig c;
    c.experiment = "phase";
    c.phase.gamma_prime = {0.0, 0.1 / 3.0};
    c.spectrum.preset = false;
    c.spectrum.kd = {pi / 7};
    c.storage.P = {std::numeric_limits<double>::infinity(), 7.0};
    const auto text = to_ini(c);
    const auto back = parse_config(text);
    CHECK(to_ini(back) == text);
    CHECK(back.phase.gamma_prime[1] == c.phase.gamma_prime[1]);
    CHECK(back.spectrum.kd[0] == c.spectrum.kd[0]);
}

TEST_CASE("cells keep every bit") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, i % 30 - 15);
        CHECK(std::stod(format_cell(v, false)) == v);
    }
    CHECK(format_cell(1.0, true) == "true");
    CHECK(format_cell(std::nan(""), false) == "nan");
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("unfinished output is removed") {
    const fs::path d = scratch / "unfinished";
    fs::remove_all(d);
    {
        OutputDir out(d, Format::csv);
        out.write_table("x", Table{{{"a"}}, {{1.0}}});
        CHECK(fs::exists(d / "x.csv"));
    }
    CHECK_FALSE(fs::exists(d / "x.csv"));
    {
        OutputDir out(d, Format::json);
        out.write_table("y", Table{{{"a"}, {"b", true}}, {{std::nan(""), 1.0}}});
        out.finish({{"tool", "test"}});
    }
    const auto m = manifest(d);
    CHECK(m["files"][0]["path"] == "y.json");
    CHECK(m["files"][0]["sha256"] == sha256_hex(slurp(d / "y.json")));
    const auto doc = nlohmann::json::parse(slurp(d / "y.json"));
    CHECK(doc["rows"][0][0].is_null());
    CHECK(doc["rows"][0][1] == true);
}

TEST_CASE("lossless spectrum, determinism and manifest") {
    const fs::path a = scratch / "spec_a", b = scratch / "spec_b";
    REQUIRE(run("spectrum --kd pi/4,1.0 --gamma0 0 --gamma-nr 0 --points 301 --out " + a.string()) == 0);
    REQUIRE(run("--threads 3 --out " + b.string() + " spectrum --kd pi/4,1.0 --gamma0 0 --gamma-nr 0 --points 301") == 0);
    const auto m = manifest(a);
    REQUIRE(m["files"].size() == 2);
    for (const auto& f : m["files"]) {
        const auto p = f["path"].get<std::string>();
        const auto bytes = slurp(a / p);
        CHECK(f["sha256"] == sha256_hex(bytes));
        CHECK(bytes == slurp(b / p));
        const auto rows = csv(a / p);
        CHECK(rows[0] == std::vector<std::string>{"delta", "T", "R", "Loss"});
        CHECK(rows.size() == 302);
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][3])) < 1e-10);
    }
}

TEST_CASE("config echo reruns to the same bytes") {
    const fs::path a = scratch / "echo_a", b = scratch / "echo_b";
    REQUIRE(run("phase --delta-points 41 --gamma-prime 0,0.05 --out " + a.string()) == 0);
    auto ini = manifest(a)["config_ini"].get<std::string>();
    const fs::path cfg = scratch / "echo.ini";
    std::ofstream(cfg) << ini;
    REQUIRE(run("--config " + cfg.string() + " --out " + b.string()) == 0);
    CHECK(slurp(a / "phase.csv") == slurp(b / "phase.csv"));
    const auto rows = csv(a / "phase.csv");
    CHECK(rows[0] == std::vector<std::string>{"delta", "gamma_prime", "theta"});
    CHECK(std::stod(rows[21][2]) == doctest::Approx(pi));  // gamma' = 0, delta = 0
    CHECK(std::abs(std::stod(rows[41 + 21][2])) < 1e-9);
}

TEST_CASE("exit codes") {
    const fs::path cfg = scratch / "bad.ini";
    std::ofstream(cfg) << "[spectrum]\nnot_a_key = 3\n";
    CHECK(run("--config " + cfg.string() + " spectrum --out " + (scratch / "bad").string()) == 1);
    CHECK(run("spectrum --points 1 --out " + (scratch / "bad").string()) == 1);
    CHECK(run("frobnicate") == 1);

    // dark point on the grid: numerical failure, nothing left behind
    const fs::path dark = scratch / "dark";
    fs::remove_all(dark);
    CHECK(run("spectrum --kd pi/4,2pi --gamma0 0 --gamma-nr 0 --points 11 --out " + dark.string(), "dark.log") == 3);
    CHECK(slurp(scratch / "dark.log").find("SingularSystem") != std::string::npos);
    std::size_t left = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dark)) ++left;
    CHECK(left == 0);

    CHECK(run("oracle-verify --coarse --kd pi/4 --delta 0 --loss 0 --out " + (scratch / "coarse").string(),
              "coarse.log") == 1);
    CHECK(slurp(scratch / "coarse.log").find("GridTooCoarse") != std::string::npos);
}

TEST_CASE("oracle report") {
    const fs::path d = scratch / "oracle";
    REQUIRE(run("oracle-verify --kd pi/4 --delta -0.5 --loss 0 --out " + d.string()) == 0);
    const auto rep = nlohmann::json::parse(slurp(d / "oracle_report.json"));
    CHECK(rep["pass"] == true);
    CHECK(rep["max_err_t"].get<double>() < 1e-3);
    CHECK(rep["points"][0]["flux_oracle"].get<double>() < 1e-3);
    // a tolerance nobody can meet is a contract failure, report still written
    CHECK(run("oracle-verify --kd pi/4 --delta -0.5 --loss 0 --tolerance 1e-12 --out " + d.string()) == 2);
    CHECK(nlohmann::json::parse(slurp(d / "oracle_report.json"))["pass"] == false);
}

TEST_CASE("lossless storage run") {
    const fs::path d = scratch / "storage";
    REQUIRE(run("storage --P inf --no-odd-twin --out " + d.string()) == 0);
    const auto rows = csv(d / "storage.csv");
    CHECK(rows[0] == std::vector<std::string>{"P", "efficiency", "bound"});
    CHECK(std::stod(rows[1][1]) >= 0.999);
}
