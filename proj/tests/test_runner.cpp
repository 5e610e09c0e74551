#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exwave/nlw.hpp"
#include "exwave/runner.hpp"

using namespace exwave::runner;
namespace fs = std::filesystem;

namespace {

const Table& table(const RunResult& r, const std::string& name) {
    for (const auto& t : r.tables)
        if (t.name == name) return t;
    throw std::runtime_error("missing table " + name);
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("exwave_runner_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
}

}  // namespace

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("csv formatting uses 17 significant digits") {
    Table t{"x", {"a", "b", "c"}, {}};
    t.add({1LL, 0.1, std::string("s")});
    CHECK(t.to_csv() == "a,b,c\n1,0.10000000000000001,s\n");
    CHECK_THROWS(t.add({1LL}));
}

TEST_CASE("selftest passes and records its defaults") {
    const RunResult r = execute("selftest", R"({"grid": {"L": 8, "n": 256}})", std::nullopt);
    CHECK(r.passed);
    const Table& t = table(r, "selftest");
    CHECK(t.rows.size() == 20);
    for (const auto& row : t.rows) {
        CHECK(std::get<double>(row[1]) <= 1e-12);
        CHECK(std::get<double>(row[2]) <= 1e-12);
    }
    const auto m = nlohmann::json::parse(r.manifest);
    CHECK(m["config"]["selftest"]["fields"] == 20);
    CHECK(m["config"]["selftest"]["seed"] == 1);
    CHECK(m["config"]["threads"] == 1);
    CHECK(m["files"][0]["name"] == "selftest.csv");
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(execute("selftest", "{", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("selftest", "[]", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("selftest", R"({"bogus": 1})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("selftest", R"({"grid": {"L": 8, "m": 2}})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("selftest", R"({"grid": {"L": "eight"}})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("selftest", R"({"grid": {"n": 100}})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("selftest", R"({"subcommand": "solve"})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("frobnicate", "{}", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("solve", R"({"data": {"profile": "square"}})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("solve", R"({"data": {"profile": "exp", "width": 2}})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("ftm", R"({"ftm": {"s": 0.5}})", std::nullopt), ConfigError);
    CHECK_THROWS_AS(execute("strichartz", R"({"strichartz": {"pairs": [[2]]}})", std::nullopt), ConfigError);
}

TEST_CASE("truncation violations are reported before running") {
    CHECK_THROWS_AS(execute("solve", R"({"grid": {"L": 8, "n": 256}, "solver": {"T": 10}})", std::nullopt),
                    exwave::TruncationError);
}

TEST_CASE("run: exit codes and no partial output") {
    const fs::path dir = scratch_dir("exit");
    std::ostringstream out, err;
    RunOptions o{"selftest", write_file(dir, "bad.json", "{\"grid\": "), dir / "out_bad", std::nullopt};
    CHECK(run(o, out, err) == kExitConfig);
    CHECK_FALSE(fs::exists(dir / "out_bad"));

    o = {"solve", write_file(dir, "far.json", R"({"grid": {"L": 8, "n": 256}, "solver": {"T": 10}})"),
         dir / "out_far", std::nullopt};
    CHECK(run(o, out, err) == kExitTruncation);
    CHECK_FALSE(fs::exists(dir / "out_far"));

    o = {"selftest", dir / "missing.json", dir / "out_missing", std::nullopt};
    CHECK(run(o, out, err) == kExitConfig);

    o = {"selftest", write_file(dir, "ok.json", R"({"grid": {"L": 8, "n": 256}})"), dir / "out_ok", std::nullopt};
    CHECK(run(o, out, err) == kExitOk);
    CHECK(fs::exists(dir / "out_ok" / "selftest.csv"));
    CHECK(fs::exists(dir / "out_ok" / "manifest.json"));
}

TEST_CASE("solve writes an energy trace") {
    const RunResult r = execute(
        "solve", R"({"grid": {"L": 16, "n": 1024}, "solver": {"T": 1, "dt": 0.01, "sample_every": 10}})", std::nullopt);
    const Table& e = table(r, "energy");
    CHECK(e.columns == std::vector<std::string>{"t", "energy", "relative_drift"});
    CHECK(e.rows.size() == 11);
    for (const auto& row : e.rows) CHECK(std::abs(std::get<double>(row[2])) <= 1e-4);
    CHECK(table(r, "final_state").rows.size() == 1023);
}

TEST_CASE("dispersive columns") {
    const RunResult r = execute(
        "dispersive", R"({"grid": {"L": 64, "n": 4096}, "dispersive": {"N_exponents": [1, 2], "t": [1, 2, 4, 8]}})",
        std::nullopt);
    const Table& d = table(r, "dispersive");
    CHECK(d.columns == std::vector<std::string>{"N", "t", "sup_norm", "fitted_slope"});
    CHECK(d.rows.size() == 8);
    CHECK(table(r, "dispersive_fit").rows.size() == 2);
}

TEST_CASE("identical configs give identical bytes, independent of thread count") {
    const std::string cfg =
        R"({"grid": {"L": 32, "n": 1024}, "strichartz": {"T": 8, "dt_sample": [0.25, 0.125], "pairs": [[2, 6], [4, 4], ["inf", 2]]}})";
    const RunResult a = execute("strichartz", cfg, 1);
    const RunResult b = execute("strichartz", cfg, 1);
    const RunResult c = execute("strichartz", cfg, 3);
    CHECK(table(a, "strichartz").to_csv() == table(b, "strichartz").to_csv());
    CHECK(table(a, "strichartz").to_csv() == table(c, "strichartz").to_csv());
    CHECK(nlohmann::json::parse(a.manifest)["content_hash"] == nlohmann::json::parse(c.manifest)["content_hash"]);
    CHECK(nlohmann::json::parse(a.manifest)["config"]["strichartz"]["pairs"][2][0] == "inf");
}

TEST_CASE("ftm and sweep tables") {
    const std::string grid = R"("grid": {"L": 16, "n": 1024}, "data": {"center": 3, "halfwidth": 2})";
    const RunResult f =
        execute("ftm", "{" + grid + R"(, "ftm": {"J": 3, "T": 0.5, "dt": 0.00390625, "sample_every": 4}})", std::nullopt);
    CHECK(table(f, "ftm_summary").rows.size() == 1);
    CHECK(table(f, "ftm_energy").rows.size() == 33);
    const RunResult s = execute(
        "sweep", "{" + grid + R"(, "ftm": {"T": 0.5, "dt": 0.00390625}, "sweep": {"J": [4, 3]}})", 2);
    const Table& rows = table(s, "sweep");
    REQUIRE(rows.rows.size() == 2);
    CHECK(std::get<long long>(rows.rows[0][0]) == 3);
    CHECK(table(s, "sweep_fit").rows.size() == 1);
}
