#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("maxfield_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + MAXFIELD_BIN + " " + args + " > " + path("stdout.txt") + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes the grid field and a sidecar") {
    REQUIRE(run("simulate --shape gaussian --sigma 1 --dim 1 --R 1 --h 0.1 --method normalized --seed 42 --out " + path("a.csv")) == 0);
    const auto csv = slurp(path("a.csv"));
    CHECK(csv.rfind("y1,z\n", 0) == 0);
    CHECK(lines(csv) == 22);
    const auto side = json::parse(slurp(path("a.csv.json")));
    CHECK(side["schema"] == "maxfield.field.v1");
    CHECK(side["m"].get<int>() >= 1);
    CHECK(side["config"]["seed"] == 42);
    CHECK(side["inf"].get<double>() <= side["sup"].get<double>());
}

TEST_CASE("simulate is deterministic") {
    const std::string args = " --dim 2 --R 1 --h 0.25 --seed 42 --trace " ;
    REQUIRE(run("simulate" + args + path("t1.csv") + " --trace-n 50 --out " + path("b1.csv")) == 0);
    REQUIRE(run("simulate" + args + path("t2.csv") + " --trace-n 50 --threads 8 --out " + path("b2.csv")) == 0);
    CHECK(slurp(path("b1.csv")) == slurp(path("b2.csv")));
    CHECK(slurp(path("t1.csv")) == slurp(path("t2.csv")));
    CHECK(lines(slurp(path("b1.csv"))) == 82);
    CHECK(lines(slurp(path("t1.csv"))) == 51);
    auto j1 = json::parse(slurp(path("b1.csv.json")));
    auto j2 = json::parse(slurp(path("b2.csv.json")));
    CHECK(j1 == j2);
}

TEST_CASE("simulate supports every method") {
    CHECK(run("simulate --method schlather --k 3 --seed 1 --out " + path("s.csv")) == 0);
    CHECK(json::parse(slurp(path("s.csv.json"))).contains("window_volume"));
    CHECK(run("simulate --shape indicator --scaling raw --r 1 --method transformed --weight uniform:3 --seed 1 --out " + path("u.csv")) == 0);
    CHECK(run("simulate --variant weak --seed 1 --out " + path("w.csv")) == 0);
    CHECK(json::parse(slurp(path("w.csv.json")))["m"] == 1);
}

TEST_CASE("configuration errors exit with code 2") {
    CHECK(run("simulate --h 0.3 --R 1 --seed 1 --out " + path("x.csv")) == 2);
    CHECK(slurp(path("stderr.txt")).find("grid_step must divide 2R") != std::string::npos);
    CHECK(run("simulate --shape cone --out " + path("x.csv")) == 2);
    CHECK(run("simulate --method gibbs --out " + path("x.csv")) == 2);
    CHECK(run("simulate --method transformed --weight uniform:5 --out " + path("x.csv")) == 2);
    CHECK(run("simulate --bogus 1") == 2);
    CHECK(run("experiment table1") == 2);
    CHECK(slurp(path("stderr.txt")).find("--seed") != std::string::npos);
    CHECK(run("validate") == 2);
    CHECK(run("experiment table9 --seed 1") == 2);
}

TEST_CASE("budget exhaustion exits with code 3") {
    CHECK(run("simulate --R 10 --max-functions 1 --seed 1 --out " + path("x.csv")) == 3);
}

TEST_CASE("config file with flag precedence") {
    std::ofstream(path("run.cfg")) << "simulate.R=2\nsimulate.h=0.5\nsimulate.seed=3\n";
    REQUIRE(run("--config " + path("run.cfg") + " simulate --out " + path("c1.csv")) == 0);
    CHECK(lines(slurp(path("c1.csv"))) == 10);
    REQUIRE(run("--config " + path("run.cfg") + " simulate --h 0.25 --out " + path("c2.csv")) == 0);
    CHECK(lines(slurp(path("c2.csv"))) == 18);
    CHECK(json::parse(slurp(path("c2.csv.json")))["config"]["seed"] == 3);
}

TEST_CASE("experiment reports") {
    REQUIRE(run("experiment table1 --N 500 --R 1 --seed 7 --compare-paper --out " + path("e1")) == 0);
    const auto csv = slurp(path("e1.csv"));
    CHECK(lines(csv) == 3);
    const auto j = json::parse(slurp(path("e1.json")));
    CHECK(j["schema"] == "maxfield.experiment.v1");
    REQUIRE(j["rows"].size() == 2);
    for (const auto& row : j["rows"]) {
        for (const char* key : {"Q", "M", "ratio", "A", "P"}) CHECK(row.contains(key));
        CHECK(row.contains("reference"));
    }
    REQUIRE(run("experiment table2 --N 250 --R 1 --seed 7 --out " + path("e2")) == 0);
    const auto j2 = json::parse(slurp(path("e2.json")));
    CHECK(j2["config"]["dim"] == 2);
    CHECK(j2["rows"].size() == 2);
}

TEST_CASE("experiment output does not depend on the thread count") {
    REQUIRE(run("experiment table1 --N 400 --R 1 2 --seed 7 --threads 1 --out " + path("d1")) == 0);
    REQUIRE(run("experiment table1 --N 400 --R 1 2 --seed 7 --out " + path("d8"), "MAXFIELD_THREADS=8") == 0);
    CHECK(slurp(path("d1.csv")) == slurp(path("d8.csv")));
    auto a = json::parse(slurp(path("d1.json")));
    auto b = json::parse(slurp(path("d8.json")));
    CHECK(a["config"]["threads"] == 1);
    CHECK(b["config"]["threads"] == 8);
    CHECK(a["rows"] == b["rows"]);
}

TEST_CASE("validate passes and emits JSON") {
    REQUIRE(run("validate --seed 42 --out " + path("v.json")) == 0);
    const auto j = json::parse(slurp(path("v.json")));
    CHECK(j["schema"] == "maxfield.validation.v1");
    CHECK(j["all_passed"] == true);
    CHECK(j["checks"].size() >= 8);
}

TEST_CASE("help exits cleanly") { CHECK(run("--help") == 0); }

}
