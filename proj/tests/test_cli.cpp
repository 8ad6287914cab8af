#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("arcweave_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Result cli(const std::string& args) {
    const fs::path dir = scratch("io");
    const std::string cmd = std::string("'") + ARCWEAVE_CLI + "' " + args + " > '" + (dir / "out").string() +
                            "' 2> '" + (dir / "err").string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out"), slurp(dir / "err")};
}

}  // namespace

TEST_CASE("continue writes a report and traces") {
    const fs::path out = scratch("circle");
    const Result r = cli("continue --builtin circle --t0 0 --s-budget 25 --out '" + out.string() + "'");
    CHECK(r.code == 0);
    CHECK(r.out.find("PERIODIC") != std::string::npos);
    const std::string report = slurp(out / "report.json");
    CHECK(report.find("\"classification\": \"PERIODIC\"") != std::string::npos);
    CHECK(report.find("\"period\": 6.28318530") != std::string::npos);
    CHECK(fs::exists(out / "trace_A.csv"));
    CHECK(slurp(out / "trace_B.csv").rfind("s,re,im,step,radius_est,unit_speed_err,curvature\n", 0) == 0);

    const fs::path svg = scratch("svg");
    CHECK(cli("continue --builtin line --t0 0 --s-budget 20 --format svg --out '" + svg.string() + "'").code == 0);
    CHECK(slurp(svg / "trace_B.svg").find("<polyline") != std::string::npos);

    const Result j = cli("continue --curve 't + i*t^2/2' --t0 0 --s-budget 5 --format json --no-critical");
    CHECK(j.code == 0);
    CHECK(j.out.find("\"sideA\"") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
    const Result p = cli("continue --curve 'exp(i*t' --t0 0");
    CHECK(p.code == 2);
    CHECK(p.err.find("ParseError") != std::string::npos);
    CHECK(p.err.find("position 7") != std::string::npos);

    CHECK(cli("continue --builtin circle").code == 2);
    CHECK(cli("continue --builtin nope --t0 0").code == 2);
    CHECK(cli("continue --builtin ex6 --t0 1").code == 2);
    CHECK(cli("continue --curve 't^2' --t0 0").err.find("ZeroDerivative") != std::string::npos);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("render --trace /nonexistent.csv --out x.svg").code == 2);
    CHECK(cli("classify --trace /nonexistent.csv").code == 2);
}

TEST_CASE("ex6 at tau 0.5 is regular at t = pi") {
    const Result r = cli("continue --builtin ex6 --tau 0.5 --t0 3.14159265 --s-budget 5");
    CHECK(r.code == 0);
}

TEST_CASE("examples") {
    const Result seed = cli("examples --seed-table");
    CHECK(seed.code == 0);
    CHECK(seed.out.find("\"ex7\"") != std::string::npos);

    const fs::path dir = scratch("table");
    std::string row = seed.out.substr(seed.out.find('{'));
    row = row.substr(0, row.find("\n  }") + 4);
    {
        std::ofstream(dir / "ok.json") << "[" << row << "]";
        std::string bad = row;
        bad.replace(bad.find("\"expect_b\": \"INFINITE\""), 22, "\"expect_b\": \"PERIODIC\"");
        std::ofstream(dir / "bad.json") << "[" << bad << "]";
        std::ofstream(dir / "broken.json") << "[{\"id\": 1}]";
    }
    const Result ok = cli("examples --table '" + (dir / "ok.json").string() + "'");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("ex1") != std::string::npos);
    const Result bad = cli("examples --table '" + (dir / "bad.json").string() + "' --format json");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("side B: INFINITE instead of PERIODIC") != std::string::npos);
    CHECK(cli("examples --table '" + (dir / "broken.json").string() + "'").code == 2);
}

TEST_CASE("classify, render, critical and length") {
    const fs::path out = scratch("tools");
    REQUIRE(cli("continue --builtin circle --t0 0 --s-budget 25 --out '" + out.string() + "'").code == 0);
    const Result few = cli("classify --trace '" + (out / "trace_B.csv").string() + "'");
    CHECK(few.code == 2);
    CHECK(few.err.find("TooFewSamples") != std::string::npos);

    REQUIRE(cli("continue --builtin circle --t0 0 --s-budget 25 --max-step 0.1 --no-period --out '" + out.string() + "'").code == 0);
    const std::string trace = (out / "trace_B.csv").string();

    const Result c = cli("classify --trace '" + trace + "' --format json");
    CHECK(c.code == 0);
    CHECK(c.out.find("CIRCLE") != std::string::npos);

    CHECK(cli("render --trace '" + trace + "' --out '" + (out / "b.svg").string() + "'").code == 0);
    CHECK(slurp(out / "b.svg").find("<svg") == 0);
    std::ofstream(out / "empty.csv") << "s,re,im,step,radius_est,unit_speed_err,curvature\n";
    const Result empty = cli("render --trace '" + (out / "empty.csv").string() + "'");
    CHECK(empty.code == 2);
    CHECK(empty.err.find("MalformedTrace") != std::string::npos);

    const Result cr = cli("critical --curve '(t-1)^2' --lo 0 --hi 3 --format csv");
    CHECK(cr.code == 0);
    CHECK(cr.out.find("t,residual\n1") != std::string::npos);

    const Result ln = cli("length --builtin circle --lo 0 --hi 6.283185307179586 --format json");
    CHECK(ln.code == 0);
    CHECK(ln.out.find("CONVERGENT") != std::string::npos);
}
