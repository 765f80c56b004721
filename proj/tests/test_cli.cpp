#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpkit/cli.hpp"
#include "rpkit/io.hpp"

using rpkit::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = rpkit::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json payload(const Run& r)
{
    auto j = json::parse(r.out);
    j.erase("wall_time_s");
    return j;
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("rpkit_test_" + name);
}

} // namespace

TEST_CASE("check exit codes")
{
    CHECK(run({"check", "reflection-negative", "--psi", "power", "--alpha", "0.5", "--grid", "-2:2:0.5"}).code == 0);
    const auto fail = run({"check", "reflection-negative", "--psi", "power", "--alpha", "1.6", "--grid", "-2:2:0.5"});
    CHECK(fail.code == 1);
    CHECK(payload(fail).at("result").at("nd_on_semigroup") == false);
    const auto ones = run({"check", "pd", "--kernel", "exponential", "--lambda", "0", "--grid", "0:3:1"});
    CHECK(ones.code == 0);
    CHECK(payload(ones).at("result").at("pass") == true);

    CHECK(run({"check", "bernstein", "--psi", "power", "--alpha", "2", "--grid", "0.5,1,2,4", "--step", "0.01"}).code == 1);
    CHECK(run({"check", "reflection-positive", "--kernel", "exponential", "--grid", "0.5:3:0.5"}).code == 0);
    CHECK(run({"check", "reflection-positive", "--kernel", "normalized1", "--reflection", "inversion", "--grid", "0.1,0.5,0.9"}).code == 0);
    CHECK(run({"check", "nd", "--psi", "abs", "--grid", "0:3:1"}).code == 0);
    CHECK(run({"check", "nd", "--source", "kernel", "--kernel", "bm2", "--grid", "1:3:1"}).code == 1);
    CHECK(run({"check", "schoenberg", "--psi", "power", "--alpha", "2", "--lambdas", "1", "--grid", "-2:2:1"}).code == 1);
    CHECK(run({"check", "schoenberg", "--psi", "abs", "--grid", "-2:2:1"}).code == 0);
}

TEST_CASE("usage and domain errors exit with 2 and a one-line diagnostic")
{
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"check", "pd", "--grid", "0:3:0"},
             {"check", "pd", "--grid", "0:3:1", "--bogus", "1"},
             {"check", "pd"},
             {"check", "pd", "--grid", "1,2", "--kernel", "nope"},
             {"check", "pd", "--grid", "1,2", "--kernel", "fbm", "--hurst", "1.5"},
             {"check", "pd", "--grid", "-1,2", "--kernel", "bm1"},
             {"simulate", "--grid", "1,2"},
             {"mc", "characteristic", "--v", "1,0"},
             {"lk", "eval", "--triple", "{\"a\":-1,\"b\":0,\"atoms\":[]}", "--grid", "1"},
             {"check", "pd", "--grid", "1,2", "--psd-tol", "-1"},
             {"frobnicate"},
             {}}) {
        const auto r = run(args);
        CAPTURE(r.err);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
}

TEST_CASE("help lists every flag")
{
    const auto r = run({"check", "pd", "--help"});
    CHECK(r.code == 0);
    for (const char* flag : {"--kernel", "--lambda", "--grid", "--psd-tol", "--threads", "--config", "--format", "--output"})
        CHECK(r.out.find(flag) != std::string::npos);
    const auto sim = run({"simulate", "--help"});
    for (const char* flag : {"--process", "--hurst", "--paths", "--seed", "--out", "--validate"})
        CHECK(sim.out.find(flag) != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("envelope shape and canonical form")
{
    const auto r = run({"quotient", "--kernel", "exponential", "--lambda", "1", "--grid", "0.5,1,2,4", "--shift", "0.7"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    for (const char* key : {"command", "params", "result", "wall_time_s", "version"})
        CHECK(j.contains(key));
    CHECK(j.at("command") == "quotient");
    CHECK(j.at("result").at("rank") == 1);
    CHECK(j.at("result").at("contractions").at(0).at("operator_norm").get<double>() ==
          doctest::Approx(std::exp(-0.7)).epsilon(1e-10));
    CHECK(rpkit::canonical_dump(j) + "\n" == r.out);

    const auto bm = run({"quotient", "--kernel", "bm2", "--grid", "1,2,3"});
    CHECK(json::parse(bm.out).at("result").at("rank") == 0);
}

TEST_CASE("resolved parameters reproduce the payload")
{
    const std::vector<std::vector<std::string>> commands{
        {"check", "reflection-negative", "--psi", "power", "--alpha", "0.75", "--grid", "-2:2:0.5"},
        {"simulate", "--process", "fbm", "--hurst", "0.3", "--grid", "0.25:2:0.25", "--paths", "2000", "--seed", "42", "--validate"},
        {"mc", "fock", "--v", "1,0", "--w", "0,1", "--samples", "20000", "--seed", "3"},
        {"lk", "fit", "--psi", "power", "--alpha", "0.5", "--grid", "0.1:5:0.1", "--lambda-logspace", "0.1,100,12"},
    };
    for (const auto& cmd : commands) {
        const auto first = run(cmd);
        REQUIRE(first.code != 2);
        const auto j = payload(first);
        const auto cfg = temp_path("config.json");
        std::ofstream(cfg) << j.at("params").dump();
        std::vector<std::string> replay;
        for (const auto& a : cmd) {
            if (a.rfind("--", 0) == 0)
                break;
            replay.push_back(a);
        }
        replay.push_back("--config");
        replay.push_back(cfg.string());
        const auto second = run(replay);
        CAPTURE(second.err);
        CHECK(second.code == first.code);
        CHECK(rpkit::canonical_dump(payload(second)) == rpkit::canonical_dump(j));
        std::filesystem::remove(cfg);
    }
}

TEST_CASE("config values yield to explicit flags and unknown keys are rejected")
{
    const auto cfg = temp_path("cfg2.json");
    std::ofstream(cfg) << R"({"psi":"power","alpha":1.6,"grid":"-2:2:0.5"})";
    CHECK(run({"check", "reflection-negative", "--config", cfg.string()}).code == 1);
    CHECK(run({"check", "reflection-negative", "--config", cfg.string(), "--alpha", "0.5"}).code == 0);
    std::ofstream(cfg) << R"({"grid":"-2:2:0.5","colour":"blue"})";
    CHECK(run({"check", "reflection-negative", "--config", cfg.string()}).code == 2);
    std::filesystem::remove(cfg);
    CHECK(run({"check", "pd", "--config", "/nonexistent.json"}).code == 2);
}

TEST_CASE("threads change speed, never output")
{
    const std::vector<std::string> base{"simulate", "--process", "fbm", "--hurst", "0.3", "--grid", "0.1:2:0.1",
                                        "--paths", "3000", "--seed", "9", "--format", "csv"};
    auto one = base, four = base;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    const auto a = run(one), b = run(four);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    const std::vector<std::string> mc{"mc", "characteristic", "--v", "0.5,0.5,0", "--samples", "50000", "--seed", "1", "--format", "csv"};
    auto m1 = mc, m3 = mc;
    m1.insert(m1.end(), {"--threads", "1"});
    m3.insert(m3.end(), {"--threads", "3"});
    CHECK(run(m1).out == run(m3).out);
}

TEST_CASE("simulate outputs")
{
    const auto fbm = run({"simulate", "--process", "fbm", "--hurst", "0.5", "--grid", "0.5:2:0.5", "--paths", "50", "--seed", "5", "--format", "csv"});
    const auto bm = run({"simulate", "--process", "bm2", "--grid", "0.5:2:0.5", "--paths", "50", "--seed", "5", "--format", "csv"});
    CHECK(fbm.out == bm.out);
    CHECK(fbm.out.substr(0, fbm.out.find('\n')) == "0.5,1,1.5,2");

    const auto path = temp_path("paths.csv");
    const auto r = run({"simulate", "--process", "normalized1", "--grid", "0.5,1,2", "--paths", "10", "--seed", "5", "--out", path.string(), "--validate", "--validate-tol", "10"});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(path));
    std::ifstream side(path.string() + ".json");
    const auto sidecar = json::parse(side);
    CHECK(sidecar.at("seed") == 5);
    CHECK(sidecar.at("n_paths") == 10);
    CHECK(payload(r).at("result").at("validation").at("dilation_stationarity").at("pass") == true);
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".json");

    const auto big = run({"simulate", "--process", "fbm", "--hurst", "0.3", "--grid", "0.25:2:0.25", "--paths", "50000", "--seed", "42", "--validate"});
    CHECK(big.code == 0);
    CHECK(payload(big).at("result").at("validation").at("max_abs_deviation").get<double>() <= 0.05);
}

TEST_CASE("lk and mc commands")
{
    const auto ev = run({"lk", "eval", "--triple", R"({"a":0,"b":0.5,"atoms":[{"lambda":2,"weight":3}]})", "--grid", "1", "--format", "csv"});
    CHECK(ev.code == 0);
    CHECK(ev.out == "t,psi\n1,3.093994150290162\n");

    const auto samples = temp_path("psi.csv");
    std::ofstream(samples) << "t,psi\n0.5,0.5\n1,1\n2,2\n3,3\n";
    const auto fit = run({"lk", "fit", "--samples", samples.string(), "--lambda-grid", "1,10"});
    CHECK(fit.code == 0);
    CHECK(payload(fit).at("result").at("triple").at("b").get<double>() == doctest::Approx(1.0));
    std::filesystem::remove(samples);

    const auto mc = run({"mc", "characteristic", "--v", "1,0,0", "--seed", "7"});
    CHECK(mc.code == 0);
    CHECK(payload(mc).at("result").at("abs_error").get<double>() <= 0.005);
    const auto cov = run({"mc", "characteristic", "--v", "1,0", "--w", "0,1", "--samples", "100000", "--seed", "7"});
    CHECK(payload(cov).at("result").at("field_covariance").at("target") == 0.0);

    CHECK(run({"cocycle", "--s", "2", "--t", "-3"}).code == 0);
    CHECK(run({"cocycle", "--cocycle", "onesided", "--s", "-2", "--t", "3"}).code == 2);
}

TEST_CASE("output file")
{
    const auto path = temp_path("out.json");
    const auto r = run({"check", "pd", "--grid", "0:3:1", "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    CHECK(json::parse(in).at("command") == "check pd");
    std::filesystem::remove(path);
}
