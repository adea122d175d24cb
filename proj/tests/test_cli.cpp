#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <vector>

#include "cli/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "sl3");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = sl3::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(SL3_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("eval-whittaker example: positive real value") {
    auto r = run({"eval-whittaker", "--which", "W-vt", "--lambda", "0.4,0.1,auto", "--y1", "1", "--y2", "1"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "1");
    CHECK(std::stod(j["re"].get<std::string>()) > 0);
    CHECK(std::abs(std::stod(j["im"].get<std::string>())) <= 1e-10);
}

TEST_CASE("configuration errors exit 2 with nothing on standard output") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"hecke", "--n", "2", "--input", "q^-1", "--no-such-flag"},
             {"no-such-command"},
             {},
             {"hecke", "--n", "0", "--input", "q^-1"},
             {"hecke", "--n", "2", "--input", "q^"},
             {"eval-whittaker", "--which", "W-vt", "--lambda", "0.4,0.1,0.4", "--y1", "1", "--y2", "1"},
             {"eval-whittaker", "--which", "W-vt", "--lambda", "0.4,0.1,auto", "--y1", "-1", "--y2", "1"},
             {"--bits", "8", "nilpotent", "--y1", "1", "--y2", "1"},
             {"fourier-synth", "--model", "/nonexistent.json", "--grid", "0,0,0,1,1"},
             {"fourier-synth", "--model", data("single_mode.json"), "--grid", "0,0,1,1"},
             {"verify", "--suite", "nonsense"},
         }) {
        auto r = run(args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    }
}

TEST_CASE("identical invocations give identical output, for any thread count") {
    std::vector<std::string> base = {"--bits", "64", "fourier-synth", "--model", data("single_mode.json"),
                                     "--grid", "0,0,0,1,1;0.1,0.2,0.3,1.2,0.9;0,0.5,0,0.9,1.1"};
    auto a = run(base), b = run(base);
    auto t = base;
    t.insert(t.end(), {"--threads", "3"});
    auto c = run(t);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.rfind("x,y,z,y1,y2,re,im,tail_bound\n", 0) == 0);
}

TEST_CASE("hecke commands") {
    auto r = run({"hecke", "--n", "4", "--input", "q^-2"});
    CHECK(r.code == 0);
    CHECK(r.out == "q^-8 + 2q^-2\n");
    r = run({"hecke-combo", "--cn", data("cn.json"), "--polar", data("polar.json"), "--kmax", "12"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["f"][0][0] == 2);
    CHECK(j["f"][0][1] == "-7/6");
}

TEST_CASE("project and majorants produce JSON") {
    auto r = run({"--bits", "64", "project", "--model", data("single_mode.json"), "--k", "5", "--l", "7"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(std::stod(j["value"][0].get<std::string>())) < 1e-20);
    r = run({"majorants", "--y1", "1", "--y2", "1", "--coset-delta", "10", "--s2-kmax", "500"});
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    // too short a coset range: the last tenth still carries weight
    CHECK(j["ok"] == false);
    CHECK(std::stod(j["S3"]["last_tenth"].get<std::string>()) > 1e-3);
    r = run({"majorants", "--y1", "1", "--y2", "1"});
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["ok"] == true);
}

TEST_CASE("verify exits 0 when its checks pass") {
    auto r = run({"verify", "--suite", "hecke"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("[PASS] 13", 0) == 0);
}
