#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sl3/errors.hpp"
#include "sl3/model_io.hpp"

using namespace sl3;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream f(std::string(SL3_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("models round-trip through JSON") {
    for (const char* name : {"single_mode.json", "mixed.json", "growing.json"}) {
        auto m = model_from_json(slurp(name), 128);
        auto again = model_from_json(model_to_json(m), 128);
        CHECK(model_to_json(again) == model_to_json(m));
        CHECK(again.truncation.k_max == m.truncation.k_max);
        CHECK(again.ckl().size() == m.ckl().size());
    }
    auto mixed = model_from_json(slurp("mixed.json"), 128);
    CHECK(mixed.c00().size() == 2);
    CHECK(mixed.ckl().at({2, 1}).im.to_double() == 0.25);
    CHECK(mixed.d0l().at({1, 2}).im.to_double() == doctest::Approx(0.1));
    CHECK(model_from_json(slurp("growing.json"), 128).has_growing_modes());
}

TEST_CASE("malformed models are rejected") {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"c00": []})",
        R"({"lambda": ["0.4", "0.1"]})",
        R"({"lambda": ["0.4", "0.1", "0.4"]})",
        R"({"lambda": ["0.4", "0.1", "auto"], "ckl": [[1, 1, "x", "0"]]})",
        R"({"lambda": ["0.4", "0.1", "auto"], "ckl": [[1, 1, "1"]]})",
        R"({"lambda": ["0.4", "0.1", "auto"], "ckl": [[1, 1, "1", "0"], [-1, 1, "2", "0"]]})",
        R"j({"lambda": ["0.4", "0.1", "auto"], "mklw": [[1, 1, "(1234)", "1", "0"]]})j",
        R"({"lambda": ["0.4", "0.1", "auto"], "truncation": {"k_max": -1}})",
        R"({"lambda": ["0.4", "0.1", "auto"], "bogus": 1})",
    };
    for (const char* text : bad) CHECK_THROWS_AS(model_from_json(text, 128), DomainError);
}
