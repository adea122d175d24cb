#include <iostream>

#include "verify/verify.hpp"

int main() {
    int failed = 0;
    for (const auto& r : sl3::verify::run_suite("all", &std::cout, true))
        if (!r.pass) ++failed;
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " of 14 criteria failed" : "acceptance: all 14 criteria passed")
              << std::endl;
    return failed ? 1 : 0;
}
