#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace sl3::verify {

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;  // the measured numbers behind the verdict
    double seconds = 0;
};

struct Criterion {
    int id;
    std::string suite;
    std::string title;
    std::function<CheckResult()> run;
};

// The fourteen acceptance checks in order.
const std::vector<Criterion>& criteria();

// bessel, whittaker, asymptotics, fourier, hecke, core, or all
std::vector<std::string> suite_names();
bool is_suite(const std::string& name);

// Runs the checks of one suite, printing one line per check to `out` as it finishes.
// Timings make the lines nondeterministic, so they are opt-in.
std::vector<CheckResult> run_suite(const std::string& suite, std::ostream* out = nullptr, bool timing = false);

std::string format_line(const CheckResult& r, bool timing = false);

}  // namespace sl3::verify
