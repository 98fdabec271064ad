// Times the full check suite with the serial reference path against the
// OpenMP kernels and verifies the reports are byte-identical.

#include "qs3/builtins.hpp"
#include "qs3/par.hpp"
#include "qs3/suite.hpp"

#include <chrono>
#include <cstdio>
#include <string>

namespace {

double run_ms(const qs3::ManifoldSpec& spec, int threads, std::string* out) {
    qs3::par::set_threads(threads);
    auto t0 = std::chrono::steady_clock::now();
    qs3::CheckReport rep = qs3::run_suite(spec, qs3::Suite::All);
    auto t1 = std::chrono::steady_clock::now();
    *out = rep.to_json();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    struct Case {
        const char* label;
        qs3::ManifoldSpec spec;
    };
    Case cases[] = {
        {"trig(n=2,c=3)", qs3::builtin_spec("trig", {{"n", qs3::Rational(2)},
                                                     {"c", qs3::Rational(3)}})},
        {"flat(n=2)", qs3::builtin_spec("flat", {{"n", qs3::Rational(2)}})},
    };

    bool all_match = true;
    std::printf("%-16s %12s %12s %9s  %s\n", "case", "serial[ms]", "parallel[ms]", "speedup",
                "identical");
    for (auto& c : cases) {
        double best_serial = 1e100, best_parallel = 1e100;
        std::string serial_out, parallel_out;
        for (int r = 0; r < repeats; ++r) {
            std::string out;
            best_serial = std::min(best_serial, run_ms(c.spec, 1, &out));
            serial_out = out;
            best_parallel = std::min(best_parallel, run_ms(c.spec, 0, &out));
            parallel_out = out;
        }
        bool match = serial_out == parallel_out;
        all_match = all_match && match;
        std::printf("%-16s %12.1f %12.1f %8.2fx  %s\n", c.label, best_serial, best_parallel,
                    best_serial / best_parallel, match ? "yes" : "NO");
    }
    qs3::par::set_threads(0);
    return all_match ? 0 : 1;
}
