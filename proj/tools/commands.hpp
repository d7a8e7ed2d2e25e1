#pragma once

#include <optional>
#include <string>

namespace rgbethe::cli {

// Exit codes shared by every command.
enum Exit : int { kOk = 0, kInputError = 1, kNumericalFailure = 2 };

struct Options {
    std::string model_file;
    std::optional<int> n;
    std::string out;  // empty: stdout
    double tol = 1e-12;
    int threads = 0;
    // solve
    std::string pattern;
    std::string seed;
    // continuation
    std::string seed_partition;
    int xi_steps = 50;
    double s0 = 0.5;
    bool reverse = false;
    // state selection / operators
    std::optional<int> state;
    int bra = 0;
    int ket = 0;
    std::string op;
    std::optional<double> gauge;
    std::string lambdas_file;
    // bench
    int max_m = 10;
};

int run_solve(const Options& o);
int run_enumerate(const Options& o);
int run_continuation(const Options& o);
int run_overlap(const Options& o);
int run_norm(const Options& o);
int run_formfactor(const Options& o);
int run_validate(const Options& o);
int run_bench(const Options& o);

}  // namespace rgbethe::cli
