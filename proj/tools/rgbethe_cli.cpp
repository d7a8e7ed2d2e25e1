#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rgbethe/errors.hpp"

using namespace rgbethe;
using namespace rgbethe::cli;

namespace {

// input errors exit 1, everything the numerics could not deliver exits 2
int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::NoConvergence:
        case ErrorCode::PoleCollision:
        case ErrorCode::IncompleteEnumeration:
        case ErrorCode::NonrealLambda:
        case ErrorCode::RootFindingFailure:
        case ErrorCode::PathStalled:
        case ErrorCode::SingularDual:
        case ErrorCode::LinearSystemSingular:
        case ErrorCode::EigensolverFailure:
        case ErrorCode::NoMatch:
            return kNumericalFailure;
        default:
            return kInputError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Richardson-Gaudin solver for XXZ spin, Dicke and (p+ip)-boson models"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool model_required = true) {
        auto* m = sub->add_option("--model", o.model_file, "model JSON file");
        if (model_required) m->required()->check(CLI::ExistingFile);
        sub->add_option("--n", o.n, "number of excitations (overrides the model file)");
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--tol", o.tol, "Newton tolerance on the scaled residual")->check(CLI::PositiveNumber);
        sub->add_option("--threads", o.threads, "worker threads (default RGBETHE_THREADS or all cores)");
    };

    auto* solve = app.add_subcommand("solve", "solve for one state from a weak-coupling pattern or a rapidity seed");
    common(solve);
    solve->add_option("--pattern", o.pattern, "boson count, then occupation per level, e.g. 1,0,1,0");
    solve->add_option("--seed", o.seed, "rapidity seed re[:im],... ");

    auto* en = app.add_subcommand("enumerate", "all eigenstates of a sector");
    common(en);

    auto* cont = app.add_subcommand("continuation", "xi continuation from the Dicke model, CSV output");
    common(cont);
    cont->add_option("--seed-partition", o.seed_partition, "e.g. 0*2,1,2,3,4");
    cont->add_option("--xi-steps", o.xi_steps, "minimum number of xi samples");
    cont->add_option("--s0", o.s0, "spin of the deformed boson");
    cont->add_flag("--reverse", o.reverse, "sweep back from xi=1 to xi=0 after the forward run");

    auto* ov = app.add_subcommand("overlap", "overlaps with every basis state");
    common(ov);
    ov->add_option("--state", o.state, "state id from enumerate (default: all)");
    ov->add_option("--gauge", o.gauge, "XXZ gauge parameter eps_r");

    auto* nm = app.add_subcommand("norm", "Bethe-state norms");
    common(nm);
    nm->add_option("--state", o.state, "state id from enumerate (default: all)");

    auto* ff = app.add_subcommand("formfactor", "pip form factors between enumerated states");
    common(ff);
    ff->add_option("--op", o.op, "S+<k>, b+ or number")->required();
    ff->add_option("--bra", o.bra, "state id in sector N");
    ff->add_option("--ket", o.ket, "state id in sector N-1 (S+, b+) or N (number)");

    auto* val = app.add_subcommand("validate", "cross-check everything against exact diagonalization");
    common(val);
    val->add_option("--lambdas", o.lambdas_file, "Lambda sets to validate instead of enumerating")
        ->check(CLI::ExistingFile);

    auto* bench = app.add_subcommand("bench", "timing of determinant formulas vs exact diagonalization");
    common(bench, false);
    bench->add_option("--max-m", o.max_m, "largest number of levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*solve) return run_solve(o);
        if (*en) return run_enumerate(o);
        if (*cont) return run_continuation(o);
        if (*ov) return run_overlap(o);
        if (*nm) return run_norm(o);
        if (*ff) return run_formfactor(o);
        if (*val) return run_validate(o);
        if (*bench) return run_bench(o);
    } catch (const Error& e) {
        std::cerr << "rgbethe: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "rgbethe: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
