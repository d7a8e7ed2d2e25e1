#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rgbethe/detforms.hpp"
#include "rgbethe/errors.hpp"
#include "rgbethe/jsonio.hpp"
#include "rgbethe/models.hpp"
#include "rgbethe/oracle.hpp"
#include "rgbethe/solver.hpp"

namespace rgbethe::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write '" + o.out + "'");
    f << text;
}

struct Loaded {
    ModelSpec model;
    int N = 0;
};

Loaded load(const Options& o, bool need_n = true) {
    if (o.model_file.empty()) throw Error(ErrorCode::InvalidInput, "--model is required");
    auto f = model_from_json(read_file(o.model_file));
    Loaded l{f.model, 0};
    if (o.n) l.N = *o.n;
    else if (f.N) l.N = *f.N;
    else if (need_n) throw Error(ErrorCode::InvalidInput, "N missing: give --n or an \"N\" key in the model file");
    if (l.N < 0) throw Error(ErrorCode::InvalidInput, "N must be nonnegative");
    return l;
}

SolveConfig config_of(const Options& o) {
    SolveConfig c;
    c.newton_tol = o.tol;
    c.threads = o.threads;
    c.s0 = o.s0;
    return c;
}

ojson doubles(const std::vector<double>& v) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(x);
    return a;
}

ojson solution_json(int id, const ModelSpec& model, const BetheSolution& s) {
    ojson j;
    if (id >= 0) j["state_id"] = id;
    if (!s.pattern.empty()) {
        ojson p = ojson::array();
        for (int v : s.pattern) p.push_back(v);
        j["pattern"] = p;
    }
    j["lambdas"] = doubles(s.lambdas);
    if (model.variant == ModelVariant::PipBoson) j["lambda0"] = s.lambda0;
    j["charges"] = doubles(s.charges);
    j["residual_lambda"] = s.residual_lambda;
    if (s.rapidities) {
        ojson r = ojson::array();
        for (const auto& x : *s.rapidities) r.push_back(ojson::array({x.real(), x.imag()}));
        j["rapidities"] = r;
        j["residual_rapidity"] = s.residual_rapidity;
    }
    return j;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, "bad integer list '" + s + "'");
        }
    }
    return out;
}

// "re[:im],re[:im],..."
std::vector<cplx> parse_complex_list(const std::string& s) {
    std::vector<cplx> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            auto colon = item.find(':');
            double re = std::stod(item.substr(0, colon));
            double im = colon == std::string::npos ? 0.0 : std::stod(item.substr(colon + 1));
            out.emplace_back(re, im);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, "bad seed list '" + s + "'");
        }
    }
    return out;
}

// Lambda sets from a file: an array of arrays, or the array written by `enumerate`.
std::vector<std::vector<double>> read_lambda_sets(const std::string& path, int m) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON in lambdas file: ") + e.what());
    }
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "lambdas file must hold an array");
    std::vector<std::vector<double>> out;
    for (const auto& e : j) {
        const auto& arr = e.is_object() && e.contains("lambdas") ? e.at("lambdas") : e;
        if (!arr.is_array() || static_cast<int>(arr.size()) != m)
            throw Error(ErrorCode::InvalidInput, "each Lambda set needs " + std::to_string(m) + " numbers");
        std::vector<double> v;
        for (const auto& x : arr) {
            if (!x.is_number()) throw Error(ErrorCode::InvalidInput, "Lambda entries must be numbers");
            v.push_back(x.get<double>());
        }
        out.push_back(std::move(v));
    }
    return out;
}

BetheSolution from_lambdas(const ModelSpec& model, int N, const std::vector<double>& lambdas) {
    BetheSolution s;
    s.model = model;
    s.N = N;
    s.lambdas = lambdas;
    if (model.variant == ModelVariant::XXZSpin) {
        s.charges = xxz_charge_eigenvalues(model, lambdas);
    } else {
        s.charges = charge_eigenvalues(model, lambdas, N);
        if (model.variant == ModelVariant::PipBoson) s.lambda0 = pip_lambda0(model, lambdas, N);
        s.residual_lambda = lambda_residual(model, N, lambdas);
    }
    s.converged = true;
    return s;
}

const BetheSolution& pick(const std::vector<BetheSolution>& states, int id) {
    if (id < 0 || id >= static_cast<int>(states.size()))
        throw Error(ErrorCode::InvalidInput, "state " + std::to_string(id) + " out of range (sector has " +
                                                 std::to_string(states.size()) + ")");
    return states[id];
}

// rapidities for an enumerated state, when the coupling ramp reaches it
std::optional<BetheSolution> with_rapidities(const ModelSpec& model, const BetheSolution& s,
                                             const SolveConfig& cfg) {
    if (s.pattern.empty() || s.N == 0) return std::nullopt;
    std::vector<int> counts{s.N};
    for (int v : s.pattern) {
        counts[0] -= v;
        counts.push_back(v);
    }
    try {
        auto r = solve_pattern(model, counts, cfg);
        double d = 0.0;
        for (std::size_t i = 0; i < r.charges.size(); ++i) d = std::max(d, std::abs(r.charges[i] - s.charges[i]));
        if (d <= 1e-8 * (1.0 + std::abs(s.charges[0]))) return r;
    } catch (const Error&) {
    }
    return std::nullopt;
}

// above every level, so it is also a valid hyperbolic parameter
double default_gauge(const ModelSpec& model, double shift = 1.3) {
    double hi = model.levels[0];
    for (double e : model.levels) hi = std::max(hi, e);
    return hi + shift;
}

ojson basis_json(const BasisState& b) {
    ojson j;
    j["boson"] = b.boson_count;
    ojson occ = ojson::array();
    for (int v : b.occupations) occ.push_back(v);
    j["occupations"] = occ;
    return j;
}

DeterminantReport norm_of(const ModelSpec& model, const BetheSolution& s) {
    if (model.variant == ModelVariant::Dicke) return norm_dicke(model, s);
    if (model.variant == ModelVariant::PipBoson) return norm_pip(model, s);
    throw Error(ErrorCode::WrongVariant, "norms are available for dicke and pip models");
}

// --- validate -----------------------------------------------------------

struct Check {
    std::string name;
    double tolerance = 0.0;
    double deviation = 0.0;
    int count = 0;
    bool skipped = true;
    std::string note;

    void add(double d) {
        skipped = false;
        ++count;
        if (!(d <= deviation)) deviation = std::isnan(d) ? INFINITY : d;
    }
    bool failed() const { return !skipped && !(deviation <= tolerance); }
    ojson json() const {
        ojson j;
        j["name"] = name;
        j["status"] = skipped ? "skipped" : failed() ? "fail" : "pass";
        j["max_deviation"] = deviation;
        j["tolerance"] = tolerance;
        j["count"] = count;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

int run_solve(const Options& o) {
    auto l = load(o, false);
    auto cfg = config_of(o);
    BetheSolution s;
    if (!o.pattern.empty()) {
        auto counts = parse_ints(o.pattern);
        if (static_cast<int>(counts.size()) != l.model.m() + 1)
            throw Error(ErrorCode::InvalidInput, "--pattern needs m+1 entries: boson count, then one per level");
        s = solve_pattern(l.model, counts, cfg);
    } else if (!o.seed.empty()) {
        auto seed = parse_complex_list(o.seed);
        s = solve_rapidities(l.model, static_cast<int>(seed.size()), seed, cfg);
    } else {
        throw Error(ErrorCode::InvalidInput, "solve needs --pattern or --seed");
    }
    emit(o, dump_json(solution_json(-1, l.model, s)) + "\n");
    return kOk;
}

int run_enumerate(const Options& o) {
    auto l = load(o);
    auto rep = enumerate_states_report(l.model, l.N, config_of(o));
    if (!rep.complete()) {
        ojson j;
        j["error"] = "IncompleteEnumeration";
        j["found"] = rep.solutions.size();
        j["expected"] = rep.expected;
        ojson f = ojson::array();
        for (const auto& e : rep.failures) {
            ojson p = ojson::array();
            for (int v : e.pattern) p.push_back(v);
            f.push_back(ojson{{"pattern", p}, {"message", e.message}});
        }
        j["failures"] = f;
        emit(o, dump_json(j) + "\n");
        return kNumericalFailure;
    }
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < rep.solutions.size(); ++i)
        arr.push_back(solution_json(static_cast<int>(i), l.model, rep.solutions[i]));
    emit(o, dump_json(arr) + "\n");
    return kOk;
}

int run_continuation(const Options& o) {
    auto l = load(o);
    if (l.model.variant != ModelVariant::Dicke) throw Error(ErrorCode::WrongVariant, "continuation needs a dicke model");
    if (o.xi_steps < 1) throw Error(ErrorCode::InvalidInput, "--xi-steps must be positive");
    auto cfg = config_of(o);
    cfg.step.max_step = std::min(cfg.step.max_step, 1.0 / o.xi_steps);

    std::string csv = "xi";
    for (int a = 1; a <= l.N; ++a) csv += ",re_x" + std::to_string(a) + ",im_x" + std::to_string(a);
    csv += ",flag\n";
    if (l.N == 0) {
        csv += o.reverse ? "1.0,0\n0.0,0\n" : "0.0,0\n1.0,0\n";
        emit(o, csv);
        return kOk;
    }
    if (o.seed_partition.empty()) throw Error(ErrorCode::InvalidInput, "--seed-partition is required for N > 0");
    auto part = parse_partition(o.seed_partition);
    auto start = continuation_start(l.model, l.N, part, cfg);
    auto path = continuation_xi(l.model, l.N, start, cfg);
    if (o.reverse) {
        auto rc = cfg;
        rc.xi_start = cfg.xi_end;
        rc.xi_end = cfg.xi_start;
        BetheSolution back = start;
        back.rapidities = path.rapidity_snapshots.back();
        path = continuation_xi(l.model, l.N, back, rc);
    }
    for (std::size_t k = 0; k < path.xi_samples.size(); ++k) {
        if (!path.converged[k]) continue;
        csv += format_double(path.xi_samples[k]);
        for (const auto& x : path.rapidity_snapshots[k]) csv += "," + format_double(x.real()) + "," + format_double(x.imag());
        csv += path.flagged[k] ? ",1\n" : ",0\n";
    }
    emit(o, csv);
    return kOk;
}

int run_overlap(const Options& o) {
    auto l = load(o);
    auto cfg = config_of(o);
    auto states = enumerate_states(l.model, l.N, cfg);
    auto basis = build_sector_basis(l.model, l.N);
    double gauge = o.gauge ? *o.gauge : default_gauge(l.model);
    ojson arr = ojson::array();
    for (int id = 0; id < static_cast<int>(states.size()); ++id) {
        if (o.state && *o.state != id) continue;
        BetheSolution s = states[id];
        std::string mode = "absolute";
        if (l.model.variant == ModelVariant::XXZSpin) {
            if (auto r = with_rapidities(l.model, s, cfg)) s = *r;
            else if (l.N > 0) mode = "relative";
        }
        ojson j;
        j["state_id"] = id;
        j["mode"] = mode;
        ojson ov = ojson::array();
        for (const auto& b : basis.states) {
            auto rep = overlap(l.model, s, b, gauge);
            ojson e = basis_json(b);
            e["overlap"] = rep.real();
            if (std::abs(rep.value.imag()) > 1e-12 * (1.0 + std::abs(rep.value))) e["overlap_imag"] = rep.value.imag();
            ov.push_back(e);
        }
        j["overlaps"] = ov;
        arr.push_back(j);
    }
    if (o.state && arr.empty()) pick(states, *o.state);
    emit(o, dump_json(arr) + "\n");
    return kOk;
}

int run_norm(const Options& o) {
    auto l = load(o);
    auto states = enumerate_states(l.model, l.N, config_of(o));
    ojson arr = ojson::array();
    for (int id = 0; id < static_cast<int>(states.size()); ++id) {
        if (o.state && *o.state != id) continue;
        auto rep = norm_of(l.model, states[id]);
        arr.push_back(ojson{{"state_id", id}, {"norm", rep.real()}, {"conditioning", rep.conditioning}});
    }
    if (o.state && arr.empty()) pick(states, *o.state);
    emit(o, dump_json(arr) + "\n");
    return kOk;
}

int run_formfactor(const Options& o) {
    auto l = load(o);
    if (l.model.variant != ModelVariant::PipBoson)
        throw Error(ErrorCode::WrongVariant, "form factors are available for pip models");
    auto cfg = config_of(o);
    auto bras = enumerate_states(l.model, l.N, cfg);
    const auto& bra = pick(bras, o.bra);
    double nb = norm_pip(l.model, bra).real();
    ojson j;
    j["op"] = o.op;
    j["bra"] = o.bra;
    j["ket"] = o.ket;
    if (o.op == "number") {
        const auto& ket = pick(bras, o.ket);
        double nk = norm_pip(l.model, ket).real();
        auto f = ff_number_pip(l.model, bra, ket);
        std::vector<double> zn;
        for (double v : f.sz) zn.push_back(normalized_element(v, nb, nk));
        j["diagonal"] = f.diagonal;
        j["sz"] = doubles(f.sz);
        j["boson"] = f.boson;
        j["normalized_sz"] = doubles(zn);
        j["normalized_boson"] = normalized_element(f.boson, nb, nk);
    } else {
        if (l.N < 1) throw Error(ErrorCode::InvalidInput, "raising form factors need N >= 1");
        auto kets = enumerate_states(l.model, l.N - 1, cfg);
        const auto& ket = pick(kets, o.ket);
        double nk = norm_pip(l.model, ket).real();
        double v;
        if (o.op == "b+") {
            v = ff_boson_pip(l.model, bra, ket).real();
        } else if (o.op.rfind("S+", 0) == 0) {
            auto op = parse_operator(o.op);
            v = ff_raise_pip(l.model, bra, ket, op.level).real();
        } else {
            throw Error(ErrorCode::UnknownOperator, "--op must be S+<k>, b+ or number");
        }
        j["value"] = v;
        j["normalized"] = normalized_element(v, nb, nk);
    }
    emit(o, dump_json(j) + "\n");
    return kOk;
}

int run_validate(const Options& o) {
    auto l = load(o);
    const auto& M = l.model;
    const int N = l.N;
    auto cfg = config_of(o);
    auto basis = build_sector_basis(M, N);
    auto eig = diagonalize(basis);

    std::vector<BetheSolution> states;
    std::vector<BetheSolution> enumerated;
    std::string enum_note;
    {
        auto rep = enumerate_states_report(M, N, cfg);
        enumerated = rep.solutions;
        if (!rep.complete())
            enum_note = "enumeration found " + std::to_string(rep.solutions.size()) + " of " + std::to_string(rep.expected);
    }
    if (!o.lambdas_file.empty()) {
        for (auto& lam : read_lambda_sets(o.lambdas_file, M.m())) states.push_back(from_lambdas(M, N, lam));
    } else {
        states = enumerated;
    }

    std::vector<Check> checks;
    Check spec{"spectrum", 1e-8};
    spec.skipped = false;
    std::vector<int> ed_index(states.size(), -1);
    {
        std::vector<std::vector<double>> rows;
        for (const auto& s : states) rows.push_back(s.charges);
        spec.count = static_cast<int>(states.size());
        if (states.size() != static_cast<std::size_t>(basis.size())) {
            spec.deviation = INFINITY;
            spec.note = "got " + std::to_string(states.size()) + " states, sector has " + std::to_string(basis.size());
            if (!enum_note.empty()) spec.note += "; " + enum_note;
        } else {
            try {
                auto m = match_spectrum(eig, rows);
                spec.deviation = m.max_deviation;
                ed_index = m.assignment;
            } catch (const Error& e) {
                spec.deviation = INFINITY;
                spec.note = e.what();
            }
        }
    }
    checks.push_back(spec);

    // rapidity solutions from the coupling ramp, matched to states by charges
    std::vector<std::optional<BetheSolution>> raps(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (const auto& e : enumerated) {
            double d = 0.0;
            for (std::size_t k = 0; k < e.charges.size(); ++k) d = std::max(d, std::abs(e.charges[k] - states[i].charges[k]));
            if (d <= 1e-8) {
                raps[i] = with_rapidities(M, e, cfg);
                break;
            }
        }
    }
    const double gauge = default_gauge(M);
    auto overlap_vec = [&](const BetheSolution& s) {
        Eigen::VectorXd v(basis.size());
        for (int k = 0; k < basis.size(); ++k) v(k) = overlap(M, s, basis.states[k], gauge).real();
        return v;
    };

    Check perm{"overlap_permanent", 1e-10};
    int no_rap = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!raps[i]) {
            ++no_rap;
            continue;
        }
        // compare on the Lambda-only solution so both routes are exercised
        BetheSolution s = states[i];
        if (M.variant == ModelVariant::XXZSpin) s = *raps[i];
        Eigen::VectorXd v = overlap_vec(s);
        double scale = std::max(v.cwiseAbs().maxCoeff(), 1e-300);
        double d = 0.0;
        for (int k = 0; k < basis.size(); ++k)
            d = std::max(d, std::abs(permanent_expansion(M, *raps[i]->rapidities, basis.states[k]) - v(k)) / scale);
        perm.add(d);
    }
    if (no_rap) perm.note = std::to_string(no_rap) + " state(s) without rapidities from the coupling ramp";
    checks.push_back(perm);

    if (M.variant != ModelVariant::XXZSpin) {
        Check par{"norm_parseval", 1e-8}, ed{"norm_ed", 1e-8};
        for (std::size_t i = 0; i < states.size(); ++i) {
            double n = norm_of(M, states[i]).real();
            Eigen::VectorXd v = overlap_vec(states[i]);
            par.add(rel_dev(n, v.squaredNorm()));
            if (ed_index[i] >= 0) {
                double p = eig.vectors.col(ed_index[i]).dot(v);
                ed.add(rel_dev(n, p * p));
            }
        }
        checks.push_back(par);
        checks.push_back(ed);
    } else {
        Check gauge_chk{"gauge_independence", 1e-9}, dual{"dual_relation", 1e-9};
        const double g2 = default_gauge(M, 2.9);
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (raps[i]) {
                for (const auto& b : basis.states) {
                    cplx a = overlap(M, *raps[i], b, gauge).value, c = overlap(M, *raps[i], b, g2).value;
                    gauge_chk.add(std::abs(a - c) / std::max(std::abs(c), 1e-300));
                }
            }
            auto d = dual_lambdas(M, states[i].lambdas);
            double dc = 0.0;
            auto hc = xxz_hole_charge_eigenvalues(M, d);
            for (std::size_t k = 0; k < hc.size(); ++k) dc = std::max(dc, std::abs(hc[k] - states[i].charges[k]));
            dual.add(std::max(xxz_hole_residual(M, N, d), dc));
        }
        checks.push_back(gauge_chk);
        checks.push_back(dual);
    }

    if (M.variant == ModelVariant::PipBoson) {
        Check ff{"formfactor_ed", 1e-7}, sum{"sum_rule", 1e-8};
        // sign-fixed ED vectors: aligned with the Bethe overlaps
        auto aligned = [&](const SectorBasis& B, const Eigenpairs& E, const BetheSolution& s, int col) {
            Eigen::VectorXd v(B.size());
            for (int k = 0; k < B.size(); ++k) v(k) = overlap(M, s, B.states[k]).real();
            Eigen::VectorXd e = E.vectors.col(col);
            return e.dot(v) < 0 ? Eigen::VectorXd(-e) : e;
        };
        std::vector<Eigen::VectorXd> eN(states.size());
        std::vector<double> nN(states.size());
        bool have_ed = true;
        for (std::size_t i = 0; i < states.size(); ++i) {
            nN[i] = norm_pip(M, states[i]).real();
            if (ed_index[i] < 0) have_ed = false;
            else eN[i] = aligned(basis, eig, states[i], ed_index[i]);
        }
        for (std::size_t i = 0; i < states.size(); ++i) {
            auto f = ff_number_pip(M, states[i], states[i]);
            double t = f.boson;
            for (double z : f.sz) t += z;
            sum.add(std::abs(t / nN[i] - (N - M.spin_sum())));
        }
        if (have_ed) {
            std::vector<Eigen::MatrixXd> sz;
            for (int i = 0; i < M.m(); ++i) sz.push_back(build_operator(basis, {OpKind::Sz, i}));
            Eigen::MatrixXd nb = build_operator(basis, {OpKind::BosonNumber, -1});
            for (std::size_t a = 0; a < states.size(); ++a) {
                for (std::size_t b = 0; b < states.size(); ++b) {
                    auto f = ff_number_pip(M, states[a], states[b]);
                    for (int i = 0; i < M.m(); ++i)
                        ff.add(std::abs(normalized_element(f.sz[i], nN[a], nN[b]) - eN[a].dot(sz[i] * eN[b])));
                    ff.add(std::abs(normalized_element(f.boson, nN[a], nN[b]) - eN[a].dot(nb * eN[b])));
                }
            }
            if (N >= 1) {
                auto lower = enumerate_states(M, N - 1, cfg);
                auto B1 = build_sector_basis(M, N - 1);
                auto E1 = diagonalize(B1);
                std::vector<std::vector<double>> rows;
                for (const auto& s : lower) rows.push_back(s.charges);
                auto m1 = match_spectrum(E1, rows);
                Eigen::MatrixXd bd = build_operator(B1, basis, {OpKind::BosonCreate, -1});
                std::vector<Eigen::MatrixXd> sp;
                for (int k = 0; k < M.m(); ++k) sp.push_back(build_operator(B1, basis, {OpKind::Raise, k}));
                for (std::size_t c = 0; c < lower.size(); ++c) {
                    double nc = norm_pip(M, lower[c]).real();
                    Eigen::VectorXd ec = aligned(B1, E1, lower[c], m1.assignment[c]);
                    for (std::size_t a = 0; a < states.size(); ++a) {
                        ff.add(std::abs(normalized_element(ff_boson_pip(M, states[a], lower[c]).real(), nN[a], nc) -
                                        eN[a].dot(bd * ec)));
                        for (int k = 0; k < M.m(); ++k)
                            ff.add(std::abs(normalized_element(ff_raise_pip(M, states[a], lower[c], k).real(), nN[a], nc) -
                                            eN[a].dot(sp[k] * ec)));
                    }
                }
            }
        } else {
            ff.note = "spectrum did not match ED";
            ff.skipped = false;
            ff.deviation = INFINITY;
        }
        checks.push_back(ff);
        checks.push_back(sum);
    }

    bool ok = true;
    ojson arr = ojson::array();
    for (const auto& c : checks) {
        ok = ok && !c.failed();
        arr.push_back(c.json());
    }
    ojson j;
    j["model"] = variant_name(M.variant);
    j["N"] = N;
    j["sector_dimension"] = basis.size();
    j["checks"] = arr;
    j["pass"] = ok;
    emit(o, dump_json(j) + "\n");
    return ok ? kOk : kNumericalFailure;
}

int run_bench(const Options& o) {
    const int N = o.n.value_or(2);
    if (o.max_m < 2) throw Error(ErrorCode::InvalidInput, "--max-m must be at least 2");
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%4s %3s %6s %14s %16s %12s\n", "m", "N", "dim", "enumerate_ms", "determinant_ms",
                  "ed_ms");
    os << line;
    for (int m = 2; m <= o.max_m; ++m) {
        std::vector<double> lev;
        for (int i = 0; i < m; ++i) lev.push_back(2.0 + i);
        ModelSpec model = model_dicke(1.0, lev, -0.1);
        if (!o.model_file.empty()) {
            // the model file supplies the variant and couplings; levels are regenerated
            auto f = model_from_json(read_file(o.model_file)).model;
            f.levels = lev;
            if (f.variant == ModelVariant::PipBoson)
                for (double& e : f.levels) e -= 1.0;
            f.spins.assign(m, 0.5);
            model = f;
        }
        if (model.variant == ModelVariant::XXZSpin)
            throw Error(ErrorCode::WrongVariant, "bench compares norms, available for dicke and pip models");
        auto t0 = clock::now();
        auto states = enumerate_states(model, N, config_of(o));
        auto t1 = clock::now();
        auto basis = build_sector_basis(model, N);
        double sink = 0.0;
        for (const auto& s : states) {
            sink += norm_of(model, s).real();
            for (const auto& b : basis.states) sink += overlap(model, s, b).real();
        }
        auto t2 = clock::now();
        auto eig = diagonalize(basis);
        sink += eig.values.sum();
        auto t3 = clock::now();
        std::snprintf(line, sizeof line, "%4d %3d %6d %14.3f %16.3f %12.3f\n", m, N, basis.size(), ms(t0, t1),
                      ms(t1, t2), ms(t2, t3));
        os << line;
        if (!std::isfinite(sink)) throw Error(ErrorCode::NoConvergence, "non-finite benchmark result");
    }
    emit(o, os.str());
    return kOk;
}

}  // namespace rgbethe::cli
