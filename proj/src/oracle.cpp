#include "rgbethe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "rgbethe/errors.hpp"

namespace rgbethe {

namespace {

using Terms = std::vector<std::pair<double, BasisState>>;

int cap_of(const ModelSpec& model, int i) { return static_cast<int>(std::lround(2.0 * model.spins[i])); }

// Elementary actions on a single product state.  Each returns false when the
// result vanishes.
bool raise(const ModelSpec& model, int i, double& c, BasisState& s) {
    int n = s.occupations[i], cap = cap_of(model, i);
    if (n >= cap) return false;
    c *= std::sqrt(static_cast<double>((cap - n) * (n + 1)));
    s.occupations[i] = n + 1;
    return true;
}

bool lower(const ModelSpec& model, int i, double& c, BasisState& s) {
    int n = s.occupations[i], cap = cap_of(model, i);
    if (n <= 0) return false;
    c *= std::sqrt(static_cast<double>(n * (cap - n + 1)));
    s.occupations[i] = n - 1;
    return true;
}

double sz(const ModelSpec& model, int i, const BasisState& s) { return s.occupations[i] - model.spins[i]; }

bool bcreate(double& c, BasisState& s) {
    c *= std::sqrt(static_cast<double>(s.boson_count + 1));
    ++s.boson_count;
    return true;
}

bool bannihilate(double& c, BasisState& s) {
    if (s.boson_count == 0) return false;
    c *= std::sqrt(static_cast<double>(s.boson_count));
    --s.boson_count;
    return true;
}

// S_a^+ S_b^- + S_a^- S_b^+ (a != b) with weight w
void flip_pair(const ModelSpec& model, int a, int b, double w, const BasisState& in, Terms& out) {
    {
        double c = w;
        BasisState s = in;
        if (lower(model, b, c, s) && raise(model, a, c, s)) out.emplace_back(c, s);
    }
    {
        double c = w;
        BasisState s = in;
        if (lower(model, a, c, s) && raise(model, b, c, s)) out.emplace_back(c, s);
    }
}

// S_i^+ b + S_i^- b^+ with weight w
void spin_boson(const ModelSpec& model, int i, double w, const BasisState& in, Terms& out) {
    {
        double c = w;
        BasisState s = in;
        if (bannihilate(c, s) && raise(model, i, c, s)) out.emplace_back(c, s);
    }
    {
        double c = w;
        BasisState s = in;
        if (lower(model, i, c, s) && bcreate(c, s)) out.emplace_back(c, s);
    }
}

void charge_terms(const ModelSpec& model, int i, const BasisState& in, Terms& out) {
    const int m = model.m();
    const double si = sz(model, i, in);
    switch (model.variant) {
        case ModelVariant::Dicke: {
            const double G = model.coupling, G2 = G * G;
            double diag = (model.eps0 - model.levels[i]) * si;
            for (int k = 0; k < m; ++k) {
                if (k == i) continue;
                double w = -2.0 * G2 / (model.levels[i] - model.levels[k]);
                diag += w * si * sz(model, k, in);
                flip_pair(model, i, k, 0.5 * w, in, out);
            }
            out.emplace_back(diag, in);
            spin_boson(model, i, -G, in, out);
            return;
        }
        case ModelVariant::PipBoson: {
            double diag = si * (model.kappa + in.boson_count - model.eta0_sq / model.levels[i]);
            for (int k = 0; k < m; ++k) {
                if (k == i) continue;
                double ei = model.levels[i], ek = model.levels[k];
                diag += model.Zlev(i, k) * si * sz(model, k, in);
                flip_pair(model, i, k, std::sqrt(ei * ek) / (ei - ek), in, out);
            }
            out.emplace_back(diag, in);
            spin_boson(model, i, std::sqrt(model.eta0_sq / model.levels[i]), in, out);
            return;
        }
        case ModelVariant::XXZSpin: {
            const double g = model.coupling;
            double diag = si;
            for (int k = 0; k < m; ++k) {
                if (k == i) continue;
                diag += g * model.Zlev(i, k) * si * sz(model, k, in);
                flip_pair(model, i, k, 0.5 * g * model.Xlev(i, k), in, out);
            }
            out.emplace_back(diag, in);
            return;
        }
    }
}

double number_value(const ModelSpec& model, const BasisState& s) {
    double n = s.boson_count;
    for (int k = 0; k < model.m(); ++k) n += sz(model, k, s) + model.spins[k];
    return n;
}

void operator_terms(const ModelSpec& model, OperatorId op, const BasisState& in, Terms& out) {
    const int m = model.m();
    auto need_level = [&] {
        if (op.level < 0 || op.level >= m)
            throw Error(ErrorCode::UnknownOperator, "operator level out of range");
    };
    auto need_boson = [&] {
        if (!model.has_boson()) throw Error(ErrorCode::UnknownOperator, "model has no boson mode");
    };
    switch (op.kind) {
        case OpKind::Identity: out.emplace_back(1.0, in); return;
        case OpKind::Charge: need_level(); charge_terms(model, op.level, in, out); return;
        case OpKind::Hamiltonian: {
            if (model.variant == ModelVariant::Dicke) {
                // eps0 * N - sum_i R_i
                Terms tmp;
                for (int i = 0; i < m; ++i) charge_terms(model, i, in, tmp);
                for (auto& t : tmp) out.emplace_back(-t.first, std::move(t.second));
                out.emplace_back(model.eps0 * number_value(model, in), in);
            } else {
                Terms tmp;
                for (int i = 0; i < m; ++i) {
                    tmp.clear();
                    charge_terms(model, i, in, tmp);
                    for (auto& t : tmp) out.emplace_back(model.levels[i] * t.first, std::move(t.second));
                }
            }
            return;
        }
        case OpKind::Raise: {
            need_level();
            double c = 1.0;
            BasisState s = in;
            if (raise(model, op.level, c, s)) out.emplace_back(c, s);
            return;
        }
        case OpKind::Lower: {
            need_level();
            double c = 1.0;
            BasisState s = in;
            if (lower(model, op.level, c, s)) out.emplace_back(c, s);
            return;
        }
        case OpKind::Sz: need_level(); out.emplace_back(sz(model, op.level, in), in); return;
        case OpKind::BosonCreate: {
            need_boson();
            double c = 1.0;
            BasisState s = in;
            bcreate(c, s);
            out.emplace_back(c, s);
            return;
        }
        case OpKind::BosonAnnihilate: {
            need_boson();
            double c = 1.0;
            BasisState s = in;
            if (bannihilate(c, s)) out.emplace_back(c, s);
            return;
        }
        case OpKind::BosonNumber: need_boson(); out.emplace_back(in.boson_count, in); return;
        case OpKind::Number: out.emplace_back(number_value(model, in), in); return;
    }
    throw Error(ErrorCode::UnknownOperator, "unhandled operator kind");
}

int sector_shift(OpKind k) {
    switch (k) {
        case OpKind::Raise:
        case OpKind::BosonCreate: return 1;
        case OpKind::Lower:
        case OpKind::BosonAnnihilate: return -1;
        default: return 0;
    }
}

}  // namespace

int SectorBasis::find(const BasisState& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
}

SectorBasis build_sector_basis(const ModelSpec& model, int N) {
    if (N < 0) throw Error(ErrorCode::InvalidInput, "N must be nonnegative");
    std::size_t dim = sector_dimension(model, N);
    if (dim > kOracleCap)
        throw Error(ErrorCode::TooLarge, "sector dimension " + std::to_string(dim) + " exceeds the oracle cap");
    SectorBasis b;
    b.model = model;
    b.N = N;
    const int m = model.m();
    std::vector<int> occ(m, 0);
    std::vector<std::vector<int>> configs;
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (i == m) {
            configs.push_back(occ);
            return;
        }
        for (int o = 0; o <= cap_of(model, i) && used + o <= N; ++o) {
            occ[i] = o;
            rec(i + 1, used + o);
        }
        occ[i] = 0;
    };
    rec(0, 0);
    for (auto& c : configs) {
        int k = 0;
        for (int o : c) k += o;
        if (!model.has_boson() && k != N) continue;
        b.states.push_back(BasisState{N - k, c});
    }
    std::sort(b.states.begin(), b.states.end(), [](const BasisState& a, const BasisState& c) {
        if (a.boson_count != c.boson_count) return a.boson_count > c.boson_count;
        return a.occupations > c.occupations;
    });
    for (int i = 0; i < b.size(); ++i) b.index.emplace(b.states[i], i);
    return b;
}

OperatorId parse_operator(const std::string& name) {
    auto level_of = [&](std::size_t prefix) {
        try {
            return std::stoi(name.substr(prefix)) - 1;
        } catch (...) {
            throw Error(ErrorCode::UnknownOperator, "bad operator '" + name + "'");
        }
    };
    if (name == "I") return {OpKind::Identity, -1};
    if (name == "H") return {OpKind::Hamiltonian, -1};
    if (name == "b+") return {OpKind::BosonCreate, -1};
    if (name == "b") return {OpKind::BosonAnnihilate, -1};
    if (name == "n_b") return {OpKind::BosonNumber, -1};
    if (name == "N") return {OpKind::Number, -1};
    if (name.rfind("R", 0) == 0) return {OpKind::Charge, level_of(1)};
    if (name.rfind("S+", 0) == 0) return {OpKind::Raise, level_of(2)};
    if (name.rfind("S-", 0) == 0) return {OpKind::Lower, level_of(2)};
    if (name.rfind("S0", 0) == 0) return {OpKind::Sz, level_of(2)};
    throw Error(ErrorCode::UnknownOperator, "unknown operator '" + name + "'");
}

Eigen::MatrixXd build_operator(const SectorBasis& basis, OperatorId op) {
    if (sector_shift(op.kind) != 0)
        throw Error(ErrorCode::UnknownOperator, "operator changes the sector; pass a target basis");
    return build_operator(basis, basis, op);
}

Eigen::MatrixXd build_operator(const SectorBasis& from, const SectorBasis& to, OperatorId op) {
    if (to.N != from.N + sector_shift(op.kind))
        throw Error(ErrorCode::SectorMismatch, "target basis is not the image sector of the operator");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(to.size(), from.size());
    Terms terms;
    for (int j = 0; j < from.size(); ++j) {
        terms.clear();
        operator_terms(from.model, op, from.states[j], terms);
        for (const auto& [c, s] : terms) {
            if (c == 0.0) continue;
            int i = to.find(s);
            if (i < 0) throw Error(ErrorCode::SectorMismatch, "operator leaves the sector");
            M(i, j) += c;
        }
    }
    return M;
}

Eigenpairs diagonalize(const SectorBasis& basis, OperatorId op) {
    const int dim = basis.size();
    const int m = basis.model.m();
    Eigen::MatrixXd H = build_operator(basis, op);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigensolverFailure, "operator diagonalization failed");

    std::vector<Eigen::MatrixXd> R(m);
    for (int i = 0; i < m; ++i) R[i] = build_operator(basis, {OpKind::Charge, i});
    std::mt19937 rng(20240611u);
    std::uniform_real_distribution<double> unif(1.0, 2.0);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < m; ++i) C += unif(rng) * R[i];

    Eigenpairs out;
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
    int start = 0;
    while (start < dim) {
        int end = start + 1;
        while (end < dim && out.values(end) - out.values(end - 1) <= 1e-9 * scale) ++end;
        if (end - start > 1) {
            Eigen::MatrixXd V = out.vectors.middleCols(start, end - start);
            Eigen::MatrixXd Cs = V.transpose() * C * V;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sub(0.5 * (Cs + Cs.transpose()));
            if (sub.info() != Eigen::Success)
                throw Error(ErrorCode::EigensolverFailure, "degenerate-block diagonalization failed");
            out.vectors.middleCols(start, end - start) = V * sub.eigenvectors();
        }
        start = end;
    }

    out.charges.resize(dim, m);
    for (int i = 0; i < m; ++i) {
        Eigen::MatrixXd D = out.vectors.transpose() * R[i] * out.vectors;
        out.charges.col(i) = D.diagonal();
        D.diagonal().setZero();
        double s = std::max(1.0, R[i].cwiseAbs().maxCoeff());
        out.max_charge_offdiag = std::max(out.max_charge_offdiag, D.cwiseAbs().maxCoeff() / s);
    }
    if (out.max_charge_offdiag > 1e-8)
        throw Error(ErrorCode::EigensolverFailure, "charges not simultaneously diagonal (off-diagonal " +
                                                       std::to_string(out.max_charge_offdiag) + ")");
    return out;
}

MatchReport compare_solution(const Eigenpairs& eig, const std::vector<double>& charges) {
    if (static_cast<int>(charges.size()) != eig.charges.cols())
        throw Error(ErrorCode::DimensionMismatch, "charge tuple length differs from the number of levels");
    MatchReport best;
    best.deviation = std::numeric_limits<double>::infinity();
    for (int n = 0; n < eig.charges.rows(); ++n) {
        double d = 0.0;
        for (int i = 0; i < eig.charges.cols(); ++i) d = std::max(d, std::abs(eig.charges(n, i) - charges[i]));
        if (d < best.deviation) best = {n, d};
    }
    if (!(best.deviation <= 1e-6))
        throw Error(ErrorCode::NoMatch, "nearest ED charge tuple deviates by " + std::to_string(best.deviation));
    return best;
}

SpectrumMatch match_spectrum(const Eigenpairs& eig, const std::vector<std::vector<double>>& charges) {
    SpectrumMatch out;
    std::vector<char> taken(eig.charges.rows(), 0);
    for (const auto& c : charges) {
        MatchReport r = compare_solution(eig, c);
        if (taken[r.index]) throw Error(ErrorCode::NoMatch, "two solutions map to ED state " + std::to_string(r.index));
        taken[r.index] = 1;
        out.assignment.push_back(r.index);
        out.max_deviation = std::max(out.max_deviation, r.deviation);
    }
    return out;
}

double matrix_element(const Eigen::VectorXd& bra, const Eigen::MatrixXd& op, const Eigen::VectorXd& ket) {
    if (bra.size() != op.rows() || ket.size() != op.cols())
        throw Error(ErrorCode::DimensionMismatch, "vector and operator dimensions differ");
    return bra.dot(op * ket);
}

}  // namespace rgbethe
