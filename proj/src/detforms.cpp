#include "rgbethe/detforms.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "rgbethe/errors.hpp"

namespace rgbethe {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

const char* formula_name(FormulaId id) {
    switch (id) {
        case FormulaId::OverlapXXZ: return "overlap_xxz_spin";
        case FormulaId::OverlapDicke: return "overlap_dicke";
        case FormulaId::OverlapPip: return "overlap_pip";
        case FormulaId::Permanent: return "permanent";
        case FormulaId::NormDicke: return "norm_dicke";
        case FormulaId::NormPip: return "norm_pip";
        case FormulaId::FFRaisePip: return "ff_raise_pip";
        case FormulaId::FFBosonPip: return "ff_boson_pip";
        case FormulaId::FFNumberPipDiagonal: return "ff_number_pip_diagonal";
        case FormulaId::FFNumberPipOffDiagonal: return "ff_number_pip_offdiagonal";
    }
    return "?";
}

namespace {

struct Det {
    double value = 1.0;
    double rcond = 1.0;
    double hadamard = 1.0;  // product of row norms, the natural scale of |det|
};

template <class M>
auto lu_det(const M& A) {
    using S = typename M::Scalar;
    struct R {
        S value;
        double rcond;
        double hadamard;
    } r{S(1.0), 1.0, 1.0};
    if (A.rows() == 0) return r;
    Eigen::PartialPivLU<M> lu(A);
    r.value = lu.determinant();
    r.rcond = lu.rcond();
    for (Eigen::Index i = 0; i < A.rows(); ++i) r.hadamard *= std::max(A.row(i).norm(), 1e-300);
    return r;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void require_half(const ModelSpec& model) {
    if (!model.all_spins_half())
        throw Error(ErrorCode::SpinNotHalf, "determinant formulas require spins 1/2");
}

void check_variant(const ModelSpec& model, ModelVariant v) {
    if (model.variant != v)
        throw Error(ErrorCode::WrongVariant, std::string("expected a ") + variant_name(v) + " model");
}

void check_solution(const ModelSpec& model, const BetheSolution& s) {
    if (s.model.variant != model.variant || s.model.levels != model.levels ||
        static_cast<int>(s.lambdas.size()) != model.m())
        throw Error(ErrorCode::SectorMismatch, "solution belongs to a different model");
}

void check_basis(const ModelSpec& model, const BetheSolution& s, const BasisState& b) {
    if (static_cast<int>(b.occupations.size()) != model.m())
        throw Error(ErrorCode::SectorMismatch, "basis state has the wrong number of levels");
    for (int o : b.occupations)
        if (o < 0 || o > 1) throw Error(ErrorCode::SectorMismatch, "basis occupations must be 0/1");
    if (b.boson_count < 0 || b.excitations() != s.N)
        throw Error(ErrorCode::SectorMismatch, "basis state is not in the solution's sector");
}

std::vector<int> occupied_levels(const BasisState& b) {
    std::vector<int> occ;
    for (int i = 0; i < static_cast<int>(b.occupations.size()); ++i)
        if (b.occupations[i]) occ.push_back(i);
    return occ;
}

// Off-diagonal block O_ij = sqrt(eps_i eps_j)/(eps_i - eps_j) for the pip matrices.
double pip_off(const ModelSpec& model, int i, int j) {
    double a = model.levels[i], b = model.levels[j];
    return std::sqrt(a * b) / (a - b);
}

// base_i = -1/2 sum_{j!=i} Z_ij - eta0^2/eps_i + kappa - 1/2
std::vector<double> pip_base(const ModelSpec& model) {
    std::vector<double> base(model.m());
    for (int i = 0; i < model.m(); ++i) {
        double zs = 0.0;
        for (int j = 0; j < model.m(); ++j)
            if (j != i) zs += model.Zlev(i, j);
        base[i] = -0.5 * zs - model.eta0_sq / model.levels[i] + model.kappa - 0.5;
    }
    return base;
}

MatrixXd pip_matrix(const ModelSpec& model, const std::vector<double>& diag) {
    const int m = model.m();
    MatrixXd J(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) J(i, j) = i == j ? diag[i] : pip_off(model, i, j);
    return J;
}

// J^dual(alpha)_ii = 1/2 Lambda_i + base_i + N/2
template <class D>
void check_dual(const D& d) {
    if (!(std::abs(d.value) > 1e-13 * d.hadamard))
        throw Error(ErrorCode::SingularDual, "dual determinant vanishes to working precision");
}

auto pip_dual(const ModelSpec& model, const BetheSolution& s, const std::vector<double>& base) {
    std::vector<double> d(model.m());
    for (int i = 0; i < model.m(); ++i) d[i] = 0.5 * s.lambdas[i] + base[i] + 0.5 * s.N;
    auto r = lu_det(pip_matrix(model, d));
    check_dual(r);
    return r;
}

bool same_lambdas(const BetheSolution& a, const BetheSolution& b) {
    for (std::size_t i = 0; i < a.lambdas.size(); ++i)
        if (std::abs(a.lambdas[i] - b.lambdas[i]) > 1e-9 * (1.0 + std::abs(a.lambdas[i]))) return false;
    return true;
}

}  // namespace

DeterminantReport overlap_xxz_spin(const ModelSpec& model, const BetheSolution& solution,
                                   const std::vector<int>& occupied, double er) {
    check_variant(model, ModelVariant::XXZSpin);
    require_half(model);
    check_solution(model, solution);
    const int n = static_cast<int>(occupied.size());
    if (n != solution.N) throw Error(ErrorCode::SectorMismatch, "occupied set size differs from N");
    auto collide = [&](cplx v) { return std::abs(v - er) <= 1e-12 * std::max({1.0, std::abs(v), std::abs(er)}); };
    for (double e : model.levels)
        if (collide(e)) throw Error(ErrorCode::GaugeCollision, "gauge equals a level");
    if (solution.rapidities)
        for (const cplx& x : *solution.rapidities)
            if (collide(x)) throw Error(ErrorCode::GaugeCollision, "gauge equals a rapidity");
    const Realization r = model.realization;
    MatrixXcd J(n, n);
    cplx pref = 1.0;
    for (int a = 0; a < n; ++a) {
        int ia = occupied[a];
        double d = solution.lambdas[ia];
        for (int c = 0; c < n; ++c)
            if (c != a) d -= model.Zlev(ia, occupied[c]);
        d += kernel_Z(r, er, model.levels[ia]).real();
        for (int b = 0; b < n; ++b) J(a, b) = a == b ? cplx(d) : cplx(model.Xlev(ia, occupied[b]));
        pref /= kernel_X(r, er, model.levels[ia]);
    }
    if (solution.rapidities)
        for (const cplx& x : *solution.rapidities) pref *= kernel_X(r, er, x);
    auto det = lu_det(J);
    DeterminantReport rep;
    rep.value = pref * det.value;
    rep.rows = rep.cols = n;
    rep.conditioning = det.rcond;
    rep.formula = FormulaId::OverlapXXZ;
    return rep;
}

DeterminantReport overlap_dicke(const ModelSpec& model, const BetheSolution& solution, const BasisState& basis) {
    check_variant(model, ModelVariant::Dicke);
    require_half(model);
    check_solution(model, solution);
    check_basis(model, solution, basis);
    auto occ = occupied_levels(basis);
    const int n = static_cast<int>(occ.size());
    MatrixXd J(n, n);
    for (int a = 0; a < n; ++a) {
        double ea = model.levels[occ[a]];
        double d = solution.lambdas[occ[a]];
        for (int c = 0; c < n; ++c)
            if (c != a) d -= 1.0 / (ea - model.levels[occ[c]]);
        for (int b = 0; b < n; ++b) J(a, b) = a == b ? d : 1.0 / (ea - model.levels[occ[b]]);
    }
    auto det = lu_det(J);
    DeterminantReport rep;
    rep.value = std::sqrt(factorial(basis.boson_count)) * std::pow(-model.coupling, n) * det.value;
    rep.rows = rep.cols = n;
    rep.conditioning = det.rcond;
    rep.formula = FormulaId::OverlapDicke;
    return rep;
}

DeterminantReport overlap_pip(const ModelSpec& model, const BetheSolution& solution, const BasisState& basis) {
    check_variant(model, ModelVariant::PipBoson);
    require_half(model);
    check_solution(model, solution);
    check_basis(model, solution, basis);
    auto occ = occupied_levels(basis);
    const int n = static_cast<int>(occ.size());
    const int N0 = basis.boson_count;
    MatrixXd J(n, n);
    double sq = 1.0;
    for (int a = 0; a < n; ++a) {
        int ia = occ[a];
        sq *= model.levels[ia];
        double d = 0.5 * solution.lambdas[ia] - 0.5 * (N0 + 1);
        for (int c = 0; c < n; ++c)
            if (c != a) d -= 0.5 * model.Zlev(ia, occ[c]);
        for (int b = 0; b < n; ++b) J(a, b) = a == b ? d : pip_off(model, ia, occ[b]);
    }
    auto det = lu_det(J);
    DeterminantReport rep;
    rep.value = std::sqrt(factorial(N0)) * std::sqrt(sq) / std::pow(-std::sqrt(model.eta0_sq), n) * det.value;
    rep.rows = rep.cols = n;
    rep.conditioning = det.rcond;
    rep.formula = FormulaId::OverlapPip;
    return rep;
}

DeterminantReport overlap(const ModelSpec& model, const BetheSolution& solution, const BasisState& basis,
                          double gauge_eps_r) {
    switch (model.variant) {
        case ModelVariant::Dicke: return overlap_dicke(model, solution, basis);
        case ModelVariant::PipBoson: return overlap_pip(model, solution, basis);
        case ModelVariant::XXZSpin: {
            if (basis.boson_count != 0) throw Error(ErrorCode::SectorMismatch, "XXZ basis states carry no bosons");
            check_basis(model, solution, basis);
            return overlap_xxz_spin(model, solution, occupied_levels(basis), gauge_eps_r);
        }
    }
    throw Error(ErrorCode::WrongVariant, "unknown variant");
}

cplx permanent_expansion(const ModelSpec& model, const std::vector<cplx>& x, const BasisState& basis) {
    const int n = static_cast<int>(x.size());
    if (n > 12) throw Error(ErrorCode::TooLarge, "permanent expansion limited to N <= 12");
    if (static_cast<int>(basis.occupations.size()) != model.m() || basis.excitations() != n)
        throw Error(ErrorCode::SectorMismatch, "basis state is not in the rapidities' sector");
    if (!model.has_boson() && basis.boson_count != 0)
        throw Error(ErrorCode::SectorMismatch, "XXZ basis states carry no bosons");
    // columns: bosonic ones first, then each level repeated by its occupation
    MatrixXcd C(n, n);
    int col = 0;
    double weight = std::sqrt(factorial(basis.boson_count)) / factorial(basis.boson_count);
    for (int k = 0; k < basis.boson_count; ++k, ++col)
        for (int a = 0; a < n; ++a) C(a, col) = 1.0;
    for (int i = 0; i < model.m(); ++i) {
        int ni = basis.occupations[i];
        if (ni == 0) continue;
        int cap = static_cast<int>(std::lround(2.0 * model.spins[i]));
        if (ni > cap) throw Error(ErrorCode::SectorMismatch, "occupation exceeds 2s");
        weight *= std::sqrt(factorial(ni) * factorial(cap) / factorial(cap - ni)) / factorial(ni);
        double e = model.levels[i];
        for (int r = 0; r < ni; ++r, ++col)
            for (int a = 0; a < n; ++a) {
                switch (model.variant) {
                    case ModelVariant::Dicke: C(a, col) = -model.coupling / (e - x[a]); break;
                    case ModelVariant::PipBoson:
                        C(a, col) = -std::sqrt(e) * x[a] / ((e - x[a]) * std::sqrt(model.eta0_sq));
                        break;
                    case ModelVariant::XXZSpin: C(a, col) = kernel_X(model.realization, e, x[a]); break;
                }
            }
    }
    if (n == 0) return weight;
    // Ryser with Gray-code subset updates
    cplx total = 0.0;
    std::vector<cplx> rowsum(n, 0.0);
    unsigned long gray = 0;
    for (unsigned long k = 1; k < (1ul << n); ++k) {
        unsigned long g = k ^ (k >> 1);
        unsigned long diff = g ^ gray;
        int j = __builtin_ctzl(diff);
        double sgn = (g & diff) ? 1.0 : -1.0;
        for (int a = 0; a < n; ++a) rowsum[a] += sgn * C(a, j);
        gray = g;
        cplx prod = 1.0;
        for (int a = 0; a < n; ++a) prod *= rowsum[a];
        int bits = __builtin_popcountl(g);
        total += ((n - bits) % 2 ? -1.0 : 1.0) * prod;
    }
    return weight * total;
}

DeterminantReport norm_dicke(const ModelSpec& model, const BetheSolution& solution) {
    check_variant(model, ModelVariant::Dicke);
    require_half(model);
    check_solution(model, solution);
    const int m = model.m();
    const double G2 = model.coupling * model.coupling;
    MatrixXd Jt(m, m), Jd(m, m);
    for (int i = 0; i < m; ++i) {
        double c = (model.levels[i] - model.eps0) / G2;
        for (int k = 0; k < m; ++k)
            if (k != i) c -= 1.0 / (model.levels[i] - model.levels[k]);
        for (int j = 0; j < m; ++j) {
            double off = i == j ? 0.0 : 1.0 / (model.levels[i] - model.levels[j]);
            Jt(i, j) = i == j ? 2.0 * solution.lambdas[i] + c : off;
            Jd(i, j) = i == j ? solution.lambdas[i] + c : off;
        }
    }
    auto dt = lu_det(Jt);
    auto dd = lu_det(Jd);
    check_dual(dd);
    DeterminantReport rep;
    rep.value = factorial(solution.N) * dt.value / dd.value;
    rep.rows = rep.cols = m;
    rep.conditioning = std::min(dt.rcond, dd.rcond);
    rep.formula = FormulaId::NormDicke;
    return rep;
}

DeterminantReport norm_pip(const ModelSpec& model, const BetheSolution& solution) {
    check_variant(model, ModelVariant::PipBoson);
    require_half(model);
    check_solution(model, solution);
    const int m = model.m();
    auto base = pip_base(model);
    std::vector<double> dt(m);
    for (int i = 0; i < m; ++i) dt[i] = solution.lambdas[i] + base[i];
    auto tot = lu_det(pip_matrix(model, dt));
    auto dual = pip_dual(model, solution, base);
    DeterminantReport rep;
    rep.value = factorial(solution.N) * tot.value / dual.value;
    rep.rows = rep.cols = m;
    rep.conditioning = std::min(tot.rcond, dual.rcond);
    rep.formula = FormulaId::NormPip;
    return rep;
}

namespace {

void check_pair(const ModelSpec& model, const BetheSolution& a, const BetheSolution& b, int dn) {
    check_variant(model, ModelVariant::PipBoson);
    require_half(model);
    check_solution(model, a);
    check_solution(model, b);
    if (a.model.eta0_sq != b.model.eta0_sq || a.model.kappa != b.model.kappa || a.model.levels != b.model.levels)
        throw Error(ErrorCode::SectorMismatch, "solutions come from different models");
    if (a.N != b.N + dn) throw Error(ErrorCode::SectorMismatch, "solutions are not in the required sectors");
}

}  // namespace

DeterminantReport ff_raise_pip(const ModelSpec& model, const BetheSolution& sol_N, const BetheSolution& sol_Nm1,
                               int k) {
    check_pair(model, sol_N, sol_Nm1, 1);
    const int m = model.m();
    if (k < 0 || k >= m) throw Error(ErrorCode::DimensionMismatch, "level index out of range");
    auto base = pip_base(model);
    MatrixXd Jk(m - 1, m - 1);
    for (int i = 0, r = 0; i < m; ++i) {
        if (i == k) continue;
        for (int j = 0, c = 0; j < m; ++j) {
            if (j == k) continue;
            Jk(r, c) = i == j ? 0.5 * (sol_N.lambdas[i] + sol_Nm1.lambdas[i]) + base[i] + 0.5 * model.Zlev(i, k)
                              : pip_off(model, i, j);
            ++c;
        }
        ++r;
    }
    auto num = lu_det(Jk);
    auto dual = pip_dual(model, sol_N, base);
    DeterminantReport rep;
    rep.value = -factorial(sol_N.N) * std::sqrt(model.eta0_sq / model.levels[k]) * num.value / dual.value;
    rep.rows = rep.cols = m - 1;
    rep.conditioning = std::min(num.rcond, dual.rcond);
    rep.formula = FormulaId::FFRaisePip;
    return rep;
}

DeterminantReport ff_boson_pip(const ModelSpec& model, const BetheSolution& sol_N, const BetheSolution& sol_Nm1) {
    check_pair(model, sol_N, sol_Nm1, 1);
    const int m = model.m();
    auto base = pip_base(model);
    std::vector<double> d(m);
    for (int i = 0; i < m; ++i) d[i] = 0.5 * (sol_N.lambdas[i] + sol_Nm1.lambdas[i]) + base[i] + 0.5;
    auto num = lu_det(pip_matrix(model, d));
    auto dual = pip_dual(model, sol_N, base);
    DeterminantReport rep;
    rep.value = factorial(sol_N.N) * num.value / dual.value;
    rep.rows = rep.cols = m;
    rep.conditioning = std::min(num.rcond, dual.rcond);
    rep.formula = FormulaId::FFBosonPip;
    return rep;
}

NumberFormFactors ff_number_pip(const ModelSpec& model, const BetheSolution& sol_a, const BetheSolution& sol_b) {
    check_pair(model, sol_a, sol_b, 0);
    const int m = model.m(), N = sol_a.N;
    NumberFormFactors out;
    out.sz.assign(m, 0.0);
    if (same_lambdas(sol_a, sol_b)) {
        // Hellmann-Feynman: normalized <S_i^0> = 1/2(-1 - dLambda_i/dkappa)
        out.diagonal = true;
        auto nrm = norm_pip(model, sol_a);
        auto dk = lambda_kappa_derivative(model, sol_a);
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double v = 0.5 * (-1.0 - dk[i]);
            total += v + model.spins[i];
            out.sz[i] = v * nrm.real();
        }
        out.boson = (N - total) * nrm.real();
        out.conditioning = nrm.conditioning;
        return out;
    }
    // bra a (mu), ket b (alpha): derivative taken on the ket
    auto base = pip_base(model);
    auto dk = lambda_kappa_derivative(model, sol_b);
    MatrixXd Jt(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            Jt(i, j) = i == j ? 0.5 * (sol_a.lambdas[i] + sol_b.lambdas[i]) + base[i] : pip_off(model, i, j);
    auto dual = pip_dual(model, sol_a, base);
    double sum = 0.0, cond = dual.rcond;
    for (int k = 0; k < m; ++k) {
        MatrixXd minor(m - 1, m - 1);
        for (int i = 0, r = 0; i < m; ++i) {
            if (i == k) continue;
            for (int j = 0, c = 0; j < m; ++j) {
                if (j == k) continue;
                minor(r, c++) = Jt(i, j);
            }
            ++r;
        }
        auto d = lu_det(minor);
        cond = std::min(cond, d.rcond);
        sum += dk[k] * d.value;
    }
    double common = 0.5 * factorial(N) * sum / dual.value;
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        out.sz[i] = 0.5 * (sol_a.lambdas[i] - sol_b.lambdas[i]) * common;
        total += out.sz[i];
    }
    out.boson = -total;
    out.conditioning = cond;
    return out;
}

double normalized_element(double value, double norm_bra, double norm_ket) {
    return value / std::sqrt(norm_bra * norm_ket);
}

}  // namespace rgbethe
