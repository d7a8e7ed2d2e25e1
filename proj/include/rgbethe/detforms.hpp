#pragma once

#include <optional>
#include <vector>

#include "rgbethe/models.hpp"
#include "rgbethe/solver.hpp"

namespace rgbethe {

enum class FormulaId {
    OverlapXXZ,
    OverlapDicke,
    OverlapPip,
    Permanent,
    NormDicke,
    NormPip,
    FFRaisePip,
    FFBosonPip,
    FFNumberPipDiagonal,
    FFNumberPipOffDiagonal,
};

const char* formula_name(FormulaId id);

struct DeterminantReport {
    cplx value = 0.0;
    int rows = 0;
    int cols = 0;
    double conditioning = 1.0;  // reciprocal condition estimate (smallest over the matrices used)
    FormulaId formula = FormulaId::OverlapDicke;

    double real() const { return value.real(); }
};

// All overlaps are with normalized product basis states; Bethe states are the
// unnormalized products of the generalized creation operators.

// occupied: 0-based level indices, |occupied| = N.  Without rapidities the
// common factor prod_a X(eps_r, x_a) is omitted (relative mode).
DeterminantReport overlap_xxz_spin(const ModelSpec& model, const BetheSolution& solution,
                                   const std::vector<int>& occupied, double gauge_eps_r);
DeterminantReport overlap_dicke(const ModelSpec& model, const BetheSolution& solution, const BasisState& basis);
DeterminantReport overlap_pip(const ModelSpec& model, const BetheSolution& solution, const BasisState& basis);
// dispatch on the model variant (XXZ uses `gauge_eps_r`)
DeterminantReport overlap(const ModelSpec& model, const BetheSolution& solution, const BasisState& basis,
                          double gauge_eps_r = 0.0);

// Brute-force expansion coefficient of the Bethe state on a basis state, in
// the same normalization as the determinant overlaps.  Ryser formula, N <= 12.
cplx permanent_expansion(const ModelSpec& model, const std::vector<cplx>& rapidities, const BasisState& basis);

DeterminantReport norm_dicke(const ModelSpec& model, const BetheSolution& solution);
DeterminantReport norm_pip(const ModelSpec& model, const BetheSolution& solution);

// <sol_N| S_k^+ |sol_Nm1>, unnormalized.  Lowering elements are the same numbers
// with bra and ket exchanged (all quantities real).
DeterminantReport ff_raise_pip(const ModelSpec& model, const BetheSolution& sol_N, const BetheSolution& sol_Nm1,
                               int level_k);
// <sol_N| b^+ |sol_Nm1>, unnormalized.
DeterminantReport ff_boson_pip(const ModelSpec& model, const BetheSolution& sol_N, const BetheSolution& sol_Nm1);

struct NumberFormFactors {
    std::vector<double> sz;  // <a| S_i^0 |b>
    double boson = 0.0;      // <a| b^+b |b>
    bool diagonal = false;
    double conditioning = 1.0;
};

// <sol_a| S_i^0 |sol_b> and <sol_a| b^+b |sol_b>, unnormalized.
NumberFormFactors ff_number_pip(const ModelSpec& model, const BetheSolution& sol_a, const BetheSolution& sol_b);

// value / sqrt(norm_bra * norm_ket)
double normalized_element(double value, double norm_bra, double norm_ket);

}  // namespace rgbethe
