#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "rgbethe/models.hpp"

namespace rgbethe {

struct SectorBasis {
    ModelSpec model;
    int N = 0;
    std::vector<BasisState> states;
    std::map<BasisState, int> index;

    int size() const { return static_cast<int>(states.size()); }
    int find(const BasisState& s) const;
};

// Dense-oracle cap on the sector dimension.
inline constexpr std::size_t kOracleCap = 5000;

SectorBasis build_sector_basis(const ModelSpec& model, int N);

enum class OpKind {
    Identity,
    Charge,       // R_level
    Hamiltonian,  // model Hamiltonian built from the charges
    Raise,        // S_level^+
    Lower,        // S_level^-
    Sz,           // S_level^0
    BosonCreate,
    BosonAnnihilate,
    BosonNumber,
    Number,       // total excitation number b^+b + sum(S^0 + s)
};

struct OperatorId {
    OpKind kind = OpKind::Identity;
    int level = -1;
};

OperatorId parse_operator(const std::string& name);

// Sector-preserving operator as a square matrix.
Eigen::MatrixXd build_operator(const SectorBasis& basis, OperatorId op);
// Operator between sectors (rows: target basis, columns: source basis).
Eigen::MatrixXd build_operator(const SectorBasis& from, const SectorBasis& to, OperatorId op);

struct Eigenpairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // columns orthonormal
    Eigen::MatrixXd charges;  // row n: eigenvalues of R_1..R_m on vector n
    double max_charge_offdiag = 0.0;
};

Eigenpairs diagonalize(const SectorBasis& basis, OperatorId op = {OpKind::Hamiltonian, -1});

struct MatchReport {
    int index = -1;
    double deviation = 0.0;
};

MatchReport compare_solution(const Eigenpairs& eig, const std::vector<double>& charges);

// Bijective assignment of charge tuples to ED eigenvectors; returns the
// ED index per tuple and the worst deviation (throws NoMatch on failure).
struct SpectrumMatch {
    std::vector<int> assignment;
    double max_deviation = 0.0;
};
SpectrumMatch match_spectrum(const Eigenpairs& eig, const std::vector<std::vector<double>>& charges);

double matrix_element(const Eigen::VectorXd& bra, const Eigen::MatrixXd& op, const Eigen::VectorXd& ket);

}  // namespace rgbethe
