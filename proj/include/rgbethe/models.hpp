#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rgbethe/kernels.hpp"

namespace rgbethe {

enum class ModelVariant { XXZSpin, Dicke, PipBoson };

const char* variant_name(ModelVariant v);

struct ModelSpec {
    ModelVariant variant = ModelVariant::Dicke;
    std::vector<double> levels;
    std::vector<double> spins;
    double coupling = 0.0;  // g (XXZ) or G (Dicke); unused for PipBoson
    // Dicke boson
    double eps0 = 0.0;
    // PipBoson boson
    double eta0_sq = 0.0;
    double kappa = 0.0;
    // XXZ realization (Dicke is trig-derived, PipBoson hyperbolic)
    Realization realization = Realization::Trigonometric;

    int m() const { return static_cast<int>(levels.size()); }
    bool has_boson() const { return variant != ModelVariant::XXZSpin; }
    bool all_spins_half() const;
    double spin_sum() const;
    // max excitations carried by the spins
    int spin_capacity() const;
    // Z_ij between levels in the model's realization (pip: hyperbolic, XXZ: as configured)
    double Zlev(int i, int j) const;
    double Xlev(int i, int j) const;
    GaudinKernel kernel() const;
};

ModelSpec model_dicke(double eps0, std::vector<double> levels, double G,
                      std::vector<double> spins = {});
ModelSpec model_pip(double eta0_sq, double kappa, std::vector<double> levels,
                    std::vector<double> spins = {});
ModelSpec model_xxz(Realization realization, std::vector<double> levels, double g,
                    std::vector<double> spins = {});

struct BasisState {
    int boson_count = 0;
    std::vector<int> occupations;

    int excitations() const;
    auto operator<=>(const BasisState&) const = default;
};

std::size_t sector_dimension(const ModelSpec& model, int N);

// Conserved-charge eigenvalues r_i from Lambda variables.  For PipBoson the
// Lambda_0 value is implied by 2 Lambda_0 = sum Lambda_i + 2 kappa N.
std::vector<double> charge_eigenvalues(const ModelSpec& model, const std::vector<double>& lambdas, int N);

// XXZ particle form r_i = s_i(-1 - g Lambda_i + g sum_k Z_ik s_k).
std::vector<double> xxz_charge_eigenvalues(const ModelSpec& model, const std::vector<double>& lambdas);
// XXZ hole form on dual variables Lambda' = Lambda + 2/g.
std::vector<double> xxz_hole_charge_eigenvalues(const ModelSpec& model,
                                                const std::vector<double>& dual_lambdas);

double pip_lambda0(const ModelSpec& model, const std::vector<double>& lambdas, int N);

// Model file I/O (CLI schema).  N is returned when present.
struct ModelFile {
    ModelSpec model;
    std::optional<int> N;
};
ModelFile model_from_json(const std::string& text);
std::string model_to_json(const ModelSpec& model, std::optional<int> N = std::nullopt);

}  // namespace rgbethe
