#include "rgbethe/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rgbethe/errors.hpp"
#include "rgbethe/jsonio.hpp"

namespace rgbethe {

const char* variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::XXZSpin: return "xxz";
        case ModelVariant::Dicke: return "dicke";
        case ModelVariant::PipBoson: return "pip";
    }
    return "?";
}

bool ModelSpec::all_spins_half() const {
    return std::all_of(spins.begin(), spins.end(), [](double s) { return s == 0.5; });
}

double ModelSpec::spin_sum() const {
    double t = 0.0;
    for (double s : spins) t += s;
    return t;
}

int ModelSpec::spin_capacity() const {
    int c = 0;
    for (double s : spins) c += static_cast<int>(std::lround(2.0 * s));
    return c;
}

double ModelSpec::Zlev(int i, int j) const {
    double a = levels[i], b = levels[j];
    switch (variant) {
        case ModelVariant::PipBoson: return (a + b) / (a - b);
        case ModelVariant::Dicke: return 1.0 / (a - b);  // contracted kernel
        case ModelVariant::XXZSpin: return kernel_Z(realization, a, b).real();
    }
    return 0.0;
}

double ModelSpec::Xlev(int i, int j) const {
    double a = levels[i], b = levels[j];
    switch (variant) {
        case ModelVariant::PipBoson: return 2.0 * std::sqrt(a * b) / (a - b);
        case ModelVariant::Dicke: return 1.0 / (a - b);
        case ModelVariant::XXZSpin: return kernel_X(realization, a, b).real();
    }
    return 0.0;
}

GaudinKernel ModelSpec::kernel() const {
    Realization r = variant == ModelVariant::PipBoson ? Realization::Hyperbolic
                    : variant == ModelVariant::Dicke  ? Realization::Trigonometric
                                                      : realization;
    return kernel_build(r, levels);
}

namespace {

std::vector<double> default_spins(std::vector<double> spins, std::size_t m) {
    if (spins.empty()) return std::vector<double>(m, 0.5);
    if (spins.size() != m) throw Error(ErrorCode::DimensionMismatch, "spins and levels differ in length");
    for (double s : spins) {
        double twice = 2.0 * s;
        if (!(s > 0.0) || std::abs(twice - std::round(twice)) > 1e-12)
            throw Error(ErrorCode::InvalidInput, "spins must be positive half-integers");
    }
    return spins;
}

void check_levels_distinct(const std::vector<double>& levels) {
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            double scale = std::max({1.0, std::abs(levels[i]), std::abs(levels[j])});
            if (std::abs(levels[i] - levels[j]) <= 1e-12 * scale)
                throw Error(ErrorCode::DuplicateLevel,
                            "levels " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
        }
}

}  // namespace

ModelSpec model_dicke(double eps0, std::vector<double> levels, double G, std::vector<double> spins) {
    check_levels_distinct(levels);
    for (double e : levels)
        if (std::abs(e - eps0) <= 1e-12 * std::max(1.0, std::abs(e)))
            throw Error(ErrorCode::DuplicateLevel, "a level equals eps0");
    if (G == 0.0) throw Error(ErrorCode::ZeroCoupling, "Dicke coupling G is zero");
    ModelSpec m;
    m.variant = ModelVariant::Dicke;
    m.spins = default_spins(std::move(spins), levels.size());
    m.levels = std::move(levels);
    m.coupling = G;
    m.eps0 = eps0;
    return m;
}

ModelSpec model_pip(double eta0_sq, double kappa, std::vector<double> levels, std::vector<double> spins) {
    if (!(eta0_sq > 0.0)) throw Error(ErrorCode::NonpositiveEta0, "eta0^2 must be positive");
    for (double e : levels)
        if (!(e > 0.0)) throw Error(ErrorCode::NonpositiveLevel, "pip levels must be positive");
    check_levels_distinct(levels);
    ModelSpec m;
    m.variant = ModelVariant::PipBoson;
    m.spins = default_spins(std::move(spins), levels.size());
    m.levels = std::move(levels);
    m.eta0_sq = eta0_sq;
    m.kappa = kappa;
    m.realization = Realization::Hyperbolic;
    return m;
}

ModelSpec model_xxz(Realization realization, std::vector<double> levels, double g, std::vector<double> spins) {
    check_levels_distinct(levels);
    if (realization == Realization::Hyperbolic)
        for (double e : levels)
            if (!(e > 0.0)) throw Error(ErrorCode::NonpositiveLevel, "hyperbolic levels must be positive");
    if (g == 0.0) throw Error(ErrorCode::ZeroCoupling, "XXZ coupling g is zero");
    ModelSpec m;
    m.variant = ModelVariant::XXZSpin;
    m.spins = default_spins(std::move(spins), levels.size());
    m.levels = std::move(levels);
    m.coupling = g;
    m.realization = realization;
    return m;
}

int BasisState::excitations() const {
    int n = boson_count;
    for (int o : occupations) n += o;
    return n;
}

std::size_t sector_dimension(const ModelSpec& model, int N) {
    if (N < 0) return 0;
    // ways[k] = number of spin configurations carrying k excitations
    std::vector<std::size_t> ways(1, 1);
    for (double s : model.spins) {
        int cap = static_cast<int>(std::lround(2.0 * s));
        std::vector<std::size_t> next(ways.size() + cap, 0);
        for (std::size_t k = 0; k < ways.size(); ++k)
            for (int o = 0; o <= cap; ++o) next[k + o] += ways[k];
        ways = std::move(next);
    }
    if (!model.has_boson()) return N < static_cast<int>(ways.size()) ? ways[N] : 0;
    std::size_t total = 0;
    for (int k = 0; k <= N && k < static_cast<int>(ways.size()); ++k) total += ways[k];
    return total;
}

double pip_lambda0(const ModelSpec& model, const std::vector<double>& lambdas, int N) {
    double s = 0.0;
    for (double l : lambdas) s += l;
    return 0.5 * s + model.kappa * N;
}

std::vector<double> xxz_charge_eigenvalues(const ModelSpec& model, const std::vector<double>& lambdas) {
    if (model.variant != ModelVariant::XXZSpin) throw Error(ErrorCode::WrongVariant, "XXZ model required");
    if (static_cast<int>(lambdas.size()) != model.m())
        throw Error(ErrorCode::DimensionMismatch, "one Lambda per level required");
    const double g = model.coupling;
    std::vector<double> r(model.m());
    for (int i = 0; i < model.m(); ++i) {
        double zs = 0.0;
        for (int k = 0; k < model.m(); ++k)
            if (k != i) zs += model.Zlev(i, k) * model.spins[k];
        r[i] = model.spins[i] * (-1.0 - g * lambdas[i] + g * zs);
    }
    return r;
}

std::vector<double> xxz_hole_charge_eigenvalues(const ModelSpec& model, const std::vector<double>& dual_lambdas) {
    if (model.variant != ModelVariant::XXZSpin) throw Error(ErrorCode::WrongVariant, "XXZ model required");
    if (static_cast<int>(dual_lambdas.size()) != model.m())
        throw Error(ErrorCode::DimensionMismatch, "one Lambda per level required");
    const double g = model.coupling;
    std::vector<double> r(model.m());
    for (int i = 0; i < model.m(); ++i) {
        double zs = 0.0;
        for (int k = 0; k < model.m(); ++k)
            if (k != i) zs += model.Zlev(i, k) * model.spins[k];
        r[i] = model.spins[i] * (1.0 - g * dual_lambdas[i] + g * zs);
    }
    return r;
}

std::vector<double> charge_eigenvalues(const ModelSpec& model, const std::vector<double>& lambdas, int N) {
    if (static_cast<int>(lambdas.size()) != model.m())
        throw Error(ErrorCode::DimensionMismatch, "one Lambda per level required");
    const int m = model.m();
    std::vector<double> r(m);
    switch (model.variant) {
        case ModelVariant::XXZSpin:
            return xxz_charge_eigenvalues(model, lambdas);
        case ModelVariant::Dicke: {
            const double G2 = model.coupling * model.coupling;
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int k = 0; k < m; ++k)
                    if (k != i) s += model.spins[k] / (model.levels[i] - model.levels[k]);
                r[i] = model.spins[i] * ((model.levels[i] - model.eps0) + 2.0 * G2 * lambdas[i] - 2.0 * G2 * s);
            }
            return r;
        }
        case ModelVariant::PipBoson: {
            (void)N;
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int k = 0; k < m; ++k)
                    if (k != i) s += model.spins[k] * model.Zlev(i, k);
                r[i] = model.spins[i] * (-model.kappa - lambdas[i] + model.eta0_sq / model.levels[i] + s);
            }
            return r;
        }
    }
    return r;
}

ModelFile model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "model file must be a JSON object");
    static const std::set<std::string> known = {"model", "levels", "spins", "coupling", "eps0",
                                                "eta0_sq", "kappa", "realization", "N"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw Error(ErrorCode::InvalidInput, "unknown key '" + it.key() + "'");

    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing key '") + key + "'");
        return j.at(key);
    };
    auto number = [&](const char* key) {
        const auto& v = need(key);
        if (!v.is_number()) throw Error(ErrorCode::InvalidInput, std::string("'") + key + "' must be a number");
        return v.get<double>();
    };
    auto numbers = [&](const char* key) {
        const auto& v = need(key);
        if (!v.is_array()) throw Error(ErrorCode::InvalidInput, std::string("'") + key + "' must be an array");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw Error(ErrorCode::InvalidInput, std::string("'") + key + "' entries must be numbers");
            out.push_back(e.get<double>());
        }
        return out;
    };

    const auto& kind = need("model");
    if (!kind.is_string()) throw Error(ErrorCode::InvalidInput, "'model' must be a string");
    std::string name = kind.get<std::string>();
    std::vector<double> levels = numbers("levels");
    std::vector<double> spins = j.contains("spins") ? numbers("spins") : std::vector<double>{};

    ModelFile out;
    if (name == "dicke") {
        for (const char* k : {"eta0_sq", "kappa", "realization"})
            if (j.contains(k)) throw Error(ErrorCode::InvalidInput, std::string("key '") + k + "' not valid for dicke");
        out.model = model_dicke(number("eps0"), levels, number("coupling"), spins);
    } else if (name == "pip") {
        for (const char* k : {"eps0", "realization"})
            if (j.contains(k)) throw Error(ErrorCode::InvalidInput, std::string("key '") + k + "' not valid for pip");
        out.model = model_pip(number("eta0_sq"), number("kappa"), levels, spins);
        if (j.contains("coupling")) out.model.coupling = number("coupling");
    } else if (name == "xxz") {
        for (const char* k : {"eps0", "eta0_sq", "kappa"})
            if (j.contains(k)) throw Error(ErrorCode::InvalidInput, std::string("key '") + k + "' not valid for xxz");
        const auto& r = need("realization");
        if (!r.is_string()) throw Error(ErrorCode::InvalidInput, "'realization' must be a string");
        std::string rs = r.get<std::string>();
        Realization real;
        if (rs == "trig") real = Realization::Trigonometric;
        else if (rs == "hyp") real = Realization::Hyperbolic;
        else throw Error(ErrorCode::InvalidInput, "realization must be 'trig' or 'hyp'");
        out.model = model_xxz(real, levels, number("coupling"), spins);
    } else {
        throw Error(ErrorCode::InvalidInput, "unknown model '" + name + "'");
    }
    if (j.contains("N")) {
        const auto& n = j.at("N");
        if (!n.is_number_integer() || n.get<long long>() < 0)
            throw Error(ErrorCode::InvalidInput, "'N' must be a nonnegative integer");
        out.N = static_cast<int>(n.get<long long>());
    }
    return out;
}

std::string model_to_json(const ModelSpec& model, std::optional<int> N) {
    ojson j;
    j["model"] = variant_name(model.variant);
    j["levels"] = model.levels;
    j["spins"] = model.spins;
    switch (model.variant) {
        case ModelVariant::Dicke:
            j["coupling"] = model.coupling;
            j["eps0"] = model.eps0;
            break;
        case ModelVariant::PipBoson:
            j["eta0_sq"] = model.eta0_sq;
            j["kappa"] = model.kappa;
            break;
        case ModelVariant::XXZSpin:
            j["coupling"] = model.coupling;
            j["realization"] = model.realization == Realization::Trigonometric ? "trig" : "hyp";
            break;
    }
    if (N) j["N"] = *N;
    return dump_json(j);
}

}  // namespace rgbethe
