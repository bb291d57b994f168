#include "projcool/model.hpp"

#include "projcool/operators.hpp"

#include <cmath>
#include <random>

namespace projcool {

ModelSpec ModelSpec::model1a(int L, int R) {
    ModelSpec s;
    s.chains = 1;
    s.half_extent = L;
    s.interior_half_extent = R;
    s.potential = {{0, -1.0}};
    s.name = "model1a";
    return s;
}

ModelSpec ModelSpec::model1b(int L, int R) {
    ModelSpec s;
    s.chains = 1;
    s.half_extent = L;
    s.interior_half_extent = R;
    s.potential = {{0, -1.6}, {2, -1.5}, {3, -1.5}, {-2, -1.4}};
    s.name = "model1b";
    return s;
}

ModelSpec ModelSpec::model2(int L, int R) {
    ModelSpec s;
    s.chains = 2;
    s.half_extent = L;
    s.interior_half_extent = R;
    s.potential = {{0, -1.0}, {1, 0.2}, {2, -0.9}, {3, -0.9}, {-1, -0.3}};
    for (int n = -L; n <= L; ++n) s.coupling[{n, n}] = -0.2;
    s.name = "model2";
    return s;
}

std::optional<ModelSpec> ModelSpec::preset(std::string_view name, int L, int R) {
    if (name == "model1a") return model1a(L, R);
    if (name == "model1b") return model1b(L, R);
    if (name == "model2") return model2(L, R);
    return std::nullopt;
}

void ModelSpec::validate_lattice() const {
    if (chains != 1 && chains != 2)
        throw ConfigError("chains must be 1 or 2, got " + std::to_string(chains));
    if (half_extent < 0)
        throw ConfigError("half extent L must be nonnegative, got " + std::to_string(half_extent));
    if (!(kinetic_scale > 0.0))
        throw ConfigError("kinetic scale must be positive");
    if (kinetic_scale < 1.0 && !allow_sub_unit_kinetic_scale)
        throw ConfigError("kinetic scale < 1 must be explicitly flagged");
    if (chains == 1 && !coupling.empty())
        throw ConfigError("coupling map supplied for a one-chain model");
    if (interior_half_extent < 0)
        throw ConfigError("interior half extent R must be nonnegative");
    if (half_extent > 0 && interior_half_extent >= half_extent)
        throw ConfigError("interior half extent R must satisfy R < L");
    if (half_extent == 0 && interior_half_extent > 0)
        throw ConfigError("interior half extent R must satisfy R < L");
    for (const auto& [n, v] : potential)
        if (!std::isfinite(v)) throw ConfigError("non-finite potential entry");
    for (const auto& [nn, w] : coupling)
        if (!std::isfinite(w)) throw ConfigError("non-finite coupling entry");
}

void ModelSpec::validate() const {
    validate_lattice();
    if (interior_half_extent < 1)
        throw ConfigError("interior half extent R must satisfy 0 < R < L");
}

StateVector& StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize a zero state");
    amps /= n;
    return *this;
}

StateVector point_state(const ModelSpec& spec) {
    spec.validate_lattice();
    const SectorShape shape = spec.shape();
    StateVector psi{shape, Vector::Zero(shape.dim())};
    if (spec.chains == 1)
        psi.amps[shape.index_of(0)] = 1.0;
    else
        psi.amps[shape.index_of(0, 0)] = 1.0;
    return psi;
}

StateVector spread_state(const ModelSpec& spec) {
    spec.validate_lattice();
    const SectorShape shape = spec.shape();
    StateVector psi{shape, Vector::Zero(shape.dim())};
    if (spec.chains == 1) {
        // 0.75|[0]> + 0.43(|[1]>+|[-1]>) + 0.26(|[2]>+|[-2]>), then renormalized.
        psi.amps[shape.index_of(0)] = 0.75;
        psi.amps[shape.index_of(1)] = 0.43;
        psi.amps[shape.index_of(-1)] = 0.43;
        psi.amps[shape.index_of(2)] = 0.26;
        psi.amps[shape.index_of(-2)] = 0.26;
    } else {
        // 0.81|[0,0]> + 0.30(|[1,0]>+|[-1,0]>+|[0,1]>+|[0,-1]>), renormalized.
        psi.amps[shape.index_of(0, 0)] = 0.81;
        psi.amps[shape.index_of(1, 0)] = 0.30;
        psi.amps[shape.index_of(-1, 0)] = 0.30;
        psi.amps[shape.index_of(0, 1)] = 0.30;
        psi.amps[shape.index_of(0, -1)] = 0.30;
    }
    return psi.normalize();
}

StateVector random_interior_state(const ModelSpec& spec, std::uint64_t seed) {
    spec.validate();
    const SectorShape shape = spec.shape();
    const InteriorProjector proj = build_projector(spec);
    StateVector psi{shape, Vector::Zero(shape.dim())};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index i = 0; i < shape.dim(); ++i) {
        if (!proj.keeps(i)) continue;
        const double re = gauss(rng);
        const double im = gauss(rng);
        psi.amps[i] = Complex(re, im);
    }
    return psi.normalize();
}

StateVector initial_state(const ModelSpec& spec, InitialStateKind kind, std::uint64_t seed) {
    switch (kind) {
        case InitialStateKind::Point: return point_state(spec);
        case InitialStateKind::Spread: return spread_state(spec);
        case InitialStateKind::Random: return random_interior_state(spec, seed);
    }
    throw ConfigError("unknown initial state kind");
}

const char* to_string(InitialStateKind kind) {
    switch (kind) {
        case InitialStateKind::Point: return "point";
        case InitialStateKind::Spread: return "spread";
        case InitialStateKind::Random: return "random";
    }
    return "?";
}

std::optional<InitialStateKind> initial_kind_from_string(std::string_view s) {
    if (s == "point") return InitialStateKind::Point;
    if (s == "spread") return InitialStateKind::Spread;
    if (s == "random") return InitialStateKind::Random;
    return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t root, std::uint64_t salt) {
    std::uint64_t z = root ^ (salt * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace projcool
