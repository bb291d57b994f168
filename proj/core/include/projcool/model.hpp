#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace projcool {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Invalid model or run configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Fixed-particle-number position basis on one or two open chains with sites
/// n = -L..L. One particle: flat index i = n + L. Two particles (one per
/// chain): i = (n1 + L) * (2L + 1) + (n2 + L), first chain major.
struct SectorShape {
    int chains = 1;
    int half_extent = 25;  // L

    int sites() const { return 2 * half_extent + 1; }
    Eigen::Index dim() const {
        const Eigen::Index m = sites();
        return chains == 1 ? m : m * m;
    }

    Eigen::Index index_of(int n) const { return n + half_extent; }
    Eigen::Index index_of(int n1, int n2) const {
        return static_cast<Eigen::Index>(n1 + half_extent) * sites() + (n2 + half_extent);
    }
    int site_of(Eigen::Index i) const { return static_cast<int>(i) - half_extent; }
    std::pair<int, int> sites_of(Eigen::Index i) const {
        const int m = sites();
        return {static_cast<int>(i / m) - half_extent, static_cast<int>(i % m) - half_extent};
    }

    bool operator==(const SectorShape&) const = default;
};

/// Declarative description of a lattice model: one or two chains of 2L+1
/// sites, an interior region of half-extent R < L, a kinetic scale factor s,
/// a single-particle potential V_n and (two chains only) a pair coupling
/// W_{n1,n2}. Potential and coupling entries outside the lattice are ignored
/// by the builders, i.e. the lattice truncates the model to its volume.
struct ModelSpec {
    int chains = 1;
    int half_extent = 25;           // L
    int interior_half_extent = 5;   // R
    double kinetic_scale = 1.0;     // s, multiplies K
    bool allow_sub_unit_kinetic_scale = false;
    std::map<int, double> potential;                  // site -> V_n
    std::map<std::pair<int, int>, double> coupling;   // (n1,n2) -> W
    std::string name = "custom";

    static ModelSpec model1a(int L = 25, int R = 5);
    static ModelSpec model1b(int L = 25, int R = 5);
    static ModelSpec model2(int L = 25, int R = 5);
    static std::optional<ModelSpec> preset(std::string_view name, int L = 25, int R = 5);

    SectorShape shape() const { return {chains, half_extent}; }

    /// Lattice-level checks used by the operator builders: L >= 0, R in range,
    /// positive kinetic scale, coupling only on two chains.
    void validate_lattice() const;
    /// Full checks, additionally requiring a proper interior 0 < R < L.
    void validate() const;

    bool operator==(const ModelSpec&) const = default;
};

/// Complex amplitudes over a sector basis.
struct StateVector {
    SectorShape shape;
    Vector amps;

    double norm() const { return amps.norm(); }
    StateVector& normalize();
};

enum class InitialStateKind { Point, Spread, Random };

StateVector point_state(const ModelSpec& spec);
StateVector spread_state(const ModelSpec& spec);
StateVector random_interior_state(const ModelSpec& spec, std::uint64_t seed);
StateVector initial_state(const ModelSpec& spec, InitialStateKind kind, std::uint64_t seed = 0);

const char* to_string(InitialStateKind kind);
std::optional<InitialStateKind> initial_kind_from_string(std::string_view s);

/// Deterministic seed derivation (splitmix64 of root ^ salted constant); all
/// randomness in a run flows from one root seed through this.
std::uint64_t mix_seed(std::uint64_t root, std::uint64_t salt);

}  // namespace projcool
