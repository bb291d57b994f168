#pragma once

#include "projcool/analysis.hpp"
#include "projcool/model.hpp"
#include "projcool/operators.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace projcool {

/// H(t) = kinetic * K  +  potential * V  +  coupling * W.
struct ScheduleCoefficients {
    double kinetic = 1.0;
    double potential = 1.0;
    double coupling = 1.0;

    bool operator==(const ScheduleCoefficients&) const = default;
};

/// Time-dependent Hamiltonian rule.
///   Static:           H(t) = H
///   Adiabatic:        H(t) = (t/t_F) K + V (+ W)
///   ProjectedCooling: H(t) = (kappa K - H) exp(-t/tau) + H
struct Schedule {
    enum class Kind { Static, Adiabatic, ProjectedCooling };

    Kind kind = Kind::Static;
    double total_time = 12.0;     // t_F, adiabatic only
    double kinetic_boost = 10.0;  // kappa
    double decay_time = 3.6;      // tau

    static Schedule constant() { return {Kind::Static}; }
    static Schedule adiabatic(double t_final) { return {Kind::Adiabatic, t_final}; }
    static Schedule projected_cooling(double kappa = 10.0, double tau = 3.6) {
        Schedule s{Kind::ProjectedCooling};
        s.kinetic_boost = kappa;
        s.decay_time = tau;
        return s;
    }

    ScheduleCoefficients at(double t) const;

    bool operator==(const Schedule&) const = default;
};

const char* to_string(Schedule::Kind kind);
std::optional<Schedule::Kind> schedule_kind_from_string(std::string_view s);

/// Multiplicative per-amplitude noise 1+z with z complex Gaussian, each
/// component of rms epsilon/sqrt(2).
struct NoiseModel {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

/// Sequential noise draws across the steps of one run.
class NoiseStream {
  public:
    explicit NoiseStream(const NoiseModel& model)
        : epsilon_(model.epsilon), rng_(model.seed), gauss_(0.0, 1.0) {}

    void apply(Vector& amps);

  private:
    double epsilon_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_;
};

/// One application of the noise channel with a fresh stream from the seed.
StateVector apply_noise(const StateVector& psi, const NoiseModel& noise);

struct StepRecord {
    int step = 0;
    double time = 0.0;
    double norm = 0.0;
    double overlap = 0.0;  // interior overlap against the exact ground state
    bool escaped = false;
    double energy = 0.0;      // <H>/<psi|psi> for the static Hamiltonian
    double edge_weight = 0.0;  // amplitude norm on the outermost two sites per side
};

struct Trajectory {
    std::vector<StepRecord> records;  // steps + 1 entries, including t = 0
    StateVector final_state;
    std::vector<StateVector> snapshots;  // filled only when requested
};

enum class StepMethod { Full, Trotter };
enum class ExpEngine { Auto, Spectral, Chebyshev };

const char* to_string(StepMethod m);
std::optional<StepMethod> method_from_string(std::string_view s);
const char* to_string(ExpEngine e);
std::optional<ExpEngine> engine_from_string(std::string_view s);

struct EvolveOptions {
    StepMethod method = StepMethod::Full;
    double dt = 0.3;
    int steps = 40;
    ExpEngine engine = ExpEngine::Auto;
    bool midpoint_time = false;  // evaluate H at (k-1/2) dt instead of k dt
    bool record_snapshots = false;
};

/// A model compiled for evolution: dense static Hamiltonian, structured
/// forms for fast application, the interior projector, and the lazily
/// computed exact spectrum. Immutable after construction; safe to share.
class ModelSystem {
  public:
    explicit ModelSystem(ModelSpec spec);

    const ModelSpec& spec() const { return spec_; }
    SectorShape shape() const { return spec_.shape(); }
    const InteriorProjector& projector() const { return projector_; }
    const SectorOperator& hamiltonian() const { return hamiltonian_; }

    double kinetic_diagonal() const { return kinetic_diag_; }
    const RealVector& potential_diagonal() const { return potential_diag_; }
    const RealVector& coupling_diagonal() const { return coupling_diag_; }

    /// Dense H(t) for the given schedule coefficients.
    Matrix hamiltonian_matrix(const ScheduleCoefficients& c) const;
    /// out = H(t) in, using the banded kinetic structure; no dense product.
    void apply_hamiltonian(const ScheduleCoefficients& c, const Vector& in, Vector& out) const;
    /// Gershgorin spectral bounds of H(t).
    void spectral_bounds(const ScheduleCoefficients& c, double& lo, double& hi) const;

    const SpectrumResult& spectrum() const;
    const StateVector& exact_ground_state() const;
    double ground_energy() const { return spectrum().eigenvalues[0]; }

  private:
    ModelSpec spec_;
    InteriorProjector projector_;
    SectorOperator hamiltonian_;
    double kinetic_diag_ = 0.0;   // constant kinetic diagonal, s * chains
    RealVector potential_diag_;   // V part over the sector basis
    RealVector coupling_diag_;    // W part over the sector basis
    mutable std::mutex spectrum_mutex_;
    mutable std::optional<SpectrumResult> spectrum_;
    mutable std::optional<StateVector> ground_;
};

/// exp(-i H dt) psi via spectral decomposition of the Hermitian H.
StateVector step_full(const StateVector& psi, const SectorOperator& h_t, double dt);

/// Product of exact factor exponentials, rightmost factor applied first.
/// Each part must be diagonal or a disjoint set of symmetric bonds with zero
/// diagonal (the A/B kinetic matchings).
StateVector step_trotter(const StateVector& psi, std::span<const SectorOperator> parts, double dt);

struct FamilyMember {
    StateVector initial;
    NoiseModel noise;
};

/// Evolves several runs of the same schedule in lockstep so per-step work
/// (spectral decompositions in particular) is shared across the family.
std::vector<Trajectory> evolve_family(const ModelSystem& system, const Schedule& schedule,
                                      const EvolveOptions& options,
                                      std::span<const FamilyMember> members);

Trajectory evolve(const ModelSystem& system, const Schedule& schedule,
                  const EvolveOptions& options, const StateVector& initial,
                  const NoiseModel& noise = {});

struct SweepPoint {
    int steps = 0;
    double final_overlap = 0.0;
};

/// Independent adiabatic runs with t_F = N_t dt for N_t = 1..max_steps,
/// each from the point initial state; records the final interior overlap.
/// For epsilon > 0 each run draws its own noise stream derived from the seed.
std::vector<SweepPoint> run_adiabatic_sweep(const ModelSystem& system,
                                            const EvolveOptions& options, int max_steps,
                                            const NoiseModel& noise = {});

/// Smallest half-extent that keeps the dispersing front away from the walls
/// for the whole run: interior size plus the travel bound of the schedule's
/// fastest wave plus a buffer for the dispersive precursor.
int minimum_half_extent(const ModelSpec& spec, const Schedule& schedule, double total_time);

}  // namespace projcool
