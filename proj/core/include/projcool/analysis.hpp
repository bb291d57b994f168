#pragma once

#include "projcool/model.hpp"
#include "projcool/operators.hpp"

#include <vector>

namespace projcool {

/// Full spectrum of a Hermitian sector operator, eigenvalues ascending.
/// Eigenvector columns carry a fixed sign convention: the first component
/// larger than 1e-12 in magnitude is positive real.
struct SpectrumResult {
    SectorShape shape;
    RealVector eigenvalues;
    Matrix eigenvectors;  // columns

    StateVector eigenstate(Eigen::Index k) const;
    double ground_energy() const { return eigenvalues[0]; }
    StateVector ground() const { return eigenstate(0); }
};

/// Exact-diagonalization oracle. Aborts with a diagnostic if the two lowest
/// eigenvalues are within 1e-10 of each other (degenerate ground state).
SpectrumResult ground_state(const SectorOperator& h);

/// |<x|y>| / sqrt(<x|x><y|y>); scale- and global-phase-invariant.
double normalized_overlap(const StateVector& x, const StateVector& y);

struct InteriorOverlap {
    double value = 0.0;
    bool escaped = false;  // P psi vanished
};

/// Normalized overlap of P psi0 against P psi.
InteriorOverlap interior_overlap(const StateVector& psi, const StateVector& psi0,
                                 const InteriorProjector& p);

/// |<psi0|P|psi_I>|^2, the post-selection success probability.
double signal_efficiency(const StateVector& psi_I, const StateVector& psi0,
                         const InteriorProjector& p);

struct LocalizedCandidate {
    Eigen::Index index = 0;
    double energy = 0.0;
    double interior_weight = 0.0;
    bool below_band = false;       // energy < -1e-9 (band bottom is 0)
    bool interior_dominant = false;  // ||P v||^2 >= 0.5
};

struct LocalizedCensus {
    int count = 0;  // candidates satisfying both criteria
    std::vector<LocalizedCandidate> candidates;
};

/// Counts eigenstates below the continuum band bottom that also concentrate
/// at least half their weight inside the interior region; reports both
/// criteria per candidate.
LocalizedCensus count_localized_states(const SectorOperator& h, const InteriorProjector& p);
LocalizedCensus count_localized_states(const SpectrumResult& spectrum, const InteriorProjector& p);

struct RegionExpectation {
    double value = 0.0;
    bool escaped = false;  // projection probability < 1e-14
};

/// <psi|P O P|psi> / <psi|P|psi>: the observable restricted to the interior,
/// conditioned on projection success.
RegionExpectation expectation_in_region(const SectorOperator& o, const StateVector& psi,
                                        const InteriorProjector& p);

struct OverlapSeries {
    std::vector<double> times;
    std::vector<double> values;
};

struct DecayFit {
    double alpha = 0.0;
    double alpha_std_error = 0.0;
    double amplitude = 0.0;            // prefactor of the fitted power law
    double oscillation_frequency = 0.0;  // dominant residual frequency, diagnostic
    int points_used = 0;
    bool used_envelope = false;
    bool residual_negligible = false;  // residual below 1e-12 everywhere
};

/// Fits log(1-O) vs log(t) on the upper envelope (local maxima of the
/// residual) past the transient cutoff. Falls back to all points when the
/// residual has too few local maxima to define an envelope.
DecayFit fit_decay_exponent(const OverlapSeries& series, double transient_cutoff = 5.0);

}  // namespace projcool
