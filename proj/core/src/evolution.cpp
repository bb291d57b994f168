#include "projcool/evolution.hpp"

#include "eig_lapack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace projcool {

namespace {

// Spectral stepping stays affordable up to roughly this dimension; larger
// sectors use the Chebyshev expansion of the propagator instead.
constexpr Eigen::Index kSpectralDimLimit = 768;

}  // namespace

ScheduleCoefficients Schedule::at(double t) const {
    switch (kind) {
        case Kind::Static:
            return {1.0, 1.0, 1.0};
        case Kind::Adiabatic:
            if (!(total_time > 0.0)) throw ConfigError("adiabatic schedule needs t_F > 0");
            return {t / total_time, 1.0, 1.0};
        case Kind::ProjectedCooling: {
            const double e = std::exp(-t / decay_time);
            return {1.0 + (kinetic_boost - 1.0) * e, 1.0 - e, 1.0 - e};
        }
    }
    throw ConfigError("unknown schedule kind");
}

const char* to_string(Schedule::Kind kind) {
    switch (kind) {
        case Schedule::Kind::Static: return "static";
        case Schedule::Kind::Adiabatic: return "adiabatic";
        case Schedule::Kind::ProjectedCooling: return "projected_cooling";
    }
    return "?";
}

std::optional<Schedule::Kind> schedule_kind_from_string(std::string_view s) {
    if (s == "static") return Schedule::Kind::Static;
    if (s == "adiabatic") return Schedule::Kind::Adiabatic;
    if (s == "projected_cooling") return Schedule::Kind::ProjectedCooling;
    return std::nullopt;
}

const char* to_string(StepMethod m) { return m == StepMethod::Full ? "full" : "trotter"; }

std::optional<StepMethod> method_from_string(std::string_view s) {
    if (s == "full") return StepMethod::Full;
    if (s == "trotter") return StepMethod::Trotter;
    return std::nullopt;
}

const char* to_string(ExpEngine e) {
    switch (e) {
        case ExpEngine::Auto: return "auto";
        case ExpEngine::Spectral: return "spectral";
        case ExpEngine::Chebyshev: return "chebyshev";
    }
    return "?";
}

std::optional<ExpEngine> engine_from_string(std::string_view s) {
    if (s == "auto") return ExpEngine::Auto;
    if (s == "spectral") return ExpEngine::Spectral;
    if (s == "chebyshev") return ExpEngine::Chebyshev;
    return std::nullopt;
}

void NoiseStream::apply(Vector& amps) {
    if (epsilon_ == 0.0) return;
    const double scale = epsilon_ / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        const double re = gauss_(rng_);
        const double im = gauss_(rng_);
        amps[i] *= Complex(1.0 + scale * re, scale * im);
    }
}

StateVector apply_noise(const StateVector& psi, const NoiseModel& noise) {
    StateVector out = psi;
    NoiseStream stream(noise);
    stream.apply(out.amps);
    return out;
}

// ---------------------------------------------------------------------------
// ModelSystem

ModelSystem::ModelSystem(ModelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    projector_ = build_projector(spec_);
    hamiltonian_ = build_hamiltonian(spec_);
    kinetic_diag_ = spec_.kinetic_scale * spec_.chains;

    const SectorShape shape = spec_.shape();
    const SectorOperator v_full = build_potential(spec_);
    potential_diag_ = v_full.mat.diagonal();
    coupling_diag_ = RealVector::Zero(shape.dim());
    if (spec_.chains == 2) {
        // build_potential folds W into the diagonal; split it back out so the
        // schedule can scale V and W independently.
        for (const auto& [nn, w] : spec_.coupling) {
            const auto [n1, n2] = nn;
            if (std::abs(n1) > spec_.half_extent || std::abs(n2) > spec_.half_extent) continue;
            coupling_diag_[shape.index_of(n1, n2)] += w;
        }
        potential_diag_ -= coupling_diag_;
    }
}

Matrix ModelSystem::hamiltonian_matrix(const ScheduleCoefficients& c) const {
    const SectorShape shape = spec_.shape();
    const Eigen::Index dim = shape.dim();
    const int m = shape.sites();
    const double hop = -0.5 * c.kinetic * spec_.kinetic_scale;
    Matrix h = Matrix::Zero(dim, dim);
    if (spec_.chains == 1) {
        for (int i = 0; i + 1 < m; ++i) {
            h(i, i + 1) = hop;
            h(i + 1, i) = hop;
        }
    } else {
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const Eigen::Index i = static_cast<Eigen::Index>(a) * m + b;
                if (a + 1 < m) {
                    h(i, i + m) = hop;
                    h(i + m, i) = hop;
                }
                if (b + 1 < m) {
                    h(i, i + 1) = hop;
                    h(i + 1, i) = hop;
                }
            }
    }
    for (Eigen::Index i = 0; i < dim; ++i)
        h(i, i) = c.kinetic * kinetic_diag_ + c.potential * potential_diag_[i] +
                  c.coupling * coupling_diag_[i];
    return h;
}

void ModelSystem::apply_hamiltonian(const ScheduleCoefficients& c, const Vector& in,
                                    Vector& out) const {
    const SectorShape shape = spec_.shape();
    const int m = shape.sites();
    const double hop = -0.5 * c.kinetic * spec_.kinetic_scale;
    out.resize(in.size());
    if (spec_.chains == 1) {
        for (int i = 0; i < m; ++i) {
            Complex acc = (c.kinetic * kinetic_diag_ + c.potential * potential_diag_[i]) * in[i];
            if (i > 0) acc += hop * in[i - 1];
            if (i + 1 < m) acc += hop * in[i + 1];
            out[i] = acc;
        }
        return;
    }
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            const Eigen::Index i = static_cast<Eigen::Index>(a) * m + b;
            Complex acc = (c.kinetic * kinetic_diag_ + c.potential * potential_diag_[i] +
                           c.coupling * coupling_diag_[i]) *
                          in[i];
            if (a > 0) acc += hop * in[i - m];
            if (a + 1 < m) acc += hop * in[i + m];
            if (b > 0) acc += hop * in[i - 1];
            if (b + 1 < m) acc += hop * in[i + 1];
            out[i] = acc;
        }
    }
}

void ModelSystem::spectral_bounds(const ScheduleCoefficients& c, double& lo, double& hi) const {
    const SectorShape shape = spec_.shape();
    const int m = shape.sites();
    const double hop = 0.5 * std::abs(c.kinetic) * spec_.kinetic_scale;
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (Eigen::Index i = 0; i < shape.dim(); ++i) {
        const double d = c.kinetic * kinetic_diag_ + c.potential * potential_diag_[i] +
                         c.coupling * coupling_diag_[i];
        int neighbors = 0;
        if (spec_.chains == 1) {
            neighbors = (i > 0) + (i + 1 < m);
        } else {
            const int a = static_cast<int>(i / m), b = static_cast<int>(i % m);
            neighbors = (a > 0) + (a + 1 < m) + (b > 0) + (b + 1 < m);
        }
        const double r = hop * neighbors;
        lo = std::min(lo, d - r);
        hi = std::max(hi, d + r);
    }
}

const SpectrumResult& ModelSystem::spectrum() const {
    std::lock_guard lock(spectrum_mutex_);
    if (!spectrum_) {
        spectrum_ = ground_state(hamiltonian_);
        ground_ = spectrum_->ground();
    }
    return *spectrum_;
}

const StateVector& ModelSystem::exact_ground_state() const {
    spectrum();
    std::lock_guard lock(spectrum_mutex_);
    return *ground_;
}

// ---------------------------------------------------------------------------
// Steppers

namespace {

struct SpectralStep {
    detail::SymmetricEigen eig;

    void apply(double dt, Vector& psi) const {
        // Q exp(-i lambda dt) Q^T psi with the real/imaginary parts routed
        // through real GEMVs; Q is real orthogonal.
        const Eigen::MatrixXd& q = eig.vectors;
        Eigen::VectorXd wr = q.transpose() * psi.real();
        Eigen::VectorXd wi = q.transpose() * psi.imag();
        Vector w(wr.size());
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w[i] = std::polar(1.0, -eig.values[i] * dt) * Complex(wr[i], wi[i]);
        wr = w.real();
        wi = w.imag();
        Eigen::VectorXd or_ = q * wr;
        Eigen::VectorXd oi = q * wi;
        for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = Complex(or_[i], oi[i]);
    }
};

// exp(-i H dt) psi by the Bessel-coefficient Chebyshev expansion on the
// Gershgorin interval; truncated at coefficients below 1e-17, which keeps the
// result at eigensolver precision.
void chebyshev_apply(const ModelSystem& sys, const ScheduleCoefficients& c, double dt,
                     Vector& psi) {
    double lo, hi;
    sys.spectral_bounds(c, lo, hi);
    const double mu = 0.5 * (hi + lo);
    const double h = 0.5 * (hi - lo);
    const double theta = h * dt;
    const Complex global = std::polar(1.0, -mu * dt);
    if (theta < 1e-14) {
        psi *= global;
        return;
    }
    Vector t0 = psi;
    Vector t1(psi.size());
    sys.apply_hamiltonian(c, t0, t1);
    t1 = (t1 - mu * t0) / h;
    Vector acc = std::cyl_bessel_j(0.0, theta) * t0;
    Complex ik(0.0, -1.0);  // (-i)^k
    acc += 2.0 * ik * std::cyl_bessel_j(1.0, theta) * t1;
    Vector ht(psi.size());
    const int k_max = static_cast<int>(theta + 200.0);
    int tiny_run = 0;
    for (int k = 2; k <= k_max; ++k) {
        sys.apply_hamiltonian(c, t1, ht);
        Vector t2 = (2.0 / h) * (ht - mu * t1) - t0;
        ik *= Complex(0.0, -1.0);
        const double jk = std::cyl_bessel_j(static_cast<double>(k), theta);
        acc += 2.0 * ik * jk * t2;
        t0 = std::move(t1);
        t1 = std::move(t2);
        if (k > theta) {
            tiny_run = std::abs(jk) < 1e-17 ? tiny_run + 1 : 0;
            if (tiny_run >= 2) break;
        }
    }
    psi = global * acc;
}

struct BondRotation {
    Eigen::Index p, q;
    double coupling;  // off-diagonal entry g; angle is g*dt
};

void apply_bond_rotations(std::span<const BondRotation> bonds, double dt, Vector& psi) {
    for (const auto& b : bonds) {
        const double cth = std::cos(b.coupling * dt);
        const double sth = std::sin(b.coupling * dt);
        const Complex u = psi[b.p], v = psi[b.q];
        psi[b.p] = cth * u - Complex(0.0, sth) * v;
        psi[b.q] = -Complex(0.0, sth) * u + cth * v;
    }
}

void apply_diagonal_phase(const RealVector& diag, double scale, double dt, Vector& psi) {
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        psi[i] *= std::polar(1.0, -scale * diag[i] * dt);
}

// Precompiled structured factorized stepper for one model; only the schedule
// scalars vary per step.
class TrotterStepper {
  public:
    explicit TrotterStepper(const ModelSystem& sys) : sys_(&sys) {
        const SectorShape shape = sys.shape();
        const int L = shape.half_extent;
        const int m = shape.sites();
        auto bond_sites = [L](bool even) {
            std::vector<int> out;
            for (int n = -L; n < L; ++n)
                if ((n % 2 == 0) == even) out.push_back(n + L);
            return out;
        };
        const std::vector<int> even_sites = bond_sites(true);
        const std::vector<int> odd_sites = bond_sites(false);
        if (shape.chains == 1) {
            for (int i : even_sites) even1_.push_back({i, i + 1, 0.0});
            for (int i : odd_sites) odd1_.push_back({i, i + 1, 0.0});
        } else {
            for (int i : even_sites)
                for (int cidx = 0; cidx < m; ++cidx)
                    even1_.push_back({static_cast<Eigen::Index>(i) * m + cidx,
                                      static_cast<Eigen::Index>(i + 1) * m + cidx, 0.0});
            for (int i : odd_sites)
                for (int cidx = 0; cidx < m; ++cidx)
                    odd1_.push_back({static_cast<Eigen::Index>(i) * m + cidx,
                                     static_cast<Eigen::Index>(i + 1) * m + cidx, 0.0});
            for (int cidx = 0; cidx < m; ++cidx)
                for (int i : even_sites)
                    even2_.push_back({static_cast<Eigen::Index>(cidx) * m + i,
                                      static_cast<Eigen::Index>(cidx) * m + i + 1, 0.0});
            for (int cidx = 0; cidx < m; ++cidx)
                for (int i : odd_sites)
                    odd2_.push_back({static_cast<Eigen::Index>(cidx) * m + i,
                                     static_cast<Eigen::Index>(cidx) * m + i + 1, 0.0});
        }
    }

    void step(const ScheduleCoefficients& c, double dt, Vector& psi) const {
        const double g = -0.5 * c.kinetic * sys_->spec().kinetic_scale;
        auto rotate = [&](const std::vector<BondRotation>& bonds) {
            const double cth = std::cos(g * dt);
            const double sth = std::sin(g * dt);
            for (const auto& b : bonds) {
                const Complex u = psi[b.p], v = psi[b.q];
                psi[b.p] = cth * u - Complex(0.0, sth) * v;
                psi[b.q] = -Complex(0.0, sth) * u + cth * v;
            }
        };
        // Rightmost factor first: (W,) V, D, then the bond factors.
        if (sys_->shape().chains == 2)
            apply_diagonal_phase(sys_->coupling_diagonal(), c.coupling, dt, psi);
        apply_diagonal_phase(sys_->potential_diagonal(), c.potential, dt, psi);
        const double d_phase = c.kinetic * sys_->kinetic_diagonal() * dt;
        psi *= std::polar(1.0, -d_phase);
        if (sys_->shape().chains == 1) {
            rotate(odd1_);   // B
            rotate(even1_);  // A
        } else {
            rotate(odd2_);   // B2
            rotate(even2_);  // A2
            rotate(odd1_);   // B1
            rotate(even1_);  // A1
        }
    }

  private:
    const ModelSystem* sys_;
    std::vector<BondRotation> even1_, odd1_, even2_, odd2_;
};

}  // namespace

StateVector step_full(const StateVector& psi, const SectorOperator& h_t, double dt) {
    if (psi.shape != h_t.shape) throw std::invalid_argument("step_full: dimension mismatch");
    if (dt < 0.0) throw std::invalid_argument("step_full: negative dt");
    if (!h_t.is_hermitian()) throw std::runtime_error("step_full: operator is not Hermitian");
    if (dt == 0.0) return psi;
    SpectralStep step{detail::symmetric_eigen(h_t.mat)};
    StateVector out = psi;
    step.apply(dt, out.amps);
    return out;
}

StateVector step_trotter(const StateVector& psi, std::span<const SectorOperator> parts,
                         double dt) {
    StateVector out = psi;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        const SectorOperator& part = *it;
        if (part.mat.rows() != psi.amps.size())
            throw std::invalid_argument("step_trotter: part dimension mismatch");
        // Classify the part: diagonal, or a disjoint bond matching.
        std::vector<BondRotation> bonds;
        std::vector<char> used(part.mat.rows(), 0);
        for (Eigen::Index i = 0; i < part.mat.rows(); ++i)
            for (Eigen::Index j = i + 1; j < part.mat.cols(); ++j) {
                const double g = part.mat(i, j);
                if (g == 0.0) continue;
                if (used[i] || used[j])
                    throw std::invalid_argument("step_trotter: part is not a disjoint bond matching");
                if (std::abs(part.mat(j, i) - g) > 1e-14)
                    throw std::invalid_argument("step_trotter: part is not symmetric");
                used[i] = used[j] = 1;
                bonds.push_back({i, j, g});
            }
        if (bonds.empty()) {
            apply_diagonal_phase(part.mat.diagonal(), 1.0, dt, out.amps);
            continue;
        }
        if (part.mat.diagonal().cwiseAbs().maxCoeff() > 1e-14)
            throw std::invalid_argument("step_trotter: bond part must have zero diagonal");
        apply_bond_rotations(bonds, dt, out.amps);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evolution driver

namespace {

double edge_weight(const SectorShape& shape, const Vector& amps) {
    const int m = shape.sites();
    if (m < 4) return amps.norm();
    double w2 = 0.0;
    if (shape.chains == 1) {
        for (Eigen::Index i : {Eigen::Index(0), Eigen::Index(1), Eigen::Index(m - 2),
                               Eigen::Index(m - 1)})
            w2 += std::norm(amps[i]);
        return std::sqrt(w2);
    }
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        const auto [n1, n2] = shape.sites_of(i);
        if (std::max(std::abs(n1), std::abs(n2)) >= shape.half_extent - 1)
            w2 += std::norm(amps[i]);
    }
    return std::sqrt(w2);
}

StepRecord make_record(const ModelSystem& sys, const StateVector& ground, int step, double t,
                       const Vector& amps) {
    StepRecord rec;
    rec.step = step;
    rec.time = t;
    rec.norm = amps.norm();
    if (!std::isfinite(rec.norm))
        throw std::runtime_error("evolution produced non-finite amplitudes at step " +
                                 std::to_string(step));
    const StateVector view{sys.shape(), amps};
    const InteriorOverlap o = interior_overlap(view, ground, sys.projector());
    rec.overlap = o.value;
    rec.escaped = o.escaped;
    const double n2 = amps.squaredNorm();
    if (n2 > 0.0) {
        Vector h_amps(amps.size());
        sys.apply_hamiltonian({1.0, 1.0, 1.0}, amps, h_amps);
        rec.energy = amps.dot(h_amps).real() / n2;
    }
    rec.edge_weight = edge_weight(sys.shape(), amps);
    return rec;
}

}  // namespace

std::vector<Trajectory> evolve_family(const ModelSystem& system, const Schedule& schedule,
                                      const EvolveOptions& options,
                                      std::span<const FamilyMember> members) {
    if (!(options.dt > 0.0)) throw ConfigError("evolve: dt must be positive");
    if (options.steps < 0) throw ConfigError("evolve: steps must be nonnegative");
    for (const auto& m : members)
        if (m.initial.shape != system.shape())
            throw ConfigError("evolve: initial state sector does not match the model");

    const StateVector& ground = system.exact_ground_state();
    ExpEngine engine = options.engine;
    if (engine == ExpEngine::Auto)
        engine = system.shape().dim() <= kSpectralDimLimit ? ExpEngine::Spectral
                                                           : ExpEngine::Chebyshev;

    std::vector<Vector> states;
    std::vector<NoiseStream> noise;
    std::vector<Trajectory> out(members.size());
    states.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        states.push_back(members[i].initial.amps);
        noise.emplace_back(members[i].noise);
        out[i].records.push_back(make_record(system, ground, 0, 0.0, states[i]));
        if (options.record_snapshots) out[i].snapshots.push_back(members[i].initial);
    }

    std::optional<TrotterStepper> trotter;
    if (options.method == StepMethod::Trotter) trotter.emplace(system);
    std::optional<std::pair<ScheduleCoefficients, SpectralStep>> cached;

    for (int k = 1; k <= options.steps; ++k) {
        const double t = k * options.dt;
        const double t_eval = options.midpoint_time ? (k - 0.5) * options.dt : t;
        const ScheduleCoefficients coeffs = schedule.at(t_eval);
        if (options.method == StepMethod::Trotter) {
            for (auto& psi : states) trotter->step(coeffs, options.dt, psi);
        } else if (engine == ExpEngine::Spectral) {
            if (!cached || !(cached->first == coeffs))
                cached.emplace(coeffs,
                               SpectralStep{detail::symmetric_eigen(system.hamiltonian_matrix(coeffs))});
            for (auto& psi : states) cached->second.apply(options.dt, psi);
        } else {
            for (auto& psi : states) chebyshev_apply(system, coeffs, options.dt, psi);
        }
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (members[i].noise.epsilon != 0.0) noise[i].apply(states[i]);
            out[i].records.push_back(make_record(system, ground, k, t, states[i]));
            if (options.record_snapshots)
                out[i].snapshots.push_back(StateVector{system.shape(), states[i]});
        }
    }
    for (std::size_t i = 0; i < states.size(); ++i)
        out[i].final_state = StateVector{system.shape(), std::move(states[i])};
    return out;
}

Trajectory evolve(const ModelSystem& system, const Schedule& schedule,
                  const EvolveOptions& options, const StateVector& initial,
                  const NoiseModel& noise) {
    const FamilyMember member{initial, noise};
    auto result = evolve_family(system, schedule, options, std::span(&member, 1));
    return std::move(result[0]);
}

std::vector<SweepPoint> run_adiabatic_sweep(const ModelSystem& system,
                                            const EvolveOptions& options, int max_steps,
                                            const NoiseModel& noise) {
    if (max_steps < 1) throw ConfigError("adiabatic sweep: max_steps must be >= 1");
    const StateVector initial = point_state(system.spec());
    std::vector<SweepPoint> points;
    points.reserve(max_steps);
    for (int n = 1; n <= max_steps; ++n) {
        EvolveOptions opt = options;
        opt.steps = n;
        opt.record_snapshots = false;
        NoiseModel run_noise = noise;
        if (noise.epsilon != 0.0) run_noise.seed = mix_seed(noise.seed, static_cast<std::uint64_t>(n));
        const Trajectory traj =
            evolve(system, Schedule::adiabatic(n * options.dt), opt, initial, run_noise);
        points.push_back({n, traj.records.back().overlap});
    }
    return points;
}

int minimum_half_extent(const ModelSpec& spec, const Schedule& schedule, double total_time) {
    if (total_time < 0.0) throw ConfigError("minimum_half_extent: negative total time");
    const double s = spec.kinetic_scale;
    double travel = s * total_time;
    if (schedule.kind == Schedule::Kind::ProjectedCooling)
        travel += s * schedule.kinetic_boost * schedule.decay_time;
    // The ballistic front carries a dispersive precursor of width ~(vt/2)^(1/3);
    // three widths on top of the flat buffer keep the wall amplitude below 1e-3.
    const int margin = 5 + static_cast<int>(std::ceil(3.0 * std::cbrt(std::max(travel, 0.0) / 2.0)));
    return spec.interior_half_extent + static_cast<int>(std::ceil(travel)) + margin;
}

}  // namespace projcool
