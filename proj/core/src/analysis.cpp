#include "projcool/analysis.hpp"

#include "eig_lapack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace projcool {

namespace {

void apply_sign_convention(Matrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double v = vectors(r, c);
            if (std::abs(v) > 1e-12) {
                if (v < 0.0) vectors.col(c) = -vectors.col(c);
                break;
            }
        }
    }
}

}  // namespace

StateVector SpectrumResult::eigenstate(Eigen::Index k) const {
    return {shape, eigenvectors.col(k).cast<Complex>()};
}

SpectrumResult ground_state(const SectorOperator& h) {
    if (!h.is_hermitian())
        throw std::runtime_error("ground_state: operator is not Hermitian");
    auto eig = detail::symmetric_eigen(h.mat);
    if (eig.values.size() >= 2 && eig.values[1] - eig.values[0] < 1e-10)
        throw std::runtime_error("ground_state: degenerate ground state, gap " +
                                 std::to_string(eig.values[1] - eig.values[0]));
    apply_sign_convention(eig.vectors);
    return {h.shape, std::move(eig.values), std::move(eig.vectors)};
}

double normalized_overlap(const StateVector& x, const StateVector& y) {
    if (x.shape != y.shape) throw std::invalid_argument("normalized_overlap: basis mismatch");
    const double nx = x.amps.squaredNorm();
    const double ny = y.amps.squaredNorm();
    if (nx == 0.0 || ny == 0.0) throw std::domain_error("normalized_overlap: zero-norm input");
    return std::abs(x.amps.dot(y.amps)) / std::sqrt(nx * ny);
}

InteriorOverlap interior_overlap(const StateVector& psi, const StateVector& psi0,
                                 const InteriorProjector& p) {
    if (psi.shape != psi0.shape || psi.shape != p.shape)
        throw std::invalid_argument("interior_overlap: basis mismatch");
    Complex num = 0.0;
    double n_psi = 0.0, n_psi0 = 0.0;
    for (Eigen::Index i = 0; i < psi.amps.size(); ++i) {
        if (!p.keeps(i)) continue;
        num += std::conj(psi0.amps[i]) * psi.amps[i];
        n_psi += std::norm(psi.amps[i]);
        n_psi0 += std::norm(psi0.amps[i]);
    }
    if (n_psi == 0.0) return {0.0, true};
    if (n_psi0 == 0.0) throw std::domain_error("interior_overlap: reference vanishes inside the region");
    return {std::abs(num) / std::sqrt(n_psi * n_psi0), false};
}

double signal_efficiency(const StateVector& psi_I, const StateVector& psi0,
                         const InteriorProjector& p) {
    if (psi_I.shape != psi0.shape || psi_I.shape != p.shape)
        throw std::invalid_argument("signal_efficiency: basis mismatch");
    Complex amp = 0.0;
    for (Eigen::Index i = 0; i < psi_I.amps.size(); ++i)
        if (p.keeps(i)) amp += std::conj(psi0.amps[i]) * psi_I.amps[i];
    return std::norm(amp);
}

LocalizedCensus count_localized_states(const SpectrumResult& spectrum, const InteriorProjector& p) {
    LocalizedCensus census;
    for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
        const double e = spectrum.eigenvalues[k];
        if (e >= -1e-9) break;  // ascending order: past the band bottom
        double w = 0.0;
        for (Eigen::Index i = 0; i < spectrum.eigenvectors.rows(); ++i)
            if (p.keeps(i)) w += spectrum.eigenvectors(i, k) * spectrum.eigenvectors(i, k);
        LocalizedCandidate c{k, e, w, true, w >= 0.5};
        if (c.below_band && c.interior_dominant) ++census.count;
        census.candidates.push_back(c);
    }
    return census;
}

LocalizedCensus count_localized_states(const SectorOperator& h, const InteriorProjector& p) {
    return count_localized_states(ground_state(h), p);
}

RegionExpectation expectation_in_region(const SectorOperator& o, const StateVector& psi,
                                        const InteriorProjector& p) {
    if (!o.is_hermitian()) throw std::invalid_argument("expectation_in_region: non-Hermitian observable");
    if (psi.shape != p.shape || o.shape != psi.shape)
        throw std::invalid_argument("expectation_in_region: basis mismatch");
    Vector masked = psi.amps;
    p.mask_in_place(masked);
    const double denom = masked.squaredNorm();
    const double total = psi.amps.squaredNorm();
    if (total == 0.0 || denom / total < 1e-14) return {0.0, true};
    const Complex val = masked.dot(o.mat.cast<Complex>() * masked);
    return {val.real() / denom, false};
}

DecayFit fit_decay_exponent(const OverlapSeries& series, double transient_cutoff) {
    if (series.times.size() != series.values.size())
        throw std::invalid_argument("fit_decay_exponent: length mismatch");
    std::vector<double> t, r;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (series.times[i] < transient_cutoff) continue;
        t.push_back(series.times[i]);
        r.push_back(1.0 - series.values[i]);
    }
    if (t.size() < 20)
        throw std::invalid_argument("fit_decay_exponent: need at least 20 points past the cutoff");

    DecayFit fit;
    if (*std::max_element(r.begin(), r.end()) < 1e-12) {
        fit.residual_negligible = true;
        return fit;
    }

    // Upper envelope: local maxima of the residual. A clean power law has
    // none in its interior, so fall back to every point in that case.
    std::vector<std::size_t> pick;
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
        if (r[i] >= r[i - 1] && r[i] >= r[i + 1]) pick.push_back(i);
    fit.used_envelope = pick.size() >= 5;
    if (!fit.used_envelope) {
        pick.resize(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) pick[i] = i;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs, ys;
    for (std::size_t i : pick) {
        if (r[i] <= 0.0) continue;  // metric can graze 1 from below
        const double x = std::log(t[i]);
        const double y = std::log(r[i]);
        xs.push_back(x);
        ys.push_back(y);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double m = static_cast<double>(xs.size());
    if (m < 3) throw std::runtime_error("fit_decay_exponent: too few positive residuals");
    const double det = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / m;
    double ss_res = 0, ss_x = 0;
    const double xbar = sx / m;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        ss_res += e * e;
        ss_x += (xs[i] - xbar) * (xs[i] - xbar);
    }
    fit.alpha = -slope;
    fit.alpha_std_error = (m > 2 && ss_x > 0) ? std::sqrt(ss_res / (m - 2) / ss_x) : 0.0;
    fit.amplitude = std::exp(intercept);
    fit.points_used = static_cast<int>(m);

    // Dominant oscillation frequency of the residual (diagnostic): divide out
    // the fitted power law, center, and scan the Fourier magnitude.
    const double span = t.back() - t.front();
    if (span > 0) {
        std::vector<double> d(t.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            d[i] = r[i] / (fit.amplitude * std::pow(t[i], -fit.alpha));
            mean += d[i];
        }
        mean /= static_cast<double>(t.size());
        for (double& x : d) x -= mean;
        double best_w = 0.0, best_mag = -1.0;
        const int grid = 400;
        const double wmax = std::numbers::pi / ((t.back() - t.front()) / (t.size() - 1));
        for (int j = 1; j <= grid; ++j) {
            const double w = wmax * j / grid;
            Complex acc = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i)
                acc += d[i] * std::exp(Complex(0.0, -w * t[i]));
            if (std::abs(acc) > best_mag) {
                best_mag = std::abs(acc);
                best_w = w;
            }
        }
        fit.oscillation_frequency = best_w;
    }
    return fit;
}

}  // namespace projcool
