#include "projcool/operators.hpp"

#include <algorithm>
#include <cmath>

namespace projcool {

namespace {

bool on_lattice(const ModelSpec& spec, int n) { return std::abs(n) <= spec.half_extent; }

// V_n as a dense site vector; entries outside the lattice are dropped.
RealVector potential_sites(const ModelSpec& spec) {
    RealVector v = RealVector::Zero(spec.shape().sites());
    for (const auto& [n, val] : spec.potential)
        if (on_lattice(spec, n)) v[spec.shape().index_of(n)] += val;
    return v;
}

// One-dimensional kinetic matrix s*K on 2L+1 sites.
Matrix kinetic_chain(int L, double s) {
    const int m = 2 * L + 1;
    Matrix k = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        k(i, i) = s;
        if (i + 1 < m) {
            k(i, i + 1) = -0.5 * s;
            k(i + 1, i) = -0.5 * s;
        }
    }
    return k;
}

// Off-diagonal kinetic bonds of one chain with the requested min-site parity.
// Bond (n, n+1) belongs to A when n is even, to B when n is odd.
Matrix bond_matrix(int L, double s, bool even) {
    const int m = 2 * L + 1;
    Matrix a = Matrix::Zero(m, m);
    for (int n = -L; n < L; ++n) {
        if ((n % 2 == 0) != even) continue;
        const int i = n + L;
        a(i, i + 1) = -0.5 * s;
        a(i + 1, i) = -0.5 * s;
    }
    return a;
}

// Lift a one-chain matrix to the two-particle sector on the given chain axis.
Matrix lift(const Matrix& one, int chain, int m) {
    Matrix out = Matrix::Zero(m * m, m * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const double x = one(a, b);
            if (x == 0.0) continue;
            for (int c = 0; c < m; ++c) {
                if (chain == 1)
                    out(a * m + c, b * m + c) += x;
                else
                    out(c * m + a, c * m + b) += x;
            }
        }
    return out;
}

RealVector coupling_diagonal_sites(const ModelSpec& spec) {
    const int m = spec.shape().sites();
    RealVector w = RealVector::Zero(static_cast<Eigen::Index>(m) * m);
    for (const auto& [nn, val] : spec.coupling) {
        const auto [n1, n2] = nn;
        if (!on_lattice(spec, n1) || !on_lattice(spec, n2)) continue;
        w[spec.shape().index_of(n1, n2)] += val;
    }
    return w;
}

}  // namespace

const char* to_string(Tag tag) {
    switch (tag) {
        case Tag::K: return "K";
        case Tag::V: return "V";
        case Tag::W: return "W";
        case Tag::A: return "A";
        case Tag::B: return "B";
        case Tag::D: return "D";
        case Tag::A1: return "A1";
        case Tag::B1: return "B1";
        case Tag::A2: return "A2";
        case Tag::B2: return "B2";
        case Tag::H: return "H";
    }
    return "?";
}

SectorOperator build_kinetic(const ModelSpec& spec) {
    spec.validate_lattice();
    const SectorShape shape = spec.shape();
    const Matrix k1 = kinetic_chain(spec.half_extent, spec.kinetic_scale);
    if (spec.chains == 1) return {shape, Tag::K, k1};
    return {shape, Tag::K, lift(k1, 1, shape.sites()) + lift(k1, 2, shape.sites())};
}

SectorOperator build_potential(const ModelSpec& spec) {
    spec.validate_lattice();
    const SectorShape shape = spec.shape();
    const RealVector v = potential_sites(spec);
    if (spec.chains == 1) return {shape, Tag::V, Matrix(v.asDiagonal())};
    const int m = shape.sites();
    RealVector diag = coupling_diagonal_sites(spec);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) diag[static_cast<Eigen::Index>(a) * m + b] += v[a] + v[b];
    return {shape, Tag::V, Matrix(diag.asDiagonal())};
}

SectorOperator build_hamiltonian(const ModelSpec& spec) {
    SectorOperator h = build_kinetic(spec);
    h.tag = Tag::H;
    h.mat += build_potential(spec).mat;
    return h;
}

std::vector<SectorOperator> trotter_parts(const ModelSpec& spec) {
    spec.validate_lattice();
    const SectorShape shape = spec.shape();
    const int L = spec.half_extent;
    const double s = spec.kinetic_scale;
    std::vector<SectorOperator> parts;
    if (spec.chains == 1) {
        parts.push_back({shape, Tag::A, bond_matrix(L, s, true)});
        parts.push_back({shape, Tag::B, bond_matrix(L, s, false)});
        parts.push_back({shape, Tag::D, Matrix(RealVector::Constant(shape.dim(), s).asDiagonal())});
        parts.push_back({shape, Tag::V, Matrix(potential_sites(spec).asDiagonal())});
        return parts;
    }
    const int m = shape.sites();
    const Matrix a1 = bond_matrix(L, s, true);
    const Matrix b1 = bond_matrix(L, s, false);
    parts.push_back({shape, Tag::A1, lift(a1, 1, m)});
    parts.push_back({shape, Tag::B1, lift(b1, 1, m)});
    parts.push_back({shape, Tag::A2, lift(a1, 2, m)});
    parts.push_back({shape, Tag::B2, lift(b1, 2, m)});
    parts.push_back({shape, Tag::D, Matrix(RealVector::Constant(shape.dim(), 2.0 * s).asDiagonal())});
    const RealVector v = potential_sites(spec);
    RealVector vdiag = RealVector::Zero(shape.dim());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) vdiag[static_cast<Eigen::Index>(a) * m + b] = v[a] + v[b];
    parts.push_back({shape, Tag::V, Matrix(vdiag.asDiagonal())});
    parts.push_back({shape, Tag::W, Matrix(coupling_diagonal_sites(spec).asDiagonal())});
    return parts;
}

std::vector<Eigen::Index> InteriorProjector::interior_indices() const {
    std::vector<Eigen::Index> idx;
    idx.reserve(interior_dim());
    for (Eigen::Index i = 0; i < shape.dim(); ++i)
        if (keeps(i)) idx.push_back(i);
    return idx;
}

void InteriorProjector::mask_in_place(Vector& amps) const {
    for (Eigen::Index i = 0; i < amps.size(); ++i)
        if (!keeps(i)) amps[i] = 0.0;
}

StateVector InteriorProjector::apply(const StateVector& psi) const {
    StateVector out = psi;
    mask_in_place(out.amps);
    return out;
}

Matrix InteriorProjector::matrix() const {
    RealVector d = RealVector::Zero(shape.dim());
    for (Eigen::Index i = 0; i < shape.dim(); ++i)
        if (keeps(i)) d[i] = 1.0;
    return Matrix(d.asDiagonal());
}

InteriorProjector build_projector(const ModelSpec& spec) {
    spec.validate();
    return {spec.shape(), spec.interior_half_extent};
}

}  // namespace projcool
