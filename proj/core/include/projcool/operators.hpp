#pragma once

#include "projcool/model.hpp"

#include <vector>

namespace projcool {

/// Role of a sector operator. A/B hold the off-diagonal kinetic bonds with
/// even/odd min site, D the kinetic diagonal; A1/B1/A2/B2 are the per-chain
/// versions on the two-particle sector.
enum class Tag { K, V, W, A, B, D, A1, B1, A2, B2, H };

const char* to_string(Tag tag);

/// Hermitian operator on a sector basis. All Hamiltonians here are real in
/// the position basis, so the matrix is stored as real symmetric.
struct SectorOperator {
    SectorShape shape;
    Tag tag = Tag::H;
    Matrix mat;

    bool is_hermitian(double tol = 1e-12) const {
        return (mat - mat.transpose()).cwiseAbs().maxCoeff() <= tol;
    }
};

/// s*K with K_{n',n} = delta - (1/2) delta_{n',n+1} - (1/2) delta_{n',n-1},
/// open boundary. Two particles: K (x) 1 + 1 (x) K.
SectorOperator build_kinetic(const ModelSpec& spec);

/// Diagonal potential: V_n on one chain, V_{n1}+V_{n2}+W_{n1,n2} on two.
SectorOperator build_potential(const ModelSpec& spec);

/// H = K + V (+ W).
SectorOperator build_hamiltonian(const ModelSpec& spec);

/// Splitting of H into exactly exponentiable parts, in the application order
/// of the factorized propagator: {A, B, D, V} for one chain,
/// {A1, B1, A2, B2, D, V, W} for two. Parts sum to H exactly.
std::vector<SectorOperator> trotter_parts(const ModelSpec& spec);

/// Diagonal 0/1 projector onto the interior region: keeps |n| <= R
/// (one particle) or max(|n1|,|n2|) <= R (two particles).
struct InteriorProjector {
    SectorShape shape;
    int interior_half_extent = 5;  // R

    bool keeps(Eigen::Index i) const {
        if (shape.chains == 1) return std::abs(shape.site_of(i)) <= interior_half_extent;
        const auto [n1, n2] = shape.sites_of(i);
        return std::max(std::abs(n1), std::abs(n2)) <= interior_half_extent;
    }

    Eigen::Index interior_dim() const {
        const Eigen::Index m = 2 * interior_half_extent + 1;
        return shape.chains == 1 ? m : m * m;
    }

    std::vector<Eigen::Index> interior_indices() const;
    void mask_in_place(Vector& amps) const;
    StateVector apply(const StateVector& psi) const;
    Matrix matrix() const;
};

InteriorProjector build_projector(const ModelSpec& spec);

}  // namespace projcool
