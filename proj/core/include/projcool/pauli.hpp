#pragma once

#include "projcool/model.hpp"
#include "projcool/operators.hpp"

#include <map>
#include <span>
#include <vector>

namespace projcool {

enum class PauliAxis : char { X = 'X', Y = 'Y', Z = 'Z' };

struct PauliFactor {
    int qubit = 0;
    PauliAxis axis = PauliAxis::Z;
};

/// coefficient * product of single-qubit Paulis (identity on all others).
/// An empty factor list is a multiple of the identity.
struct PauliTerm {
    Complex coefficient;
    std::vector<PauliFactor> factors;
};

/// Qubit-level Hamiltonian as grouped Pauli strings, one group per
/// Hamiltonian piece, plus dense realization on the 2^N computational basis.
/// Qubit q maps to bit q of the basis index; |1> marks an occupied site.
/// Single chain: site n on qubit n+L. Two chains: chain 1 on qubits 0..2L,
/// chain 2 on qubits 2L+1..4L+1.
struct PauliHamiltonian {
    int qubit_count = 0;
    std::vector<std::pair<Tag, std::vector<PauliTerm>>> parts;

    std::vector<PauliTerm> all_terms() const;
    ComplexMatrix realize() const;
    ComplexMatrix realize_part(Tag tag) const;
};

/// Dense matrix of one Pauli string set on N qubits.
ComplexMatrix realize_terms(int qubit_count, std::span<const PauliTerm> terms);

/// Hopping + number + potential strings for one open chain of 2L+1 qubits.
/// Capped at L <= 5 (2^11 states) to stay a desk-scale check.
PauliHamiltonian build_chain_pauli(int L, const std::map<int, double>& potential);

/// Two linked chains with per-chain hopping, product-form kinetic diagonal,
/// per-chain potential and pair coupling. Capped at L <= 2 (2^10 states).
PauliHamiltonian build_two_chain_pauli(int L, const std::map<int, double>& potential,
                                       const std::map<std::pair<int, int>, double>& coupling);

/// Total particle number sum_q (1 - sigma_z^[q]) / 2 as a dense diagonal.
ComplexMatrix number_operator(int qubit_count);

/// Matrix of the qubit Hamiltonian between the fixed-particle-number sector
/// kets, ordered identically to the lattice basis. The restriction of these
/// Hamiltonians is real; a residual imaginary part above 1e-12 throws.
SectorOperator sector_restrict(const PauliHamiltonian& hq, const SectorShape& shape);

}  // namespace projcool
