#include "projcool/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace projcool {

namespace {

// Hopping strings -1/4 (XX + YY) for each chain bond, grouped by min-site
// parity. qubit_base shifts chain-2 strings past the chain-1 register.
std::vector<PauliTerm> hopping_terms(int L, bool even, int qubit_base) {
    std::vector<PauliTerm> terms;
    for (int n = -L; n < L; ++n) {
        if ((n % 2 == 0) != even) continue;
        const int q0 = qubit_base + n + L;
        const int q1 = q0 + 1;
        terms.push_back({-0.25, {{q1, PauliAxis::X}, {q0, PauliAxis::X}}});
        terms.push_back({-0.25, {{q1, PauliAxis::Y}, {q0, PauliAxis::Y}}});
    }
    return terms;
}

// c * (1 - sigma_z^[q]) expanded into strings.
void push_one_minus_z(std::vector<PauliTerm>& terms, double c, int q) {
    terms.push_back({c, {}});
    terms.push_back({-c, {{q, PauliAxis::Z}}});
}

// c * (1 - sigma_z^[q1]) (1 - sigma_z^[q2]) expanded into strings.
void push_one_minus_z_pair(std::vector<PauliTerm>& terms, double c, int q1, int q2) {
    terms.push_back({c, {}});
    terms.push_back({-c, {{q1, PauliAxis::Z}}});
    terms.push_back({-c, {{q2, PauliAxis::Z}}});
    terms.push_back({c, {{q1, PauliAxis::Z}, {q2, PauliAxis::Z}}});
}

double site_potential(const std::map<int, double>& potential, int n) {
    const auto it = potential.find(n);
    return it == potential.end() ? 0.0 : it->second;
}

}  // namespace

std::vector<PauliTerm> PauliHamiltonian::all_terms() const {
    std::vector<PauliTerm> all;
    for (const auto& [tag, terms] : parts) all.insert(all.end(), terms.begin(), terms.end());
    return all;
}

ComplexMatrix realize_terms(int qubit_count, std::span<const PauliTerm> terms) {
    const Eigen::Index dim = Eigen::Index(1) << qubit_count;
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (const PauliTerm& term : terms) {
        for (Eigen::Index col = 0; col < dim; ++col) {
            Eigen::Index row = col;
            Complex phase = 1.0;
            for (const PauliFactor& f : term.factors) {
                const Eigen::Index bit = Eigen::Index(1) << f.qubit;
                const bool set = (row & bit) != 0;
                switch (f.axis) {
                    case PauliAxis::X:
                        row ^= bit;
                        break;
                    case PauliAxis::Y:
                        // |0> -> i|1>, |1> -> -i|0>
                        phase *= set ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
                        row ^= bit;
                        break;
                    case PauliAxis::Z:
                        if (set) phase = -phase;
                        break;
                }
            }
            m(row, col) += term.coefficient * phase;
        }
    }
    return m;
}

ComplexMatrix PauliHamiltonian::realize() const {
    const auto terms = all_terms();
    return realize_terms(qubit_count, terms);
}

ComplexMatrix PauliHamiltonian::realize_part(Tag tag) const {
    for (const auto& [t, terms] : parts)
        if (t == tag) return realize_terms(qubit_count, terms);
    throw std::invalid_argument("realize_part: no such part");
}

PauliHamiltonian build_chain_pauli(int L, const std::map<int, double>& potential) {
    if (L < 0) throw ConfigError("build_chain_pauli: negative L");
    if (L > 5) throw ConfigError("build_chain_pauli: L > 5 exceeds the qubit-space cap");
    PauliHamiltonian h;
    h.qubit_count = 2 * L + 1;
    h.parts.emplace_back(Tag::A, hopping_terms(L, true, 0));
    h.parts.emplace_back(Tag::B, hopping_terms(L, false, 0));
    std::vector<PauliTerm> d_terms;
    for (int n = -L; n <= L; ++n) push_one_minus_z(d_terms, 0.5, n + L);
    h.parts.emplace_back(Tag::D, std::move(d_terms));
    std::vector<PauliTerm> v_terms;
    for (int n = -L; n <= L; ++n) {
        const double v = site_potential(potential, n);
        if (v != 0.0) push_one_minus_z(v_terms, 0.5 * v, n + L);
    }
    h.parts.emplace_back(Tag::V, std::move(v_terms));
    return h;
}

PauliHamiltonian build_two_chain_pauli(int L, const std::map<int, double>& potential,
                                       const std::map<std::pair<int, int>, double>& coupling) {
    if (L < 0) throw ConfigError("build_two_chain_pauli: negative L");
    if (L > 2) throw ConfigError("build_two_chain_pauli: L > 2 exceeds the qubit-space cap");
    PauliHamiltonian h;
    const int m = 2 * L + 1;
    h.qubit_count = 2 * m;
    h.parts.emplace_back(Tag::A1, hopping_terms(L, true, 0));
    h.parts.emplace_back(Tag::B1, hopping_terms(L, false, 0));
    h.parts.emplace_back(Tag::A2, hopping_terms(L, true, m));
    h.parts.emplace_back(Tag::B2, hopping_terms(L, false, m));
    std::vector<PauliTerm> d_terms;
    for (int n1 = -L; n1 <= L; ++n1)
        for (int n2 = -L; n2 <= L; ++n2)
            push_one_minus_z_pair(d_terms, 0.25, n1 + L, m + n2 + L);
    h.parts.emplace_back(Tag::D, std::move(d_terms));
    std::vector<PauliTerm> v_terms;
    for (int n = -L; n <= L; ++n) {
        const double v = site_potential(potential, n);
        if (v == 0.0) continue;
        push_one_minus_z(v_terms, 0.5 * v, n + L);      // chain 1
        push_one_minus_z(v_terms, 0.5 * v, m + n + L);  // chain 2
    }
    h.parts.emplace_back(Tag::V, std::move(v_terms));
    std::vector<PauliTerm> w_terms;
    for (const auto& [nn, w] : coupling) {
        const auto [n1, n2] = nn;
        if (std::abs(n1) > L || std::abs(n2) > L || w == 0.0) continue;
        push_one_minus_z_pair(w_terms, 0.25 * w, n1 + L, m + n2 + L);
    }
    h.parts.emplace_back(Tag::W, std::move(w_terms));
    return h;
}

ComplexMatrix number_operator(int qubit_count) {
    const Eigen::Index dim = Eigen::Index(1) << qubit_count;
    ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b)
        n(b, b) = static_cast<double>(__builtin_popcountll(static_cast<unsigned long long>(b)));
    return n;
}

SectorOperator sector_restrict(const PauliHamiltonian& hq, const SectorShape& shape) {
    const int m = shape.sites();
    const int expected = shape.chains == 1 ? m : 2 * m;
    if (hq.qubit_count != expected)
        throw std::invalid_argument("sector_restrict: qubit count does not match the sector");
    const ComplexMatrix dense = hq.realize();
    std::vector<Eigen::Index> kets(shape.dim());
    if (shape.chains == 1) {
        for (int n = -shape.half_extent; n <= shape.half_extent; ++n)
            kets[shape.index_of(n)] = Eigen::Index(1) << (n + shape.half_extent);
    } else {
        for (int n1 = -shape.half_extent; n1 <= shape.half_extent; ++n1)
            for (int n2 = -shape.half_extent; n2 <= shape.half_extent; ++n2)
                kets[shape.index_of(n1, n2)] = (Eigen::Index(1) << (n1 + shape.half_extent)) |
                                               (Eigen::Index(1) << (m + n2 + shape.half_extent));
    }
    Matrix out(shape.dim(), shape.dim());
    for (Eigen::Index r = 0; r < shape.dim(); ++r)
        for (Eigen::Index c = 0; c < shape.dim(); ++c) {
            const Complex x = dense(kets[r], kets[c]);
            if (std::abs(x.imag()) > 1e-12)
                throw std::runtime_error("sector_restrict: unexpected imaginary matrix element");
            out(r, c) = x.real();
        }
    return {shape, Tag::H, std::move(out)};
}

}  // namespace projcool
