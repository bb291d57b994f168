#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projcool/model.hpp"
#include "projcool/operators.hpp"
#include "projcool/pauli.hpp"

#include <cmath>

using namespace projcool;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

}  // namespace

TEST_CASE("hopping strings follow the bond parity of the lattice splitting") {
    const auto h = build_chain_pauli(1, {});
    REQUIRE(h.parts[0].first == Tag::A);
    REQUIRE(h.parts[1].first == Tag::B);
    // bond (0,1) has even min -> A holds its XX and YY strings on qubits 1,2
    REQUIRE(h.parts[0].second.size() == 2);
    CHECK(h.parts[0].second[0].coefficient == Complex(-0.25, 0.0));
    CHECK(h.parts[0].second[0].factors[0].qubit == 2);
    CHECK(h.parts[0].second[0].factors[1].qubit == 1);
    // bond (-1,0) has odd min -> B on qubits 0,1
    REQUIRE(h.parts[1].second.size() == 2);
    CHECK(h.parts[1].second[0].factors[0].qubit == 1);
    CHECK(h.parts[1].second[0].factors[1].qubit == 0);
}

TEST_CASE("the kinetic diagonal counts particles") {
    const auto h = build_chain_pauli(1, {});
    const ComplexMatrix d = h.realize_part(Tag::D);
    // one-particle ket |[0]> is bit 1 of 3 qubits -> index 2
    CHECK(d(2, 2) == Complex(1.0, 0.0));
    CHECK(d(0, 0) == Complex(0.0, 0.0));  // vacuum
    CHECK(d(7, 7) == Complex(3.0, 0.0));  // all three occupied
}

TEST_CASE("zero potential gives a zero V operator") {
    const auto h = build_chain_pauli(2, {});
    CHECK(max_abs(h.realize_part(Tag::V)) == 0.0);
}

TEST_CASE("the single-chain hamiltonian annihilates the vacuum") {
    const ModelSpec spec = ModelSpec::model1b(3, 2);
    const auto h = build_chain_pauli(3, spec.potential);
    const ComplexMatrix dense = h.realize();
    CHECK(dense.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dense.row(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hopping restricted to one particle reproduces the kinetic off-diagonal") {
    const int L = 2;
    const auto h = build_chain_pauli(L, {});
    PauliHamiltonian hop{h.qubit_count, {}};
    hop.parts.emplace_back(Tag::A, h.parts[0].second);
    hop.parts.emplace_back(Tag::B, h.parts[1].second);
    const SectorOperator restricted = sector_restrict(hop, SectorShape{1, L});

    ModelSpec free;
    free.chains = 1;
    free.half_extent = L;
    free.interior_half_extent = 0;
    Matrix expected = build_kinetic(free).mat;
    expected.diagonal().setZero();
    CHECK((restricted.mat - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(restricted.mat(0, 1) == doctest::Approx(-0.5));
}

TEST_CASE("particle number is conserved term by term") {
    const ModelSpec b = ModelSpec::model1b(3, 2);
    const auto h1 = build_chain_pauli(3, b.potential);
    const ComplexMatrix n1 = number_operator(h1.qubit_count);
    CHECK(max_abs(commutator(h1.realize(), n1)) <= 1e-12);

    const ModelSpec m2 = ModelSpec::model2(1, 0);
    const auto h2 = build_two_chain_pauli(1, m2.potential, m2.coupling);
    const ComplexMatrix n2 = number_operator(h2.qubit_count);
    CHECK(max_abs(commutator(h2.realize(), n2)) <= 1e-12);
}

TEST_CASE("two-chain diagonal pieces act as the model constants on sector kets") {
    const ModelSpec m2 = ModelSpec::model2(1, 0);
    const auto h = build_two_chain_pauli(1, m2.potential, m2.coupling);
    const SectorShape shape{2, 1};
    // |[0,0]>: chain-1 qubit 1 and chain-2 qubit 1 -> bits 1 and 4
    const Eigen::Index ket00 = (1 << 1) | (1 << 4);
    const ComplexMatrix w = h.realize_part(Tag::W);
    CHECK(w(ket00, ket00).real() == doctest::Approx(-0.2).epsilon(1e-14));

    const ComplexMatrix v = h.realize_part(Tag::V);
    // |[1,0]>: V_1 + V_0 = 0.2 - 1.0
    const Eigen::Index ket10 = (1 << 2) | (1 << 4);
    CHECK(v(ket10, ket10).real() == doctest::Approx(-0.8).epsilon(1e-14));

    const auto none = build_two_chain_pauli(1, m2.potential, {});
    CHECK(max_abs(none.realize_part(Tag::W)) == 0.0);

    // the full two-chain hamiltonian annihilates the vacuum as well
    CHECK(h.realize().col(0).cwiseAbs().maxCoeff() == 0.0);
    (void)shape;
}

TEST_CASE("single-chain sector restriction equals the lattice hamiltonian") {
    for (const char* preset : {"model1a", "model1b"}) {
        const ModelSpec spec = *ModelSpec::preset(preset, 3, 2);
        const auto hq = build_chain_pauli(3, spec.potential);
        const SectorOperator restricted = sector_restrict(hq, spec.shape());
        const Matrix lattice = build_hamiltonian(spec).mat;
        CHECK((restricted.mat - lattice).cwiseAbs().maxCoeff() <= 1e-12);
    }

    // a lopsided custom potential as well
    ModelSpec custom;
    custom.chains = 1;
    custom.half_extent = 2;
    custom.interior_half_extent = 1;
    custom.potential = {{-2, 0.7}, {0, -0.9}, {1, 0.25}};
    const auto hq = build_chain_pauli(2, custom.potential);
    CHECK((sector_restrict(hq, custom.shape()).mat - build_hamiltonian(custom).mat)
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("two-chain restriction matches up to an additive identity") {
    const ModelSpec m2 = ModelSpec::model2(2, 1);
    const auto hq = build_two_chain_pauli(2, m2.potential, m2.coupling);
    const SectorOperator restricted = sector_restrict(hq, m2.shape());
    Matrix delta = build_hamiltonian(m2).mat - restricted.mat;

    // off-diagonal (hopping) parts agree exactly
    Matrix off = delta;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() <= 1e-12);

    // the diagonal difference is one global constant: the product-form kinetic
    // diagonal counts N1*N2 = 1 in this sector while the lattice uses 2
    const double shift = delta.trace() / delta.rows();
    CHECK(shift == doctest::Approx(1.0).epsilon(1e-13));
    delta.diagonal().array() -= shift;
    CHECK(delta.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("qubit-space caps and sector mismatches are rejected") {
    CHECK_THROWS_AS(build_chain_pauli(6, {}), ConfigError);
    CHECK_THROWS_AS(build_two_chain_pauli(3, {}, {}), ConfigError);
    const auto h = build_chain_pauli(2, {});
    CHECK_THROWS_AS(sector_restrict(h, SectorShape{1, 3}), std::invalid_argument);
}
