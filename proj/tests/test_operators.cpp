#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projcool/model.hpp"
#include "projcool/operators.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

using namespace projcool;

namespace {

ModelSpec bare_chain(int L, double s = 1.0) {
    ModelSpec spec;
    spec.chains = 1;
    spec.half_extent = L;
    spec.interior_half_extent = 0;
    spec.kinetic_scale = s;
    return spec;
}

}  // namespace

TEST_CASE("kinetic matrix on a three-site chain") {
    const SectorOperator k = build_kinetic(bare_chain(1));
    Matrix expected(3, 3);
    expected << 1.0, -0.5, 0.0, -0.5, 1.0, -0.5, 0.0, -0.5, 1.0;
    CHECK((k.mat - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(k.tag == Tag::K);
}

TEST_CASE("kinetic matrix degenerates to [s] on a single site") {
    const SectorOperator k = build_kinetic(bare_chain(0));
    CHECK(k.mat.rows() == 1);
    CHECK(k.mat(0, 0) == 1.0);
}

TEST_CASE("kinetic scale multiplies every entry") {
    const SectorOperator k1 = build_kinetic(bare_chain(1));
    const SectorOperator k10 = build_kinetic(bare_chain(1, 10.0));
    CHECK((k10.mat - 10.0 * k1.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("open boundary: no wraparound coupling") {
    const SectorOperator k = build_kinetic(bare_chain(6));
    const Eigen::Index n = k.mat.rows();
    CHECK(k.mat(0, n - 1) == 0.0);
    CHECK(k.mat(n - 1, 0) == 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(i - j) > 1) CHECK(k.mat(i, j) == 0.0);
}

TEST_CASE("potential diagonals carry the model constants") {
    const ModelSpec a = ModelSpec::model1a();
    const SectorOperator va = build_potential(a);
    CHECK(va.mat(a.shape().index_of(0), a.shape().index_of(0)) == -1.0);
    CHECK(va.mat.diagonal().cwiseAbs().sum() == 1.0);

    const ModelSpec b = ModelSpec::model1b();
    const SectorOperator vb = build_potential(b);
    CHECK(vb.mat(b.shape().index_of(3), b.shape().index_of(3)) == -1.5);

    const ModelSpec m2 = ModelSpec::model2();
    const SectorOperator v2 = build_potential(m2);
    const Eigen::Index i00 = m2.shape().index_of(0, 0);
    CHECK(v2.mat(i00, i00) == doctest::Approx(-2.2).epsilon(1e-15));
    // off-diagonal part of a potential is identically zero
    Matrix off = v2.mat;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("potential entries outside the lattice are dropped") {
    // the two-particle preset keeps its n=3 well even when L < 3 truncates it
    const ModelSpec m2 = ModelSpec::model2(2, 1);
    const SectorOperator v = build_potential(m2);
    const Eigen::Index i = m2.shape().index_of(2, -2);
    CHECK(v.mat(i, i) == doctest::Approx(-0.9 + 0.0).epsilon(1e-15));
}

TEST_CASE("hamiltonian combines kinetic and potential") {
    const ModelSpec a = ModelSpec::model1a(1, 0);
    const SectorOperator h = build_hamiltonian(a);
    Matrix expected(3, 3);
    expected << 1.0, -0.5, 0.0, -0.5, 0.0, -0.5, 0.0, -0.5, 1.0;
    CHECK((h.mat - expected).cwiseAbs().maxCoeff() == 0.0);

    const ModelSpec free = bare_chain(5);
    CHECK((build_hamiltonian(free).mat - build_kinetic(free).mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-particle hamiltonian matches the kronecker construction") {
    const ModelSpec m2 = ModelSpec::model2(4, 2);
    const SectorOperator h = build_hamiltonian(m2);

    // independent route: K (x) 1 + 1 (x) K + diag(V1 + V2 + W)
    ModelSpec chain = bare_chain(4);
    chain.potential = m2.potential;
    const Matrix k1 = build_kinetic(chain).mat;
    const Matrix id = Matrix::Identity(k1.rows(), k1.cols());
    Matrix expected = Eigen::kroneckerProduct(k1, id) + Eigen::kroneckerProduct(id, k1);
    const Matrix v1 = build_potential(chain).mat;
    for (int i = 0; i < k1.rows(); ++i)
        for (int j = 0; j < k1.rows(); ++j) {
            expected(i * k1.rows() + j, i * k1.rows() + j) += v1(i, i) + v1(j, j);
            if (i == j) expected(i * k1.rows() + j, i * k1.rows() + j) += -0.2;
        }
    CHECK((h.mat - expected).cwiseAbs().maxCoeff() <= 1e-15);

    const Eigen::Index from = m2.shape().index_of(0, 0);
    const Eigen::Index to = m2.shape().index_of(1, 0);
    CHECK(h.mat(to, from) == -0.5);
}

TEST_CASE("hermiticity of every built operator") {
    for (const ModelSpec& spec :
         {ModelSpec::model1a(), ModelSpec::model1b(), ModelSpec::model2(6, 2)}) {
        CHECK(build_kinetic(spec).is_hermitian());
        CHECK(build_potential(spec).is_hermitian());
        CHECK(build_hamiltonian(spec).is_hermitian());
        for (const auto& part : trotter_parts(spec)) CHECK(part.is_hermitian());
    }
}

TEST_CASE("trotter parts classify bonds by min-site parity") {
    const ModelSpec b = ModelSpec::model1b();
    const auto parts = trotter_parts(b);
    REQUIRE(parts.size() == 4);
    CHECK(parts[0].tag == Tag::A);
    CHECK(parts[1].tag == Tag::B);
    CHECK(parts[2].tag == Tag::D);
    CHECK(parts[3].tag == Tag::V);

    const auto idx = [&](int n) { return b.shape().index_of(n); };
    // bond (0,1) has even min and lives in A; bond (1,2) has odd min -> B
    CHECK(parts[0].mat(idx(0), idx(1)) == -0.5);
    CHECK(parts[1].mat(idx(0), idx(1)) == 0.0);
    CHECK(parts[1].mat(idx(1), idx(2)) == -0.5);
    CHECK(parts[0].mat(idx(1), idx(2)) == 0.0);
    // negative sites: (-1,0) min -1 odd -> B, (-2,-1) min -2 even -> A
    CHECK(parts[1].mat(idx(-1), idx(0)) == -0.5);
    CHECK(parts[0].mat(idx(-2), idx(-1)) == -0.5);

    // A and B have zero diagonal; D and V are diagonal
    CHECK(parts[0].mat.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(parts[1].mat.diagonal().cwiseAbs().maxCoeff() == 0.0);
    for (int p : {2, 3}) {
        Matrix off = parts[p].mat;
        off.diagonal().setZero();
        CHECK(off.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("trotter parts sum exactly to the hamiltonian") {
    for (const ModelSpec& spec : {ModelSpec::model1a(), ModelSpec::model1b(),
                                  ModelSpec::model2(5, 2), ModelSpec::model1b(10, 3)}) {
        const auto parts = trotter_parts(spec);
        Matrix sum = Matrix::Zero(spec.shape().dim(), spec.shape().dim());
        for (const auto& p : parts) sum += p.mat;
        CHECK((sum - build_hamiltonian(spec).mat).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("two-particle splitting returns seven parts in application order") {
    const auto parts = trotter_parts(ModelSpec::model2(3, 1));
    REQUIRE(parts.size() == 7);
    const Tag expected[] = {Tag::A1, Tag::B1, Tag::A2, Tag::B2, Tag::D, Tag::V, Tag::W};
    for (int i = 0; i < 7; ++i) CHECK(parts[i].tag == expected[i]);
}

TEST_CASE("projector keeps the interior and is idempotent") {
    const ModelSpec a = ModelSpec::model1a();
    const InteriorProjector p = build_projector(a);
    CHECK(p.interior_dim() == 11);
    CHECK(p.keeps(a.shape().index_of(5)));
    CHECK_FALSE(p.keeps(a.shape().index_of(6)));

    const ModelSpec m2 = ModelSpec::model2(10, 5);
    const InteriorProjector p2 = build_projector(m2);
    CHECK(p2.interior_dim() == 121);
    CHECK(p2.keeps(m2.shape().index_of(3, -5)));
    CHECK_FALSE(p2.keeps(m2.shape().index_of(3, 6)));

    StateVector psi{a.shape(), Vector::Random(a.shape().dim())};
    const StateVector once = p.apply(psi);
    const StateVector twice = p.apply(once);
    CHECK(once.amps == twice.amps);

    // diagonal 0/1 matrix
    const Matrix m = p.matrix();
    Matrix off = m;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        CHECK((m(i, i) == 0.0 || m(i, i) == 1.0));
}

TEST_CASE("projector with R = L-1 drops only the boundary sites") {
    const ModelSpec spec = ModelSpec::model1a(6, 5);
    const InteriorProjector p = build_projector(spec);
    for (int n = -5; n <= 5; ++n) CHECK(p.keeps(spec.shape().index_of(n)));
    CHECK_FALSE(p.keeps(spec.shape().index_of(6)));
    CHECK_FALSE(p.keeps(spec.shape().index_of(-6)));
}

TEST_CASE("translating the potential conjugates the bulk of H by the shift") {
    ModelSpec spec = bare_chain(6);
    spec.potential = {{-1, 0.4}, {0, -1.2}, {1, 0.3}};
    ModelSpec shifted = spec;
    shifted.potential = {{0, 0.4}, {1, -1.2}, {2, 0.3}};

    const Matrix h = build_hamiltonian(spec).mat;
    const Matrix hs = build_hamiltonian(shifted).mat;
    const Eigen::Index n = h.rows();
    // compare away from the open ends: (S h S^T)_{ij} = h_{i-1,j-1}
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        for (Eigen::Index j = 1; j + 1 < n; ++j)
            CHECK(hs(i, j) == doctest::Approx(h(i - 1, j - 1)).epsilon(1e-15));
}
