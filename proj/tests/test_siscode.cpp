#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gkpsis/siscode.hpp"

using namespace gkpsis;
using namespace gkpsis::siscode;

namespace {

SymMatModQ fixed_h() {
    SymMatModQ h(2, 3);
    h.set(0, 0, 1);
    h.set(0, 1, 2);
    h.set(1, 1, 0);
    return h;
}

}  // namespace

TEST_CASE("stabilizer basis block structure and determinant") {
    SymMatModQ h = fixed_h();
    exactlat::IntBasis m = build_basis(h);
    REQUIRE(m.rows() == 4);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 2) == 1);
    CHECK(m.at(0, 3) == 2);
    CHECK(m.at(1, 2) == 2);
    CHECK(m.at(1, 3) == 0);
    CHECK(m.at(2, 2) == 3);
    CHECK(m.at(3, 3) == 3);
    CHECK(m.at(2, 0) == 0);
    CHECK(m.det() == 9);
    CHECK(exactlat::is_q_symplectic(m, Int(3)));
}

TEST_CASE("q-symplectic fails exactly when H is not symmetric") {
    SymMatModQ h(2, 5);
    h.entries = {0, 1, 2, 0};  // deliberately unmirrored
    CHECK_FALSE(exactlat::is_q_symplectic(build_basis(h), Int(5)));
}

TEST_CASE("membership is z2 = z1 H mod q") {
    Rng rng(31);
    SymMatModQ h = sample_symmetric(3, 7, rng);
    std::vector<long long> z1{2, -1, 5};
    std::vector<long long> z(6);
    for (int i = 0; i < 3; ++i) z[static_cast<size_t>(i)] = z1[static_cast<size_t>(i)];
    for (int j = 0; j < 3; ++j) {
        long long acc = 0;
        for (int i = 0; i < 3; ++i) acc += z1[static_cast<size_t>(i)] * h.at(i, j);
        z[static_cast<size_t>(3 + j)] = acc - 7 * (2 - j);  // plus a lattice shift
    }
    CHECK(lattice_membership(h, z));
    z[4] += 1;
    CHECK_FALSE(lattice_membership(h, z));
}

TEST_CASE("code factories validate lambda and dimension") {
    Rng rng(32);
    SymMatModQ h = sample_symmetric(2, 5, rng);
    CHECK_THROWS(make_sis_code(h, 1, 0));
    SymMatModQ wide = sample_symmetric(17, 3, rng);
    CHECK_THROWS(make_sis_code(wide, 2, 0));
}

TEST_CASE("stabilizer lattice sits inside the decoder lattice, index lambda^2n") {
    Rng rng(33);
    GkpCode c = make_sis_code(sample_symmetric(2, 5, rng), 2, 33);
    exactlat::ScaledLattice s = stabilizer_lattice(c);
    exactlat::ScaledLattice d = decoder_lattice(c);
    CHECK(s.scale_sq / d.scale_sq == Rat(c.lambda * c.lambda));
    std::vector<Int> e(4, 0);
    for (int i = 0; i < 4; ++i) {
        std::fill(e.begin(), e.end(), Int(0));
        e[static_cast<size_t>(i)] = 1;
        CHECK(exactlat::lattice_contains(d, e, s));
    }
    std::fill(e.begin(), e.end(), Int(0));
    e[0] = 1;
    CHECK_FALSE(exactlat::lattice_contains(s, e, d));
}

TEST_CASE("decoder lattice is the symplectic dual of the stabilizer lattice") {
    Rng rng(34);
    GkpCode c = make_sis_code(sample_symmetric(2, 7, rng), 2, 34);
    exactlat::ScaledLattice dual = exactlat::symplectic_dual_basis(stabilizer_lattice(c));
    exactlat::ScaledLattice dec = decoder_lattice(c);
    std::vector<Int> e(4, 0);
    for (int i = 0; i < 4; ++i) {
        std::fill(e.begin(), e.end(), Int(0));
        e[static_cast<size_t>(i)] = 1;
        CHECK(exactlat::lattice_contains(dec, e, dual));
        CHECK(exactlat::lattice_contains(dual, e, dec));
    }
}

TEST_CASE("logical dimension is lambda to the nk") {
    Rng rng(35);
    GkpCode sis = make_sis_code(sample_symmetric(3, 5, rng), 2, 35);
    CHECK(logical_dimension(sis) == 8);
    GkpCode mod = make_module_code(ringquot::sample_ring_symmetric(2, 2, 5, rng), 3, 36);
    CHECK(logical_dimension(mod) == 81);
}

TEST_CASE("code distance oracle for one-mode codes") {
    // L(M_H) for n=1 is spanned by (1, h) and (0, q); delta^2 = lambda_1^2/(lambda q).
    SymMatModQ h(1, 3);
    h.set(0, 0, 1);
    CodeDistance d = code_distance(make_sis_code(h, 2, 0));
    CHECK(d.delta_sq == Rat(1, 3));
    SymMatModQ h0(1, 3);
    h0.set(0, 0, 0);
    CHECK(code_distance(make_sis_code(h0, 2, 0)).delta_sq == Rat(1, 6));
}

TEST_CASE("json round trip is exact for both code kinds") {
    Rng rng(37);
    GkpCode sis = make_sis_code(sample_symmetric(3, 13, rng), 2, 37);
    CHECK(code_from_json(code_to_json(sis)) == sis);
    GkpCode mod = make_module_code(ringquot::sample_ring_symmetric(4, 1, 17, rng), 2, 38);
    CHECK(code_from_json(code_to_json(mod)) == mod);
}

TEST_CASE("bound report closed forms") {
    const double pi = std::numbers::pi, e = std::numbers::e;
    double r7 = std::sqrt(7.0 / (pi * e));
    BoundReport b = bounds(7, 211, 2, r7);
    CHECK(b.lower_target == doctest::Approx(0.6401943616357725).epsilon(1e-12));
    CHECK(b.minkowski_upper == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
    CHECK(b.covering_upper ==
          doctest::Approx(7.0 / (2.0 * std::sqrt(2.0) * std::sqrt(7.0 / (pi * e)))).epsilon(1e-12));
    CHECK(b.prob_bound == doctest::Approx(0.959123539984945).epsilon(1e-9));
    CHECK(b.precond_ok);
    CHECK(b.q_prime);
    CHECK_FALSE(b.vacuous);
    // The coarse estimate e^2/sqrt(2 pi n) exceeds 1 at n=7, the exact bound
    // does not; smaller q pushes the exact bound above 1 as well.
    CHECK(e * e / std::sqrt(2 * pi * 7) > 1.0);
    BoundReport tight = bounds(7, 101, 2, r7);
    CHECK(tight.prob_bound == doctest::Approx(2.0421871895642405).epsilon(1e-9));
    CHECK(tight.vacuous);
    BoundReport comp = bounds(7, 256, 2, r7);
    CHECK_FALSE(comp.q_prime);
}

TEST_CASE("sampling is deterministic in the seed and symmetric") {
    Rng a(99), b(99);
    SymMatModQ ha = sample_symmetric(4, 13, a);
    SymMatModQ hb = sample_symmetric(4, 13, b);
    CHECK(ha == hb);
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j) {
            CHECK(ha.at(i, j) == ha.at(j, i));
            CHECK(ha.at(i, j) >= 0);
            CHECK(ha.at(i, j) < 13);
        }
}
