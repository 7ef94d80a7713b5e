#include <cmath>
#include <vector>

#include "doctest.h"
#include "gkpsis/exactlat.hpp"
#include "gkpsis/rng.hpp"

using namespace gkpsis;
using namespace gkpsis::exactlat;

namespace {

IntBasis random_basis(long dim, long spread, Rng& rng) {
    for (;;) {
        IntBasis b(static_cast<int>(dim), static_cast<int>(dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                b.at(i, j) = static_cast<long>(rng.below(2 * spread + 1)) - spread;
        if (b.det() != 0) return b;
    }
}

// Minimum norm over the coefficient box [-bound, bound]^rows, zero excluded.
Rat brute_min_norm_sq(const IntBasis& b, int bound) {
    const int d = b.rows();
    std::vector<int> c(static_cast<size_t>(d), -bound);
    Rat best = -1;
    for (;;) {
        bool zero = true;
        for (int v : c)
            if (v) zero = false;
        if (!zero) {
            Rat norm = 0;
            for (int j = 0; j < b.cols(); ++j) {
                Int x = 0;
                for (int i = 0; i < d; ++i) x += Int(c[static_cast<size_t>(i)]) * b.at(i, j);
                norm += Rat(x) * Rat(x);
            }
            if (best < 0 || norm < best) best = norm;
        }
        int i = 0;
        while (i < d && c[static_cast<size_t>(i)] == bound) c[static_cast<size_t>(i++)] = -bound;
        if (i == d) break;
        ++c[static_cast<size_t>(i)];
    }
    return best;
}

}  // namespace

TEST_CASE("integer matrix det oracles") {
    CHECK(IntBasis::identity(4).det() == 1);
    IntBasis a(2, 2);
    a.at(0, 0) = 3;
    a.at(1, 1) = 2;
    CHECK(a.det() == 6);
    IntBasis b(2, 2);
    b.at(0, 0) = 2;
    b.at(0, 1) = 1;
    b.at(1, 0) = 1;
    b.at(1, 1) = 1;
    CHECK(b.det() == 1);
}

TEST_CASE("symplectic form is 1-symplectic") {
    for (int m : {1, 2, 3}) {
        IntBasis j = symplectic_j(m);
        CHECK(is_q_symplectic(j, Int(1)));
        CHECK_FALSE(is_q_symplectic(j, Int(2)));
    }
}

TEST_CASE("lll output: unimodular transform, size reduction, lovasz") {
    Rng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        long dim = 2 + static_cast<long>(rng.below(3));
        IntBasis b = random_basis(dim, 9, rng);
        LllResult res = lll_reduce_with_transform(b);
        CHECK(res.reduced == res.transform.mul(b));
        Int dt = res.transform.det();
        CHECK((dt == 1 || dt == -1));
        GramSchmidtData gs = gram_schmidt(res.reduced);
        for (size_t i = 0; i < gs.mu.size(); ++i)
            for (size_t j = 0; j < gs.mu[i].size(); ++j) {
                CHECK(gs.mu[i][j] <= Rat(1, 2));
                CHECK(gs.mu[i][j] >= Rat(-1, 2));
            }
        for (size_t i = 1; i < gs.b_star_norms_sq.size(); ++i) {
            Rat lhs = gs.b_star_norms_sq[i];
            Rat mu = gs.mu[i][i - 1];
            CHECK(lhs >= (Rat(3, 4) - mu * mu) * gs.b_star_norms_sq[i - 1]);
        }
    }
}

TEST_CASE("shortest vector matches exhaustive box search") {
    Rng rng(202);
    for (int trial = 0; trial < 20; ++trial) {
        long dim = 2 + static_cast<long>(rng.below(2));
        IntBasis b = random_basis(dim, 6, rng);
        ShortestVec sv = shortest_vector({b, Rat(1)});
        IntBasis red = lll_reduce({b, Rat(1)}).basis;
        CHECK(sv.norm_sq == brute_min_norm_sq(red, 4));
        CHECK(sv.norm_sq > 0);
    }
}

TEST_CASE("shortest vector scales with scale_sq") {
    Rng rng(303);
    IntBasis b = random_basis(3, 5, rng);
    ShortestVec unit = shortest_vector({b, Rat(1)});
    ShortestVec quarter = shortest_vector({b, Rat(1, 4)});
    CHECK(quarter.norm_sq * 4 == unit.norm_sq);
}

TEST_CASE("closest vector recovers planted points") {
    Rng rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        IntBasis b = random_basis(3, 4, rng);
        std::vector<long> c(3);
        std::vector<double> t(3, 0.0);
        for (int i = 0; i < 3; ++i) c[static_cast<size_t>(i)] = static_cast<long>(rng.below(7)) - 3;
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i)
                t[static_cast<size_t>(j)] +=
                    static_cast<double>(c[static_cast<size_t>(i)]) * to_double(b.at(i, j));
            t[static_cast<size_t>(j)] += 0.05 * (rng.uniform01() - 0.5);
        }
        ClosestVec cv = closest_vector({b, Rat(1)}, t);
        for (int i = 0; i < 3; ++i)
            CHECK(cv.coords[static_cast<size_t>(i)] == c[static_cast<size_t>(i)]);
    }
}

TEST_CASE("babai never beats exact cvp and matches it near the lattice") {
    Rng rng(505);
    for (int trial = 0; trial < 10; ++trial) {
        IntBasis b = random_basis(3, 4, rng);
        ScaledLattice l{b, Rat(1)};
        std::vector<double> t(3);
        for (auto& x : t) x = 10.0 * (rng.uniform01() - 0.5);
        ClosestVec cv = closest_vector(l, t);
        std::vector<Int> bb = babai_nearest_plane(l, t);
        double d_babai = 0, d_cvp = cv.dist_sq;
        for (int j = 0; j < 3; ++j) {
            double vb = 0;
            for (int i = 0; i < 3; ++i)
                vb += to_double(bb[static_cast<size_t>(i)]) * to_double(b.at(i, j));
            d_babai += (t[static_cast<size_t>(j)] - vb) * (t[static_cast<size_t>(j)] - vb);
        }
        CHECK(d_babai >= d_cvp - 1e-9);
    }
}

TEST_CASE("symplectic dual of the dual is the original lattice") {
    Rng rng(606);
    for (int trial = 0; trial < 5; ++trial) {
        IntBasis b = random_basis(4, 3, rng);
        ScaledLattice l{b, Rat(1)};
        ScaledLattice back = symplectic_dual_basis(symplectic_dual_basis(l));
        std::vector<Int> e(4, 0);
        for (int i = 0; i < 4; ++i) {
            std::fill(e.begin(), e.end(), Int(0));
            e[static_cast<size_t>(i)] = 1;
            CHECK(lattice_contains(back, e, l));
            CHECK(lattice_contains(l, e, back));
        }
    }
}

TEST_CASE("lattice containment distinguishes sublattices") {
    IntBasis id = IntBasis::identity(2);
    IntBasis two(2, 2);
    two.at(0, 0) = 2;
    two.at(1, 1) = 2;
    ScaledLattice fine{id, Rat(1)}, coarse{two, Rat(1)};
    std::vector<Int> e0{1, 0};
    CHECK(lattice_contains(fine, e0, coarse));
    CHECK_FALSE(lattice_contains(coarse, e0, fine));
}

TEST_CASE("enumeration refuses dimensions above the cap") {
    IntBasis big = IntBasis::identity(kMaxEnumDim + 2);
    CHECK_THROWS(shortest_vector({big, Rat(1)}));
}
