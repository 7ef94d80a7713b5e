#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "gkpsis/decode.hpp"
#include "gkpsis/rng.hpp"

using namespace gkpsis;
using namespace gkpsis::decode;

namespace {

siscode::GkpCode small_code(long n, long q, long lambda, std::uint64_t seed) {
    Rng rng(seed);
    return siscode::make_sis_code(siscode::sample_symmetric(n, q, rng), lambda, seed);
}

std::vector<double> lattice_point(const siscode::GkpCode& c, std::span<const long long> z) {
    const int d = c.basis.rows();
    const double s = std::sqrt(static_cast<double>(c.lambda * c.q()));
    std::vector<double> v(static_cast<size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        double acc = 0;
        for (int i = 0; i < d; ++i)
            acc += static_cast<double>(z[static_cast<size_t>(i)]) * c.basis.at(i, j).get_d();
        v[static_cast<size_t>(j)] = acc / s;
    }
    return v;
}

}  // namespace

TEST_CASE("decoder names round trip") {
    CHECK(decoder_name(Decoder::Trivial) == "trivial");
    CHECK(decoder_name(Decoder::Babai) == "babai");
    CHECK(decoder_from_name("trivial") == Decoder::Trivial);
    CHECK(decoder_from_name("babai") == Decoder::Babai);
    CHECK_FALSE(decoder_from_name("nearest").has_value());
}

TEST_CASE("zero input decodes to the zero vector") {
    siscode::GkpCode c = small_code(3, 7, 2, 11);
    std::vector<double> v(6, 0.0);
    for (long long u : bdd_trivial(c, v)) CHECK(u == 0);
}

TEST_CASE("hand-checked one-mode decode") {
    // H = [1], q = 3, lambda = 2: decoder lattice (1/sqrt(6)) L([[1,1],[0,3]]).
    // Target (1,4)/sqrt(6) plus a small offset decodes to coordinates (1,1).
    siscode::SymMatModQ h(1, 3);
    h.set(0, 0, 1);
    siscode::GkpCode c = siscode::make_sis_code(h, 2, 0);
    double s = std::sqrt(6.0);
    std::vector<double> v{1.0 / s + 0.03, 4.0 / s - 0.02};
    std::vector<long long> got = bdd_trivial(c, v);
    REQUIRE(got.size() == 2);
    CHECK(got[0] == 1);
    CHECK(got[1] == 1);
    exactlat::ClosestVec cv = exactlat::closest_vector(siscode::decoder_lattice(c), v);
    CHECK(cv.coords[0].get_si() == got[0]);
    CHECK(cv.coords[1].get_si() == got[1]);
}

TEST_CASE("planted points within the guarantee radius decode exactly") {
    Rng rng(12);
    siscode::GkpCode c = small_code(2, 5, 2, 12);
    exactlat::ScaledLattice dec = siscode::decoder_lattice(c);
    for (int t = 0; t < 50; ++t) {
        std::vector<long long> z(4);
        for (auto& zi : z) zi = static_cast<long long>(rng.below(7)) - 3;
        std::vector<double> v = lattice_point(c, z);
        for (auto& vi : v) vi += 0.01 * (rng.uniform01() - 0.5);
        std::vector<long long> got = bdd_trivial(c, v);
        exactlat::ClosestVec cv = exactlat::closest_vector(dec, v);
        for (size_t i = 0; i < 4; ++i) {
            CHECK(got[i] == z[i]);
            CHECK(cv.coords[i].get_si() == z[i]);
        }
    }
}

TEST_CASE("decoding commutes with lattice translations") {
    Rng rng(13);
    siscode::GkpCode c = small_code(2, 7, 2, 13);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> v(4);
        for (auto& vi : v) vi = 2.0 * (rng.uniform01() - 0.5);
        std::vector<long long> s(4);
        for (auto& si : s) si = static_cast<long long>(rng.below(9)) - 4;
        std::vector<double> shift = lattice_point(c, s);
        std::vector<double> w(4);
        for (size_t i = 0; i < 4; ++i) w[i] = v[i] + shift[i];
        std::vector<long long> base = bdd_trivial(c, v);
        std::vector<long long> moved = bdd_trivial(c, w);
        for (size_t i = 0; i < 4; ++i) CHECK(moved[i] == base[i] + s[i]);
    }
}

TEST_CASE("trial bookkeeping: residual, success bit, tiny-noise success") {
    siscode::GkpCode c = small_code(2, 5, 2, 14);
    DecodeContext ctx(c);
    Rng quiet(140);
    for (int t = 0; t < 20; ++t) {
        DecodeTrial tr = ctx.run(1e-7, quiet, Decoder::Trivial);
        CHECK(tr.success);
    }
    Rng noisy(141);
    int seen_fail = 0, seen_ok = 0;
    for (int t = 0; t < 200; ++t) {
        DecodeTrial tr = ctx.run(0.18, noisy, Decoder::Trivial);
        bool residual_trivial = true;
        for (size_t i = 0; i < tr.residual_coords.size(); ++i) {
            CHECK(tr.residual_coords[i] == tr.coset_coords[i] + tr.decoder_coords[i]);
            if (tr.residual_coords[i] % 2 != 0) residual_trivial = false;
        }
        CHECK(tr.success == residual_trivial);
        (tr.success ? seen_ok : seen_fail)++;
    }
    CHECK(seen_ok > 0);
    CHECK(seen_fail > 0);
}

TEST_CASE("error rate is reproducible and matches a manual trial loop") {
    siscode::GkpCode c = small_code(2, 5, 2, 99);
    RateCurvePoint a = error_rate(c, 0.15, 300, 77, Decoder::Trivial);
    RateCurvePoint b = error_rate(c, 0.15, 300, 77, Decoder::Trivial);
    CHECK(a.failures == b.failures);
    CHECK(a.p_err == static_cast<double>(a.failures) / 300.0);
    CHECK(a.ci_lo <= a.p_err);
    CHECK(a.p_err <= a.ci_hi);
    CHECK(a.ci_lo >= 0.0);
    CHECK(a.ci_hi <= 1.0);
    CHECK(a.seed == 77);
    CHECK(a.n == 2);
    CHECK(a.q == 5);

    long manual = 0;
    for (long i = 0; i < 300; ++i) {
        Rng r(derive_seed(77, {static_cast<std::uint64_t>(i)}));
        if (!decode_trial(c, 0.15, r, Decoder::Trivial).success) ++manual;
    }
    CHECK(manual == a.failures);

    DecodeContext ctx(c);
    CHECK(error_rate(ctx, 0.15, 300, 77, Decoder::Trivial).failures == a.failures);
}

TEST_CASE("babai recovers exact lattice points") {
    Rng rng(15);
    siscode::GkpCode c = small_code(2, 5, 2, 15);
    DecodeContext ctx(c);
    for (int t = 0; t < 20; ++t) {
        std::vector<long long> z(4);
        for (auto& zi : z) zi = static_cast<long long>(rng.below(5)) - 2;
        std::vector<long long> got = ctx.decode_point(lattice_point(c, z), Decoder::Babai);
        for (size_t i = 0; i < 4; ++i) CHECK(got[i] == z[i]);
    }
}

TEST_CASE("module decode trials are engine independent bit for bit") {
    Rng sampler(16);
    ringquot::RingSymMat h = ringquot::sample_ring_symmetric(4, 1, 17, sampler);
    siscode::GkpCode c = siscode::make_module_code(h, 2, 16);
    DecodeContext ntt(c, ringquot::MulEngine::Ntt);
    DecodeContext school(c, ringquot::MulEngine::Schoolbook);
    for (int t = 0; t < 30; ++t) {
        std::uint64_t s = derive_seed(900, {static_cast<std::uint64_t>(t)});
        Rng ra(s), rb(s);
        DecodeTrial ta = ntt.run(0.12, ra, Decoder::Trivial);
        DecodeTrial tb = school.run(0.12, rb, Decoder::Trivial);
        CHECK(ta.error == tb.error);
        CHECK(ta.syndrome_lift == tb.syndrome_lift);
        CHECK(ta.decoder_coords == tb.decoder_coords);
        CHECK(ta.coset_coords == tb.coset_coords);
        CHECK(ta.residual_coords == tb.residual_coords);
        CHECK(ta.success == tb.success);
    }
}
