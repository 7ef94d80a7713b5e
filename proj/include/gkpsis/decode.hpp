#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkpsis/exactlat.hpp"
#include "gkpsis/ringquot.hpp"
#include "gkpsis/rng.hpp"
#include "gkpsis/siscode.hpp"

namespace gkpsis::decode {

enum class Decoder { Trivial, Babai };

std::string decoder_name(Decoder d);
std::optional<Decoder> decoder_from_name(std::string_view name);

// One syndrome-decoding round. With D the decoder lattice and M the integer
// basis of L(M_H): t = sqrt(lambda q) e M^-1, w = round(t) with the
// fractional part f = t - w in [-1/2, 1/2), syndrome_lift = f * D_basis,
// u = decoder(syndrome_lift), residual = w + u. Success iff the residual
// vector lies in the stabilizer lattice S = lambda D, i.e. residual = 0
// mod lambda componentwise.
struct DecodeTrial {
    double sigma = 0.0;
    std::vector<double> error;           // length 2nk
    std::vector<double> syndrome_lift;   // length 2nk
    std::vector<long long> decoder_coords;   // u
    std::vector<long long> coset_coords;     // w
    std::vector<long long> residual_coords;  // w + u
    bool success = false;
};

// Rounding decoder: c1 = round(sqrt(lambda q) v_i) on the first nk
// coordinates, then c2 = round((sqrt(lambda q) v' - c1 Hmat)/q) with Hmat
// the symmetric matrix itself or its ring lift. Rounds half away from zero.
// If dist(v, D) < 1/(2 sqrt(lambda q)) the output identifies the exact
// closest decoder-lattice vector. The module overload computes c1 * Hmat by
// exact negacyclic convolution with the requested engine.
std::vector<long long> bdd_trivial(const siscode::SymMatModQ& h, long lambda,
                                   std::span<const double> v);
std::vector<long long> bdd_trivial(const ringquot::RingSymMat& h, long lambda,
                                   std::span<const double> v,
                                   ringquot::MulEngine engine = ringquot::MulEngine::Auto);
std::vector<long long> bdd_trivial(const siscode::GkpCode& code,
                                   std::span<const double> v,
                                   ringquot::MulEngine engine = ringquot::MulEngine::Auto);

// Caches per-code decoding state (Hmat, decoder-lattice basis, ring blocks)
// for repeated trials. Immutable after construction; safe to share across
// threads running their own rngs.
class DecodeContext {
  public:
    explicit DecodeContext(siscode::GkpCode code,
                           ringquot::MulEngine engine = ringquot::MulEngine::Auto);

    const siscode::GkpCode& code() const { return code_; }
    ringquot::MulEngine engine() const { return engine_; }

    // Gaussian displacement with per-coordinate standard deviation sigma.
    DecodeTrial run(double sigma, Rng& rng, Decoder decoder) const;
    // Decoder step alone on an arbitrary target vector.
    std::vector<long long> decode_point(std::span<const double> v, Decoder decoder) const;

  private:
    std::vector<long long> exact_row_times_h(std::span<const long long> c) const;
    std::vector<double> real_row_times_h(std::span<const double> x) const;

    siscode::GkpCode code_;
    ringquot::MulEngine engine_;
    long m_ = 0;  // nk
    double sqrt_lq_ = 0.0;
    std::vector<double> h_real_;  // m x m row-major, Hmat as doubles
    exactlat::ScaledLattice dec_lattice_;
};

DecodeTrial decode_trial(const siscode::GkpCode& code, double sigma, Rng& rng,
                         Decoder decoder,
                         ringquot::MulEngine engine = ringquot::MulEngine::Auto);

struct RateCurvePoint {
    long n = 0, k = 0, q = 0, lambda = 0;
    Decoder decoder = Decoder::Trivial;
    double sigma = 0.0;
    long trials = 0;
    long failures = 0;
    double p_err = 0.0;
    double ci_lo = 0.0;  // 95% Wilson interval
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
};

// trials independent rounds at the given sigma; trial i draws from a fresh
// generator seeded with derive_seed(seed, {i}), so the count is independent
// of evaluation order.
RateCurvePoint error_rate(const siscode::GkpCode& code, double sigma, long trials,
                          std::uint64_t seed, Decoder decoder,
                          ringquot::MulEngine engine = ringquot::MulEngine::Auto);
RateCurvePoint error_rate(const DecodeContext& ctx, double sigma, long trials,
                          std::uint64_t seed, Decoder decoder);

}  // namespace gkpsis::decode
