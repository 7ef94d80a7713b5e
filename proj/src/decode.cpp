#include "gkpsis/decode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace gkpsis::decode {

namespace {

constexpr double kWilsonZ = 1.959963984540054;  // 97.5% normal quantile

long long round_half_away(double x) { return std::llround(x); }

std::vector<long long> sis_row_times_h(const siscode::SymMatModQ& h,
                                       std::span<const long long> c) {
    const long m = h.n;
    std::vector<long long> out(static_cast<std::size_t>(m), 0);
    for (long j = 0; j < m; ++j) {
        __int128 acc = 0;
        for (long i = 0; i < m; ++i)
            acc += static_cast<__int128>(c[static_cast<std::size_t>(i)]) * h.at(i, j);
        const auto lo = static_cast<long long>(acc);
        if (static_cast<__int128>(lo) != acc)
            throw std::overflow_error("bdd_trivial: row product overflow");
        out[static_cast<std::size_t>(j)] = lo;
    }
    return out;
}

// (c * rho(H))_j = sum_i c_i(X) h_ij(X) mod X^n+1, exact over the integers.
std::vector<long long> module_row_times_h(const ringquot::RingSymMat& h,
                                          std::span<const long long> c,
                                          ringquot::MulEngine engine) {
    const long n = h.n, k = h.k;
    std::vector<long long> out(static_cast<std::size_t>(n) * k, 0);
    std::vector<long long> hcoeffs(static_cast<std::size_t>(n));
    for (long j = 0; j < k; ++j) {
        for (long i = 0; i < k; ++i) {
            const ringquot::RingElem& e = h.at(i, j);
            for (long t = 0; t < n; ++t)
                hcoeffs[static_cast<std::size_t>(t)] = e.coeffs[static_cast<std::size_t>(t)];
            const auto block = ringquot::negacyclic_mul_exact(
                c.subspan(static_cast<std::size_t>(i) * n, static_cast<std::size_t>(n)),
                hcoeffs, engine);
            for (long t = 0; t < n; ++t)
                out[static_cast<std::size_t>(j) * n + t] += block[static_cast<std::size_t>(t)];
        }
    }
    return out;
}

std::vector<long long> bdd_steps(std::span<const double> v, long m, long q,
                                 double sqrt_lq,
                                 const std::function<std::vector<long long>(
                                     std::span<const long long>)>& row_times_h) {
    if (static_cast<long>(v.size()) != 2 * m)
        throw std::invalid_argument("bdd_trivial: target length must be 2nk");
    std::vector<long long> c(static_cast<std::size_t>(2 * m), 0);
    std::vector<long long> c1(static_cast<std::size_t>(m), 0);
    for (long i = 0; i < m; ++i) {
        c1[static_cast<std::size_t>(i)] = round_half_away(sqrt_lq * v[static_cast<std::size_t>(i)]);
        c[static_cast<std::size_t>(i)] = c1[static_cast<std::size_t>(i)];
    }
    const std::vector<long long> c1h = row_times_h(c1);
    for (long j = 0; j < m; ++j) {
        const double num = sqrt_lq * v[static_cast<std::size_t>(m + j)] -
                           static_cast<double>(c1h[static_cast<std::size_t>(j)]);
        c[static_cast<std::size_t>(m + j)] = round_half_away(num / static_cast<double>(q));
    }
    return c;
}

}  // namespace

std::string decoder_name(Decoder d) {
    return d == Decoder::Trivial ? "trivial" : "babai";
}

std::optional<Decoder> decoder_from_name(std::string_view name) {
    if (name == "trivial") return Decoder::Trivial;
    if (name == "babai") return Decoder::Babai;
    return std::nullopt;
}

std::vector<long long> bdd_trivial(const siscode::SymMatModQ& h, long lambda,
                                   std::span<const double> v) {
    const double sqrt_lq = std::sqrt(static_cast<double>(lambda) * h.q);
    return bdd_steps(v, h.n, h.q, sqrt_lq,
                     [&h](std::span<const long long> c) { return sis_row_times_h(h, c); });
}

std::vector<long long> bdd_trivial(const ringquot::RingSymMat& h, long lambda,
                                   std::span<const double> v,
                                   ringquot::MulEngine engine) {
    const double sqrt_lq = std::sqrt(static_cast<double>(lambda) * h.q);
    return bdd_steps(v, h.n * h.k, h.q, sqrt_lq,
                     [&h, engine](std::span<const long long> c) {
                         return module_row_times_h(h, c, engine);
                     });
}

std::vector<long long> bdd_trivial(const siscode::GkpCode& code,
                                   std::span<const double> v,
                                   ringquot::MulEngine engine) {
    if (code.kind == siscode::CodeKind::Sis)
        return bdd_trivial(code.h, code.lambda, v);
    return bdd_trivial(code.hm, code.lambda, v, engine);
}

DecodeContext::DecodeContext(siscode::GkpCode code, ringquot::MulEngine engine)
    : code_(std::move(code)), engine_(engine) {
    m_ = code_.modes();
    sqrt_lq_ = std::sqrt(static_cast<double>(code_.lambda) * code_.q());
    h_real_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    if (code_.kind == siscode::CodeKind::Sis) {
        for (long i = 0; i < m_; ++i)
            for (long j = 0; j < m_; ++j)
                h_real_[static_cast<std::size_t>(i) * m_ + j] =
                    static_cast<double>(code_.h.at(i, j));
    } else {
        const long n = code_.hm.n, k = code_.hm.k;
        for (long bi = 0; bi < k; ++bi)
            for (long bj = 0; bj < k; ++bj) {
                const exactlat::IntBasis rho = ringquot::rho_matrix(code_.hm.at(bi, bj));
                for (long r = 0; r < n; ++r)
                    for (long c = 0; c < n; ++c)
                        h_real_[static_cast<std::size_t>(bi * n + r) * m_ + (bj * n + c)] =
                            to_double(rho.at(static_cast<int>(r), static_cast<int>(c)));
            }
    }
    dec_lattice_ = siscode::decoder_lattice(code_);
}

std::vector<long long> DecodeContext::exact_row_times_h(std::span<const long long> c) const {
    if (code_.kind == siscode::CodeKind::Sis) return sis_row_times_h(code_.h, c);
    return module_row_times_h(code_.hm, c, engine_);
}

std::vector<double> DecodeContext::real_row_times_h(std::span<const double> x) const {
    std::vector<double> out(static_cast<std::size_t>(m_), 0.0);
    for (long j = 0; j < m_; ++j) {
        double acc = 0.0;
        for (long i = 0; i < m_; ++i)
            acc += x[static_cast<std::size_t>(i)] * h_real_[static_cast<std::size_t>(i) * m_ + j];
        out[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

std::vector<long long> DecodeContext::decode_point(std::span<const double> v,
                                                   Decoder decoder) const {
    if (decoder == Decoder::Trivial) {
        return bdd_steps(v, m_, code_.q(), sqrt_lq_,
                         [this](std::span<const long long> c) { return exact_row_times_h(c); });
    }
    const std::vector<Int> coords = exactlat::babai_nearest_plane(dec_lattice_, v);
    std::vector<long long> out(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        out[i] = static_cast<long long>(coords[i].get_si());
    return out;
}

DecodeTrial DecodeContext::run(double sigma, Rng& rng, Decoder decoder) const {
    if (!(sigma > 0)) throw std::invalid_argument("decode_trial: sigma must be positive");
    const long dim = 2 * m_;
    DecodeTrial trial;
    trial.sigma = sigma;
    trial.error.resize(static_cast<std::size_t>(dim));
    for (auto& e : trial.error) e = sigma * rng.gaussian();

    // t = sqrt(lambda q) e M^-1 with M^-1 = [[I, -Hmat/q], [0, I/q]].
    const std::span<const double> e1(trial.error.data(), static_cast<std::size_t>(m_));
    const std::vector<double> e1h = real_row_times_h(e1);
    std::vector<double> t(static_cast<std::size_t>(dim));
    const double q = static_cast<double>(code_.q());
    for (long i = 0; i < m_; ++i) t[static_cast<std::size_t>(i)] = sqrt_lq_ * trial.error[static_cast<std::size_t>(i)];
    for (long j = 0; j < m_; ++j)
        t[static_cast<std::size_t>(m_ + j)] =
            sqrt_lq_ * (trial.error[static_cast<std::size_t>(m_ + j)] - e1h[static_cast<std::size_t>(j)]) / q;

    // w = round(t) with fraction in [-1/2, 1/2).
    trial.coset_coords.resize(static_cast<std::size_t>(dim));
    std::vector<double> f(static_cast<std::size_t>(dim));
    for (long i = 0; i < dim; ++i) {
        const double w = std::floor(t[static_cast<std::size_t>(i)] + 0.5);
        trial.coset_coords[static_cast<std::size_t>(i)] = static_cast<long long>(w);
        f[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)] - w;
    }

    // syndrome_lift = f D_basis = f M_H / sqrt(lambda q).
    const std::span<const double> f1(f.data(), static_cast<std::size_t>(m_));
    const std::vector<double> f1h = real_row_times_h(f1);
    trial.syndrome_lift.resize(static_cast<std::size_t>(dim));
    for (long i = 0; i < m_; ++i)
        trial.syndrome_lift[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)] / sqrt_lq_;
    for (long j = 0; j < m_; ++j)
        trial.syndrome_lift[static_cast<std::size_t>(m_ + j)] =
            (f1h[static_cast<std::size_t>(j)] + q * f[static_cast<std::size_t>(m_ + j)]) / sqrt_lq_;

    trial.decoder_coords = decode_point(trial.syndrome_lift, decoder);

    trial.residual_coords.resize(static_cast<std::size_t>(dim));
    trial.success = true;
    const long long lambda = code_.lambda;
    for (long i = 0; i < dim; ++i) {
        const long long r = trial.coset_coords[static_cast<std::size_t>(i)] +
                            trial.decoder_coords[static_cast<std::size_t>(i)];
        trial.residual_coords[static_cast<std::size_t>(i)] = r;
        if (((r % lambda) + lambda) % lambda != 0) trial.success = false;
    }
    return trial;
}

DecodeTrial decode_trial(const siscode::GkpCode& code, double sigma, Rng& rng,
                         Decoder decoder, ringquot::MulEngine engine) {
    return DecodeContext(code, engine).run(sigma, rng, decoder);
}

RateCurvePoint error_rate(const DecodeContext& ctx, double sigma, long trials,
                          std::uint64_t seed, Decoder decoder) {
    if (trials < 1) throw std::invalid_argument("error_rate: trials must be >= 1");
    long failures = 0;
    for (long i = 0; i < trials; ++i) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        if (!ctx.run(sigma, rng, decoder).success) ++failures;
    }
    const siscode::GkpCode& code = ctx.code();
    RateCurvePoint pt;
    pt.n = code.n();
    pt.k = code.k();
    pt.q = code.q();
    pt.lambda = code.lambda;
    pt.decoder = decoder;
    pt.sigma = sigma;
    pt.trials = trials;
    pt.failures = failures;
    pt.p_err = static_cast<double>(failures) / static_cast<double>(trials);
    const double nn = static_cast<double>(trials);
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / nn;
    const double center = (pt.p_err + z2 / (2.0 * nn)) / denom;
    const double half = kWilsonZ *
                        std::sqrt(pt.p_err * (1.0 - pt.p_err) / nn + z2 / (4.0 * nn * nn)) /
                        denom;
    pt.ci_lo = std::max(0.0, center - half);
    pt.ci_hi = std::min(1.0, center + half);
    pt.seed = seed;
    return pt;
}

RateCurvePoint error_rate(const siscode::GkpCode& code, double sigma, long trials,
                          std::uint64_t seed, Decoder decoder,
                          ringquot::MulEngine engine) {
    return error_rate(DecodeContext(code, engine), sigma, trials, seed, decoder);
}

}  // namespace gkpsis::decode
