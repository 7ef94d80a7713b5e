#include "gkpsis/ringquot.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "gkpsis/primes.hpp"

namespace gkpsis::ringquot {

namespace {

using detail::mulmod_u64;
using detail::powmod_u64;

bool is_pow2(long n) { return n >= 1 && (n & (n - 1)) == 0; }

void check_same_ring(const RingElem& a, const RingElem& b) {
    if (a.n != b.n || a.q != b.q) throw std::invalid_argument("ring mismatch");
}

long mod_q(long long v, long q) {
    long r = static_cast<long>(v % q);
    return r < 0 ? r + q : r;
}

}  // namespace

RingElem ring_add(const RingElem& a, const RingElem& b) {
    check_same_ring(a, b);
    RingElem c(a.n, a.q);
    for (long i = 0; i < a.n; ++i) c.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % a.q;
    return c;
}

RingElem ring_sub(const RingElem& a, const RingElem& b) {
    check_same_ring(a, b);
    RingElem c(a.n, a.q);
    for (long i = 0; i < a.n; ++i) c.coeffs[i] = mod_q(a.coeffs[i] - b.coeffs[i], a.q);
    return c;
}

RingElem ring_mul_schoolbook(const RingElem& a, const RingElem& b) {
    check_same_ring(a, b);
    long n = a.n, q = a.q;
    RingElem c(n, q);
    for (long k = 0; k < n; ++k) {
        long long acc = 0;
        for (long i = 0; i <= k; ++i) acc += static_cast<long long>(a.coeffs[i] % q) * (b.coeffs[k - i] % q);
        acc %= q;
        for (long i = k + 1; i < n; ++i) acc -= static_cast<long long>(a.coeffs[i] % q) * (b.coeffs[n + k - i] % q) % q;
        c.coeffs[k] = mod_q(acc, q);
    }
    return c;
}

std::optional<NttPlan> NttPlan::make(long n, long q) {
    if (!is_pow2(n) || n < 2) return std::nullopt;
    if (q < 3 || !is_prime_u64(static_cast<std::uint64_t>(q))) return std::nullopt;
    if ((q - 1) % (2 * n) != 0) return std::nullopt;
    std::uint64_t uq = static_cast<std::uint64_t>(q);
    std::uint64_t exp = (uq - 1) / (2 * static_cast<std::uint64_t>(n));
    std::uint64_t psi = 0;
    for (std::uint64_t a = 2; a < uq; ++a) {  // smallest witness
        std::uint64_t cand = powmod_u64(a, exp, uq);
        if (powmod_u64(cand, static_cast<std::uint64_t>(n), uq) == uq - 1) {
            psi = cand;
            break;
        }
    }
    if (psi == 0) return std::nullopt;
    NttPlan p;
    p.n = n;
    p.q = q;
    p.psi = psi;
    p.psi_inv = powmod_u64(psi, uq - 2, uq);
    p.n_inv = powmod_u64(static_cast<std::uint64_t>(n), uq - 2, uq);
    p.psi_pow.resize(n);
    p.psi_inv_pow.resize(n);
    p.w_pow.resize(n);
    p.w_inv_pow.resize(n);
    std::uint64_t w = mulmod_u64(psi, psi, uq);
    std::uint64_t winv = mulmod_u64(p.psi_inv, p.psi_inv, uq);
    p.psi_pow[0] = p.psi_inv_pow[0] = p.w_pow[0] = p.w_inv_pow[0] = 1;
    for (long i = 1; i < n; ++i) {
        p.psi_pow[i] = mulmod_u64(p.psi_pow[i - 1], psi, uq);
        p.psi_inv_pow[i] = mulmod_u64(p.psi_inv_pow[i - 1], p.psi_inv, uq);
        p.w_pow[i] = mulmod_u64(p.w_pow[i - 1], w, uq);
        p.w_inv_pow[i] = mulmod_u64(p.w_inv_pow[i - 1], winv, uq);
    }
    return p;
}

namespace {

void bit_reverse(std::vector<std::uint64_t>& a) {
    size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

void ntt_core(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& wpow,
              std::uint64_t q) {
    size_t n = a.size();
    bit_reverse(a);
    for (size_t len = 2; len <= n; len <<= 1) {
        size_t stride = n / len;
        for (size_t i = 0; i < n; i += len) {
            for (size_t j = 0; j < len / 2; ++j) {
                std::uint64_t u = a[i + j];
                std::uint64_t v = mulmod_u64(a[i + j + len / 2], wpow[j * stride], q);
                a[i + j] = u + v >= q ? u + v - q : u + v;
                a[i + j + len / 2] = u >= v ? u - v : u + q - v;
            }
        }
    }
}

}  // namespace

std::vector<std::uint64_t> NttPlan::forward(std::span<const std::uint64_t> a) const {
    std::uint64_t uq = static_cast<std::uint64_t>(q);
    std::vector<std::uint64_t> t(a.size());
    for (size_t i = 0; i < a.size(); ++i) t[i] = mulmod_u64(a[i] % uq, psi_pow[i], uq);
    ntt_core(t, w_pow, uq);
    return t;
}

std::vector<std::uint64_t> NttPlan::inverse(std::span<const std::uint64_t> a) const {
    std::uint64_t uq = static_cast<std::uint64_t>(q);
    std::vector<std::uint64_t> t(a.begin(), a.end());
    ntt_core(t, w_inv_pow, uq);
    for (size_t i = 0; i < t.size(); ++i)
        t[i] = mulmod_u64(mulmod_u64(t[i], n_inv, uq), psi_inv_pow[i], uq);
    return t;
}

std::vector<std::uint64_t> NttPlan::multiply(std::span<const std::uint64_t> a,
                                             std::span<const std::uint64_t> b) const {
    std::uint64_t uq = static_cast<std::uint64_t>(q);
    auto fa = forward(a);
    auto fb = forward(b);
    for (size_t i = 0; i < fa.size(); ++i) fa[i] = mulmod_u64(fa[i], fb[i], uq);
    return inverse(fa);
}

namespace {

const NttPlan* cached_plan(long n, long q) {
    static std::map<std::pair<long, long>, std::optional<NttPlan>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, q);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, NttPlan::make(n, q)).first;
    return it->second ? &*it->second : nullptr;
}

}  // namespace

RingElem ring_mul(const RingElem& a, const RingElem& b) {
    check_same_ring(a, b);
    const NttPlan* plan = cached_plan(a.n, a.q);
    if (!plan) return ring_mul_schoolbook(a, b);
    std::vector<std::uint64_t> ua(a.n), ub(a.n);
    for (long i = 0; i < a.n; ++i) {
        ua[i] = static_cast<std::uint64_t>(mod_q(a.coeffs[i], a.q));
        ub[i] = static_cast<std::uint64_t>(mod_q(b.coeffs[i], a.q));
    }
    auto uc = plan->multiply(ua, ub);
    RingElem c(a.n, a.q);
    for (long i = 0; i < a.n; ++i) c.coeffs[i] = static_cast<long>(uc[i]);
    return c;
}

std::vector<long long> negacyclic_mul_exact(std::span<const long long> a,
                                            std::span<const long long> b, MulEngine engine) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("length mismatch");
    long n = static_cast<long>(a.size());
    bool want_ntt = engine == MulEngine::Ntt || (engine == MulEngine::Auto && is_pow2(n) && n >= 2);
    if (want_ntt && !is_pow2(n)) throw std::invalid_argument("NTT engine needs power-of-two length");
    if (!want_ntt) {
        std::vector<long long> c(n, 0);
        for (long k = 0; k < n; ++k) {
            __int128 acc = 0;
            for (long i = 0; i <= k; ++i) acc += static_cast<__int128>(a[i]) * b[k - i];
            for (long i = k + 1; i < n; ++i) acc -= static_cast<__int128>(a[i]) * b[n + k - i];
            if (acc > INT64_MAX || acc < INT64_MIN) throw std::overflow_error("convolution overflow");
            c[k] = static_cast<long long>(acc);
        }
        return c;
    }
    // Exact integer product: pick a prime Q = 1 mod 2n above twice the value bound,
    // multiply mod Q, lift centered representatives.
    unsigned long long amax = 1, bmax = 1;
    for (long long v : a) amax = std::max(amax, static_cast<unsigned long long>(v < 0 ? -v : v));
    for (long long v : b) bmax = std::max(bmax, static_cast<unsigned long long>(v < 0 ? -v : v));
    __int128 bound = static_cast<__int128>(n) * amax * bmax;
    if (bound > (static_cast<__int128>(1) << 61)) throw std::overflow_error("convolution overflow");
    std::uint64_t need = 2 * static_cast<std::uint64_t>(bound) + 1;
    std::uint64_t step = 2 * static_cast<std::uint64_t>(n);
    std::uint64_t qq = ((need / step) + 1) * step + 1;
    while (!is_prime_u64(qq)) qq += step;
    auto plan = NttPlan::make(n, static_cast<long>(qq));
    if (!plan) throw std::logic_error("NTT plan construction failed");
    std::vector<std::uint64_t> ua(n), ub(n);
    for (long i = 0; i < n; ++i) {
        long long va = a[i] % static_cast<long long>(qq);
        long long vb = b[i] % static_cast<long long>(qq);
        ua[i] = static_cast<std::uint64_t>(va < 0 ? va + static_cast<long long>(qq) : va);
        ub[i] = static_cast<std::uint64_t>(vb < 0 ? vb + static_cast<long long>(qq) : vb);
    }
    auto uc = plan->multiply(ua, ub);
    std::vector<long long> c(n);
    for (long i = 0; i < n; ++i) {
        std::uint64_t v = uc[i];
        c[i] = v > qq / 2 ? static_cast<long long>(v) - static_cast<long long>(qq)
                          : static_cast<long long>(v);
    }
    return c;
}

exactlat::IntBasis rho_matrix(const RingElem& h) {
    long n = h.n;
    exactlat::IntBasis m(static_cast<int>(n), static_cast<int>(n));
    std::vector<long> row(h.coeffs.begin(), h.coeffs.end());
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = row[j];
        // multiply the row by X: negacyclic shift
        long last = row[n - 1];
        for (long j = n - 1; j > 0; --j) row[j] = row[j - 1];
        row[0] = -last;
    }
    return m;
}

exactlat::IntBasis sigma_n(long n) {
    exactlat::IntBasis s(static_cast<int>(n), static_cast<int>(n));
    s.at(0, 0) = 1;
    for (long i = 1; i < n; ++i) s.at(static_cast<int>(i), static_cast<int>(n - i)) = -1;
    return s;
}

exactlat::IntBasis bar_rho_matrix(const RingElem& h) { return sigma_n(h.n).mul(rho_matrix(h)); }

RingSymMat sample_ring_symmetric(long n, long k, long q, Rng& rng) {
    if (n < 1 || k < 1 || q < 2) throw std::invalid_argument("bad ring parameters");
    RingSymMat h(n, q, k);
    for (long i = 0; i < k; ++i)
        for (long j = i; j < k; ++j) {
            RingElem e(n, q);
            for (long t = 0; t < n; ++t)
                e.coeffs[t] = static_cast<long>(rng.below(static_cast<std::uint64_t>(q)));
            h.set(i, j, std::move(e));
        }
    return h;
}

namespace {

exactlat::IntBasis assemble_basis(const RingSymMat& h, bool barred) {
    long n = h.n, k = h.k, q = h.q;
    long nk = n * k;
    if (2 * nk > exactlat::kMaxEnumDim) throw std::invalid_argument("dimension exceeds enumeration cap");
    exactlat::IntBasis m(static_cast<int>(2 * nk), static_cast<int>(2 * nk));
    for (long i = 0; i < nk; ++i) {
        m.at(static_cast<int>(i), static_cast<int>(i)) = 1;
        m.at(static_cast<int>(nk + i), static_cast<int>(nk + i)) = q;
    }
    for (long bi = 0; bi < k; ++bi)
        for (long bj = 0; bj < k; ++bj) {
            exactlat::IntBasis blk =
                barred ? bar_rho_matrix(h.at(bi, bj)) : rho_matrix(h.at(bi, bj));
            for (long r = 0; r < n; ++r)
                for (long c = 0; c < n; ++c)
                    m.at(static_cast<int>(bi * n + r), static_cast<int>(nk + bj * n + c)) =
                        blk.at(static_cast<int>(r), static_cast<int>(c));
        }
    return m;
}

}  // namespace

ModuleBases module_basis(const RingSymMat& h) {
    return ModuleBases{assemble_basis(h, false), assemble_basis(h, true)};
}

exactlat::IntBasis u_matrix(long n, long k) {
    long nk = n * k;
    exactlat::IntBasis u(static_cast<int>(2 * nk), static_cast<int>(2 * nk));
    exactlat::IntBasis s = sigma_n(n);
    for (long b = 0; b < k; ++b)
        for (long r = 0; r < n; ++r)
            for (long c = 0; c < n; ++c)
                u.at(static_cast<int>(b * n + r), static_cast<int>(b * n + c)) =
                    s.at(static_cast<int>(r), static_cast<int>(c));
    for (long i = 0; i < nk; ++i) u.at(static_cast<int>(nk + i), static_cast<int>(nk + i)) = 1;
    return u;
}

bool module_membership(const RingSymMat& h, std::span<const long long> z) {
    long n = h.n, k = h.k, q = h.q;
    long nk = n * k;
    if (static_cast<long>(z.size()) != 2 * nk) throw std::invalid_argument("vector length mismatch");
    for (long j = 0; j < k; ++j) {
        RingElem acc(n, q);
        for (long i = 0; i < k; ++i) {
            RingElem zi(n, q);
            for (long t = 0; t < n; ++t) zi.coeffs[t] = mod_q(z[i * n + t], q);
            acc = ring_add(acc, ring_mul(zi, h.at(i, j)));
        }
        for (long t = 0; t < n; ++t)
            if (acc.coeffs[t] != mod_q(z[nk + j * n + t], q)) return false;
    }
    return true;
}

}  // namespace gkpsis::ringquot
