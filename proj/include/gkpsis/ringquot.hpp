#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gkpsis/exactlat.hpp"
#include "gkpsis/rng.hpp"

namespace gkpsis::ringquot {

// Element of Z_q[X]/(X^n + 1), coefficients kept in [0, q).
struct RingElem {
    long n = 0;
    long q = 0;
    std::vector<long> coeffs;

    RingElem() = default;
    RingElem(long n_, long q_) : n(n_), q(q_), coeffs(static_cast<size_t>(n_), 0) {}
    bool operator==(const RingElem&) const = default;
};

RingElem ring_add(const RingElem& a, const RingElem& b);
RingElem ring_sub(const RingElem& a, const RingElem& b);
// Negacyclic product mod q; dispatches to NTT when a plan exists for (n, q).
RingElem ring_mul(const RingElem& a, const RingElem& b);
RingElem ring_mul_schoolbook(const RingElem& a, const RingElem& b);

// Forward/inverse negacyclic NTT mod q. Exists iff n is a power of two, q is an
// odd prime and q = 1 mod 2n. psi is the smallest-witness primitive 2n-th root.
struct NttPlan {
    long n, q;
    std::uint64_t psi, psi_inv, n_inv;
    std::vector<std::uint64_t> psi_pow, psi_inv_pow;  // psi^i, psi^-i
    std::vector<std::uint64_t> w_pow, w_inv_pow;      // omega = psi^2 powers, bit usage internal

    static std::optional<NttPlan> make(long n, long q);
    std::vector<std::uint64_t> forward(std::span<const std::uint64_t> a) const;
    std::vector<std::uint64_t> inverse(std::span<const std::uint64_t> a) const;
    std::vector<std::uint64_t> multiply(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b) const;
};

enum class MulEngine { Auto, Schoolbook, Ntt };

// Exact negacyclic convolution over the integers (no reduction): the NTT engine
// runs modulo a prime Q = 1 mod 2n chosen above twice the coefficient bound and
// lifts centered representatives, so it reproduces schoolbook integers exactly.
std::vector<long long> negacyclic_mul_exact(std::span<const long long> a,
                                            std::span<const long long> b, MulEngine engine);

// Integer lift of multiplication by h: row i = coefficients of X^i * h.
exactlat::IntBasis rho_matrix(const RingElem& h);

// sigma_n = diag-block(1, -reversal(n-1)); symmetric, orthogonal, involutive.
exactlat::IntBasis sigma_n(long n);

// bar_rho(h) = sigma_n * rho(h), symmetric for every h.
exactlat::IntBasis bar_rho_matrix(const RingElem& h);

// Symmetric k x k matrix over the ring.
struct RingSymMat {
    long n = 0, q = 0, k = 0;
    std::vector<RingElem> entries;  // row-major k*k, entries[i*k+j] == entries[j*k+i]

    RingSymMat() = default;
    RingSymMat(long n_, long q_, long k_)
        : n(n_), q(q_), k(k_), entries(static_cast<size_t>(k_) * k_, RingElem(n_, q_)) {}
    const RingElem& at(long i, long j) const { return entries[static_cast<size_t>(i) * k + j]; }
    void set(long i, long j, RingElem v) {
        entries[static_cast<size_t>(i) * k + j] = v;
        entries[static_cast<size_t>(j) * k + i] = std::move(v);
    }
    bool operator==(const RingSymMat&) const = default;
};

// Uniform symmetric matrix: every coefficient of the upper triangle uniform in Z_q.
RingSymMat sample_ring_symmetric(long n, long k, long q, Rng& rng);

struct ModuleBases {
    exactlat::IntBasis m_h;      // [[I, rho(H)], [0, qI]]
    exactlat::IntBasis m_bar_h;  // [[I, bar_rho(H)], [0, qI]], q-symplectic
};

// 2nk x 2nk bases; refuses 2nk above the enumeration cap.
ModuleBases module_basis(const RingSymMat& h);

// U = (sigma_n + ... + sigma_n) + (I_n + ... + I_n), orthogonal and unimodular;
// U * M_H * U = M_bar_H, so both lattices are isometric.
exactlat::IntBasis u_matrix(long n, long k);

// z in L(M_H), i.e. z2 = z1 * rho(H) mod q, decided on ring representatives.
bool module_membership(const RingSymMat& h, std::span<const long long> z);

}  // namespace gkpsis::ringquot
