#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gkpsis/exactlat.hpp"
#include "gkpsis/ringquot.hpp"
#include "gkpsis/rng.hpp"

namespace gkpsis::siscode {

// Symmetric matrix over Z_q, entries stored in [0, q).
struct SymMatModQ {
    long n = 0, q = 0;
    std::vector<long> entries;  // row-major n*n

    SymMatModQ() = default;
    SymMatModQ(long n_, long q_) : n(n_), q(q_), entries(static_cast<size_t>(n_) * n_, 0) {}
    long at(long i, long j) const { return entries[static_cast<size_t>(i) * n + j]; }
    void set(long i, long j, long v) {
        entries[static_cast<size_t>(i) * n + j] = v;
        entries[static_cast<size_t>(j) * n + i] = v;
    }
    bool operator==(const SymMatModQ&) const = default;
};

// Uniform over symmetric matrices: upper triangle i.i.d. uniform on Z_q, mirrored.
// q >= 2 accepted; the probability bounds require q prime and say so in their reports.
SymMatModQ sample_symmetric(long n, long q, Rng& rng);

// M_H = [[I_n, H], [0_n, q I_n]]; det q^n; q-symplectic.
exactlat::IntBasis build_basis(const SymMatModQ& h);

// z in L(M_H), i.e. z2 = z1 H mod q (row-vector convention).
bool lattice_membership(const SymMatModQ& h, std::span<const long long> z);

enum class CodeKind { Sis, Module };

// GKP code from an SIS or M-SIS lattice. Stabilizer lattice S = sqrt(lambda/q) L(M_H),
// decoder lattice D = S^x = (1/sqrt(lambda q)) L(M_H); S = lambda * D as sets.
struct GkpCode {
    CodeKind kind = CodeKind::Sis;
    long lambda = 2;
    std::uint64_t seed = 0;
    SymMatModQ h;             // Sis payload
    ringquot::RingSymMat hm;  // Module payload
    exactlat::IntBasis basis; // M_H

    long q() const { return kind == CodeKind::Sis ? h.q : hm.q; }
    long n() const { return kind == CodeKind::Sis ? h.n : hm.n; }
    long k() const { return kind == CodeKind::Sis ? 1 : hm.k; }
    long modes() const { return n() * k(); }
    bool operator==(const GkpCode&) const = default;
};

GkpCode make_sis_code(SymMatModQ h, long lambda, std::uint64_t seed);
GkpCode make_module_code(ringquot::RingSymMat h, long lambda, std::uint64_t seed);

exactlat::ScaledLattice stabilizer_lattice(const GkpCode& c);
exactlat::ScaledLattice decoder_lattice(const GkpCode& c);

// lambda^(n k)
Int logical_dimension(const GkpCode& c);

struct CodeDistance {
    Rat delta_sq;  // exact: lambda_1(L_perp)^2 / (lambda q)
    double delta;
};

// Exact code distance via enumeration; dimension cap 2nk <= 32.
CodeDistance code_distance(const GkpCode& c);

// Closed-form distance bounds and the random-construction probability bound.
struct BoundReport {
    long n = 0, q = 0, lambda = 0;
    double r = 0;
    double lower_target = 0;     // sqrt(n/(lambda pi e))
    double minkowski_upper = 0;  // sqrt(2n/lambda)
    double covering_upper = 0;   // n / (2 sqrt(lambda) * sqrt(n/(pi e)))
    double prob_bound = 0;       // sigma_2n (r + sqrt(n/2q))^{2n}
    bool precond_ok = false;     // r sqrt(q) < q/2
    bool q_prime = false;        // the probability statement assumes q prime
    bool vacuous = false;        // prob_bound > 1
};

BoundReport bounds(long n, long q, long lambda, double r);

// JSON round-trip, bit-exact.
std::string code_to_json(const GkpCode& c);
GkpCode code_from_json(const std::string& text);

}  // namespace gkpsis::siscode
