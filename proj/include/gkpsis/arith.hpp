#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gkpsis {

using Int = mpz_class;
using Rat = mpq_class;

inline double to_double(const Rat& x) { return x.get_d(); }
inline double to_double(const Int& x) { return x.get_d(); }

// Nearest integer, ties rounded away from zero.
inline Int round_nearest(const Rat& x) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    // x = q + r/den with 0 <= r < den
    Int twice = 2 * r;
    int c = cmp(twice, Int(x.get_den()));
    if (c > 0) return q + 1;
    if (c < 0) return q;
    // tie at .5: away from zero
    return sgn(x) >= 0 ? q + 1 : q;
}

inline Int floor_rat(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

// "num/den" with an explicit denominator, exact round-trip.
inline std::string rat_repr(const Rat& x) {
    Rat c = x;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat rat_from_repr(std::string_view s) {
    Rat x(std::string(s), 10);
    x.canonicalize();
    return x;
}

// Exact square root of a nonnegative rational if it is a perfect square.
inline bool rat_sqrt_exact(const Rat& x, Rat& out) {
    if (sgn(x) < 0) return false;
    if (mpz_perfect_square_p(x.get_num().get_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(x.get_den().get_mpz_t()) == 0) return false;
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den().get_mpz_t());
    out = Rat(n, d);
    out.canonicalize();
    return true;
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

}  // namespace gkpsis
