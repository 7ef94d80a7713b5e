#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gkpsis {

// Totients and multiplicative orders. Integer factorization is trial
// division; desk scale only.
std::uint64_t euler_phi(std::uint64_t m);
// lambda(2)=1, lambda(4)=2, lambda(2^e)=2^{e-2} for e>=3, lambda(p^e)=phi(p^e)
// for odd primes p, lcm over coprime prime-power parts.
std::uint64_t carmichael_lambda(std::uint64_t m);
// Smallest t >= 1 with a^t = 1 mod m. Requires gcd(a,m)=1.
std::uint64_t mult_order(std::uint64_t a, std::uint64_t m);
// True iff the order of a modulo m equals carmichael_lambda(m).
bool is_primitive_lambda_root(std::uint64_t a, std::uint64_t m);

// Factorization shape of X^n+1 over Z_q for prime q with gcd(2n,q)=1: one
// group per divisor d of 2n with d not dividing n. The d-th cyclotomic part
// splits into phi(d)/l distinct irreducibles of degree l = ord_d(q).
struct FactorGroup {
  std::uint64_t cyclotomic_index = 0;
  std::uint64_t degree = 0;
  std::uint64_t count = 0;
};
struct FactorShape {
  std::vector<FactorGroup> groups;  // ascending cyclotomic_index
  std::uint64_t factor_count() const;
  std::uint64_t total_degree() const;  // equals n
};
FactorShape predict_factor_shape(std::uint64_t n, std::uint64_t q);

// Dense polynomial over Z_q. coeffs[i] multiplies X^i, values in [0,q), no
// trailing zeros; the zero polynomial has an empty coefficient list.
struct PolyModQ {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }
};

PolyModQ make_poly(std::uint64_t q, std::vector<std::uint64_t> coeffs);
PolyModQ xn_plus_1(std::uint64_t n, std::uint64_t q);
bool poly_equal(const PolyModQ& a, const PolyModQ& b);
// Total order: by degree, then coefficients from the leading one down.
bool poly_less(const PolyModQ& a, const PolyModQ& b);
PolyModQ poly_add(const PolyModQ& a, const PolyModQ& b);
PolyModQ poly_sub(const PolyModQ& a, const PolyModQ& b);
PolyModQ poly_mul(const PolyModQ& a, const PolyModQ& b);
// a = quot*b + rem with deg rem < deg b. Requires b nonzero and q prime.
struct PolyDivMod {
  PolyModQ quot, rem;
};
PolyDivMod poly_divmod(const PolyModQ& a, const PolyModQ& b);
PolyModQ poly_mod(const PolyModQ& a, const PolyModQ& b);
PolyModQ poly_gcd(const PolyModQ& a, const PolyModQ& b);  // monic
PolyModQ poly_powmod(const PolyModQ& base, std::uint64_t exp,
                     const PolyModQ& mod);

// Rabin test: f of degree d is irreducible iff X^(q^d) = X mod f and
// gcd(X^(q^(d/p)) - X, f) = 1 for every prime p dividing d.
bool is_irreducible(const PolyModQ& f);

// Monic irreducible factors of X^n+1 mod q via squarefree/distinct-degree/
// equal-degree splitting. The equal-degree stage draws from a generator
// seeded from (n,q), so the result is reproducible; the list is sorted by
// poly_less and its product reconstructs X^n+1.
std::vector<PolyModQ> factor_xn_plus_1(std::uint64_t n, std::uint64_t q);

// log volume of the unit ball in dimension dim, exact via lgamma.
double log_ball_volume(std::uint64_t dim);
// Explicit Stirling bounds: sqrt(2 pi d)(d/e)^d e^(1/(12d+1)) <= d! <=
// sqrt(2 pi d)(d/e)^d e^(1/(12d)), and the induced two-sided bounds on
// (1/sigma_{2d})^(1/(2d)) around sqrt(d/(pi e)).
double log_factorial_lower(std::uint64_t d);
double log_factorial_upper(std::uint64_t d);
double inv_sigma_root_lower(std::uint64_t d);
double inv_sigma_root_upper(std::uint64_t d);
// Smallest q at which the nonzero-probability existence bound applies for
// distance parameter eps: 2n * sigma_{2n}^(1/n) / eps^2.
double existence_q_threshold(std::uint64_t n, double eps);

// Per-subset summand of the module failure-probability bound:
// smd(n,k,q,r,d) = (2 pi k d)^(-1/2) (pi e/(nk))^(kd) (r+sqrt(nk/(2q)))^(2kd).
double log_smd(std::uint64_t n, std::uint64_t k, std::uint64_t q, double r,
               std::uint64_t d);
double smd(std::uint64_t n, std::uint64_t k, std::uint64_t q, double r,
           std::uint64_t d);

// Guaranteed-distance radius sqrt(nk/(pi e)) * (1-gamma) for gamma >= 0 and
// sqrt(nk/(pi e)) for gamma < 0.
double r_guarantee(std::uint64_t n, std::uint64_t k, double gamma);

struct SubsetTerm {
  std::uint64_t d_t = 0;  // sum of factor degrees over the subset
  std::uint64_t g_t = 0;  // gcd(n, d_t)
  bool dropped = false;   // n/g_t prefactor omitted: subset product is X^(2^e)+1
  double log_term = 0.0;
  double term = 0.0;
};
struct RingProbReport {
  std::uint64_t n = 0, k = 0, q = 0;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double r_guarantee = 0.0;  // radius the terms were evaluated at
  double epsilon = 0.0;      // sum of all terms
  double log_epsilon = -std::numeric_limits<double>::infinity();
  std::vector<SubsetTerm> terms;  // one per nonempty factor subset
};

// Failure-probability bound for the scaled dual of a random symmetric module
// lattice at radius r*sqrt(q): sum over nonempty subsets T of the irreducible
// factors of X^n+1 mod q of (n/g_T) * smd(n,k,q,r,d_T), accumulated in
// log-space. The unique subset whose product equals X^(2^e)+1 loses the
// n/g_T prefactor. Requires r*sqrt(q) < q/2; refuses more than 20 factors.
RingProbReport epsilon_bound(std::uint64_t n, std::uint64_t k, std::uint64_t q,
                             double r);
// Same bound at r = r_guarantee(n, k, gamma).
RingProbReport epsilon_bound_gamma(std::uint64_t n, std::uint64_t k,
                                   std::uint64_t q, double gamma);

// Coarse split of the same bound: the smallest-degree subset term (prefactor
// dropped) plus (2^t - 1) * n * smd at the second-smallest factor degree,
// covering all remaining subsets. Avoids any hidden asymptotic constant.
struct FailureSplit {
  double dominant = 0.0;
  double tail = 0.0;
  double total = 0.0;
  std::uint64_t next_degree = 0;
};
FailureSplit dominant_tail_split(std::uint64_t n, std::uint64_t k,
                                 std::uint64_t q, double r);

enum class RingFamily { PowerOfTwo, OddTwoPrimes, FourTimesOddPrime, Unsupported };
std::string ring_family_name(RingFamily f);

struct RingDegreeShape {
  RingFamily family = RingFamily::Unsupported;
  std::uint64_t two_exponent = 0;          // e with 2^e || n
  std::vector<std::uint64_t> odd_primes;   // distinct odd prime divisors, ascending
};
// PowerOfTwo: n = 2^e, e >= 1. OddTwoPrimes: n = 2^e p1 p2 with e in {0,1}
// and p1 < p2 odd primes. FourTimesOddPrime: n = 2^e p with e >= 2.
RingDegreeShape classify_ring_degree(std::uint64_t n);

// Prime admissibility for the family of n: power-of-two rings take q = 5
// mod 8 or q = 3 mod 16; all other degrees require ord_d(q) = lambda(d) for
// every divisor d of 2n not dividing n, which makes X^n+1 split into
// phi(d)/lambda(d) irreducibles of degree lambda(d) per cyclotomic part and
// in particular makes q a primitive lambda-root modulo 2n. Always requires
// q prime and coprime to 2n.
bool ring_prime_admissible(std::uint64_t n, std::uint64_t q);

// q_min = ceil(2 pi e / gamma^2) rounded up to the next admissible prime,
// with r_guarantee(n, k, gamma). Throws when the scan window is exhausted.
struct RingParams {
  std::uint64_t q_min = 0;
  double r = 0.0;
};
RingParams select_ring_parameters(std::uint64_t n, std::uint64_t k,
                                  double gamma);

struct ParamCheck {
  std::string name;
  bool pass = false;
};
struct RingParamReport {
  std::uint64_t n = 0, k = 0, q = 0;
  RingFamily family = RingFamily::Unsupported;
  std::vector<ParamCheck> checks;
  bool ok = false;  // every check passed
};
RingParamReport validate_ring_parameters(std::uint64_t n, std::uint64_t k,
                                         std::uint64_t q);

}  // namespace gkpsis
