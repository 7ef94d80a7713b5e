#include "gkpsis/numth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "gkpsis/arith.hpp"
#include "gkpsis/primes.hpp"
#include "gkpsis/rng.hpp"

namespace gkpsis {

namespace {

constexpr double kPiE = std::numbers::pi * std::numbers::e;
constexpr std::uint64_t kFactorSeedSalt = 0x9d7f3a2c5b1e8c44ULL;
constexpr std::uint64_t kMaxFactorDegree = 4096;
constexpr std::size_t kMaxSubsetFactors = 20;

std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t m) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= m; p += (p == 2) ? 1 : 2) {
    if (m % p != 0) continue;
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

std::uint64_t ipow_u64(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::uint64_t addm(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  std::uint64_t r = a + b;
  if (r >= q) r -= q;
  return r;
}

std::uint64_t subm(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return a >= b ? a - b : a + q - b;
}

std::uint64_t mulm(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % q);
}

std::uint64_t invm(std::uint64_t a, std::uint64_t q) {
  // q prime.
  return detail::powmod_u64(a % q, q - 2, q);
}

void strip(PolyModQ& p) {
  while (!p.coeffs.empty() && p.coeffs.back() == 0) p.coeffs.pop_back();
}

PolyModQ poly_zero(std::uint64_t q) { return PolyModQ{q, {}}; }

PolyModQ poly_one(std::uint64_t q) { return PolyModQ{q, {1}}; }

PolyModQ poly_x(std::uint64_t q) { return PolyModQ{q, {0, 1}}; }

PolyModQ make_monic(const PolyModQ& p) {
  if (p.is_zero() || p.coeffs.back() == 1) return p;
  PolyModQ r = p;
  std::uint64_t inv = invm(r.coeffs.back(), r.q);
  for (auto& c : r.coeffs) c = mulm(c, inv, r.q);
  return r;
}

void check_same_q(const PolyModQ& a, const PolyModQ& b) {
  if (a.q != b.q) throw std::invalid_argument("polynomial moduli differ");
}

PolyModQ poly_powmod_big(const PolyModQ& base, const Int& exp,
                         const PolyModQ& mod) {
  PolyModQ result = poly_one(mod.q);
  if (sgn(exp) == 0) return result;
  PolyModQ b = poly_mod(base, mod);
  std::size_t bits = mpz_sizeinbase(exp.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = poly_mod(poly_mul(result, result), mod);
    if (mpz_tstbit(exp.get_mpz_t(), i))
      result = poly_mod(poly_mul(result, b), mod);
  }
  return result;
}

// Splits a product of distinct irreducible factors, all of degree d, by
// repeated gcd(r^((q^d-1)/2) - 1, g) with random r.
void equal_degree_split(const PolyModQ& g, std::uint64_t d, const Int& half,
                        Rng& rng, std::vector<PolyModQ>& out) {
  if (static_cast<std::uint64_t>(g.degree()) == d) {
    out.push_back(make_monic(g));
    return;
  }
  const std::uint64_t q = g.q;
  for (;;) {
    std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(g.degree()));
    for (auto& c : coeffs) c = rng.below(q);
    PolyModQ r = make_poly(q, std::move(coeffs));
    if (r.is_zero()) continue;
    PolyModQ c = poly_gcd(r, g);
    if (c.degree() > 0 && c.degree() < g.degree()) {
      equal_degree_split(c, d, half, rng, out);
      equal_degree_split(poly_divmod(g, c).quot, d, half, rng, out);
      return;
    }
    PolyModQ s = poly_sub(poly_powmod_big(r, half, g), poly_one(q));
    c = poly_gcd(s, g);
    if (c.degree() > 0 && c.degree() < g.degree()) {
      equal_degree_split(c, d, half, rng, out);
      equal_degree_split(poly_divmod(g, c).quot, d, half, rng, out);
      return;
    }
  }
}

double log_smd_checked(std::uint64_t n, std::uint64_t k, std::uint64_t q,
                       double r, std::uint64_t d) {
  const double m = static_cast<double>(k) * static_cast<double>(d);
  const double nk = static_cast<double>(n) * static_cast<double>(k);
  const double reach = r + std::sqrt(nk / (2.0 * static_cast<double>(q)));
  return -0.5 * std::log(2.0 * std::numbers::pi * m) + m * std::log(kPiE / nk) +
         2.0 * m * std::log(reach);
}

}  // namespace

std::uint64_t euler_phi(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("euler_phi: m must be positive");
  std::uint64_t r = 1;
  for (auto [p, e] : trial_factor(m)) r *= ipow_u64(p, e - 1) * (p - 1);
  return r;
}

std::uint64_t carmichael_lambda(std::uint64_t m) {
  if (m == 0)
    throw std::invalid_argument("carmichael_lambda: m must be positive");
  std::uint64_t r = 1;
  for (auto [p, e] : trial_factor(m)) {
    std::uint64_t part;
    if (p == 2)
      part = e == 1 ? 1 : (e == 2 ? 2 : std::uint64_t{1} << (e - 2));
    else
      part = ipow_u64(p, e - 1) * (p - 1);
    r = std::lcm(r, part);
  }
  return r;
}

std::uint64_t mult_order(std::uint64_t a, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("mult_order: m must be positive");
  if (m == 1) return 1;
  a %= m;
  if (std::gcd(a, m) != 1)
    throw std::invalid_argument("mult_order: a must be a unit modulo m");
  std::uint64_t t = carmichael_lambda(m);
  for (auto [p, e] : trial_factor(t)) {
    for (unsigned i = 0; i < e; ++i) {
      if (detail::powmod_u64(a, t / p, m) == 1)
        t /= p;
      else
        break;
    }
  }
  return t;
}

bool is_primitive_lambda_root(std::uint64_t a, std::uint64_t m) {
  return mult_order(a, m) == carmichael_lambda(m);
}

std::uint64_t FactorShape::factor_count() const {
  std::uint64_t c = 0;
  for (const auto& g : groups) c += g.count;
  return c;
}

std::uint64_t FactorShape::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& g : groups) d += g.degree * g.count;
  return d;
}

FactorShape predict_factor_shape(std::uint64_t n, std::uint64_t q) {
  if (n == 0)
    throw std::invalid_argument("predict_factor_shape: n must be positive");
  if (!is_prime_u64(q))
    throw std::invalid_argument("predict_factor_shape: q must be prime");
  if (std::gcd(2 * n, q) != 1)
    throw std::invalid_argument("predict_factor_shape: gcd(2n,q) must be 1");
  const std::uint64_t two_n = 2 * n;
  std::vector<std::uint64_t> divisors;
  for (std::uint64_t d = 1; d * d <= two_n; ++d) {
    if (two_n % d != 0) continue;
    divisors.push_back(d);
    if (d != two_n / d) divisors.push_back(two_n / d);
  }
  std::sort(divisors.begin(), divisors.end());
  FactorShape shape;
  for (std::uint64_t d : divisors) {
    if (n % d == 0) continue;
    std::uint64_t ell = mult_order(q % d, d);
    shape.groups.push_back(FactorGroup{d, ell, euler_phi(d) / ell});
  }
  return shape;
}

PolyModQ make_poly(std::uint64_t q, std::vector<std::uint64_t> coeffs) {
  if (q < 2) throw std::invalid_argument("make_poly: q must be at least 2");
  PolyModQ p{q, std::move(coeffs)};
  for (auto& c : p.coeffs) c %= q;
  strip(p);
  return p;
}

PolyModQ xn_plus_1(std::uint64_t n, std::uint64_t q) {
  std::vector<std::uint64_t> c(n + 1, 0);
  c[0] = 1;
  c[n] = 1;
  return make_poly(q, std::move(c));
}

bool poly_equal(const PolyModQ& a, const PolyModQ& b) {
  return a.q == b.q && a.coeffs == b.coeffs;
}

bool poly_less(const PolyModQ& a, const PolyModQ& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.coeffs.size(); i-- > 0;) {
    if (a.coeffs[i] != b.coeffs[i]) return a.coeffs[i] < b.coeffs[i];
  }
  return false;
}

PolyModQ poly_add(const PolyModQ& a, const PolyModQ& b) {
  check_same_q(a, b);
  PolyModQ r{a.q, {}};
  r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    std::uint64_t x = i < a.coeffs.size() ? a.coeffs[i] : 0;
    std::uint64_t y = i < b.coeffs.size() ? b.coeffs[i] : 0;
    r.coeffs[i] = addm(x, y, a.q);
  }
  strip(r);
  return r;
}

PolyModQ poly_sub(const PolyModQ& a, const PolyModQ& b) {
  check_same_q(a, b);
  PolyModQ r{a.q, {}};
  r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    std::uint64_t x = i < a.coeffs.size() ? a.coeffs[i] : 0;
    std::uint64_t y = i < b.coeffs.size() ? b.coeffs[i] : 0;
    r.coeffs[i] = subm(x, y, a.q);
  }
  strip(r);
  return r;
}

PolyModQ poly_mul(const PolyModQ& a, const PolyModQ& b) {
  check_same_q(a, b);
  if (a.is_zero() || b.is_zero()) return poly_zero(a.q);
  PolyModQ r{a.q, std::vector<std::uint64_t>(a.coeffs.size() + b.coeffs.size() - 1, 0)};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
      r.coeffs[i + j] = addm(r.coeffs[i + j], mulm(a.coeffs[i], b.coeffs[j], a.q), a.q);
    }
  }
  strip(r);
  return r;
}

PolyDivMod poly_divmod(const PolyModQ& a, const PolyModQ& b) {
  check_same_q(a, b);
  if (b.is_zero()) throw std::invalid_argument("poly_divmod: division by zero");
  PolyDivMod out{poly_zero(a.q), a};
  if (a.degree() < b.degree()) return out;
  const std::uint64_t q = a.q;
  const std::uint64_t inv_lead = invm(b.coeffs.back(), q);
  out.quot.coeffs.assign(a.coeffs.size() - b.coeffs.size() + 1, 0);
  std::vector<std::uint64_t>& rem = out.rem.coeffs;
  for (std::size_t shift = out.quot.coeffs.size(); shift-- > 0;) {
    if (rem.size() < shift + b.coeffs.size()) continue;
    std::uint64_t c = mulm(rem[shift + b.coeffs.size() - 1], inv_lead, q);
    if (c == 0) {
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
      continue;
    }
    out.quot.coeffs[shift] = c;
    for (std::size_t i = 0; i < b.coeffs.size(); ++i)
      rem[shift + i] = subm(rem[shift + i], mulm(c, b.coeffs[i], q), q);
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
  }
  strip(out.quot);
  strip(out.rem);
  return out;
}

PolyModQ poly_mod(const PolyModQ& a, const PolyModQ& b) {
  return poly_divmod(a, b).rem;
}

PolyModQ poly_gcd(const PolyModQ& a, const PolyModQ& b) {
  PolyModQ x = a, y = b;
  while (!y.is_zero()) {
    PolyModQ r = poly_mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return make_monic(x);
}

PolyModQ poly_powmod(const PolyModQ& base, std::uint64_t exp,
                     const PolyModQ& mod) {
  return poly_powmod_big(base, Int(static_cast<unsigned long>(exp)), mod);
}

bool is_irreducible(const PolyModQ& f) {
  if (f.degree() < 1) return false;
  const std::uint64_t q = f.q;
  if (!is_prime_u64(q))
    throw std::invalid_argument("is_irreducible: q must be prime");
  PolyModQ g = make_monic(f);
  const std::uint64_t d = static_cast<std::uint64_t>(g.degree());
  std::vector<std::uint64_t> proper;
  for (auto [p, e] : trial_factor(d)) proper.push_back(d / p);
  PolyModQ h = poly_mod(poly_x(q), g);
  for (std::uint64_t i = 1; i <= d; ++i) {
    h = poly_powmod(h, q, g);  // h = X^(q^i) mod g
    if (std::find(proper.begin(), proper.end(), i) != proper.end()) {
      PolyModQ c = poly_gcd(poly_sub(h, poly_x(q)), g);
      if (c.degree() != 0) return false;
    }
  }
  return poly_equal(h, poly_mod(poly_x(q), g));
}

std::vector<PolyModQ> factor_xn_plus_1(std::uint64_t n, std::uint64_t q) {
  if (n == 0 || n > kMaxFactorDegree)
    throw std::invalid_argument("factor_xn_plus_1: n out of range");
  if (!is_prime_u64(q))
    throw std::invalid_argument("factor_xn_plus_1: q must be prime");
  if (std::gcd(2 * n, q) != 1)
    throw std::invalid_argument("factor_xn_plus_1: gcd(2n,q) must be 1");
  const PolyModQ f = xn_plus_1(n, q);
  // X^n+1 divides X^{2n}-1, which is squarefree for gcd(2n,q)=1.
  Rng rng(derive_seed(kFactorSeedSalt, {n, q}));
  std::vector<PolyModQ> factors;
  PolyModQ rest = f;
  PolyModQ h = poly_mod(poly_x(q), rest);
  for (std::uint64_t d = 1; rest.degree() > 0 &&
                            2 * d <= static_cast<std::uint64_t>(rest.degree());
       ++d) {
    h = poly_powmod(h, q, rest);  // X^(q^d) mod rest
    PolyModQ block = poly_gcd(poly_sub(h, poly_x(q)), rest);
    if (block.degree() > 0) {
      Int half;
      mpz_pow_ui(half.get_mpz_t(), Int(static_cast<unsigned long>(q)).get_mpz_t(),
                 static_cast<unsigned long>(d));
      half = (half - 1) / 2;
      equal_degree_split(block, d, half, rng, factors);
      rest = poly_divmod(rest, block).quot;
      h = poly_mod(h, rest);
    }
  }
  if (rest.degree() > 0) factors.push_back(make_monic(rest));
  std::sort(factors.begin(), factors.end(), poly_less);
  PolyModQ check = poly_one(q);
  for (const auto& p : factors) check = poly_mul(check, p);
  if (!poly_equal(check, f))
    throw std::logic_error("factor_xn_plus_1: factor product mismatch");
  return factors;
}

double log_ball_volume(std::uint64_t dim) {
  const double half = static_cast<double>(dim) / 2.0;
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double log_factorial_lower(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("log_factorial_lower: d >= 1");
  const double x = static_cast<double>(d);
  return 0.5 * std::log(2.0 * std::numbers::pi * x) + x * (std::log(x) - 1.0) +
         1.0 / (12.0 * x + 1.0);
}

double log_factorial_upper(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("log_factorial_upper: d >= 1");
  const double x = static_cast<double>(d);
  return 0.5 * std::log(2.0 * std::numbers::pi * x) + x * (std::log(x) - 1.0) +
         1.0 / (12.0 * x);
}

double inv_sigma_root_lower(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("inv_sigma_root_lower: d >= 1");
  const double x = static_cast<double>(d);
  return std::exp(std::log(2.0 * std::numbers::pi * x) / (4.0 * x)) *
         std::sqrt(x / kPiE);
}

double inv_sigma_root_upper(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("inv_sigma_root_upper: d >= 1");
  const double x = static_cast<double>(d);
  return inv_sigma_root_lower(d) * std::exp(1.0 / (12.0 * x * x));
}

double existence_q_threshold(std::uint64_t n, double eps) {
  if (n == 0 || !(eps > 0))
    throw std::invalid_argument("existence_q_threshold: need n >= 1, eps > 0");
  const double root = std::exp(log_ball_volume(2 * n) / static_cast<double>(n));
  return 2.0 * static_cast<double>(n) * root / (eps * eps);
}

double log_smd(std::uint64_t n, std::uint64_t k, std::uint64_t q, double r,
               std::uint64_t d) {
  if (n == 0 || k == 0 || q == 0 || d == 0)
    throw std::invalid_argument("log_smd: parameters must be positive");
  return log_smd_checked(n, k, q, r, d);
}

double smd(std::uint64_t n, std::uint64_t k, std::uint64_t q, double r,
           std::uint64_t d) {
  return std::exp(log_smd(n, k, q, r, d));
}

double r_guarantee(std::uint64_t n, std::uint64_t k, double gamma) {
  const double base =
      std::sqrt(static_cast<double>(n) * static_cast<double>(k) / kPiE);
  return gamma >= 0 ? base * (1.0 - gamma) : base;
}

RingProbReport epsilon_bound(std::uint64_t n, std::uint64_t k, std::uint64_t q,
                             double r) {
  if (k == 0) throw std::invalid_argument("epsilon_bound: k must be positive");
  if (!(r >= 0) ||
      !(r * std::sqrt(static_cast<double>(q)) < static_cast<double>(q) / 2.0))
    throw std::invalid_argument("epsilon_bound: requires 0 <= r*sqrt(q) < q/2");
  const std::vector<PolyModQ> factors = factor_xn_plus_1(n, q);
  if (factors.size() > kMaxSubsetFactors)
    throw std::invalid_argument("epsilon_bound: more than 20 factors");
  // The unique power-of-two divisor 2^e of n with n/2^e odd gives the one
  // subset whose product is X^(2^e)+1.
  const std::uint64_t d_star = std::uint64_t{1} << std::countr_zero(n);
  const PolyModQ p_star = xn_plus_1(d_star, q);
  std::uint32_t star_mask = 0;
  std::uint64_t star_degree = 0;
  std::vector<std::uint64_t> deg(factors.size());
  for (std::size_t j = 0; j < factors.size(); ++j) {
    deg[j] = static_cast<std::uint64_t>(factors[j].degree());
    if (poly_mod(p_star, factors[j]).is_zero()) {
      star_mask |= (1u << j);
      star_degree += deg[j];
    }
  }
  if (star_degree != d_star)
    throw std::logic_error("epsilon_bound: power-of-two subset mismatch");
  RingProbReport report;
  report.n = n;
  report.k = k;
  report.q = q;
  report.r_guarantee = r;
  const std::uint32_t total = 1u << factors.size();
  report.terms.reserve(total - 1);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    std::uint64_t d = 0;
    for (std::uint32_t m = mask; m != 0; m &= m - 1)
      d += deg[static_cast<std::size_t>(std::countr_zero(m))];
    const std::uint64_t g = std::gcd(n, d);
    const bool dropped = mask == star_mask;
    double lt = log_smd_checked(n, k, q, r, d);
    if (!dropped) lt += std::log(static_cast<double>(n / g));
    report.terms.push_back(SubsetTerm{d, g, dropped, lt, std::exp(lt)});
    max_log = std::max(max_log, lt);
  }
  double acc = 0.0;
  for (const auto& t : report.terms) acc += std::exp(t.log_term - max_log);
  report.log_epsilon = max_log + std::log(acc);
  report.epsilon = std::exp(report.log_epsilon);
  return report;
}

RingProbReport epsilon_bound_gamma(std::uint64_t n, std::uint64_t k,
                                   std::uint64_t q, double gamma) {
  RingProbReport report = epsilon_bound(n, k, q, r_guarantee(n, k, gamma));
  report.gamma = gamma;
  return report;
}

FailureSplit dominant_tail_split(std::uint64_t n, std::uint64_t k,
                                 std::uint64_t q, double r) {
  if (!(r >= 0) ||
      !(r * std::sqrt(static_cast<double>(q)) < static_cast<double>(q) / 2.0))
    throw std::invalid_argument(
        "dominant_tail_split: requires 0 <= r*sqrt(q) < q/2");
  const FactorShape shape = predict_factor_shape(n, q);
  std::vector<std::uint64_t> degrees;
  for (const auto& g : shape.groups)
    degrees.insert(degrees.end(), g.count, g.degree);
  std::sort(degrees.begin(), degrees.end());
  const std::uint64_t d1 = degrees.front();
  // Every subset other than the dominant singleton has degree at least the
  // second-smallest factor degree, multiplicity included.
  const std::uint64_t d2 = degrees.size() >= 2 ? degrees[1] : d1;
  FailureSplit out;
  out.next_degree = d2;
  out.dominant = smd(n, k, q, r, d1);
  const double subsets =
      std::pow(2.0, static_cast<double>(degrees.size())) - 1.0;
  out.tail = subsets * static_cast<double>(n) * smd(n, k, q, r, d2);
  out.total = out.dominant + out.tail;
  return out;
}

std::string ring_family_name(RingFamily f) {
  switch (f) {
    case RingFamily::PowerOfTwo:
      return "power_of_two";
    case RingFamily::OddTwoPrimes:
      return "odd_two_primes";
    case RingFamily::FourTimesOddPrime:
      return "four_times_odd_prime";
    case RingFamily::Unsupported:
      break;
  }
  return "unsupported";
}

RingDegreeShape classify_ring_degree(std::uint64_t n) {
  if (n == 0)
    throw std::invalid_argument("classify_ring_degree: n must be positive");
  RingDegreeShape s;
  const unsigned e = static_cast<unsigned>(std::countr_zero(n));
  s.two_exponent = e;
  const std::uint64_t odd = n >> e;
  const auto fac = trial_factor(odd);
  for (const auto& [p, mult] : fac) s.odd_primes.push_back(p);
  if (odd == 1) {
    s.family = e >= 1 ? RingFamily::PowerOfTwo : RingFamily::Unsupported;
  } else if (fac.size() == 1 && fac[0].second == 1) {
    s.family = e >= 2 ? RingFamily::FourTimesOddPrime : RingFamily::Unsupported;
  } else if (fac.size() == 2 && fac[0].second == 1 && fac[1].second == 1) {
    s.family = e <= 1 ? RingFamily::OddTwoPrimes : RingFamily::Unsupported;
  } else {
    s.family = RingFamily::Unsupported;
  }
  return s;
}

namespace {

// ord_d(q) = lambda(d) for every divisor d of 2n that does not divide n.
// Taking d = 2n shows this implies q is a primitive lambda-root modulo 2n;
// the converse fails (q = 13, n = 30, d = 4), so the orders are checked
// divisor by divisor.
bool splits_by_carmichael_orders(std::uint64_t n, std::uint64_t q) {
  const std::uint64_t two_n = 2 * n;
  for (std::uint64_t d = 1; d * d <= two_n; ++d) {
    if (two_n % d != 0) continue;
    for (std::uint64_t dd : {d, two_n / d}) {
      if (n % dd == 0) continue;
      if (mult_order(q % dd, dd) != carmichael_lambda(dd)) return false;
    }
  }
  return true;
}

}  // namespace

bool ring_prime_admissible(std::uint64_t n, std::uint64_t q) {
  if (n == 0 || !is_prime_u64(q)) return false;
  if (std::gcd(q, 2 * n) != 1) return false;
  const RingDegreeShape shape = classify_ring_degree(n);
  if (shape.family == RingFamily::PowerOfTwo)
    return q % 8 == 5 || q % 16 == 3;
  return splits_by_carmichael_orders(n, q);
}

RingParams select_ring_parameters(std::uint64_t n, std::uint64_t k,
                                  double gamma) {
  const double q_lower = 2.0 * kPiE / (gamma * gamma);
  if (!(q_lower < 9.0e15))
    throw std::runtime_error(
        "select_ring_parameters: no admissible prime within search window");
  std::uint64_t start = static_cast<std::uint64_t>(std::ceil(q_lower));
  if (start < 2) start = 2;
  const std::uint64_t cap = start + 2'000'000;
  for (std::uint64_t q = start; q <= cap; ++q) {
    if (ring_prime_admissible(n, q)) return RingParams{q, r_guarantee(n, k, gamma)};
  }
  throw std::runtime_error(
      "select_ring_parameters: no admissible prime within search window");
}

RingParamReport validate_ring_parameters(std::uint64_t n, std::uint64_t k,
                                         std::uint64_t q) {
  RingParamReport report;
  report.n = n;
  report.k = k;
  report.q = q;
  const RingDegreeShape shape = classify_ring_degree(n);
  report.family = shape.family;
  auto add = [&report](std::string name, bool pass) {
    report.checks.push_back(ParamCheck{std::move(name), pass});
  };
  const bool prime = is_prime_u64(q);
  const bool coprime = q > 0 && std::gcd(q, 2 * n) == 1;
  add("q_prime", prime);
  add("q_coprime_2n", coprime);
  switch (shape.family) {
    case RingFamily::PowerOfTwo:
      add("q_congruence_5_mod_8_or_3_mod_16", q % 8 == 5 || q % 16 == 3);
      break;
    case RingFamily::OddTwoPrimes:
      add("gcd_p1_minus_1_p2_minus_1_is_2",
          std::gcd(shape.odd_primes[0] - 1, shape.odd_primes[1] - 1) == 2);
      add("q_primitive_lambda_root_mod_2n",
          coprime && is_primitive_lambda_root(q % (2 * n), 2 * n));
      add("xn_plus_1_splits_by_carmichael_orders",
          coprime && splits_by_carmichael_orders(n, q));
      break;
    case RingFamily::FourTimesOddPrime:
      add("q_primitive_lambda_root_mod_2n",
          coprime && is_primitive_lambda_root(q % (2 * n), 2 * n));
      add("xn_plus_1_splits_by_carmichael_orders",
          coprime && splits_by_carmichael_orders(n, q));
      break;
    case RingFamily::Unsupported:
      add("ring_degree_supported", false);
      break;
  }
  report.ok = std::all_of(report.checks.begin(), report.checks.end(),
                          [](const ParamCheck& c) { return c.pass; });
  return report;
}

}  // namespace gkpsis
