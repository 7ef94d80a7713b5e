#include "gkpsis/siscode.hpp"

#include <cmath>
#include <stdexcept>

#include "gkpsis/primes.hpp"
#include "json.hpp"

namespace gkpsis::siscode {

SymMatModQ sample_symmetric(long n, long q, Rng& rng) {
    if (n < 1 || q < 2) throw std::invalid_argument("bad SIS parameters");
    SymMatModQ h(n, q);
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j)
            h.set(i, j, static_cast<long>(rng.below(static_cast<std::uint64_t>(q))));
    return h;
}

exactlat::IntBasis build_basis(const SymMatModQ& h) {
    long n = h.n;
    exactlat::IntBasis m(static_cast<int>(2 * n), static_cast<int>(2 * n));
    for (long i = 0; i < n; ++i) {
        m.at(static_cast<int>(i), static_cast<int>(i)) = 1;
        m.at(static_cast<int>(n + i), static_cast<int>(n + i)) = h.q;
        for (long j = 0; j < n; ++j)
            m.at(static_cast<int>(i), static_cast<int>(n + j)) = h.at(i, j);
    }
    return m;
}

bool lattice_membership(const SymMatModQ& h, std::span<const long long> z) {
    long n = h.n, q = h.q;
    if (static_cast<long>(z.size()) != 2 * n) throw std::invalid_argument("vector length mismatch");
    for (long j = 0; j < n; ++j) {
        long long acc = 0;
        for (long i = 0; i < n; ++i) acc += (z[i] % q) * h.at(i, j) % q;
        long long diff = (acc - z[n + j]) % q;
        if (diff != 0) return false;
    }
    return true;
}

GkpCode make_sis_code(SymMatModQ h, long lambda, std::uint64_t seed) {
    if (lambda < 2) throw std::invalid_argument("lambda must be >= 2");
    if (2 * h.n > exactlat::kMaxEnumDim) throw std::invalid_argument("dimension exceeds enumeration cap");
    GkpCode c;
    c.kind = CodeKind::Sis;
    c.lambda = lambda;
    c.seed = seed;
    c.basis = build_basis(h);
    c.h = std::move(h);
    return c;
}

GkpCode make_module_code(ringquot::RingSymMat h, long lambda, std::uint64_t seed) {
    if (lambda < 2) throw std::invalid_argument("lambda must be >= 2");
    GkpCode c;
    c.kind = CodeKind::Module;
    c.lambda = lambda;
    c.seed = seed;
    c.basis = ringquot::module_basis(h).m_h;  // enforces the dimension cap
    c.hm = std::move(h);
    return c;
}

exactlat::ScaledLattice stabilizer_lattice(const GkpCode& c) {
    return exactlat::ScaledLattice{c.basis, Rat(c.lambda, c.q())};
}

exactlat::ScaledLattice decoder_lattice(const GkpCode& c) {
    return exactlat::ScaledLattice{c.basis, Rat(1, c.lambda * c.q())};
}

Int logical_dimension(const GkpCode& c) {
    return int_pow(Int(c.lambda), static_cast<unsigned long>(c.modes()));
}

CodeDistance code_distance(const GkpCode& c) {
    auto sv = exactlat::shortest_vector(exactlat::ScaledLattice{c.basis, Rat(1)});
    Rat dsq = sv.norm_sq / Rat(c.lambda * c.q());
    dsq.canonicalize();
    return CodeDistance{dsq, std::sqrt(to_double(dsq))};
}

BoundReport bounds(long n, long q, long lambda, double r) {
    if (n < 1 || q < 2 || lambda < 1) throw std::invalid_argument("bad bound parameters");
    constexpr double pi = 3.14159265358979323846;
    constexpr double e = 2.71828182845904523536;
    BoundReport b;
    b.n = n;
    b.q = q;
    b.lambda = lambda;
    b.r = r;
    b.lower_target = std::sqrt(n / (lambda * pi * e));
    b.minkowski_upper = std::sqrt(2.0 * n / lambda);
    b.covering_upper = n / (2.0 * std::sqrt(static_cast<double>(lambda)) * std::sqrt(n / (pi * e)));
    // log sigma_2n = n log pi - log n!
    double log_sigma = n * std::log(pi) - std::lgamma(static_cast<double>(n) + 1.0);
    double base = r + std::sqrt(n / (2.0 * q));
    b.prob_bound = base <= 0 ? 0.0 : std::exp(log_sigma + 2.0 * n * std::log(base));
    b.precond_ok = r * std::sqrt(static_cast<double>(q)) < q / 2.0;
    b.q_prime = is_prime_u64(static_cast<std::uint64_t>(q));
    b.vacuous = b.prob_bound > 1.0;
    return b;
}

std::string code_to_json(const GkpCode& c) {
    nlohmann::json j;
    if (c.kind == CodeKind::Sis) {
        j["kind"] = "sis";
        j["n"] = c.h.n;
        j["q"] = c.h.q;
        j["lambda"] = c.lambda;
        j["H"] = c.h.entries;
        j["seed"] = c.seed;
    } else {
        j["kind"] = "module";
        j["n"] = c.hm.n;
        j["k"] = c.hm.k;
        j["q"] = c.hm.q;
        j["lambda"] = c.lambda;
        std::vector<std::vector<long>> blocks;
        for (const auto& e : c.hm.entries) blocks.push_back(e.coeffs);
        j["H"] = blocks;
        j["seed"] = c.seed;
    }
    return j.dump();
}

GkpCode code_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    long lambda = j.at("lambda").get<long>();
    std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    if (kind == "sis") {
        SymMatModQ h(j.at("n").get<long>(), j.at("q").get<long>());
        h.entries = j.at("H").get<std::vector<long>>();
        if (h.entries.size() != static_cast<size_t>(h.n) * h.n)
            throw std::invalid_argument("H has wrong shape");
        return make_sis_code(std::move(h), lambda, seed);
    }
    if (kind == "module") {
        long n = j.at("n").get<long>(), k = j.at("k").get<long>(), q = j.at("q").get<long>();
        ringquot::RingSymMat h(n, q, k);
        auto blocks = j.at("H").get<std::vector<std::vector<long>>>();
        if (blocks.size() != static_cast<size_t>(k) * k) throw std::invalid_argument("H has wrong shape");
        for (long i = 0; i < k * k; ++i) {
            if (blocks[i].size() != static_cast<size_t>(n)) throw std::invalid_argument("H has wrong shape");
            h.entries[i].coeffs = blocks[i];
        }
        return make_module_code(std::move(h), lambda, seed);
    }
    throw std::invalid_argument("unknown code kind");
}

}  // namespace gkpsis::siscode
