// Acceptance gate. Each criterion prints one PASS/FAIL line with its
// measured quantities; the exit code is the number of failures. Tolerances
// are pinned next to the checks they guard.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "gkpsis/decode.hpp"
#include "gkpsis/numth.hpp"
#include "gkpsis/ringquot.hpp"
#include "gkpsis/simcli.hpp"
#include "gkpsis/siscode.hpp"

using namespace gkpsis;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Criterion 5 tally: every code distance computed anywhere in this binary.
long g_dist_checked = 0;
long g_minkowski_violations = 0;

void record_distance(const siscode::GkpCode& c, double delta) {
    double cap = std::sqrt(2.0 * static_cast<double>(c.n() * c.k()) /
                           static_cast<double>(c.lambda));
    ++g_dist_checked;
    if (delta > cap + 1e-12) ++g_minkowski_violations;
}

Outcome symplectic_construction() {
    long bad = 0, done = 0;
    for (long n : {2L, 3L, 4L}) {
        for (long q : {3L, 5L, 13L, 257L}) {
            Rng rng(derive_seed(101, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(q)}));
            for (int t = 0; t < 100; ++t, ++done) {
                siscode::SymMatModQ h = siscode::sample_symmetric(n, q, rng);
                if (!exactlat::is_q_symplectic(siscode::build_basis(h), Int(q))) ++bad;
            }
        }
    }
    for (auto [n, k] : std::vector<std::pair<long, long>>{{2, 1}, {4, 1}, {2, 2}}) {
        Rng rng(derive_seed(102, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)}));
        for (int t = 0; t < 100; ++t, ++done) {
            ringquot::RingSymMat h = ringquot::sample_ring_symmetric(n, k, 13, rng);
            if (!exactlat::is_q_symplectic(ringquot::module_basis(h).m_bar_h, Int(13))) ++bad;
        }
    }
    return {bad == 0, std::to_string(done) + " bases, " + std::to_string(bad) + " non-symplectic"};
}

Outcome svp_vs_exhaustive() {
    Rng rng(201);
    long mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int d = 2 + trial % 5;
        exactlat::IntBasis b(d, d);
        do {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    b.at(i, j) = static_cast<long>(rng.below(11)) - 5;
        } while (b.det() == 0);
        exactlat::IntBasis red = exactlat::lll_reduce({b, Rat(1)}).basis;
        // Exhaustive coefficient search over [-4,4]^d on the reduced basis.
        long long best = -1;
        std::vector<int> c(static_cast<size_t>(d), -4);
        while (true) {
            bool zero = true;
            for (int v : c) zero = zero && v == 0;
            if (!zero) {
                long long norm = 0;
                for (int j = 0; j < d; ++j) {
                    long long x = 0;
                    for (int i = 0; i < d; ++i)
                        x += static_cast<long long>(c[static_cast<size_t>(i)]) * red.at(i, j).get_si();
                    norm += x * x;
                }
                if (best < 0 || norm < best) best = norm;
            }
            int pos = 0;
            while (pos < d && c[static_cast<size_t>(pos)] == 4) {
                c[static_cast<size_t>(pos)] = -4;
                ++pos;
            }
            if (pos == d) break;
            ++c[static_cast<size_t>(pos)];
        }
        exactlat::ShortestVec sv = exactlat::shortest_vector({red, Rat(1)});
        if (sv.norm_sq != Rat(static_cast<long>(best))) ++mismatches;
    }
    return {mismatches == 0, "50 lattices dim 2..6, " + std::to_string(mismatches) + " mismatches"};
}

Outcome planted_bdd_matches_cvp() {
    auto t0 = std::chrono::steady_clock::now();
    long total = 0, wrong = 0;
    for (long n : {2L, 3L, 4L}) {
        for (long q : {3L, 5L, 7L}) {
            Rng rng(derive_seed(301, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(q)}));
            siscode::GkpCode c =
                siscode::make_sis_code(siscode::sample_symmetric(n, q, rng), 2, 301);
            exactlat::ScaledLattice dec = siscode::decoder_lattice(c);
            const double s = std::sqrt(static_cast<double>(2 * q));
            const int d = 2 * static_cast<int>(n);
            for (int t = 0; t < 10000; ++t, ++total) {
                std::vector<long long> z(static_cast<size_t>(d));
                for (auto& zi : z) zi = static_cast<long long>(rng.below(11)) - 5;
                std::vector<double> v(static_cast<size_t>(d), 0.0);
                for (int j = 0; j < d; ++j) {
                    double acc = 0;
                    for (int i = 0; i < d; ++i)
                        acc += static_cast<double>(z[static_cast<size_t>(i)]) * c.basis.at(i, j).get_d();
                    v[static_cast<size_t>(j)] = acc / s;
                }
                // Perturbation of norm 0.9 / (2 sqrt(lambda q)): inside the
                // exact-decoding radius.
                std::vector<double> dir(static_cast<size_t>(d));
                double nn = 0;
                for (auto& x : dir) {
                    x = rng.gaussian();
                    nn += x * x;
                }
                nn = std::sqrt(nn);
                for (int j = 0; j < d; ++j)
                    v[static_cast<size_t>(j)] += dir[static_cast<size_t>(j)] / nn * 0.45 / s;
                std::vector<long long> got = decode::bdd_trivial(c, v);
                exactlat::ClosestVec cv = exactlat::closest_vector(dec, v);
                for (int i = 0; i < d; ++i)
                    if (cv.coords[static_cast<size_t>(i)].get_si() != got[static_cast<size_t>(i)]) {
                        ++wrong;
                        break;
                    }
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = wrong == 0 && secs < 60.0;
    return {pass, std::to_string(total) + " instances, " + std::to_string(wrong) +
                      " disagreements, " + fmt("%.1f", secs) + "s (cap 60s)"};
}

Outcome random_code_distance_rate() {
    const double target = std::sqrt(7.0 / (2.0 * std::numbers::pi * std::numbers::e));
    long above = 0;
    for (int i = 0; i < 200; ++i) {
        Rng rng(derive_seed(401, {static_cast<std::uint64_t>(i)}));
        siscode::GkpCode c = siscode::make_sis_code(siscode::sample_symmetric(7, 256, rng), 2,
                                                    derive_seed(401, {static_cast<std::uint64_t>(i)}));
        siscode::CodeDistance d = siscode::code_distance(c);
        record_distance(c, d.delta);
        if (d.delta > target) ++above;
    }
    double frac = static_cast<double>(above) / 200.0;
    return {frac >= 0.85, "fraction above " + fmt("%.4f", target) + ": " + fmt("%.3f", frac) +
                              " (threshold 0.85)"};
}

void extra_distance_sweep() {
    for (long n : {2L, 3L, 4L})
        for (long q : {3L, 5L, 13L})
            for (long lambda : {2L, 3L})
                for (int i = 0; i < 5; ++i) {
                    Rng rng(derive_seed(402, {static_cast<std::uint64_t>(n),
                                              static_cast<std::uint64_t>(q),
                                              static_cast<std::uint64_t>(lambda),
                                              static_cast<std::uint64_t>(i)}));
                    siscode::GkpCode c = siscode::make_sis_code(
                        siscode::sample_symmetric(n, q, rng), lambda, 402);
                    record_distance(c, siscode::code_distance(c).delta);
                }
    for (auto [n, k] : std::vector<std::pair<long, long>>{{2, 1}, {4, 1}, {2, 2}})
        for (long q : {5L, 13L})
            for (int i = 0; i < 5; ++i) {
                Rng rng(derive_seed(403, {static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(k),
                                          static_cast<std::uint64_t>(q),
                                          static_cast<std::uint64_t>(i)}));
                siscode::GkpCode c = siscode::make_module_code(
                    ringquot::sample_ring_symmetric(n, k, q, rng), 2, 403);
                record_distance(c, siscode::code_distance(c).delta);
            }
}

Outcome minkowski_never_violated() {
    return {g_dist_checked > 0 && g_minkowski_violations == 0,
            std::to_string(g_dist_checked) + " distances checked, " +
                std::to_string(g_minkowski_violations) + " above sqrt(2nk/lambda)"};
}

Outcome module_lattice_pair_minimum() {
    long mismatches = 0, done = 0;
    for (long n : {2L, 4L}) {
        for (int t = 0; t < 50; ++t, ++done) {
            long q = t % 2 == 0 ? 5 : 13;
            Rng rng(derive_seed(601, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t)}));
            ringquot::RingSymMat h = ringquot::sample_ring_symmetric(n, 1, q, rng);
            ringquot::ModuleBases mb = ringquot::module_basis(h);
            exactlat::ShortestVec a = exactlat::shortest_vector({mb.m_h, Rat(1)});
            exactlat::ShortestVec b = exactlat::shortest_vector({mb.m_bar_h, Rat(1)});
            if (a.norm_sq != b.norm_sq) ++mismatches;
        }
    }
    return {mismatches == 0,
            std::to_string(done) + " pairs, " + std::to_string(mismatches) + " unequal minima"};
}

Outcome two_factor_splitting() {
    long bad = 0, done = 0;
    for (std::uint64_t n : {8ull, 16ull}) {
        for (std::uint64_t q : {5ull, 13ull, 29ull}) {
            ++done;
            std::vector<PolyModQ> fs = factor_xn_plus_1(n, q);
            FactorShape shape = predict_factor_shape(n, q);
            bool ok = fs.size() == 2 && shape.factor_count() == 2;
            PolyModQ prod = make_poly(q, {1});
            for (const auto& f : fs) {
                ok = ok && static_cast<std::uint64_t>(f.degree()) == n / 2 && is_irreducible(f);
                prod = poly_mul(prod, f);
            }
            for (const auto& g : shape.groups) ok = ok && g.degree == n / 2;
            ok = ok && poly_equal(prod, xn_plus_1(n, q));
            if (!ok) ++bad;
        }
    }
    return {bad == 0, std::to_string(done) + " (n,q) pairs, " + std::to_string(bad) + " wrong shapes"};
}

Outcome membership_monte_carlo() {
    const long trials = 100000;
    const double p = 1.0 / 9.0;
    const double four_sigma = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    Rng rng(801);
    long hit_sis = 0;
    std::vector<long long> z_sis{1, 2, 2, 1};  // z1 = (1,2) nonzero mod 3
    for (long t = 0; t < trials; ++t) {
        siscode::SymMatModQ h = siscode::sample_symmetric(2, 3, rng);
        if (siscode::lattice_membership(h, z_sis)) ++hit_sis;
    }
    Rng rng2(802);
    long hit_ring = 0;
    std::vector<long long> z_ring{1, 1, 2, 0};  // z1 = 1 + X, a unit in F_9
    for (long t = 0; t < trials; ++t) {
        ringquot::RingSymMat h = ringquot::sample_ring_symmetric(2, 1, 3, rng2);
        if (ringquot::module_membership(h, z_ring)) ++hit_ring;
    }
    double f_sis = static_cast<double>(hit_sis) / static_cast<double>(trials);
    double f_ring = static_cast<double>(hit_ring) / static_cast<double>(trials);
    bool pass = std::abs(f_sis - p) <= four_sigma && std::abs(f_ring - p) <= four_sigma;
    return {pass, "freq " + fmt("%.5f", f_sis) + " / " + fmt("%.5f", f_ring) + " vs 1/9 = " +
                      fmt("%.5f", p) + " +- " + fmt("%.5f", four_sigma)};
}

Outcome ntt_equals_schoolbook() {
    long bad = 0, done = 0;
    for (auto [n, q] : std::vector<std::pair<long, long>>{{8, 17}, {16, 97}}) {
        auto plan = ringquot::NttPlan::make(n, q);
        if (!plan) return {false, "missing plan for admissible (n,q)"};
        Rng rng(derive_seed(901, {static_cast<std::uint64_t>(n)}));
        for (int t = 0; t < 1000; ++t, ++done) {
            ringquot::RingElem a(n, q), b(n, q);
            for (auto& c : a.coeffs) c = static_cast<long>(rng.below(static_cast<std::uint64_t>(q)));
            for (auto& c : b.coeffs) c = static_cast<long>(rng.below(static_cast<std::uint64_t>(q)));
            std::vector<std::uint64_t> ua(a.coeffs.begin(), a.coeffs.end());
            std::vector<std::uint64_t> ub(b.coeffs.begin(), b.coeffs.end());
            if (plan->inverse(plan->forward(ua)) != ua) ++bad;
            ringquot::RingElem ref = ringquot::ring_mul_schoolbook(a, b);
            std::vector<std::uint64_t> got = plan->multiply(ua, ub);
            for (long i = 0; i < n; ++i)
                if (got[static_cast<size_t>(i)] !=
                    static_cast<std::uint64_t>(ref.coeffs[static_cast<size_t>(i)])) {
                    ++bad;
                    break;
                }
        }
    }
    return {bad == 0, std::to_string(done) + " pairs, " + std::to_string(bad) + " disagreements"};
}

decode::RateCurvePoint rate_point(long n, long q, double sigma, std::uint64_t master) {
    Rng rng(derive_seed(master, {1, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(q)}));
    siscode::GkpCode c = siscode::make_sis_code(siscode::sample_symmetric(n, q, rng), 2, master);
    return decode::error_rate(
        c, sigma, 10000,
        derive_seed(master, {2, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(q)}),
        decode::Decoder::Trivial);
}

Outcome error_rate_monotone() {
    const std::uint64_t master = 2026;
    std::string detail;
    bool pass = true;
    auto sweep = [&](const char* label, std::vector<decode::RateCurvePoint> pts) {
        detail += label;
        for (size_t i = 0; i < pts.size(); ++i) {
            detail += fmt(" %.3f", pts[i].p_err);
            if (i > 0) {
                bool mono = pts[i].p_err >= pts[i - 1].p_err;
                bool overlap = pts[i].ci_lo <= pts[i - 1].ci_hi && pts[i - 1].ci_lo <= pts[i].ci_hi;
                if (!mono && !overlap) pass = false;
            }
        }
        detail += ";";
    };
    sweep("q=4,8,16:", {rate_point(3, 4, 0.12, master), rate_point(3, 8, 0.12, master),
                        rate_point(3, 16, 0.12, master)});
    sweep(" n=3,5,7:", {rate_point(3, 4, 0.12, master), rate_point(5, 4, 0.12, master),
                        rate_point(7, 4, 0.12, master)});
    return {pass, detail + " 10000 trials each"};
}

Outcome worker_count_determinism() {
    using simcli::ExperimentKind;
    using simcli::ExperimentSpec;
    long checked = 0, diffs = 0;
    auto check = [&](ExperimentSpec s) {
        s.jobs = 1;
        simcli::RunResult one = simcli::run_experiment(s);
        simcli::RunResult one_again = simcli::run_experiment(s);
        s.jobs = 8;
        simcli::RunResult eight = simcli::run_experiment(s);
        ++checked;
        if (one.primary != eight.primary || one.summary_json != eight.summary_json ||
            one.primary != one_again.primary)
            ++diffs;
    };
    ExperimentSpec survey;
    survey.kind = ExperimentKind::DistanceSurvey;
    survey.n_list = {2, 3};
    survey.q_list = {3, 5};
    survey.samples = 4;
    survey.seed = 11;
    survey.has_seed = true;
    check(survey);
    ExperimentSpec ring;
    ring.kind = ExperimentKind::RingDistanceSurvey;
    ring.n_list = {2, 4};
    ring.q_list = {5, 13};
    ring.samples = 3;
    ring.seed = 12;
    ring.has_seed = true;
    check(ring);
    ExperimentSpec dec;
    dec.kind = ExperimentKind::DecodeCurve;
    dec.n_list = {2};
    dec.q_list = {5};
    dec.sigma_list = {0.08, 0.18};
    dec.samples = 50;
    dec.candidates = 4;
    dec.seed = 13;
    dec.has_seed = true;
    check(dec);
    ExperimentSpec bt;
    bt.kind = ExperimentKind::BoundTable;
    bt.n_list = {7, 8};
    bt.q_list = {101, 211};
    bt.gamma = 0.25;
    bt.seed = 0;
    bt.has_seed = true;
    check(bt);
    ExperimentSpec pc;
    pc.kind = ExperimentKind::ParamCheck;
    pc.n_list = {8, 15};
    pc.q_list = {7, 101};
    pc.seed = 0;
    pc.has_seed = true;
    check(pc);
    return {diffs == 0, std::to_string(checked) + " experiment kinds, " + std::to_string(diffs) +
                            " with output drift"};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {"q-symplectic construction", symplectic_construction},
        {"exact SVP equals exhaustive search", svp_vs_exhaustive},
        {"planted BDD matches exact CVP", planted_bdd_matches_cvp},
        {"random n=7 codes clear the distance target", random_code_distance_rate},
        {"Minkowski bound never violated", minkowski_never_violated},
        {"module lattice pair shares its minimum", module_lattice_pair_minimum},
        {"X^n+1 splits into two half-degree factors", two_factor_splitting},
        {"membership frequency matches q^-n", membership_monte_carlo},
        {"NTT multiply equals schoolbook", ntt_equals_schoolbook},
        {"error rate monotone in q and in n", error_rate_monotone},
        {"output independent of worker count", worker_count_determinism},
    };
    int failures = 0;
    int idx = 0;
    for (const Entry& e : entries) {
        ++idx;
        if (idx == 5) extra_distance_sweep();
        Outcome o = e.fn();
        if (!o.pass) ++failures;
        std::printf("%s  %2d. %-46s %s\n", o.pass ? "PASS" : "FAIL", idx, e.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
