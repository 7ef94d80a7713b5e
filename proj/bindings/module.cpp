// Python surface: code construction, exact distances, decoding, error rates,
// factorization, closed-form bounds, and the experiment driver.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <vector>

#include "gkpsis/decode.hpp"
#include "gkpsis/numth.hpp"
#include "gkpsis/ringquot.hpp"
#include "gkpsis/simcli.hpp"
#include "gkpsis/siscode.hpp"

namespace py = pybind11;
using namespace gkpsis;

namespace {

long long to_ll(const Int& v) {
    if (!v.fits_slong_p()) throw std::overflow_error("value exceeds long long");
    return v.get_si();
}

exactlat::IntBasis basis_from_rows(const std::vector<std::vector<long long>>& rows) {
    if (rows.empty()) throw std::invalid_argument("empty basis");
    int r = static_cast<int>(rows.size());
    int c = static_cast<int>(rows[0].size());
    exactlat::IntBasis b(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
            throw std::invalid_argument("ragged basis");
        for (int j = 0; j < c; ++j)
            b.at(i, j) = static_cast<long>(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    }
    return b;
}

decode::Decoder decoder_arg(const std::string& name) {
    auto d = decode::decoder_from_name(name);
    if (!d) throw std::invalid_argument("unknown decoder: " + name);
    return *d;
}

py::dict rate_dict(const decode::RateCurvePoint& p) {
    py::dict d;
    d["n"] = p.n;
    d["k"] = p.k;
    d["q"] = p.q;
    d["lambda"] = p.lambda;
    d["decoder"] = decode::decoder_name(p.decoder);
    d["sigma"] = p.sigma;
    d["trials"] = p.trials;
    d["failures"] = p.failures;
    d["p_err"] = p.p_err;
    d["ci_lo"] = p.ci_lo;
    d["ci_hi"] = p.ci_hi;
    d["seed"] = p.seed;
    return d;
}

}  // namespace

PYBIND11_MODULE(gkpsis, m) {
    m.doc() = "GKP codes from symmetric SIS and module lattices: exact distances, "
              "decoding, bounds, deterministic experiments";

    py::class_<siscode::GkpCode>(m, "GkpCode")
        .def_property_readonly("n", &siscode::GkpCode::n)
        .def_property_readonly("k", &siscode::GkpCode::k)
        .def_property_readonly("q", &siscode::GkpCode::q)
        .def_property_readonly("modes", &siscode::GkpCode::modes)
        .def_readonly("lam", &siscode::GkpCode::lambda)
        .def_readonly("seed", &siscode::GkpCode::seed)
        .def_property_readonly("kind",
                               [](const siscode::GkpCode& c) {
                                   return c.kind == siscode::CodeKind::Sis ? "sis" : "module";
                               })
        .def("__eq__",
             [](const siscode::GkpCode& a, const siscode::GkpCode& b) { return a == b; })
        .def("__repr__", [](const siscode::GkpCode& c) {
            return "GkpCode(kind=" +
                   std::string(c.kind == siscode::CodeKind::Sis ? "sis" : "module") +
                   ", n=" + std::to_string(c.n()) + ", k=" + std::to_string(c.k()) +
                   ", q=" + std::to_string(c.q()) + ", lam=" + std::to_string(c.lambda) + ")";
        });

    m.def(
        "sample_sis_code",
        [](long n, long q, long lam, std::uint64_t seed) {
            Rng rng(seed);
            return siscode::make_sis_code(siscode::sample_symmetric(n, q, rng), lam, seed);
        },
        py::arg("n"), py::arg("q"), py::arg("lam"), py::arg("seed"),
        "Uniform symmetric H from the seed; the code remembers the seed.");

    m.def(
        "sample_module_code",
        [](long n, long k, long q, long lam, std::uint64_t seed) {
            Rng rng(seed);
            return siscode::make_module_code(ringquot::sample_ring_symmetric(n, k, q, rng), lam,
                                             seed);
        },
        py::arg("n"), py::arg("k"), py::arg("q"), py::arg("lam"), py::arg("seed"));

    m.def("code_to_json", &siscode::code_to_json, py::arg("code"));
    m.def("code_from_json", &siscode::code_from_json, py::arg("text"));

    m.def(
        "code_distance",
        [](const siscode::GkpCode& c) {
            siscode::CodeDistance d = siscode::code_distance(c);
            py::dict out;
            out["delta_sq"] = d.delta_sq.get_str();
            out["delta"] = d.delta;
            return out;
        },
        py::arg("code"), "Exact squared distance as a fraction string plus its double image.");

    m.def(
        "logical_dimension",
        [](const siscode::GkpCode& c) { return to_ll(siscode::logical_dimension(c)); },
        py::arg("code"));

    m.def(
        "shortest_vector",
        [](const std::vector<std::vector<long long>>& rows) {
            exactlat::ShortestVec sv = exactlat::shortest_vector({basis_from_rows(rows), Rat(1)});
            py::dict out;
            std::vector<long long> coords;
            coords.reserve(sv.coords.size());
            for (const Int& v : sv.coords) coords.push_back(to_ll(v));
            out["coords"] = coords;
            out["norm_sq"] = to_ll(Int(sv.norm_sq));
            return out;
        },
        py::arg("rows"), "Exact shortest nonzero vector of an integer row basis.");

    m.def(
        "bdd_trivial",
        [](const siscode::GkpCode& c, const std::vector<double>& v) {
            return decode::bdd_trivial(c, v);
        },
        py::arg("code"), py::arg("v"));

    m.def(
        "decode_point",
        [](const siscode::GkpCode& c, const std::vector<double>& v, const std::string& decoder) {
            decode::DecodeContext ctx(c);
            return ctx.decode_point(v, decoder_arg(decoder));
        },
        py::arg("code"), py::arg("v"), py::arg("decoder") = "trivial");

    m.def(
        "error_rate",
        [](const siscode::GkpCode& c, double sigma, long trials, std::uint64_t seed,
           const std::string& decoder) {
            return rate_dict(decode::error_rate(c, sigma, trials, seed, decoder_arg(decoder)));
        },
        py::arg("code"), py::arg("sigma"), py::arg("trials"), py::arg("seed"),
        py::arg("decoder") = "trivial",
        "Monte-Carlo failure rate; trial i draws from derive_seed(seed, [i]).");

    m.def(
        "factor_xn_plus_1",
        [](std::uint64_t n, std::uint64_t q) {
            std::vector<std::vector<std::uint64_t>> out;
            for (const PolyModQ& f : factor_xn_plus_1(n, q)) out.push_back(f.coeffs);
            return out;
        },
        py::arg("n"), py::arg("q"),
        "Coefficient lists (ascending powers) of the monic irreducible factors.");

    m.def(
        "bounds",
        [](long n, long q, long lam, double r) {
            siscode::BoundReport b = siscode::bounds(n, q, lam, r);
            py::dict out;
            out["n"] = b.n;
            out["q"] = b.q;
            out["lambda"] = b.lambda;
            out["r"] = b.r;
            out["lower_target"] = b.lower_target;
            out["minkowski_upper"] = b.minkowski_upper;
            out["covering_upper"] = b.covering_upper;
            out["prob_bound"] = b.prob_bound;
            out["precond_ok"] = b.precond_ok;
            out["q_prime"] = b.q_prime;
            out["vacuous"] = b.vacuous;
            return out;
        },
        py::arg("n"), py::arg("q"), py::arg("lam"), py::arg("r"));

    m.def(
        "epsilon_bound",
        [](std::uint64_t n, std::uint64_t k, std::uint64_t q, double r) {
            RingProbReport rep = epsilon_bound(n, k, q, r);
            py::dict out;
            out["epsilon"] = rep.epsilon;
            out["log_epsilon"] = rep.log_epsilon;
            out["r"] = rep.r_guarantee;
            out["term_count"] = rep.terms.size();
            return out;
        },
        py::arg("n"), py::arg("k"), py::arg("q"), py::arg("r"));

    m.def(
        "select_ring_parameters",
        [](std::uint64_t n, std::uint64_t k, double gamma) {
            RingParams p = select_ring_parameters(n, k, gamma);
            return py::make_tuple(p.q_min, p.r);
        },
        py::arg("n"), py::arg("k"), py::arg("gamma"),
        "Smallest admissible prime for the degree family, with the guarantee radius.");

    m.def(
        "validate_ring_parameters",
        [](std::uint64_t n, std::uint64_t k, std::uint64_t q) {
            RingParamReport rep = validate_ring_parameters(n, k, q);
            py::dict out;
            out["family"] = ring_family_name(rep.family);
            out["ok"] = rep.ok;
            py::dict checks;
            for (const ParamCheck& c : rep.checks) checks[py::str(c.name)] = c.pass;
            out["checks"] = checks;
            return out;
        },
        py::arg("n"), py::arg("k"), py::arg("q"));

    m.def(
        "run_experiment",
        [](const std::string& spec_json) {
            simcli::RunResult r = simcli::run_experiment(simcli::spec_from_json(spec_json));
            return py::make_tuple(r.primary, r.summary_json);
        },
        py::arg("spec_json"),
        "Returns (primary output, per-grid-point summary JSON); bytes depend only on the spec.");

    m.def("replay_row", [](const std::string& csv_text, long row) {
        simcli::ReplayResult r = simcli::replay_row(csv_text, row);
        py::dict out;
        out["matched"] = r.matched;
        out["expected"] = r.expected;
        out["actual"] = r.actual;
        return out;
    }, py::arg("csv_text"), py::arg("row"));
}
