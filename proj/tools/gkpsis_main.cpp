// Command line front end for the experiment driver. Exit codes: 0 success,
// 2 usage or validation error, 1 internal error (and replay mismatch).
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gkpsis/numth.hpp"
#include "gkpsis/simcli.hpp"

namespace {

using gkpsis::simcli::ExperimentKind;
using gkpsis::simcli::ExperimentSpec;
using gkpsis::simcli::RunResult;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Flags shared by the experiment subcommands. Every option records whether
// it was given so a --grid spec file can be overridden selectively.
struct CommonArgs {
    std::vector<long> n, k, q, lambda;
    std::vector<double> sigma;
    long samples = -1, candidates = -1;
    std::string decoder, grid, out, format;
    double gamma = -1.0;
    std::uint64_t seed = 0;
    int jobs = -1;
};

void add_common_flags(CLI::App* sc, CommonArgs* a) {
    sc->add_option("--n", a->n, "ring degrees / SIS dimensions")
        ->delimiter(',');
    sc->add_option("--k", a->k, "module ranks (1 = plain SIS)")
        ->delimiter(',');
    sc->add_option("--q", a->q, "moduli")->delimiter(',');
    sc->add_option("--lambda", a->lambda, "scaling parameters")
        ->delimiter(',');
    sc->add_option("--samples", a->samples,
                   "samples per grid point (decode trials for decode-curve)");
    sc->add_option("--grid", a->grid, "experiment spec JSON file");
    sc->add_option("--out", a->out,
                   "output path (summary goes to <out>.summary.json)");
    sc->add_option("--format", a->format, "csv or json");
    sc->add_option("--jobs", a->jobs, "worker threads");
    sc->add_option("--seed", a->seed, "master seed");
}

bool given(const CLI::App* sc, const std::string& name) {
    const CLI::Option* opt = sc->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

// CLI flags override whatever the --grid file provided.
ExperimentSpec build_spec(const CLI::App* sc, const CommonArgs& a,
                          ExperimentKind kind) {
    ExperimentSpec s;
    if (given(sc, "--grid"))
        s = gkpsis::simcli::spec_from_json(read_file(a.grid));
    s.kind = kind;
    if (given(sc, "--n")) s.n_list = a.n;
    if (given(sc, "--k")) s.k_list = a.k;
    if (given(sc, "--q")) s.q_list = a.q;
    if (given(sc, "--lambda")) s.lambda_list = a.lambda;
    if (given(sc, "--sigma")) s.sigma_list = a.sigma;
    if (given(sc, "--samples")) s.samples = a.samples;
    if (given(sc, "--candidates")) s.candidates = a.candidates;
    if (given(sc, "--decoder")) {
        s.decoders.clear();
        if (a.decoder == "both") {
            s.decoders = {gkpsis::decode::Decoder::Trivial,
                          gkpsis::decode::Decoder::Babai};
        } else {
            auto d = gkpsis::decode::decoder_from_name(a.decoder);
            if (!d) throw std::invalid_argument("unknown decoder: " + a.decoder);
            s.decoders = {*d};
        }
    }
    if (given(sc, "--gamma")) s.gamma = a.gamma;
    if (given(sc, "--seed")) {
        s.seed = a.seed;
        s.has_seed = true;
    }
    if (given(sc, "--out")) s.out = a.out;
    if (given(sc, "--format")) s.format = a.format;
    if (given(sc, "--jobs")) s.jobs = a.jobs;
    return s;
}

// Deterministic kinds run fine without a seed; stamp 0.
void default_seed(ExperimentSpec& s) {
    if (!s.has_seed) {
        s.seed = 0;
        s.has_seed = true;
    }
}

int emit(const ExperimentSpec& s, const RunResult& r) {
    if (s.out.empty()) {
        std::fputs(r.primary.c_str(), stdout);
    } else {
        write_file(s.out, r.primary);
        write_file(s.out + ".summary.json", r.summary_json);
    }
    return 0;
}

int run_params_suggest(long n, long k, double gamma) {
    gkpsis::RingParams p = gkpsis::select_ring_parameters(
        static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k), gamma);
    nlohmann::ordered_json j;
    j["n"] = n;
    j["k"] = k;
    j["gamma"] = gamma;
    j["q"] = p.q_min;
    j["r"] = p.r;
    gkpsis::RingParamReport rep = gkpsis::validate_ring_parameters(
        static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k), p.q_min);
    j["family"] = gkpsis::ring_family_name(rep.family);
    j["validation_ok"] = rep.ok;
    try {
        gkpsis::RingProbReport eps = gkpsis::epsilon_bound_gamma(
            static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k),
            p.q_min, gamma);
        j["epsilon"] = eps.epsilon;
        j["log_epsilon"] = eps.log_epsilon;
        j["vacuous"] = !(eps.epsilon <= 1.0);
    } catch (const std::exception& e) {
        j["epsilon_error"] = e.what();
    }
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

int run_replay(const std::string& file, long row) {
    gkpsis::simcli::ReplayResult r =
        gkpsis::simcli::replay_row(read_file(file), row);
    std::printf("expected: %s\n", r.expected.c_str());
    std::printf("actual:   %s\n", r.actual.c_str());
    std::printf("%s\n", r.matched ? "match" : "MISMATCH");
    return r.matched ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GKP codes from SIS lattices: exact distance surveys, "
                 "decode curves, bound tables, parameter checks"};
    app.require_subcommand(1);

    CommonArgs sv, rs, dc, bt, pv;

    CLI::App* survey =
        app.add_subcommand("survey", "exact code distance survey");
    add_common_flags(survey, &sv);

    CLI::App* ring =
        app.add_subcommand("ring-survey", "module lattice distance survey");
    add_common_flags(ring, &rs);

    CLI::App* curve =
        app.add_subcommand("decode-curve", "decoder error rate sweep");
    add_common_flags(curve, &dc);
    curve->add_option("--sigma", dc.sigma, "noise levels, per coordinate")
        ->delimiter(',');
    curve->add_option("--candidates", dc.candidates,
                      "codes scanned per grid point (best distance kept)");
    curve->add_option("--decoder", dc.decoder, "trivial, babai, or both");

    CLI::App* bounds =
        app.add_subcommand("bounds", "closed-form bound table");
    add_common_flags(bounds, &bt);
    bounds->add_option("--gamma", bt.gamma, "radius slack in [0,1)");

    CLI::App* params =
        app.add_subcommand("params", "modulus admissibility checks");
    params->require_subcommand(1);
    CLI::App* pvalidate =
        params->add_subcommand("validate", "check (n, k, q) grid");
    add_common_flags(pvalidate, &pv);
    long sg_n = 0, sg_k = 1;
    double sg_gamma = 0.0;
    CLI::App* psuggest = params->add_subcommand(
        "suggest", "smallest admissible q for (n, k, gamma)");
    psuggest->add_option("--n", sg_n, "ring degree")->required();
    psuggest->add_option("--k", sg_k, "module rank");
    psuggest->add_option("--gamma", sg_gamma, "radius slack in [0,1)")
        ->required();

    std::string rp_file;
    long rp_row = 0;
    CLI::App* replay =
        app.add_subcommand("replay", "regenerate one CSV data row");
    replay->add_option("--file", rp_file, "CSV produced by this tool")
        ->required();
    replay->add_option("--row", rp_row, "1-based data row index")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (survey->parsed()) {
            ExperimentSpec s =
                build_spec(survey, sv, ExperimentKind::DistanceSurvey);
            return emit(s, gkpsis::simcli::run_distance_survey(s));
        }
        if (ring->parsed()) {
            ExperimentSpec s =
                build_spec(ring, rs, ExperimentKind::RingDistanceSurvey);
            return emit(s, gkpsis::simcli::run_ring_distance_survey(s));
        }
        if (curve->parsed()) {
            ExperimentSpec s =
                build_spec(curve, dc, ExperimentKind::DecodeCurve);
            return emit(s, gkpsis::simcli::run_decode_curve(s));
        }
        if (bounds->parsed()) {
            ExperimentSpec s =
                build_spec(bounds, bt, ExperimentKind::BoundTable);
            default_seed(s);
            return emit(s, gkpsis::simcli::run_bound_table(s));
        }
        if (params->parsed()) {
            if (psuggest->parsed())
                return run_params_suggest(sg_n, sg_k, sg_gamma);
            ExperimentSpec s =
                build_spec(pvalidate, pv, ExperimentKind::ParamCheck);
            default_seed(s);
            return emit(s, gkpsis::simcli::run_param_check(s));
        }
        if (replay->parsed()) return run_replay(rp_file, rp_row);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
