// Deterministic experiment driver: grid sweeps over code parameters with
// derived sub-seeds, CSV/JSON emission, and row-level replay.
//
// Every experiment is fully determined by an ExperimentSpec. Work units are
// scheduled across `jobs` threads but results are assembled in grid order,
// so output bytes are independent of the worker count. Each CSV data row
// carries the sub-seed that regenerates it in isolation (see replay_row).
//
// Seed derivation chain (documented, relied on by replay):
//   survey sample     derive_seed(master, {kind_tag, grid_idx, sample_idx})
//   decode grid point s_g = derive_seed(master, {kind_tag, grid_idx})
//     candidate c     derive_seed(s_g, {1, c})
//     rate point      derive_seed(s_g, {2, decoder_tag, bits(sigma)})
// kind_tag is 1 + the ExperimentKind enum value; decoder_tag is 1 for the
// trivial decoder, 2 for Babai; bits(sigma) is the IEEE-754 bit pattern.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gkpsis/decode.hpp"

namespace gkpsis::simcli {

enum class ExperimentKind {
    DistanceSurvey,
    RingDistanceSurvey,
    DecodeCurve,
    BoundTable,
    ParamCheck,
};

const char* kind_name(ExperimentKind k);
ExperimentKind kind_from_name(const std::string& name);

// The grid is the Cartesian product of the parameter lists, n outermost,
// lambda innermost. The ring distance survey ignores lambda_list (the
// measured lattice has no lambda; rows report lambda = 1). sigma_list,
// candidates and decoders apply to decode curves only; gamma applies to
// bound tables only. An explicit seed is required: there is no wall-clock
// default anywhere.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::DistanceSurvey;
    std::vector<long> n_list;
    std::vector<long> k_list{1};
    std::vector<long> q_list;
    std::vector<long> lambda_list{2};
    std::vector<double> sigma_list;
    long samples = 100;
    long candidates = 100;
    std::vector<decode::Decoder> decoders{decode::Decoder::Trivial,
                                          decode::Decoder::Babai};
    double gamma = 0.0;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string out;
    std::string format = "csv";
    int jobs = 1;
};

std::string spec_to_json(const ExperimentSpec& s);
ExperimentSpec spec_from_json(const std::string& text);

// Returns the list of problems (empty means the spec can run).
std::vector<std::string> validate_spec(const ExperimentSpec& s);

// One exact distance measurement. delta_sq is the exact rational "p/q";
// above_bound compares delta against sqrt(nk/(lambda pi e)) in doubles.
struct SurveyRow {
    long n = 0, k = 0, q = 0, lambda = 0;
    long sample = 0;
    std::string delta_sq;
    double delta = 0.0;
    bool above_bound = false;
    std::uint64_t seed = 0;
};

// primary is the requested format (CSV text with '#' comment metadata and a
// trailing "# summary=" line, or a single JSON document); summary_json is
// the per-grid-point summary, always JSON. All text uses '\n' and the C
// numeric conventions regardless of locale.
struct RunResult {
    std::string primary;
    std::string summary_json;
};

RunResult run_distance_survey(const ExperimentSpec& s);
RunResult run_ring_distance_survey(const ExperimentSpec& s);
RunResult run_decode_curve(const ExperimentSpec& s);
RunResult run_bound_table(const ExperimentSpec& s);
RunResult run_param_check(const ExperimentSpec& s);

// Dispatches on s.kind after validate_spec (throws std::invalid_argument
// listing the problems if any).
RunResult run_experiment(const ExperimentSpec& s);

// Regenerates data row `row_index` (1-based, comments and the column header
// excluded) of a CSV produced by this module, using only the row itself and
// the '#' metadata lines. matched reports byte equality.
struct ReplayResult {
    bool matched = false;
    std::string expected;
    std::string actual;
};

ReplayResult replay_row(const std::string& csv_text, long row_index);

}  // namespace gkpsis::simcli
