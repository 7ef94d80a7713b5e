// Implements the experiment driver declared in gkpsis/simcli.hpp. All numeric
// text goes through std::to_chars / std::from_chars, so output bytes are
// locale independent and data rows round-trip exactly through replay_row.
#include "gkpsis/simcli.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <system_error>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gkpsis/exactlat.hpp"
#include "gkpsis/numth.hpp"
#include "gkpsis/ringquot.hpp"
#include "gkpsis/rng.hpp"
#include "gkpsis/siscode.hpp"

namespace gkpsis::simcli {
namespace {

using nlohmann::ordered_json;

// Must not exceed the enumeration cap in exactlat.
constexpr long kMaxEnumDim = 32;
constexpr std::uint64_t kCandidateStream = 1;
constexpr std::uint64_t kTrialStream = 2;

constexpr const char* kSurveyHeader =
    "n,k,q,lambda,sample,delta_sq,delta,above_bound,seed";
constexpr const char* kRateHeader =
    "n,k,q,lambda,decoder,sigma,trials,failures,p_err,ci_lo,ci_hi,seed";
constexpr const char* kBoundHeader =
    "n,k,q,lambda,gamma,r,lower_target,minkowski_upper,covering_upper,"
    "prob_bound,precond_ok,q_prime,vacuous,ring_r,ring_epsilon,"
    "ring_log_epsilon,ring_vacuous,ring_error";
constexpr const char* kParamHeader = "n,k,q,family,ok,failed";

std::uint64_t kind_tag(ExperimentKind k) {
    return static_cast<std::uint64_t>(k) + 1;
}

std::uint64_t decoder_tag(decode::Decoder d) {
    return d == decode::Decoder::Trivial ? 1 : 2;
}

std::string fmt_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string fmt_long(long v) { return std::to_string(v); }
std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }
std::string fmt_bool(bool b) { return b ? "1" : "0"; }

double parse_double(const std::string& s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad number in row: " + s);
    return v;
}

long parse_long(const std::string& s) {
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad integer in row: " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad seed in row: " + s);
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& fields, char sep) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += sep;
        out += fields[i];
    }
    return out;
}

// Keeps free-form text (exception messages) inside a single CSV field.
std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

decode::Decoder decoder_or_throw(const std::string& name) {
    auto d = decode::decoder_from_name(name);
    if (!d) throw std::invalid_argument("unknown decoder: " + name);
    return *d;
}

double bound_target(long n, long k, long lambda) {
    return std::sqrt(static_cast<double>(n) * static_cast<double>(k) /
                     (static_cast<double>(lambda) * std::numbers::pi *
                      std::numbers::e));
}

struct GridPoint {
    long n = 0, k = 0, q = 0, lambda = 0;
};

bool over_dimension_cap(const GridPoint& p) {
    return 2 * p.n * p.k > kMaxEnumDim;
}

std::vector<GridPoint> make_grid(const ExperimentSpec& s) {
    static const std::vector<long> kOne{1};
    const bool no_lambda = s.kind == ExperimentKind::RingDistanceSurvey ||
                           s.kind == ExperimentKind::ParamCheck;
    const std::vector<long>& lambdas = no_lambda ? kOne : s.lambda_list;
    std::vector<GridPoint> grid;
    for (long n : s.n_list)
        for (long k : s.k_list)
            for (long q : s.q_list)
                for (long lambda : lambdas) grid.push_back({n, k, q, lambda});
    return grid;
}

// Runs fn(0..count-1) on min(jobs, count) threads. Exceptions are collected
// per unit and the lowest-index one is rethrown, matching the serial path.
void parallel_for(long count, int jobs, const std::function<void(long)>& fn) {
    long workers = std::min<long>(std::max(jobs, 1), count);
    if (workers <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(count));
    std::atomic<long> next{0};
    auto body = [&] {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                errs[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

void ensure_valid(const ExperimentSpec& s, ExperimentKind expected) {
    if (s.kind != expected)
        throw std::invalid_argument("spec kind does not match the operation");
    auto problems = validate_spec(s);
    if (!problems.empty())
        throw std::invalid_argument("invalid experiment spec: " +
                                    join(problems, ';'));
}

siscode::GkpCode sample_code(long n, long k, long q, long lambda,
                             std::uint64_t seed) {
    Rng rng(seed);
    if (k == 1)
        return siscode::make_sis_code(siscode::sample_symmetric(n, q, rng),
                                      lambda, seed);
    return siscode::make_module_code(
        ringquot::sample_ring_symmetric(n, k, q, rng), lambda, seed);
}

SurveyRow make_distance_row(long n, long k, long q, long lambda, long sample,
                            std::uint64_t seed) {
    siscode::GkpCode code = sample_code(n, k, q, lambda, seed);
    siscode::CodeDistance d = siscode::code_distance(code);
    SurveyRow row;
    row.n = n;
    row.k = k;
    row.q = q;
    row.lambda = lambda;
    row.sample = sample;
    row.delta_sq = rat_repr(d.delta_sq);
    row.delta = d.delta;
    row.above_bound = d.delta > bound_target(n, k, lambda);
    row.seed = seed;
    return row;
}

// lambda_1 of (1/sqrt(q)) L(M_H) for a fresh symmetric module instance; the
// above_bound target is sqrt(nk/(pi e)), i.e. the lambda = 1 code target.
SurveyRow make_ring_row(long n, long k, long q, long sample,
                        std::uint64_t seed) {
    Rng rng(seed);
    ringquot::RingSymMat h = ringquot::sample_ring_symmetric(n, k, q, rng);
    ringquot::ModuleBases mb = ringquot::module_basis(h);
    exactlat::ShortestVec sv =
        exactlat::shortest_vector({mb.m_h, Rat(1) / q});
    SurveyRow row;
    row.n = n;
    row.k = k;
    row.q = q;
    row.lambda = 1;
    row.sample = sample;
    row.delta_sq = rat_repr(sv.norm_sq);
    row.delta = std::sqrt(to_double(sv.norm_sq));
    row.above_bound = row.delta > bound_target(n, k, 1);
    row.seed = seed;
    return row;
}

std::string survey_row_text(const SurveyRow& r) {
    return join({fmt_long(r.n), fmt_long(r.k), fmt_long(r.q),
                 fmt_long(r.lambda), fmt_long(r.sample), r.delta_sq,
                 fmt_double(r.delta), fmt_bool(r.above_bound),
                 fmt_u64(r.seed)},
                ',');
}

ordered_json survey_row_json(const SurveyRow& r) {
    ordered_json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["q"] = r.q;
    j["lambda"] = r.lambda;
    j["sample"] = r.sample;
    j["delta_sq"] = r.delta_sq;
    j["delta"] = r.delta;
    j["above_bound"] = r.above_bound;
    j["seed"] = r.seed;
    return j;
}

std::string rate_row_text(const decode::RateCurvePoint& p,
                          std::uint64_t row_seed) {
    return join({fmt_long(p.n), fmt_long(p.k), fmt_long(p.q),
                 fmt_long(p.lambda), decode::decoder_name(p.decoder),
                 fmt_double(p.sigma), fmt_long(p.trials),
                 fmt_long(p.failures), fmt_double(p.p_err),
                 fmt_double(p.ci_lo), fmt_double(p.ci_hi),
                 fmt_u64(row_seed)},
                ',');
}

ordered_json rate_row_json(const decode::RateCurvePoint& p,
                           std::uint64_t row_seed) {
    ordered_json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["q"] = p.q;
    j["lambda"] = p.lambda;
    j["decoder"] = decode::decoder_name(p.decoder);
    j["sigma"] = p.sigma;
    j["trials"] = p.trials;
    j["failures"] = p.failures;
    j["p_err"] = p.p_err;
    j["ci_lo"] = p.ci_lo;
    j["ci_hi"] = p.ci_hi;
    j["seed"] = row_seed;
    return j;
}

ordered_json grid_point_json(const GridPoint& p) {
    ordered_json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["q"] = p.q;
    j["lambda"] = p.lambda;
    return j;
}

std::string skip_record_text(const GridPoint& p) {
    return "# skipped: dimension cap n=" + fmt_long(p.n) +
           " k=" + fmt_long(p.k) + " q=" + fmt_long(p.q) +
           " lambda=" + fmt_long(p.lambda) + "\n";
}

ordered_json skip_record_json(const GridPoint& p) {
    ordered_json j = grid_point_json(p);
    j["status"] = "skipped: dimension cap";
    return j;
}

ordered_json survey_point_summary(const GridPoint& p, double target,
                                  const std::vector<SurveyRow>& rows) {
    std::vector<double> ds;
    ds.reserve(rows.size());
    long above = 0;
    for (const auto& r : rows) {
        ds.push_back(r.delta);
        above += r.above_bound ? 1 : 0;
    }
    std::sort(ds.begin(), ds.end());
    std::size_t m = ds.size();
    double median =
        m % 2 ? ds[m / 2] : 0.5 * (ds[m / 2 - 1] + ds[m / 2]);
    ordered_json j = grid_point_json(p);
    j["status"] = "ok";
    j["samples"] = static_cast<long>(m);
    j["delta_min"] = ds.front();
    j["delta_median"] = median;
    j["delta_max"] = ds.back();
    j["above_bound_rate"] = static_cast<double>(above) / static_cast<double>(m);
    j["target"] = target;
    return j;
}

ordered_json validation_body(const RingParamReport& rep) {
    ordered_json j;
    j["family"] = ring_family_name(rep.family);
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["ok"] = rep.ok;
    return j;
}

std::string failed_check_names(const RingParamReport& rep) {
    std::vector<std::string> failed;
    for (const auto& c : rep.checks)
        if (!c.pass) failed.push_back(c.name);
    return join(failed, ';');
}

std::string meta_header(const ExperimentSpec& s) {
    std::string t = "# kind=";
    t += kind_name(s.kind);
    t += "\n# seed=" + fmt_u64(s.seed) + "\n";
    switch (s.kind) {
        case ExperimentKind::DistanceSurvey:
        case ExperimentKind::RingDistanceSurvey:
            t += "# samples=" + fmt_long(s.samples) + "\n";
            break;
        case ExperimentKind::DecodeCurve:
            t += "# trials=" + fmt_long(s.samples) + "\n";
            t += "# candidates=" + fmt_long(s.candidates) + "\n";
            break;
        case ExperimentKind::BoundTable:
            t += "# gamma=" + fmt_double(s.gamma) + "\n";
            break;
        case ExperimentKind::ParamCheck:
            break;
    }
    t += "# sigma_convention=per_coordinate\n";
    return t;
}

RunResult finish(const ExperimentSpec& s, const char* header,
                 const std::string& csv_body, const ordered_json& rows,
                 const ordered_json& records, const ordered_json& summary) {
    RunResult out;
    out.summary_json = summary.dump(2) + "\n";
    if (s.format == "json") {
        ordered_json doc;
        doc["kind"] = kind_name(s.kind);
        doc["seed"] = s.seed;
        if (s.kind == ExperimentKind::DistanceSurvey ||
            s.kind == ExperimentKind::RingDistanceSurvey)
            doc["samples"] = s.samples;
        if (s.kind == ExperimentKind::DecodeCurve) {
            doc["trials"] = s.samples;
            doc["candidates"] = s.candidates;
        }
        if (s.kind == ExperimentKind::BoundTable) doc["gamma"] = s.gamma;
        doc["sigma_convention"] = "per_coordinate";
        doc["rows"] = rows;
        doc["records"] = records;
        doc["summary"] = summary;
        out.primary = doc.dump(2) + "\n";
    } else {
        out.primary = meta_header(s) + header + "\n" + csv_body +
                      "# summary=" + summary.dump() + "\n";
    }
    return out;
}

// Scans `candidates` fresh codes and keeps the exact-distance maximum;
// ties keep the earliest candidate index.
struct Chosen {
    siscode::GkpCode code;
    long index = -1;
    std::uint64_t seed = 0;
    Rat delta_sq{-1};
};

Chosen select_code(long n, long k, long q, long lambda, std::uint64_t grid_seed,
                   long candidates) {
    Chosen best;
    for (long c = 0; c < candidates; ++c) {
        std::uint64_t sc = derive_seed(
            grid_seed, {kCandidateStream, static_cast<std::uint64_t>(c)});
        siscode::GkpCode code = sample_code(n, k, q, lambda, sc);
        Rat dsq = siscode::code_distance(code).delta_sq;
        if (dsq > best.delta_sq) {
            best.code = std::move(code);
            best.index = c;
            best.seed = sc;
            best.delta_sq = dsq;
        }
    }
    return best;
}

std::uint64_t rate_seed(std::uint64_t grid_seed, decode::Decoder d,
                        double sigma) {
    return derive_seed(grid_seed, {kTrialStream, decoder_tag(d),
                                   std::bit_cast<std::uint64_t>(sigma)});
}

}  // namespace

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::DistanceSurvey:
            return "distance_survey";
        case ExperimentKind::RingDistanceSurvey:
            return "ring_distance_survey";
        case ExperimentKind::DecodeCurve:
            return "decode_curve";
        case ExperimentKind::BoundTable:
            return "bound_table";
        case ExperimentKind::ParamCheck:
            return "param_check";
    }
    throw std::invalid_argument("unknown experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
    if (name == "distance_survey") return ExperimentKind::DistanceSurvey;
    if (name == "ring_distance_survey")
        return ExperimentKind::RingDistanceSurvey;
    if (name == "decode_curve") return ExperimentKind::DecodeCurve;
    if (name == "bound_table") return ExperimentKind::BoundTable;
    if (name == "param_check") return ExperimentKind::ParamCheck;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

std::vector<std::string> validate_spec(const ExperimentSpec& s) {
    std::vector<std::string> p;
    if (!s.has_seed) p.push_back("an explicit seed is required");
    if (s.n_list.empty()) p.push_back("n grid is empty");
    for (long n : s.n_list)
        if (n < 1) p.push_back("n must be >= 1");
    if (s.k_list.empty()) p.push_back("k grid is empty");
    for (long k : s.k_list)
        if (k < 1) p.push_back("k must be >= 1");
    if (s.q_list.empty()) p.push_back("q grid is empty");
    for (long q : s.q_list)
        if (q < 2) p.push_back("q must be >= 2");
    if (s.samples < 1) p.push_back("samples must be >= 1");
    if (s.jobs < 1) p.push_back("jobs must be >= 1");
    if (s.format != "csv" && s.format != "json")
        p.push_back("format must be csv or json");
    const bool needs_lambda = s.kind == ExperimentKind::DistanceSurvey ||
                              s.kind == ExperimentKind::DecodeCurve;
    if (needs_lambda) {
        if (s.lambda_list.empty()) p.push_back("lambda grid is empty");
        for (long l : s.lambda_list)
            if (l < 2) p.push_back("lambda must be >= 2");
    }
    if (s.kind == ExperimentKind::BoundTable) {
        if (s.lambda_list.empty()) p.push_back("lambda grid is empty");
        for (long l : s.lambda_list)
            if (l < 1) p.push_back("lambda must be >= 1");
        if (!(s.gamma >= 0.0 && s.gamma < 1.0))
            p.push_back("gamma must lie in [0, 1)");
    }
    if (s.kind == ExperimentKind::DecodeCurve) {
        if (s.sigma_list.empty()) p.push_back("sigma grid is empty");
        for (double v : s.sigma_list)
            if (!(v > 0.0) || !std::isfinite(v))
                p.push_back("sigma must be positive and finite");
        if (s.candidates < 1) p.push_back("candidates must be >= 1");
        if (s.decoders.empty()) p.push_back("decoder list is empty");
    }
    return p;
}

std::string spec_to_json(const ExperimentSpec& s) {
    ordered_json j;
    j["kind"] = kind_name(s.kind);
    j["n"] = s.n_list;
    j["k"] = s.k_list;
    j["q"] = s.q_list;
    j["lambda"] = s.lambda_list;
    j["sigma"] = s.sigma_list;
    j["samples"] = s.samples;
    j["candidates"] = s.candidates;
    std::vector<std::string> dec;
    for (auto d : s.decoders) dec.emplace_back(decode::decoder_name(d));
    j["decoders"] = dec;
    j["gamma"] = s.gamma;
    if (s.has_seed) j["seed"] = s.seed;
    j["out"] = s.out;
    j["format"] = s.format;
    j["jobs"] = s.jobs;
    return j.dump(2) + "\n";
}

ExperimentSpec spec_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("spec must be an object");
    auto long_list = [](const ordered_json& v) {
        std::vector<long> out;
        if (v.is_array())
            for (const auto& e : v) out.push_back(e.get<long>());
        else
            out.push_back(v.get<long>());
        return out;
    };
    auto double_list = [](const ordered_json& v) {
        std::vector<double> out;
        if (v.is_array())
            for (const auto& e : v) out.push_back(e.get<double>());
        else
            out.push_back(v.get<double>());
        return out;
    };
    ExperimentSpec s;
    for (const auto& [key, val] : j.items()) {
        if (key == "kind")
            s.kind = kind_from_name(val.get<std::string>());
        else if (key == "n")
            s.n_list = long_list(val);
        else if (key == "k")
            s.k_list = long_list(val);
        else if (key == "q")
            s.q_list = long_list(val);
        else if (key == "lambda")
            s.lambda_list = long_list(val);
        else if (key == "sigma")
            s.sigma_list = double_list(val);
        else if (key == "samples")
            s.samples = val.get<long>();
        else if (key == "candidates")
            s.candidates = val.get<long>();
        else if (key == "decoders") {
            s.decoders.clear();
            if (val.is_array())
                for (const auto& e : val)
                    s.decoders.push_back(
                        decoder_or_throw(e.get<std::string>()));
            else
                s.decoders.push_back(decoder_or_throw(val.get<std::string>()));
        } else if (key == "gamma")
            s.gamma = val.get<double>();
        else if (key == "seed") {
            s.seed = val.get<std::uint64_t>();
            s.has_seed = true;
        } else if (key == "out")
            s.out = val.get<std::string>();
        else if (key == "format")
            s.format = val.get<std::string>();
        else if (key == "jobs")
            s.jobs = val.get<int>();
        else
            throw std::invalid_argument("unknown spec key: " + key);
    }
    return s;
}

RunResult run_distance_survey(const ExperimentSpec& s) {
    ensure_valid(s, ExperimentKind::DistanceSurvey);
    const std::vector<GridPoint> grid = make_grid(s);
    const long S = s.samples;
    const std::uint64_t tag = kind_tag(s.kind);
    std::vector<std::vector<SurveyRow>> rows(
        grid.size(), std::vector<SurveyRow>(static_cast<std::size_t>(S)));
    parallel_for(static_cast<long>(grid.size()) * S, s.jobs, [&](long u) {
        const long g = u / S, i = u % S;
        const GridPoint& p = grid[static_cast<std::size_t>(g)];
        if (over_dimension_cap(p)) return;
        std::uint64_t seed =
            derive_seed(s.seed, {tag, static_cast<std::uint64_t>(g),
                                 static_cast<std::uint64_t>(i)});
        rows[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
            make_distance_row(p.n, p.k, p.q, p.lambda, i, seed);
    });
    std::string body;
    ordered_json rows_json = ordered_json::array();
    ordered_json records = ordered_json::array();
    ordered_json summary = ordered_json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const GridPoint& p = grid[g];
        if (over_dimension_cap(p)) {
            body += skip_record_text(p);
            records.push_back(skip_record_json(p));
            summary.push_back(skip_record_json(p));
            continue;
        }
        for (const auto& r : rows[g]) {
            body += survey_row_text(r) + "\n";
            rows_json.push_back(survey_row_json(r));
        }
        summary.push_back(
            survey_point_summary(p, bound_target(p.n, p.k, p.lambda), rows[g]));
    }
    return finish(s, kSurveyHeader, body, rows_json, records, summary);
}

RunResult run_ring_distance_survey(const ExperimentSpec& s) {
    ensure_valid(s, ExperimentKind::RingDistanceSurvey);
    const std::vector<GridPoint> grid = make_grid(s);
    const long S = s.samples;
    const std::uint64_t tag = kind_tag(s.kind);
    std::vector<RingParamReport> val(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
        val[g] = validate_ring_parameters(
            static_cast<std::uint64_t>(grid[g].n),
            static_cast<std::uint64_t>(grid[g].k),
            static_cast<std::uint64_t>(grid[g].q));
    std::vector<std::vector<SurveyRow>> rows(
        grid.size(), std::vector<SurveyRow>(static_cast<std::size_t>(S)));
    parallel_for(static_cast<long>(grid.size()) * S, s.jobs, [&](long u) {
        const long g = u / S, i = u % S;
        const GridPoint& p = grid[static_cast<std::size_t>(g)];
        if (!val[static_cast<std::size_t>(g)].ok || over_dimension_cap(p))
            return;
        std::uint64_t seed =
            derive_seed(s.seed, {tag, static_cast<std::uint64_t>(g),
                                 static_cast<std::uint64_t>(i)});
        rows[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
            make_ring_row(p.n, p.k, p.q, i, seed);
    });
    std::string body;
    ordered_json rows_json = ordered_json::array();
    ordered_json records = ordered_json::array();
    ordered_json summary = ordered_json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const GridPoint& p = grid[g];
        if (!val[g].ok) {
            body += "# validation_failure n=" + fmt_long(p.n) +
                    " k=" + fmt_long(p.k) + " q=" + fmt_long(p.q) +
                    " failed=" + failed_check_names(val[g]) + "\n";
            ordered_json rec = grid_point_json(p);
            rec["status"] = "validation_failure";
            rec["validation"] = validation_body(val[g]);
            records.push_back(rec);
            summary.push_back(rec);
            continue;
        }
        if (over_dimension_cap(p)) {
            body += skip_record_text(p);
            records.push_back(skip_record_json(p));
            summary.push_back(skip_record_json(p));
            continue;
        }
        for (const auto& r : rows[g]) {
            body += survey_row_text(r) + "\n";
            rows_json.push_back(survey_row_json(r));
        }
        ordered_json sm =
            survey_point_summary(p, bound_target(p.n, p.k, 1), rows[g]);
        sm["validation"] = validation_body(val[g]);
        summary.push_back(sm);
    }
    return finish(s, kSurveyHeader, body, rows_json, records, summary);
}

RunResult run_decode_curve(const ExperimentSpec& s) {
    ensure_valid(s, ExperimentKind::DecodeCurve);
    const std::vector<GridPoint> grid = make_grid(s);
    const long nd = static_cast<long>(s.decoders.size());
    const long ns = static_cast<long>(s.sigma_list.size());
    const std::uint64_t tag = kind_tag(s.kind);
    std::vector<std::unique_ptr<decode::DecodeContext>> ctx(grid.size());
    std::vector<std::uint64_t> grid_seed(grid.size(), 0);
    std::vector<ordered_json> choice(grid.size());
    parallel_for(static_cast<long>(grid.size()), s.jobs, [&](long g) {
        const GridPoint& p = grid[static_cast<std::size_t>(g)];
        if (over_dimension_cap(p)) return;
        std::uint64_t sg =
            derive_seed(s.seed, {tag, static_cast<std::uint64_t>(g)});
        grid_seed[static_cast<std::size_t>(g)] = sg;
        Chosen best = select_code(p.n, p.k, p.q, p.lambda, sg, s.candidates);
        ordered_json j = grid_point_json(p);
        j["status"] = "ok";
        j["candidates"] = s.candidates;
        j["chosen_candidate"] = best.index;
        j["chosen_seed"] = best.seed;
        j["delta_sq"] = rat_repr(best.delta_sq);
        j["delta"] = std::sqrt(to_double(best.delta_sq));
        choice[static_cast<std::size_t>(g)] = std::move(j);
        ctx[static_cast<std::size_t>(g)] =
            std::make_unique<decode::DecodeContext>(std::move(best.code));
    });
    std::vector<decode::RateCurvePoint> pts(
        static_cast<std::size_t>(static_cast<long>(grid.size()) * nd * ns));
    parallel_for(static_cast<long>(grid.size()) * nd * ns, s.jobs,
                 [&](long u) {
                     const long g = u / (nd * ns);
                     const long rem = u % (nd * ns);
                     const auto& c = ctx[static_cast<std::size_t>(g)];
                     if (!c) return;
                     decode::Decoder dec =
                         s.decoders[static_cast<std::size_t>(rem / ns)];
                     double sigma =
                         s.sigma_list[static_cast<std::size_t>(rem % ns)];
                     pts[static_cast<std::size_t>(u)] = decode::error_rate(
                         *c, sigma, s.samples,
                         rate_seed(grid_seed[static_cast<std::size_t>(g)], dec,
                                   sigma),
                         dec);
                 });
    std::string body;
    ordered_json rows_json = ordered_json::array();
    ordered_json records = ordered_json::array();
    ordered_json summary = ordered_json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const GridPoint& p = grid[g];
        if (!ctx[g]) {
            body += skip_record_text(p);
            records.push_back(skip_record_json(p));
            summary.push_back(skip_record_json(p));
            continue;
        }
        for (long u = static_cast<long>(g) * nd * ns;
             u < static_cast<long>(g + 1) * nd * ns; ++u) {
            body += rate_row_text(pts[static_cast<std::size_t>(u)],
                                  grid_seed[g]) +
                    "\n";
            rows_json.push_back(
                rate_row_json(pts[static_cast<std::size_t>(u)], grid_seed[g]));
        }
        summary.push_back(choice[g]);
    }
    return finish(s, kRateHeader, body, rows_json, records, summary);
}

RunResult run_bound_table(const ExperimentSpec& s) {
    ensure_valid(s, ExperimentKind::BoundTable);
    const std::vector<GridPoint> grid = make_grid(s);
    std::string body;
    ordered_json rows_json = ordered_json::array();
    ordered_json summary = ordered_json::array();
    for (const GridPoint& p : grid) {
        double r_sis = r_guarantee(static_cast<std::uint64_t>(p.n), 1, s.gamma);
        siscode::BoundReport b = siscode::bounds(p.n, p.q, p.lambda, r_sis);
        RingProbReport ring;
        bool have_ring = false;
        std::string ring_err;
        try {
            ring = epsilon_bound_gamma(static_cast<std::uint64_t>(p.n),
                                       static_cast<std::uint64_t>(p.k),
                                       static_cast<std::uint64_t>(p.q),
                                       s.gamma);
            have_ring = true;
        } catch (const std::exception& e) {
            ring_err = e.what();
        }
        ordered_json j = grid_point_json(p);
        ordered_json sis;
        sis["r"] = b.r;
        sis["lower_target"] = b.lower_target;
        sis["minkowski_upper"] = b.minkowski_upper;
        sis["covering_upper"] = b.covering_upper;
        sis["prob_bound"] = b.prob_bound;
        sis["precond_ok"] = b.precond_ok;
        sis["q_prime"] = b.q_prime;
        sis["vacuous"] = b.vacuous;
        j["sis"] = std::move(sis);
        if (have_ring) {
            ordered_json rj;
            rj["r"] = ring.r_guarantee;
            rj["epsilon"] = ring.epsilon;
            rj["log_epsilon"] = ring.log_epsilon;
            rj["vacuous"] = !(ring.epsilon <= 1.0);
            rj["term_count"] = static_cast<long>(ring.terms.size());
            j["ring"] = std::move(rj);
        } else {
            ordered_json rj;
            rj["error"] = ring_err;
            j["ring"] = std::move(rj);
        }
        rows_json.push_back(j);
        summary.push_back(std::move(j));
        std::vector<std::string> f{
            fmt_long(p.n), fmt_long(p.k), fmt_long(p.q), fmt_long(p.lambda),
            fmt_double(s.gamma), fmt_double(b.r), fmt_double(b.lower_target),
            fmt_double(b.minkowski_upper), fmt_double(b.covering_upper),
            fmt_double(b.prob_bound), fmt_bool(b.precond_ok),
            fmt_bool(b.q_prime), fmt_bool(b.vacuous)};
        if (have_ring) {
            f.push_back(fmt_double(ring.r_guarantee));
            f.push_back(fmt_double(ring.epsilon));
            f.push_back(fmt_double(ring.log_epsilon));
            f.push_back(fmt_bool(!(ring.epsilon <= 1.0)));
            f.push_back("");
        } else {
            f.insert(f.end(), {"", "", "", ""});
            f.push_back(csv_safe(ring_err));
        }
        body += join(f, ',') + "\n";
    }
    return finish(s, kBoundHeader, body, rows_json, ordered_json::array(),
                  summary);
}

RunResult run_param_check(const ExperimentSpec& s) {
    ensure_valid(s, ExperimentKind::ParamCheck);
    const std::vector<GridPoint> grid = make_grid(s);
    std::string body;
    ordered_json rows_json = ordered_json::array();
    for (const GridPoint& p : grid) {
        RingParamReport rep = validate_ring_parameters(
            static_cast<std::uint64_t>(p.n), static_cast<std::uint64_t>(p.k),
            static_cast<std::uint64_t>(p.q));
        ordered_json j;
        j["n"] = p.n;
        j["k"] = p.k;
        j["q"] = p.q;
        ordered_json vb = validation_body(rep);
        for (auto& [key, v] : vb.items()) j[key] = v;
        rows_json.push_back(std::move(j));
        body += join({fmt_long(p.n), fmt_long(p.k), fmt_long(p.q),
                      ring_family_name(rep.family), fmt_bool(rep.ok),
                      failed_check_names(rep)},
                     ',') +
                "\n";
    }
    return finish(s, kParamHeader, body, rows_json, ordered_json::array(),
                  rows_json);
}

RunResult run_experiment(const ExperimentSpec& s) {
    switch (s.kind) {
        case ExperimentKind::DistanceSurvey:
            return run_distance_survey(s);
        case ExperimentKind::RingDistanceSurvey:
            return run_ring_distance_survey(s);
        case ExperimentKind::DecodeCurve:
            return run_decode_curve(s);
        case ExperimentKind::BoundTable:
            return run_bound_table(s);
        case ExperimentKind::ParamCheck:
            return run_param_check(s);
    }
    throw std::invalid_argument("unknown experiment kind");
}

ReplayResult replay_row(const std::string& csv_text, long row_index) {
    bool have_kind = false;
    ExperimentKind kind = ExperimentKind::DistanceSurvey;
    long candidates = 0;
    std::vector<std::string> data_rows;
    bool header_seen = false;
    for (const std::string& line : split(csv_text, '\n')) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# kind=", 0) == 0) {
                kind = kind_from_name(line.substr(7));
                have_kind = true;
            } else if (line.rfind("# candidates=", 0) == 0) {
                candidates = parse_long(line.substr(13));
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        data_rows.push_back(line);
    }
    if (!have_kind)
        throw std::invalid_argument("missing '# kind=' metadata line");
    if (row_index < 1 || row_index > static_cast<long>(data_rows.size()))
        throw std::out_of_range("row index out of range");
    const std::string& line =
        data_rows[static_cast<std::size_t>(row_index - 1)];
    const std::vector<std::string> f = split(line, ',');
    ReplayResult res;
    res.expected = line;
    switch (kind) {
        case ExperimentKind::DistanceSurvey: {
            if (f.size() != 9)
                throw std::invalid_argument("malformed survey row");
            SurveyRow r = make_distance_row(
                parse_long(f[0]), parse_long(f[1]), parse_long(f[2]),
                parse_long(f[3]), parse_long(f[4]), parse_u64(f[8]));
            res.actual = survey_row_text(r);
            break;
        }
        case ExperimentKind::RingDistanceSurvey: {
            if (f.size() != 9)
                throw std::invalid_argument("malformed survey row");
            SurveyRow r =
                make_ring_row(parse_long(f[0]), parse_long(f[1]),
                              parse_long(f[2]), parse_long(f[4]),
                              parse_u64(f[8]));
            res.actual = survey_row_text(r);
            break;
        }
        case ExperimentKind::DecodeCurve: {
            if (f.size() != 12)
                throw std::invalid_argument("malformed rate row");
            if (candidates < 1)
                throw std::invalid_argument(
                    "missing '# candidates=' metadata line");
            const long n = parse_long(f[0]), k = parse_long(f[1]),
                       q = parse_long(f[2]), lambda = parse_long(f[3]);
            decode::Decoder dec = decoder_or_throw(f[4]);
            const double sigma = parse_double(f[5]);
            const long trials = parse_long(f[6]);
            const std::uint64_t sg = parse_u64(f[11]);
            Chosen best = select_code(n, k, q, lambda, sg, candidates);
            decode::DecodeContext ctx(std::move(best.code));
            decode::RateCurvePoint pt = decode::error_rate(
                ctx, sigma, trials, rate_seed(sg, dec, sigma), dec);
            res.actual = rate_row_text(pt, sg);
            break;
        }
        case ExperimentKind::BoundTable:
        case ExperimentKind::ParamCheck:
            throw std::invalid_argument(
                "replay is only defined for sampled experiments");
    }
    res.matched = res.actual == res.expected;
    return res;
}

}  // namespace gkpsis::simcli
