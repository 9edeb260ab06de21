#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "asdbr/asdbr.hpp"
#include "asdbr/bench.hpp"
#include "asdbr/problem.hpp"

namespace asdbr {

// ---- names -----------------------------------------------------------------

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::Lasso: return "lasso";
    case Algorithm::Sbl: return "sbl";
    case Algorithm::Asdbr: return "asdbr";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "lasso") return Algorithm::Lasso;
    if (s == "sbl") return Algorithm::Sbl;
    if (s == "asdbr") return Algorithm::Asdbr;
    throw std::invalid_argument("unknown algorithm: " + s);
}

inline std::string dist_name(SignalDistribution d) {
    return d == SignalDistribution::SpikesPlusMinusOne ? "spikes" : "gaussian";
}

inline SignalDistribution parse_dist(const std::string& s) {
    if (s == "spikes") return SignalDistribution::SpikesPlusMinusOne;
    if (s == "gaussian") return SignalDistribution::StandardGaussian;
    throw std::invalid_argument("unknown distribution: " + s);
}

inline std::string case_name(CaseId c) {
    switch (c) {
    case CaseId::FixedRatioSweepN: return "sweep-n";
    case CaseId::SweepSnr: return "sweep-snr";
    case CaseId::SweepK: return "sweep-k";
    case CaseId::SingleInstance: return "single";
    }
    return "?";
}

inline CaseId parse_case(const std::string& s) {
    if (s == "sweep-n") return CaseId::FixedRatioSweepN;
    if (s == "sweep-snr") return CaseId::SweepSnr;
    if (s == "sweep-k") return CaseId::SweepK;
    if (s == "single") return CaseId::SingleInstance;
    throw std::invalid_argument("unknown case: " + s);
}

inline std::string inner_name(InnerAlgorithm a) { return a == InnerAlgorithm::Ista ? "ista" : "fista"; }

inline InnerAlgorithm parse_inner(const std::string& s) {
    if (s == "ista") return InnerAlgorithm::Ista;
    if (s == "fista") return InnerAlgorithm::Fista;
    throw std::invalid_argument("unknown inner algorithm: " + s);
}

inline std::string termination_name(TerminationReason r) {
    switch (r) {
    case TerminationReason::SupportStable: return "support_stable";
    case TerminationReason::MaxOuter: return "max_outer";
    case TerminationReason::EmptySupport: return "empty_support";
    }
    return "?";
}

// ---- number formatting -----------------------------------------------------

/// Shortest decimal form that parses back to the same double, so CSV output
/// is byte-stable and value-exact on round trip.
inline std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{})
        throw std::invalid_argument("parse_double: bad value '" + s + "'");
    return v;
}

// ---- problem container -----------------------------------------------------

/// Problem-plus-ground-truth container, serializable as flat binary or CSV.
///
/// Binary layout (little endian, doubles are IEEE-754 binary64):
///   8 bytes    magic "ASDBRPF1"
///   u64 m, u64 n, u64 k
///   f64 snr_db
///   u32 dist   (0 = spikes, 1 = gaussian)
///   u64 seed
///   f64[m*n]   design, row major
///   f64[m]     observation y
///   f64[n]     theta_true
///
/// CSV layout: the header line "m,n,k,snr_db,dist,seed", one line of values,
/// then m lines of n design entries, one line of m observation entries, and
/// one line of n theta_true entries.
struct ProblemFile {
    Index m = 0, n = 0, k = 0;
    double snr_db = 0.0;
    SignalDistribution dist = SignalDistribution::SpikesPlusMinusOne;
    std::uint64_t seed = 0;
    Matrix design;
    Vector observation;
    Vector theta_true;

    RecoveryProblem to_problem(double lambda) const { return RecoveryProblem(design, observation, lambda); }
    GroundTruth to_truth() const { return GroundTruth{theta_true, nonzero_support(theta_true)}; }
};

namespace detail {

inline constexpr char kProblemMagic[9] = "ASDBRPF1";

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
void write_raw(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

} // namespace detail

inline void write_problem_binary(const ProblemFile& pf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(detail::kProblemMagic, 8);
    detail::write_raw(out, static_cast<std::uint64_t>(pf.m));
    detail::write_raw(out, static_cast<std::uint64_t>(pf.n));
    detail::write_raw(out, static_cast<std::uint64_t>(pf.k));
    detail::write_raw(out, pf.snr_db);
    detail::write_raw(out, static_cast<std::uint32_t>(pf.dist == SignalDistribution::SpikesPlusMinusOne ? 0 : 1));
    detail::write_raw(out, pf.seed);
    for (Index i = 0; i < pf.m; ++i)
        for (Index j = 0; j < pf.n; ++j)
            detail::write_raw(out, pf.design(i, j));
    out.write(reinterpret_cast<const char*>(pf.observation.data()),
              static_cast<std::streamsize>(sizeof(double)) * pf.m);
    out.write(reinterpret_cast<const char*>(pf.theta_true.data()),
              static_cast<std::streamsize>(sizeof(double)) * pf.n);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline ProblemFile read_problem_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, detail::kProblemMagic, 8) != 0)
        throw std::runtime_error("not a problem container: " + path);
    ProblemFile pf;
    pf.m = static_cast<Index>(detail::read_raw<std::uint64_t>(in));
    pf.n = static_cast<Index>(detail::read_raw<std::uint64_t>(in));
    pf.k = static_cast<Index>(detail::read_raw<std::uint64_t>(in));
    pf.snr_db = detail::read_raw<double>(in);
    pf.dist = detail::read_raw<std::uint32_t>(in) == 0 ? SignalDistribution::SpikesPlusMinusOne
                                                       : SignalDistribution::StandardGaussian;
    pf.seed = detail::read_raw<std::uint64_t>(in);
    if (pf.m < 1 || pf.n < 1) throw std::runtime_error("corrupt problem header: " + path);
    pf.design.resize(pf.m, pf.n);
    for (Index i = 0; i < pf.m; ++i)
        for (Index j = 0; j < pf.n; ++j)
            pf.design(i, j) = detail::read_raw<double>(in);
    pf.observation.resize(pf.m);
    in.read(reinterpret_cast<char*>(pf.observation.data()), static_cast<std::streamsize>(sizeof(double)) * pf.m);
    pf.theta_true.resize(pf.n);
    in.read(reinterpret_cast<char*>(pf.theta_true.data()), static_cast<std::streamsize>(sizeof(double)) * pf.n);
    if (!in) throw std::runtime_error("truncated problem container: " + path);
    return pf;
}

inline void write_problem_csv(const ProblemFile& pf, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "m,n,k,snr_db,dist,seed\n";
    out << pf.m << ',' << pf.n << ',' << pf.k << ',' << format_double(pf.snr_db) << ',' << dist_name(pf.dist)
        << ',' << pf.seed << '\n';
    for (Index i = 0; i < pf.m; ++i) {
        for (Index j = 0; j < pf.n; ++j) out << (j ? "," : "") << format_double(pf.design(i, j));
        out << '\n';
    }
    for (Index i = 0; i < pf.m; ++i) out << (i ? "," : "") << format_double(pf.observation[i]);
    out << '\n';
    for (Index j = 0; j < pf.n; ++j) out << (j ? "," : "") << format_double(pf.theta_true[j]);
    out << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline ProblemFile read_problem_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "m,n,k,snr_db,dist,seed")
        throw std::runtime_error("not a CSV problem container: " + path);
    if (!std::getline(in, line)) throw std::runtime_error("truncated problem container: " + path);
    auto header = detail::split_csv_line(line);
    if (header.size() != 6) throw std::runtime_error("corrupt problem header: " + path);
    ProblemFile pf;
    pf.m = std::stoll(header[0]);
    pf.n = std::stoll(header[1]);
    pf.k = std::stoll(header[2]);
    pf.snr_db = parse_double(header[3]);
    pf.dist = parse_dist(header[4]);
    pf.seed = std::stoull(header[5]);
    pf.design.resize(pf.m, pf.n);
    for (Index i = 0; i < pf.m; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated design: " + path);
        auto fields = detail::split_csv_line(line);
        if (static_cast<Index>(fields.size()) != pf.n) throw std::runtime_error("bad design row: " + path);
        for (Index j = 0; j < pf.n; ++j) pf.design(i, j) = parse_double(fields[static_cast<std::size_t>(j)]);
    }
    if (!std::getline(in, line)) throw std::runtime_error("truncated observation: " + path);
    auto yfields = detail::split_csv_line(line);
    if (static_cast<Index>(yfields.size()) != pf.m) throw std::runtime_error("bad observation row: " + path);
    pf.observation.resize(pf.m);
    for (Index i = 0; i < pf.m; ++i) pf.observation[i] = parse_double(yfields[static_cast<std::size_t>(i)]);
    if (!std::getline(in, line)) throw std::runtime_error("truncated theta_true: " + path);
    auto tfields = detail::split_csv_line(line);
    if (static_cast<Index>(tfields.size()) != pf.n) throw std::runtime_error("bad theta_true row: " + path);
    pf.theta_true.resize(pf.n);
    for (Index j = 0; j < pf.n; ++j) pf.theta_true[j] = parse_double(tfields[static_cast<std::size_t>(j)]);
    return pf;
}

/// Dispatch on extension: ".csv" is the text container, anything else binary.
inline void write_problem(const ProblemFile& pf, const std::string& path) {
    if (detail::has_suffix(path, ".csv"))
        write_problem_csv(pf, path);
    else
        write_problem_binary(pf, path);
}

inline ProblemFile read_problem(const std::string& path) {
    if (detail::has_suffix(path, ".csv")) return read_problem_csv(path);
    return read_problem_binary(path);
}

// ---- results tables ----------------------------------------------------------

inline constexpr const char* kResultsCsvHeader =
    "algorithm,m,n,k,snr_db,trial,rnmse,runtime_seconds,support_size,support_exact,outer_iterations";

inline std::string results_csv_string(const std::vector<TrialResult>& rows) {
    std::ostringstream out;
    out << kResultsCsvHeader << '\n';
    for (const TrialResult& r : rows) {
        out << algorithm_name(r.algorithm) << ',' << r.m << ',' << r.n << ',' << r.k << ','
            << format_double(r.snr_db) << ',' << r.trial_index << ',' << format_double(r.rnmse) << ','
            << format_double(r.runtime_seconds) << ',' << r.support_size << ',' << (r.support_exact ? 1 : 0)
            << ',' << r.outer_iterations << '\n';
    }
    return out.str();
}

inline void write_results_csv(const std::vector<TrialResult>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: byte-stable newlines
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << results_csv_string(rows);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<TrialResult> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kResultsCsvHeader)
        throw std::runtime_error("not a results table: " + path);
    std::vector<TrialResult> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 11) throw std::runtime_error("bad results row in " + path);
        TrialResult r;
        r.algorithm = parse_algorithm(f[0]);
        r.m = std::stoll(f[1]);
        r.n = std::stoll(f[2]);
        r.k = std::stoll(f[3]);
        r.snr_db = parse_double(f[4]);
        r.trial_index = std::stoi(f[5]);
        r.rnmse = parse_double(f[6]);
        r.runtime_seconds = parse_double(f[7]);
        r.support_size = std::stoll(f[8]);
        r.support_exact = f[9] == "1";
        r.outer_iterations = std::stoi(f[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline void write_summary_csv(const std::vector<PointSummary>& summaries, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "algorithm,m,n,k,snr_db,trials,mean_rnmse,median_rnmse,mean_runtime_seconds\n";
    for (const PointSummary& s : summaries) {
        out << algorithm_name(s.algorithm) << ',' << s.m << ',' << s.n << ',' << s.k << ','
            << format_double(s.snr_db) << ',' << s.trials << ',' << format_double(s.mean_rnmse) << ','
            << format_double(s.median_rnmse) << ',' << format_double(s.mean_runtime_seconds) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---- JSON ----------------------------------------------------------------

using nlohmann::json;

inline json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["case"] = case_name(spec.case_id);
    j["points"] = json::array();
    for (const SweepPoint& p : spec.points)
        j["points"].push_back({{"m", p.m}, {"n", p.n}, {"k", p.k}, {"snr_db", p.snr_db}});
    j["dist"] = dist_name(spec.dist);
    j["algorithms"] = json::array();
    for (Algorithm a : spec.algorithms) j["algorithms"].push_back(algorithm_name(a));
    j["trials"] = spec.trials;
    j["base_seed"] = spec.base_seed;
    j["config"] = {{"k_inner", spec.config.k_inner},
                   {"k_outer", spec.config.k_outer},
                   {"threshold_ratio", spec.config.threshold_ratio},
                   {"lambda", spec.config.lambda},
                   {"inner_tol", spec.config.inner_tol},
                   {"inner_algorithm", inner_name(spec.config.inner_algorithm)},
                   {"narrative_weights", spec.config.narrative_weights}};
    if (!spec.lambda_overrides.empty()) {
        json overrides;
        for (const auto& [algo, lambda] : spec.lambda_overrides) overrides[algorithm_name(algo)] = lambda;
        j["lambda_overrides"] = overrides;
    }
    return j;
}

/// Accepts either explicit "points" or the sweep shorthand for the named
/// case: "n_values" / "snr_values" / "k_values" plus scalar "m", "n", "k",
/// "snr_db", "m_over_n" overrides.
inline ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec spec;
    spec.case_id = parse_case(j.value("case", "single"));
    if (j.contains("points")) {
        for (const json& p : j.at("points"))
            spec.points.push_back({p.at("m").get<Index>(), p.at("n").get<Index>(), p.at("k").get<Index>(),
                                   p.at("snr_db").get<double>()});
    } else {
        switch (spec.case_id) {
        case CaseId::FixedRatioSweepN:
            spec.points = make_case_sweep_n(j.value("n_values", std::vector<Index>{400, 800, 1200, 1600, 2000}),
                                            j.value("m_over_n", 0.5), j.value("k", Index{20}),
                                            j.value("snr_db", 10.0))
                              .points;
            break;
        case CaseId::SweepSnr:
            spec.points = make_case_sweep_snr(j.value("snr_values", std::vector<double>{0, 5, 10, 15, 20}),
                                              j.value("m", Index{400}), j.value("n", Index{800}),
                                              j.value("k", Index{20}))
                              .points;
            break;
        case CaseId::SweepK:
            spec.points = make_case_sweep_k(j.value("k_values", std::vector<Index>{10, 20, 30, 40, 50, 60}),
                                            j.value("m", Index{400}), j.value("n", Index{800}),
                                            j.value("snr_db", 10.0))
                              .points;
            break;
        case CaseId::SingleInstance:
            spec.points = make_case_single(j.value("m", Index{800}), j.value("n", Index{1600}),
                                           j.value("k", Index{20}), j.value("snr_db", 15.0))
                              .points;
            break;
        }
    }
    if (j.contains("dist")) spec.dist = parse_dist(j.at("dist").get<std::string>());
    if (j.contains("algorithms")) {
        spec.algorithms.clear();
        for (const json& a : j.at("algorithms")) spec.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    spec.trials = j.value("trials", 100);
    spec.base_seed = j.value("base_seed", std::uint64_t{0});
    if (j.contains("config")) {
        const json& c = j.at("config");
        spec.config.k_inner = c.value("k_inner", spec.config.k_inner);
        spec.config.k_outer = c.value("k_outer", spec.config.k_outer);
        spec.config.threshold_ratio = c.value("threshold_ratio", spec.config.threshold_ratio);
        spec.config.lambda = c.value("lambda", spec.config.lambda);
        spec.config.inner_tol = c.value("inner_tol", spec.config.inner_tol);
        if (c.contains("inner_algorithm")) spec.config.inner_algorithm = parse_inner(c.at("inner_algorithm"));
        spec.config.narrative_weights = c.value("narrative_weights", spec.config.narrative_weights);
    }
    if (j.contains("lambda_overrides"))
        for (const auto& [name, lambda] : j.at("lambda_overrides").items())
            spec.lambda_overrides[parse_algorithm(name)] = lambda.get<double>();
    return spec;
}

inline json trial_result_to_json(const TrialResult& r) {
    json j{{"algorithm", algorithm_name(r.algorithm)},
           {"m", r.m},
           {"n", r.n},
           {"k", r.k},
           {"snr_db", r.snr_db},
           {"trial", r.trial_index},
           {"rnmse", r.rnmse},
           {"runtime_seconds", r.runtime_seconds},
           {"support_size", r.support_size},
           {"support_exact", r.support_exact},
           {"outer_iterations", r.outer_iterations}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline void write_results_json(const std::vector<TrialResult>& rows, const ExperimentSpec& spec,
                               const std::string& path) {
    json j;
    j["spec"] = spec_to_json(spec);
    j["results"] = json::array();
    for (const TrialResult& r : rows) j["results"].push_back(trial_result_to_json(r));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::pair<ExperimentSpec, std::vector<TrialResult>> read_results_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    json j = json::parse(in);
    std::vector<TrialResult> rows;
    for (const json& e : j.at("results")) {
        TrialResult r;
        r.algorithm = parse_algorithm(e.at("algorithm").get<std::string>());
        r.m = e.at("m").get<Index>();
        r.n = e.at("n").get<Index>();
        r.k = e.at("k").get<Index>();
        r.snr_db = e.at("snr_db").get<double>();
        r.trial_index = e.at("trial").get<int>();
        // NaN serializes as null in JSON
        r.rnmse = e.at("rnmse").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : e.at("rnmse").get<double>();
        r.runtime_seconds = e.at("runtime_seconds").get<double>();
        r.support_size = e.at("support_size").get<Index>();
        r.support_exact = e.at("support_exact").get<bool>();
        r.outer_iterations = e.at("outer_iterations").get<int>();
        r.error = e.value("error", "");
        rows.push_back(std::move(r));
    }
    return {spec_from_json(j.at("spec")), std::move(rows)};
}

inline json asdbr_report_to_json(const AsdbrReport& report) {
    json j;
    j["support_trace"] = report.support_trace;
    j["outer_iterations"] = report.outer_iterations;
    j["inner_iteration_counts"] = report.inner_iteration_counts;
    j["termination_reason"] = termination_name(report.termination_reason);
    j["final_support"] = report.final_support();
    return j;
}

} // namespace asdbr
