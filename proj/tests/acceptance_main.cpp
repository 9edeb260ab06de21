// Acceptance suite: one pass/fail line per criterion, exit nonzero if any
// criterion fails. Oracles here are deliberately independent of the library
// code paths they check (explicit dense inverses, grid searches, recursions).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asdbr/asdbr.hpp"
#include "asdbr/bench.hpp"
#include "asdbr/io.hpp"

using namespace asdbr;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s] %s — %s\n", id, pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double median_int(std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    if (v.size() % 2 == 1) return static_cast<double>(v[mid]);
    return 0.5 * (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid]));
}

// ---- 1. termination bound (outer_iterations <= n+1, trace non-increasing) --

void criterion_termination() {
    std::mt19937_64 rng(20240);
    std::uniform_int_distribution<Index> m_pick(10, 100), n_pick(20, 200);
    std::uniform_real_distribution<double> snr_pick(0.0, 20.0);
    bool pass = true;
    std::string detail;
    int worst_outer = 0;
    for (int rep = 0; rep < 200 && pass; ++rep) {
        const Index m = m_pick(rng);
        const Index n = n_pick(rng);
        std::uniform_int_distribution<Index> k_pick(1, n);
        const SweepPoint point{m, n, k_pick(rng), snr_pick(rng)};
        const SignalDistribution dist =
            rep % 2 == 0 ? SignalDistribution::SpikesPlusMinusOne : SignalDistribution::StandardGaussian;
        GeneratedInstance inst = make_instance(point, dist, derive_seed(1, 0, rep));
        RecoveryProblem problem(inst.design, inst.observed.observation, 1.0);
        SolverConfig config;
        config.k_inner = 150;
        config.k_outer = static_cast<int>(n) + 10; // beyond the theoretical bound
        AsdbrReport rep_out = asdbr_solve(problem, config);
        worst_outer = std::max(worst_outer, rep_out.outer_iterations);
        if (rep_out.outer_iterations > static_cast<int>(n) + 1) {
            pass = false;
            detail = "outer_iterations " + std::to_string(rep_out.outer_iterations) + " > n+1 at n=" +
                     std::to_string(n);
        }
        for (std::size_t i = 1; i < rep_out.support_trace.size() && pass; ++i)
            if (rep_out.support_trace[i] > rep_out.support_trace[i - 1]) {
                pass = false;
                detail = "support trace increased";
            }
    }
    if (pass)
        detail = "200 random instances, worst outer_iterations " + std::to_string(worst_outer) +
                 ", trace always non-increasing";
    report(1, "termination bound", pass, detail);
}

// ---- 2. weight oracle (dense explicit inverse, rel error <= 1e-10) ---------

void criterion_weight_oracle() {
    std::mt19937_64 rng(20241);
    std::uniform_int_distribution<Index> m_pick(2, 50), p_pick(2, 60);
    std::uniform_real_distribution<double> lam_pick(0.1, 5.0), g_pick(0.0, 3.0);
    std::bernoulli_distribution zero(0.25);
    double worst = 0.0;
    bool pass = true;
    for (int rep = 0; rep < 100 && pass; ++rep) {
        const Index m = m_pick(rng), p = p_pick(rng);
        const Matrix phi = generate_design_matrix(m, p, derive_seed(2, 0, rep));
        Vector gamma(p);
        for (Index i = 0; i < p; ++i) gamma[i] = zero(rng) ? 0.0 : g_pick(rng);
        const double lambda = lam_pick(rng);

        const WeightDiag got = compute_weights(phi, HyperParams{gamma}, lambda);
        const Matrix b = lambda * Matrix::Identity(m, m) + phi * gamma.asDiagonal() * phi.transpose();
        const Vector expected = (phi.transpose() * b.inverse() * phi).diagonal().cwiseSqrt();
        for (Index i = 0; i < p; ++i) {
            const double rel = std::abs(got.w[i] - expected[i]) / std::abs(expected[i]);
            worst = std::max(worst, rel);
            if (rel > 1e-10) pass = false;
        }
    }
    std::ostringstream detail;
    detail << "100 instances (m <= 50), worst relative error " << worst;
    report(2, "weight oracle vs dense inverse", pass, detail.str());
}

// ---- 3. prox oracle (scalar grid search to 1e-4) ----------------------------

void criterion_prox_oracle() {
    std::mt19937_64 rng(20242);
    std::uniform_real_distribution<double> x_pick(-5.0, 5.0), nu_pick(0.0, 3.0);
    double worst = 0.0;
    bool pass = true;
    for (int rep = 0; rep < 1000; ++rep) {
        const double x = x_pick(rng), nu = nu_pick(rng);
        const double got = soft_threshold(x, nu);
        const double lo = -(std::abs(x) + nu + 0.5), hi = -lo;
        double best_z = lo, best_val = std::numeric_limits<double>::infinity();
        for (double z = lo; z <= hi; z += 2e-5) {
            const double val = 0.5 * (z - x) * (z - x) + nu * std::abs(z);
            if (val < best_val) {
                best_val = val;
                best_z = z;
            }
        }
        worst = std::max(worst, std::abs(got - best_z));
        if (std::abs(got - best_z) > 1e-4) pass = false;
    }
    std::ostringstream detail;
    detail << "1000 random scalars, worst |prox - grid argmin| " << worst;
    report(3, "prox oracle vs grid search", pass, detail.str());
}

// ---- 4. ISTA monotone descent ----------------------------------------------

void criterion_ista_descent() {
    std::mt19937_64 rng(20243);
    std::uniform_int_distribution<Index> m_pick(10, 60), n_pick(20, 120);
    std::uniform_real_distribution<double> lam_pick(0.05, 2.0), w_pick(0.0, 4.0), snr_pick(5.0, 25.0);
    std::normal_distribution<double> gauss;
    bool pass = true;
    std::string detail = "50 weighted problems, objective trace non-increasing (slack 1e-12)";
    for (int rep = 0; rep < 50 && pass; ++rep) {
        const Index m = m_pick(rng), n = n_pick(rng);
        std::uniform_int_distribution<Index> k_pick(1, std::max<Index>(1, n / 4));
        GeneratedInstance inst = make_instance({m, n, k_pick(rng), snr_pick(rng)},
                                               SignalDistribution::StandardGaussian, derive_seed(4, 0, rep));
        RecoveryProblem problem(inst.design, inst.observed.observation, lam_pick(rng));
        Vector weights(n), x0(n);
        for (Index i = 0; i < n; ++i) {
            weights[i] = w_pick(rng);
            x0[i] = gauss(rng);
        }
        StepPolicy step = StepPolicy::for_design(problem.design()); // tau = 0.99 / |Phi|_2^2
        SolveReport run = ista_solve(problem, weights, x0, step, 250, 0.0);
        for (std::size_t i = 1; i < run.objective_trace.size(); ++i) {
            if (run.objective_trace[i] > run.objective_trace[i - 1] + 1e-12) {
                pass = false;
                std::ostringstream oss;
                oss << "objective rose by " << run.objective_trace[i] - run.objective_trace[i - 1]
                    << " at iteration " << i << " (problem " << rep << ")";
                detail = oss.str();
                break;
            }
        }
    }
    report(4, "ista monotone descent", pass, detail);
}

// ---- 5. single-case reference profile ---------------------------------------

void criterion_single_case() {
    ExperimentSpec spec = make_case_single(800, 1600, 20, 15.0);
    spec.dist = SignalDistribution::SpikesPlusMinusOne;
    spec.algorithms = {Algorithm::Asdbr};
    spec.trials = 20;
    spec.base_seed = 5001;
    std::vector<TrialResult> rows = run_sweep(spec, 2);

    std::vector<double> rnmses;
    std::vector<Index> supports, outers;
    for (const TrialResult& r : rows) {
        rnmses.push_back(r.rnmse);
        supports.push_back(r.support_size);
        outers.push_back(static_cast<Index>(r.outer_iterations));
    }
    const double med_rnmse = median_of(rnmses);
    const double med_support = median_int(supports);
    const double med_outer = median_int(outers);

    const bool pass = med_support == 20.0 && med_rnmse <= 0.05 && med_outer <= 6.0;
    std::ostringstream detail;
    detail << "m=800 n=1600 k=20 snr=15dB lambda=1, 20 trials: median support " << med_support
           << " (want 20), median rnmse " << med_rnmse << " (want <= 0.05), median outer " << med_outer
           << " (want <= 6)";
    report(5, "single-case support recovery", pass, detail.str());
    if (!pass) {
        // Diagnostic only: the identical pipeline at 5.62x less noise (30 dB
        // under the 20*log10 definition used throughout) recovers the support
        // exactly.
        ExperimentSpec diag = spec;
        diag.points[0].snr_db = 30.0;
        std::vector<TrialResult> drows = run_sweep(diag, 2);
        std::vector<double> drn;
        std::vector<Index> dsup, dout;
        for (const TrialResult& r : drows) {
            drn.push_back(r.rnmse);
            dsup.push_back(r.support_size);
            dout.push_back(static_cast<Index>(r.outer_iterations));
        }
        std::printf("            [info] same pipeline at snr=30dB: median support %g, median rnmse %g, "
                    "median outer %g\n",
                    median_int(dsup), median_of(drn), median_int(dout));
    }
}

// ---- 6/7/8. comparative sweep (shared) ---------------------------------------

struct SweepOutcome {
    std::vector<PointSummary> summaries; // per dist, ordered point-major then algorithm
    SignalDistribution dist;
};

const PointSummary& find_summary(const std::vector<PointSummary>& summaries, Algorithm algo, double snr) {
    for (const PointSummary& s : summaries)
        if (s.algorithm == algo && s.snr_db == snr) return s;
    throw std::logic_error("summary not found");
}

void criteria_comparative() {
    std::vector<SweepOutcome> outcomes;
    for (SignalDistribution dist :
         {SignalDistribution::SpikesPlusMinusOne, SignalDistribution::StandardGaussian}) {
        ExperimentSpec spec = make_case_sweep_snr({0, 5, 10, 15, 20}, 400, 800, 20);
        spec.dist = dist;
        spec.trials = 20;
        spec.base_seed = 6001;
        std::vector<TrialResult> rows = run_sweep(spec, 2);
        outcomes.push_back({aggregate_results(rows), dist});
    }

    // 6: accuracy — asdbr within 1.15x of sbl at snr in {0,10,20}; better than
    // lasso at snr >= 10.
    {
        bool pass = true;
        std::ostringstream detail;
        double worst_ratio = 0.0;
        for (const SweepOutcome& o : outcomes) {
            for (double snr : {0.0, 10.0, 20.0}) {
                const double a = find_summary(o.summaries, Algorithm::Asdbr, snr).mean_rnmse;
                const double s = find_summary(o.summaries, Algorithm::Sbl, snr).mean_rnmse;
                const double l = find_summary(o.summaries, Algorithm::Lasso, snr).mean_rnmse;
                worst_ratio = std::max(worst_ratio, a / s);
                if (a > 1.15 * s) {
                    pass = false;
                    detail << "asdbr/sbl=" << a / s << " at snr " << snr << " (" << dist_name(o.dist) << "); ";
                }
                if (snr >= 10.0 && !(a < l)) {
                    pass = false;
                    detail << "asdbr " << a << " !< lasso " << l << " at snr " << snr << " ("
                           << dist_name(o.dist) << "); ";
                }
            }
        }
        if (pass)
            detail << "both distributions, snr {0,10,20}: worst asdbr/sbl mean-rnmse ratio " << worst_ratio
                   << ", asdbr < lasso at snr >= 10";
        report(6, "comparative accuracy", pass, detail.str());
    }

    // 7: runtime ordering on the same sweep points.
    {
        bool pass = true;
        std::ostringstream detail;
        double worst_margin = std::numeric_limits<double>::infinity();
        for (const SweepOutcome& o : outcomes) {
            for (double snr : {0.0, 10.0, 20.0}) {
                const double a = find_summary(o.summaries, Algorithm::Asdbr, snr).mean_runtime_seconds;
                const double s = find_summary(o.summaries, Algorithm::Sbl, snr).mean_runtime_seconds;
                worst_margin = std::min(worst_margin, s / a);
                if (!(a < s)) {
                    pass = false;
                    detail << "asdbr " << a << "s !< sbl " << s << "s at snr " << snr << " ("
                           << dist_name(o.dist) << "); ";
                }
            }
        }
        if (pass) detail << "mean runtime asdbr < sbl at every point; smallest sbl/asdbr factor " << worst_margin;
        report(7, "comparative runtime", pass, detail.str());
    }

    // 8: per-algorithm mean rnmse non-increasing over {0,5,10,15,20} dB, at
    // most one inversion of relative size <= 2%.
    {
        bool pass = true;
        std::ostringstream detail;
        const std::vector<double> snrs{0, 5, 10, 15, 20};
        for (const SweepOutcome& o : outcomes) {
            for (Algorithm algo : {Algorithm::Lasso, Algorithm::Sbl, Algorithm::Asdbr}) {
                int inversions = 0;
                for (std::size_t i = 1; i < snrs.size(); ++i) {
                    const double prev = find_summary(o.summaries, algo, snrs[i - 1]).mean_rnmse;
                    const double curr = find_summary(o.summaries, algo, snrs[i]).mean_rnmse;
                    if (curr > prev) {
                        ++inversions;
                        if ((curr - prev) / prev > 0.02) {
                            pass = false;
                            detail << algorithm_name(algo) << " (" << dist_name(o.dist) << ") rose "
                                   << (curr - prev) / prev * 100.0 << "% at snr " << snrs[i] << "; ";
                        }
                    }
                }
                if (inversions > 1) {
                    pass = false;
                    detail << algorithm_name(algo) << " (" << dist_name(o.dist) << ") has " << inversions
                           << " inversions; ";
                }
            }
        }
        if (pass) detail << "mean rnmse non-increasing in snr for every algorithm and distribution";
        report(8, "snr monotonicity", pass, detail.str());
    }
}

// ---- 9. CCP surrogate descent -----------------------------------------------

void criterion_ccp_descent() {
    std::mt19937_64 rng(20249);
    std::uniform_int_distribution<Index> m_pick(10, 50), n_pick(20, 100);
    std::uniform_real_distribution<double> snr_pick(5.0, 25.0);
    bool pass = true;
    std::string detail = "30 instances: joint surrogate non-increasing within 1e-6";
    double worst_rise = 0.0;
    for (int rep = 0; rep < 30 && pass; ++rep) {
        const Index m = m_pick(rng), n = n_pick(rng);
        std::uniform_int_distribution<Index> k_pick(1, std::max<Index>(1, n / 5));
        const SignalDistribution dist =
            rep % 2 == 0 ? SignalDistribution::SpikesPlusMinusOne : SignalDistribution::StandardGaussian;
        GeneratedInstance inst = make_instance({m, n, k_pick(rng), snr_pick(rng)}, dist, derive_seed(9, 0, rep));
        RecoveryProblem problem(inst.design, inst.observed.observation, 1.0);
        SolverConfig config;
        config.k_inner = 150;
        config.k_outer = 8;
        SolveReport run = sbl_reweighted_solve(problem, config);
        for (std::size_t i = 1; i < run.objective_trace.size(); ++i) {
            const double rise = run.objective_trace[i] - run.objective_trace[i - 1];
            worst_rise = std::max(worst_rise, rise);
            if (rise > 1e-6) {
                pass = false;
                std::ostringstream oss;
                oss << "surrogate rose by " << rise << " at outer " << i << " (instance " << rep << ")";
                detail = oss.str();
            }
        }
    }
    if (pass) {
        std::ostringstream oss;
        oss << "30 instances, worst surrogate rise " << worst_rise << " (slack 1e-6)";
        detail = oss.str();
    }
    report(9, "ccp surrogate descent", pass, detail);
}

// ---- 10. byte-identical benchmark output (runtime column aside) -------------

std::string strip_runtime_column(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == 7) continue; // runtime_seconds
            out << fields[i] << (i + 1 == fields.size() ? "" : ",");
        }
        out << '\n';
    }
    return out.str();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

void criterion_reproducibility(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "asdbr_acceptance";
    fs::create_directories(dir);

    auto run_bench = [&](int threads, const fs::path& out) {
        std::ostringstream cmd;
        cmd << '"' << cli << '"'
            << " bench --case single --m 60 --n 120 --k 5 --snr 15 --trials 6 --seed 31 --threads "
            << threads << " --out " << out << " >/dev/null 2>&1";
        return std::system(cmd.str().c_str());
    };

    bool pass = true;
    std::string detail;
    if (cli.empty()) {
        pass = false;
        detail = "cli path not provided";
    } else {
        const fs::path out1 = dir / "run1.csv", out2 = dir / "run2.csv", out3 = dir / "run3.csv";
        if (run_bench(1, out1) != 0 || run_bench(2, out2) != 0 || run_bench(1, out3) != 0) {
            pass = false;
            detail = "bench invocation failed";
        } else {
            const std::string a = strip_runtime_column(slurp(out1));
            const std::string b = strip_runtime_column(slurp(out2));
            const std::string c = strip_runtime_column(slurp(out3));
            if (a.empty() || a != b || a != c) {
                pass = false;
                detail = "csv differs across runs or thread counts";
            } else {
                detail = "bench csv byte-identical across repeated runs and threads 1 vs 2 "
                         "(runtime column excluded)";
            }
        }
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    report(10, "bench reproducibility", pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    const auto started = std::chrono::steady_clock::now();
    auto want = [&](int id) { return only == 0 || only == id; };

    if (want(1)) criterion_termination();
    if (want(2)) criterion_weight_oracle();
    if (want(3)) criterion_prox_oracle();
    if (want(4)) criterion_ista_descent();
    if (want(5)) criterion_single_case();
    if (want(6) || want(7) || want(8)) criteria_comparative();
    if (want(9)) criterion_ccp_descent();
    if (want(10)) criterion_reproducibility(cli);

    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%d criterion failure(s); %.1f s total\n", g_failures, elapsed);
    return g_failures == 0 ? 0 : 1;
}
