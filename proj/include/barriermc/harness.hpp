#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "pricing.hpp"

namespace barriermc {

// Convergence-table experiments: one row per step count n, both estimators,
// error columns against a configured truth. The default trial rule is the
// cube of the step count, M = n^3.

enum class TruthSource { Analytic, FixedValue, BenchmarkRun };

struct Experiment {
    AnyModel model;
    BarrierContract contract;

    TruthSource truth_source = TruthSource::Analytic;
    double truth_value = 0.0;   // FixedValue
    int benchmark_steps = 5000; // BenchmarkRun budget
    uint64_t benchmark_trials = 50000000;

    std::vector<int> schedule = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    bool cube_rule = true;     // M = n^3
    uint64_t fixed_trials = 0; // used when cube_rule is false

    uint64_t seed = 1;
    int workers = 0;
    RngMode rng = RngMode::Pseudo;

    std::string benchmark_store; // optional persistence for BenchmarkRun

    void validate() const {
        for (size_t i = 0; i + 1 < schedule.size(); ++i)
            if (schedule[i] >= schedule[i + 1])
                throw std::invalid_argument("experiment: schedule must be strictly increasing");
        for (int n : schedule)
            if (n < 1) throw std::invalid_argument("experiment: schedule entries must be >= 1");
        if (!cube_rule && fixed_trials < 1)
            throw std::invalid_argument("experiment: fixed trial rule requires trials >= 1");
    }

    uint64_t trials_for(int n) const {
        if (cube_rule)
            return static_cast<uint64_t>(n) * static_cast<uint64_t>(n) * static_cast<uint64_t>(n);
        return fixed_trials;
    }
};

struct TableRow {
    uint64_t trials = 0;
    int steps = 0;
    double em_mean = 0.0;
    double em_stderr = 0.0;
    double pcm_mean = 0.0;
    double pcm_stderr = 0.0;
    double em_err_pct = 0.0;
    double pcm_err_pct = 0.0;
};

// --- benchmark store ---------------------------------------------------------

namespace detail {

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string num17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string canonical(const Model1D& m) {
    return to_string(m.kind) + ";r=" + num17(m.rate) + ";sigma=" + num17(m.sigma) +
           ";beta=" + num17(m.beta) + ";x0=" + num17(m.x0);
}

inline std::string canonical(const SvModel& m) {
    return to_string(m.kind) + ";r=" + num17(m.rate) + ";mr=" + num17(m.mean_reversion) +
           ";theta=" + num17(m.theta) + ";nu=" + num17(m.vol_of_vol) + ";rho=" + num17(m.rho) +
           ";beta=" + num17(m.beta) + ";x0=" + num17(m.x0) + ";v0=" + num17(m.v0);
}

inline std::string canonical(const AnyModel& m) {
    return std::visit([](const auto& mm) { return canonical(mm); }, m);
}

inline std::string canonical(const BarrierContract& c) {
    std::string g;
    if (const auto* s = std::get_if<DownAndOut>(&c.geometry))
        g = "down_out;K=" + num17(s->barrier);
    else {
        const auto& d = std::get<DoubleOut>(c.geometry);
        g = "double_out;K=" + num17(d.barrier) + ";Kp=" + num17(d.width);
    }
    return g + ";S=" + num17(c.payoff.strike) + ";T=" + num17(c.maturity);
}

inline std::string hash_hex(const std::string& s) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

inline std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

inline std::string model_hash(const AnyModel& m) {
    return detail::hash_hex(detail::canonical(m));
}
inline std::string contract_hash(const BarrierContract& c) {
    return detail::hash_hex(detail::canonical(c));
}

struct BenchmarkRecord {
    std::string model_hash;
    std::string contract_hash;
    int steps = 0;
    uint64_t trials = 0;
    uint64_t seed = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::string timestamp;

    std::string to_line() const {
        std::ostringstream os;
        os << model_hash << ',' << contract_hash << ',' << steps << ',' << trials << ','
           << seed << ',' << detail::num17(mean) << ',' << detail::num17(std_error) << ','
           << timestamp;
        return os.str();
    }
};

inline std::vector<BenchmarkRecord> load_benchmark_store(const std::string& path) {
    std::vector<BenchmarkRecord> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        BenchmarkRecord r;
        std::string field;
        std::getline(ls, r.model_hash, ',');
        std::getline(ls, r.contract_hash, ',');
        std::getline(ls, field, ',');
        r.steps = std::stoi(field);
        std::getline(ls, field, ',');
        r.trials = std::stoull(field);
        std::getline(ls, field, ',');
        r.seed = std::stoull(field);
        std::getline(ls, field, ',');
        r.mean = std::stod(field);
        std::getline(ls, field, ',');
        r.std_error = std::stod(field);
        std::getline(ls, r.timestamp);
        out.push_back(std::move(r));
    }
    return out;
}

inline void append_benchmark_store(const std::string& path, const BenchmarkRecord& rec) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("benchmark store: cannot open " + path);
    out << rec.to_line() << '\n';
}

// --- benchmark generation ----------------------------------------------------

struct BenchmarkResult {
    PriceEstimate estimate;
    BenchmarkRecord record;
    bool budget_exceeded = false; // path*step budget above the configured limit
    std::string warning;
};

// High-budget path-wise EM benchmark for models without a closed form.
// budget_limit guards against accidental week-long runs; exceeding it only
// warns, it does not refuse.
inline BenchmarkResult make_benchmark(const AnyModel& model, const BarrierContract& contract,
                                      int steps, uint64_t trials, uint64_t seed,
                                      int workers = 0, double budget_limit = 1e10) {
    McConfig cfg;
    cfg.steps = steps;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.workers = workers;

    BenchmarkResult res;
    const double budget = static_cast<double>(trials) * static_cast<double>(steps);
    if (budget > budget_limit) {
        res.budget_exceeded = true;
        std::ostringstream os;
        os << "warning: requested budget " << budget << " path-steps exceeds limit "
           << budget_limit;
        res.warning = os.str();
    }

    res.estimate = price_pathwise(model, contract, cfg);
    res.record = {model_hash(model), contract_hash(contract), steps,  trials,
                  seed,              res.estimate.mean,       res.estimate.std_error,
                  detail::utc_timestamp()};
    return res;
}

// --- table runner ------------------------------------------------------------

namespace detail {
// Independent sub-seed per (estimator, n) cell so rows and columns are
// uncorrelated.
inline uint64_t cell_seed(uint64_t master, uint64_t estimator_tag, int n) {
    return derive_seed(master, estimator_tag, static_cast<uint64_t>(n));
}
constexpr uint64_t kEmTag = 1;
constexpr uint64_t kPcmTag = 2;
constexpr uint64_t kBenchTag = 3;
} // namespace detail

// Truth used for the error columns. BenchmarkRun consults the store first
// (matching model, contract and budget) and persists a fresh run.
inline double resolve_truth(const Experiment& exp) {
    switch (exp.truth_source) {
    case TruthSource::FixedValue:
        return exp.truth_value;
    case TruthSource::Analytic: {
        const auto* m1 = std::get_if<Model1D>(&exp.model);
        const auto* geo = std::get_if<DownAndOut>(&exp.contract.geometry);
        if (!m1 || !geo)
            throw std::invalid_argument(
                "experiment: analytic truth exists only for 1-D down-and-out under "
                "Black-Scholes or arithmetic Brownian motion");
        if (m1->kind == Model1DKind::BlackScholes)
            return bs_barrier_exact(m1->x0, exp.contract.payoff.strike, geo->barrier, m1->sigma,
                                    m1->rate, exp.contract.maturity);
        if (m1->kind == Model1DKind::ArithmeticBm)
            return bachelier_barrier_exact(m1->x0, exp.contract.payoff.strike, geo->barrier,
                                           m1->sigma, exp.contract.maturity);
        throw std::invalid_argument("experiment: no analytic truth for this model");
    }
    case TruthSource::BenchmarkRun: {
        const std::string mh = model_hash(exp.model);
        const std::string ch = contract_hash(exp.contract);
        if (!exp.benchmark_store.empty()) {
            for (const auto& r : load_benchmark_store(exp.benchmark_store)) {
                if (r.model_hash == mh && r.contract_hash == ch &&
                    r.steps == exp.benchmark_steps && r.trials == exp.benchmark_trials)
                    return r.mean;
            }
        }
        auto bench = make_benchmark(exp.model, exp.contract, exp.benchmark_steps,
                                    exp.benchmark_trials,
                                    detail::cell_seed(exp.seed, detail::kBenchTag, 0),
                                    exp.workers);
        if (!exp.benchmark_store.empty())
            append_benchmark_store(exp.benchmark_store, bench.record);
        return bench.estimate.mean;
    }
    }
    throw std::logic_error("experiment: unknown truth source");
}

inline std::vector<TableRow> run_convergence_table(const Experiment& exp) {
    exp.validate();
    std::vector<TableRow> rows;
    if (exp.schedule.empty()) return rows;
    const double truth = resolve_truth(exp);

    rows.reserve(exp.schedule.size());
    for (int n : exp.schedule) {
        McConfig em_cfg;
        em_cfg.steps = n;
        em_cfg.trials = exp.trials_for(n);
        em_cfg.seed = detail::cell_seed(exp.seed, detail::kEmTag, n);
        em_cfg.workers = exp.workers;
        em_cfg.rng = RngMode::Pseudo; // path-wise column is always pseudo-random

        McConfig pcm_cfg = em_cfg;
        pcm_cfg.seed = detail::cell_seed(exp.seed, detail::kPcmTag, n);
        pcm_cfg.rng = exp.rng;

        const PriceEstimate em = price_pathwise(exp.model, exp.contract, em_cfg);
        const PriceEstimate pcm = price_symmetrized(exp.model, exp.contract, pcm_cfg);

        TableRow row;
        row.trials = em_cfg.trials;
        row.steps = n;
        row.em_mean = em.mean;
        row.em_stderr = em.std_error;
        row.pcm_mean = pcm.mean;
        row.pcm_stderr = pcm.std_error;
        row.em_err_pct = 100.0 * relative_error(em.mean, truth);
        row.pcm_err_pct = 100.0 * relative_error(pcm.mean, truth);
        rows.push_back(row);
    }
    return rows;
}

// --- CSV report ---------------------------------------------------------------

namespace detail {
inline std::string num6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}
} // namespace detail

inline void write_csv(std::ostream& os, const std::vector<TableRow>& rows) {
    os << "M,n,em_mean,em_stderr,pcm_mean,pcm_stderr,em_err_pct,pcm_err_pct\n";
    for (const auto& r : rows) {
        os << r.trials << ',' << r.steps << ',' << detail::num6(r.em_mean) << ','
           << detail::num6(r.em_stderr) << ',' << detail::num6(r.pcm_mean) << ','
           << detail::num6(r.pcm_stderr) << ',' << detail::num6(r.em_err_pct) << ','
           << detail::num6(r.pcm_err_pct) << '\n';
    }
}

inline void write_csv_file(const std::string& path, const std::vector<TableRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("report: cannot open " + path);
    write_csv(out, rows);
}

} // namespace barriermc
