#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>

#include "analytic.hpp"
#include "contracts.hpp"
#include "engine.hpp"
#include "models.hpp"
#include "symmetry.hpp"

namespace barriermc {

enum class RngMode { Pseudo, LowDiscrepancy };

struct McConfig {
    int steps = 100;
    uint64_t trials = 1000000;
    uint64_t seed = 1;
    int workers = 0; // 0 = hardware concurrency
    RngMode rng = RngMode::Pseudo;

    void validate() const {
        if (steps < 1) throw std::invalid_argument("mc: steps n must be >= 1");
        if (trials < 1) throw std::invalid_argument("mc: trials M must be >= 1");
        if (workers < 0) throw std::invalid_argument("mc: workers must be >= 0");
    }
};

struct PriceEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    uint64_t trials = 0;
    int steps = 0;
    double elapsed_seconds = 0.0;
};

namespace detail {

class StopWatch {
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }
};

inline PriceEstimate summarize(const McStats& st, int steps, double elapsed) {
    PriceEstimate e;
    e.trials = st.count;
    e.steps = steps;
    e.elapsed_seconds = elapsed;
    e.mean = st.sum / static_cast<double>(st.count);
    if (st.count > 1) {
        const double n = static_cast<double>(st.count);
        double var = (st.sumsq - st.sum * st.sum / n) / (n - 1.0);
        if (var < 0.0) var = 0.0; // rounding guard
        e.std_error = std::sqrt(var / n);
    }
    return e;
}

// Runs a Monte-Carlo sweep with the configured RNG family. make_payoff is
// called once per mode with a driver factory and must return the per-path
// payoff functional.
template <class Run>
inline PriceEstimate mc_sweep(const McConfig& cfg, Run&& run) {
    StopWatch watch;
    McStats st = run();
    return summarize(st, cfg.steps, watch.seconds());
}

} // namespace detail

// --- Method 1: path-wise EM with discrete knockout monitoring ---------------

// (1/M) sum f(X^n_T) 1{tau^n > T} under the original coefficients. Spot
// starting outside the alive region prices to zero (knocked out at k = 0).
inline PriceEstimate price_pathwise(const Model1D& model, const BarrierContract& contract,
                                    const McConfig& cfg) {
    cfg.validate();
    contract.validate();
    if (cfg.rng == RngMode::LowDiscrepancy)
        throw std::invalid_argument(
            "mc: low-discrepancy mode is rejected for path-wise estimation");
    const auto coeffs = coefficients_1d(model);
    const TimeGrid grid(contract.maturity, cfg.steps);
    const auto payoff = contract.payoff;
    const auto geometry = contract.geometry;
    const double x0 = model.x0;
    const uint64_t seed = cfg.seed;

    return detail::mc_sweep(cfg, [&] {
        return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
            PseudoDriver drv{PathStream(seed, i)};
            const PathOutcome out = simulate_pathwise(coeffs, x0, geometry, grid, drv);
            return out.survived ? payoff(out.x) : 0.0;
        });
    });
}

inline PriceEstimate price_pathwise(const SvModel& model, const BarrierContract& contract,
                                    const McConfig& cfg) {
    cfg.validate();
    contract.validate();
    if (cfg.rng == RngMode::LowDiscrepancy)
        throw std::invalid_argument(
            "mc: low-discrepancy mode is rejected for path-wise estimation");
    const auto coeffs = coefficients_sv(model);
    const TimeGrid grid(contract.maturity, cfg.steps);
    const auto payoff = contract.payoff;
    const auto geometry = contract.geometry;
    const double x0 = model.x0;
    const double v0 = model.v0;
    const uint64_t seed = cfg.seed;

    return detail::mc_sweep(cfg, [&] {
        return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
            PseudoDriver drv{PathStream(seed, i)};
            const PathOutcome out = simulate_pathwise(coeffs, x0, v0, geometry, grid, drv);
            return out.survived ? payoff(out.x) : 0.0;
        });
    });
}

// --- Method 2: put-call symmetry (path-independent) -------------------------

namespace detail {
inline const DownAndOut& require_down_out(const BarrierContract& c) {
    const auto* g = std::get_if<DownAndOut>(&c.geometry);
    if (!g)
        throw std::invalid_argument("price_pcs: contract must be single-barrier down-and-out");
    return *g;
}
inline const DoubleOut& require_double_out(const BarrierContract& c) {
    const auto* g = std::get_if<DoubleOut>(&c.geometry);
    if (!g)
        throw std::invalid_argument("price_pcs_double: contract must be double knock-out");
    return *g;
}
} // namespace detail

// Single barrier: average of the reflected payoff over path-independent
// terminal draws of the symmetrized process. No barrier monitoring anywhere.
inline PriceEstimate price_pcs(const Model1D& model, const BarrierContract& contract,
                               const McConfig& cfg) {
    cfg.validate();
    contract.validate_spot(model.x0);
    const DownAndOut geo = detail::require_down_out(contract);
    const auto sym = symmetrize_single_1d(coefficients_1d(model), geo.barrier);
    const TimeGrid grid(contract.maturity, cfg.steps);
    const auto payoff = contract.payoff;
    const double x0 = model.x0;
    const uint64_t seed = cfg.seed;

    if (cfg.rng == RngMode::LowDiscrepancy) {
        const HaltonTable table(cfg.steps, seed);
        return detail::mc_sweep(cfg, [&] {
            return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
                HaltonDriver drv{&table, i, 1};
                const PathOutcome out = simulate_terminal(sym, x0, grid, drv);
                return reflect_payoff_single(payoff, geo.barrier, out.x);
            });
        });
    }
    return detail::mc_sweep(cfg, [&] {
        return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
            PseudoDriver drv{PathStream(seed, i)};
            const PathOutcome out = simulate_terminal(sym, x0, grid, drv);
            return reflect_payoff_single(payoff, geo.barrier, out.x);
        });
    });
}

inline PriceEstimate price_pcs(const SvModel& model, const BarrierContract& contract,
                               const McConfig& cfg) {
    cfg.validate();
    contract.validate_spot(model.x0);
    const DownAndOut geo = detail::require_down_out(contract);
    const auto sym = symmetrize_single_sv(coefficients_sv(model), geo.barrier);
    const TimeGrid grid(contract.maturity, cfg.steps);
    const auto payoff = contract.payoff;
    const double x0 = model.x0;
    const double v0 = model.v0;
    const uint64_t seed = cfg.seed;

    if (cfg.rng == RngMode::LowDiscrepancy) {
        const HaltonTable table(2 * cfg.steps, seed);
        return detail::mc_sweep(cfg, [&] {
            return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
                HaltonDriver drv{&table, i, 2};
                const PathOutcome out = simulate_terminal(sym, x0, v0, grid, drv);
                return reflect_payoff_single(payoff, geo.barrier, out.x);
            });
        });
    }
    return detail::mc_sweep(cfg, [&] {
        return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
            PseudoDriver drv{PathStream(seed, i)};
            const PathOutcome out = simulate_terminal(sym, x0, v0, grid, drv);
            return reflect_payoff_single(payoff, geo.barrier, out.x);
        });
    });
}

// Double barrier: terminal draws of the folded process, read back through
// the closed-form band map (no series truncation).
inline PriceEstimate price_pcs_double(const Model1D& model, const BarrierContract& contract,
                                      const McConfig& cfg) {
    cfg.validate();
    contract.validate_spot(model.x0);
    const DoubleOut geo = detail::require_double_out(contract);
    const auto folded = fold_double(coefficients_1d(model), geo.barrier, geo.width);
    const TimeGrid grid(contract.maturity, cfg.steps);
    const auto payoff = contract.payoff;
    const double x0 = model.x0;
    const uint64_t seed = cfg.seed;

    if (cfg.rng == RngMode::LowDiscrepancy) {
        const HaltonTable table(cfg.steps, seed);
        return detail::mc_sweep(cfg, [&] {
            return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
                HaltonDriver drv{&table, i, 1};
                const PathOutcome out = simulate_terminal(folded, x0, grid, drv);
                return unfold_payoff_double(payoff, geo.barrier, geo.width, out.x);
            });
        });
    }
    return detail::mc_sweep(cfg, [&] {
        return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
            PseudoDriver drv{PathStream(seed, i)};
            const PathOutcome out = simulate_terminal(folded, x0, grid, drv);
            return unfold_payoff_double(payoff, geo.barrier, geo.width, out.x);
        });
    });
}

inline PriceEstimate price_pcs_double(const SvModel& model, const BarrierContract& contract,
                                      const McConfig& cfg) {
    cfg.validate();
    contract.validate_spot(model.x0);
    const DoubleOut geo = detail::require_double_out(contract);
    const auto folded = fold_double(coefficients_sv(model), geo.barrier, geo.width);
    const TimeGrid grid(contract.maturity, cfg.steps);
    const auto payoff = contract.payoff;
    const double x0 = model.x0;
    const double v0 = model.v0;
    const uint64_t seed = cfg.seed;

    if (cfg.rng == RngMode::LowDiscrepancy) {
        const HaltonTable table(2 * cfg.steps, seed);
        return detail::mc_sweep(cfg, [&] {
            return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
                HaltonDriver drv{&table, i, 2};
                const PathOutcome out = simulate_terminal(folded, x0, v0, grid, drv);
                return unfold_payoff_double(payoff, geo.barrier, geo.width, out.x);
            });
        });
    }
    return detail::mc_sweep(cfg, [&] {
        return run_paths(cfg.trials, cfg.workers, [&](uint64_t i) {
            PseudoDriver drv{PathStream(seed, i)};
            const PathOutcome out = simulate_terminal(folded, x0, v0, grid, drv);
            return unfold_payoff_double(payoff, geo.barrier, geo.width, out.x);
        });
    });
}

// --- variant-typed front ends (CLI and harness dispatch) --------------------

using AnyModel = std::variant<Model1D, SvModel>;

inline double model_spot(const AnyModel& m) {
    return std::visit([](const auto& mm) { return mm.x0; }, m);
}

inline PriceEstimate price_pathwise(const AnyModel& m, const BarrierContract& c,
                                    const McConfig& cfg) {
    return std::visit([&](const auto& mm) { return price_pathwise(mm, c, cfg); }, m);
}

inline PriceEstimate price_pcs(const AnyModel& m, const BarrierContract& c,
                               const McConfig& cfg) {
    return std::visit([&](const auto& mm) { return price_pcs(mm, c, cfg); }, m);
}

inline PriceEstimate price_pcs_double(const AnyModel& m, const BarrierContract& c,
                                      const McConfig& cfg) {
    return std::visit([&](const auto& mm) { return price_pcs_double(mm, c, cfg); }, m);
}

// Symmetry-method front end: picks the single- or double-barrier form from
// the contract geometry.
inline PriceEstimate price_symmetrized(const AnyModel& m, const BarrierContract& c,
                                       const McConfig& cfg) {
    if (std::holds_alternative<DownAndOut>(c.geometry)) return price_pcs(m, c, cfg);
    return price_pcs_double(m, c, cfg);
}

} // namespace barriermc
