#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "contracts.hpp"
#include "rng.hpp"

namespace barriermc {

// Euler-Maruyama path engine on the uniform net t_k = k T / n with
// X_{k+1} = X_k + sigma(X_k) dW_k + mu(X_k) dt. Paths are independent work
// items driven by counter-based streams, so Monte-Carlo results are
// bit-identical for any worker count.

struct TimeGrid {
    double maturity;
    int steps;

    TimeGrid(double maturity_, int steps_) : maturity(maturity_), steps(steps_) {
        if (!(maturity > 0.0))
            throw std::invalid_argument("time grid: maturity T must be > 0");
        if (steps < 1)
            throw std::invalid_argument("time grid: steps n must be >= 1");
    }

    double dt() const { return maturity / steps; }
};

struct PathOutcome {
    double x = 0.0;
    double v = 0.0;
    bool survived = true; // no grid point violated the barrier condition
};

// Any NaN/inf iterate aborts the whole batch instead of contaminating the
// sample mean.
class NonFiniteStateError : public std::runtime_error {
public:
    explicit NonFiniteStateError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline void check_finite(double x, int step) {
    if (!std::isfinite(x))
        throw NonFiniteStateError("non-finite state at step " + std::to_string(step) +
                                  "; coefficients blew up");
}
struct NoObserver {
    void operator()(int /*k*/, double /*x*/) const {}
};
} // namespace detail

// --- terminal-only simulation (no barrier monitoring) ----------------------

// 1-D. The observer, when given, sees every grid iterate (k, X_k) including
// k = 0; property suites use it to compare paths step by step.
template <class C, class Driver, class Observer = detail::NoObserver>
inline PathOutcome simulate_terminal(const C& coeffs, double x0, const TimeGrid& grid,
                                     const Driver& drv, Observer&& observe = {}) {
    static_assert(C::dimension == 1);
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);
    double x = x0;
    observe(0, x);
    for (int k = 0; k < grid.steps; ++k) {
        const double dw = sqdt * drv.gaussian(static_cast<uint64_t>(k));
        x += coeffs.sigma_at(x) * dw + coeffs.mu_at(x) * dt;
        detail::check_finite(x, k + 1);
        observe(k + 1, x);
    }
    return {x, 0.0, true};
}

// 2-D stochastic volatility: X consumes dW, V consumes (dW, dB).
template <class C, class Driver>
inline PathOutcome simulate_terminal(const C& coeffs, double x0, double v0,
                                     const TimeGrid& grid, const Driver& drv) {
    static_assert(C::dimension == 2);
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);
    double x = x0;
    double v = v0;
    for (int k = 0; k < grid.steps; ++k) {
        const GaussianPair z = drv.gaussian_pair(static_cast<uint64_t>(k));
        const double dw = sqdt * z.z1;
        const double db = sqdt * z.z2;
        const double xn = x + coeffs.sigma11(x, v) * dw + coeffs.mu1(x, v) * dt;
        const double vn = v + coeffs.sigma21(v) * dw + coeffs.sigma22(v) * db +
                          coeffs.mu2(v) * dt;
        x = xn;
        v = vn;
        detail::check_finite(x, k + 1);
        detail::check_finite(v, k + 1);
    }
    return {x, v, true};
}

// --- path-wise simulation with discrete barrier monitoring ------------------

namespace detail {
inline bool alive(const DownAndOut& g, double x) { return x > g.barrier; }
inline bool alive(const DoubleOut& g, double x) {
    return x > g.barrier && x < g.barrier + g.width;
}
inline bool alive(const BarrierGeometry& g, double x) {
    return std::visit([x](const auto& geo) { return alive(geo, x); }, g);
}
} // namespace detail

// Survival is judged at grid points only (no bridge correction): the path
// is knocked out at the first t_k whose iterate leaves the alive region,
// including k = 0. On knockout, the outcome holds the violating state.
template <class C, class Geometry, class Driver>
inline PathOutcome simulate_pathwise(const C& coeffs, double x0, const Geometry& geometry,
                                     const TimeGrid& grid, const Driver& drv) {
    static_assert(C::dimension == 1);
    if (!detail::alive(geometry, x0)) return {x0, 0.0, false};
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);
    double x = x0;
    for (int k = 0; k < grid.steps; ++k) {
        const double dw = sqdt * drv.gaussian(static_cast<uint64_t>(k));
        x += coeffs.sigma_at(x) * dw + coeffs.mu_at(x) * dt;
        detail::check_finite(x, k + 1);
        if (!detail::alive(geometry, x)) return {x, 0.0, false};
    }
    return {x, 0.0, true};
}

template <class C, class Geometry, class Driver>
inline PathOutcome simulate_pathwise(const C& coeffs, double x0, double v0,
                                     const Geometry& geometry, const TimeGrid& grid,
                                     const Driver& drv) {
    static_assert(C::dimension == 2);
    if (!detail::alive(geometry, x0)) return {x0, v0, false};
    const double dt = grid.dt();
    const double sqdt = std::sqrt(dt);
    double x = x0;
    double v = v0;
    for (int k = 0; k < grid.steps; ++k) {
        const GaussianPair z = drv.gaussian_pair(static_cast<uint64_t>(k));
        const double dw = sqdt * z.z1;
        const double db = sqdt * z.z2;
        const double xn = x + coeffs.sigma11(x, v) * dw + coeffs.mu1(x, v) * dt;
        const double vn = v + coeffs.sigma21(v) * dw + coeffs.sigma22(v) * db +
                          coeffs.mu2(v) * dt;
        x = xn;
        v = vn;
        detail::check_finite(x, k + 1);
        detail::check_finite(v, k + 1);
        if (!detail::alive(geometry, x)) return {x, v, false};
    }
    return {x, v, true};
}

// --- deterministic parallel reduction ---------------------------------------

struct McStats {
    double sum = 0.0;   // sum of per-path values
    double sumsq = 0.0; // sum of squares
    uint64_t count = 0;
};

namespace detail {

// Kahan-compensated accumulator; paths within a block are summed in path
// order, blocks are folded in block order, so the reported sums do not
// depend on the worker count.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

constexpr uint64_t kBlockSize = 32768;

} // namespace detail

// Evaluates per_path(i) for i in [0, trials) on `workers` threads and
// returns order-independent sums. per_path must be a pure function of the
// path index.
template <class PerPath>
inline McStats run_paths(uint64_t trials, int workers, PerPath&& per_path) {
    if (trials == 0) return {};
    if (workers < 1) {
        unsigned hc = std::thread::hardware_concurrency();
        workers = hc > 0 ? static_cast<int>(hc) : 1;
    }

    const uint64_t nblocks = (trials + detail::kBlockSize - 1) / detail::kBlockSize;
    struct BlockResult {
        double sum = 0.0;
        double sumsq = 0.0;
    };
    std::vector<BlockResult> blocks(nblocks);

    std::atomic<uint64_t> next_block{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&]() {
        try {
            for (;;) {
                const uint64_t b = next_block.fetch_add(1, std::memory_order_relaxed);
                if (b >= nblocks) break;
                const uint64_t lo = b * detail::kBlockSize;
                const uint64_t hi = std::min(lo + detail::kBlockSize, trials);
                detail::KahanSum s, s2;
                for (uint64_t i = lo; i < hi; ++i) {
                    const double y = per_path(i);
                    s.add(y);
                    s2.add(y * y);
                }
                blocks[b] = {s.s, s2.s};
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    detail::KahanSum s, s2;
    for (const auto& b : blocks) {
        s.add(b.sum);
        s2.add(b.sumsq);
    }
    return {s.s, s2.s, trials};
}

} // namespace barriermc
