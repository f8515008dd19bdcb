#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <barriermc/barriermc.hpp>

namespace {

using namespace barriermc;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CommonFlags {
    std::string config_path;
    CliOverrides overrides;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "declarative run configuration file");
    auto opt = [&](const char* name, auto& slot, const char* help) {
        cmd->add_option_function<std::decay_t<decltype(*slot)>>(
            name, [&slot](const auto& v) { slot = v; }, help);
    };
    opt("--method", flags.overrides.method, "estimator: pathwise | pcs");
    opt("--steps", flags.overrides.steps, "time steps n");
    opt("--trials", flags.overrides.trials, "Monte-Carlo trials M");
    opt("--seed", flags.overrides.seed, "master seed");
    opt("--workers", flags.overrides.workers, "worker threads (0 = all cores)");
    cmd->add_option_function<std::string>(
           "--rng", [&flags](const std::string& v) { flags.overrides.rng = v; },
           "random numbers: pseudo | lds")
        ->check(CLI::IsMember({"pseudo", "lds"}));
    opt("--out", flags.overrides.out, "output path (table CSV)");
}

RunConfig load_config(const CommonFlags& flags, Command command) {
    RunConfig cfg;
    if (!flags.config_path.empty()) cfg = parse_config(read_file(flags.config_path));
    cfg.command = command;
    apply_overrides(cfg, flags.overrides);
    return cfg;
}

const AnyModel& require_model(const RunConfig& cfg) {
    if (!cfg.model)
        throw std::invalid_argument("run: this command needs a [model] section");
    return *cfg.model;
}

const BarrierContract& require_contract(const RunConfig& cfg) {
    if (!cfg.contract)
        throw std::invalid_argument("run: this command needs a [contract] section");
    return *cfg.contract;
}

// Closed-form truth, where one exists for the configured model/contract.
std::optional<double> analytic_truth(const RunConfig& cfg) {
    const auto* m = std::get_if<Model1D>(&*cfg.model);
    const auto* geo = std::get_if<DownAndOut>(&cfg.contract->geometry);
    if (!m || !geo) return std::nullopt;
    if (m->kind == Model1DKind::BlackScholes && m->sigma > 0.0)
        return bs_barrier_exact(m->x0, cfg.contract->payoff.strike, geo->barrier, m->sigma,
                                m->rate, cfg.contract->maturity);
    if (m->kind == Model1DKind::ArithmeticBm)
        return bachelier_barrier_exact(m->x0, cfg.contract->payoff.strike, geo->barrier,
                                       m->sigma, cfg.contract->maturity);
    return std::nullopt;
}

int run_price(const RunConfig& cfg) {
    const AnyModel& model = require_model(cfg);
    const BarrierContract& contract = require_contract(cfg);
    if (!cfg.method)
        throw std::invalid_argument("run: price needs an explicit method (pathwise | pcs)");

    PriceEstimate est = (*cfg.method == Method::Pathwise)
                            ? price_pathwise(model, contract, cfg.mc)
                            : price_symmetrized(model, contract, cfg.mc);

    std::printf("mean = %.9g\n", est.mean);
    std::printf("stderr = %.9g\n", est.std_error);
    if (auto truth = analytic_truth(cfg))
        std::printf("relative error = %.4g  (analytic truth %.9g)\n",
                    relative_error(est.mean, *truth), *truth);
    std::printf("n = %d  M = %llu  elapsed_s = %.2f\n", est.steps,
                static_cast<unsigned long long>(est.trials), est.elapsed_seconds);
    return 0;
}

int run_table(const RunConfig& cfg) {
    Experiment exp;
    exp.model = require_model(cfg);
    exp.contract = require_contract(cfg);
    exp.truth_source = cfg.truth_source;
    exp.truth_value = cfg.truth_value;
    exp.benchmark_steps = cfg.benchmark_steps;
    exp.benchmark_trials = cfg.benchmark_trials;
    exp.schedule = cfg.schedule;
    exp.cube_rule = cfg.cube_rule;
    exp.fixed_trials = cfg.mc.trials;
    exp.seed = cfg.mc.seed;
    exp.workers = cfg.mc.workers;
    exp.rng = cfg.mc.rng;
    exp.benchmark_store = cfg.benchmark_store;

    auto rows = run_convergence_table(exp);
    write_csv_file(cfg.output_path, rows);
    std::printf("wrote %s (%zu rows)\n", cfg.output_path.c_str(), rows.size());
    return 0;
}

int run_benchmark(const RunConfig& cfg) {
    auto res = make_benchmark(require_model(cfg), require_contract(cfg), cfg.mc.steps,
                              cfg.mc.trials, cfg.mc.seed, cfg.mc.workers, cfg.budget_limit);
    if (res.budget_exceeded) std::fprintf(stderr, "%s\n", res.warning.c_str());
    append_benchmark_store(cfg.benchmark_store, res.record);
    std::printf("benchmark mean = %.9g  stderr = %.9g  (n = %d, M = %llu)\n",
                res.estimate.mean, res.estimate.std_error, res.estimate.steps,
                static_cast<unsigned long long>(res.estimate.trials));
    std::printf("recorded in %s\n", cfg.benchmark_store.c_str());
    return 0;
}

int run_verify(const RunConfig& cfg) {
    VerifyReport report = verify_properties(cfg.mc.workers);
    report.print(std::cout);
    return report.all_pass() ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo knock-out option pricing: path-wise Euler-Maruyama vs the "
                 "barrier-symmetrization estimator"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* price = app.add_subcommand("price", "price one contract");
    CLI::App* table = app.add_subcommand("table", "run a convergence-table experiment (CSV)");
    CLI::App* bench = app.add_subcommand("benchmark", "generate a high-budget benchmark price");
    CLI::App* verify = app.add_subcommand("verify", "run the property-verification suite");
    for (CLI::App* cmd : {price, table, bench, verify}) add_common_flags(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (price->parsed()) return run_price(load_config(flags, barriermc::Command::Price));
        if (table->parsed()) return run_table(load_config(flags, barriermc::Command::Table));
        if (bench->parsed()) return run_benchmark(load_config(flags, barriermc::Command::Benchmark));
        return run_verify(load_config(flags, barriermc::Command::Verify));
    } catch (const barriermc::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const barriermc::NonFiniteStateError& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
