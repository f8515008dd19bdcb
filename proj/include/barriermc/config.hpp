#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "contracts.hpp"
#include "harness.hpp"
#include "models.hpp"
#include "pricing.hpp"

namespace barriermc {

// Declarative run configuration. INI-style sections [model], [contract],
// [mc], [output] plus an optional top-level `command` key; unknown sections
// and keys are rejected. Command-line flags override file values.

enum class Command { Price, Table, Benchmark, Verify };
enum class Method { Pathwise, Pcs };

// Malformed input (syntax, unknown keys, bad numbers). Distinct from the
// std::invalid_argument validation errors raised by the domain invariants.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    Command command = Command::Price;
    std::optional<AnyModel> model;
    std::optional<BarrierContract> contract;

    McConfig mc; // steps=100, trials=1e6, seed=1 documented defaults
    std::optional<Method> method;

    std::vector<int> schedule = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    bool cube_rule = true;

    TruthSource truth_source = TruthSource::Analytic;
    double truth_value = 0.0;
    int benchmark_steps = 5000;
    uint64_t benchmark_trials = 50000000;
    double budget_limit = 1e10;

    std::string output_path = "table.csv";
    std::string benchmark_store = "benchmarks.txt";
};

namespace config_detail {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
    std::ostringstream os;
    os << "config: line " << line << ": " << msg;
    throw ConfigError(os.str());
}

inline double to_double(const Entry& e, const std::string& key) {
    try {
        size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(e.line, "invalid number '" + e.value + "' for key '" + key + "'");
    }
}

inline uint64_t to_u64(const Entry& e, const std::string& key) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(e.line, "invalid count '" + e.value + "' for key '" + key + "'");
    }
}

inline int to_int(const Entry& e, const std::string& key) {
    try {
        size_t pos = 0;
        long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        fail(e.line, "invalid integer '" + e.value + "' for key '" + key + "'");
    }
}

class SectionReader {
public:
    SectionReader(Section& s, std::string name) : s_(s), name_(std::move(name)) {}

    bool has(const std::string& key) const { return s_.count(key) > 0; }

    std::optional<std::string> str(const std::string& key) {
        auto it = s_.find(key);
        if (it == s_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }
    std::optional<double> num(const std::string& key) {
        auto it = s_.find(key);
        if (it == s_.end()) return std::nullopt;
        it->second.used = true;
        return to_double(it->second, key);
    }
    std::optional<uint64_t> u64(const std::string& key) {
        auto it = s_.find(key);
        if (it == s_.end()) return std::nullopt;
        it->second.used = true;
        return to_u64(it->second, key);
    }
    std::optional<int> integer(const std::string& key) {
        auto it = s_.find(key);
        if (it == s_.end()) return std::nullopt;
        it->second.used = true;
        return to_int(it->second, key);
    }

    double require_num(const std::string& key) {
        auto v = num(key);
        if (!v) throw ConfigError("config: section [" + name_ + "] is missing key '" + key + "'");
        return *v;
    }
    std::string require_str(const std::string& key) {
        auto v = str(key);
        if (!v) throw ConfigError("config: section [" + name_ + "] is missing key '" + key + "'");
        return *v;
    }

    // Every key must have been consumed by the model/command grammar.
    void reject_unused() const {
        for (const auto& [key, entry] : s_) {
            if (!entry.used)
                fail(entry.line, "unknown key '" + key + "' in section [" + name_ + "]");
        }
    }

private:
    Section& s_;
    std::string name_;
};

inline std::vector<int> parse_schedule(const std::string& text, int line) {
    std::vector<int> out;
    std::string t = trim(text);
    if (t.empty()) return out;
    if (t.find(':') != std::string::npos) {
        int a = 0, b = 0, c = 0;
        char colon1 = 0, colon2 = 0;
        std::istringstream is(t);
        if (!(is >> a >> colon1 >> b >> colon2 >> c) || colon1 != ':' || colon2 != ':' ||
            !(is >> std::ws).eof() || c <= 0)
            fail(line, "schedule range must be 'first:last:step' with step > 0");
        for (int n = a; n <= b; n += c) out.push_back(n);
        return out;
    }
    std::istringstream is(t);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "empty schedule entry");
        try {
            size_t pos = 0;
            out.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail(line, "invalid schedule entry '" + item + "'");
        }
    }
    return out;
}

inline AnyModel build_model(Section& sec) {
    SectionReader r(sec, "model");
    const std::string kind = r.require_str("kind");
    const double rate = r.num("r").value_or(0.0);

    AnyModel model;
    if (kind == "black_scholes") {
        model = Model1D::black_scholes(r.require_num("sigma"), rate, r.require_num("x0"));
    } else if (kind == "cev") {
        model = Model1D::cev(r.require_num("sigma"), r.require_num("beta"), rate,
                             r.require_num("x0"));
    } else if (kind == "arithmetic_bm") {
        model = Model1D::arithmetic_bm(r.require_num("sigma"), r.require_num("x0"));
    } else if (kind == "heston") {
        model = SvModel::heston(rate, r.require_num("kappa"), r.require_num("theta"),
                                r.require_num("nu"), r.require_num("rho"), r.require_num("x0"),
                                r.require_num("v0"));
    } else if (kind == "lambda_sabr") {
        model = SvModel::lambda_sabr(rate, r.require_num("lambda"), r.require_num("theta"),
                                     r.require_num("nu"), r.require_num("rho"),
                                     r.require_num("beta"), r.require_num("x0"),
                                     r.require_num("v0"));
    } else {
        throw ConfigError("config: unknown model kind '" + kind +
                          "' (black_scholes, cev, arithmetic_bm, heston, lambda_sabr)");
    }
    r.reject_unused();
    std::visit([](const auto& m) { m.validate(); }, model);
    return model;
}

inline BarrierContract build_contract(Section& sec) {
    SectionReader r(sec, "contract");
    const std::string type = r.require_str("type");
    BarrierContract c;
    if (type == "down_out") {
        c = BarrierContract::down_and_out(r.require_num("strike"), r.require_num("barrier"),
                                          r.require_num("maturity"));
    } else if (type == "double_out") {
        c = BarrierContract::double_out(r.require_num("strike"), r.require_num("barrier"),
                                        r.require_num("width"), r.require_num("maturity"));
    } else {
        throw ConfigError("config: unknown contract type '" + type +
                          "' (down_out, double_out)");
    }
    r.reject_unused();
    c.validate();
    return c;
}

} // namespace config_detail

inline RunConfig parse_config(const std::string& text) {
    using namespace config_detail;

    std::map<std::string, Section> sections;
    Section toplevel;
    std::string current;
    bool in_section = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current != "model" && current != "contract" && current != "mc" &&
                current != "output")
                fail(lineno, "unknown section [" + current + "]");
            if (sections.count(current)) fail(lineno, "duplicate section [" + current + "]");
            sections[current];
            in_section = true;
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        Section& target = in_section ? sections[current] : toplevel;
        if (target.count(key)) fail(lineno, "duplicate key '" + key + "'");
        target[key] = {value, lineno, false};
    }

    RunConfig cfg;

    {
        SectionReader r(toplevel, "");
        if (auto cmd = r.str("command")) {
            if (*cmd == "price") cfg.command = Command::Price;
            else if (*cmd == "table") cfg.command = Command::Table;
            else if (*cmd == "benchmark") cfg.command = Command::Benchmark;
            else if (*cmd == "verify") cfg.command = Command::Verify;
            else throw ConfigError("config: unknown command '" + *cmd + "'");
        }
        r.reject_unused();
    }

    if (sections.count("model")) cfg.model = build_model(sections["model"]);
    if (sections.count("contract")) cfg.contract = build_contract(sections["contract"]);

    if (sections.count("mc")) {
        SectionReader r(sections["mc"], "mc");
        if (auto v = r.integer("steps")) cfg.mc.steps = *v;
        if (auto v = r.u64("trials")) cfg.mc.trials = *v;
        if (auto v = r.u64("seed")) cfg.mc.seed = *v;
        if (auto v = r.integer("workers")) cfg.mc.workers = *v;
        if (auto v = r.str("rng")) {
            if (*v == "pseudo") cfg.mc.rng = RngMode::Pseudo;
            else if (*v == "lds") cfg.mc.rng = RngMode::LowDiscrepancy;
            else throw ConfigError("config: rng must be 'pseudo' or 'lds'");
        }
        if (auto v = r.str("method")) {
            if (*v == "pathwise") cfg.method = Method::Pathwise;
            else if (*v == "pcs") cfg.method = Method::Pcs;
            else throw ConfigError("config: method must be 'pathwise' or 'pcs'");
        }
        if (sections["mc"].count("schedule")) {
            auto& e = sections["mc"]["schedule"];
            e.used = true;
            cfg.schedule = parse_schedule(e.value, e.line);
        }
        if (auto v = r.str("trials_rule")) {
            if (*v == "cube") cfg.cube_rule = true;
            else if (*v == "fixed") cfg.cube_rule = false;
            else throw ConfigError("config: trials_rule must be 'cube' or 'fixed'");
        }
        if (auto v = r.str("truth")) {
            if (*v == "analytic") cfg.truth_source = TruthSource::Analytic;
            else if (*v == "value") cfg.truth_source = TruthSource::FixedValue;
            else if (*v == "benchmark") cfg.truth_source = TruthSource::BenchmarkRun;
            else throw ConfigError("config: truth must be 'analytic', 'value' or 'benchmark'");
        }
        if (auto v = r.num("truth_value")) cfg.truth_value = *v;
        if (auto v = r.integer("benchmark_steps")) cfg.benchmark_steps = *v;
        if (auto v = r.u64("benchmark_trials")) cfg.benchmark_trials = *v;
        if (auto v = r.num("budget_limit")) cfg.budget_limit = *v;
        r.reject_unused();
        cfg.mc.validate();
    }

    if (sections.count("output")) {
        SectionReader r(sections["output"], "output");
        if (auto v = r.str("path")) cfg.output_path = *v;
        if (auto v = r.str("benchmark_store")) cfg.benchmark_store = *v;
        r.reject_unused();
    }

    for (size_t i = 0; i + 1 < cfg.schedule.size(); ++i)
        if (cfg.schedule[i] >= cfg.schedule[i + 1])
            throw std::invalid_argument("config: schedule must be strictly increasing");

    return cfg;
}

// --- canonical serialization --------------------------------------------------

namespace config_detail {
inline std::string num(double x) { return barriermc::detail::num17(x); }
} // namespace config_detail

inline std::string to_string(Command c) {
    switch (c) {
    case Command::Price: return "price";
    case Command::Table: return "table";
    case Command::Benchmark: return "benchmark";
    case Command::Verify: return "verify";
    }
    return "?";
}

inline std::string to_string(Method m) {
    return m == Method::Pathwise ? "pathwise" : "pcs";
}

inline std::string serialize(const RunConfig& cfg) {
    using config_detail::num;
    std::ostringstream os;
    os << "command = " << to_string(cfg.command) << "\n";

    if (cfg.model) {
        os << "\n[model]\n";
        if (const auto* m = std::get_if<Model1D>(&*cfg.model)) {
            os << "kind = " << barriermc::to_string(m->kind) << "\n";
            if (m->kind != Model1DKind::ArithmeticBm) os << "r = " << num(m->rate) << "\n";
            os << "sigma = " << num(m->sigma) << "\n";
            if (m->kind == Model1DKind::Cev) os << "beta = " << num(m->beta) << "\n";
            os << "x0 = " << num(m->x0) << "\n";
        } else {
            const auto& sv = std::get<SvModel>(*cfg.model);
            os << "kind = " << barriermc::to_string(sv.kind) << "\n";
            os << "r = " << num(sv.rate) << "\n";
            os << (sv.kind == SvKind::Heston ? "kappa = " : "lambda = ")
               << num(sv.mean_reversion) << "\n";
            os << "theta = " << num(sv.theta) << "\n";
            os << "nu = " << num(sv.vol_of_vol) << "\n";
            os << "rho = " << num(sv.rho) << "\n";
            if (sv.kind == SvKind::LambdaSabr) os << "beta = " << num(sv.beta) << "\n";
            os << "x0 = " << num(sv.x0) << "\n";
            os << "v0 = " << num(sv.v0) << "\n";
        }
    }

    if (cfg.contract) {
        os << "\n[contract]\n";
        if (const auto* g = std::get_if<DownAndOut>(&cfg.contract->geometry)) {
            os << "type = down_out\n";
            os << "strike = " << num(cfg.contract->payoff.strike) << "\n";
            os << "barrier = " << num(g->barrier) << "\n";
        } else {
            const auto& d = std::get<DoubleOut>(cfg.contract->geometry);
            os << "type = double_out\n";
            os << "strike = " << num(cfg.contract->payoff.strike) << "\n";
            os << "barrier = " << num(d.barrier) << "\n";
            os << "width = " << num(d.width) << "\n";
        }
        os << "maturity = " << num(cfg.contract->maturity) << "\n";
    }

    os << "\n[mc]\n";
    if (cfg.method) os << "method = " << to_string(*cfg.method) << "\n";
    os << "steps = " << cfg.mc.steps << "\n";
    os << "trials = " << cfg.mc.trials << "\n";
    os << "seed = " << cfg.mc.seed << "\n";
    os << "workers = " << cfg.mc.workers << "\n";
    os << "rng = " << (cfg.mc.rng == RngMode::Pseudo ? "pseudo" : "lds") << "\n";
    os << "schedule = ";
    for (size_t i = 0; i < cfg.schedule.size(); ++i)
        os << (i ? "," : "") << cfg.schedule[i];
    os << "\n";
    os << "trials_rule = " << (cfg.cube_rule ? "cube" : "fixed") << "\n";
    os << "truth = "
       << (cfg.truth_source == TruthSource::Analytic
               ? "analytic"
               : cfg.truth_source == TruthSource::FixedValue ? "value" : "benchmark")
       << "\n";
    os << "truth_value = " << num(cfg.truth_value) << "\n";
    os << "benchmark_steps = " << cfg.benchmark_steps << "\n";
    os << "benchmark_trials = " << cfg.benchmark_trials << "\n";
    os << "budget_limit = " << num(cfg.budget_limit) << "\n";

    os << "\n[output]\n";
    os << "path = " << cfg.output_path << "\n";
    os << "benchmark_store = " << cfg.benchmark_store << "\n";
    return os.str();
}

// Command-line flag overrides; precedence is flags > file > defaults.
struct CliOverrides {
    std::optional<std::string> method;
    std::optional<int> steps;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> rng;
    std::optional<std::string> out;
};

inline void apply_overrides(RunConfig& cfg, const CliOverrides& o) {
    if (o.method) {
        if (*o.method == "pathwise") cfg.method = Method::Pathwise;
        else if (*o.method == "pcs") cfg.method = Method::Pcs;
        else throw ConfigError("config: method must be 'pathwise' or 'pcs'");
    }
    if (o.steps) cfg.mc.steps = *o.steps;
    if (o.trials) cfg.mc.trials = *o.trials;
    if (o.seed) cfg.mc.seed = *o.seed;
    if (o.workers) cfg.mc.workers = *o.workers;
    if (o.rng) {
        if (*o.rng == "pseudo") cfg.mc.rng = RngMode::Pseudo;
        else if (*o.rng == "lds") cfg.mc.rng = RngMode::LowDiscrepancy;
        else throw ConfigError("config: rng must be 'pseudo' or 'lds'");
    }
    if (o.out) cfg.output_path = *o.out;
    cfg.mc.validate();
}

} // namespace barriermc
