// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmetro/experiments.hpp"

#include <algorithm>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace qmetro {

// ---------------------------------------------------------------------------
// Names

std::string_view experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::FigVariance:
            return "variance";
        case ExperimentKind::FigBiasIIDP:
            return "bias_iidp";
        case ExperimentKind::FigSingle:
            return "single";
        case ExperimentKind::FigMulti:
            return "multi";
        case ExperimentKind::FigSuppAlpha:
            return "multi_alpha";
        case ExperimentKind::Validate:
            return "validate";
    }
    return "unknown";
}

std::vector<ExperimentKind> all_experiments() {
    return {ExperimentKind::FigVariance, ExperimentKind::FigBiasIIDP, ExperimentKind::FigSingle,
            ExperimentKind::FigMulti,    ExperimentKind::FigSuppAlpha, ExperimentKind::Validate};
}

std::optional<ExperimentKind> parse_experiment(std::string_view name) {
    for (ExperimentKind k : all_experiments()) {
        if (experiment_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::string_view experiment_summary(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::FigVariance:
            return "variance bound of the swap estimator vs t under dephasing, with per-curve minima";
        case ExperimentKind::FigBiasIIDP:
            return "exact bias, bias bound and variance bound under bit flip + dephasing with per-unit QEC";
        case ExperimentKind::FigSingle:
            return "single-parameter errors of the naive, VSP and swap-test estimators vs t";
        case ExperimentKind::FigMulti:
            return "two-parameter MLE errors vs local error rate p1";
        case ExperimentKind::FigSuppAlpha:
            return "two-parameter MLE at large lambda, including the alpha-aware swap model";
        case ExperimentKind::Validate:
            return "dense-oracle cross-checks of the codespace shortcuts";
    }
    return "";
}

namespace {

std::string_view noise_name(NoiseKind k) { return k == NoiseKind::IIDP ? "iidp" : "dephasing"; }

std::string_view placement_name(NoisePlacement p) {
    return p == NoisePlacement::PerTimeUnit ? "per_unit" : "end";
}

bool is_mle_experiment(ExperimentKind k) {
    return k == ExperimentKind::FigMulti || k == ExperimentKind::FigSuppAlpha;
}

// ---------------------------------------------------------------------------
// Value parsing

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        b++;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        e--;
    }
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(s)};
    while (std::getline(in, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

double to_double(const std::string &text, const std::string &where, std::string_view key) {
    errno = 0;
    char *end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(where, "field '" + std::string(key) + "': '" + text + "' is not a finite number");
    }
    return v;
}

long to_long(const std::string &text, const std::string &where, std::string_view key) {
    errno = 0;
    char *end = nullptr;
    long v = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError(where, "field '" + std::string(key) + "': '" + text + "' is not an integer");
    }
    return v;
}

std::vector<double> to_double_list(std::string_view value, const std::string &where, std::string_view key) {
    std::string v = trim(value);
    if (v.rfind("linspace(", 0) == 0 && v.back() == ')') {
        auto parts = split_list(std::string_view(v).substr(9, v.size() - 10));
        if (parts.size() != 3) {
            throw ConfigError(where, "field '" + std::string(key) + "': linspace needs (start, stop, count)");
        }
        double a = to_double(parts[0], where, key);
        double b = to_double(parts[1], where, key);
        long k = to_long(parts[2], where, key);
        if (k < 1) {
            throw ConfigError(where, "field '" + std::string(key) + "': linspace count must be >= 1");
        }
        std::vector<double> out;
        for (long i = 0; i < k; i++) {
            out.push_back(k == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1));
        }
        return out;
    }
    std::vector<double> out;
    for (const std::string &item : split_list(v)) {
        out.push_back(to_double(item, where, key));
    }
    return out;
}

template <typename Int>
std::vector<Int> to_int_list(std::string_view value, const std::string &where, std::string_view key) {
    std::vector<Int> out;
    for (const std::string &item : split_list(value)) {
        out.push_back(static_cast<Int>(to_long(item, where, key)));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::FigVariance:
            c.lambda = {0.0005};
            c.nu = 1.0;
            c.t = {1, std::nullopt, 1};
            c.repetitions = 1;
            c.methods = {Method::SwapTest};
            break;
        case ExperimentKind::FigBiasIIDP:
            c.lambda = {0.0005};
            c.nu = 1.0;
            c.t = {1, std::nullopt, 10};
            c.repetitions = 1;
            c.noise = NoiseKind::IIDP;
            c.methods = {Method::SwapTest};
            break;
        case ExperimentKind::FigSingle:
            break;
        case ExperimentKind::FigMulti:
            c.p1 = {};
            for (int i = 0; i < 10; i++) {
                c.p1.push_back(1e-4 + (2.5e-3 - 1e-4) * i / 9.0);
            }
            break;
        case ExperimentKind::FigSuppAlpha:
            c.p1 = {};
            for (int i = 0; i < 10; i++) {
                c.p1.push_back(1e-4 + (2.5e-3 - 1e-4) * i / 9.0);
            }
            c.lambda1 = 1.0;
            c.lambda2 = 0.25;
            c.nu = std::numeric_limits<double>::infinity();
            c.mle_times = {1, 2};
            c.methods = {Method::Naive, Method::VSP, Method::SwapTest, Method::SwapTestAlpha};
            break;
        case ExperimentKind::Validate:
            c.methods = {};
            break;
    }
    return c;
}

bool ExperimentConfig::infinite_shots() const { return std::isinf(nu); }

NoisePlacement ExperimentConfig::effective_placement() const {
    if (placement) {
        return *placement;
    }
    return noise == NoiseKind::IIDP ? NoisePlacement::PerTimeUnit : NoisePlacement::EndOfEvolution;
}

void ExperimentConfig::validate() const {
    const std::string where = "config";
    if (experiment == ExperimentKind::Validate) {
        return;
    }
    if (n.empty()) {
        throw ConfigError(where, "field 'n': empty axis");
    }
    for (int k : n) {
        if (k < 1 || k > 64) {
            throw ConfigError(where, "field 'n': qubit count must lie in [1, 64]");
        }
    }
    if (p1.empty()) {
        throw ConfigError(where, "field 'p1': empty axis");
    }
    for (double p : p1) {
        if (!(p >= 0.0 && p < 0.5)) {
            throw ConfigError(where, "field 'p1': rates must lie in [0, 0.5)");
        }
    }
    if (repetitions < 1) {
        throw ConfigError(where, "field 'repetitions': must be >= 1");
    }
    if (!(nu >= 1.0)) {
        throw ConfigError(where, "field 'nu': must be >= 1 or inf");
    }
    if (!infinite_shots() && nu != std::floor(nu)) {
        throw ConfigError(where, "field 'nu': must be an integer");
    }
    if (methods.empty()) {
        throw ConfigError(where, "field 'methods': empty list");
    }
    if (is_mle_experiment(experiment)) {
        if (mle_times.empty()) {
            throw ConfigError(where, "field 'mle_times': empty list");
        }
        for (long tt : mle_times) {
            if (tt < 1) {
                throw ConfigError(where, "field 'mle_times': times must be >= 1");
            }
        }
        try {
            mle.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError(where, e.what());
        }
        return;
    }
    if (lambda.empty()) {
        throw ConfigError(where, "field 'lambda': empty axis");
    }
    for (Method m : methods) {
        if (m == Method::SwapTestAlpha) {
            throw ConfigError(where, "field 'methods': swap_alpha applies to the two-parameter experiments only");
        }
    }
    if (t.start < 1 || t.step < 1) {
        throw ConfigError(where, "fields 't_start'/'t_step': must be >= 1");
    }
    if ((experiment == ExperimentKind::FigVariance || experiment == ExperimentKind::FigBiasIIDP) &&
        infinite_shots()) {
        throw ConfigError(where, "field 'nu': bound experiments need a finite shot count");
    }
}

void apply_setting(ExperimentConfig &cfg, std::string_view raw_key, std::string_view raw_value,
                   const std::string &where) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (value.empty()) {
        throw ConfigError(where, "field '" + key + "': empty value");
    }
    if (key == "experiment") {
        auto k = parse_experiment(value);
        if (!k) {
            throw ConfigError(where, "field 'experiment': unknown experiment '" + value + "'");
        }
        cfg.experiment = *k;
    } else if (key == "n") {
        cfg.n = to_int_list<int>(value, where, key);
    } else if (key == "lambda") {
        cfg.lambda = to_double_list(value, where, key);
    } else if (key == "lambda1") {
        cfg.lambda1 = to_double(value, where, key);
    } else if (key == "lambda2") {
        cfg.lambda2 = to_double(value, where, key);
    } else if (key == "p1") {
        cfg.p1 = to_double_list(value, where, key);
    } else if (key == "nu") {
        cfg.nu = value == "inf" ? std::numeric_limits<double>::infinity() : to_double(value, where, key);
    } else if (key == "t_start") {
        cfg.t.start = to_long(value, where, key);
    } else if (key == "t_stop") {
        if (value == "auto") {
            cfg.t.stop.reset();
        } else {
            cfg.t.stop = to_long(value, where, key);
        }
    } else if (key == "t_step") {
        cfg.t.step = to_long(value, where, key);
    } else if (key == "repetitions") {
        cfg.repetitions = static_cast<int>(to_long(value, where, key));
    } else if (key == "seed") {
        errno = 0;
        char *end = nullptr;
        unsigned long long s = std::strtoull(value.c_str(), &end, 10);
        if (end != value.c_str() + value.size() || errno == ERANGE || value[0] == '-') {
            throw ConfigError(where, "field 'seed': '" + value + "' is not an unsigned 64-bit integer");
        }
        cfg.seed = s;
    } else if (key == "noise") {
        if (value == "dephasing") {
            cfg.noise = NoiseKind::Dephasing;
        } else if (value == "iidp") {
            cfg.noise = NoiseKind::IIDP;
        } else {
            throw ConfigError(where, "field 'noise': expected dephasing or iidp");
        }
    } else if (key == "placement") {
        if (value == "end") {
            cfg.placement = NoisePlacement::EndOfEvolution;
        } else if (value == "per_unit") {
            cfg.placement = NoisePlacement::PerTimeUnit;
        } else if (value == "auto") {
            cfg.placement.reset();
        } else {
            throw ConfigError(where, "field 'placement': expected end, per_unit or auto");
        }
    } else if (key == "tie_rule") {
        if (value == "failure") {
            cfg.tie = TieRule::CountAsFailure;
        } else if (value == "decoder") {
            cfg.tie = TieRule::SyndromeDecoder;
        } else {
            throw ConfigError(where, "field 'tie_rule': expected failure or decoder");
        }
    } else if (key == "methods") {
        cfg.methods.clear();
        for (const std::string &item : split_list(value)) {
            auto m = parse_method(item);
            if (!m) {
                throw ConfigError(where, "field 'methods': unknown method '" + item + "'");
            }
            cfg.methods.push_back(*m);
        }
    } else if (key == "mle_times") {
        cfg.mle_times = to_int_list<long>(value, where, key);
    } else if (key == "init_box") {
        cfg.mle.init_box = to_double(value, where, key);
    } else if (key == "mle_tol") {
        cfg.mle.tol = to_double(value, where, key);
    } else if (key == "mle_max_iter") {
        cfg.mle.max_iter = to_long(value, where, key);
    } else if (key == "output") {
        cfg.output = value;
    } else {
        throw ConfigError(where, "unknown field '" + key + "'");
    }
}

std::pair<std::string, std::string> split_override(std::string_view text) {
    size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("--set " + std::string(text), "expected key=value");
    }
    return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

ExperimentConfig parse_config(std::istream &in, const std::string &source,
                              const std::vector<std::pair<std::string, std::string>> &overrides) {
    struct Entry {
        std::string where;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        size_t hash = line.find('#');
        std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        std::string where = source + ":" + std::to_string(line_no);
        size_t eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where, "expected key = value");
        }
        entries.push_back({where, trim(body.substr(0, eq)), trim(body.substr(eq + 1))});
    }
    for (const auto &[k, v] : overrides) {
        entries.push_back({"--set " + k, k, v});
    }

    // The experiment kind decides the defaults, so resolve it first.
    std::optional<ExperimentKind> kind;
    std::map<std::string, std::string> seen;
    for (const Entry &e : entries) {
        if (e.where.rfind("--set", 0) != 0) {
            auto [it, inserted] = seen.emplace(e.key, e.where);
            if (!inserted) {
                throw ConfigError(e.where, "field '" + e.key + "' already set at " + it->second);
            }
        }
        if (e.key == "experiment") {
            kind = parse_experiment(e.value);
            if (!kind) {
                throw ConfigError(e.where, "field 'experiment': unknown experiment '" + e.value + "'");
            }
        }
    }
    if (!kind) {
        throw ConfigError(source, "missing field 'experiment'");
    }
    ExperimentConfig cfg = ExperimentConfig::defaults(*kind);
    for (const Entry &e : entries) {
        if (e.key != "experiment") {
            apply_setting(cfg, e.key, e.value, e.where);
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(source, e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path,
                             const std::vector<std::pair<std::string, std::string>> &overrides) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    return parse_config(in, path, overrides);
}

// ---------------------------------------------------------------------------
// Grid

std::vector<long> time_points(const TimeSweep &sweep, int n, double lambda) {
    long stop;
    if (sweep.stop) {
        stop = *sweep.stop;
    } else {
        if (!(lambda > 0.0)) {
            throw ConfigError("config", "field 't_stop': auto needs a positive lambda");
        }
        stop = static_cast<long>(std::floor(std::numbers::pi / (2.0 * n * lambda)));
    }
    std::vector<long> out;
    for (long t = sweep.start; t <= stop; t += sweep.step) {
        out.push_back(t);
    }
    return out;
}

std::vector<GridPoint> sweep_grid(const ExperimentConfig &cfg) {
    cfg.validate();
    std::vector<GridPoint> grid;
    if (cfg.experiment == ExperimentKind::Validate) {
        return grid;
    }
    if (is_mle_experiment(cfg.experiment)) {
        for (int n : cfg.n) {
            for (double p : cfg.p1) {
                grid.push_back({grid.size(), n, 0.0, cfg.lambda1, cfg.lambda2, p, cfg.mle_times.back()});
            }
        }
        return grid;
    }
    for (int n : cfg.n) {
        for (double lam : cfg.lambda) {
            std::vector<long> times = time_points(cfg.t, n, lam);
            if (times.empty()) {
                throw ConfigError("config", "field 't_stop': empty t axis for n=" + std::to_string(n));
            }
            for (double p : cfg.p1) {
                for (long t : times) {
                    grid.push_back({grid.size(), n, lam, lam, 0.0, p, t});
                }
            }
        }
    }
    return grid;
}

NoiseModel noise_model_for(const ExperimentConfig &cfg, double p1) {
    NoiseModel m;
    m.placement = cfg.effective_placement();
    m.tie = cfg.tie;
    if (cfg.noise == NoiseKind::Dephasing) {
        m.unit = PauliChannelSpec::dephasing(p1);
    } else if (is_mle_experiment(cfg.experiment)) {
        m.unit = PauliChannelSpec::make(p1, p1, p1);
    } else {
        m.unit = PauliChannelSpec::flip_then_dephase(p1, p1);
    }
    return m;
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t cell, int rep) {
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ static_cast<std::uint64_t>(cell)) ^ static_cast<std::uint64_t>(rep));
}

// ---------------------------------------------------------------------------
// Runners

namespace {

ResultRow base_row(const ExperimentConfig &cfg, const GridPoint &g, std::string row_type, Method m) {
    ResultRow r;
    r.row_type = std::move(row_type);
    r.experiment = std::string(experiment_name(cfg.experiment));
    r.method = std::string(method_name(m));
    r.n = g.n;
    r.t = g.t;
    r.p1 = g.p1;
    r.noise = std::string(noise_name(cfg.noise));
    r.placement = std::string(placement_name(cfg.effective_placement()));
    r.nu = cfg.nu;
    if (is_mle_experiment(cfg.experiment)) {
        r.lambda1 = g.lambda1;
        r.lambda2 = g.lambda2;
    } else {
        r.lambda1 = g.lambda;
    }
    return r;
}

// Mean, normal-approximation 95% interval and failure counts over the rep rows.
ResultRow summarize(const std::vector<ResultRow> &reps, ResultRow summary) {
    std::vector<double> errors;
    double e1 = 0.0, e2 = 0.0;
    bool has_e2 = false;
    for (const ResultRow &r : reps) {
        summary.failed += r.failed;
        summary.clamped += r.clamped;
        if (r.abs_error) {
            errors.push_back(*r.abs_error);
            e1 += r.estimate1.value_or(0.0);
            if (r.estimate2) {
                e2 += *r.estimate2;
                has_e2 = true;
            }
        }
    }
    if (errors.empty()) {
        return summary;
    }
    const double k = static_cast<double>(errors.size());
    double mean = 0.0;
    for (double e : errors) {
        mean += e;
    }
    mean /= k;
    summary.mean_abs_error = mean;
    summary.abs_error = mean;
    summary.estimate1 = e1 / k;
    if (has_e2) {
        summary.estimate2 = e2 / k;
    }
    if (errors.size() > 1) {
        double ss = 0.0;
        for (double e : errors) {
            ss += (e - mean) * (e - mean);
        }
        double se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
        summary.ci95_low = mean - 1.96 * se;
        summary.ci95_high = mean + 1.96 * se;
    }
    return summary;
}

EstimateReport single_estimate(Method m, const MomentEstimates &mom, int n, long t, double reference) {
    switch (m) {
        case Method::Naive:
            return lambda_naive(mom, n, t, reference);
        case Method::VSP:
            return lambda_vsp(mom, n, t, reference);
        default:
            return lambda_swap(mom, n, t, reference);
    }
}

// Bound inputs exist only while p_odd <= 1/2; past that point the bound cells stay empty.
std::optional<BoundInputs> bound_inputs(NoiseKind noise, int n, long t, double lambda, double p1, double nu) {
    const double finite_nu = std::isinf(nu) ? 1.0 : nu;
    try {
        return noise == NoiseKind::IIDP ? BoundInputs::iidp(n, t, lambda, p1, finite_nu)
                                        : BoundInputs::dephasing(n, t, lambda, p1, finite_nu);
    } catch (const std::invalid_argument &) {
        return std::nullopt;
    }
}

std::optional<double> safe_variance_bound(int n, long t, double lambda, double p1, double nu) {
    auto b = bound_inputs(NoiseKind::Dephasing, n, t, lambda, p1, nu);
    if (!b || !(b->eta > 0.0) || !(b->p_odd < 0.5)) {
        return std::nullopt;
    }
    return variance_bound_dephasing(*b);
}

std::vector<ResultRow> run_single_cell(const ExperimentConfig &cfg, const GridPoint &g) {
    const HamiltonianSpec spec = HamiltonianSpec::single(g.n, g.lambda, g.t);
    const LogicalState rho = noisy_probe(spec, noise_model_for(cfg, g.p1)).state();
    const LogicalObservable obs = restrict_observable(ObservableName::GHZyProjector, g.n);

    std::vector<MomentEstimates> moments;
    std::vector<std::optional<std::uint64_t>> seeds;
    if (cfg.infinite_shots()) {
        moments.push_back(exact_moments(rho, obs));
        seeds.push_back(std::nullopt);
    } else {
        SwapDistribution dist = joint_distribution(rho, obs);
        for (int rep = 0; rep < cfg.repetitions; rep++) {
            std::uint64_t seed = cell_seed(cfg.seed, g.index, rep);
            moments.push_back(estimate_moments(sample_counts(dist, static_cast<long>(cfg.nu), seed)));
            seeds.push_back(seed);
        }
    }

    std::optional<double> var_bound;
    std::optional<double> bias_bound;
    if (cfg.noise == NoiseKind::Dephasing) {
        var_bound = safe_variance_bound(g.n, g.t, g.lambda, g.p1, cfg.nu);
    } else {
        if (auto b = bound_inputs(NoiseKind::IIDP, g.n, g.t, g.lambda, g.p1, cfg.nu)) {
            if (b->eta > 0.0) {
                bias_bound = bias_bound_iidp(*b);
            }
            var_bound = variance_bound_iidp(*b);
        }
    }

    std::vector<ResultRow> rows;
    for (Method m : cfg.methods) {
        std::vector<ResultRow> reps;
        for (size_t r = 0; r < moments.size(); r++) {
            ResultRow row = base_row(cfg, g, "rep", m);
            row.rep = static_cast<int>(r);
            row.seed = seeds[r];
            EstimateReport est = single_estimate(m, moments[r], g.n, g.t, g.lambda);
            row.failed = est.failed;
            row.clamped = est.clamped;
            if (!est.failed) {
                row.estimate1 = est.value();
                row.abs_error = std::abs(est.value() - g.lambda);
            }
            reps.push_back(row);
        }
        ResultRow summary = base_row(cfg, g, "summary", m);
        if (m == Method::SwapTest) {
            summary.variance_bound = var_bound;
            summary.bias_bound = bias_bound;
        }
        rows.insert(rows.end(), reps.begin(), reps.end());
        rows.push_back(summarize(reps, summary));
    }
    return rows;
}

std::vector<ResultRow> run_variance_cell(const ExperimentConfig &cfg, const GridPoint &g) {
    ResultRow row = base_row(cfg, g, "bound", Method::SwapTest);
    row.variance_bound = safe_variance_bound(g.n, g.t, g.lambda, g.p1, cfg.nu);
    return {row};
}

std::vector<ResultRow> run_bias_cell(const ExperimentConfig &cfg, const GridPoint &g) {
    ResultRow row = base_row(cfg, g, "bound", Method::SwapTest);
    const HamiltonianSpec spec = HamiltonianSpec::single(g.n, g.lambda, g.t);
    BranchedState state = noisy_probe(spec, noise_model_for(cfg, g.p1));
    try {
        row.bias = exact_bias_swap(state, g.n, g.t);
    } catch (const std::domain_error &) {
        row.failed = 1;
    }
    if (auto b = bound_inputs(NoiseKind::IIDP, g.n, g.t, g.lambda, g.p1, cfg.nu)) {
        if (b->eta > 0.0) {
            row.bias_bound = bias_bound_iidp(*b);
        }
        row.variance_bound = variance_bound_iidp(*b);
    }
    return {row};
}

std::vector<ResultRow> run_mle_cell(const ExperimentConfig &cfg, const GridPoint &g) {
    const NoiseModel noise = noise_model_for(cfg, g.p1);
    const LogicalObservable obs = restrict_observable(ObservableName::YtoN, g.n);
    std::vector<SwapDistribution> dists;
    for (long tt : cfg.mle_times) {
        LogicalState rho = noisy_probe(HamiltonianSpec::two_param(g.n, g.lambda1, g.lambda2, tt), noise).state();
        dists.push_back(joint_distribution(rho, obs));
    }
    // Exact data carry a nominal weight; the likelihood's minimizer does not depend on it.
    const double nominal_nu = cfg.infinite_shots() ? 1e6 : cfg.nu;

    std::vector<std::vector<ResultRow>> per_method(cfg.methods.size());
    for (int rep = 0; rep < cfg.repetitions; rep++) {
        const std::uint64_t seed = cell_seed(cfg.seed, g.index, rep);
        OutcomeData data;
        for (size_t j = 0; j < dists.size(); j++) {
            if (cfg.infinite_shots()) {
                data.push_back(expected_counts(cfg.mle_times[j], dists[j], nominal_nu));
            } else {
                std::uint64_t s = cell_seed(seed, j, 0);
                data.push_back(summarize_counts(cfg.mle_times[j], sample_counts(dists[j], static_cast<long>(cfg.nu), s)));
            }
        }
        for (size_t mi = 0; mi < cfg.methods.size(); mi++) {
            MleConfig mc = cfg.mle;
            mc.seed = cell_seed(seed, 1000 + mi, 0);
            EstimateReport est = mle_fit(data, {g.lambda1, g.lambda2}, mc, {cfg.methods[mi], g.n});
            ResultRow row = base_row(cfg, g, "rep", cfg.methods[mi]);
            row.rep = rep;
            row.seed = seed;
            row.failed = est.failed;
            row.clamped = est.converged ? 0 : 1;
            if (!est.failed) {
                row.estimate1 = est.value(0);
                row.estimate2 = est.value(1);
                row.abs_error = std::abs(est.value(0) - g.lambda1) + std::abs(est.value(1) - g.lambda2);
            }
            per_method[mi].push_back(row);
        }
    }
    std::vector<ResultRow> rows;
    for (size_t mi = 0; mi < cfg.methods.size(); mi++) {
        rows.insert(rows.end(), per_method[mi].begin(), per_method[mi].end());
        rows.push_back(summarize(per_method[mi], base_row(cfg, g, "summary", cfg.methods[mi])));
    }
    return rows;
}

// One "minimum" row per curve (consecutive cells sharing n, lambda, p1).
void append_minima(std::vector<ResultRow> &rows) {
    std::vector<ResultRow> minima;
    size_t i = 0;
    while (i < rows.size()) {
        size_t j = i;
        std::optional<size_t> best;
        while (j < rows.size() && rows[j].n == rows[i].n && rows[j].lambda1 == rows[i].lambda1 &&
               rows[j].p1 == rows[i].p1) {
            if (rows[j].variance_bound && (!best || *rows[j].variance_bound < *rows[*best].variance_bound)) {
                best = j;
            }
            j++;
        }
        if (best) {
            ResultRow m = rows[*best];
            m.row_type = "minimum";
            m.bias.reset();
            m.bias_bound.reset();
            minima.push_back(m);
        }
        i = j;
    }
    rows.insert(rows.end(), minima.begin(), minima.end());
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg) {
    if (cfg.experiment == ExperimentKind::Validate) {
        throw ConfigError("config", "the validate experiment has no CSV output; use the validate command");
    }
    const std::vector<GridPoint> grid = sweep_grid(cfg);
    std::vector<std::vector<ResultRow>> cells(grid.size());
    std::vector<std::string> errors(grid.size());

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(grid.size()); i++) {
        try {
            switch (cfg.experiment) {
                case ExperimentKind::FigVariance:
                    cells[i] = run_variance_cell(cfg, grid[i]);
                    break;
                case ExperimentKind::FigBiasIIDP:
                    cells[i] = run_bias_cell(cfg, grid[i]);
                    break;
                case ExperimentKind::FigSingle:
                    cells[i] = run_single_cell(cfg, grid[i]);
                    break;
                default:
                    cells[i] = run_mle_cell(cfg, grid[i]);
                    break;
            }
        } catch (const std::exception &e) {
            errors[i] = e.what();
        }
    }
    for (size_t i = 0; i < errors.size(); i++) {
        if (!errors[i].empty()) {
            throw std::runtime_error("grid cell " + std::to_string(i) + ": " + errors[i]);
        }
    }

    std::vector<ResultRow> rows;
    for (auto &c : cells) {
        rows.insert(rows.end(), c.begin(), c.end());
    }
    if (cfg.experiment == ExperimentKind::FigVariance || cfg.experiment == ExperimentKind::FigBiasIIDP) {
        append_minima(rows);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV

const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols = {
        "row_type", "experiment",    "method",         "n",          "t",        "lambda1",   "lambda2",
        "p1",       "noise",         "placement",      "nu",         "rep",      "seed",      "estimate1",
        "estimate2", "abs_error",    "bias",           "variance_bound", "bias_bound", "mean_abs_error",
        "ci95_low", "ci95_high",     "failed",         "clamped"};
    return cols;
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

std::string fmt(const std::optional<double> &v) { return v ? fmt(*v) : std::string(); }

}  // namespace

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows) {
    const auto &cols = csv_columns();
    for (size_t i = 0; i < cols.size(); i++) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (const ResultRow &r : rows) {
        out << r.row_type << ',' << r.experiment << ',' << r.method << ',' << r.n << ',' << r.t << ','
            << fmt(r.lambda1) << ',' << fmt(r.lambda2) << ',' << fmt(r.p1) << ',' << r.noise << ',' << r.placement
            << ',' << fmt(r.nu) << ',' << (r.rep ? std::to_string(*r.rep) : "") << ','
            << (r.seed ? std::to_string(*r.seed) : "") << ',' << fmt(r.estimate1) << ',' << fmt(r.estimate2) << ','
            << fmt(r.abs_error) << ',' << fmt(r.bias) << ',' << fmt(r.variance_bound) << ',' << fmt(r.bias_bound)
            << ',' << fmt(r.mean_abs_error) << ',' << fmt(r.ci95_low) << ',' << fmt(r.ci95_high) << ','
            << r.failed << ',' << r.clamped << '\n';
    }
}

std::vector<ResultRow> run_to_file(const ExperimentConfig &cfg, const std::string &path_override) {
    const std::string path = path_override.empty() ? cfg.output : path_override;
    if (path.empty()) {
        throw ConfigError("config", "field 'output': no output path given");
    }
    std::vector<ResultRow> rows = run_experiment(cfg);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_csv(out, rows);
    out.flush();
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
    return rows;
}

}  // namespace qmetro
