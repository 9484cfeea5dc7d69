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

#ifndef QMETRO_EXPERIMENTS_HPP
#define QMETRO_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmetro/estimators.hpp"
#include "qmetro/multiparam_mle.hpp"

namespace qmetro {

enum class ExperimentKind { FigVariance, FigBiasIIDP, FigSingle, FigMulti, FigSuppAlpha, Validate };
enum class NoiseKind { Dephasing, IIDP };

std::string_view experiment_name(ExperimentKind k);
std::optional<ExperimentKind> parse_experiment(std::string_view name);
std::vector<ExperimentKind> all_experiments();
/// One-line description used by `list-experiments`.
std::string_view experiment_summary(ExperimentKind k);

/// Invalid configuration. `where` names the offending line or override.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string &where, const std::string &what)
        : std::runtime_error(where.empty() ? what : where + ": " + what) {}
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct TimeSweep {
    long start = 1;
    /// Absent means floor(pi / (2 n lambda)) per grid cell.
    std::optional<long> stop;
    long step = 10;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::FigSingle;
    std::vector<int> n = {3};
    std::vector<double> lambda = {0.001};
    double lambda1 = 0.001;
    double lambda2 = 0.002;
    std::vector<double> p1 = {0.0005};
    /// Shot count; +inf selects exact moments.
    double nu = 1e6;
    TimeSweep t;
    int repetitions = 10;
    std::uint64_t seed = 1;
    NoiseKind noise = NoiseKind::Dephasing;
    /// Absent: end-of-evolution for dephasing, per time unit for IIDP.
    std::optional<NoisePlacement> placement;
    TieRule tie = TieRule::CountAsFailure;
    std::vector<Method> methods = {Method::Naive, Method::VSP, Method::SwapTest};
    std::vector<long> mle_times = {50, 100};
    MleConfig mle;
    std::string output;

    /// Defaults for an experiment kind.
    static ExperimentConfig defaults(ExperimentKind kind);
    void validate() const;
    bool infinite_shots() const;
    NoisePlacement effective_placement() const;
};

/// Applies one `key=value` setting. Throws ConfigError naming `where`.
void apply_setting(ExperimentConfig &cfg, std::string_view key, std::string_view value, const std::string &where);

/// Flat `key = value` text, `#` comments. The `experiment` key selects the defaults the
/// remaining keys override, wherever it appears in the file.
ExperimentConfig parse_config(std::istream &in, const std::string &source,
                              const std::vector<std::pair<std::string, std::string>> &overrides = {});
ExperimentConfig load_config(const std::string &path,
                             const std::vector<std::pair<std::string, std::string>> &overrides = {});

/// Splits `key=value`; throws ConfigError when '=' is missing.
std::pair<std::string, std::string> split_override(std::string_view text);

/// Expands the sweep; an absent stop resolves to floor(pi / (2 n lambda)).
std::vector<long> time_points(const TimeSweep &sweep, int n, double lambda);

struct GridPoint {
    std::size_t index = 0;
    int n = 3;
    double lambda = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double p1 = 0.0;
    long t = 0;
};

/// Cartesian product of the sweep axes. Single-parameter experiments iterate
/// n, lambda, p1, t (t fastest); two-parameter experiments iterate n, p1.
std::vector<GridPoint> sweep_grid(const ExperimentConfig &cfg);

struct ResultRow {
    std::string row_type;  // rep, summary, bound, minimum
    std::string experiment;
    std::string method;
    int n = 0;
    long t = 0;
    double lambda1 = 0.0;
    std::optional<double> lambda2;
    double p1 = 0.0;
    std::string noise;
    std::string placement;
    double nu = 0.0;
    std::optional<int> rep;
    std::optional<std::uint64_t> seed;
    std::optional<double> estimate1;
    std::optional<double> estimate2;
    std::optional<double> abs_error;
    std::optional<double> bias;
    std::optional<double> variance_bound;
    std::optional<double> bias_bound;
    std::optional<double> mean_abs_error;
    std::optional<double> ci95_low;
    std::optional<double> ci95_high;
    long failed = 0;
    long clamped = 0;
};

const std::vector<std::string> &csv_columns();

/// Runs the whole grid. Rows come out in grid order whatever the thread count.
std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg);

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
/// Runs and writes to cfg.output (or `path_override`). Throws IoError on write failure.
std::vector<ResultRow> run_to_file(const ExperimentConfig &cfg, const std::string &path_override = "");

/// Noise model an experiment cell uses for the given p1.
NoiseModel noise_model_for(const ExperimentConfig &cfg, double p1);

/// Seed for repetition `rep` of grid cell `cell`.
std::uint64_t cell_seed(std::uint64_t base, std::size_t cell, int rep);

}  // namespace qmetro

#endif
