// Polarization-fraction sweeps, Monte Carlo frame-error simulation, CSV
// output, and the verification suites driven by `sppolar verify`.
#pragma once

#include "sppolar/channel_model.hpp"
#include "sppolar/construction.hpp"
#include "sppolar/dist_algebra.hpp"
#include "sppolar/relations.hpp"
#include "sppolar/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sppolar {

/// 2^(-M^beta).
double theorem_threshold(std::size_t m, double beta);

struct PolarizeConfig {
    std::string channel = "bsc:0.11";
    double p0 = 0.5;
    std::vector<std::size_t> lengths;
    RateMatching mode = RateMatching::shortened;
    std::size_t mu = kDefaultMu;
    double beta = 0.3;
    std::optional<double> threshold;  // replaces 2^(-M^beta) when set
    unsigned workers = 0;
};

struct PolarizeRow {
    std::size_t m = 0;
    unsigned n = 0;
    RateMatching mode = RateMatching::shortened;
    double threshold = 0.0;
    double fraction_good_z = 0.0;  // Z(U_i|U^{i-1},Y) below threshold
    double fraction_good_k = 0.0;  // K(U_i|U^{i-1}) below threshold
    double one_minus_h = 0.0;
    double h = 0.0;                // H(X|Y)
};

PolarizeRow polarize_one(const PolarizeConfig& config, std::size_t m);
std::vector<PolarizeRow> run_polarize(const PolarizeConfig& config);
void write_polarize_csv(std::ostream& out, const PolarizeConfig& config, const std::vector<PolarizeRow>& rows);

struct SimulateConfig {
    std::string channel = "bec:0.5";
    std::size_t m = 6;
    RateMatching mode = RateMatching::shortened;
    double rate = 0.5;
    std::size_t mu = kDefaultMu;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    bool min_sum = false;
};

struct SimulateResult {
    std::size_t m = 0;
    RateMatching mode = RateMatching::shortened;
    double rate = 0.0;
    std::size_t info = 0;
    std::uint64_t trials = 0;
    std::uint64_t frame_errors = 0;
    double fer = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    unsigned workers = 1;
};

struct WilsonInterval {
    double low;
    double high;
};

/// 95% Wilson score interval.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Information set size round(rate * M).
std::size_t info_count(std::size_t m, double rate);

/// Uniform data, channel sampled by inverse CDF, SC decoding. Trial t draws
/// only from the stream (seed, t).
SimulateResult run_simulate(const SimulateConfig& config, const CodeSpec& code);
SimulateResult run_simulate(const SimulateConfig& config);
void write_simulate_csv(std::ostream& out, const SimulateConfig& config, const SimulateResult& r);

/// Channel output for input x from one uniform draw.
std::size_t sample_output(const BMChannel& w, int x, double uniform);

// Random generators for property checks.
JointDist random_joint(TrialStream& rng, std::size_t max_outputs);
StochasticMatrix random_stochastic(TrialStream& rng, std::size_t rows, std::size_t max_cols);
InputFlip random_flip(TrialStream& rng, std::size_t size);

/// Shortcut-table cell, written "minus:A:S" (operation, row, column).
struct TableCell {
    CombineOp op;
    DistTag row;
    DistTag col;
};

TableCell parse_table_cell(const std::string& text);
std::string to_string(const TableCell& cell);

/// The 16 cells with at least one special operand.
std::vector<TableCell> special_table_cells();

struct VerifyConfig {
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    /// Replaces the claimed result of one table cell by a wrong one.
    std::optional<TableCell> fault;
};

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t passed = 0;
    double worst = 0.0;  // largest residual or deviation observed
    std::vector<std::string> failures;  // first few

    bool ok() const { return checks > 0 && checks == passed; }
    void record(bool pass, const std::string& what);
};

std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyConfig& config);

/// True when the three orderings that go with lower [= upper hold within tol.
bool figures_ordered(const JointDist& lower, const JointDist& upper, double tol);

}  // namespace sppolar
