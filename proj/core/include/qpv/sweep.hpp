#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpv/protocol.hpp"

namespace qpv {

// Cross product of parameter lists; one row per cell. Which lists matter
// depends on the metric:
//   neighbor-distance : t
//   honest            : T, t, r, N (value = accept rate over trials)
//   attack            : T, t, r, N + strategy (value = acceptance rate)
//   estimate          : t, copies (value = best-basis estimation success)
struct SweepGrid {
    std::vector<int> T{32};
    std::vector<int> t{10};
    std::vector<std::size_t> r{16};
    std::vector<int> N{3};
    std::vector<int> copies{1};
    std::string metric = "honest";
    std::string strategy = "guess";  // metric == attack: guess | collude
    std::uint64_t trials = 1000;
    std::uint64_t seed = 0;
    double distance_m = 3.0e5;
    double timing_tolerance_s = kDefaultTimingToleranceS;
    int measurement_grid = 16;  // metric == estimate
};

struct SweepRow {
    std::string config_hash;  // stable id of the cell
    std::string metric;
    std::string strategy;
    int T = 0;
    int t = 0;
    std::size_t r = 0;
    int N = 0;
    int copies = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double value = 0.0;
    std::string detail;
};

// Runs every cell not present in `existing` (keyed by config_hash), using
// up to `jobs` worker threads. Output order is the deterministic grid
// order whatever the completion order; per-cell seeds derive from the cell
// hash, so results do not depend on thread count.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned jobs,
                                const std::map<std::string, SweepRow>& existing = {});

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

// Reads rows back for resumption; tolerates the header line.
std::map<std::string, SweepRow> parse_sweep_csv(std::string_view text);

}  // namespace qpv
