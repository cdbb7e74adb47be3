#include "qpv/sweep.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qpv/adversary.hpp"
#include "qpv/hash.hpp"
#include "qpv/json_io.hpp"

namespace qpv {

namespace {

struct Cell {
    std::string metric;
    std::string strategy;
    int T, t, N, copies;
    std::size_t r;
    std::uint64_t trials, base_seed;
    double distance_m, timing_tolerance_s;
    int measurement_grid;

    std::string canonical() const {
        std::ostringstream os;
        os << "metric=" << metric << ";strategy=" << strategy << ";T=" << T << ";t=" << t
           << ";r=" << r << ";N=" << N << ";k=" << copies << ";trials=" << trials
           << ";seed=" << base_seed << ";d=" << format_double(distance_m)
           << ";eps=" << format_double(timing_tolerance_s) << ";grid=" << measurement_grid;
        return os.str();
    }
};

SweepRow compute_cell(const Cell& cell) {
    SweepRow row;
    row.metric = cell.metric;
    row.strategy = cell.metric == "attack" ? cell.strategy : "";
    row.T = cell.T;
    row.t = cell.t;
    row.r = cell.r;
    row.N = cell.N;
    row.copies = cell.copies;
    row.trials = cell.trials;
    row.seed = cell.base_seed;
    const std::string canon = cell.canonical();
    row.config_hash = to_hex64(fnv1a64(canon));
    const std::uint64_t cell_seed = fnv1a64(canon) ^ cell.base_seed;

    if (cell.metric == "neighbor-distance") {
        row.value = neighbor_distance(cell.t);
        return row;
    }

    ProtocolConfig config;
    config.T = cell.T;
    config.t = cell.t;
    config.message_lengths = {cell.r};
    config.geometry = make_ring_scenario(cell.N, cell.distance_m, cell.timing_tolerance_s);
    config.seed = cell_seed;

    if (cell.metric == "honest") {
        Rng seeds(cell_seed);
        std::uint64_t accepts = 0;
        double max_rt_err = 0.0;
        for (std::uint64_t i = 0; i < cell.trials; ++i) {
            ProtocolConfig cfg = config;
            cfg.seed = seeds.next_u64();
            const ProtocolTranscript ts = run_honest(cfg);
            accepts += ts.overall_accept ? 1 : 0;
            for (const auto& rec : ts.verifiers) {
                if (rec.observed_round_trip_s) {
                    max_rt_err = std::max(
                        max_rt_err,
                        std::abs(*rec.observed_round_trip_s - rec.expected_round_trip_s));
                }
            }
        }
        row.value = static_cast<double>(accepts) / static_cast<double>(cell.trials);
        row.detail = "max_rt_error_s=" + format_double(max_rt_err);
        return row;
    }

    if (cell.metric == "attack") {
        AttackSpec spec;
        spec.strategy = cell.strategy;
        spec.trials = cell.trials;
        if (cell.strategy == "collude") {
            spec.auto_place_colluders = true;
        }
        const auto [transcript, report] = run_with_adversary(config, spec);
        (void)transcript;
        row.value = report.success_probability;
        if (report.theoretical_bound) {
            row.detail = "bound=" + format_double(*report.theoretical_bound);
        }
        return row;
    }

    if (cell.metric == "estimate") {
        Rng rng(cell_seed);
        const KeyEstimationResult res = key_estimation_attack(
            cell.t, cell.T, cell.copies, cell.measurement_grid, cell.trials, rng);
        row.value = res.best_success;
        row.detail = "exact_optimal=" + format_double(res.grid_optimal_exact);
        return row;
    }

    throw std::invalid_argument("sweep: unknown metric '" + cell.metric + "'");
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned jobs,
                                const std::map<std::string, SweepRow>& existing) {
    if (grid.T.empty() || grid.t.empty() || grid.r.empty() || grid.N.empty() ||
        grid.copies.empty()) {
        throw std::invalid_argument("sweep: empty parameter grid");
    }
    if (grid.metric != "neighbor-distance" && grid.metric != "honest" &&
        grid.metric != "attack" && grid.metric != "estimate") {
        throw std::invalid_argument("sweep: unknown metric '" + grid.metric + "'");
    }
    if (grid.metric == "attack" && grid.strategy != "guess" && grid.strategy != "collude") {
        throw std::invalid_argument("sweep: attack metric supports strategies guess | collude");
    }

    // Deterministic grid order: T, t, r, N, copies (outer to inner). Metrics
    // ignore the axes they do not use, so collapse those to one cell.
    const bool uses_T = grid.metric == "honest" || grid.metric == "attack" ||
                        grid.metric == "estimate";
    const bool uses_r = grid.metric == "honest" || grid.metric == "attack";
    const bool uses_N = grid.metric == "honest" || grid.metric == "attack";
    const bool uses_k = grid.metric == "estimate";

    const std::vector<int> Ts = uses_T ? grid.T : std::vector<int>{grid.T.front()};
    const std::vector<std::size_t> rs = uses_r ? grid.r : std::vector<std::size_t>{grid.r.front()};
    const std::vector<int> Ns = uses_N ? grid.N : std::vector<int>{grid.N.front()};
    const std::vector<int> ks = uses_k ? grid.copies : std::vector<int>{grid.copies.front()};

    std::vector<Cell> cells;
    for (int T : Ts) {
        for (int t : grid.t) {
            for (std::size_t r : rs) {
                for (int N : Ns) {
                    for (int k : ks) {
                        cells.push_back(Cell{grid.metric, grid.strategy, T, t, N, k, r,
                                             grid.trials, grid.seed, grid.distance_m,
                                             grid.timing_tolerance_s, grid.measurement_grid});
                    }
                }
            }
        }
    }
    if (cells.empty()) {
        throw std::invalid_argument("sweep: empty parameter grid");
    }

    std::vector<SweepRow> rows(cells.size());
    std::vector<std::uint8_t> done(cells.size(), 0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto it = existing.find(to_hex64(fnv1a64(cells[i].canonical())));
        if (it != existing.end()) {
            rows[i] = it->second;
            done[i] = 1;
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            if (done[i]) continue;
            rows[i] = compute_cell(cells[i]);
        }
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string sweep_csv_header() {
    return "config_hash,metric,strategy,T,t,r,N,k,trials,seed,value,detail\n";
}

std::string sweep_csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << row.config_hash << ',' << row.metric << ',' << row.strategy << ',' << row.T << ','
       << row.t << ',' << row.r << ',' << row.N << ',' << row.copies << ',' << row.trials << ','
       << row.seed << ',' << format_double(row.value) << ',' << row.detail << '\n';
    return os.str();
}

std::map<std::string, SweepRow> parse_sweep_csv(std::string_view text) {
    std::map<std::string, SweepRow> rows;
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line.rfind("config_hash", 0) == 0) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() < 11) continue;
        SweepRow row;
        row.config_hash = fields[0];
        row.metric = fields[1];
        row.strategy = fields[2];
        row.T = std::stoi(fields[3]);
        row.t = std::stoi(fields[4]);
        row.r = static_cast<std::size_t>(std::stoull(fields[5]));
        row.N = std::stoi(fields[6]);
        row.copies = std::stoi(fields[7]);
        row.trials = std::stoull(fields[8]);
        row.seed = std::stoull(fields[9]);
        row.value = std::stod(fields[10]);
        row.detail = fields.size() > 11 ? fields[11] : "";
        rows[row.config_hash] = row;
    }
    return rows;
}

}  // namespace qpv
