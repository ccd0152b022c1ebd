#include "ordinal/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "ordinal/errors.hpp"

namespace ordinal {

void GridSpec::validate() const {
    if (links.empty() || etas.empty() || batch_sizes.empty())
        throw DomainError("GridSpec: factor sets must be nonempty");
    if (runs_per_cell < 1) throw DomainError("GridSpec: runs_per_cell must be >= 1");
    for (const auto& l : links)
        if (l != "nominal") link_from_string(l);  // throws on unknown names
    for (double e : etas)
        if (!(e > 0.0)) throw DomainError("GridSpec: learning rates must be > 0");
    for (int b : batch_sizes)
        if (b < 2) throw DomainError("GridSpec: batch sizes must be >= 2");
}

std::array<double, 7> GridRunRecord::metric_values() const {
    return {report.qwk_defined ? report.qwk : std::nan(""),
            report.ms,
            report.mae,
            report.ccr,
            report.top2,
            report.top3,
            report.one_off};
}

GridCellSummary summarize_cell(const std::vector<GridRunRecord>& cell_runs) {
    if (cell_runs.empty()) throw DomainError("summarize_cell: empty cell");
    GridCellSummary s;
    s.link = cell_runs.front().link;
    s.eta = cell_runs.front().eta;
    s.batch_size = cell_runs.front().batch_size;
    s.n_runs = static_cast<int>(cell_runs.size());
    for (const auto& run : cell_runs)
        if (run.diverged) ++s.n_diverged;

    for (std::size_t m = 0; m < kGridMetricNames.size(); ++m) {
        double sum = 0.0;
        int n = 0;
        for (const auto& run : cell_runs) {
            const double v = run.metric_values()[m];
            if (std::isfinite(v)) {
                sum += v;
                ++n;
            }
        }
        s.n_defined[m] = n;
        if (n == 0) {
            s.mean[m] = std::nan("");
            s.sd[m] = std::nan("");
            continue;
        }
        s.mean[m] = sum / n;
        double sq = 0.0;
        for (const auto& run : cell_runs) {
            const double v = run.metric_values()[m];
            if (std::isfinite(v)) sq += (v - s.mean[m]) * (v - s.mean[m]);
        }
        s.sd[m] = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
    }
    return s;
}

GridResult run_grid(const GridSpec& spec, const TrainingConfig& base_config,
                    const Splits& splits, int threads) {
    spec.validate();
    if (threads < 1) threads = 1;

    struct Cell {
        std::string link;
        double eta;
        int batch_size;
    };
    std::vector<Cell> cells;
    for (const auto& link : spec.links)
        for (double eta : spec.etas)
            for (int bs : spec.batch_sizes) cells.push_back({link, eta, bs});
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.link != b.link) return a.link < b.link;
        if (a.eta != b.eta) return a.eta < b.eta;
        return a.batch_size < b.batch_size;
    });

    GridResult result;
    result.runs.resize(cells.size() * static_cast<std::size_t>(spec.runs_per_cell));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= result.runs.size()) return;
            const Cell& cell = cells[job / spec.runs_per_cell];
            const int run_index = static_cast<int>(job % spec.runs_per_cell);

            GridRunRecord rec;
            rec.link = cell.link;
            rec.eta = cell.eta;
            rec.batch_size = cell.batch_size;
            rec.run_index = run_index;
            rec.seed = spec.base_seed + static_cast<std::uint64_t>(run_index);

            TrainingConfig config = base_config;
            config.link = cell.link == "nominal" ? std::nullopt
                                                 : std::optional(link_from_string(cell.link));
            config.eta0 = cell.eta;
            config.batch_size = cell.batch_size;
            config.seed = rec.seed;

            const TrainResult trained = train(config, splits.train, splits.val);
            rec.diverged = trained.history.diverged;
            rec.report = evaluate(trained.model, splits.test,
                                  trained.model.is_nominal() ? DecisionRule::Argmax
                                                             : DecisionRule::Interval);
            result.runs[job] = std::move(rec);
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto first = result.runs.begin() +
                           static_cast<std::ptrdiff_t>(c * spec.runs_per_cell);
        result.summary.push_back(
            summarize_cell(std::vector<GridRunRecord>(first, first + spec.runs_per_cell)));
    }
    return result;
}

namespace {

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string grid_runs_to_csv(const GridResult& result) {
    std::ostringstream out;
    out << "link,lr,batch_size,run,seed,diverged";
    for (const char* name : kGridMetricNames) out << "," << name;
    out << "\n";
    for (const auto& run : result.runs) {
        out << run.link << "," << full(run.eta) << "," << run.batch_size << "," << run.run_index
            << "," << run.seed << "," << (run.diverged ? 1 : 0);
        for (double v : run.metric_values())
            out << "," << (std::isfinite(v) ? full(v) : std::string("undefined"));
        out << "\n";
    }
    return out.str();
}

std::string grid_summary_to_csv(const GridResult& result) {
    std::ostringstream out;
    out << "link,lr,batch_size,runs,diverged";
    for (const char* name : kGridMetricNames)
        out << "," << name << "_mean," << name << "_sd," << name << "_n";
    out << "\n";
    for (const auto& cell : result.summary) {
        out << cell.link << "," << full(cell.eta) << "," << cell.batch_size << "," << cell.n_runs
            << "," << cell.n_diverged;
        for (std::size_t m = 0; m < kGridMetricNames.size(); ++m) {
            out << "," << (std::isfinite(cell.mean[m]) ? full(cell.mean[m]) : "undefined") << ","
                << (std::isfinite(cell.sd[m]) ? full(cell.sd[m]) : "undefined") << ","
                << cell.n_defined[m];
        }
        out << "\n";
    }
    return out.str();
}

std::string grid_table(const GridResult& result) {
    std::ostringstream out;
    out << "link,lr,batch_size";
    for (const char* name : kGridMetricNames) out << "," << name;
    out << "\n";
    for (const auto& cell : result.summary) {
        out << cell.link << "," << short6(cell.eta) << "," << cell.batch_size;
        for (std::size_t m = 0; m < kGridMetricNames.size(); ++m) {
            if (!std::isfinite(cell.mean[m])) {
                out << ",undefined";
            } else {
                out << "," << short6(cell.mean[m]) << "_" << short6(cell.sd[m]);
                if (cell.n_defined[m] == 1) out << "!";  // SD-of-one flag
            }
        }
        out << "\n";
    }
    return out.str();
}

void save_grid(const GridResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(out_dir / name, std::ios::binary);
        if (!out) throw DomainError(std::string("save_grid: cannot open ") + name);
        out << text;
    };
    write("runs.csv", grid_runs_to_csv(result));
    write("summary.csv", grid_summary_to_csv(result));
    write("table.csv", grid_table(result));
}

}  // namespace ordinal
