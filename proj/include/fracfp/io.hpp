#pragma once

// Plot-ready exports: solution CSVs with nearest-node snapshot columns,
// per-step diagnostics JSON, error tables and gap tables.  All floating
// point values are rendered with 17 significant digits, so identical runs
// produce byte-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracfp/models.hpp"
#include "fracfp/stepper.hpp"
#include "fracfp/verify.hpp"

namespace fracfp {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

} // namespace detail

/// Snapshot columns at the mesh nodes nearest the requested times (no
/// temporal interpolation: the scheme defines the solution at nodes only).
/// Two requests mapping to the same node produce a single column and a
/// warning.  The chosen node times are recorded in a leading '#' comment.
/// Returns the chosen node indices.
inline std::vector<std::size_t> export_solution(const History& history, const SpaceGrid& grid,
                                                const GradedTimeMesh& tmesh,
                                                std::span<const double> snapshot_times,
                                                const std::filesystem::path& path) {
    if (history.levels() != tmesh.N + 1)
        throw std::invalid_argument("export_solution: history does not match time mesh");

    std::vector<std::size_t> chosen;
    std::string policy = "# snapshot policy: nearest mesh node;";
    for (double t : snapshot_times) {
        if (t < 0.0 || t > tmesh.T)
            throw std::invalid_argument("export_solution: snapshot time outside [0, T]");
        const std::size_t n = nearest_node_index(tmesh, t);
        bool duplicate = false;
        for (std::size_t c : chosen) duplicate |= (c == n);
        if (duplicate) {
            std::cerr << "warning: snapshot request t=" << t << " maps to already-chosen node n="
                      << n << "; column skipped\n";
            continue;
        }
        chosen.push_back(n);
        policy += " requested=" + detail::fmt17(t) + " -> n=" + std::to_string(n) +
                  " t=" + detail::fmt17(tmesh.nodes[n]) + ";";
    }

    std::ofstream out = detail::open_for_write(path);
    out << policy << "\n";
    out << "x";
    for (std::size_t n : chosen) out << ",t=" << detail::fmt17(tmesh.nodes[n]);
    out << "\n";
    for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
        out << detail::fmt17(grid.nodes[i]);
        for (std::size_t n : chosen) out << "," << detail::fmt17(history.at(n)[i]);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
    return chosen;
}

/// Array of step records, including a level-0 record so conservation can be
/// checked from the file alone.
inline void write_diagnostics_json(const RunReport& report, const ProblemSpec& spec,
                                   const std::filesystem::path& path) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();

    const TriDiagMatrix M = assemble_mass(spec.grid);
    const StepRecord initial =
        detail::make_record(spec, M, report.history.at(0), 0, spec.tmesh.nodes[0]);
    const auto push = [&steps](const StepRecord& r) {
        steps.push_back({{"n", r.n},
                         {"t", r.t},
                         {"mass", r.mass},
                         {"l2_norm", r.l2_norm},
                         {"max_value", r.max_value},
                         {"min_value", r.min_value}});
    };
    push(initial);
    for (const StepRecord& r : report.records) push(r);

    std::ofstream out = detail::open_for_write(path);
    out << steps.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

/// CSV schema: resolution,error,order (order blank on the first row).
inline void write_error_table_csv(const ErrorTable& table, const std::filesystem::path& path) {
    std::ofstream out = detail::open_for_write(path);
    out << "resolution,error,order\n";
    for (const ErrorTable::Row& row : table.rows) {
        out << row.resolution << "," << detail::fmt17(row.error) << ",";
        if (row.observed_order) out << detail::fmt17(*row.observed_order);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

/// CSV schema: alpha,t,gap.
inline void write_gap_csv(std::span<const GapRecord> records,
                          const std::filesystem::path& path) {
    std::ofstream out = detail::open_for_write(path);
    out << "alpha,t,gap\n";
    for (const GapRecord& r : records)
        out << detail::fmt17(r.alpha) << "," << detail::fmt17(r.t) << ","
            << detail::fmt17(r.gap) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace fracfp
