// fracfp command-line driver: config-driven solves, the named reproduction
// experiments, and the convergence / model-gap studies.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracfp/fracfp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw fracfp::ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw fracfp::ConfigError("empty list: '" + csv + "'");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(csv)) out.push_back(static_cast<std::size_t>(v));
    return out;
}

std::string alpha_label(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", a);
    return buf;
}

fracfp::RunConfig experiment_base(bool full) {
    fracfp::RunConfig cfg; // baseline defaults are the subdiffusion setup
    cfg.nx = full ? 20480 : 2048;
    return cfg;
}

void report_line(const std::string& label, const fracfp::RunReport& rep) {
    double drift = 0.0;
    if (!rep.records.empty()) {
        const double m0 = rep.records.front().mass;
        for (const auto& r : rep.records) drift = std::max(drift, std::abs(r.mass - m0));
    }
    std::cout << label << ": " << rep.records.size() << " steps in " << rep.wall_seconds
              << " s, inter-step mass drift " << drift << "\n";
}

int cmd_solve(const std::string& config_path, const std::string& out_override) {
    fracfp::RunConfig cfg = fracfp::parse_config(read_file(config_path));
    if (!out_override.empty()) cfg.output_dir = out_override;
    const fracfp::ProblemSpec spec = fracfp::to_problem_spec(cfg);
    const fracfp::RunReport rep = fracfp::run(spec);
    report_line("solve", rep);

    const std::filesystem::path dir(cfg.output_dir);
    fracfp::export_solution(rep.history, spec.grid, spec.tmesh, cfg.snapshot_times,
                            dir / "solution.csv");
    fracfp::write_diagnostics_json(rep, spec, dir / "diagnostics.json");
    std::cout << "wrote " << (dir / "solution.csv").string() << ", "
              << (dir / "diagnostics.json").string() << "\n";
    return kExitOk;
}

int cmd_experiment(const std::string& name, bool full, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    fracfp::RunConfig base = experiment_base(full);
    base.output_dir = out_dir;

    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    const auto add_diag = [&diagnostics](const std::string& label, const fracfp::RunReport& rep,
                                         const fracfp::ProblemSpec& spec) {
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        const fracfp::TriDiagMatrix M = fracfp::assemble_mass(spec.grid);
        const fracfp::StepRecord init =
            fracfp::detail::make_record(spec, M, rep.history.at(0), 0, 0.0);
        const auto push = [&steps](const fracfp::StepRecord& r) {
            steps.push_back({{"n", r.n},
                             {"t", r.t},
                             {"mass", r.mass},
                             {"l2_norm", r.l2_norm},
                             {"max_value", r.max_value},
                             {"min_value", r.min_value}});
        };
        push(init);
        for (const auto& r : rep.records) push(r);
        diagnostics[label] = std::move(steps);
    };

    if (name == "example1" || name == "example2") {
        base.force_kind =
            (name == "example2") ? fracfp::ForceKind::SinTPlusX : fracfp::ForceKind::Zero;
        for (double a : {0.25, 0.5, 0.75, 1.0}) {
            base.alpha = a;
            const fracfp::ProblemSpec spec = fracfp::to_problem_spec(base);
            const fracfp::RunReport rep = fracfp::run(spec);
            const std::string label = "alpha=" + alpha_label(a);
            report_line(name + " " + label, rep);
            fracfp::export_solution(rep.history, spec.grid, spec.tmesh, base.snapshot_times,
                                    dir / (name + "_alpha_" + alpha_label(a) + ".csv"));
            add_diag(label, rep, spec);
        }
    } else if (name == "example3") {
        base.force_kind = fracfp::ForceKind::SinTPlusX;
        const std::vector<double> times{0.02, 0.045, 0.08};
        std::vector<fracfp::GapRecord> gaps;
        for (double a : {0.25, 0.75, 1.0}) {
            base.alpha = a;
            base.variant = fracfp::ModelVariant::RiemannLiouville;
            fracfp::ProblemSpec spec_rl = fracfp::to_problem_spec(base);
            base.variant = fracfp::ModelVariant::CaputoLeft;
            fracfp::ProblemSpec spec_cl = fracfp::to_problem_spec(base);

            const fracfp::RunReport rep_rl = fracfp::run(spec_rl);
            const fracfp::RunReport rep_cl = fracfp::run(spec_cl);
            const std::string label = "alpha=" + alpha_label(a);
            report_line("example3 riemann_liouville " + label, rep_rl);
            report_line("example3 caputo_left " + label, rep_cl);

            for (double t : times) {
                const std::size_t n = fracfp::nearest_node_index(spec_rl.tmesh, t);
                double gap = 0.0;
                for (std::size_t i = 0; i < spec_rl.grid.num_nodes(); ++i)
                    gap = std::max(gap,
                                   std::abs(rep_rl.history.at(n)[i] - rep_cl.history.at(n)[i]));
                gaps.push_back(fracfp::GapRecord{a, spec_rl.tmesh.nodes[n], gap});
            }

            fracfp::export_solution(rep_rl.history, spec_rl.grid, spec_rl.tmesh, times,
                                    dir / ("example3_riemann_liouville_alpha_" + alpha_label(a) +
                                           ".csv"));
            fracfp::export_solution(rep_cl.history, spec_cl.grid, spec_cl.tmesh, times,
                                    dir / ("example3_caputo_left_alpha_" + alpha_label(a) +
                                           ".csv"));
            add_diag("riemann_liouville " + label, rep_rl, spec_rl);
            add_diag("caputo_left " + label, rep_cl, spec_cl);
        }
        fracfp::write_gap_csv(gaps, dir / "example3_gaps.csv");
        std::cout << "wrote " << (dir / "example3_gaps.csv").string() << "\n";
    } else {
        throw fracfp::ConfigError("unknown experiment '" + name + "'");
    }

    const std::filesystem::path diag_path = dir / (name + "_diagnostics.json");
    std::ofstream out = fracfp::detail::open_for_write(diag_path);
    out << diagnostics.dump(2) << "\n";
    if (!out) throw fracfp::IoError("write failed: " + diag_path.string());
    std::cout << "wrote " << diag_path.string() << "\n";
    return kExitOk;
}

int cmd_study_convergence(const std::string& config_path, const std::string& levels_csv) {
    fracfp::RunConfig cfg =
        config_path.empty() ? fracfp::RunConfig{} : fracfp::parse_config(read_file(config_path));
    const std::vector<std::size_t> levels = parse_size_list(levels_csv);
    const fracfp::ProblemSpec base = fracfp::to_problem_spec(cfg);
    const fracfp::ErrorTable table = fracfp::convergence_study(base, levels);
    for (const auto& row : table.rows) {
        std::cout << "N=" << row.resolution << " error=" << row.error;
        if (row.observed_order) std::cout << " order=" << *row.observed_order;
        std::cout << "\n";
    }
    fracfp::write_error_table_csv(table, std::filesystem::path(cfg.output_dir) /
                                             "error_table.csv");
    std::cout << "wrote " << (std::filesystem::path(cfg.output_dir) / "error_table.csv").string()
              << "\n";
    return kExitOk;
}

int cmd_study_gap(const std::string& alphas_csv, const std::string& times_csv,
                  const std::string& config_path, const std::string& out_dir) {
    const std::vector<double> alphas = parse_double_list(alphas_csv);
    const std::vector<double> times = parse_double_list(times_csv);

    fracfp::RunConfig cfg;
    if (!config_path.empty()) {
        cfg = fracfp::parse_config(read_file(config_path));
    } else {
        cfg = experiment_base(false);
        cfg.force_kind = fracfp::ForceKind::SinTPlusX;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    const fracfp::ProblemSpec tmpl = fracfp::to_problem_spec(cfg);
    const std::vector<fracfp::GapRecord> gaps = fracfp::model_gap_study(alphas, tmpl, times);
    for (const auto& g : gaps)
        std::cout << "alpha=" << g.alpha << " t=" << g.t << " gap=" << g.gap << "\n";
    fracfp::write_gap_csv(gaps, std::filesystem::path(cfg.output_dir) / "gap.csv");
    std::cout << "wrote " << (std::filesystem::path(cfg.output_dir) / "gap.csv").string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracfp: nonuniform-L1 / P1-FEM solver for the time-fractional "
                 "Fokker-Planck equation with space-time dependent forces"};
    app.require_subcommand(1);

    std::string config_path, out_dir, levels_csv = "25,50,100,200";
    std::string alphas_csv, times_csv = "0.02,0.045,0.08", experiment_name;
    bool full = false;

    CLI::App* solve = app.add_subcommand("solve", "run one configured problem");
    solve->add_option("--config", config_path, "JSON config path")->required();
    solve->add_option("--out", out_dir, "override output directory");

    CLI::App* experiment =
        app.add_subcommand("experiment", "run a named reproduction experiment");
    experiment->add_option("name", experiment_name, "example1 | example2 | example3")->required();
    experiment->add_flag("--full", full, "full spatial resolution (nx = 20480)");
    experiment->add_option("--out", out_dir, "output directory")->default_val("out");

    CLI::App* study = app.add_subcommand("study", "convergence and model-gap studies");
    study->require_subcommand(1);
    CLI::App* conv = study->add_subcommand("convergence", "temporal convergence table");
    conv->add_option("--config", config_path, "JSON config path for the base problem");
    conv->add_option("--levels", levels_csv, "comma-separated step counts");
    CLI::App* gap = study->add_subcommand("gap", "distance between the two model variants");
    gap->add_option("--alphas", alphas_csv, "comma-separated fractional orders")->required();
    gap->add_option("--times", times_csv, "comma-separated sample times");
    gap->add_option("--config", config_path, "JSON config path for the template problem");
    gap->add_option("--out", out_dir, "override output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(config_path, out_dir);
        if (experiment->parsed()) return cmd_experiment(experiment_name, full, out_dir);
        if (conv->parsed()) return cmd_study_convergence(config_path, levels_csv);
        if (gap->parsed()) return cmd_study_gap(alphas_csv, times_csv, config_path, out_dir);
        std::cerr << "no subcommand\n";
        return kExitConfig;
    } catch (const fracfp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fracfp::NonConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const fracfp::SingularSystem& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const fracfp::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    }
}
