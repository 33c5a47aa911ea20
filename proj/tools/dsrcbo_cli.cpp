// Command-line front end: analytic points, Monte Carlo runs, parameter
// sweeps, the acceptance suite, and transition-matrix dumps.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsrcbo/accept.hpp"
#include "dsrcbo/allocator.hpp"
#include "dsrcbo/analytic.hpp"
#include "dsrcbo/compare.hpp"
#include "dsrcbo/config.hpp"
#include "dsrcbo/simulator.hpp"
#include "dsrcbo/sweep.hpp"

namespace {

using nlohmann::json;

dsrcbo::Config load_config(const std::string& path, const std::vector<std::string>& sets) {
    dsrcbo::Config cfg =
        path.empty() ? dsrcbo::parse_config_text("", "<defaults>") : dsrcbo::parse_config(path);
    for (const auto& s : sets)
        dsrcbo::apply_override(cfg, s);
    dsrcbo::validate_config(cfg);
    return cfg;
}

json report_to_json(const dsrcbo::AnalyticReport& r) {
    json j;
    j["n_cs"] = r.n_cs;
    j["tau"] = r.tau;
    j["tau_decreasing"] = r.tau_decreasing;
    j["tau_flat"] = r.tau_flat;
    j["p_b"] = r.p_b;
    j["p_exp"] = r.p_exp;
    j["e_nbo"] = r.e_nbo;
    j["p_sync"] = r.p_sync;
    j["p_hn"] = r.p_hn;
    j["p_col"] = r.p_col;
    j["pdr"] = r.pdr;
    j["irt_pmf"] = r.irt;
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["converged"] = r.converged;
    j["p_ncs_positive"] = r.p_ncs_positive;
    return j;
}

json report_to_json(const dsrcbo::SimReport& r) {
    json j;
    j["tau_hat"] = r.tau_hat;
    j["p_b_hat"] = r.p_b_hat;
    j["p_exp_hat"] = r.p_exp_hat;
    j["pdr_hat"] = r.pdr_hat;
    j["e_nbo_hat"] = r.e_nbo_hat;
    j["se_tau"] = r.se_tau;
    j["se_pdr"] = r.se_pdr;
    j["se_p_b"] = r.se_p_b;
    j["counts"] = {{"suc", r.counts.suc},
                   {"sync", r.counts.sync},
                   {"hn", r.counts.hn},
                   {"exp", r.counts.exp}};
    j["joint_sync_hn"] = r.joint_sync_hn;
    j["total_periods"] = r.total_periods;
    j["mean_n_cs"] = r.mean_n_cs;
    json irt = json::object();
    for (const auto& [nu, count] : r.irt_histogram)
        irt[std::to_string(nu)] = count;
    j["irt_histogram"] = irt;
    json byk = json::object();
    for (const auto& [k, sc] : r.pdr_by_k)
        byk[std::to_string(k)] = {{"suc", sc.first}, {"periods", sc.second}};
    j["pdr_by_k"] = byk;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"risk-adaptive DSRC broadcast backoff: analytic engine and slot simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "config file (see print-defaults)");
    app.add_option("--set", sets, "override config keys, key=value or sweep.key=value");

    auto* cmd_defaults = app.add_subcommand("print-defaults", "print every key with its default");

    auto* cmd_analyze = app.add_subcommand("analyze", "closed-form metrics for one point");
    int analyze_ncs = -1;
    cmd_analyze->add_option("--n-cs", analyze_ncs, "neighborhood size; default from config");

    auto* cmd_sim = app.add_subcommand("simulate", "run the slot-level Monte Carlo engine");
    std::string log_path;
    bool do_compare = false;
    int jobs = 0;
    cmd_sim->add_option("--log", log_path, "write the per-period outcome log CSV");
    cmd_sim->add_flag("--compare", do_compare, "also run the analytic engine and diff");
    cmd_sim->add_option("--jobs", jobs, "worker threads (0 = hardware)");

    auto* cmd_sweep = app.add_subcommand("sweep", "run the configured sweep, emit CSV");
    std::string out_prefix = "sweep";
    int sweep_jobs = 0;
    cmd_sweep->add_option("--out-prefix", out_prefix,
                          "writes <prefix>.csv and <prefix>_irt.csv");
    cmd_sweep->add_option("--jobs", sweep_jobs, "worker threads (0 = hardware)");

    auto* cmd_accept = app.add_subcommand("accept", "run an acceptance suite");
    std::string suite = "quick";
    double tol_scale = 1.0;
    int accept_jobs = 0;
    cmd_accept->add_option("--suite", suite, "quick | full | analytic");
    cmd_accept->add_option("--tol-scale", tol_scale,
                           "scales every tolerance; 0 forces failures (self-test)");
    cmd_accept->add_option("--jobs", accept_jobs, "worker threads (0 = hardware)");

    auto* cmd_dump = app.add_subcommand("dump-chain", "dense transition-matrix dump");
    int dump_k = 1;
    double dump_pb = 0.0;
    std::string dump_out;
    cmd_dump->add_option("--k", dump_k, "risk category selecting the allocation branch");
    cmd_dump->add_option("--p-b", dump_pb, "busy probability");
    cmd_dump->add_option("--out", dump_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_defaults->parsed()) {
            dsrcbo::print_defaults(std::cout);
            return 0;
        }

        dsrcbo::Config cfg = load_config(config_path, sets);

        if (cmd_analyze->parsed()) {
            const auto rep = analyze_ncs >= 0 ? dsrcbo::analyze_point(cfg.scenario, analyze_ncs)
                                              : dsrcbo::analyze_point(cfg.scenario);
            std::cout << report_to_json(rep).dump(2) << "\n";
            return rep.converged ? 0 : 3;
        }

        if (cmd_sim->parsed()) {
            const auto records = dsrcbo::run_all_replications(cfg.scenario, jobs);
            const auto sim = dsrcbo::estimate_metrics(records, cfg.scenario);
            if (!log_path.empty()) {
                std::ofstream log(log_path);
                if (!log)
                    throw std::runtime_error("cannot open log file " + log_path);
                dsrcbo::write_outcome_log(records, log);
            }
            json out;
            out["sim"] = report_to_json(sim);
            if (do_compare) {
                const auto ana = dsrcbo::analyze_mixture(cfg.scenario, sim.ncs_nhn_histogram);
                const auto table = dsrcbo::compare_report(ana, sim);
                out["analytic"] = report_to_json(ana);
                json rows = json::array();
                for (const auto& r : table.rows)
                    rows.push_back({{"metric", r.metric},
                                    {"analytic", r.analytic},
                                    {"simulated", r.simulated},
                                    {"abs_dev", r.abs_dev},
                                    {"tolerance", r.tolerance},
                                    {"pass", r.pass}});
                out["deviations"] = rows;
                out["all_pass"] = table.all_pass();
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (cmd_sweep->parsed()) {
            if (!cfg.sweep)
                throw dsrcbo::ConfigError("sweep requires a [sweep] section or sweep.* overrides");
            const auto result = dsrcbo::run_sweep(cfg.scenario, *cfg.sweep, sweep_jobs);
            std::ofstream csv(out_prefix + ".csv");
            if (!csv)
                throw std::runtime_error("cannot open " + out_prefix + ".csv");
            dsrcbo::write_sweep_csv(result, csv);
            std::ofstream irt(out_prefix + "_irt.csv");
            if (!irt)
                throw std::runtime_error("cannot open " + out_prefix + "_irt.csv");
            dsrcbo::write_irt_csv(result, irt);
            std::cout << "wrote " << out_prefix << ".csv and " << out_prefix << "_irt.csv ("
                      << result.rows.size() << " rows)\n";
            for (const auto& row : result.rows)
                if (row.status != "ok")
                    std::cerr << "warning: var=" << row.var << " " << row.allocator << "/"
                              << row.engine << " status=" << row.status << "\n";
            return 0;
        }

        if (cmd_accept->parsed()) {
            const auto report = dsrcbo::accept::run_suite(suite, tol_scale, accept_jobs, std::cout);
            return report.all_pass() ? 0 : 1;
        }

        if (cmd_dump->parsed()) {
            const auto chain =
                dsrcbo::build_transition_matrix(dump_k, dump_pb, cfg.scenario.mac, cfg.scenario.risk);
            if (dump_out.empty()) {
                chain.dump(std::cout);
            } else {
                std::ofstream out(dump_out);
                if (!out)
                    throw std::runtime_error("cannot open " + dump_out);
                chain.dump(out);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
