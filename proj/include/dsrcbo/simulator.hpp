#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsrcbo/scenario.hpp"
#include "dsrcbo/spatial.hpp"

namespace dsrcbo {

/// Four-way result of one tagged beaconing period. A period with both
/// overlap types classifies as Sync (detected first); the joint case is
/// tallied separately.
enum class Outcome { Suc, Sync, Hn, Exp };

std::string to_string(Outcome o);

struct PeriodRecord {
    int replication = 0;
    int period = 0;
    int k = 1;
    int counter_drawn = 0;
    Outcome outcome = Outcome::Exp;
    int slots_to_tx = -1; // transmission start slot; -1 when expired
    int n_cs = 0;         // measured carrier-sense neighbors of the tagged
    int n_hn = 0;         // measured annulus population
    long busy_observed = 0;
    long slots_observed = 0;
    bool joint_sync_hn = false;
};

struct OutcomeCounts {
    long suc = 0;
    long sync = 0;
    long hn = 0;
    long exp = 0;
    long attempts() const { return suc + sync + hn + exp; }
};

struct SimReport {
    double tau_hat = 0.0;
    double p_b_hat = 0.0;
    double p_exp_hat = 0.0;
    double pdr_hat = 0.0;
    double e_nbo_hat = 0.0;
    double se_tau = 0.0;
    double se_pdr = 0.0;
    double se_p_b = 0.0;
    OutcomeCounts counts;
    long joint_sync_hn = 0;
    std::map<int, long> irt_histogram;                    // nu -> count
    std::map<int, std::pair<long, long>> pdr_by_k;        // k -> (suc, periods)
    std::map<std::pair<int, int>, long> ncs_nhn_histogram; // (n_cs, n_hn) -> periods
    double mean_n_cs = 0.0;
    long total_periods = 0;
    std::uint64_t scenario_hash = 0;
};

/// One replication: fresh field, num_periods synchronized beaconing periods,
/// one tagged node per period. Deterministic in (scenario, replication_index).
std::vector<PeriodRecord> run_replication(const Scenario& scenario, int replication_index);

/// Periods over a caller-supplied field; the test hook behind run_replication.
std::vector<PeriodRecord> simulate_field(const Scenario& scenario, std::vector<VehicleNode> nodes,
                                         int replication_index);

/// All replications, optionally in parallel; records are returned in
/// replication order so results do not depend on the job count.
std::vector<PeriodRecord> run_all_replications(const Scenario& scenario, int jobs = 1);

SimReport estimate_metrics(const std::vector<PeriodRecord>& records, const Scenario& scenario);

SimReport run_simulation(const Scenario& scenario, int jobs = 1);

/// Outcome log stream: "replication,period,k,counter_drawn,outcome,slots_to_tx".
void write_outcome_log(const std::vector<PeriodRecord>& records, std::ostream& os);

} // namespace dsrcbo
