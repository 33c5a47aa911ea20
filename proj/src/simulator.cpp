#include "dsrcbo/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "dsrcbo/allocator.hpp"
#include "dsrcbo/rng.hpp"

namespace dsrcbo {

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::Suc: return "SUC";
    case Outcome::Sync: return "SYNC";
    case Outcome::Hn: return "HN";
    default: return "EXP";
    }
}

namespace {

struct Field {
    std::vector<VehicleNode> nodes;
    std::vector<AllocBranch> branch;
    std::vector<std::vector<int>> nbrs; // within r_cs, symmetric
    std::vector<int> tagged_pool;       // candidate tagged indices
};

double sqdist(const VehicleNode& a, const VehicleNode& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

void rebuild_geometry(Field& f, const Scenario& sc) {
    const int n = static_cast<int>(f.nodes.size());
    const double r2 = sc.r_cs_m * sc.r_cs_m;
    f.nbrs.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (sqdist(f.nodes[static_cast<std::size_t>(i)], f.nodes[static_cast<std::size_t>(j)]) <=
                r2) {
                f.nbrs[static_cast<std::size_t>(i)].push_back(j);
                f.nbrs[static_cast<std::size_t>(j)].push_back(i);
            }
    f.tagged_pool.clear();
    if (sc.tagged_selection == TaggedSelection::Central) {
        const double margin = 2.0 * sc.r_cs_m;
        const double d = sc.region.side_length_m;
        for (int i = 0; i < n; ++i) {
            const auto& v = f.nodes[static_cast<std::size_t>(i)];
            if (v.x >= margin && v.x <= d - margin && v.y >= margin && v.y <= d - margin)
                f.tagged_pool.push_back(i);
        }
    }
    if (f.tagged_pool.empty())
        for (int i = 0; i < n; ++i)
            f.tagged_pool.push_back(i);
}

int annulus_count(const Field& f, int tagged, double r_cs) {
    const auto& t = f.nodes[static_cast<std::size_t>(tagged)];
    const double r2 = r_cs * r_cs;
    const double r4 = 4.0 * r2;
    int n = 0;
    for (int j = 0; j < static_cast<int>(f.nodes.size()); ++j) {
        if (j == tagged)
            continue;
        const double d2 = sqdist(t, f.nodes[static_cast<std::size_t>(j)]);
        if (d2 > r2 && d2 <= r4)
            ++n;
    }
    return n;
}

} // namespace

std::vector<PeriodRecord> simulate_field(const Scenario& scenario, std::vector<VehicleNode> nodes,
                                         int replication_index) {
    scenario.validate();
    Field f;
    f.nodes = std::move(nodes);
    const int n = static_cast<int>(f.nodes.size());
    std::vector<PeriodRecord> records;
    if (n == 0)
        return records;

    f.branch.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        f.branch[static_cast<std::size_t>(i)] =
            scenario.allocator_mode == AllocatorMode::FlatOnly
                ? AllocBranch::Flat
                : branch_for_category(f.nodes[static_cast<std::size_t>(i)].risk_category,
                                      scenario.risk);
    rebuild_geometry(f, scenario);

    Rng rng(derive_seed(scenario.master_seed, static_cast<std::uint64_t>(replication_index), 2));

    const int L = scenario.mac.big_l_bcn_slots;
    const int l = scenario.mac.l_bcn_slots;
    std::vector<int> counter(static_cast<std::size_t>(n));
    std::vector<int> started(static_cast<std::size_t>(n));
    std::vector<int> busy_count(static_cast<std::size_t>(n));
    std::vector<int> pending;
    std::vector<int> starters;
    std::vector<std::vector<int>> ends_at(static_cast<std::size_t>(L + l + 1));

    records.reserve(static_cast<std::size_t>(scenario.num_periods));
    for (int period = 0; period < scenario.num_periods; ++period) {
        for (int i = 0; i < n; ++i)
            counter[static_cast<std::size_t>(i)] =
                sample_backoff(f.branch[static_cast<std::size_t>(i)], scenario.mac, rng);
        const int tagged =
            f.tagged_pool[rng.uniform_index(static_cast<std::uint64_t>(f.tagged_pool.size()))];

        std::fill(started.begin(), started.end(), -1);
        std::fill(busy_count.begin(), busy_count.end(), 0);
        for (auto& v : ends_at)
            v.clear();
        pending.clear();
        for (int i = 0; i < n; ++i)
            pending.push_back(i);

        PeriodRecord rec;
        rec.replication = replication_index;
        rec.period = period;
        rec.k = f.nodes[static_cast<std::size_t>(tagged)].risk_category;
        rec.counter_drawn = counter[static_cast<std::size_t>(tagged)];
        rec.n_cs = static_cast<int>(f.nbrs[static_cast<std::size_t>(tagged)].size());
        rec.n_hn = annulus_count(f, tagged, scenario.r_cs_m);

        int active = 0;
        for (int t = 0; t < L && (active > 0 || !pending.empty()); ++t) {
            for (int j : ends_at[static_cast<std::size_t>(t)]) {
                for (int nb : f.nbrs[static_cast<std::size_t>(j)])
                    --busy_count[static_cast<std::size_t>(nb)];
                --active;
            }
            // A node whose remaining slots cannot fit its countdown plus the
            // packet has expired.
            for (std::size_t p = 0; p < pending.size();) {
                const int i = pending[p];
                if (L - t < counter[static_cast<std::size_t>(i)] + l) {
                    pending[p] = pending.back();
                    pending.pop_back();
                } else {
                    ++p;
                }
            }
            // Starts are decided on the channel state carried into the slot,
            // so simultaneous starts (synchronized collisions) can happen.
            starters.clear();
            for (std::size_t p = 0; p < pending.size();) {
                const int i = pending[p];
                if (counter[static_cast<std::size_t>(i)] == 0 &&
                    busy_count[static_cast<std::size_t>(i)] == 0) {
                    starters.push_back(i);
                    pending[p] = pending.back();
                    pending.pop_back();
                } else {
                    ++p;
                }
            }
            for (int i : starters) {
                started[static_cast<std::size_t>(i)] = t;
                ends_at[static_cast<std::size_t>(t + l)].push_back(i);
                ++active;
                for (int nb : f.nbrs[static_cast<std::size_t>(i)])
                    ++busy_count[static_cast<std::size_t>(nb)];
            }
            // A start occupies the slot for everyone in range: frozen nodes
            // do not decrement.
            for (int i : pending) {
                const bool busy = busy_count[static_cast<std::size_t>(i)] > 0;
                if (i == tagged) {
                    ++rec.slots_observed;
                    if (busy)
                        ++rec.busy_observed;
                }
                if (!busy && counter[static_cast<std::size_t>(i)] > 0)
                    --counter[static_cast<std::size_t>(i)];
            }
        }

        const int s = started[static_cast<std::size_t>(tagged)];
        if (s < 0) {
            rec.outcome = Outcome::Exp;
        } else {
            rec.slots_to_tx = s;
            bool sync = false;
            for (int nb : f.nbrs[static_cast<std::size_t>(tagged)])
                if (started[static_cast<std::size_t>(nb)] == s) {
                    sync = true;
                    break;
                }
            bool hidden = false;
            const auto& tn = f.nodes[static_cast<std::size_t>(tagged)];
            const double r2 = scenario.r_cs_m * scenario.r_cs_m;
            for (int j = 0; j < n && !hidden; ++j) {
                if (j == tagged || started[static_cast<std::size_t>(j)] < 0)
                    continue;
                const double d2 = sqdist(tn, f.nodes[static_cast<std::size_t>(j)]);
                if (d2 > r2 && d2 <= 4.0 * r2) {
                    const int sj = started[static_cast<std::size_t>(j)];
                    if (sj < s + l && s < sj + l)
                        hidden = true;
                }
            }
            rec.joint_sync_hn = sync && hidden;
            rec.outcome = sync ? Outcome::Sync : (hidden ? Outcome::Hn : Outcome::Suc);
        }
        records.push_back(rec);

        if (scenario.mobility_dt_s > 0.0) {
            f.nodes = step_mobility(std::move(f.nodes), scenario.mobility_dt_s, scenario.region);
            rebuild_geometry(f, scenario);
        }
    }
    return records;
}

std::vector<PeriodRecord> run_replication(const Scenario& scenario, int replication_index) {
    scenario.validate();
    auto nodes = generate_ppp(
        scenario.region, scenario.density_per_m2,
        derive_seed(scenario.master_seed, static_cast<std::uint64_t>(replication_index), 0));
    nodes = assign_speeds(std::move(nodes), scenario.mean_speed, scenario.std_speed,
                          scenario.risk.speed_limit, scenario.risk,
                          derive_seed(scenario.master_seed,
                                      static_cast<std::uint64_t>(replication_index), 1));
    return simulate_field(scenario, std::move(nodes), replication_index);
}

std::vector<PeriodRecord> run_all_replications(const Scenario& scenario, int jobs) {
    scenario.validate();
    if (jobs <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        jobs = hc > 0 ? static_cast<int>(hc) : 1;
    }
    const int reps = scenario.num_replications;
    std::vector<std::vector<PeriodRecord>> per_rep(static_cast<std::size_t>(reps));
    if (jobs == 1 || reps == 1) {
        for (int r = 0; r < reps; ++r)
            per_rep[static_cast<std::size_t>(r)] = run_replication(scenario, r);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= reps)
                    return;
                per_rep[static_cast<std::size_t>(r)] = run_replication(scenario, r);
            }
        };
        std::vector<std::thread> pool;
        const int nthreads = std::min(jobs, reps);
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    std::vector<PeriodRecord> all;
    for (auto& v : per_rep) {
        all.insert(all.end(), v.begin(), v.end());
        v.clear();
    }
    return all;
}

SimReport estimate_metrics(const std::vector<PeriodRecord>& records, const Scenario& scenario) {
    SimReport rep;
    rep.scenario_hash = scenario.hash();
    rep.total_periods = static_cast<long>(records.size());
    if (records.empty())
        return rep;

    long busy = 0, observed = 0, transmitted = 0;
    double nbo_sum = 0.0;
    double ncs_sum = 0.0;
    int cur_rep = records.front().replication;
    int last_success = -1;
    for (const auto& r : records) {
        switch (r.outcome) {
        case Outcome::Suc: ++rep.counts.suc; break;
        case Outcome::Sync: ++rep.counts.sync; break;
        case Outcome::Hn: ++rep.counts.hn; break;
        case Outcome::Exp: ++rep.counts.exp; break;
        }
        if (r.joint_sync_hn)
            ++rep.joint_sync_hn;
        busy += r.busy_observed;
        observed += r.slots_observed;
        if (r.slots_to_tx >= 0) {
            ++transmitted;
            nbo_sum += r.slots_to_tx;
        }
        ncs_sum += r.n_cs;
        auto& by_k = rep.pdr_by_k[r.k];
        ++by_k.second;
        if (r.outcome == Outcome::Suc)
            ++by_k.first;
        ++rep.ncs_nhn_histogram[{r.n_cs, r.n_hn}];

        // Inter-reception gaps restart per replication; the stream opens on
        // a success so the first gap is period_index + 1.
        if (r.replication != cur_rep) {
            cur_rep = r.replication;
            last_success = -1;
        }
        if (r.outcome == Outcome::Suc) {
            ++rep.irt_histogram[r.period - last_success];
            last_success = r.period;
        }
    }
    const double total = static_cast<double>(rep.total_periods);
    rep.tau_hat = static_cast<double>(transmitted) / total;
    rep.p_exp_hat = 1.0 - rep.tau_hat;
    rep.p_b_hat = observed > 0 ? static_cast<double>(busy) / static_cast<double>(observed) : 0.0;
    rep.pdr_hat = static_cast<double>(rep.counts.suc) / total;
    rep.e_nbo_hat = transmitted > 0 ? nbo_sum / static_cast<double>(transmitted) : 0.0;
    rep.mean_n_cs = ncs_sum / total;
    rep.se_tau = std::sqrt(rep.tau_hat * (1.0 - rep.tau_hat) / total);
    rep.se_pdr = std::sqrt(rep.pdr_hat * (1.0 - rep.pdr_hat) / total);
    if (observed > 0)
        rep.se_p_b =
            std::sqrt(rep.p_b_hat * (1.0 - rep.p_b_hat) / static_cast<double>(observed));
    return rep;
}

SimReport run_simulation(const Scenario& scenario, int jobs) {
    return estimate_metrics(run_all_replications(scenario, jobs), scenario);
}

void write_outcome_log(const std::vector<PeriodRecord>& records, std::ostream& os) {
    os << "replication,period,k,counter_drawn,outcome,slots_to_tx\n";
    for (const auto& r : records)
        os << r.replication << ',' << r.period << ',' << r.k << ',' << r.counter_drawn << ','
           << to_string(r.outcome) << ',' << r.slots_to_tx << '\n';
}

} // namespace dsrcbo
