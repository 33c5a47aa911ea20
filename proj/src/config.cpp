#include "dsrcbo/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace dsrcbo {

std::string to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::NCs: return "n_cs";
    case SweepVariable::Cw: return "cw";
    case SweepVariable::Sigma: return "sigma";
    default: return "density";
    }
}

std::string to_string(SweepEngines e) {
    switch (e) {
    case SweepEngines::Analytic: return "analytic";
    case SweepEngines::Simulate: return "simulate";
    default: return "both";
    }
}

void SweepSpec::validate() const {
    if (values.empty())
        throw ConfigError("sweep values must be nonempty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw ConfigError("sweep values must be strictly increasing");
    if (!run_proposed && !run_flat)
        throw ConfigError("sweep allocators must name at least one of proposed, flat");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw ConfigError(os.str());
}

struct Parser {
    std::string origin;
    std::map<std::string, int> seen; // "section.key" -> first line

    double to_double(const std::string& v, int line) const {
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            fail(origin, line, "malformed number '" + v + "'");
        return d;
    }
    long long to_int(const std::string& v, int line) const {
        char* end = nullptr;
        const long long i = std::strtoll(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0')
            fail(origin, line, "malformed integer '" + v + "'");
        return i;
    }

    void note_duplicate(const std::string& section, const std::string& key, int line) {
        const std::string id = section + "." + key;
        auto [it, inserted] = seen.emplace(id, line);
        if (!inserted)
            fail(origin, line,
                 "duplicate key '" + key + "' (first set at line " + std::to_string(it->second) +
                     ")");
    }

    void set_scenario(Scenario& sc, const std::string& key, const std::string& value, int line) {
        const auto enum_error = [&](const std::string& allowed) {
            fail(origin, line, "key '" + key + "' must be one of " + allowed);
        };
        if (key == "side_length") sc.region.side_length_m = to_double(value, line);
        else if (key == "density") sc.density_per_m2 = to_double(value, line);
        else if (key == "r_cs") sc.r_cs_m = to_double(value, line);
        else if (key == "cw") sc.mac.cw = static_cast<int>(to_int(value, line));
        else if (key == "l_bcn") sc.mac.l_bcn_slots = static_cast<int>(to_int(value, line));
        else if (key == "L_bcn") sc.mac.big_l_bcn_slots = static_cast<int>(to_int(value, line));
        else if (key == "r_decay") sc.mac.r_decay = to_double(value, line);
        else if (key == "K") sc.risk.num_categories = static_cast<int>(to_int(value, line));
        else if (key == "Q") sc.risk.step_size = to_double(value, line);
        else if (key == "sigma") {
            sc.risk.sigma = to_double(value, line);
            sc.std_speed = sc.risk.sigma;
        } else if (key == "v_L") sc.risk.speed_limit = to_double(value, line);
        else if (key == "mu_speed") sc.mean_speed = to_double(value, line);
        else if (key == "num_periods") sc.num_periods = static_cast<int>(to_int(value, line));
        else if (key == "num_replications")
            sc.num_replications = static_cast<int>(to_int(value, line));
        else if (key == "master_seed")
            sc.master_seed = static_cast<std::uint64_t>(to_int(value, line));
        else if (key == "allocator") {
            if (value == "proposed") sc.allocator_mode = AllocatorMode::Proposed;
            else if (value == "flat-only" || value == "flat_only")
                sc.allocator_mode = AllocatorMode::FlatOnly;
            else enum_error("proposed, flat-only");
        } else if (key == "division_rule") {
            if (value == "high_risk_decreasing" || value == "eq8")
                sc.risk.division_rule = DivisionRule::HighRiskDecreasing;
            else if (value == "low_risk_decreasing" || value == "eq9_labels")
                sc.risk.division_rule = DivisionRule::LowRiskDecreasing;
            else enum_error("high_risk_decreasing (alias eq8), low_risk_decreasing (alias eq9_labels)");
        } else if (key == "tau_model") {
            if (value == "budget" || value == "truncated") sc.tau_model = TauModel::Budget;
            else if (value == "chain") sc.tau_model = TauModel::Chain;
            else if (value == "untruncated") sc.tau_model = TauModel::Untruncated;
            else enum_error("budget (alias truncated), chain, untruncated");
        } else if (key == "busy_model") {
            if (value == "occupancy") sc.busy_model = BusyModel::Occupancy;
            else if (value == "binomial_period") sc.busy_model = BusyModel::BinomialPeriod;
            else if (value == "binomial_slot") sc.busy_model = BusyModel::BinomialSlot;
            else enum_error("occupancy, binomial_period, binomial_slot");
        } else if (key == "tagged_selection") {
            if (value == "uniform") sc.tagged_selection = TaggedSelection::Uniform;
            else if (value == "central") sc.tagged_selection = TaggedSelection::Central;
            else enum_error("uniform, central");
        } else if (key == "mobility_dt") sc.mobility_dt_s = to_double(value, line);
        else if (key == "n_cs") sc.analytic_n_cs = static_cast<int>(to_int(value, line));
        else if (key == "tol") sc.fp_tol = to_double(value, line);
        else if (key == "max_iter") sc.fp_max_iter = static_cast<int>(to_int(value, line));
        else if (key == "irt_max_nu") sc.irt_max_nu = static_cast<int>(to_int(value, line));
        else fail(origin, line, "unknown key '" + key + "' in [scenario]");
    }

    void set_sweep(SweepSpec& sw, const std::string& key, const std::string& value, int line) {
        if (key == "variable") {
            if (value == "n_cs") sw.variable = SweepVariable::NCs;
            else if (value == "cw") sw.variable = SweepVariable::Cw;
            else if (value == "sigma") sw.variable = SweepVariable::Sigma;
            else if (value == "density") sw.variable = SweepVariable::Density;
            else fail(origin, line, "sweep variable must be one of n_cs, cw, sigma, density");
        } else if (key == "values") {
            sw.values.clear();
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (tok.empty())
                    fail(origin, line, "empty entry in sweep values");
                sw.values.push_back(to_double(tok, line));
            }
            if (sw.values.empty())
                fail(origin, line, "sweep values must be nonempty");
        } else if (key == "engines") {
            if (value == "analytic") sw.engines = SweepEngines::Analytic;
            else if (value == "simulate") sw.engines = SweepEngines::Simulate;
            else if (value == "both") sw.engines = SweepEngines::Both;
            else fail(origin, line, "engines must be one of analytic, simulate, both");
        } else if (key == "allocators") {
            sw.run_proposed = false;
            sw.run_flat = false;
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (tok == "proposed") sw.run_proposed = true;
                else if (tok == "flat") sw.run_flat = true;
                else fail(origin, line, "allocators entries must be proposed or flat");
            }
        } else {
            fail(origin, line, "unknown key '" + key + "' in [sweep]");
        }
    }
};

Config parse_stream(std::istream& in, const std::string& origin) {
    Config cfg;
    if (const char* env = std::getenv("DSRCBO_SEED"))
        cfg.scenario.master_seed = std::strtoull(env, nullptr, 10);

    Parser parser{origin, {}};
    std::string section = "scenario";
    bool have_sweep = false;
    SweepSpec sweep;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty())
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                fail(origin, line, "malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "scenario" && section != "sweep")
                fail(origin, line, "unknown section [" + section + "]");
            if (section == "sweep")
                have_sweep = true;
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            fail(origin, line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            fail(origin, line, "empty key");
        if (value.empty())
            fail(origin, line, "empty value for key '" + key + "'");
        parser.note_duplicate(section, key, line);
        if (section == "scenario")
            parser.set_scenario(cfg.scenario, key, value, line);
        else
            parser.set_sweep(sweep, key, value, line);
    }

    try {
        cfg.scenario.validate();
        if (have_sweep) {
            sweep.validate();
            cfg.sweep = sweep;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

} // namespace

Config parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_stream(in, path);
}

Config parse_config_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return parse_stream(in, origin);
}

void apply_override(Config& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key=value: '" + assignment + "'");
    std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    Parser parser{"<set>", {}};
    if (key.rfind("sweep.", 0) == 0) {
        if (!cfg.sweep)
            cfg.sweep = SweepSpec{};
        parser.set_sweep(*cfg.sweep, key.substr(6), value, 0);
    } else {
        parser.set_scenario(cfg.scenario, key, value, 0);
    }
}

void validate_config(const Config& cfg) {
    try {
        cfg.scenario.validate();
        if (cfg.sweep)
            cfg.sweep->validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void print_defaults(std::ostream& os) {
    const Scenario d;
    os << "# dsrcbo configuration; every key with its default.\n"
       << "[scenario]\n"
       << "side_length = " << d.region.side_length_m << "          # field side, meters\n"
       << "density = " << d.density_per_m2 << "          # vehicles per m^2\n"
       << "r_cs = " << d.r_cs_m << "               # carrier-sense radius, meters\n"
       << "cw = " << d.mac.cw << "                  # contention window, counters 0..cw-1\n"
       << "l_bcn = " << d.mac.l_bcn_slots << "                # packet airtime, slots\n"
       << "L_bcn = " << d.mac.big_l_bcn_slots << "              # beaconing period, slots\n"
       << "r_decay = " << d.mac.r_decay << "           # decreasing-allocation decay\n"
       << "K = " << d.risk.num_categories << "                   # risk categories\n"
       << "Q = " << d.risk.step_size << "                    # category band width\n"
       << "sigma = " << d.risk.sigma << "                # speed std (also sets std_speed)\n"
       << "mu_speed = " << d.mean_speed << "            # mean speed\n"
       << "v_L = " << d.risk.speed_limit << "                 # speed limit\n"
       << "num_periods = " << d.num_periods << "\n"
       << "num_replications = " << d.num_replications << "\n"
       << "master_seed = " << d.master_seed << "       # env DSRCBO_SEED overrides the default\n"
       << "allocator = proposed        # proposed | flat-only\n"
       << "division_rule = high_risk_decreasing  # | low_risk_decreasing (aliases: eq8, eq9_labels)\n"
       << "tau_model = budget          # budget (alias truncated) | chain | untruncated\n"
       << "busy_model = occupancy      # occupancy | binomial_period | binomial_slot\n"
       << "tagged_selection = uniform  # uniform | central\n"
       << "mobility_dt = 0             # seconds between periods; 0 = static\n"
       << "n_cs = -1                   # analytic neighborhood; <0 derives density*pi*r_cs^2\n"
       << "tol = " << d.fp_tol << "\n"
       << "max_iter = " << d.fp_max_iter << "\n"
       << "irt_max_nu = " << d.irt_max_nu << "\n"
       << "\n"
       << "# [sweep]                   # optional section\n"
       << "# variable = n_cs           # n_cs | cw | sigma | density\n"
       << "# values = 10,20,50\n"
       << "# engines = analytic        # analytic | simulate | both\n"
       << "# allocators = proposed,flat\n";
}

} // namespace dsrcbo
