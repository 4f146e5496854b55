#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "socap/errors.hpp"
#include "socap/geometry.hpp"
#include "socap/hc.hpp"
#include "socap/mh.hpp"
#include "socap/scaling.hpp"
#include "socap/social.hpp"

namespace socap {

struct SlopeEstimate {
    double slope = 0.0;
    double intercept = 0.0; // in log space
    double r_squared = 0.0;
    int n_points = 0;
};

// Least-squares slope of log(y) against log(x). The slope of a measured
// quantity against n or a(n) is how every scaling claim in this library is
// checked, so the fit insists on clean input: at least three strictly
// positive points with non-degenerate x spread.
inline SlopeEstimate estimate_slope(std::span<const double> xs,
                                    std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw DomainError("slope fit needs equally many xs and ys");
    if (xs.size() < 3)
        throw DomainError("slope fit needs at least 3 points");
    const int n = static_cast<int>(xs.size());
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw DomainError("slope fit needs strictly positive data");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("slope fit needs distinct x values");
    SlopeEstimate e;
    e.slope = sxy / sxx;
    e.intercept = my - e.slope * mx;
    e.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    e.n_points = n;
    return e;
}

// ---------------------------------------------------------------------------
// Parameter sweeps

enum class SweepVariable { N, Gamma, Q, Alpha, CellArea, Epsilon };

inline const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::N: return "n";
        case SweepVariable::Gamma: return "gamma";
        case SweepVariable::Q: return "q";
        case SweepVariable::Alpha: return "alpha";
        case SweepVariable::CellArea: return "cell_area";
        default: return "epsilon";
    }
}

inline SweepVariable sweep_variable_from(const std::string& s) {
    if (s == "n") return SweepVariable::N;
    if (s == "gamma") return SweepVariable::Gamma;
    if (s == "q") return SweepVariable::Q;
    if (s == "alpha") return SweepVariable::Alpha;
    if (s == "cell_area") return SweepVariable::CellArea;
    if (s == "epsilon") return SweepVariable::Epsilon;
    throw ConfigError("unknown sweep variable: " + s);
}

// Base point of a sweep. cell_area <= 0 selects the populated floor
// 4 L^2 log(n)/n, recomputed per point when n is the swept variable.
struct SweepBase {
    NetworkConfig net;
    SocialParams social;
    Protocol protocol = Protocol::MultiHop;
    MhOptions mh{};
    double epsilon = 0.05;
    std::optional<int> subnet_count; // perfect square; overrides epsilon
    HcOptions hc{};
    int mean_estimate_trials = 400; // for epsilon-derived subnetwork sides
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::N;
    std::vector<double> values;
    int trials_per_point = 1;
    SweepBase base;
};

struct SweepRow {
    int point = 0;
    int trial = 0;
    double value = 0.0;
    std::uint64_t seed = 0;
    std::string protocol;
    std::string mode;
    int n = 0;
    double gamma = 0.0;
    int q = 1;
    double alpha = 0.0;
    double cell_area = 0.0;
    double epsilon = 0.0;
    int subnets = -1;
    std::string status; // "ok" or the error code of the failed stage
    double throughput = std::numeric_limits<double>::quiet_NaN();
    double delay_hops = std::numeric_limits<double>::quiet_NaN();
    int max_load = -1;
    double fallback_fraction = std::numeric_limits<double>::quiet_NaN();
};

inline double default_cell_area(const NetworkConfig& c) {
    const double L = c.side_length;
    return std::min(L * L, 4.0 * L * L * std::log(static_cast<double>(c.n)) /
                               static_cast<double>(c.n));
}

// Runs every (value, trial) combination in order. One failed point records
// its error code in the status column and never aborts the rest of the
// sweep. Trial seeds are derived injectively from (base seed, point, trial),
// so any row can be reproduced in isolation.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
    if (spec.trials_per_point < 1)
        throw ConfigError("trials_per_point must be positive");
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size() * spec.trials_per_point);
    for (std::size_t pi = 0; pi < spec.values.size(); ++pi) {
        for (int trial = 0; trial < spec.trials_per_point; ++trial) {
            SweepRow row;
            row.point = static_cast<int>(pi);
            row.trial = trial;
            row.value = spec.values[pi];

            NetworkConfig net = spec.base.net;
            SocialParams social = spec.base.social;
            MhOptions mh = spec.base.mh;
            double epsilon = spec.base.epsilon;
            switch (spec.variable) {
                case SweepVariable::N:
                    net.n = static_cast<int>(std::llround(spec.values[pi]));
                    if (net.mode == NetworkMode::Extended)
                        net.side_length = std::sqrt(static_cast<double>(net.n));
                    break;
                case SweepVariable::Gamma:
                    social.gamma = spec.values[pi];
                    break;
                case SweepVariable::Q:
                    social.q = static_cast<int>(std::llround(spec.values[pi]));
                    break;
                case SweepVariable::Alpha:
                    net.path_loss_alpha = spec.values[pi];
                    break;
                case SweepVariable::CellArea:
                    mh.cell_area = spec.values[pi];
                    break;
                case SweepVariable::Epsilon:
                    epsilon = spec.values[pi];
                    break;
            }
            net.seed = rng::mix(spec.base.net.seed, rng::kTrials,
                                static_cast<std::uint64_t>(pi),
                                static_cast<std::uint64_t>(trial));
            if (mh.cell_area <= 0.0) mh.cell_area = default_cell_area(net);

            row.seed = net.seed;
            row.protocol = to_string(spec.base.protocol);
            row.mode = to_string(net.mode);
            row.n = net.n;
            row.gamma = social.gamma;
            row.q = social.q;
            row.alpha = net.path_loss_alpha;
            row.cell_area = mh.cell_area;
            row.epsilon = epsilon;
            row.subnets = spec.base.subnet_count.value_or(-1);
            try {
                const Deployment d = Deployment::generate(net);
                const SocialAssignment soc = build_social_assignment(d, social);
                if (spec.base.protocol == Protocol::MultiHop) {
                    const MhResult r = simulate_mh(d, soc, mh);
                    row.throughput = r.aggregate_throughput;
                    row.delay_hops = r.mean_delay_hops;
                    row.max_load = r.max_cell_load;
                } else {
                    SubnetworkPlan plan = [&] {
                        if (spec.base.subnet_count) {
                            const int k = static_cast<int>(std::lround(
                                std::sqrt(static_cast<double>(*spec.base.subnet_count))));
                            if (k * k != *spec.base.subnet_count)
                                throw ConfigError("subnet count must be a perfect square");
                            return decompose_tiles(d, k);
                        }
                        const MeanEstimate mean = empirical_mean_sd_distance(
                            d, social, spec.base.mean_estimate_trials);
                        return decompose(
                            d, side_length(mean.mean, net.n, epsilon, d.side()));
                    }();
                    const HcResult r =
                        simulate_hc(d, social, soc, plan, spec.base.hc);
                    row.throughput = r.total_throughput;
                    row.fallback_fraction = r.fallback_fraction;
                    if (!std::isnan(r.analytic_delay_exponent))
                        row.delay_hops = r.analytic_delay_exponent;
                }
                row.status = "ok";
            } catch (const Error& e) {
                row.status = e.code();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

namespace detail {

inline void csv_number(std::ostream& os, double v) {
    if (std::isnan(v))
        os << "nan";
    else
        os << fmt_double(v);
}

} // namespace detail

inline void write_sweep_csv(const std::vector<SweepRow>& rows,
                            SweepVariable variable, std::ostream& os) {
    os << "variable,value,point,trial,seed,protocol,mode,n,gamma,q,alpha,"
          "cell_area,epsilon,subnets,status,throughput,delay_hops,max_load,"
          "fallback_fraction\n";
    for (const SweepRow& r : rows) {
        os << to_string(variable) << ',';
        detail::csv_number(os, r.value);
        os << ',' << r.point << ',' << r.trial << ',' << r.seed << ','
           << r.protocol << ',' << r.mode << ',' << r.n << ',';
        detail::csv_number(os, r.gamma);
        os << ',' << r.q << ',';
        detail::csv_number(os, r.alpha);
        os << ',';
        detail::csv_number(os, r.cell_area);
        os << ',';
        detail::csv_number(os, r.epsilon);
        os << ',' << r.subnets << ',' << r.status << ',';
        detail::csv_number(os, r.throughput);
        os << ',';
        detail::csv_number(os, r.delay_hops);
        os << ',' << r.max_load << ',';
        detail::csv_number(os, r.fallback_fraction);
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// Result serialization for single simulation runs

inline void write_mh_csv(const NetworkConfig& net, const SocialParams& social,
                         const MhOptions& opt, const MhResult& r,
                         std::ostream& os) {
    os << "seed,n,gamma,q,alpha,cell_area,throughput,delay_hops,max_load\n";
    os << net.seed << ',' << net.n << ',';
    detail::csv_number(os, social.gamma);
    os << ',' << social.q << ',';
    detail::csv_number(os, net.path_loss_alpha);
    os << ',';
    detail::csv_number(os, opt.cell_area);
    os << ',';
    detail::csv_number(os, r.aggregate_throughput);
    os << ',';
    detail::csv_number(os, r.mean_delay_hops);
    os << ',' << r.max_cell_load << '\n';
}

// Per-slot rows carry the slot's parallel capacity sum before the 1/4
// time-share; the final row carries the deliverable total.
inline void write_hc_csv(const NetworkConfig& net, const SocialParams& social,
                         const std::string& epsilon_or_subnets,
                         const HcResult& r, std::ostream& os) {
    os << "seed,n,gamma,alpha,epsilon_or_subnet_count,slot,throughput,"
          "fallback_fraction\n";
    for (int s = 0; s < 4; ++s) {
        os << net.seed << ',' << net.n << ',';
        detail::csv_number(os, social.gamma);
        os << ',';
        detail::csv_number(os, net.path_loss_alpha);
        os << ',' << epsilon_or_subnets << ',' << s << ',';
        detail::csv_number(os, r.slot_throughput[s]);
        os << ',';
        detail::csv_number(os, r.fallback_fraction);
        os << '\n';
    }
    os << net.seed << ',' << net.n << ',';
    detail::csv_number(os, social.gamma);
    os << ',';
    detail::csv_number(os, net.path_loss_alpha);
    os << ',' << epsilon_or_subnets << ",total,";
    detail::csv_number(os, r.total_throughput);
    os << ',';
    detail::csv_number(os, r.fallback_fraction);
    os << '\n';
}

// ---------------------------------------------------------------------------
// Subnetwork-count experiment

// Canonical operating points: gamma values paired with the tile counts and
// duration exponents that keep the cooperative delay flat across them
// (b = 1/(4(3-gamma)), so the delay exponent (3-gamma)b is 1/4 throughout).
struct SubnetPoint {
    double gamma = 0.0;
    int tiles_per_side = 1;
    double b = 0.0;
};

inline std::vector<SubnetPoint> canonical_subnet_points() {
    const double g3 = 2.0 + std::log2(3.0) / 4.0;
    return {{2.0, 1, 1.0 / 4.0},
            {2.25, 2, 1.0 / 3.0},
            {g3, 3, 1.0 / (4.0 * (3.0 - g3))},
            {2.5, 4, 1.0 / 2.0}};
}

struct SubnetSweepOptions {
    int n = 256;
    double region_side = 100.0;
    double power = 1.0;
    int q = 1;
    int seeds = 5;
    int phase_trials = 20;
    std::uint64_t base_seed = 20260816;
    double cluster_fraction = 0.5;
};

struct SubnetSweepRow {
    double alpha = 0.0;
    double gamma = 0.0;
    int subnets = 0;
    double b = 0.0;
    double throughput_mean = 0.0;
    double throughput_stderr = 0.0;
    double mimo_mean = 0.0;
    double fallback_fraction_mean = 0.0;
    double analytic_delay_exponent = 0.0;
    int seeds = 0;
    int phase_trials = 0;
};

// Cooperative throughput across the canonical (gamma -> subnetwork count)
// ladder for each attenuation exponent, averaged over seeds. This is the
// experiment that shows throughput climbing with gamma (more parallel
// subnetworks) while the analytic delay exponent stays flat.
inline std::vector<SubnetSweepRow> subnet_count_experiment(
    const std::vector<double>& alphas, const SubnetSweepOptions& opt) {
    if (alphas.empty()) throw ConfigError("need at least one alpha");
    if (opt.seeds < 1) throw ConfigError("need at least one seed");
    const std::vector<SubnetPoint> points = canonical_subnet_points();
    std::vector<SubnetSweepRow> rows;
    rows.reserve(alphas.size() * points.size());
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        for (std::size_t gi = 0; gi < points.size(); ++gi) {
            const SubnetPoint& pt = points[gi];
            SubnetSweepRow row;
            row.alpha = alphas[ai];
            row.gamma = pt.gamma;
            row.subnets = pt.tiles_per_side * pt.tiles_per_side;
            row.b = pt.b;
            row.seeds = opt.seeds;
            row.phase_trials = opt.phase_trials;

            std::vector<double> totals;
            totals.reserve(opt.seeds);
            double mimo_sum = 0.0, fb_sum = 0.0, delay_exp = 0.0;
            for (int s = 0; s < opt.seeds; ++s) {
                NetworkConfig net;
                net.n = opt.n;
                net.mode = NetworkMode::Extended;
                net.side_length = opt.region_side;
                net.power = opt.power;
                net.path_loss_alpha = alphas[ai];
                // Seed keys off (point, seed index) only: every alpha sees the
                // same deployments, pairings, and phases, so the attenuation
                // comparison is paired rather than across independent draws.
                net.seed = rng::mix(opt.base_seed, rng::kTrials, gi,
                                    static_cast<std::uint64_t>(s));
                const Deployment d = Deployment::generate(net);
                SocialParams social;
                social.gamma = pt.gamma;
                social.q = opt.q;
                const SocialAssignment soc = build_social_assignment(d, social);
                const SubnetworkPlan plan = decompose_tiles(d, pt.tiles_per_side);
                HcOptions hc;
                hc.phase_trials = opt.phase_trials;
                hc.cluster_fraction = opt.cluster_fraction;
                hc.b = pt.b;
                const HcResult r = simulate_hc(d, social, soc, plan, hc);
                totals.push_back(r.total_throughput);
                mimo_sum += r.mimo_throughput;
                fb_sum += r.fallback_fraction;
                delay_exp = r.analytic_delay_exponent;
            }
            double mean = 0.0;
            for (double t : totals) mean += t;
            mean /= static_cast<double>(totals.size());
            double var = 0.0;
            for (double t : totals) var += (t - mean) * (t - mean);
            var = totals.size() > 1 ? var / static_cast<double>(totals.size() - 1)
                                    : 0.0;
            row.throughput_mean = mean;
            row.throughput_stderr =
                std::sqrt(var / static_cast<double>(totals.size()));
            row.mimo_mean = mimo_sum / static_cast<double>(opt.seeds);
            row.fallback_fraction_mean = fb_sum / static_cast<double>(opt.seeds);
            row.analytic_delay_exponent = delay_exp;
            rows.push_back(row);
        }
    }
    return rows;
}

inline void write_subnet_sweep_csv(const std::vector<SubnetSweepRow>& rows,
                                   std::ostream& os) {
    os << "alpha,gamma,subnets,b,throughput_mean,throughput_stderr,mimo_mean,"
          "fallback_fraction_mean,analytic_delay_exponent,seeds,phase_trials\n";
    for (const SubnetSweepRow& r : rows) {
        detail::csv_number(os, r.alpha);
        os << ',';
        detail::csv_number(os, r.gamma);
        os << ',' << r.subnets << ',';
        detail::csv_number(os, r.b);
        os << ',';
        detail::csv_number(os, r.throughput_mean);
        os << ',';
        detail::csv_number(os, r.throughput_stderr);
        os << ',';
        detail::csv_number(os, r.mimo_mean);
        os << ',';
        detail::csv_number(os, r.fallback_fraction_mean);
        os << ',';
        detail::csv_number(os, r.analytic_delay_exponent);
        os << ',' << r.seeds << ',' << r.phase_trials << '\n';
    }
}

// ---------------------------------------------------------------------------
// Key-value configuration files

// Minimal sectioned key-value format:
//     [network]
//     n = 1024
//     # comment
// Values are kept as strings; typed getters parse on access. Command-line
// flags are expected to override anything read from a file.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in) {
        KeyValueConfig c;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw ConfigError("unterminated section header at line " +
                                      std::to_string(lineno));
                section = trim(t.substr(1, t.size() - 2));
                continue;
            }
            const std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected key=value at line " +
                                  std::to_string(lineno));
            const std::string key = trim(t.substr(0, eq));
            if (key.empty())
                throw ConfigError("empty key at line " + std::to_string(lineno));
            c.values_[section.empty() ? key : section + "." + key] =
                trim(t.substr(eq + 1));
        }
        return c;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key,
                           const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("value of " + key + " is not a number: " +
                              it->second);
        }
    }

    long long get_int(const std::string& key, long long fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("value of " + key + " is not an integer: " +
                              it->second);
        }
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

} // namespace socap
