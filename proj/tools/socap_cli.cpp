// Command-line front end. Subcommands map one-to-one onto library entry
// points: generate (deployment + social assignment), simulate-mh,
// simulate-hc, analytic (closed-form trade-off table / frontier), sweep,
// and fig8 (the subnetwork-count ladder experiment). Options can come from a
// sectioned key-value file via --config; explicit flags always win.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "socap/socap.hpp"

using nlohmann::json;
using namespace socap;

namespace {

struct Opts {
    int n = 256;
    double gamma = 0.0;
    int q = 1;
    double alpha = 3.0;
    double cell_area = 0.0; // <= 0 selects the populated floor
    double epsilon = 0.05;
    int subnets = 0; // 0: derive the side from epsilon
    std::uint64_t seed = 1;
    int trials = 1;
    std::string out;
    std::string format = "csv";
    std::string mode = "dense";
    double side = 0.0; // 0: mode default (1 or sqrt(n))
    double power = 1.0;
    std::string q_growth = "constant";
    int phase_trials = 20;
    double cluster_fraction = 0.5;
    double b = -1.0; // < 0: no duration exponent requested
    int tdma_slots = 9;
    std::string config_path;
};

// Handles of the registered options, used to decide whether a config-file
// value may fill in (flags given on the command line always win).
struct Flags {
    CLI::Option* n = nullptr;
    CLI::Option* gamma = nullptr;
    CLI::Option* q = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* cell_area = nullptr;
    CLI::Option* epsilon = nullptr;
    CLI::Option* subnets = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* trials = nullptr;
    CLI::Option* format = nullptr;
    CLI::Option* mode = nullptr;
    CLI::Option* side = nullptr;
    CLI::Option* power = nullptr;
    CLI::Option* q_growth = nullptr;
    CLI::Option* phase_trials = nullptr;
    CLI::Option* cluster_fraction = nullptr;
    CLI::Option* b = nullptr;
    CLI::Option* tdma = nullptr;
};

void add_common(CLI::App* sub, Opts& o, Flags& f) {
    sub->add_option("--config", o.config_path,
                    "key-value config file; explicit flags override it");
    sub->add_option("--out", o.out, "output path (default: stdout)");
    f.format = sub->add_option("--format", o.format, "csv or json")
                   ->check(CLI::IsMember({"csv", "json"}));
    f.seed = sub->add_option("--seed", o.seed, "base random seed");
    f.n = sub->add_option("--n", o.n, "number of nodes");
    f.gamma = sub->add_option("--gamma", o.gamma,
                              "social group density exponent (>= 0)");
    f.q = sub->add_option("--q", o.q, "social group size");
    f.alpha = sub->add_option("--alpha", o.alpha, "path-loss exponent (>= 2)");
    f.mode = sub->add_option("--mode", o.mode, "dense or extended")
                 ->check(CLI::IsMember({"dense", "extended"}));
    f.side = sub->add_option("--side", o.side,
                             "region side length (default: mode convention)");
    f.power = sub->add_option("--power", o.power, "per-node transmit power");
    f.q_growth =
        sub->add_option("--q-growth", o.q_growth,
                        "group size scaling for analytic regimes")
            ->check(CLI::IsMember({"constant", "growing"}));
}

void add_mh(CLI::App* sub, Opts& o, Flags& f) {
    f.cell_area = sub->add_option(
        "--cell-area", o.cell_area,
        "routing cell area (<= 0: 4 L^2 log(n)/n populated floor)");
    f.tdma = sub->add_option("--tdma-slots", o.tdma_slots,
                             "spatial reuse slots, perfect square");
}

void add_hc(CLI::App* sub, Opts& o, Flags& f) {
    f.epsilon = sub->add_option(
        "--epsilon", o.epsilon,
        "subnetwork side slack: side = mean S-D distance * n^epsilon");
    f.subnets = sub->add_option(
        "--subnets", o.subnets,
        "explicit subnetwork count (perfect square; overrides epsilon)");
    f.phase_trials = sub->add_option("--phase-trials", o.phase_trials,
                                     "channel phase redraws per link");
    f.cluster_fraction = sub->add_option("--cluster-fraction",
                                         o.cluster_fraction,
                                         "target cluster size fraction");
    f.b = sub->add_option(
        "--b", o.b, "duration exponent in [0,1) for the analytic delay");
}

void apply_config(Opts& o, const Flags& f) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot read config file: " + o.config_path);
    const KeyValueConfig c = KeyValueConfig::parse(in);
    const auto miss = [](CLI::Option* op) { return op != nullptr && op->count() == 0; };
    if (miss(f.n)) o.n = static_cast<int>(c.get_int("network.n", o.n));
    if (miss(f.mode)) o.mode = c.get_string("network.mode", o.mode);
    if (miss(f.side)) o.side = c.get_double("network.side", o.side);
    if (miss(f.seed))
        o.seed = static_cast<std::uint64_t>(
            c.get_int("network.seed", static_cast<long long>(o.seed)));
    if (miss(f.alpha)) o.alpha = c.get_double("network.alpha", o.alpha);
    if (miss(f.power)) o.power = c.get_double("network.power", o.power);
    if (miss(f.gamma)) o.gamma = c.get_double("social.gamma", o.gamma);
    if (miss(f.q)) o.q = static_cast<int>(c.get_int("social.q", o.q));
    if (miss(f.q_growth))
        o.q_growth = c.get_string("social.q_growth", o.q_growth);
    if (miss(f.cell_area)) o.cell_area = c.get_double("mh.cell_area", o.cell_area);
    if (miss(f.tdma))
        o.tdma_slots = static_cast<int>(c.get_int("mh.tdma_slots", o.tdma_slots));
    if (miss(f.epsilon)) o.epsilon = c.get_double("hc.epsilon", o.epsilon);
    if (miss(f.subnets))
        o.subnets = static_cast<int>(c.get_int("hc.subnets", o.subnets));
    if (miss(f.phase_trials))
        o.phase_trials =
            static_cast<int>(c.get_int("hc.phase_trials", o.phase_trials));
    if (miss(f.cluster_fraction))
        o.cluster_fraction =
            c.get_double("hc.cluster_fraction", o.cluster_fraction);
    if (miss(f.b)) o.b = c.get_double("hc.b", o.b);
    if (miss(f.trials))
        o.trials = static_cast<int>(c.get_int("run.trials", o.trials));
    if (miss(f.format)) o.format = c.get_string("run.format", o.format);
}

NetworkConfig make_net(const Opts& o) {
    NetworkConfig net = o.mode == "extended"
                            ? NetworkConfig::extended(o.n, o.seed)
                            : NetworkConfig::dense(o.n, o.seed);
    if (o.side > 0.0) net.side_length = o.side;
    net.path_loss_alpha = o.alpha;
    net.power = o.power;
    net.validate();
    return net;
}

SocialParams make_social(const Opts& o) {
    SocialParams p;
    p.gamma = o.gamma;
    p.q = o.q;
    p.q_growth = o.q_growth == "growing" ? QGrowth::Growing : QGrowth::Constant;
    p.validate(o.n);
    return p;
}

// Output destination: a file when --out was given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigError("cannot open output file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

json social_to_json(const SocialAssignment& a) {
    json rows = json::array();
    for (std::size_t s = 0; s < a.groups.size(); ++s)
        rows.push_back({{"source_id", s},
                        {"group", a.groups[s]},
                        {"destination_id", a.destinations[s]}});
    return rows;
}

int run_generate(const Opts& o) {
    const NetworkConfig net = make_net(o);
    const SocialParams social = make_social(o);
    const Deployment d = Deployment::generate(net);
    const SocialAssignment a = build_social_assignment(d, social);

    if (o.format == "json") {
        json positions = json::array();
        for (int i = 0; i < d.size(); ++i)
            positions.push_back({{"node_id", i}, {"x", d.x(i)}, {"y", d.y(i)}});
        json doc{{"config", config_to_json(net)},
                 {"social_params", {{"gamma", social.gamma}, {"q", social.q}}},
                 {"positions", positions},
                 {"social", social_to_json(a)}};
        Sink sink(o.out);
        sink.os() << doc.dump(2) << '\n';
        return 0;
    }
    if (o.out.empty()) {
        // Streamed form: config header, deployment, assignment.
        std::cout << config_to_json(net).dump() << "\n\n";
        write_deployment_csv(d, std::cout);
        std::cout << '\n';
        write_social_csv(a, std::cout);
        return 0;
    }
    // File form: --out is a prefix for the three artifacts.
    {
        std::ofstream js(o.out + ".json", std::ios::binary);
        if (!js) throw ConfigError("cannot open " + o.out + ".json");
        js << config_to_json(net).dump(2) << '\n';
    }
    {
        std::ofstream ps(o.out + ".positions.csv", std::ios::binary);
        if (!ps) throw ConfigError("cannot open " + o.out + ".positions.csv");
        write_deployment_csv(d, ps);
    }
    {
        std::ofstream ss(o.out + ".social.csv", std::ios::binary);
        if (!ss) throw ConfigError("cannot open " + o.out + ".social.csv");
        write_social_csv(a, ss);
    }
    std::cout << "wrote " << o.out << ".json\n"
              << "wrote " << o.out << ".positions.csv\n"
              << "wrote " << o.out << ".social.csv\n";
    return 0;
}

json sweep_row_json(const SweepRow& r, SweepVariable v) {
    return json{{"variable", to_string(v)},
                {"value", r.value},
                {"point", r.point},
                {"trial", r.trial},
                {"seed", r.seed},
                {"protocol", r.protocol},
                {"mode", r.mode},
                {"n", r.n},
                {"gamma", r.gamma},
                {"q", r.q},
                {"alpha", r.alpha},
                {"cell_area", r.cell_area},
                {"epsilon", r.epsilon},
                {"subnets", r.subnets},
                {"status", r.status},
                {"throughput", r.throughput},
                {"delay_hops", r.delay_hops},
                {"max_load", r.max_load},
                {"fallback_fraction", r.fallback_fraction}};
}

SweepBase make_base(const Opts& o, Protocol protocol) {
    SweepBase base;
    base.net = make_net(o);
    base.social = make_social(o);
    base.protocol = protocol;
    base.mh.cell_area = o.cell_area;
    base.mh.tdma_slots = o.tdma_slots;
    base.epsilon = o.epsilon;
    if (o.subnets > 0) base.subnet_count = o.subnets;
    base.hc.phase_trials = o.phase_trials;
    base.hc.cluster_fraction = o.cluster_fraction;
    if (o.b >= 0.0) base.hc.b = o.b;
    return base;
}

void emit_sweep(const std::vector<SweepRow>& rows, SweepVariable v,
                const Opts& o) {
    Sink sink(o.out);
    if (o.format == "json") {
        json arr = json::array();
        for (const SweepRow& r : rows) arr.push_back(sweep_row_json(r, v));
        sink.os() << arr.dump(2) << '\n';
    } else {
        write_sweep_csv(rows, v, sink.os());
    }
}

int run_simulate_mh(const Opts& o) {
    if (o.trials > 1) {
        // Multi-trial runs reuse the sweep machinery (and its schema) with a
        // single swept value.
        SweepSpec spec;
        spec.variable = SweepVariable::N;
        spec.values = {static_cast<double>(o.n)};
        spec.trials_per_point = o.trials;
        spec.base = make_base(o, Protocol::MultiHop);
        emit_sweep(run_sweep(spec), spec.variable, o);
        return 0;
    }
    const NetworkConfig net = make_net(o);
    const SocialParams social = make_social(o);
    const Deployment d = Deployment::generate(net);
    const SocialAssignment a = build_social_assignment(d, social);
    MhOptions mh;
    mh.cell_area = o.cell_area > 0.0 ? o.cell_area : default_cell_area(net);
    mh.tdma_slots = o.tdma_slots;
    const MhResult r = simulate_mh(d, a, mh);

    Sink sink(o.out);
    if (o.format == "json") {
        json doc{{"config", config_to_json(net)},
                 {"social", {{"gamma", social.gamma}, {"q", social.q}}},
                 {"options",
                  {{"cell_area", mh.cell_area}, {"tdma_slots", mh.tdma_slots}}},
                 {"result",
                  {{"throughput", r.aggregate_throughput},
                   {"delay_hops", r.mean_delay_hops},
                   {"max_load", r.max_cell_load},
                   {"bottleneck_rate", r.bottleneck_rate},
                   {"bottleneck_sinr", r.bottleneck_sinr},
                   {"active_classes", r.active_classes}}}};
        sink.os() << doc.dump(2) << '\n';
    } else {
        write_mh_csv(net, social, mh, r, sink.os());
    }
    return 0;
}

int run_simulate_hc(const Opts& o) {
    if (o.trials > 1) {
        SweepSpec spec;
        spec.variable = SweepVariable::Epsilon;
        spec.values = {o.epsilon};
        spec.trials_per_point = o.trials;
        spec.base = make_base(o, Protocol::HierarchicalCooperation);
        emit_sweep(run_sweep(spec), spec.variable, o);
        return 0;
    }
    const NetworkConfig net = make_net(o);
    const SocialParams social = make_social(o);
    const Deployment d = Deployment::generate(net);
    const SocialAssignment a = build_social_assignment(d, social);

    std::string scale;
    const SubnetworkPlan plan = [&] {
        if (o.subnets > 0) {
            const int k = static_cast<int>(
                std::lround(std::sqrt(static_cast<double>(o.subnets))));
            if (k * k != o.subnets)
                throw ConfigError("--subnets must be a perfect square");
            scale = std::to_string(o.subnets);
            return decompose_tiles(d, k);
        }
        const MeanEstimate mean = empirical_mean_sd_distance(d, social, 400);
        scale = detail::fmt_double(o.epsilon);
        return decompose(d, side_length(mean.mean, net.n, o.epsilon, d.side()));
    }();

    HcOptions hc;
    hc.phase_trials = o.phase_trials;
    hc.cluster_fraction = o.cluster_fraction;
    if (o.b >= 0.0) hc.b = o.b;
    const HcResult r = simulate_hc(d, social, a, plan, hc);

    Sink sink(o.out);
    if (o.format == "json") {
        json doc{{"config", config_to_json(net)},
                 {"social", {{"gamma", social.gamma}, {"q", social.q}}},
                 {"options",
                  {{"subnetwork_side", plan.side()},
                   {"epsilon_or_subnet_count", scale},
                   {"phase_trials", hc.phase_trials},
                   {"cluster_fraction", hc.cluster_fraction}}},
                 {"result",
                  {{"total_throughput", r.total_throughput},
                   {"mimo_throughput", r.mimo_throughput},
                   {"fallback_throughput", r.fallback_throughput},
                   {"fallback_fraction", r.fallback_fraction},
                   {"slot_throughput", r.slot_throughput},
                   {"active_subnetworks", r.active_subnetworks},
                   {"analytic_delay_exponent", r.analytic_delay_exponent}}}};
        sink.os() << doc.dump(2) << '\n';
    } else {
        write_hc_csv(net, social, scale, r, sink.os());
    }
    return 0;
}

const char* eps_mark(int sign) {
    return sign < 0 ? "-eps" : (sign > 0 ? "+eps" : "0");
}

void table_row(std::ostream& os, const TradeoffPoint& t,
               const std::string& param) {
    os << std::left << std::setw(7) << to_string(t.regime) << std::setw(9)
       << to_string(t.protocol) << std::setw(10) << to_string(t.mode)
       << std::right << std::fixed << std::setprecision(4) << std::setw(9)
       << t.throughput.n_exp << std::setw(10) << t.throughput.log_pow
       << std::setw(6) << eps_mark(t.throughput.eps_sign) << std::setw(9)
       << t.delay.n_exp << std::setw(10) << t.delay.log_pow << std::setw(6)
       << eps_mark(t.delay.eps_sign) << "  " << param << '\n';
}

json point_json(const TradeoffPoint& t, const std::string& param_name,
                double param_value) {
    return json{{"protocol", to_string(t.protocol)},
                {"mode", to_string(t.mode)},
                {"regime", to_string(t.regime)},
                {"gamma", t.gamma},
                {"alpha", t.alpha},
                {"param_name", param_name},
                {"param_value", param_value},
                {"throughput_n_exp", t.throughput.n_exp},
                {"throughput_log_pow", t.throughput.log_pow},
                {"throughput_eps", t.throughput.eps_sign},
                {"delay_n_exp", t.delay.n_exp},
                {"delay_log_pow", t.delay.log_pow},
                {"delay_eps", t.delay.eps_sign}};
}

// Admissible cell-area exponent band of the multihop trade-off.
void mh_band(double gamma, QGrowth growth, NetworkMode mode, double* lo,
             double* hi) {
    const Regime reg = classify_regime(growth, gamma);
    if (mode == NetworkMode::Dense) {
        *lo = -1.0;
        *hi = reg == Regime::A ? 0.0
                               : (reg == Regime::B ? -(gamma - 2.0) : -1.0);
    } else {
        *lo = 0.0;
        *hi = reg == Regime::A ? 1.0 : (reg == Regime::B ? 3.0 - gamma : 0.0);
    }
}

TradeoffPoint mh_point(const Opts& o, QGrowth growth, NetworkMode mode,
                       const AreaScaling& a) {
    return mode == NetworkMode::Dense
               ? mh_tradeoff_dense(o.gamma, growth, a)
               : mh_tradeoff_extended(o.gamma, growth, o.alpha, a);
}

TradeoffPoint hc_point(const Opts& o, QGrowth growth, NetworkMode mode,
                       double b) {
    return mode == NetworkMode::Dense
               ? hc_tradeoff_dense(o.gamma, growth, b)
               : hc_tradeoff_extended(o.gamma, growth, o.alpha, b);
}

int run_analytic(const Opts& o, bool frontier, int b_grid) {
    const NetworkMode mode =
        o.mode == "extended" ? NetworkMode::Extended : NetworkMode::Dense;
    const QGrowth growth =
        o.q_growth == "growing" ? QGrowth::Growing : QGrowth::Constant;
    double lo = 0.0, hi = 0.0;
    mh_band(o.gamma, growth, mode, &lo, &hi);

    Sink sink(o.out);
    std::ostream& os = sink.os();
    if (frontier) {
        std::vector<std::pair<TradeoffPoint, double>> mh_rows;
        const int steps = hi - lo > 1e-15 ? 40 : 0;
        for (int i = 0; i <= steps; ++i) {
            const double A = steps == 0 ? lo : lo + (hi - lo) * i / steps;
            mh_rows.emplace_back(mh_point(o, growth, mode, {A, 0.0}), A);
        }
        std::vector<std::pair<TradeoffPoint, double>> hc_rows;
        for (int i = 0; i < b_grid; ++i) {
            const double b = static_cast<double>(i) / b_grid;
            hc_rows.emplace_back(hc_point(o, growth, mode, b), b);
        }
        if (o.format == "json") {
            json arr = json::array();
            for (const auto& [t, v] : mh_rows)
                arr.push_back(point_json(t, "area_exp", v));
            for (const auto& [t, v] : hc_rows)
                arr.push_back(point_json(t, "b", v));
            os << arr.dump(2) << '\n';
        } else {
            os << "protocol,mode,regime,gamma,alpha,param_name,param_value,"
                  "throughput_n_exp,throughput_log_pow,throughput_eps,"
                  "delay_n_exp,delay_log_pow,delay_eps\n";
            const auto row = [&](const TradeoffPoint& t, const char* pname,
                                 double pval) {
                os << to_string(t.protocol) << ',' << to_string(t.mode) << ','
                   << to_string(t.regime) << ',' << detail::fmt_double(t.gamma)
                   << ',' << detail::fmt_double(t.alpha) << ',' << pname << ','
                   << detail::fmt_double(pval) << ','
                   << detail::fmt_double(t.throughput.n_exp) << ','
                   << detail::fmt_double(t.throughput.log_pow) << ','
                   << t.throughput.eps_sign << ','
                   << detail::fmt_double(t.delay.n_exp) << ','
                   << detail::fmt_double(t.delay.log_pow) << ','
                   << t.delay.eps_sign << '\n';
            };
            for (const auto& [t, v] : mh_rows) row(t, "area_exp", v);
            for (const auto& [t, v] : hc_rows) row(t, "b", v);
        }
        return 0;
    }

    os << "gamma " << detail::fmt_double(o.gamma) << ", alpha "
       << detail::fmt_double(o.alpha) << ", q growth " << o.q_growth << ", "
       << o.mode << " network\n\n";
    os << std::left << std::setw(7) << "regime" << std::setw(9) << "protocol"
       << std::setw(10) << "mode" << std::right << std::setw(9) << "T_exp"
       << std::setw(10) << "T_logpow" << std::setw(6) << "T_eps" << std::setw(9)
       << "D_exp" << std::setw(10) << "D_logpow" << std::setw(6) << "D_eps"
       << "  parameters\n";

    const AreaScaling amin = mode == NetworkMode::Dense
                                 ? AreaScaling::min_dense()
                                 : AreaScaling::min_extended();
    {
        std::ostringstream p;
        p << "cell area n^" << detail::fmt_double(amin.n_exp) << " log^"
          << detail::fmt_double(amin.log_pow) << " (smallest populated)";
        table_row(os, mh_point(o, growth, mode, amin), p.str());
    }
    if (hi - lo > 1e-15) {
        std::ostringstream p;
        p << "cell area n^" << detail::fmt_double(hi) << " (largest admissible)";
        table_row(os, mh_point(o, growth, mode, {hi, 0.0}), p.str());
    }
    std::vector<double> bs;
    if (o.b >= 0.0)
        bs.push_back(o.b);
    else
        bs = {0.0, 0.25, 0.5, 0.75};
    for (const double b : bs) {
        const TradeoffPoint t = hc_point(o, growth, mode, b);
        std::ostringstream p;
        p << "b = " << detail::fmt_double(b)
          << ", hierarchy depth >= " << t.hierarchy_level.value_or(1);
        table_row(os, t, p.str());
    }

    const DominanceResult dom = dominant_protocol(o.gamma, growth, o.alpha, mode);
    os << "\ndominant protocol: " << to_string(dom.kind) << " (" << dom.detail
       << ")\n";
    if (mode == NetworkMode::Extended) {
        const BurstyPlan bp =
            bursty_fraction(classify_regime(growth, o.gamma), o.gamma, o.alpha);
        os << "bursty duty exponent: " << detail::fmt_double(bp.duty_exponent)
           << " (active fraction n^-(" << detail::fmt_double(bp.duty_exponent)
           << "+eps))\n";
    }
    return 0;
}

int run_sweep_cmd(const Opts& o, const std::string& variable,
                  const std::vector<double>& values,
                  const std::string& protocol) {
    SweepSpec spec;
    spec.variable = sweep_variable_from(variable);
    spec.values = values;
    spec.trials_per_point = o.trials;
    spec.base = make_base(o, protocol == "hc"
                                 ? Protocol::HierarchicalCooperation
                                 : Protocol::MultiHop);
    emit_sweep(run_sweep(spec), spec.variable, o);
    return 0;
}

int run_fig8(const Opts& o, const std::vector<double>& alphas) {
    SubnetSweepOptions exp_opt;
    exp_opt.n = o.n;
    exp_opt.region_side = o.side > 0.0 ? o.side : 100.0;
    exp_opt.power = o.power;
    exp_opt.q = o.q;
    exp_opt.seeds = o.trials;
    exp_opt.phase_trials = o.phase_trials;
    exp_opt.base_seed = o.seed;
    exp_opt.cluster_fraction = o.cluster_fraction;
    const std::vector<SubnetSweepRow> rows =
        subnet_count_experiment(alphas, exp_opt);

    Sink sink(o.out);
    if (o.format == "json") {
        json arr = json::array();
        for (const SubnetSweepRow& r : rows)
            arr.push_back({{"alpha", r.alpha},
                           {"gamma", r.gamma},
                           {"subnets", r.subnets},
                           {"b", r.b},
                           {"throughput_mean", r.throughput_mean},
                           {"throughput_stderr", r.throughput_stderr},
                           {"mimo_mean", r.mimo_mean},
                           {"fallback_fraction_mean", r.fallback_fraction_mean},
                           {"analytic_delay_exponent", r.analytic_delay_exponent},
                           {"seeds", r.seeds},
                           {"phase_trials", r.phase_trials}});
        sink.os() << arr.dump(2) << '\n';
    } else {
        write_subnet_sweep_csv(rows, sink.os());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Throughput-delay scaling toolbox for ad hoc networks with "
        "distance-biased traffic"};
    app.require_subcommand(1);

    Opts o;
    Flags f;

    CLI::App* generate =
        app.add_subcommand("generate", "sample a deployment and its pairing");
    add_common(generate, o, f);

    Opts o_mh;
    Flags f_mh;
    CLI::App* sim_mh =
        app.add_subcommand("simulate-mh", "score multihop routing once");
    add_common(sim_mh, o_mh, f_mh);
    add_mh(sim_mh, o_mh, f_mh);
    f_mh.trials = sim_mh->add_option("--trials", o_mh.trials,
                                     "independent trials (sweep schema if > 1)");

    Opts o_hc;
    Flags f_hc;
    CLI::App* sim_hc = app.add_subcommand(
        "simulate-hc", "score cooperative subnetwork transmission once");
    add_common(sim_hc, o_hc, f_hc);
    add_hc(sim_hc, o_hc, f_hc);
    f_hc.trials = sim_hc->add_option("--trials", o_hc.trials,
                                     "independent trials (sweep schema if > 1)");

    Opts o_an;
    Flags f_an;
    bool frontier = false;
    int b_grid = 100;
    CLI::App* analytic = app.add_subcommand(
        "analytic", "closed-form trade-off exponents and dominance");
    add_common(analytic, o_an, f_an);
    f_an.b = analytic->add_option("--b", o_an.b,
                                  "single duration exponent for the table");
    analytic->add_flag("--frontier", frontier,
                       "emit the full trade-off frontier instead of the table");
    analytic->add_option("--b-grid", b_grid,
                         "frontier samples of b in [0,1)")
        ->check(CLI::PositiveNumber);

    Opts o_sw;
    Flags f_sw;
    std::string sw_variable = "n";
    std::vector<double> sw_values;
    std::string sw_protocol = "mh";
    CLI::App* sweep =
        app.add_subcommand("sweep", "run a parameter sweep to CSV or JSON");
    add_common(sweep, o_sw, f_sw);
    add_mh(sweep, o_sw, f_sw);
    add_hc(sweep, o_sw, f_sw);
    sweep->add_option("--variable", sw_variable,
                      "one of n, gamma, q, alpha, cell_area, epsilon");
    sweep->add_option("--values", sw_values, "swept values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--protocol", sw_protocol, "mh or hc")
        ->check(CLI::IsMember({"mh", "hc"}));
    f_sw.trials = sweep->add_option("--trials", o_sw.trials,
                                    "trials per swept value");

    Opts o_f8;
    Flags f_f8;
    o_f8.mode = "extended";
    o_f8.side = 100.0;
    o_f8.trials = 5;
    o_f8.seed = 20260816;
    std::vector<double> f8_alphas = {2.0, 2.5, 3.0};
    CLI::App* fig8 = app.add_subcommand(
        "fig8", "throughput across the canonical subnetwork-count ladder");
    fig8->add_option("--config", o_f8.config_path,
                     "key-value config file; explicit flags override it");
    fig8->add_option("--out", o_f8.out, "output path (default: stdout)");
    f_f8.format = fig8->add_option("--format", o_f8.format, "csv or json")
                      ->check(CLI::IsMember({"csv", "json"}));
    f_f8.seed = fig8->add_option("--seed", o_f8.seed, "base random seed");
    f_f8.n = fig8->add_option("--n", o_f8.n, "nodes per deployment");
    f_f8.side = fig8->add_option("--side", o_f8.side, "region side length");
    f_f8.power = fig8->add_option("--power", o_f8.power,
                                  "per-node transmit power");
    f_f8.q = fig8->add_option("--q", o_f8.q, "social group size");
    fig8->add_option("--alphas", f8_alphas, "path-loss exponents")
        ->delimiter(',');
    f_f8.phase_trials = fig8->add_option("--phase-trials", o_f8.phase_trials,
                                         "channel phase redraws per link");
    f_f8.cluster_fraction = fig8->add_option(
        "--cluster-fraction", o_f8.cluster_fraction, "target cluster fraction");
    f_f8.trials = fig8->add_option("--trials", o_f8.trials,
                                   "independent deployments per point");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            apply_config(o, f);
            return run_generate(o);
        }
        if (sim_mh->parsed()) {
            apply_config(o_mh, f_mh);
            return run_simulate_mh(o_mh);
        }
        if (sim_hc->parsed()) {
            apply_config(o_hc, f_hc);
            return run_simulate_hc(o_hc);
        }
        if (analytic->parsed()) {
            apply_config(o_an, f_an);
            return run_analytic(o_an, frontier, b_grid);
        }
        if (sweep->parsed()) {
            apply_config(o_sw, f_sw);
            return run_sweep_cmd(o_sw, sw_variable, sw_values, sw_protocol);
        }
        if (fig8->parsed()) {
            apply_config(o_f8, f_f8);
            return run_fig8(o_f8, f8_alphas);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << e.code() << "): " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
