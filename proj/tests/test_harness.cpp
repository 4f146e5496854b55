#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "socap/harness.hpp"

using namespace socap;

TEST_CASE("slope fit recovers exact power laws") {
    std::vector<double> xs, ys;
    for (const double x : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        xs.push_back(x);
        ys.push_back(3.5 * std::pow(x, -0.75));
    }
    const SlopeEstimate e = estimate_slope(xs, ys);
    REQUIRE(e.slope == Catch::Approx(-0.75).margin(1e-10));
    REQUIRE(e.intercept == Catch::Approx(std::log(3.5)).margin(1e-10));
    REQUIRE(e.r_squared == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(e.n_points == 5);
}

TEST_CASE("slope fit of constant data is flat with unit fit quality") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> ys{2.5, 2.5, 2.5, 2.5};
    const SlopeEstimate e = estimate_slope(xs, ys);
    REQUIRE(e.slope == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(e.r_squared == 1.0);
}

TEST_CASE("a log factor bends the fitted slope upward, within the band") {
    std::vector<double> xs, ys;
    for (int p = 8; p <= 14; ++p) {
        const double x = std::pow(2.0, p);
        xs.push_back(x);
        ys.push_back(std::pow(x, -0.5) * std::log(x));
    }
    const double slope = estimate_slope(xs, ys).slope;
    REQUIRE(slope > -0.5);
    REQUIRE(slope < -0.35);
}

TEST_CASE("slope fit rejects unusable input") {
    const std::vector<double> two{1.0, 2.0};
    REQUIRE_THROWS_AS(estimate_slope(two, two), DomainError);
    const std::vector<double> xs{1.0, 2.0, 3.0};
    const std::vector<double> negative{1.0, -2.0, 3.0};
    const std::vector<double> zero{1.0, 0.0, 3.0};
    const std::vector<double> flat{2.0, 2.0, 2.0};
    REQUIRE_THROWS_AS(estimate_slope(xs, negative), DomainError);
    REQUIRE_THROWS_AS(estimate_slope(xs, zero), DomainError);
    REQUIRE_THROWS_AS(estimate_slope(flat, xs), DomainError);
    REQUIRE_THROWS_AS(estimate_slope(xs, two), DomainError);
}

TEST_CASE("sweep variables round-trip through their names") {
    for (const SweepVariable v :
         {SweepVariable::N, SweepVariable::Gamma, SweepVariable::Q,
          SweepVariable::Alpha, SweepVariable::CellArea,
          SweepVariable::Epsilon})
        REQUIRE(sweep_variable_from(to_string(v)) == v);
    REQUIRE_THROWS_AS(sweep_variable_from("sigma"), ConfigError);
}

TEST_CASE("sweeps visit every point, survive bad values, and reproduce") {
    SweepSpec spec;
    spec.variable = SweepVariable::CellArea;
    // The middle value exceeds the region area, so its rows must carry the
    // config error code while the rest stay ok.
    spec.values = {0.25, 2.0, 0.0625};
    spec.trials_per_point = 2;
    spec.base.net = NetworkConfig::dense(128, 9);
    spec.base.social.gamma = 1.0;
    spec.base.social.q = 1;

    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 6);
    std::set<std::uint64_t> seeds;
    for (const SweepRow& r : rows) {
        REQUIRE(seeds.insert(r.seed).second); // per-row seeds never collide
        if (r.point == 1) {
            REQUIRE(r.status == "config");
            REQUIRE(std::isnan(r.throughput));
        } else {
            REQUIRE(r.status == "ok");
            REQUIRE(r.throughput > 0.0);
            REQUIRE(r.max_load >= 1);
        }
    }

    std::ostringstream a, b;
    write_sweep_csv(rows, spec.variable, a);
    write_sweep_csv(run_sweep(spec), spec.variable, b);
    REQUIRE(a.str() == b.str()); // byte-identical rerun
    REQUIRE(a.str().substr(0, a.str().find('\n')) ==
            "variable,value,point,trial,seed,protocol,mode,n,gamma,q,alpha,"
            "cell_area,epsilon,subnets,status,throughput,delay_hops,max_load,"
            "fallback_fraction");
    REQUIRE(a.str().find("\ncell_area,0.25,0,0,") != std::string::npos);
}

TEST_CASE("an n sweep rescales the extended region") {
    SweepSpec spec;
    spec.variable = SweepVariable::N;
    spec.values = {64, 256};
    spec.base.net = NetworkConfig::extended(16, 4);
    spec.base.social.gamma = 0.0;
    spec.base.social.q = 1;
    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].n == 64);
    REQUIRE(rows[1].n == 256);
    for (const SweepRow& r : rows) {
        REQUIRE(r.status == "ok");
        REQUIRE(r.mode == "extended");
        // Default cell area tracks the rescaled region: 4 L^2 log(n) / n
        // with L^2 = n.
        REQUIRE(r.cell_area ==
                Catch::Approx(4.0 * std::log(static_cast<double>(r.n))));
    }
}

TEST_CASE("cooperative sweeps prefer tiles when given, epsilon otherwise") {
    SweepSpec spec;
    spec.variable = SweepVariable::Epsilon;
    spec.values = {0.0, 0.2};
    spec.base.net = NetworkConfig::dense(256, 11);
    spec.base.social.gamma = 2.5;
    spec.base.social.q = 1;
    spec.base.protocol = Protocol::HierarchicalCooperation;
    spec.base.hc.phase_trials = 2;
    const std::vector<SweepRow> rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    for (const SweepRow& r : rows) {
        REQUIRE(r.status == "ok");
        REQUIRE(r.throughput > 0.0);
        REQUIRE(r.fallback_fraction >= 0.0);
        REQUIRE(r.subnets == -1);
        REQUIRE(std::isnan(r.delay_hops)); // no duration exponent requested
    }

    spec.base.subnet_count = 4;
    spec.base.hc.b = 0.5;
    const std::vector<SweepRow> tiled = run_sweep(spec);
    for (const SweepRow& r : tiled) {
        REQUIRE(r.status == "ok");
        REQUIRE(r.subnets == 4);
        // Dense, gamma 2.5, b = 0.5: delay exponent (3 - gamma) b = 0.25.
        REQUIRE(r.delay_hops == Catch::Approx(0.25));
    }

    spec.base.subnet_count = 5; // not a perfect square
    for (const SweepRow& r : run_sweep(spec)) REQUIRE(r.status == "config");
}

TEST_CASE("single-run CSV headers are stable") {
    NetworkConfig net = NetworkConfig::dense(64, 2);
    SocialParams p;
    p.gamma = 1.0;
    p.q = 1;
    const Deployment d = Deployment::generate(net);
    const SocialAssignment soc = build_social_assignment(d, p);
    MhOptions mh;
    mh.cell_area = default_cell_area(net);
    const MhResult mr = simulate_mh(d, soc, mh);
    std::ostringstream mo;
    write_mh_csv(net, p, mh, mr, mo);
    REQUIRE(mo.str().substr(0, mo.str().find('\n')) ==
            "seed,n,gamma,q,alpha,cell_area,throughput,delay_hops,max_load");
    REQUIRE(mo.str().find("\n2,64,1,1,3,") != std::string::npos);

    const HcResult hr = simulate_hc(d, p, soc, decompose(d, d.side()), {});
    std::ostringstream ho;
    write_hc_csv(net, p, "9", hr, ho);
    const std::string s = ho.str();
    REQUIRE(s.substr(0, s.find('\n')) ==
            "seed,n,gamma,alpha,epsilon_or_subnet_count,slot,throughput,"
            "fallback_fraction");
    // Four slot rows plus the total row.
    REQUIRE(std::count(s.begin(), s.end(), '\n') == 6);
    REQUIRE(s.find(",total,") != std::string::npos);
}

TEST_CASE("canonical subnetwork ladder keeps the delay exponent flat") {
    const std::vector<SubnetPoint> pts = canonical_subnet_points();
    REQUIRE(pts.size() == 4);
    REQUIRE(pts[0].gamma == Catch::Approx(2.0));
    REQUIRE(pts[1].gamma == Catch::Approx(2.25));
    REQUIRE(pts[2].gamma == Catch::Approx(2.0 + std::log2(3.0) / 4.0));
    REQUIRE(pts[3].gamma == Catch::Approx(2.5));
    for (int i = 0; i < 4; ++i) {
        REQUIRE(pts[i].tiles_per_side == i + 1);
        REQUIRE(pts[i].b == Catch::Approx(1.0 / (4.0 * (3.0 - pts[i].gamma))));
        // Flat delay: (3 - gamma) b = 1/4 at every point.
        REQUIRE((3.0 - pts[i].gamma) * pts[i].b == Catch::Approx(0.25));
        REQUIRE(pts[i].b < 1.0);
    }
}

TEST_CASE("subnetwork-count experiment emits one row per alpha and point") {
    SubnetSweepOptions opt;
    opt.n = 64;
    opt.region_side = 8.0;
    opt.seeds = 2;
    opt.phase_trials = 2;
    const std::vector<SubnetSweepRow> rows =
        subnet_count_experiment({2.0, 3.0}, opt);
    REQUIRE(rows.size() == 8);
    for (const SubnetSweepRow& r : rows) {
        REQUIRE(r.throughput_mean > 0.0);
        REQUIRE(r.throughput_stderr >= 0.0);
        REQUIRE(r.analytic_delay_exponent == Catch::Approx(0.25));
        REQUIRE(r.seeds == 2);
    }
    std::ostringstream os;
    write_subnet_sweep_csv(rows, os);
    const std::string csv = os.str();
    REQUIRE(csv.substr(0, csv.find('\n')) ==
            "alpha,gamma,subnets,b,throughput_mean,throughput_stderr,"
            "mimo_mean,fallback_fraction_mean,analytic_delay_exponent,seeds,"
            "phase_trials");
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("key-value files parse sections, comments, and types") {
    std::istringstream in(
        "# top comment\n"
        "[network]\n"
        "n = 1024\n"
        "  alpha=3.5  \n"
        "; another comment\n"
        "[social]\n"
        "gamma = 2.5\n"
        "label = regime b\n"
        "bare = 1\n");
    const KeyValueConfig c = KeyValueConfig::parse(in);
    REQUIRE(c.has("network.n"));
    REQUIRE(c.get_int("network.n", -1) == 1024);
    REQUIRE(c.get_double("network.alpha", 0.0) == Catch::Approx(3.5));
    REQUIRE(c.get_double("social.gamma", 0.0) == Catch::Approx(2.5));
    REQUIRE(c.get_string("social.label", "") == "regime b");
    REQUIRE(c.get_int("social.bare", -1) == 1);
    REQUIRE_FALSE(c.has("network.gamma"));
    REQUIRE(c.get_int("network.missing", 77) == 77);
    REQUIRE_THROWS_AS(c.get_int("social.label", 0), ConfigError);
    REQUIRE_THROWS_AS(c.get_double("social.label", 0.0), ConfigError);

    std::istringstream bad_section("[network\nn = 2\n");
    REQUIRE_THROWS_AS(KeyValueConfig::parse(bad_section), ConfigError);
    std::istringstream bad_line("[a]\njust words\n");
    REQUIRE_THROWS_AS(KeyValueConfig::parse(bad_line), ConfigError);
    std::istringstream empty_key("[a]\n= 3\n");
    REQUIRE_THROWS_AS(KeyValueConfig::parse(empty_key), ConfigError);
}
