#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "socap/geometry.hpp"

using namespace socap;

TEST_CASE("deployment is deterministic per seed and inside the square") {
    const NetworkConfig c = NetworkConfig::dense(500, 42);
    const Deployment a = Deployment::generate(c);
    const Deployment b = Deployment::generate(c);
    for (int i = 0; i < a.size(); ++i) {
        REQUIRE(a.x(i) == b.x(i));
        REQUIRE(a.y(i) == b.y(i));
        REQUIRE(a.x(i) >= 0.0);
        REQUIRE(a.x(i) < 1.0);
        REQUIRE(a.y(i) >= 0.0);
        REQUIRE(a.y(i) < 1.0);
    }

    NetworkConfig other = c;
    other.seed = 43;
    const Deployment d = Deployment::generate(other);
    bool any_differ = false;
    for (int i = 0; i < a.size() && !any_differ; ++i)
        any_differ = a.x(i) != d.x(i) || a.y(i) != d.y(i);
    REQUIRE(any_differ);
}

TEST_CASE("coordinates have the uniform mean") {
    const int n = 10000;
    const Deployment d = Deployment::generate(NetworkConfig::dense(n, 7));
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += d.x(i);
        my += d.y(i);
    }
    mx /= n;
    my /= n;
    // sd of the sample mean of U[0,1] over 10^4 draws: (1/sqrt(12))/100
    const double tol = 3.0 * (1.0 / std::sqrt(12.0)) / 100.0;
    REQUIRE(std::abs(mx - 0.5) < tol);
    REQUIRE(std::abs(my - 0.5) < tol);
}

TEST_CASE("distance matches hand geometry") {
    NetworkConfig c = NetworkConfig::dense(3, 1);
    c.side_length = 10.0;
    const Deployment d =
        Deployment::from_positions(c, {0.0, 3.0, 1.0}, {0.0, 4.0, 1.0});
    REQUIRE(d.distance(0, 1) == Catch::Approx(5.0));        // 3-4-5 triangle
    REQUIRE(d.distance(0, 2) == Catch::Approx(std::sqrt(2.0)));
    REQUIRE(d.distance(1, 0) == d.distance(0, 1));
    REQUIRE_THROWS_AS(d.distance(1, 1), DegeneratePairError);
}

TEST_CASE("distances satisfy the triangle inequality") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(64, 11));
    rng::Stream pick(99);
    for (int t = 0; t < 500; ++t) {
        const int a = pick.uniform_int(64);
        int b = pick.uniform_int(64);
        int c = pick.uniform_int(64);
        if (b == a) b = (b + 1) % 64;
        if (c == a || c == b) c = (std::max(a, b) + 1) % 64;
        if (c == a || c == b) continue;
        REQUIRE(d.distance(a, c) <= d.distance(a, b) + d.distance(b, c) + 1e-12);
    }
}

TEST_CASE("extended deployment is the dense one rescaled") {
    const int n = 256;
    const Deployment dense = Deployment::generate(NetworkConfig::dense(n, 5));
    const Deployment ext = Deployment::generate(NetworkConfig::extended(n, 5));
    const double L = std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        REQUIRE(ext.x(i) == L * dense.x(i));
        REQUIRE(ext.y(i) == L * dense.y(i));
    }
}

TEST_CASE("config validation rejects nonsense") {
    NetworkConfig c = NetworkConfig::dense(1, 3);
    REQUIRE_THROWS_AS(Deployment::generate(c), ConfigError);
    c = NetworkConfig::dense(10, 3);
    c.path_loss_alpha = 1.5;
    REQUIRE_THROWS_AS(Deployment::generate(c), ConfigError);
    c = NetworkConfig::dense(10, 3);
    c.side_length = 0.0;
    REQUIRE_THROWS_AS(Deployment::generate(c), ConfigError);
    REQUIRE_THROWS_AS(
        Deployment::from_positions(NetworkConfig::dense(2, 1), {0.0, 1.5},
                                   {0.0, 0.5}),
        ConfigError);
}

TEST_CASE("deployment CSV has one row per node and round-trippable numbers") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(25, 9));
    std::ostringstream os;
    write_deployment_csv(d, os);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    REQUIRE(line == "node_id,x,y");
    int rows = 0;
    while (std::getline(is, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        REQUIRE(std::stoi(line.substr(0, c1)) == rows);
        const double x = std::strtod(line.c_str() + c1 + 1, nullptr);
        const double y = std::strtod(line.c_str() + c2 + 1, nullptr);
        REQUIRE(x == d.x(rows));
        REQUIRE(y == d.y(rows));
        ++rows;
    }
    REQUIRE(rows == 25);

    const nlohmann::json j = config_to_json(d.config());
    REQUIRE(j["n"] == 25);
    REQUIRE(j["mode"] == "dense");
    REQUIRE(j["seed"] == 9);
}
