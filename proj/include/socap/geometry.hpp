#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "socap/errors.hpp"
#include "socap/rng.hpp"

#include "json.hpp"

namespace socap {

// Two deployment conventions share one code path. A dense network keeps the
// area fixed at 1 while n grows, an extended network keeps the node density
// fixed at 1 by growing the area to n. Custom side lengths (for example a
// physical 100 m x 100 m testbed) are allowed under either label; nothing in
// the engines branches on the mode, it is carried so results are
// self-describing.
enum class NetworkMode { Dense, Extended };

inline const char* to_string(NetworkMode m) {
    return m == NetworkMode::Dense ? "dense" : "extended";
}

struct NetworkConfig {
    int n = 0;                    // node count, n >= 2
    NetworkMode mode = NetworkMode::Dense;
    double side_length = 1.0;     // network is [0, side_length]^2
    std::uint64_t seed = 1;
    double path_loss_alpha = 3.0; // attenuation exponent, >= 2
    double power = 1.0;           // per-node transmit power in noise units

    static NetworkConfig dense(int n, std::uint64_t seed) {
        NetworkConfig c;
        c.n = n;
        c.mode = NetworkMode::Dense;
        c.side_length = 1.0;
        c.seed = seed;
        return c;
    }

    static NetworkConfig extended(int n, std::uint64_t seed) {
        NetworkConfig c;
        c.n = n;
        c.mode = NetworkMode::Extended;
        c.side_length = std::sqrt(static_cast<double>(n));
        c.seed = seed;
        return c;
    }

    void validate() const {
        if (n < 2) throw ConfigError("n must be at least 2, got " + std::to_string(n));
        if (!(side_length > 0.0))
            throw ConfigError("side_length must be positive");
        if (!(path_loss_alpha >= 2.0))
            throw ConfigError("path_loss_alpha must be at least 2 (far-field model)");
        if (!(power >= 0.0)) throw ConfigError("power must be nonnegative");
    }
};

// Node positions drawn i.i.d. uniform over the square. Positions are
// generated as side_length * u with u in [0, 1), so two deployments with the
// same seed and different side lengths are exact rescalings of each other.
class Deployment {
public:
    static Deployment generate(const NetworkConfig& config) {
        config.validate();
        Deployment d;
        d.config_ = config;
        d.xs_.resize(config.n);
        d.ys_.resize(config.n);
        rng::Stream s(rng::mix(config.seed, rng::kPositions));
        for (int i = 0; i < config.n; ++i) {
            d.xs_[i] = config.side_length * s.uniform01();
            d.ys_[i] = config.side_length * s.uniform01();
        }
        return d;
    }

    // Builds a deployment from externally chosen positions (tests, replays).
    static Deployment from_positions(const NetworkConfig& config,
                                     std::vector<double> xs,
                                     std::vector<double> ys) {
        config.validate();
        if (xs.size() != ys.size() ||
            static_cast<int>(xs.size()) != config.n)
            throw ConfigError("position count does not match config.n");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!(xs[i] >= 0.0) || xs[i] > config.side_length ||
                !(ys[i] >= 0.0) || ys[i] > config.side_length)
                throw ConfigError("node " + std::to_string(i) +
                                  " lies outside the deployment square");
        }
        Deployment d;
        d.config_ = config;
        d.xs_ = std::move(xs);
        d.ys_ = std::move(ys);
        return d;
    }

    const NetworkConfig& config() const { return config_; }
    int size() const { return config_.n; }
    double side() const { return config_.side_length; }
    double x(int i) const { return xs_[i]; }
    double y(int i) const { return ys_[i]; }

    double distance_sq(int i, int j) const {
        const double dx = xs_[i] - xs_[j];
        const double dy = ys_[i] - ys_[j];
        return dx * dx + dy * dy;
    }

    // Euclidean distance between two distinct nodes. Asking for the distance
    // of a node to itself is always a logic error upstream.
    double distance(int i, int j) const {
        if (i == j) throw DegeneratePairError(i, j);
        return std::sqrt(distance_sq(i, j));
    }

private:
    NetworkConfig config_;
    std::vector<double> xs_, ys_;
};

inline nlohmann::json config_to_json(const NetworkConfig& c) {
    return nlohmann::json{{"n", c.n},
                          {"mode", to_string(c.mode)},
                          {"side_length", c.side_length},
                          {"seed", c.seed},
                          {"path_loss_alpha", c.path_loss_alpha},
                          {"power", c.power}};
}

namespace detail {
// Shortest decimal form that round-trips a double.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[32];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
            if (std::strtod(shorter, nullptr) == v) return shorter;
        }
    }
    return buf;
}
} // namespace detail

inline void write_deployment_csv(const Deployment& d, std::ostream& os) {
    os << "node_id,x,y\n";
    for (int i = 0; i < d.size(); ++i)
        os << i << ',' << detail::fmt_double(d.x(i)) << ','
           << detail::fmt_double(d.y(i)) << '\n';
}

} // namespace socap
