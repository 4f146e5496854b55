#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "socap/errors.hpp"
#include "socap/social.hpp"

namespace socap {

// Order-of-growth regimes of the social pairing. With a growing group size
// the destination is essentially a uniform node regardless of gamma; with a
// constant group size the distance bias takes over once gamma reaches 2 and
// pins the destination to the local neighborhood once gamma exceeds 3.
enum class Regime { A, B, C };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::A: return "A";
        case Regime::B: return "B";
        default: return "C";
    }
}

inline Regime classify_regime(QGrowth q_growth, double gamma) {
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be nonnegative");
    if (q_growth == QGrowth::Growing || gamma < 2.0) return Regime::A;
    if (gamma <= 3.0) return Regime::B;
    return Regime::C;
}

enum class Protocol { MultiHop, HierarchicalCooperation };

inline const char* to_string(Protocol p) {
    return p == Protocol::MultiHop ? "mh" : "hc";
}

// n^n_exp * (log n)^log_pow * n^(eps_sign * eps) for an arbitrarily small
// eps > 0. The slack exponent is kept symbolic (a sign, not a number) so
// that order statements stay exact; log powers are real because regime
// boundaries contribute fractional powers of log n.
struct ScaleExpr {
    double n_exp = 0.0;
    double log_pow = 0.0;
    int eps_sign = 0;

    // Numeric value for a concrete n and slack.
    double evaluate(double n, double eps = 0.0) const {
        return std::pow(n, n_exp + eps_sign * eps) *
               std::pow(std::log(n), log_pow);
    }
};

// Scaling of the per-cell (or per-subnetwork) area, expressed as
// n^n_exp * (log n)^log_pow.
struct AreaScaling {
    double n_exp = 0.0;
    double log_pow = 0.0;

    // Theta(log n / n): smallest area that keeps dense cells populated.
    static AreaScaling min_dense() { return {-1.0, 1.0}; }
    // Theta(log n): smallest area that keeps extended cells populated.
    static AreaScaling min_extended() { return {0.0, 1.0}; }
    static AreaScaling constant() { return {0.0, 0.0}; }
};

struct TradeoffPoint {
    ScaleExpr throughput; // per-node
    ScaleExpr delay;
    Protocol protocol = Protocol::MultiHop;
    NetworkMode mode = NetworkMode::Dense;
    Regime regime = Regime::A;
    double gamma = 0.0;
    double alpha = 0.0;               // meaningful for extended results
    double b = 0.0;                   // HC duration exponent, 0 <= b < 1
    AreaScaling area;                 // MH cell-area scaling
    std::optional<int> hierarchy_level; // smallest h with b <= h/(h+1)
};

// Smallest hierarchy depth that supports duration exponent b.
inline int min_hierarchy_level(double b) {
    if (!(b >= 0.0) || b >= 1.0) throw ConfigError("b must lie in [0, 1)");
    return b == 0.0 ? 1 : static_cast<int>(std::ceil(b / (1.0 - b) - 1e-12));
}

namespace detail {

inline void require_gamma_regime(double gamma, QGrowth qg, Regime want) {
    const Regime got = classify_regime(qg, gamma);
    if (got != want)
        throw ConfigError(std::string("gamma/q_growth combination falls in regime ") +
                          to_string(got));
}

} // namespace detail

// Multihop trade-off in a dense network, as a function of the cell-area
// scaling. Larger cells shorten paths (fewer hops) but concentrate traffic,
// so both axes move together:
//   A: (1/sqrt(a), 1/sqrt(a))
//   B: ((n/log n)^(gamma/2-1)/sqrt(a), (log n/n)^(gamma/2-1)/sqrt(a))
//   C: (sqrt(n/(a log n)), sqrt(log n/(a n)))
// The admissible band keeps every cell populated (a >= log n/n) and the
// delay at least constant, which caps how large cells may grow in regimes B
// and C.
inline TradeoffPoint mh_tradeoff_dense(double gamma, QGrowth q_growth,
                                       const AreaScaling& area) {
    const Regime regime = classify_regime(q_growth, gamma);
    const double A = area.n_exp;
    const double Al = area.log_pow;
    double lo = -1.0, hi = 0.0;
    if (regime == Regime::B) hi = -(gamma - 2.0);
    if (regime == Regime::C) hi = -1.0;
    if (A < lo - 1e-12 || A > hi + 1e-12)
        throw DomainError("cell-area exponent outside the admissible band [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");

    TradeoffPoint t;
    t.protocol = Protocol::MultiHop;
    t.mode = NetworkMode::Dense;
    t.regime = regime;
    t.gamma = gamma;
    t.area = area;
    switch (regime) {
        case Regime::A:
            t.throughput = {-A / 2.0, -Al / 2.0, 0};
            t.delay = {-A / 2.0, -Al / 2.0, 0};
            break;
        case Regime::B: {
            const double s = gamma / 2.0 - 1.0;
            t.throughput = {s - A / 2.0, -s - Al / 2.0, 0};
            t.delay = {-s - A / 2.0, s - Al / 2.0, 0};
            break;
        }
        case Regime::C:
            t.throughput = {(1.0 - A) / 2.0, (-1.0 - Al) / 2.0, 0};
            t.delay = {-(1.0 + A) / 2.0, (1.0 - Al) / 2.0, 0};
            break;
    }
    return t;
}

// Multihop trade-off in an extended network. Hops now span physical distance
// sqrt(a), so the received power per hop drops as a^(-alpha/2) and the
// throughput pays a^((alpha+1)/2) overall:
//   A: (sqrt(n/a^(alpha+1)), sqrt(n/a))
//   B: ((n/log n)^(gamma/2-1) * sqrt(n/a^(alpha+1)),
//       (log n/n)^(gamma/2-1) * sqrt(n/a))
//   C: (n/sqrt(a^(alpha+1) log n), sqrt(log n/a))
// Admissible band: a >= log n (populated cells) up to the delay floor.
inline TradeoffPoint mh_tradeoff_extended(double gamma, QGrowth q_growth,
                                          double alpha,
                                          const AreaScaling& area) {
    if (!(alpha >= 2.0)) throw ConfigError("alpha must be at least 2");
    const Regime regime = classify_regime(q_growth, gamma);
    const double A = area.n_exp;
    const double Al = area.log_pow;
    double lo = 0.0, hi = 1.0;
    if (regime == Regime::B) hi = 3.0 - gamma;
    if (regime == Regime::C) hi = 0.0;
    if (A < lo - 1e-12 || A > hi + 1e-12)
        throw DomainError("cell-area exponent outside the admissible band [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");

    const double k = alpha + 1.0;
    TradeoffPoint t;
    t.protocol = Protocol::MultiHop;
    t.mode = NetworkMode::Extended;
    t.regime = regime;
    t.gamma = gamma;
    t.alpha = alpha;
    t.area = area;
    switch (regime) {
        case Regime::A:
            t.throughput = {(1.0 - k * A) / 2.0, -k * Al / 2.0, 0};
            t.delay = {(1.0 - A) / 2.0, -Al / 2.0, 0};
            break;
        case Regime::B: {
            const double s = gamma / 2.0 - 1.0;
            t.throughput = {s + (1.0 - k * A) / 2.0, -s - k * Al / 2.0, 0};
            t.delay = {-s + (1.0 - A) / 2.0, s - Al / 2.0, 0};
            break;
        }
        case Regime::C:
            t.throughput = {1.0 - k * A / 2.0, -(1.0 + k * Al) / 2.0, 0};
            t.delay = {-A / 2.0, (1.0 - Al) / 2.0, 0};
            break;
    }
    return t;
}

// Cooperative trade-off in a dense network as a function of the duration
// exponent b in [0, 1):
//   A: (n^(b-eps), n^(b+eps))
//   B: (n^(b-(gamma-2)(b-1)-eps), n^((3-gamma)b+eps))
//   C: (n^(1-eps), n^eps)
// Continuous across the regime boundaries at gamma = 2 and gamma = 3.
inline TradeoffPoint hc_tradeoff_dense(double gamma, QGrowth q_growth,
                                       double b) {
    if (!(b >= 0.0) || b >= 1.0) throw ConfigError("b must lie in [0, 1)");
    const Regime regime = classify_regime(q_growth, gamma);
    TradeoffPoint t;
    t.protocol = Protocol::HierarchicalCooperation;
    t.mode = NetworkMode::Dense;
    t.regime = regime;
    t.gamma = gamma;
    t.b = b;
    t.hierarchy_level = min_hierarchy_level(b);
    switch (regime) {
        case Regime::A:
            t.throughput = {b, 0.0, -1};
            t.delay = {b, 0.0, +1};
            break;
        case Regime::B:
            t.throughput = {b - (gamma - 2.0) * (b - 1.0), 0.0, -1};
            t.delay = {(3.0 - gamma) * b, 0.0, +1};
            break;
        case Regime::C:
            t.throughput = {1.0, 0.0, -1};
            t.delay = {0.0, 0.0, +1};
            break;
    }
    return t;
}

// Cooperative trade-off in an extended network. Long-range cooperation pays
// the full network attenuation, so alpha enters the throughput exponent:
//   A: (n^(b-alpha/2+1-eps), n^(b+eps))
//   B: (n^((b-alpha/2)(3-gamma)+1-eps), n^((3-gamma)b+eps))
//   C: (n^(1-eps), n^eps)
inline TradeoffPoint hc_tradeoff_extended(double gamma, QGrowth q_growth,
                                          double alpha, double b) {
    if (!(alpha >= 2.0)) throw ConfigError("alpha must be at least 2");
    if (!(b >= 0.0) || b >= 1.0) throw ConfigError("b must lie in [0, 1)");
    const Regime regime = classify_regime(q_growth, gamma);
    TradeoffPoint t;
    t.protocol = Protocol::HierarchicalCooperation;
    t.mode = NetworkMode::Extended;
    t.regime = regime;
    t.gamma = gamma;
    t.alpha = alpha;
    t.b = b;
    t.hierarchy_level = min_hierarchy_level(b);
    switch (regime) {
        case Regime::A:
            t.throughput = {b - alpha / 2.0 + 1.0, 0.0, -1};
            t.delay = {b, 0.0, +1};
            break;
        case Regime::B:
            t.throughput = {(b - alpha / 2.0) * (3.0 - gamma) + 1.0, 0.0, -1};
            t.delay = {(3.0 - gamma) * b, 0.0, +1};
            break;
        case Regime::C:
            t.throughput = {1.0, 0.0, -1};
            t.delay = {0.0, 0.0, +1};
            break;
    }
    return t;
}

// Bursty operation closes the power gap of cooperative transmission in
// extended networks: nodes stay silent except for a vanishing duty fraction
// n^-f and spend the saved energy when active. f depends only on the regime,
// gamma, and alpha, and is always nonnegative:
//   A: f = alpha/2 - 1 + eps
//   B: f = (1 - alpha/2)(gamma - 3) + eps
//   C: f = eps
struct BurstyPlan {
    double duty_exponent = 0.0; // active fraction scales as n^-(duty_exponent + eps)
    Regime regime = Regime::A;
};

inline BurstyPlan bursty_fraction(Regime regime, double gamma, double alpha) {
    if (!(alpha >= 2.0)) throw ConfigError("alpha must be at least 2");
    BurstyPlan p;
    p.regime = regime;
    switch (regime) {
        case Regime::A:
            p.duty_exponent = alpha / 2.0 - 1.0;
            break;
        case Regime::B:
            if (!(gamma >= 2.0) || gamma > 3.0)
                throw ConfigError("regime B requires gamma in [2, 3]");
            p.duty_exponent = (1.0 - alpha / 2.0) * (gamma - 3.0);
            break;
        case Regime::C:
            p.duty_exponent = 0.0;
            break;
    }
    return p;
}

// Which protocol achieves the better throughput-delay frontier, judged over
// the delay range where at least one of them still sustains nonvanishing
// per-node throughput.
enum class Dominance { HcAtLeastMh, MhStrict, Tie, Crossover };

inline const char* to_string(Dominance d) {
    switch (d) {
        case Dominance::HcAtLeastMh: return "hc";
        case Dominance::MhStrict: return "mh";
        case Dominance::Tie: return "tie";
        default: return "crossover";
    }
}

struct DominanceResult {
    Dominance kind = Dominance::Tie;
    Regime regime = Regime::A;
    std::string detail;
};

// In regime B of an extended network, multihop wins the meaningful frontier
// exactly when gamma is at or below this threshold.
inline double regime_b_mh_gamma_threshold(double alpha) {
    if (!(alpha > std::sqrt(2.0)))
        throw ConfigError("threshold undefined for alpha^2 <= 2");
    return (3.0 * alpha * alpha - 2.0 * alpha - 6.0) / (alpha * alpha - 2.0);
}

inline DominanceResult dominant_protocol(double gamma, QGrowth q_growth,
                                         double alpha, NetworkMode mode) {
    if (!(alpha >= 2.0)) throw ConfigError("alpha must be at least 2");
    DominanceResult r;
    r.regime = classify_regime(q_growth, gamma);
    if (mode == NetworkMode::Dense) {
        // Equal frontier up to the multihop delay ceiling, beyond which only
        // cooperation keeps trading delay for throughput.
        r.kind = Dominance::HcAtLeastMh;
        r.detail = "cooperative frontier contains the multihop frontier";
        return r;
    }
    if (r.regime == Regime::C) {
        r.kind = Dominance::Tie;
        r.detail = "both protocols reach (n^(1-eps), n^eps)";
        return r;
    }
    if (alpha == 2.0) {
        r.kind = Dominance::HcAtLeastMh;
        r.detail = "no attenuation gap at alpha = 2";
        return r;
    }
    if (r.regime == Regime::A) {
        const double cutoff = 1.0 + std::sqrt(3.0);
        if (alpha > cutoff) {
            r.kind = Dominance::MhStrict;
            r.detail = "alpha above 1+sqrt(3)";
        } else {
            r.kind = Dominance::Crossover;
            r.detail = "frontiers cross at positive throughput exponent";
        }
        return r;
    }
    const double threshold = regime_b_mh_gamma_threshold(alpha);
    if (gamma <= threshold) {
        r.kind = Dominance::MhStrict;
        r.detail = "gamma at or below " + std::to_string(threshold);
    } else {
        r.kind = Dominance::Crossover;
        r.detail = "gamma above " + std::to_string(threshold);
    }
    return r;
}

} // namespace socap
