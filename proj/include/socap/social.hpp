#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include "socap/errors.hpp"
#include "socap/geometry.hpp"
#include "socap/rng.hpp"

namespace socap {

// Whether the group size q is meant as a constant or as a quantity that
// grows with n. All simulations run at a concrete q; the flag only feeds the
// closed-form scaling module, where the two cases land in different regimes.
enum class QGrowth { Constant, Growing };

struct SocialParams {
    double gamma = 0.0;  // distance bias of group formation, >= 0
    int q = 1;           // group size, 1 <= q <= n - 1
    QGrowth q_growth = QGrowth::Constant;

    void validate(int n) const {
        if (!(gamma >= 0.0)) throw ConfigError("gamma must be nonnegative");
        if (q < 1 || q > n - 1)
            throw ConfigError("q must lie in [1, n-1], got " + std::to_string(q));
    }
};

struct SocialAssignment {
    std::vector<std::vector<int>> groups;  // per source, sorted node ids
    std::vector<int> destinations;         // per source, member of its group
};

namespace detail {

inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-(std::abs(a - b))));
}

// d2^-g for small integral g without transcendentals.
inline double neg_int_pow(double d2, int g) {
    double acc = 1.0;
    for (int k = 0; k < g; ++k) acc *= d2;
    return 1.0 / acc;
}

} // namespace detail

// Exact sampler of a source's social group.
//
// A group is a size-q subset S of the other nodes, drawn with probability
// proportional to prod_{v in S} d(s,v)^-gamma. Sequentially picking q nodes
// by weight does not produce this distribution; instead the sampler scans
// the candidates once and includes candidate i, with k slots still open,
// with probability
//
//     w_i * e_{k-1}(w_{i+1..N}) / e_k(w_{i..N}),
//
// where e_k is the elementary symmetric polynomial. The suffix table of
// log e_k values is built once per source in O(n*q) time and memory, in log
// space so that large gamma (weights spanning hundreds of orders of
// magnitude) cannot overflow or underflow. A chain of these conditionals
// telescopes to exactly the subset probability above.
//
// q == 1 degenerates to a categorical draw over the weights and skips the
// table; with gamma an even integer the weights are formed by plain
// multiplication, which keeps full-assignment construction cheap at large n.
class GroupSampler {
public:
    GroupSampler(const Deployment& d, const SocialParams& p, int source)
        : q_(p.q), gamma_(p.gamma) {
        const int n = d.size();
        p.validate(n);
        if (source < 0 || source >= n)
            throw ConfigError("source id out of range");
        candidates_.reserve(n - 1);
        dist_sq_.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j == source) continue;
            const double d2 = d.distance_sq(source, j);
            if (!(d2 > 0.0)) throw DegeneratePairError(source, j);
            candidates_.push_back(j);
            dist_sq_.push_back(d2);
        }
        if (q_ >= 2) build_table();
    }

    int group_size() const { return q_; }
    const std::vector<int>& candidates() const { return candidates_; }

    std::vector<int> sample(rng::Stream& rs) const {
        const int N = static_cast<int>(candidates_.size());
        if (q_ == N) return candidates_;
        if (q_ == 1) return {candidates_[sample_single(rs)]};

        std::vector<int> out;
        out.reserve(q_);
        int open = q_;
        for (int i = 0; i < N && open > 0; ++i) {
            // log of: w_i * e_{open-1}(suffix after i) / e_open(suffix at i).
            // When the remaining candidates exactly fill the open slots the
            // two terms cancel and the probability is exactly 1.
            const double lp =
                log_weight(i) + table_at(i + 1, open - 1) - table_at(i, open);
            const double p_inc = lp >= 0.0 ? 1.0 : std::exp(lp);
            if (rs.uniform01() < p_inc) {
                out.push_back(candidates_[i]);
                --open;
            }
        }
        if (open != 0)
            throw NumericError("group sampler failed to fill the subset");
        return out;
    }

    // log of the probability assigned to one specific subset of candidate
    // list positions. Exposed for exactness tests against enumeration.
    double subset_log_prob(const std::vector<int>& positions) const {
        if (static_cast<int>(positions.size()) != q_)
            throw DomainError("subset size differs from q");
        double s = 0.0;
        for (int i : positions) s += log_weight(i);
        return s - log_normalizer();
    }

    // log of e_q over all candidate weights (the normalizing constant).
    double log_normalizer() const {
        if (q_ == 1) {
            double acc = -std::numeric_limits<double>::infinity();
            const int N = static_cast<int>(candidates_.size());
            for (int i = 0; i < N; ++i)
                acc = detail::log_add_exp(acc, log_weight(i));
            return acc;
        }
        return table_at(0, q_);
    }

    double log_weight(int position) const {
        return gamma_ == 0.0 ? 0.0 : -0.5 * gamma_ * std::log(dist_sq_[position]);
    }

private:
    // Linear weights with a fast path for even integral gamma. Falls back to
    // a log-space draw if the linear form ever leaves double range.
    int sample_single(rng::Stream& rs) const {
        const int N = static_cast<int>(candidates_.size());
        if (gamma_ == 0.0) return rs.uniform_int(N);

        static thread_local std::vector<double> w;
        w.resize(N);
        const double half_gamma = 0.5 * gamma_;
        const double rounded = std::round(half_gamma);
        const bool integral =
            std::abs(half_gamma - rounded) < 1e-12 && rounded <= 32;
        double total = 0.0;
        bool overflow = false;
        for (int i = 0; i < N; ++i) {
            const double wi =
                integral ? detail::neg_int_pow(dist_sq_[i],
                                               static_cast<int>(rounded))
                         : std::pow(dist_sq_[i], -half_gamma);
            if (!std::isfinite(wi)) {
                overflow = true;
                break;
            }
            w[i] = wi;
            total += wi;
        }
        if (overflow || !std::isfinite(total) || total <= 0.0) {
            double lmax = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < N; ++i) lmax = std::max(lmax, log_weight(i));
            total = 0.0;
            for (int i = 0; i < N; ++i) {
                w[i] = std::exp(log_weight(i) - lmax);
                total += w[i];
            }
        }
        const double u = rs.uniform01() * total;
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
            acc += w[i];
            if (u < acc) return i;
        }
        return N - 1; // rounding pushed u past the last partial sum
    }

    void build_table() {
        const int N = static_cast<int>(candidates_.size());
        const int cols = q_ + 1;
        table_.assign(static_cast<std::size_t>(N + 1) * cols,
                      -std::numeric_limits<double>::infinity());
        for (int i = 0; i <= N; ++i) table_[i * static_cast<std::size_t>(cols)] = 0.0;
        for (int i = N - 1; i >= 0; --i) {
            const double lw = log_weight(i);
            for (int k = 1; k <= q_; ++k) {
                table_[i * static_cast<std::size_t>(cols) + k] =
                    detail::log_add_exp(table_at(i + 1, k),
                                        lw + table_at(i + 1, k - 1));
            }
        }
    }

    double table_at(int i, int k) const {
        return table_[i * static_cast<std::size_t>(q_ + 1) + k];
    }

    int q_;
    double gamma_;
    std::vector<int> candidates_;
    std::vector<double> dist_sq_;
    std::vector<double> table_;
};

inline std::vector<int> sample_social_group(const Deployment& d,
                                            const SocialParams& p, int source,
                                            rng::Stream& rs) {
    return GroupSampler(d, p, source).sample(rs);
}

// Destination is drawn uniformly from the source's group.
inline int select_destination(const std::vector<int>& group, rng::Stream& rs) {
    if (group.empty()) throw ConfigError("cannot pick a destination from an empty group");
    return group[rs.uniform_int(static_cast<int>(group.size()))];
}

// One group and one destination per source, each from its own substream, so
// the assignment is a pure function of (deployment, params). Two sources may
// select the same destination; nothing requires the pairing to be a matching.
inline SocialAssignment build_social_assignment(const Deployment& d,
                                                const SocialParams& p) {
    p.validate(d.size());
    SocialAssignment a;
    const int n = d.size();
    a.groups.resize(n);
    a.destinations.resize(n);
    const std::uint64_t seed = d.config().seed;
    for (int s = 0; s < n; ++s) {
        rng::Stream gs(rng::mix(seed, rng::kGroups, static_cast<std::uint64_t>(s)));
        a.groups[s] = GroupSampler(d, p, s).sample(gs);
        rng::Stream ds(rng::mix(seed, rng::kDestinations, static_cast<std::uint64_t>(s)));
        a.destinations[s] = select_destination(a.groups[s], ds);
    }
    return a;
}

struct MeanEstimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    int trials = 0;
};

struct TailEstimate {
    double fraction = 0.0;
    double stderr_of_fraction = 0.0;
    double mean_used = 0.0;
    int trials = 0;
};

namespace detail {

inline std::vector<double> sd_distance_samples(const Deployment& d,
                                               const SocialParams& p,
                                               int trials,
                                               std::uint64_t salt) {
    if (trials < 1) throw ConfigError("trials must be positive");
    p.validate(d.size());
    std::vector<double> samples;
    samples.reserve(trials);
    const std::uint64_t seed = d.config().seed;
    for (int t = 0; t < trials; ++t) {
        rng::Stream rs(rng::mix(seed, rng::kEstimator + salt,
                                static_cast<std::uint64_t>(t)));
        const int source = rs.uniform_int(d.size());
        GroupSampler sampler(d, p, source);
        const std::vector<int> group = sampler.sample(rs);
        const int dest = select_destination(group, rs);
        samples.push_back(d.distance(source, dest));
    }
    return samples;
}

} // namespace detail

// Monte Carlo estimate of the mean source-destination distance on one
// deployment: each trial draws a uniform source, a fresh group for it, and a
// destination. Deterministic in (deployment seed, trials, salt).
inline MeanEstimate empirical_mean_sd_distance(const Deployment& d,
                                               const SocialParams& p,
                                               int trials,
                                               std::uint64_t salt = 0) {
    const std::vector<double> s = detail::sd_distance_samples(d, p, trials, salt);
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var = s.size() > 1 ? var / static_cast<double>(s.size() - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(s.size())),
            static_cast<int>(s.size())};
}

// Empirical fraction of S-D distances at or above threshold_multiplier times
// the empirical mean of the same sample set.
inline TailEstimate sd_tail_fraction(const Deployment& d, const SocialParams& p,
                                     int trials, double threshold_multiplier,
                                     std::uint64_t salt = 0) {
    if (!(threshold_multiplier > 0.0))
        throw ConfigError("threshold multiplier must be positive");
    const std::vector<double> s = detail::sd_distance_samples(d, p, trials, salt);
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    int hits = 0;
    for (double v : s)
        if (v >= threshold_multiplier * mean) ++hits;
    const double f = static_cast<double>(hits) / static_cast<double>(s.size());
    return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(s.size())), mean,
            static_cast<int>(s.size())};
}

// CSV: one row per source with its group members and chosen destination.
// Groups are variable-length, so members are packed into one ;-separated
// field to keep the row count fixed.
inline void write_social_csv(const SocialAssignment& a, std::ostream& os) {
    os << "source_id,group,destination_id\n";
    for (std::size_t s = 0; s < a.groups.size(); ++s) {
        os << s << ',';
        for (std::size_t k = 0; k < a.groups[s].size(); ++k) {
            if (k) os << ';';
            os << a.groups[s][k];
        }
        os << ',' << a.destinations[s] << '\n';
    }
}

} // namespace socap
