#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "socap/errors.hpp"
#include "socap/geometry.hpp"
#include "socap/mh.hpp"
#include "socap/rng.hpp"
#include "socap/scaling.hpp"
#include "socap/social.hpp"

namespace socap {

// Partition of the square into subnetworks of side l, replicated four times
// with half-side shifts: (0,0), (l/2,0), (0,l/2), (l/2,l/2). A shifted grid
// keeps a clipped strip at the leading border so the four layouts all cover
// the square. Any two points within l/2 of each other on both axes share a
// subnetwork in at least one of the four layouts, which is what lets pairs
// be served locally; the four layouts are time-shared as TDMA slots.
class SubnetworkPlan {
public:
    static constexpr int kFallback = -1;
    static constexpr int kSlots = 4;

    struct SlotGrid {
        double shift_x = 0.0;
        double shift_y = 0.0;
        int count_x = 0;
        int count_y = 0;
        std::vector<int> node_subnet;          // per node, flattened index
        std::vector<std::vector<int>> members; // per subnetwork, node ids
    };

    SubnetworkPlan(const Deployment& d, double side) : side_(side), L_(d.side()) {
        if (!(side > 0.0) || side > L_ + 1e-12)
            throw ConfigError("subnetwork side must lie in (0, L]");
        for (int s = 0; s < kSlots; ++s) {
            SlotGrid& g = slots_[s];
            g.shift_x = (s == 1 || s == 3) ? side_ / 2.0 : 0.0;
            g.shift_y = (s == 2 || s == 3) ? side_ / 2.0 : 0.0;
            g.count_x = axis_count(g.shift_x);
            g.count_y = axis_count(g.shift_y);
            g.members.assign(
                static_cast<std::size_t>(g.count_x) * g.count_y, {});
            g.node_subnet.resize(d.size());
            for (int i = 0; i < d.size(); ++i) {
                const int idx = point_index(s, d.x(i), d.y(i));
                g.node_subnet[i] = idx;
                g.members[idx].push_back(i);
            }
        }
    }

    double side() const { return side_; }
    double region_side() const { return L_; }
    const SlotGrid& slot(int s) const { return slots_[s]; }

    int subnet_of_node(int slot, int node) const {
        return slots_[slot].node_subnet[node];
    }

    // Flattened subnetwork index of a point under one slot's layout.
    int point_index(int slot, double x, double y) const {
        const SlotGrid& g = slots_[slot];
        return axis_index(x, g.shift_x, g.count_x) +
               g.count_x * axis_index(y, g.shift_y, g.count_y);
    }

    // First slot whose layout puts both points in one subnetwork, or
    // kFallback when none of the four does.
    int slot_for_points(double x1, double y1, double x2, double y2) const {
        for (int s = 0; s < kSlots; ++s)
            if (point_index(s, x1, y1) == point_index(s, x2, y2)) return s;
        return kFallback;
    }

private:
    int axis_count(double shift) const {
        if (shift == 0.0)
            return std::max(1, static_cast<int>(std::ceil(L_ / side_ - 1e-9)));
        // Clipped leading strip [0, shift), then full tiles from shift on.
        return 1 + std::max(1, static_cast<int>(
                                   std::ceil((L_ - shift) / side_ - 1e-9)));
    }

    int axis_index(double v, double shift, int count) const {
        int idx;
        if (shift == 0.0)
            idx = static_cast<int>(std::floor(v / side_));
        else if (v < shift)
            idx = 0;
        else
            idx = 1 + static_cast<int>(std::floor((v - shift) / side_));
        return std::clamp(idx, 0, count - 1);
    }

    double side_;
    double L_;
    std::array<SlotGrid, kSlots> slots_;
};

inline SubnetworkPlan decompose(const Deployment& d, double side) {
    return SubnetworkPlan(d, side);
}

// Direct form: an explicit per-side tile count instead of a side length.
inline SubnetworkPlan decompose_tiles(const Deployment& d, int tiles_per_side) {
    if (tiles_per_side < 1)
        throw ConfigError("tiles_per_side must be at least 1");
    return SubnetworkPlan(d, d.side() / static_cast<double>(tiles_per_side));
}

// Subnetwork side from the empirical mean S-D distance: l = mean * n^eps,
// clamped to the region. The n^eps slack absorbs the S-D distance tail, so
// all but a vanishing fraction of pairs fit within one subnetwork span.
inline double side_length(double mean_sd_distance, int n, double epsilon,
                          double region_side) {
    if (!(mean_sd_distance > 0.0))
        throw ConfigError("mean S-D distance must be positive");
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
    return std::min(region_side,
                    mean_sd_distance * std::pow(static_cast<double>(n), epsilon));
}

// Slot of each pair, in pair order; kFallback marks pairs no layout serves.
inline std::vector<int> assign_slots(
    const SubnetworkPlan& plan, const Deployment& d,
    const std::vector<std::pair<int, int>>& pairs) {
    std::vector<int> out;
    out.reserve(pairs.size());
    for (const auto& [s, v] : pairs) {
        if (s < 0 || s >= d.size() || v < 0 || v >= d.size())
            throw ConfigError("pair references a node outside the deployment");
        if (s == v) throw DegeneratePairError(s, v);
        int slot = SubnetworkPlan::kFallback;
        for (int c = 0; c < SubnetworkPlan::kSlots; ++c) {
            if (plan.subnet_of_node(c, s) == plan.subnet_of_node(c, v)) {
                slot = c;
                break;
            }
        }
        out.push_back(slot);
    }
    return out;
}

// Average transmit power per node of the cooperative schedule, with total
// cluster power P spread over a subnetwork of expected size n*(l/L)^2 and
// attenuation paid over the subnetwork span: P * (L/l)^2 / n * l^alpha,
// i.e. (P L^2 / n) * l^(alpha-2).
inline double hc_power_per_node(const SubnetworkPlan& plan,
                                const NetworkConfig& config) {
    const double l = plan.side();
    const double L = plan.region_side();
    return config.power * L * L / static_cast<double>(config.n) *
           std::pow(l, config.path_loss_alpha - 2.0);
}

// Dense row-major complex matrix, sized for cluster dimensions (tens to a
// few hundred), not for general linear algebra.
struct ComplexMatrix {
    int size = 0;
    std::vector<std::complex<double>> a; // row-major

    std::complex<double>& at(int r, int c) { return a[static_cast<std::size_t>(r) * size + c]; }
    const std::complex<double>& at(int r, int c) const {
        return a[static_cast<std::size_t>(r) * size + c];
    }
};

struct MimoLink {
    std::vector<int> tx; // transmit cluster, first entry is the source
    std::vector<int> rx; // receive cluster, first entry is the destination
};

// Clusters of equal size M around a served pair, drawn from one
// subnetwork's nodes. Every node goes to the side whose center (source or
// destination) is nearer, then each cluster keeps its M nearest members.
// M targets ceil(fraction * nodes) but never exceeds what both sides can
// feed, so an odd split shrinks the clusters instead of failing; only a
// subnetwork that cannot host two nonempty disjoint clusters is an error.
inline MimoLink build_clusters(const Deployment& d,
                               const std::vector<int>& subnet_nodes,
                               int source, int dest, double cluster_fraction) {
    if (!(cluster_fraction > 0.0) || cluster_fraction > 1.0)
        throw ConfigError("cluster_fraction must lie in (0, 1]");
    const int m = static_cast<int>(subnet_nodes.size());
    if (m < 2)
        throw ClusterSizeError("subnetwork with " + std::to_string(m) +
                               " nodes cannot host two clusters");
    const int target = std::min(
        static_cast<int>(std::ceil(cluster_fraction * m)), m / 2);

    std::vector<int> tx_side, rx_side;
    tx_side.reserve(subnet_nodes.size());
    rx_side.reserve(subnet_nodes.size());
    for (int node : subnet_nodes) {
        const double to_src = node == source ? 0.0 : d.distance_sq(node, source);
        const double to_dst = node == dest ? 0.0 : d.distance_sq(node, dest);
        (to_src <= to_dst ? tx_side : rx_side).push_back(node);
    }
    const int M = std::max(
        1, std::min({target, static_cast<int>(tx_side.size()),
                     static_cast<int>(rx_side.size())}));
    auto keep_nearest = [&](std::vector<int>& v, int center) {
        std::sort(v.begin(), v.end(), [&](int a, int b) {
            const double da = a == center ? 0.0 : d.distance_sq(a, center);
            const double db = b == center ? 0.0 : d.distance_sq(b, center);
            if (da != db) return da < db;
            return a < b;
        });
        v.resize(M);
    };
    if (tx_side.empty() || rx_side.empty())
        throw ClusterSizeError("pair endpoints coincide in cluster geometry");
    keep_nearest(tx_side, source);
    keep_nearest(rx_side, dest);
    return {std::move(tx_side), std::move(rx_side)};
}

// Channel matrix between the clusters of a link: entry (k, i) couples
// transmit node i to receive node k with unit-magnitude random phase and
// amplitude d^(-alpha/2). Far field: coincident nodes are rejected.
inline ComplexMatrix draw_channel(const Deployment& d, const MimoLink& link,
                                  rng::Stream& phases) {
    const int M = static_cast<int>(link.tx.size());
    if (M == 0 || link.rx.size() != link.tx.size())
        throw ConfigError("link clusters must be nonempty and equal-sized");
    const double alpha = d.config().path_loss_alpha;
    ComplexMatrix H;
    H.size = M;
    H.a.resize(static_cast<std::size_t>(M) * M);
    for (int k = 0; k < M; ++k) {
        for (int i = 0; i < M; ++i) {
            const int rx = link.rx[k];
            const int tx = link.tx[i];
            const double d2 = d.distance_sq(rx, tx);
            if (!(d2 > 0.0)) throw DegeneratePairError(rx, tx);
            const double amp = std::pow(d2, -alpha / 4.0);
            const double th = phases.angle();
            H.at(k, i) = std::polar(amp, th);
        }
    }
    return H;
}

// log2 det(I + p H H*) via Cholesky factorization of the Hermitian
// positive-definite matrix I + p H H*. The factor's diagonal is real and
// positive, so the log-determinant accumulates without forming the
// (astronomically large or small) determinant itself.
inline double mimo_capacity(const ComplexMatrix& H, double per_node_power) {
    if (!(per_node_power >= 0.0)) throw ConfigError("power must be nonnegative");
    const int M = H.size;
    ComplexMatrix A;
    A.size = M;
    A.a.assign(static_cast<std::size_t>(M) * M, {0.0, 0.0});
    for (int r = 0; r < M; ++r) {
        for (int c = 0; c <= r; ++c) {
            std::complex<double> acc{0.0, 0.0};
            for (int i = 0; i < M; ++i)
                acc += H.at(r, i) * std::conj(H.at(c, i));
            acc *= per_node_power;
            if (r == c) acc += 1.0;
            A.at(r, c) = acc;
        }
    }
    // In-place lower Cholesky on A; only the lower triangle is touched.
    double log2_det = 0.0;
    for (int j = 0; j < M; ++j) {
        double diag = A.at(j, j).real();
        for (int k = 0; k < j; ++k) diag -= std::norm(A.at(j, k));
        if (!(diag > 0.0) || !std::isfinite(diag))
            throw NumericError("Cholesky breakdown in capacity computation");
        const double l_jj = std::sqrt(diag);
        log2_det += 2.0 * std::log2(l_jj);
        for (int r = j + 1; r < M; ++r) {
            std::complex<double> acc = A.at(r, j);
            for (int k = 0; k < j; ++k)
                acc -= A.at(r, k) * std::conj(A.at(j, k));
            A.at(r, j) = acc / l_jj;
        }
        A.at(j, j) = l_jj;
    }
    return std::max(0.0, log2_det);
}

struct HcOptions {
    double cluster_fraction = 0.5;
    int phase_trials = 20;
    std::optional<double> b; // duration exponent, enables the analytic delay
    std::uint64_t stream_salt = 0;
};

struct HcResult {
    double total_throughput = 0.0;    // mimo_throughput + fallback_throughput
    double mimo_throughput = 0.0;     // slot sums / 4, averaged over trials
    double fallback_throughput = 0.0; // multihop score of unserved pairs
    std::array<int, 4> active_subnetworks{}; // served subnetworks per slot
    std::array<double, 4> slot_throughput{}; // per-slot mean sum, pre 1/4
    double fallback_fraction = 0.0;
    double analytic_delay_exponent = std::numeric_limits<double>::quiet_NaN();
    int phase_trials = 0;
};

namespace detail {

// Multihop score of the fallback pairs. The grid starts at the populated
// floor (4 L^2 log n / n) and doubles until no cell is empty; a single cell
// always succeeds, so the loop terminates.
inline double fallback_mh_throughput(const Deployment& d,
                                     const std::vector<std::pair<int, int>>& pairs) {
    const double L = d.side();
    const double n = static_cast<double>(d.size());
    double area = std::min(L * L, 4.0 * L * L * std::log(n) / n);
    for (;;) {
        try {
            MhOptions opt;
            opt.cell_area = area;
            return simulate_mh_pairs(d, pairs, opt).aggregate_throughput;
        } catch (const EmptyCellError&) {
            area *= 2.0;
            if (area > L * L) area = L * L;
        }
    }
}

} // namespace detail

// One cooperative round over the four slot layouts. In each slot, every
// subnetwork with pairs assigned to that slot serves one of them through a
// cluster-to-cluster link: per trial the served pair and the channel phases
// are redrawn, the link capacity is log2 det(I + (P/M) H H*), and the slot's
// capacities add across subnetworks (they operate in parallel). Slots time-
// share, so the cooperative throughput is the slot sum divided by 4. Pairs
// no layout serves fall back to multihop routing and their score is added on
// top.
inline HcResult simulate_hc(const Deployment& d, const SocialParams& params,
                            const SocialAssignment& soc,
                            const SubnetworkPlan& plan, const HcOptions& opt) {
    if (opt.phase_trials < 1) throw ConfigError("phase_trials must be positive");
    const int n = d.size();
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(n);
    for (int s = 0; s < n; ++s) pairs.emplace_back(s, soc.destinations[s]);
    const std::vector<int> slots = assign_slots(plan, d, pairs);

    // slot -> subnetwork -> indices into `pairs`
    std::array<std::vector<std::vector<int>>, 4> served;
    std::vector<std::pair<int, int>> fallback;
    for (int s = 0; s < 4; ++s) {
        const auto& grid = plan.slot(s);
        served[s].assign(grid.members.size(), {});
    }
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        const int slot = slots[pi];
        if (slot == SubnetworkPlan::kFallback) {
            fallback.push_back(pairs[pi]);
            continue;
        }
        const int segment = plan.subnet_of_node(slot, pairs[pi].first);
        served[slot][segment].push_back(static_cast<int>(pi));
    }

    HcResult r;
    r.phase_trials = opt.phase_trials;
    r.fallback_fraction =
        static_cast<double>(fallback.size()) / static_cast<double>(n);

    const double P = d.config().power;
    const std::uint64_t seed = d.config().seed;
    for (int slot = 0; slot < 4; ++slot) {
        double slot_sum = 0.0;
        int active = 0;
        for (std::size_t sub = 0; sub < served[slot].size(); ++sub) {
            const std::vector<int>& plist = served[slot][sub];
            if (plist.empty()) continue;
            ++active;
            const std::vector<int>& nodes = plan.slot(slot).members[sub];
            const std::uint64_t link_id =
                static_cast<std::uint64_t>(slot) * served[slot].size() + sub;
            for (int t = 0; t < opt.phase_trials; ++t) {
                rng::Stream pick(rng::mix(seed, rng::kPairChoice + opt.stream_salt,
                                          link_id, static_cast<std::uint64_t>(t)));
                const auto& [src, dst] =
                    pairs[plist[pick.uniform_int(static_cast<int>(plist.size()))]];
                const MimoLink link =
                    build_clusters(d, nodes, src, dst, opt.cluster_fraction);
                rng::Stream phases(rng::mix(seed, rng::kPhases + opt.stream_salt,
                                            link_id, static_cast<std::uint64_t>(t)));
                const ComplexMatrix H = draw_channel(d, link, phases);
                const double M = static_cast<double>(link.tx.size());
                slot_sum += mimo_capacity(H, P / M);
            }
        }
        r.slot_throughput[slot] = slot_sum / static_cast<double>(opt.phase_trials);
        r.active_subnetworks[slot] = active;
    }
    for (double s : r.slot_throughput) r.mimo_throughput += s;
    r.mimo_throughput /= 4.0;

    if (!fallback.empty())
        r.fallback_throughput = detail::fallback_mh_throughput(d, fallback);
    r.total_throughput = r.mimo_throughput + r.fallback_throughput;

    if (opt.b) {
        const TradeoffPoint t =
            d.config().mode == NetworkMode::Dense
                ? hc_tradeoff_dense(params.gamma, params.q_growth, *opt.b)
                : hc_tradeoff_extended(params.gamma, params.q_growth,
                                       d.config().path_loss_alpha, *opt.b);
        r.analytic_delay_exponent = t.delay.n_exp;
    }
    return r;
}

} // namespace socap
