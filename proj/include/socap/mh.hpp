#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "socap/errors.hpp"
#include "socap/geometry.hpp"
#include "socap/social.hpp"

namespace socap {

struct GridCoord {
    int x = 0;
    int y = 0;
    bool operator==(const GridCoord&) const = default;
};

// Square routing grid over the deployment. The grid has
// g = floor(L / sqrt(cell_area)) cells per side, so actual cells are at
// least cell_area in size; nodes map to cells by floor division. Every cell
// must contain at least one node, otherwise packets could not be relayed
// through it and the grid is rejected (EmptyCellError) rather than patched.
struct CellGrid {
    double requested_area = 0.0;
    double cell_side = 0.0;
    int cells_per_side = 0;
    std::vector<std::vector<int>> members; // per cell, ascending node ids
    std::vector<int> relay;                // per cell, node nearest the center

    int index(int cx, int cy) const { return cy * cells_per_side + cx; }

    GridCoord locate(double x, double y) const {
        const int g = cells_per_side;
        int cx = static_cast<int>(std::floor(x / cell_side));
        int cy = static_cast<int>(std::floor(y / cell_side));
        cx = std::clamp(cx, 0, g - 1);
        cy = std::clamp(cy, 0, g - 1);
        return {cx, cy};
    }
};

inline CellGrid build_cells(const Deployment& d, double cell_area) {
    const double L = d.side();
    if (!(cell_area > 0.0) || cell_area > L * L + 1e-12)
        throw ConfigError("cell_area must lie in (0, side^2]");
    CellGrid grid;
    grid.requested_area = cell_area;
    // The small tolerance keeps exact divisions exact (1.0 / sqrt(0.04)
    // lands a hair under 5 in floating point).
    grid.cells_per_side = std::max(
        1, static_cast<int>(std::floor(L / std::sqrt(cell_area) + 1e-9)));
    grid.cell_side = L / grid.cells_per_side;
    const int g = grid.cells_per_side;
    grid.members.assign(static_cast<std::size_t>(g) * g, {});
    for (int i = 0; i < d.size(); ++i) {
        const GridCoord c = grid.locate(d.x(i), d.y(i));
        grid.members[grid.index(c.x, c.y)].push_back(i);
    }
    for (int cy = 0; cy < g; ++cy)
        for (int cx = 0; cx < g; ++cx)
            if (grid.members[grid.index(cx, cy)].empty())
                throw EmptyCellError(cx, cy);
    grid.relay.resize(static_cast<std::size_t>(g) * g);
    for (int cy = 0; cy < g; ++cy) {
        for (int cx = 0; cx < g; ++cx) {
            const double ctr_x = (cx + 0.5) * grid.cell_side;
            const double ctr_y = (cy + 0.5) * grid.cell_side;
            int best = -1;
            double best_d2 = 0.0;
            for (int i : grid.members[grid.index(cx, cy)]) {
                const double dx = d.x(i) - ctr_x;
                const double dy = d.y(i) - ctr_y;
                const double d2 = dx * dx + dy * dy;
                if (best < 0 || d2 < best_d2) {
                    best = i;
                    best_d2 = d2;
                }
            }
            grid.relay[grid.index(cx, cy)] = best;
        }
    }
    return grid;
}

struct RoutingPath {
    int source = -1;
    int dest = -1;
    std::vector<GridCoord> cells; // staircase, endpoints included
    int hop_count = 0;            // |cells| - 1, but 1 for a same-cell pair
};

// Cells intersected by the segment from source to destination, visited in
// axis-aligned steps only. Column and row crossings are enumerated from the
// endpoint cell indices (never rediscovered from running floating point), so
// the path always contains exactly |dx| + |dy| + 1 cells. When the segment
// passes through a cell corner both crossings coincide and the horizontal
// step is taken first.
inline RoutingPath route(const CellGrid& grid, const Deployment& d, int source,
                         int dest) {
    RoutingPath p;
    p.source = source;
    p.dest = dest;
    const GridCoord a = grid.locate(d.x(source), d.y(source));
    const GridCoord b = grid.locate(d.x(dest), d.y(dest));
    if (a == b) {
        p.cells = {a};
        p.hop_count = 1; // one direct transmission inside the cell
        return p;
    }
    const double x0 = d.x(source), y0 = d.y(source);
    const double dx = d.x(dest) - x0, dy = d.y(dest) - y0;
    const int sx = b.x > a.x ? 1 : -1;
    const int sy = b.y > a.y ? 1 : -1;
    const int nx = std::abs(b.x - a.x);
    const int ny = std::abs(b.y - a.y);
    const double h = grid.cell_side;

    std::vector<double> tx(nx), ty(ny);
    for (int k = 1; k <= nx; ++k) {
        const int col = a.x + sx * k; // column being entered
        const double edge = h * (sx > 0 ? col : col + 1);
        tx[k - 1] = (edge - x0) / dx;
    }
    for (int k = 1; k <= ny; ++k) {
        const int row = a.y + sy * k;
        const double edge = h * (sy > 0 ? row : row + 1);
        ty[k - 1] = (edge - y0) / dy;
    }

    p.cells.reserve(static_cast<std::size_t>(nx) + ny + 1);
    p.cells.push_back(a);
    GridCoord c = a;
    std::size_t i = 0, j = 0;
    while (i < tx.size() || j < ty.size()) {
        bool step_x;
        if (i == tx.size())
            step_x = false;
        else if (j == ty.size())
            step_x = true;
        else
            step_x = tx[i] <= ty[j];
        if (step_x) {
            c.x += sx;
            ++i;
        } else {
            c.y += sy;
            ++j;
        }
        p.cells.push_back(c);
    }
    p.hop_count = static_cast<int>(p.cells.size()) - 1;
    return p;
}

struct CellLoadSummary {
    std::vector<int> loads; // per cell, number of paths through it
    int max_load = 0;
    double mean_load = 0.0;
};

inline CellLoadSummary cell_load(const CellGrid& grid,
                                 const std::vector<RoutingPath>& paths) {
    CellLoadSummary s;
    s.loads.assign(grid.members.size(), 0);
    long long total = 0;
    for (const RoutingPath& p : paths) {
        for (const GridCoord& c : p.cells) {
            ++s.loads[grid.index(c.x, c.y)];
            ++total;
        }
    }
    for (int v : s.loads) s.max_load = std::max(s.max_load, v);
    s.mean_load = s.loads.empty()
                      ? 0.0
                      : static_cast<double>(total) / static_cast<double>(s.loads.size());
    return s;
}

struct MhOptions {
    double cell_area = 0.0;
    int tdma_slots = 9; // spatial reuse pattern, must be a perfect square
};

struct MhResult {
    double aggregate_throughput = 0.0; // pairs * bottleneck rate / max load
    double mean_delay_hops = 0.0;
    int max_cell_load = 0;
    double bottleneck_rate = 0.0; // per-cell Shannon rate incl. TDMA share
    double bottleneck_sinr = 0.0;
    int active_classes = 0;
    std::vector<int> per_cell_loads;
};

namespace detail {

inline int reuse_period(int tdma_slots) {
    const int k = static_cast<int>(std::lround(std::sqrt(
        static_cast<double>(tdma_slots))));
    if (k < 1 || k * k != tdma_slots)
        throw ConfigError("tdma_slots must be a perfect square");
    return k;
}

// Rate of the representative hop out of the heaviest cell. The transmitter
// sits at that cell's relay and the receiver at an adjacent cell's relay;
// interference comes from the relays of every other loaded cell in the same
// reuse class, which transmit in the same slot. On a one-cell grid the hop
// degenerates to the direct source-destination link of the first pair.
struct BottleneckRate {
    double rate = 0.0;
    double sinr = 0.0;
    int active_classes = 0;
};

inline BottleneckRate bottleneck_hop_rate(const Deployment& d,
                                          const CellGrid& grid,
                                          const CellLoadSummary& loads,
                                          const std::vector<RoutingPath>& paths,
                                          int tdma_slots) {
    const int k = reuse_period(tdma_slots);
    const int g = grid.cells_per_side;
    const double alpha = d.config().path_loss_alpha;
    const double P = d.config().power;

    int bottleneck = 0;
    for (std::size_t c = 1; c < loads.loads.size(); ++c)
        if (loads.loads[c] > loads.loads[bottleneck])
            bottleneck = static_cast<int>(c);
    const int bx = bottleneck % g;
    const int by = bottleneck / g;

    std::set<int> classes;
    for (int cy = 0; cy < g; ++cy)
        for (int cx = 0; cx < g; ++cx)
            if (loads.loads[grid.index(cx, cy)] > 0)
                classes.insert((cx % k) + k * (cy % k));
    const int active = std::max<std::size_t>(classes.size(), 1);

    int tx_node, rx_node;
    if (g == 1) {
        tx_node = paths.front().source;
        rx_node = paths.front().dest;
    } else {
        tx_node = grid.relay[bottleneck];
        static constexpr int off[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        int nb = -1;
        for (const auto& o : off) {
            const int cx = bx + o[0], cy = by + o[1];
            if (cx >= 0 && cx < g && cy >= 0 && cy < g) {
                nb = grid.index(cx, cy);
                break;
            }
        }
        rx_node = grid.relay[nb];
    }

    const double hop = d.distance(tx_node, rx_node);
    if (!(hop > 0.0)) throw DegeneratePairError(tx_node, rx_node);
    const double signal = P * std::pow(hop, -alpha);

    const int bclass = (bx % k) + k * (by % k);
    double interference = 0.0;
    for (int cy = 0; cy < g; ++cy) {
        for (int cx = 0; cx < g; ++cx) {
            const int idx = grid.index(cx, cy);
            if (idx == bottleneck || loads.loads[idx] == 0) continue;
            if ((cx % k) + k * (cy % k) != bclass) continue;
            const int intf = grid.relay[idx];
            if (intf == rx_node) continue;
            const double dist = d.distance(intf, rx_node);
            interference += P * std::pow(dist, -alpha);
        }
    }

    BottleneckRate out;
    out.sinr = signal / (1.0 + interference);
    out.active_classes = active;
    // Unit noise bandwidth; only reuse classes that actually carry traffic
    // are scheduled, so an isolated network is not charged idle slots.
    out.rate = std::log2(1.0 + out.sinr) / static_cast<double>(active);
    return out;
}

} // namespace detail

// Scores an explicit pair list (first = source, second = destination). The
// aggregate throughput charges every pair's traffic to the heaviest cell:
// pairs * per-cell rate / max load.
inline MhResult simulate_mh_pairs(const Deployment& d,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  const MhOptions& opt) {
    if (pairs.empty()) throw ConfigError("no pairs to route");
    const CellGrid grid = build_cells(d, opt.cell_area);
    std::vector<RoutingPath> paths;
    paths.reserve(pairs.size());
    double hops = 0.0;
    for (const auto& [s, v] : pairs) {
        if (s == v) throw DegeneratePairError(s, v);
        paths.push_back(route(grid, d, s, v));
        hops += paths.back().hop_count;
    }
    const CellLoadSummary loads = cell_load(grid, paths);
    const detail::BottleneckRate bn =
        detail::bottleneck_hop_rate(d, grid, loads, paths, opt.tdma_slots);

    MhResult r;
    r.mean_delay_hops = hops / static_cast<double>(paths.size());
    r.max_cell_load = loads.max_load;
    r.bottleneck_rate = bn.rate;
    r.bottleneck_sinr = bn.sinr;
    r.active_classes = bn.active_classes;
    r.aggregate_throughput = static_cast<double>(paths.size()) * bn.rate /
                             static_cast<double>(loads.max_load);
    r.per_cell_loads = loads.loads;
    return r;
}

inline MhResult simulate_mh(const Deployment& d, const SocialAssignment& soc,
                            const MhOptions& opt) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(soc.destinations.size());
    for (std::size_t s = 0; s < soc.destinations.size(); ++s)
        pairs.emplace_back(static_cast<int>(s), soc.destinations[s]);
    return simulate_mh_pairs(d, pairs, opt);
}

} // namespace socap
