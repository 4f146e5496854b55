#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "socap/social.hpp"

using namespace socap;

namespace {

// All size-q subsets of {0, ..., N-1}, lexicographic.
std::vector<std::vector<int>> all_subsets(int N, int q) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(q);
    for (int i = 0; i < q; ++i) cur[i] = i;
    for (;;) {
        out.push_back(cur);
        int i = q - 1;
        while (i >= 0 && cur[i] == N - q + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < q; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// Brute-force subset distribution: mass proportional to the product of
// candidate weights, normalized by direct summation in extended precision.
std::vector<long double> enumerate_probs(const GroupSampler& sampler,
                                         const std::vector<std::vector<int>>& subsets) {
    long double shift = 0.0L;
    std::vector<long double> logs(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        long double s = 0.0L;
        for (int pos : subsets[i]) s += sampler.log_weight(pos);
        logs[i] = s;
        shift = i == 0 ? s : std::max(shift, s);
    }
    long double total = 0.0L;
    std::vector<long double> probs(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        probs[i] = expl(logs[i] - shift);
        total += probs[i];
    }
    for (auto& p : probs) p /= total;
    return probs;
}

Deployment line_deployment(const std::vector<double>& xs, double L,
                           std::uint64_t seed = 1) {
    NetworkConfig c = NetworkConfig::dense(static_cast<int>(xs.size()), seed);
    c.side_length = L;
    return Deployment::from_positions(c, xs,
                                      std::vector<double>(xs.size(), 0.0));
}

} // namespace

TEST_CASE("single-contact probabilities follow the inverse-distance weights") {
    // Source at 0 with candidates at distances 0.25 and 0.5: weights 4 and 2,
    // so the near candidate is picked with probability 2/3.
    const Deployment d = line_deployment({0.0, 0.25, 0.5}, 1.0);
    SocialParams p;
    p.gamma = 1.0;
    p.q = 1;
    rng::Stream rs(2024);
    const int trials = 100000;
    int near = 0;
    for (int t = 0; t < trials; ++t)
        near += sample_social_group(d, p, 0, rs)[0] == 1 ? 1 : 0;
    const double freq = static_cast<double>(near) / trials;
    const double sd = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / trials);
    REQUIRE(std::abs(freq - 2.0 / 3.0) < 3.0 * sd);
}

TEST_CASE("pair groups weight by the product of member weights") {
    // Distances 1, 1, 2 at gamma 1 give weights 1, 1, 0.5; the three pair
    // groups then carry mass 0.5, 0.25, 0.25.
    NetworkConfig c = NetworkConfig::dense(4, 3);
    c.side_length = 3.0;
    const Deployment d = Deployment::from_positions(c, {0.0, 1.0, 0.0, 2.0},
                                                    {0.0, 0.0, 1.0, 0.0});
    SocialParams p;
    p.gamma = 1.0;
    p.q = 2;
    const GroupSampler sampler(d, p, 0);
    const auto subsets = all_subsets(3, 2);
    REQUIRE(subsets.size() == 3);
    const auto probs = enumerate_probs(sampler, subsets);
    REQUIRE(static_cast<double>(probs[0]) == Catch::Approx(0.5));   // {1,2}
    REQUIRE(static_cast<double>(probs[1]) == Catch::Approx(0.25));  // {1,3}
    REQUIRE(static_cast<double>(probs[2]) == Catch::Approx(0.25));  // {2,3}

    rng::Stream rs(7);
    const int trials = 100000;
    std::map<std::vector<int>, int> counts;
    for (int t = 0; t < trials; ++t) ++counts[sampler.sample(rs)];
    const double near_pair =
        static_cast<double>(counts[{1, 2}]) / trials;
    REQUIRE(std::abs(near_pair - 0.5) < 3.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("sampler probabilities match enumeration exactly") {
    // The suffix-table route and direct enumeration must assign identical
    // mass to every subset; this is deterministic, no sampling involved.
    const Deployment d = Deployment::generate(NetworkConfig::dense(12, 77));
    for (const double gamma : {0.0, 1.0, 2.5, 4.0}) {
        for (const int q : {1, 2, 3}) {
            SocialParams p;
            p.gamma = gamma;
            p.q = q;
            const GroupSampler sampler(d, p, 4);
            const auto subsets = all_subsets(11, q);
            const auto oracle = enumerate_probs(sampler, subsets);
            for (std::size_t i = 0; i < subsets.size(); ++i) {
                const double dp = std::exp(sampler.subset_log_prob(subsets[i]));
                REQUIRE(dp == Catch::Approx(static_cast<double>(oracle[i]))
                                  .epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("sampled subset frequencies pass a chi-square against enumeration") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(7, 15));
    SocialParams p;
    p.gamma = 2.0;
    p.q = 2;
    const GroupSampler sampler(d, p, 0);
    const auto subsets = all_subsets(6, 2); // 15 subsets
    const auto probs = enumerate_probs(sampler, subsets);

    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        std::vector<int> ids;
        for (int pos : subsets[i]) ids.push_back(sampler.candidates()[pos]);
        index[ids] = static_cast<int>(i);
    }
    rng::Stream rs(321);
    const int trials = 100000;
    std::vector<int> counts(subsets.size(), 0);
    for (int t = 0; t < trials; ++t) ++counts[index.at(sampler.sample(rs))];

    double chi2 = 0.0;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const double expected = static_cast<double>(probs[i]) * trials;
        REQUIRE(expected > 5.0); // enough mass for the chi-square to apply
        chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
    }
    // 0.999 quantile of chi-square with 14 degrees of freedom.
    REQUIRE(chi2 < 36.123);
}

TEST_CASE("gamma 0 gives uniform subsets") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(9, 4));
    SocialParams p;
    p.gamma = 0.0;
    p.q = 2;
    const GroupSampler sampler(d, p, 2);
    const auto subsets = all_subsets(8, 2);
    for (const auto& s : subsets)
        REQUIRE(std::exp(sampler.subset_log_prob(s)) ==
                Catch::Approx(1.0 / subsets.size()).epsilon(1e-12));
}

TEST_CASE("closer candidates are included more often") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(10, 91));
    SocialParams p;
    p.gamma = 2.0;
    p.q = 3;
    const int source = 0;
    const GroupSampler sampler(d, p, source);
    const auto subsets = all_subsets(9, 3);
    const auto probs = enumerate_probs(sampler, subsets);
    std::vector<long double> marginal(9, 0.0L);
    for (std::size_t i = 0; i < subsets.size(); ++i)
        for (int pos : subsets[i]) marginal[pos] += probs[i];

    std::vector<int> order(9);
    for (int i = 0; i < 9; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return d.distance(source, sampler.candidates()[a]) <
               d.distance(source, sampler.candidates()[b]);
    });
    for (std::size_t i = 1; i < order.size(); ++i)
        REQUIRE(marginal[order[i - 1]] > marginal[order[i]] - 1e-12L);
}

TEST_CASE("groups have the right shape and the assignment is reproducible") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(40, 10));
    SocialParams p;
    p.gamma = 1.5;
    p.q = 3;
    const SocialAssignment a = build_social_assignment(d, p);
    const SocialAssignment b = build_social_assignment(d, p);
    REQUIRE(a.groups == b.groups);
    REQUIRE(a.destinations == b.destinations);
    for (int s = 0; s < 40; ++s) {
        REQUIRE(a.groups[s].size() == 3);
        REQUIRE(std::is_sorted(a.groups[s].begin(), a.groups[s].end()));
        REQUIRE(std::adjacent_find(a.groups[s].begin(), a.groups[s].end()) ==
                a.groups[s].end());
        for (int v : a.groups[s]) REQUIRE(v != s);
        REQUIRE(std::count(a.groups[s].begin(), a.groups[s].end(),
                           a.destinations[s]) == 1);
    }
}

TEST_CASE("q equal to n-1 selects everyone") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(6, 2));
    SocialParams p;
    p.gamma = 3.0;
    p.q = 5;
    rng::Stream rs(5);
    const auto g = sample_social_group(d, p, 3, rs);
    REQUIRE(g.size() == 5);
    SocialParams bad = p;
    bad.q = 6;
    REQUIRE_THROWS_AS(sample_social_group(d, bad, 3, rs), ConfigError);
}

TEST_CASE("destination choice is uniform over the group") {
    rng::Stream rs(77);
    const std::vector<int> group{3, 8, 13, 21};
    std::map<int, int> counts;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) ++counts[select_destination(group, rs)];
    const double sd = std::sqrt(0.25 * 0.75 / trials);
    for (int v : group) {
        const double freq = static_cast<double>(counts[v]) / trials;
        REQUIRE(std::abs(freq - 0.25) < 3.0 * sd);
    }
}

TEST_CASE("unbiased pairing reproduces the mean uniform-square distance") {
    // Mean distance of two uniform points in the unit square:
    // (2 + sqrt(2) + 5 asinh(1)) / 15 = 0.5214054...
    const Deployment d = Deployment::generate(NetworkConfig::dense(10000, 31));
    SocialParams p;
    p.gamma = 0.0;
    p.q = 1;
    const MeanEstimate e = empirical_mean_sd_distance(d, p, 2000);
    REQUIRE(e.trials == 2000);
    // One fixed deployment's own mean pairwise distance sits within about
    // 0.002 of the constant at this n; fold that into the band.
    REQUIRE(std::abs(e.mean - 0.5214054) <
            3.0 * e.stderr_of_mean + 0.002 * 3.0);
}

TEST_CASE("distance bias shortens pairings") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(2048, 8));
    SocialParams p;
    p.q = 1;
    p.gamma = 0.0;
    const double loose = empirical_mean_sd_distance(d, p, 1500).mean;
    p.gamma = 4.0;
    const double tight = empirical_mean_sd_distance(d, p, 1500).mean;
    REQUIRE(tight < loose / 4.0);
}

TEST_CASE("tail fractions obey the empirical Markov bound") {
    const Deployment d = Deployment::generate(NetworkConfig::dense(1024, 6));
    SocialParams p;
    p.gamma = 2.5;
    p.q = 1;
    for (const double k : {2.0, 4.0, 10.0}) {
        const TailEstimate t = sd_tail_fraction(d, p, 3000, k);
        // The threshold uses the same sample's mean, so the bound is exact,
        // not probabilistic.
        REQUIRE(t.fraction <= 1.0 / k + 1e-12);
    }
    const TailEstimate unit = sd_tail_fraction(d, p, 500, 1e-9);
    REQUIRE(unit.fraction == Catch::Approx(1.0));
}

TEST_CASE("social CSV packs groups") {
    SocialAssignment a;
    a.groups = {{1, 2}, {0, 2}, {0, 1}};
    a.destinations = {2, 0, 1};
    std::ostringstream os;
    write_social_csv(a, os);
    REQUIRE(os.str() ==
            "source_id,group,destination_id\n"
            "0,1;2,2\n"
            "1,0;2,0\n"
            "2,0;1,1\n");
}
