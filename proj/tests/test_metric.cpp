#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lp_oracle.hpp"
#include "mstlab/metric.hpp"
#include "mstlab/samplers.hpp"

using namespace mstlab;

namespace {

using Space = FiniteMetricMeasureSpace;

Space two_point(double gap, double m0 = 0.5) { return Space({{0, gap}, {gap, 0}}, {m0, 1.0 - m0}); }

Space singleton() { return Space({{0}}, {1.0}); }

Space path_space(int k) {
    Space x(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) x.at(i, j) = std::abs(i - j);
    return x;
}

// random tree metric with dyadic lengths and dyadic masses, so everything is exact in binary
Space random_space(Rng& rng, int k) {
    const auto t = uniform_labeled_tree(k, rng).to_graph();
    Multigraph g = t;
    for (int i = 0; i < g.m(); ++i) g.set_length(i, static_cast<double>(1 + rng.below(8)) / 4.0);
    Space x(k);
    for (int i = 0; i < k; ++i) {
        const auto d = distances(g, i);
        for (int j = 0; j < k; ++j) x.at(i, j) = d[j];
    }
    std::vector<int> w(k, 1);
    for (int extra = 0; extra < 16 - k; ++extra) ++w[rng.below(k)];
    for (int i = 0; i < k; ++i) x.mass[i] = w[i] / 16.0;
    return x;
}

std::vector<lp::Q> masses(const Space& x) {
    std::vector<lp::Q> m;
    for (double v : x.mass) m.push_back(detail::exact_rational(v));
    return m;
}

// every covering correspondence of two tiny spaces, as pair bitmasks
std::vector<std::uint64_t> covering_sets(int kx, int ky) {
    std::vector<std::uint64_t> out;
    const std::uint64_t full = std::uint64_t{1} << (kx * ky);
    for (std::uint64_t s = 1; s < full; ++s) {
        std::uint32_t mx = 0, my = 0;
        for (int p = 0; p < kx * ky; ++p)
            if (s >> p & 1u) {
                mx |= 1u << (p / ky);
                my |= 1u << (p % ky);
            }
        if (mx == (1u << kx) - 1 && my == (1u << ky) - 1) out.push_back(s);
    }
    return out;
}

Correspondence as_corr(std::uint64_t s, int kx, int ky) {
    Correspondence c;
    for (int p = 0; p < kx * ky; ++p)
        if (s >> p & 1u) c.push_back({p / ky, p % ky});
    (void)kx;
    return c;
}

double gh_brute(const Space& x, const Space& y) {
    double best = std::numeric_limits<double>::infinity();
    for (auto s : covering_sets(x.k, y.k)) best = std::min(best, distortion(as_corr(s, x.k, y.k), x, y) / 2.0);
    return best;
}

lp::Q inner_oracle(const Space& x, const Space& y, std::uint64_t s) {
    std::vector<std::vector<char>> in(x.k, std::vector<char>(y.k, 0));
    for (int p = 0; p < x.k * y.k; ++p)
        if (s >> p & 1u) in[p / y.k][p % y.k] = 1;
    return lp::ghp_inner(masses(x), masses(y), in);
}

double ghp_brute(const Space& x, const Space& y) {
    double best = std::numeric_limits<double>::infinity();
    for (auto s : covering_sets(x.k, y.k)) {
        const double v = std::max(distortion(as_corr(s, x.k, y.k), x, y) / 2.0, to_double(inner_oracle(x, y, s)));
        best = std::min(best, v);
    }
    return best;
}

}  // namespace

TEST(LpOracle, SmallProblems) {
    // min x + y with x + y - e = 1 -> 1
    lp::Problem p{{{1, 1, -1}}, {1}, {1, 1, 0}};
    EXPECT_EQ(*lp::minimise(p), 1);
    // min -x with x + s = 3/2 -> -3/2
    lp::Problem q{{{1, 1}}, {lp::Q(3, 2)}, {-1, 0}};
    EXPECT_EQ(*lp::minimise(q), lp::Q(-3, 2));
    // x - y = 1 unbounded below for min -y
    lp::Problem u{{{1, -1}}, {1}, {0, -1}};
    EXPECT_FALSE(lp::minimise(u).has_value());
    // x = 1 and x = 2 infeasible
    lp::Problem v{{{1}, {1}}, {1, 2}, {0}};
    EXPECT_FALSE(lp::minimise(v).has_value());
}

TEST(Space, ValidationAndRoundTrip) {
    auto x = path_space(3);
    EXPECT_NO_THROW(x.validate());
    EXPECT_EQ(x.diameter(), 2.0);
    std::stringstream ss;
    write_space(ss, x);
    const auto y = read_space(ss);
    EXPECT_EQ(y.k, 3);
    EXPECT_EQ(y.d, x.d);
    EXPECT_EQ(y.mass, x.mass);
    auto bad = path_space(3);
    bad.at(0, 2) = 5.0;
    bad.at(2, 0) = 5.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    auto asym = path_space(2);
    asym.at(0, 1) = 2.0;
    EXPECT_THROW(asym.validate(), std::invalid_argument);
    auto heavy = path_space(2);
    heavy.mass = {0.7, 0.7};
    EXPECT_THROW(heavy.validate(), std::invalid_argument);
    EXPECT_EQ(x.scaled(2.0).diameter(), 4.0);
}

TEST(Distortion, Examples) {
    const auto x = path_space(4);
    Correspondence id;
    for (int i = 0; i < 4; ++i) id.push_back({i, i});
    EXPECT_EQ(distortion(id, x, x), 0.0);
    Correspondence full{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    EXPECT_DOUBLE_EQ(distortion(full, two_point(1.0), two_point(3.5)), 3.5);
    Correspondence diag{{0, 0}, {1, 1}};
    EXPECT_DOUBLE_EQ(distortion(diag, two_point(1.0), two_point(3.5)), 2.5);
    EXPECT_EQ(distortion({{0, 0}}, singleton(), singleton()), 0.0);
    EXPECT_THROW(distortion({{0, 0}}, two_point(1.0), two_point(1.0)), std::invalid_argument);
}

TEST(GhExact, Examples) {
    EXPECT_EQ(gh_exact(path_space(5), path_space(5)), 0.0);
    EXPECT_DOUBLE_EQ(gh_exact(two_point(1.0), two_point(3.0)), 1.0);
    EXPECT_DOUBLE_EQ(gh_exact(singleton(), two_point(3.0)), 1.5);
    EXPECT_THROW(gh_exact(path_space(8), path_space(2)), std::length_error);
}

TEST(GhExact, MatchesBruteForce) {
    auto rng = Rng::stream(111, 0, 0);
    for (int rep = 0; rep < 150; ++rep) {
        const auto x = random_space(rng, 1 + static_cast<int>(rng.below(4)));
        const auto y = random_space(rng, 1 + static_cast<int>(rng.below(3)));
        EXPECT_DOUBLE_EQ(gh_exact(x, y), gh_brute(x, y));
    }
}

TEST(GhExact, PseudoMetricOnCorpus) {
    auto rng = Rng::stream(112, 0, 0);
    std::vector<Space> corpus{singleton(), two_point(1.0), two_point(2.5), path_space(3), path_space(4), path_space(5)};
    for (int i = 0; i < 6; ++i) corpus.push_back(random_space(rng, 2 + static_cast<int>(rng.below(4))));
    const std::size_t n = corpus.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = gh_exact(corpus[i], corpus[j]);
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(d[i][i], 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_EQ(d[i][j], d[j][i]);
            for (std::size_t k = 0; k < n; ++k) EXPECT_LE(d[i][j], d[i][k] + d[k][j] + 1e-9);
        }
    }
}

TEST(GhpInner, ClosedFormMatchesLpOracle) {
    auto rng = Rng::stream(113, 0, 0);
    int checked = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const auto x = random_space(rng, 1 + static_cast<int>(rng.below(3)));
        const auto y = random_space(rng, 1 + static_cast<int>(rng.below(3)));
        const std::uint64_t full = std::uint64_t{1} << (x.k * y.k);
        const std::uint64_t s = rng.below(full);
        EXPECT_EQ(ghp_inner(x, y, s), inner_oracle(x, y, s)) << x.k << "x" << y.k << " set " << s;
        ++checked;
    }
    EXPECT_EQ(checked, 300);
}

TEST(GhpExact, Examples) {
    const auto x = path_space(3);
    EXPECT_EQ(ghp_exact(x, x), 0.0);
    // same 2-point metric, masses (1,0) vs (1/2,1/2)
    const auto a = two_point(1.0, 1.0), b = two_point(1.0, 0.5);
    const double oracle = ghp_brute(a, b);
    EXPECT_DOUBLE_EQ(ghp_exact(a, b), oracle);
    EXPECT_DOUBLE_EQ(oracle, 1.0 / 3.0);
    EXPECT_THROW(ghp_exact(path_space(6), x), std::length_error);
}

TEST(GhpExact, MatchesBruteForceAndDominatesGh) {
    auto rng = Rng::stream(114, 0, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto x = random_space(rng, 1 + static_cast<int>(rng.below(3)));
        const auto y = random_space(rng, 1 + static_cast<int>(rng.below(3)));
        const double g = ghp_exact(x, y);
        EXPECT_DOUBLE_EQ(g, ghp_brute(x, y));
        EXPECT_GE(g, gh_exact(x, y));
        EXPECT_EQ(ghp_exact(x, x), 0.0);
    }
}

TEST(GhBounds, Examples) {
    const auto b = gh_bounds(path_space(4), path_space(4));
    EXPECT_EQ(b.lower, 0.0);
    EXPECT_EQ(b.upper, 0.0);
    const auto sep = gh_bounds(two_point(1.0), path_space(6));
    EXPECT_GE(sep.lower, std::fabs(1.0 - 5.0) / 2.0);
    auto rng = Rng::stream(115, 0, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto x = random_space(rng, 1 + static_cast<int>(rng.below(6)));
        const auto y = random_space(rng, 1 + static_cast<int>(rng.below(6)));
        const auto bb = gh_bounds(x, y);
        const double e = gh_exact(x, y);
        EXPECT_LE(bb.lower, bb.upper);
        EXPECT_LE(bb.lower, e + 1e-12);
        EXPECT_GE(bb.upper, e - 1e-12);
    }
}

TEST(MaxBallMass, Examples) {
    const auto x = path_space(5);
    EXPECT_DOUBLE_EQ(max_ball_mass(x, 4.0), 1.0);
    EXPECT_DOUBLE_EQ(max_ball_mass(x, 0.0), 0.2);
    EXPECT_DOUBLE_EQ(max_ball_mass(two_point(1.0, 0.7), 0.5), 0.7);
    EXPECT_THROW(max_ball_mass(x, -1.0), std::invalid_argument);
}

TEST(TypicalDistance, Examples) {
    auto rng = Rng::stream(116, 0, 0);
    for (double v : typical_distance_profile(singleton(), 100, rng)) EXPECT_EQ(v, 0.0);
    const auto law2 = typical_distance_law(two_point(1.0));
    EXPECT_DOUBLE_EQ(law2.at(0.0), 0.5);
    EXPECT_DOUBLE_EQ(law2.at(1.0), 0.5);
    const auto law3 = typical_distance_law(path_space(3));
    EXPECT_NEAR(law3.at(0.0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(law3.at(1.0), 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(law3.at(2.0), 2.0 / 9.0, 1e-15);
    std::vector<long long> c(3, 0);
    for (double v : typical_distance_profile(path_space(3), 45000, rng)) ++c[static_cast<int>(v)];
    EXPECT_GT(chi_square_test(c, {1.0 / 3, 4.0 / 9, 2.0 / 9}).p_value, 0.001);
}

TEST(Minkowski, Examples) {
    const auto line = path_space(400);
    std::vector<double> grid;
    for (double f : {0.05, 0.08, 0.12, 0.16, 0.2}) grid.push_back(f * line.diameter());
    EXPECT_NEAR(minkowski_slope(line, grid), 1.0, 0.3);
    EXPECT_EQ(minkowski_slope(singleton(), {0.1, 0.2, 0.4}), 0.0);
    std::vector<double> scaled_grid;
    for (double d : grid) scaled_grid.push_back(3.0 * d);
    EXPECT_DOUBLE_EQ(minkowski_slope(line.scaled(3.0), scaled_grid), minkowski_slope(line, grid));
    EXPECT_THROW(minkowski_slope(line, {1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(minkowski_slope(line, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(ExchPartialSum, Examples) {
    auto rng = Rng::stream(117, 0, 0);
    EXPECT_NEAR(exch_partial_sum_stat(std::vector<double>(10, 0.1), rng), 0.0, 1e-15);
    for (int i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(exch_partial_sum_stat({1.0, 0.0}, rng), 0.5);
    // one-sided tail check with c1 = 0.1 at x = c2 = 10
    const double x = 10.0;
    const double bound = std::exp(-0.1 * x * std::log(std::log(x)));
    int hits = 0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
        const int m = 2 + static_cast<int>(rng.below(200));
        std::vector<double> p(m);
        double s = 0.0;
        for (auto& v : p) s += (v = rng.exponential());
        double sig = 0.0;
        for (auto& v : p) {
            v /= s;
            sig += v * v;
        }
        hits += exch_partial_sum_stat(p, rng) >= x * std::sqrt(sig);
    }
    EXPECT_LE(static_cast<double>(hits) / reps, bound);
}
