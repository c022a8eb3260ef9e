#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mstlab/continuum.hpp"
#include "mstlab/stats.hpp"

using namespace mstlab;

namespace {

ExcursionPath path_of(std::vector<double> h) {
    ExcursionPath e;
    e.N = static_cast<int>(h.size()) - 1;
    e.h = std::move(h);
    return e;
}

double d_at(const std::vector<double>& d, int q, int i, int j) { return d[static_cast<std::size_t>(i) * q + j]; }

// d_h(s,t) from the definition: a piecewise-linear path attains its min at an endpoint or a grid vertex
double d_direct(const ExcursionPath& h, double s, double t) {
    if (s > t) std::swap(s, t);
    double m = std::min(h.at(s), h.at(t));
    for (int i = 0; i <= h.N; ++i)
        if (s < static_cast<double>(i) / h.N && static_cast<double>(i) / h.N < t) m = std::min(m, h.h[i]);
    return h.at(s) + h.at(t) - 2.0 * m;
}

void expect_pseudo_metric(const FiniteMetricMeasureSpace& x, double tol = 1e-9) {
    for (int i = 0; i < x.k; ++i) {
        EXPECT_NEAR(x(i, i), 0.0, tol);
        for (int j = 0; j < x.k; ++j) {
            EXPECT_GE(x(i, j), -tol);
            EXPECT_NEAR(x(i, j), x(j, i), tol);
            for (int l = 0; l < x.k; ++l) EXPECT_LE(x(i, l), x(i, j) + x(j, l) + tol);
        }
    }
}

}  // namespace

TEST(Excursion, EndpointsAndNonnegativity) {
    auto rng = Rng::stream(1, 0, 0);
    for (int N : {2, 4, 64, 1024})
        for (int rep = 0; rep < 50; ++rep) {
            const auto e = brownian_excursion(N, rng);
            ASSERT_EQ(static_cast<int>(e.h.size()), N + 1);
            EXPECT_EQ(e.h.front(), 0.0);
            EXPECT_EQ(e.h.back(), 0.0);
            for (int i = 1; i < N; ++i) EXPECT_GT(e.h[i], 0.0);
            for (int i = 0; i < N; ++i) EXPECT_NEAR(std::fabs(e.h[i + 1] - e.h[i]), 1.0 / std::sqrt(N), 1e-12);
        }
}

TEST(Excursion, RejectsBadGrid) {
    auto rng = Rng::stream(1, 0, 0);
    EXPECT_THROW(brownian_excursion(6, rng), std::invalid_argument);
    EXPECT_THROW(brownian_excursion(1, rng), std::invalid_argument);
}

TEST(Excursion, GridFourIsTheUniqueTent) {
    auto rng = Rng::stream(2, 0, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto e = brownian_excursion(4, rng);
        EXPECT_DOUBLE_EQ(e.h[1], 0.5);
        EXPECT_DOUBLE_EQ(e.h[2], 1.0);
        EXPECT_DOUBLE_EQ(e.h[3], 0.5);
    }
}

// Dyck paths of length 2k: every one of the Catalan(k) shapes shows up, roughly uniformly
TEST(Excursion, DyckShapesUniform) {
    auto rng = Rng::stream(3, 0, 0);
    std::map<std::vector<double>, int> seen;
    const int reps = 14000;
    for (int i = 0; i < reps; ++i) ++seen[brownian_excursion(16, rng).h];
    // N = 16 lifts a Dyck path of length 14: Catalan(7) = 429
    ASSERT_EQ(seen.size(), 429u);
    std::vector<long long> counts;
    for (const auto& [k, c] : seen) counts.push_back(c);
    const std::vector<double> expect(counts.size(), 1.0 / 429.0);
    EXPECT_GT(chi_square_test(counts, expect).p_value, 0.001);
}

TEST(Excursion, MeanAreaMatchesAnalytic) {
    auto rng = Rng::stream(4, 0, 0);
    double sum = 0.0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) sum += brownian_excursion(1 << 14, rng).area();
    EXPECT_NEAR(sum / reps, std::sqrt(std::numbers::pi / 8.0), 0.02);
}

TEST(ExcursionPath, InterpolationAndMin) {
    const auto e = path_of({0.0, 1.0, 0.5, 1.5, 0.0});
    EXPECT_DOUBLE_EQ(e.at(0.125), 0.5);
    EXPECT_DOUBLE_EQ(e.at(0.375), 0.75);
    EXPECT_DOUBLE_EQ(e.min_between(0.25, 0.75), 0.5);
    EXPECT_DOUBLE_EQ(e.min_between(0.75, 0.25), 0.5);
    EXPECT_DOUBLE_EQ(e.min_between(0.3, 0.4), e.at(0.4));
    EXPECT_NEAR(e.area(), 3.0 / 4.0, 1e-12);
    const auto s = e.scaled(2.0);
    EXPECT_DOUBLE_EQ(s.h[3], 3.0);
}

TEST(TreeFromExcursion, TentPeakToRoot) {
    const double a = 1.7;
    const auto e = path_of({0.0, a, 0.0});
    const auto d = excursion_distances(e, {0.5, 0.0});
    EXPECT_NEAR(d_at(d, 2, 0, 1), a, 1e-12);
    EXPECT_NEAR(d_at(d, 2, 1, 0), a, 1e-12);
}

TEST(TreeFromExcursion, SameTimeIsZero) {
    const auto e = path_of({0.0, 0.4, 1.0, 0.3, 0.0});
    const auto d = excursion_distances(e, {0.37, 0.37, 0.6});
    EXPECT_DOUBLE_EQ(d_at(d, 3, 0, 1), 0.0);
}

TEST(TreeFromExcursion, TwoPeakStar) {
    const double a = 2.0, b = 0.5;
    const auto e = path_of({0.0, a, b, a, 0.0});
    // leaves: both peaks and the root; the valley is the branch point at height b
    const auto d = excursion_distances(e, {0.25, 0.75, 0.0});
    EXPECT_NEAR(d_at(d, 3, 0, 1), 2.0 * (a - b), 1e-12);
    EXPECT_NEAR(d_at(d, 3, 0, 2), a, 1e-12);
    EXPECT_NEAR(d_at(d, 3, 1, 2), a, 1e-12);
    // branch point: each leg (a-b), (a-b), b
    EXPECT_NEAR(d_at(d, 3, 0, 2) + d_at(d, 3, 1, 2) - d_at(d, 3, 0, 1), 2.0 * b, 1e-12);
}

TEST(TreeFromExcursion, MatchesDirectFormula) {
    auto rng = Rng::stream(5, 0, 0);
    const auto e = brownian_excursion(256, rng);
    std::vector<double> t;
    for (int i = 0; i < 12; ++i) t.push_back(rng.uniform());
    const auto d = excursion_distances(e, t);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) EXPECT_NEAR(d_at(d, 12, i, j), d_direct(e, t[i], t[j]), 1e-9);
}

TEST(TreeFromExcursion, PseudoMetricAndFourPoint) {
    auto rng = Rng::stream(6, 0, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto e = brownian_excursion(512, rng);
        const auto x = tree_from_excursion(e, 10, rng);
        ASSERT_EQ(x.k, 11);
        EXPECT_EQ(x.mass[0], 0.0);
        double total = 0.0;
        for (double m : x.mass) total += m;
        EXPECT_NEAR(total, 1.0, 1e-12);
        expect_pseudo_metric(x);
        for (int i = 0; i < x.k; ++i)
            for (int j = 0; j < x.k; ++j)
                for (int k = 0; k < x.k; ++k)
                    for (int l = 0; l < x.k; ++l) {
                        double s[3] = {x(i, j) + x(k, l), x(i, k) + x(j, l), x(i, l) + x(j, k)};
                        std::sort(s, s + 3);
                        EXPECT_NEAR(s[1], s[2], 1e-9);
                    }
    }
}

TEST(TreeFromExcursion, RootIsTimeZero) {
    auto rng = Rng::stream(7, 0, 0);
    const auto e = brownian_excursion(128, rng);
    std::vector<double> times;
    const auto x = tree_from_excursion(e, 5, rng, &times);
    ASSERT_EQ(times.size(), 6u);
    EXPECT_EQ(times[0], 0.0);
    for (int i = 1; i <= 5; ++i) EXPECT_NEAR(x(0, i), e.at(times[i]), 1e-12);
    EXPECT_THROW(tree_from_excursion(e, 0, rng), std::invalid_argument);
}

TEST(Crt, RootDistanceIsRayleigh) {
    auto rng = Rng::stream(8, 0, 0);
    std::vector<double> y;
    for (int i = 0; i < 10000; ++i) y.push_back(sample_crt(1 << 14, 1, rng)(0, 1));
    EXPECT_LT(ks_test(y, [](double v) { return rayleigh_cdf(v); }).statistic, 0.03);
}

TEST(PrevNext, UnitTent) {
    const double a = 3.0;
    const auto f = path_of({0.0, a, 0.0});
    EXPECT_NEAR(prev(f, 0.75, a / 2.0), 0.25, 1e-12);
    EXPECT_EQ(prev(f, 0.5, a), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(prev(f, 0.2, 2.0 * a), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(prev(f, 0.0, a / 2.0), -std::numeric_limits<double>::infinity());
    EXPECT_NEAR(nxt(f, 0.25, a / 2.0), 0.75, 1e-12);
    EXPECT_NEAR(nxt(f, 0.6, a), 0.6, 1e-12);
    EXPECT_EQ(nxt(f, 0.5, 0.0), std::numeric_limits<double>::infinity());
}

TEST(PrevNext, PrevIsLastCrossingBefore) {
    auto rng = Rng::stream(9, 0, 0);
    const auto f = brownian_excursion(64, rng);
    for (int rep = 0; rep < 200; ++rep) {
        const double y = rng.uniform();
        const double h = rng.uniform() * f.at(y);
        const double x = prev(f, y, h);
        ASSERT_TRUE(std::isfinite(x));
        EXPECT_LE(x, y);
        EXPECT_NEAR(f.at(x), h, 1e-9);
        // no lower crossing in between: the path stays >= h on [x, y]
        EXPECT_GE(f.min_between(x, y), h - 1e-9);
    }
}

TEST(ConstructHs, SurplusTwoKernel) {
    auto rng = Rng::stream(10, 0, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = construct_H_s(2, 256, 16, rng);
        EXPECT_EQ(g.kernel.n(), 2);
        EXPECT_EQ(g.kernel.m(), 3);
        for (int d : g.kernel.degrees()) EXPECT_EQ(d, 3);
        EXPECT_TRUE(is_connected(g.kernel));
        EXPECT_EQ(surplus(g.kernel), 2);
        EXPECT_EQ(g.space.k, 18);
        double total = 0.0;
        for (double m : g.space.mass) total += m;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
    EXPECT_THROW(construct_H_s(1, 256, 4, rng), std::invalid_argument);
}

TEST(ConstructHs, KernelSizes) {
    auto rng = Rng::stream(11, 0, 0);
    for (int s : {3, 5, 8}) {
        const auto g = construct_H_s(s, 64, 0, rng);
        EXPECT_EQ(g.kernel.n(), 2 * (s - 1));
        EXPECT_EQ(g.kernel.m(), 3 * (s - 1));
        EXPECT_TRUE(is_connected(g.kernel));
        EXPECT_EQ(surplus(g.kernel), s);
        EXPECT_EQ(g.space.k, 0);
    }
}

TEST(ConstructHs, RescalingLawPerInstance) {
    auto rng = Rng::stream(12, 0, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = construct_H_s(3, 128, 24, rng);
        const int r = g.kernel.m();
        double xs = 0.0;
        for (int i = 0; i < r; ++i) {
            EXPECT_NEAR(g.X[i], g.gamma[i] / g.gamma_total, 1e-15);
            xs += g.X[i];
            EXPECT_NEAR(g.kernel.edge(i).len, std::sqrt(g.X[i]) * g.Y[i], 1e-12);
            const int u = g.kernel.edge(i).u, v = g.kernel.edge(i).v;
            EXPECT_LE(g.space(u, v), g.kernel.edge(i).len + 1e-12);
        }
        EXPECT_NEAR(xs, 1.0, 1e-12);
        expect_pseudo_metric(g.space);
    }
}

TEST(ConstructHs, ExponentialIdentity) {
    auto rng = Rng::stream(13, 0, 0);
    std::vector<double> z;
    for (int rep = 0; rep < 33334; ++rep) {
        const auto g = construct_H_s(2, 1 << 10, 0, rng);
        for (std::size_t i = 0; i < g.Y.size(); ++i) z.push_back(std::sqrt(2.0) * g.Y[i] * std::sqrt(g.gamma[i]));
    }
    EXPECT_LT(ks_test(z, [](double v) { return exponential_cdf(v); }).statistic, 0.02);
}

TEST(ConstructHs, DirichletMarginalMean) {
    auto rng = Rng::stream(14, 0, 0);
    const int s = 4, r = 3 * (s - 1), reps = 3000;
    std::vector<std::vector<double>> xs(r);
    for (int rep = 0; rep < reps; ++rep) {
        const auto g = construct_H_s(s, 16, 0, rng);
        for (int i = 0; i < r; ++i) xs[i].push_back(g.X[i]);
    }
    for (int i = 0; i < r; ++i) {
        const double m = mean(xs[i]);
        const double se = std::sqrt(variance(xs[i]) / reps);
        EXPECT_LT(std::fabs(m - 1.0 / r), 3.0 * se + 1e-12) << "coordinate " << i;
    }
}

TEST(ConstructHs, TotalLengthConcentrates) {
    auto rng = Rng::stream(15, 0, 0);
    const int s = 50, reps = 1000;
    const double r = 3.0 * (s - 1);
    double sum = 0.0;
    for (int rep = 0; rep < reps; ++rep) sum += construct_H_s(s, 256, 0, rng).L() / std::sqrt(r);
    const double m = sum / reps;
    EXPECT_GE(m, 0.9);
    EXPECT_LE(m, 1.1);
}

TEST(ConstructHsTilted, SurplusAndGluing) {
    auto rng = Rng::stream(16, 0, 0);
    TiltControl ctl;
    for (int s : {2, 3, 5}) {
        const auto g = construct_H_s_tilted(s, 256, 12, rng, &ctl);
        ASSERT_EQ(static_cast<int>(g.glue_times.size()), s);
        EXPECT_EQ(g.space.k, 1 + 2 * s + 12);
        for (int i = 0; i < s; ++i) {
            const auto [x, y] = g.glue_times[i];
            EXPECT_LT(x, y);
            EXPECT_NEAR(g.space(1 + 2 * i, 2 + 2 * i), 0.0, 1e-12);
        }
        double total = 0.0;
        for (double m : g.space.mass) total += m;
        EXPECT_NEAR(total, 1.0, 1e-12);
        expect_pseudo_metric(g.space);
    }
    EXPECT_GT(ctl.proposals, 0);
    EXPECT_GE(ctl.area_cap, 1.2);
    EXPECT_THROW(construct_H_s_tilted(1, 64, 4, rng), std::invalid_argument);
}

TEST(ConstructHsTilted, RejectionCapErrors) {
    auto rng = Rng::stream(17, 0, 0);
    TiltControl ctl;
    ctl.area_cap = 1e6;
    EXPECT_THROW(tilted_excursion(3, 64, rng, ctl, 10), std::runtime_error);
}

TEST(ConstructHsTilted, TiltRaisesMeanArea) {
    auto rng = Rng::stream(18, 0, 0);
    TiltControl ctl;
    double plain = 0.0, tilted = 0.0;
    const int reps = 1500;
    for (int i = 0; i < reps; ++i) {
        plain += brownian_excursion(512, rng).area();
        tilted += tilted_excursion(2, 512, rng, ctl).area();
    }
    EXPECT_GT(tilted / reps, plain / reps + 0.05);
}

// both constructions of H^(2): distance between two mass points
TEST(ConstructHsTilted, AgreesWithConstructHs) {
    auto rng = Rng::stream(19, 0, 0);
    const int reps = 1500, N = 1 << 10;
    std::vector<double> a, b;
    for (int rep = 0; rep < reps; ++rep) {
        const auto g = construct_H_s(2, N, 2, rng);
        a.push_back(g.space(g.space.k - 1, g.space.k - 2));
        const auto h = construct_H_s_tilted(2, N, 2, rng);
        b.push_back(h.space(h.space.k - 1, h.space.k - 2));
    }
    EXPECT_GT(ks_test(a, b).p_value, 0.001);
}
