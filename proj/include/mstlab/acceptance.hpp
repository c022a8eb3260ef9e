#pragma once

#include <boost/math/distributions/beta.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace mstlab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

inline std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

namespace acc {

inline Multigraph theta() {
    Multigraph g(2);
    for (int i = 0; i < 3; ++i) g.add_edge(0, 1);
    return g;
}

inline Multigraph k4() {
    Multigraph g(4);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) g.add_edge(a, b);
    return g;
}

inline Multigraph triangle() {
    Multigraph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    return g;
}

// all compositions of total into positive parts
inline void compositions(int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (total == 0) {
        out.push_back(cur);
        return;
    }
    for (int x = 1; x <= total; ++x) {
        cur.push_back(x);
        compositions(total - x, cur, out);
        cur.pop_back();
    }
}

// brute force over all relations between two small spaces
inline double gh_brute(const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y) {
    const int cells = x.k * y.k;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << cells); ++mask) {
        std::vector<char> cx(x.k, 0), cy(y.k, 0);
        for (int c = 0; c < cells; ++c)
            if (mask >> c & 1) cx[c / y.k] = cy[c % y.k] = 1;
        if (std::count(cx.begin(), cx.end(), 0) || std::count(cy.begin(), cy.end(), 0)) continue;
        double dis = 0.0;
        for (int a = 0; a < cells; ++a)
            if (mask >> a & 1)
                for (int b = 0; b < cells; ++b)
                    if (mask >> b & 1)
                        dis = std::max(dis, std::fabs(x(a / y.k, b / y.k) - y(a % y.k, b % y.k)));
        best = std::min(best, dis / 2.0);
    }
    return best;
}

inline FiniteMetricMeasureSpace two_point(double gap, double m0 = 0.5) {
    FiniteMetricMeasureSpace s(2);
    s.set(0, 1, gap);
    s.mass = {m0, 1.0 - m0};
    return s;
}

inline FiniteMetricMeasureSpace path_space(int k) {
    FiniteMetricMeasureSpace s(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) s.set(i, j, std::abs(i - j));
    return s;
}

inline FiniteMetricMeasureSpace star_space(int leaves) {
    FiniteMetricMeasureSpace s(leaves + 1);
    for (int i = 1; i <= leaves; ++i) {
        s.set(0, i, 1.0);
        for (int j = i + 1; j <= leaves; ++j) s.set(i, j, 2.0);
    }
    return s;
}

inline FiniteMetricMeasureSpace random_space(int k, Rng& rng) {
    // shortest paths over random positive weights on the complete graph
    std::vector<double> d(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) d[i * k + j] = d[j * k + i] = 0.25 * (1 + static_cast<int>(rng.below(8)));
    for (int m = 0; m < k; ++m)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) d[i * k + j] = std::min(d[i * k + j], d[i * k + m] + d[m * k + j]);
    FiniteMetricMeasureSpace s(k);
    s.d = d;
    double tot = 0.0;
    for (auto& w : s.mass) tot += (w = 1.0 + static_cast<double>(rng.below(3)));
    for (auto& w : s.mass) w /= tot;
    return s;
}

inline std::vector<FiniteMetricMeasureSpace> corpus(Rng& rng) {
    std::vector<FiniteMetricMeasureSpace> c{FiniteMetricMeasureSpace(1), two_point(1.0), two_point(2.0),
                                            two_point(1.0, 1.0), path_space(3), path_space(4), star_space(3)};
    for (int i = 0; i < 8; ++i) c.push_back(random_space(2 + static_cast<int>(rng.below(4)), rng));
    return c;
}

}  // namespace acc

// ---------- criteria ----------

inline CriterionResult criterion_1(std::uint64_t seed, RunRecord& rec) {
    CriterionResult r{1, "configuration-model pmf", true, ""};
    long long seqs = 0;
    for (int ell = 2; ell <= 8; ell += 2) {
        std::vector<std::vector<int>> ds;
        std::vector<int> cur;
        acc::compositions(ell, cur, ds);
        for (const auto& d : ds) {
            const auto all = enumerate_pairings(d);
            std::map<std::string, std::pair<Multigraph, long long>> classes;
            for (const auto& g : all) {
                auto [it, fresh] = classes.try_emplace(canonical_key(g), g, 0);
                ++it->second.second;
            }
            Rational total = 0;
            for (const auto& [k, gc] : classes) {
                const Rational p = cm_pmf(gc.first, d);
                total += p;
                if (p != Rational(gc.second, static_cast<long long>(all.size()))) r.pass = false;
            }
            if (total != 1) r.pass = false;
            ++seqs;
        }
    }
    rec.add("criterion_1", 0, "degree_sequences_checked", static_cast<double>(seqs));
    const std::vector<int> d33{3, 3};
    Multigraph triple(2);
    for (int i = 0; i < 3; ++i) triple.add_edge(0, 1);
    const bool exact = cm_pmf(triple, d33) == Rational(2, 5);
    const long long samples = 100000;
    long long hits = 0;
    auto rng = Rng::stream(seed, 0, tag("c1-cm"));
    for (long long i = 0; i < samples; ++i) {
        const auto g = configuration_model(d33, rng);
        hits += g.edge(0).u != g.edge(0).v && g.edge(1).u != g.edge(1).v && g.edge(2).u != g.edge(2).v;
    }
    const double freq = static_cast<double>(hits) / samples;
    rec.add("criterion_1", 0, "triple_edge_frequency", freq);
    r.pass = r.pass && exact && std::fabs(freq - 0.4) <= 0.01;
    r.detail = std::to_string(seqs) + " sequences sum to 1, Pr(triple)=2/5 " + (exact ? "exact" : "WRONG") +
               ", empirical " + fmt("%.4f", freq);
    return r;
}

inline CriterionResult criterion_2(std::uint64_t seed, RunRecord& rec) {
    auto a = Rng::stream(seed, 0, tag("c2-theta"));
    auto b = Rng::stream(seed, 0, tag("c2-k4"));
    const double tv_theta = law_equivalence_test(acc::theta(), 100000, a);
    const double tv_k4 = law_equivalence_test(acc::k4(), 100000, b);
    rec.add("criterion_2", 0, "tv_theta", tv_theta);
    rec.add("criterion_2", 0, "tv_k4", tv_k4);
    return {2, "CBD_infinity vs MST law", tv_theta < 0.02 && tv_k4 < 0.03,
            "TV theta " + fmt("%.4f", tv_theta) + " (<0.02), K4 " + fmt("%.4f", tv_k4) + " (<0.03)"};
}

inline CriterionResult criterion_3(std::uint64_t seed, RunRecord& rec) {
    const auto tri = acc::triangle();
    auto rng = Rng::stream(seed, 0, tag("c3"));
    const long long reps = 100000;
    std::vector<long long> alive(3, 0), pattern(8, 0);
    std::vector<double> lengths;
    for (long long i = 0; i < reps; ++i) {
        const auto out = poisson_marking(tri, 1.0, rng);
        int code = 0;
        for (int e = 0; e < 3; ++e)
            if (out.survived[e]) {
                ++alive[e];
                code |= 1 << e;
                lengths.push_back(out.marked.edge(e).len);
            }
        ++pattern[code];
    }
    double worst = 0.0;
    for (int e = 0; e < 3; ++e) {
        const double f = static_cast<double>(alive[e]) / reps;
        rec.add("criterion_3", 0, "survival_edge_" + std::to_string(e), f);
        worst = std::max(worst, std::fabs(f - 0.5));
    }
    const auto chi = chi_square_test(pattern, std::vector<double>(8, 0.125));
    const auto ks = ks_test(lengths, [](double x) { return exponential_cdf(x, 0.5); });
    rec.add("criterion_3", 0, "pattern_chi2_p", chi.p_value);
    rec.add("criterion_3", 0, "length_ks", ks.statistic);
    return {3, "Poisson-marking coupling on the triangle",
            worst <= 0.01 && chi.p_value >= 0.001 && ks.statistic < 0.01,
            "max |survival-0.5| " + fmt("%.4f", worst) + ", chi2 p " + fmt("%.4f", chi.p_value) + ", KS " +
                fmt("%.4f", ks.statistic)};
}

inline CriterionResult criterion_4(std::uint64_t seed, RunRecord& rec) {
    const std::vector<int> d{3, 3};
    ExactLaw q1_law, joint_law;
    const auto all = enumerate_pairings(d);
    const Rational w(1, static_cast<long long>(all.size() * 3));
    for (const auto& g : all)
        for (int drop = 0; drop < g.m(); ++drop) {
            std::vector<int> keep;
            for (int i = 0; i < g.m(); ++i)
                if (i != drop) keep.push_back(i);
            const auto q1 = g.edge_subgraph(keep);
            q1_law[canonical_key(q1)] += w;
            joint_law[canonical_key(g) + "|" + canonical_key(q1)] += w;
        }
    EmpiricalLaw q1_emp, joint_emp;
    auto rng = Rng::stream(seed, 0, tag("c4"));
    for (long long i = 0; i < 100000; ++i) {
        const auto c = half_edge_coupling(d, 1, rng);
        q1_emp.add(canonical_key(c.q1));
        joint_emp.add(canonical_key(c.q2) + "|" + canonical_key(c.q1));
    }
    const double tv = tv_distance(q1_emp, q1_law);
    const double tv_joint = tv_distance(joint_emp, joint_law);
    rec.add("criterion_4", 0, "tv_q1", tv);
    rec.add("criterion_4", 0, "tv_joint", tv_joint);
    return {4, "half-edge coupling", tv < 0.03,
            "TV(Q1) " + fmt("%.4f", tv) + " (<0.03), joint " + fmt("%.4f", tv_joint)};
}

inline CriterionResult criterion_5(std::uint64_t seed, RunRecord& rec) {
    const int n = 1000000;
    const long long reps = 30;
    std::vector<DegreeStats> out(reps);
    parallel_for(reps, [&](long long i) {
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(i), tag("c5"));
        out[i] = degree_stats_after_removal(n, 3LL * n / 4, rng);
    });
    const double target[4] = {0.125, 0.375, 0.375, 0.125};
    double worst = 0.0;
    std::vector<double> crit;
    for (long long i = 0; i < reps; ++i) {
        for (int k = 0; k < 4; ++k) {
            worst = std::max(worst, std::fabs(out[i].histogram[k] - target[k]));
            rec.add("criterion_5", i, "degree_" + std::to_string(k), out[i].histogram[k]);
        }
        rec.add("criterion_5", i, "criticality", out[i].criticality);
        crit.push_back(out[i].criticality);
    }
    const double mc = mean(crit);
    return {5, "criticality after edge removal", worst <= 0.005 && std::fabs(mc) < 0.5,
            "max cell deviation " + fmt("%.5f", worst) + ", mean criticality " + fmt("%.4f", mc)};
}

inline CriterionResult criterion_6(std::uint64_t, RunRecord& rec) {
    const double v = criticality_prefactor({0.125, 0.375, 0.375, 0.125});
    const double err = std::fabs(v - std::cbrt(6.0));
    rec.add("criterion_6", 0, "prefactor", v);
    return {6, "6^{1/3} prefactor", err < 1e-12, fmt("%.15f", v) + ", error " + fmt("%.2e", err)};
}

inline CriterionResult criterion_7(std::uint64_t seed, RunRecord& rec) {
    const long long samples = 10000;
    std::vector<double> dist(samples);
    parallel_for(samples, [&](long long i) {
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(i), tag("c7-crt"));
        const auto x = sample_crt(1 << 14, 1, rng);
        dist[i] = x(0, 1);
    });
    const auto ks1 = ks_test(dist, rayleigh_cdf);
    // scalar identity: 2 s = 1 gives r = 3 fragments per replica
    const long long draws = 100000, per = 3;
    std::vector<double> z(draws);
    parallel_for(draws / per + 1, [&](long long i) {
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(i), tag("c7-eq"));
        const auto h = construct_H_s(2, 1 << 12, 0, rng);
        for (long long j = 0; j < per && i * per + j < draws; ++j)
            z[i * per + j] = std::sqrt(2.0) * h.Y[j] * std::sqrt(h.gamma[j]);
    });
    const auto ks2 = ks_test(z, [](double x) { return exponential_cdf(x); });
    rec.add("criterion_7", 0, "rayleigh_ks", ks1.statistic);
    rec.add("criterion_7", 0, "exp_identity_ks", ks2.statistic);
    return {7, "CRT distance laws", ks1.statistic < 0.03 && ks2.statistic < 0.02,
            "Rayleigh KS " + fmt("%.4f", ks1.statistic) + " (<0.03), exponential identity KS " +
                fmt("%.4f", ks2.statistic) + " (<0.02)"};
}

// all pendant fractions of H_{m,s} plus one uniformly chosen kernel edge; empty when the kernel is not 3-regular
struct PendantDraw {
    std::vector<double> masses;
    int chosen = -1;
};

inline PendantDraw pendant_draw(int m, int s, Rng& rng) {
    const auto h = sample_H_ms(m, s, rng);
    PendantDraw d;
    if (!kernel(h).is_three_regular()) return d;
    d.masses = pendant_masses(h);
    d.chosen = static_cast<int>(rng.below(d.masses.size()));
    return d;
}

inline CriterionResult criterion_8(std::uint64_t seed, RunRecord& rec) {
    const long long reps = 1000;
    const int s = 50, r = 3 * (s - 1);
    std::vector<double> ratio(reps);
    parallel_for(reps, [&](long long i) {
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(i), tag("c8-hs"));
        ratio[i] = construct_H_s(s, 1 << 10, 0, rng).L() / std::sqrt(static_cast<double>(r));
    });
    const double ml = mean(ratio);
    const int m = 2000, s2 = 3, r2 = 3 * (s2 - 1);
    std::vector<PendantDraw> draws(reps);
    parallel_for(reps, [&](long long i) {
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(i), tag("c8-pendant"));
        draws[i] = pendant_draw(m, s2, rng);
    });
    std::vector<double> one, pooled;
    for (const auto& d : draws) {
        if (d.chosen < 0) continue;
        one.push_back(d.masses[d.chosen]);
        pooled.insert(pooled.end(), d.masses.begin(), d.masses.end());
    }
    const double mf = mean(one), se = standard_error(one);
    const boost::math::beta_distribution<double> marg(0.5, (r2 - 1) / 2.0);
    const auto ks = ks_test(pooled, [&](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : boost::math::cdf(marg, x); });
    rec.add("criterion_8", 0, "mean_L_over_sqrt_r", ml);
    rec.add("criterion_8", 0, "pendant_mean", mf);
    rec.add("criterion_8", 0, "pendant_se", se);
    rec.add("criterion_8", 0, "pendant_replicas", static_cast<double>(one.size()));
    rec.add("criterion_8", 0, "pendant_beta_ks", ks.statistic);
    const bool pass = ml >= 0.9 && ml <= 1.1 && std::fabs(mf - 1.0 / r2) <= 3.0 * se && ks.statistic < 0.05;
    return {8, "H^(s) geometry", pass,
            "mean L/sqrt(r) " + fmt("%.4f", ml) + ", pendant mean " + fmt("%.4f", mf) + " vs 1/6 (3 SE = " +
                fmt("%.4f", 3 * se) + "), Beta KS " + fmt("%.4f", ks.statistic)};
}

inline CriterionResult criterion_9(std::uint64_t seed, RunRecord& rec) {
    const long long reps = 100;
    std::vector<CensusRow> rows(reps);
    parallel_for(reps, [&](long long i) {
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(i), tag("c9"));
        rows[i] = percolated_cm_census(100000, 0.0, rng);
    });
    long long with_kernel = 0, regular = 0;
    for (long long i = 0; i < reps; ++i) {
        with_kernel += rows[i].has_kernel;
        regular += rows[i].three_regular;
        rec.add("criterion_9", i, "largest_surplus", static_cast<double>(rows[i].surplus));
        rec.add("criterion_9", i, "kernel_three_regular", rows[i].three_regular);
    }
    const double cond = with_kernel ? static_cast<double>(regular) / with_kernel : 0.0;
    const double uncond = static_cast<double>(regular) / reps;
    rec.add("criterion_9", 0, "three_regular_given_kernel", cond);
    rec.add("criterion_9", 0, "three_regular_unconditional", uncond);
    return {9, "kernel regularity at criticality", with_kernel > 0 && cond >= 0.95,
            fmt("%.3f", cond) + " of " + std::to_string(with_kernel) + " kernels 3-regular (unconditional " +
                fmt("%.2f", uncond) + ")"};
}

inline CriterionResult criterion_10(std::uint64_t seed, RunRecord& rec) {
    ExperimentConfig c;
    c.sizes = {10000, 30000, 100000};
    c.replicas = 20;
    c.seed = seed;
    const auto out = mst_scaling(c);
    rec.append(out);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::string detail = "medians";
    for (int n : c.sizes) {
        const double md = median(out.values("mst_scaling_n" + std::to_string(n), "diam_over_cuberoot_n"));
        lo = std::min(lo, md);
        hi = std::max(hi, md);
        detail += " " + fmt("%.3f", md);
    }
    return {10, "diameter scaling stability", hi <= 1.5 * lo, detail + ", spread " + fmt("%.3f", hi / lo)};
}

// delta-method standard error of mean(a)/mean(b) for independent samples
inline double ratio_se(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    const double ra = standard_error(a) / ma, rb = standard_error(b) / mb;
    return ma / mb * std::sqrt(ra * ra + rb * rb);
}

inline CriterionResult criterion_11(std::uint64_t seed, RunRecord& rec) {
    const auto big = six_cuberoot_ratio(100000, 10000, 30, seed);
    for (std::size_t i = 0; i < big.cm.size(); ++i) {
        rec.add("criterion_11", static_cast<long long>(i), "cm_typical", big.cm[i]);
        rec.add("criterion_11", static_cast<long long>(i), "complete_typical", big.complete[i]);
    }
    const auto small = six_cuberoot_ratio(10000, 1000, 30, mix(seed, tag("smaller")));
    const double se_big = ratio_se(big.cm, big.complete), se_small = ratio_se(small.cm, small.complete);
    rec.add("criterion_11", 0, "ratio", big.ratio);
    rec.add("criterion_11", 0, "ratio_se", se_big);
    rec.add("criterion_11", 0, "ratio_small", small.ratio);
    rec.add("criterion_11", 0, "ratio_small_se", se_small);
    // drift: the larger size must not sit significantly farther from the target
    const double target = std::cbrt(6.0);
    const double away = std::fabs(big.ratio - target) - std::fabs(small.ratio - target);
    const bool drift = away <= 2.0 * std::hypot(se_big, se_small);
    return {11, "6^{1/3} comparison", big.ratio >= 1.5 && big.ratio <= 2.2 && drift,
            "ratio " + fmt("%.4f", big.ratio) + " +- " + fmt("%.4f", se_big) + " at n=1e5 (" +
                fmt("%.4f", small.ratio) + " +- " + fmt("%.4f", se_small) + " at n=1e4), target 1.8171"};
}

inline CriterionResult criterion_12(std::uint64_t seed, RunRecord& rec) {
    const long long reps = 1000;
    std::vector<LightPath> out(reps);
    parallel_for(reps, [&](long long i) {
        auto rng = Rng::stream(seed, static_cast<std::uint64_t>(i), tag("c12"));
        auto g = regular_configuration_model(200, 3, rng);
        for (int e = 0; e < g.m(); ++e) g.set_length(e, rng.exponential());
        out[i] = light_path_probe(g, 0.05, 12);
    });
    long long found = 0, inconclusive = 0;
    for (const auto& o : out) {
        found += o.found || o.inconclusive;
        inconclusive += o.inconclusive;
    }
    const double p = static_cast<double>(found) / reps;
    const double bound = 200.0 * std::exp(-12.0) + 3.0 * proportion_se(p, reps);
    rec.add("criterion_12", 0, "frequency", p);
    rec.add("criterion_12", 0, "inconclusive", static_cast<double>(inconclusive));
    return {12, "light-path bound", p <= bound,
            "frequency " + fmt("%.4g", p) + " <= " + fmt("%.4g", bound) + ", inconclusive " +
                std::to_string(inconclusive)};
}

inline CriterionResult criterion_13(std::uint64_t seed, RunRecord& rec) {
    bool ok = true;
    int checks = 0;
    auto expect = [&](double got, double want) {
        ok = ok && got == want;
        ++checks;
    };
    for (double a : {0.5, 1.0, 2.0, 3.0})
        for (double b : {0.25, 1.0, 4.0}) {
            expect(gh_exact(acc::two_point(a), acc::two_point(b)), std::fabs(a - b) / 2);
            expect(acc::gh_brute(acc::two_point(a), acc::two_point(b)), std::fabs(a - b) / 2);
        }
    for (double d : {0.5, 1.0, 3.0}) expect(gh_exact(FiniteMetricMeasureSpace(1), acc::two_point(d)), d / 2);
    // LP value for the (1,0) vs (1/2,1/2) two-point example, gap 1: 1/3
    const double lp = ghp_exact(acc::two_point(1.0, 1.0), acc::two_point(1.0));
    ok = ok && std::fabs(lp - 1.0 / 3.0) < 1e-15;
    ++checks;
    auto rng = Rng::stream(seed, 0, tag("c13"));
    const auto c = acc::corpus(rng);
    int dominated = 0, pairs = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double gh = gh_exact(c[i], c[j]);
            const double ghp = ghp_exact(c[i], c[j]);
            ++pairs;
            dominated += ghp >= gh;
            if (c[i].k * c[j].k <= 16) expect(gh, acc::gh_brute(c[i], c[j]));
        }
    rec.add("criterion_13", 0, "oracle_checks", checks);
    rec.add("criterion_13", 0, "ghp_ge_gh_pairs", dominated);
    return {13, "metric oracles", ok && dominated == pairs,
            std::to_string(checks) + " oracle checks " + (ok ? "exact" : "MISMATCH") + ", GHP>=GH on " +
                std::to_string(dominated) + "/" + std::to_string(pairs) + " pairs"};
}

inline CriterionResult criterion_14(std::uint64_t seed, RunRecord& rec) {
    // the 15 unicyclic graphs on [4] are the 4-edge subsets of K4
    const auto full = acc::k4();
    std::map<std::string, int> index;
    for (auto mask : enumerate_edge_subsets(full)) {
        if (std::popcount(mask) != 4) continue;
        std::vector<int> ids;
        for (int i = 0; i < 6; ++i)
            if (mask >> i & 1) ids.push_back(i);
        index.emplace(canonical_key(full.edge_subgraph(ids)), static_cast<int>(index.size()));
    }
    std::vector<long long> counts(index.size(), 0);
    long long stray = 0;
    auto rng = Rng::stream(seed, 0, tag("c14-hms"));
    const long long samples = 100000;
    for (long long i = 0; i < samples; ++i) {
        const auto it = index.find(canonical_key(sample_H_ms(4, 1, rng)));
        if (it == index.end()) ++stray;
        else ++counts[it->second];
    }
    const auto chi = chi_square_test(counts, std::vector<double>(counts.size(), 1.0 / counts.size()));
    ExactLaw uni;
    {
        Multigraph k3(3);
        k3.add_edge(0, 1);
        k3.add_edge(1, 2);
        k3.add_edge(0, 2);
        for (std::vector<int> ids : {std::vector<int>{0, 1}, {1, 2}, {0, 2}, {0, 1, 2}})
            uni[canonical_key(k3.edge_subgraph(ids))] = Rational(1, 4);
    }
    EmpiricalLaw emp;
    auto g = Rng::stream(seed, 0, tag("c14-gmp"));
    for (long long i = 0; i < samples; ++i) emp.add(canonical_key(sample_Gmp(3, 0.5, g)));
    const double tv = tv_distance(emp, uni);
    rec.add("criterion_14", 0, "hms_chi2_p", chi.p_value);
    rec.add("criterion_14", 0, "gmp_tv", tv);
    return {14, "sampler uniformity", index.size() == 15 && stray == 0 && chi.p_value >= 0.001 && tv < 0.02,
            "H_{4,1} chi2 p " + fmt("%.4f", chi.p_value) + " over " + std::to_string(index.size()) +
                " classes, G_{3,1/2} TV " + fmt("%.4f", tv)};
}

struct SuiteResult {
    RunRecord record;
    std::vector<CriterionResult> results;
    bool all_pass() const {
        for (const auto& r : results)
            if (!r.pass) return false;
        return true;
    }
};

// criteria 1-14; progress and timings go to log
inline SuiteResult run_suite(std::uint64_t seed, std::ostream* log = nullptr, const std::vector<int>& only = {}) {
    using Fn = CriterionResult (*)(std::uint64_t, RunRecord&);
    const Fn all[] = {criterion_1, criterion_2,  criterion_3,  criterion_4,  criterion_5,  criterion_6,  criterion_7,
                      criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13, criterion_14};
    SuiteResult out;
    for (int i = 0; i < 14; ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), i + 1) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        RunRecord rec;
        auto res = all[i](mix(seed, static_cast<std::uint64_t>(i + 1)), rec);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (log) *log << "criterion " << res.id << " done in " << fmt("%.1f", secs) << "s" << std::endl;
        rec.add("criterion_" + std::to_string(res.id), 0, "pass", res.pass);
        out.record.append(rec);
        out.results.push_back(std::move(res));
    }
    return out;
}

inline std::string verdict_line(const CriterionResult& r) {
    return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + " (" + r.title +
           "): " + r.detail;
}

}  // namespace mstlab
