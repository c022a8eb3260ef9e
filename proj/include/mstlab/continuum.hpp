#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "metric.hpp"
#include "multigraph.hpp"
#include "rng.hpp"
#include "samplers.hpp"

namespace mstlab {

// values on the grid i/N, i = 0..N
struct ExcursionPath {
    int N = 0;
    std::vector<double> h;

    double at(double s) const {
        const double x = std::clamp(s, 0.0, 1.0) * N;
        const int i = std::min(static_cast<int>(x), N - 1);
        const double f = x - i;
        return h[i] + f * (h[i + 1] - h[i]);
    }
    double area() const {
        double a = 0.0;
        for (int i = 0; i < N; ++i) a += 0.5 * (h[i] + h[i + 1]);
        return a / N;
    }
    ExcursionPath scaled(double c) const {
        auto e = *this;
        for (auto& v : e.h) v *= c;
        return e;
    }
    // min over [s,t] of the piecewise-linear interpolant
    double min_between(double s, double t) const {
        if (s > t) std::swap(s, t);
        double m = std::min(at(s), at(t));
        const int a = static_cast<int>(std::floor(s * N)) + 1;
        const int b = static_cast<int>(std::ceil(t * N)) - 1;
        for (int i = std::max(a, 0); i <= std::min(b, N); ++i) m = std::min(m, h[i]);
        return m;
    }
};

// uniform Dyck path of length N-2 by the cycle lemma, lifted to U + path + D, scaled by 1/sqrt(N)
inline ExcursionPath brownian_excursion(int N, Rng& rng) {
    if (N < 2 || (N & (N - 1))) throw std::invalid_argument("brownian_excursion: N must be a power of two >= 2");
    const int k = (N - 2) / 2;
    std::vector<int> steps(2 * k + 1, -1);
    for (int i = 0; i < k; ++i) steps[i] = 1;
    rng.shuffle(steps);
    int walk = 0, best = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        walk += steps[i];
        if (walk < best) {
            best = walk;
            at = i + 1;
        }
    }
    std::rotate(steps.begin(), steps.begin() + static_cast<long>(at % steps.size()), steps.end());
    ExcursionPath e;
    e.N = N;
    e.h.assign(N + 1, 0.0);
    const double sc = 1.0 / std::sqrt(static_cast<double>(N));
    int level = 1;
    e.h[1] = sc;
    for (int i = 0; i < 2 * k; ++i) {
        level += steps[i];
        e.h[i + 2] = level * sc;
    }
    e.h[N] = 0.0;
    return e;
}

// d_h(s,t) = h(s) + h(t) - 2 min_[s,t] h for sorted times, O(q^2 + N)
inline std::vector<double> excursion_distances(const ExcursionPath& h, const std::vector<double>& times) {
    const int q = static_cast<int>(times.size());
    std::vector<int> ord(q);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return times[a] < times[b]; });
    std::vector<double> gap(q > 0 ? q - 1 : 0);
    for (int i = 0; i + 1 < q; ++i) gap[i] = h.min_between(times[ord[i]], times[ord[i + 1]]);
    std::vector<double> d(static_cast<std::size_t>(q) * q, 0.0);
    for (int i = 0; i < q; ++i) {
        double m = h.at(times[ord[i]]);
        for (int j = i + 1; j < q; ++j) {
            m = std::min(m, gap[j - 1]);
            const double v = std::max(0.0, h.at(times[ord[i]]) + h.at(times[ord[j]]) - 2.0 * m);
            d[static_cast<std::size_t>(ord[i]) * q + ord[j]] = v;
            d[static_cast<std::size_t>(ord[j]) * q + ord[i]] = v;
        }
    }
    return d;
}

// point 0 is the root (time 0, mass 0); points 1..q are uniform times with mass 1/q
inline FiniteMetricMeasureSpace tree_from_excursion(const ExcursionPath& h, int q, Rng& rng,
                                                    std::vector<double>* times_out = nullptr) {
    if (q < 1) throw std::invalid_argument("tree_from_excursion: q >= 1");
    std::vector<double> times{0.0};
    for (int i = 0; i < q; ++i) times.push_back(rng.uniform());
    FiniteMetricMeasureSpace x(q + 1);
    x.d = excursion_distances(h, times);
    x.mass.assign(q + 1, 1.0 / q);
    x.mass[0] = 0.0;
    if (times_out) *times_out = times;
    return x;
}

// Brownian CRT coded by 2e
inline FiniteMetricMeasureSpace sample_crt(int N, int q, Rng& rng) {
    const auto e = brownian_excursion(N, rng).scaled(2.0);
    return tree_from_excursion(e, q, rng);
}

// sup{y in [0,x) : f(y) = h}, -inf when empty
inline double prev(const ExcursionPath& f, double x, double h) {
    const double pos = std::clamp(x, 0.0, 1.0) * f.N;
    double right = pos;
    for (int i = std::min(static_cast<int>(pos), f.N - 1); i >= 0; --i) {
        const double a = f.h[i], b = f.h[i + 1];
        if (a == b) {
            if (a == h) return right / f.N;
        } else {
            const double y = i + (h - a) / (b - a);
            if (y >= i && (y < right || (y == right && right < pos))) return y / f.N;
        }
        right = i;
    }
    return -std::numeric_limits<double>::infinity();
}

// inf{y in (x,1] : f(y) < h}, +inf when empty
inline double nxt(const ExcursionPath& f, double x, double h) {
    const double pos = std::clamp(x, 0.0, 1.0) * f.N;
    double left = pos;
    for (int i = std::min(static_cast<int>(pos), f.N - 1); i < f.N; ++i) {
        const double a = f.h[i], b = f.h[i + 1];
        const double fl = a + (left - i) * (b - a);
        if (fl < h) return left / f.N;
        if (b < h) return (i + (h - a) / (b - a)) / f.N;
        left = i + 1;
    }
    return std::numeric_limits<double>::infinity();
}

struct GluedSpace {
    FiniteMetricMeasureSpace space;  // kernel vertices first (mass 0) then sampled points
    Multigraph kernel;               // 3-regular, edge length = glued root-to-target distance
    std::vector<double> X;           // Dirichlet(1/2) weights
    std::vector<double> Y;           // unscaled root-to-target distances
    std::vector<double> gamma;       // Gamma(1/2) draws, X_i = gamma_i / gamma_total
    double gamma_total = 0.0;
    std::vector<std::pair<double, double>> glue_times;  // tilted construction: (x_i, y_i)
    double L() const { return total_length(kernel); }
};

// connected configuration-model 3-regular multigraph on n vertices
inline Multigraph connected_cubic_kernel(int n, Rng& rng, long long max_attempts = 1000000) {
    for (long long a = 0; a < max_attempts; ++a) {
        auto k = regular_configuration_model(n, 3, rng);
        if (is_connected(k)) return k;
    }
    throw std::runtime_error("connected_cubic_kernel: rejection cap exceeded");
}

// all-pairs shortest paths on a small weighted graph
inline std::vector<double> all_pairs(int n, const std::vector<std::vector<std::pair<int, double>>>& adj) {
    std::vector<double> d(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::infinity());
    using item = std::pair<double, int>;
    for (int s = 0; s < n; ++s) {
        double* row = &d[static_cast<std::size_t>(s) * n];
        std::priority_queue<item, std::vector<item>, std::greater<item>> pq;
        row[s] = 0.0;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [dv, v] = pq.top();
            pq.pop();
            if (dv > row[v]) continue;
            for (auto [w, len] : adj[v])
                if (dv + len < row[w]) {
                    row[w] = dv + len;
                    pq.push({row[w], w});
                }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double m = std::min(d[static_cast<std::size_t>(i) * n + j], d[static_cast<std::size_t>(j) * n + i]);
            d[static_cast<std::size_t>(i) * n + j] = d[static_cast<std::size_t>(j) * n + i] = m;
        }
    return d;
}

// r CRT fragments rescaled by sqrt(X_i), glued root-to-target along the kernel edges;
// q = 0 skips the point sample
inline GluedSpace construct_H_s(int s, int N, int q, Rng& rng) {
    if (s < 2) throw std::invalid_argument("construct_H_s: s >= 2");
    const int n = 2 * (s - 1), r = 3 * (s - 1);
    GluedSpace out;
    const auto K = connected_cubic_kernel(n, rng);
    out.gamma.resize(r);
    for (auto& g : out.gamma) {
        g = rng.gamma(0.5);
        out.gamma_total += g;
    }
    for (double g : out.gamma) out.X.push_back(g / out.gamma_total);
    std::vector<ExcursionPath> frag;
    std::vector<double> ztime(r);
    out.kernel = Multigraph(n);
    for (int i = 0; i < r; ++i) {
        frag.push_back(brownian_excursion(N, rng).scaled(2.0));
        ztime[i] = rng.uniform();
        out.Y.push_back(frag.back().at(ztime[i]));
        out.kernel.add_edge(K.edge(i).u, K.edge(i).v, std::sqrt(out.X[i]) * out.Y[i]);
    }
    if (q <= 0) {
        out.space = FiniteMetricMeasureSpace(0);
        return out;
    }
    // points per fragment from the mass measure
    std::vector<std::vector<double>> times(r);
    std::vector<std::vector<int>> ids(r);
    std::vector<double> cum(r);
    double acc = 0.0;
    for (int i = 0; i < r; ++i) cum[i] = (acc += out.X[i]);
    for (int j = 0; j < q; ++j) {
        const int i = std::min(static_cast<int>(std::upper_bound(cum.begin(), cum.end(), rng.uniform() * acc) - cum.begin()), r - 1);
        times[i].push_back(rng.uniform());
        ids[i].push_back(n + j);
    }
    const int total = n + q;
    std::vector<std::vector<std::pair<int, double>>> adj(total);
    auto link = [&](int a, int b, double len) {
        adj[a].push_back({b, len});
        adj[b].push_back({a, len});
    };
    for (int i = 0; i < r; ++i) {
        const double sc = std::sqrt(out.X[i]);
        link(K.edge(i).u, K.edge(i).v, sc * out.Y[i]);
        std::vector<double> t{0.0, ztime[i]};
        t.insert(t.end(), times[i].begin(), times[i].end());
        const auto d = excursion_distances(frag[i], t);
        const int m = static_cast<int>(t.size());
        std::vector<int> node{K.edge(i).u, K.edge(i).v};
        node.insert(node.end(), ids[i].begin(), ids[i].end());
        for (int a = 2; a < m; ++a)
            for (int b = 0; b < a; ++b) link(node[a], node[b], sc * d[static_cast<std::size_t>(a) * m + b]);
    }
    out.space = FiniteMetricMeasureSpace(total);
    out.space.d = all_pairs(total, adj);
    out.space.mass.assign(total, 1.0 / q);
    for (int v = 0; v < n; ++v) out.space.mass[v] = 0.0;
    return out;
}

struct TiltControl {
    double area_cap = 1.2;
    int restarts = 0;
    long long proposals = 0;
};

// excursion biased by (int e)^s, exact rejection against area_cap
inline ExcursionPath tilted_excursion(int s, int N, Rng& rng, TiltControl& ctl, long long max_proposals = 10000000) {
    for (long long a = 0; a < max_proposals; ++a) {
        ++ctl.proposals;
        auto e = brownian_excursion(N, rng);
        const double area = e.area();
        if (area > ctl.area_cap) {
            while (ctl.area_cap < area) ctl.area_cap *= 1.25;
            ++ctl.restarts;
            continue;
        }
        if (rng.uniform() < std::pow(area / ctl.area_cap, s)) return e;
    }
    throw std::runtime_error("tilted_excursion: rejection cap exceeded");
}

// 2 (T_e / ~) with s identifications q(x_i) ~ q(y_i)
inline GluedSpace construct_H_s_tilted(int s, int N, int q, Rng& rng, TiltControl* control = nullptr) {
    if (s < 2) throw std::invalid_argument("construct_H_s_tilted: s >= 2");
    TiltControl local;
    TiltControl& ctl = control ? *control : local;
    const auto e = tilted_excursion(s, N, rng, ctl);
    double top = 0.0;
    for (double v : e.h) top = std::max(top, v);
    GluedSpace out;
    std::vector<double> t{0.0};
    for (int i = 0; i < s; ++i) {
        double y;
        do {
            y = rng.uniform();
        } while (rng.uniform() * top >= e.at(y));
        const double h = rng.uniform() * e.at(y);
        const double x = prev(e, y, h);
        out.glue_times.push_back({x, y});
        t.push_back(x);
        t.push_back(y);
    }
    for (int j = 0; j < q; ++j) t.push_back(rng.uniform());
    const int m = static_cast<int>(t.size());
    const auto d = excursion_distances(e, t);
    std::vector<std::vector<std::pair<int, double>>> adj(m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b) adj[a].push_back({b, 2.0 * d[static_cast<std::size_t>(a) * m + b]});
    for (int i = 0; i < s; ++i) {
        adj[1 + 2 * i].push_back({2 + 2 * i, 0.0});
        adj[2 + 2 * i].push_back({1 + 2 * i, 0.0});
    }
    out.space = FiniteMetricMeasureSpace(m);
    out.space.d = all_pairs(m, adj);
    out.space.mass.assign(m, q > 0 ? 1.0 / q : 0.0);
    for (int a = 0; a <= 2 * s; ++a) out.space.mass[a] = 0.0;
    return out;
}

}  // namespace mstlab
