#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"
#include "stats.hpp"

namespace mstlab {

struct FiniteMetricMeasureSpace {
    int k = 0;
    std::vector<double> d;     // row-major k*k
    std::vector<double> mass;  // sums to 1

    FiniteMetricMeasureSpace() = default;
    explicit FiniteMetricMeasureSpace(int points) : k(points), d(static_cast<std::size_t>(points) * points, 0.0) {
        mass.assign(points, points > 0 ? 1.0 / points : 0.0);
    }
    FiniteMetricMeasureSpace(const std::vector<std::vector<double>>& rows, std::vector<double> masses)
        : k(static_cast<int>(rows.size())), mass(std::move(masses)) {
        d.reserve(static_cast<std::size_t>(k) * k);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != k) throw std::invalid_argument("metric space: ragged matrix");
            d.insert(d.end(), r.begin(), r.end());
        }
        if (static_cast<int>(mass.size()) != k) throw std::invalid_argument("metric space: mass count");
    }

    double operator()(int i, int j) const { return d[static_cast<std::size_t>(i) * k + j]; }
    double& at(int i, int j) { return d[static_cast<std::size_t>(i) * k + j]; }
    void set(int i, int j, double x) {
        at(i, j) = x;
        at(j, i) = x;
    }

    double diameter() const {
        double m = 0.0;
        for (double x : d) m = std::max(m, x);
        return m;
    }
    std::vector<double> eccentricities() const {
        std::vector<double> e(k, 0.0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) e[i] = std::max(e[i], (*this)(i, j));
        return e;
    }

    FiniteMetricMeasureSpace scaled(double c) const {
        auto s = *this;
        for (auto& x : s.d) x *= c;
        return s;
    }

    // symmetry, zero diagonal, triangle inequality (pseudo-metrics allowed), mass normalisation
    void validate(double tol = 1e-9) const {
        if (static_cast<int>(mass.size()) != k || d.size() != static_cast<std::size_t>(k) * k)
            throw std::invalid_argument("metric space: inconsistent sizes");
        double tot = 0.0;
        for (double m : mass) {
            if (!(m >= 0.0)) throw std::invalid_argument("metric space: negative mass");
            tot += m;
        }
        if (k > 0 && std::fabs(tot - 1.0) > tol) throw std::invalid_argument("metric space: masses do not sum to 1");
        for (int i = 0; i < k; ++i) {
            if ((*this)(i, i) != 0.0) throw std::invalid_argument("metric space: nonzero diagonal");
            for (int j = 0; j < k; ++j) {
                if (!((*this)(i, j) >= 0.0) || !std::isfinite((*this)(i, j)))
                    throw std::invalid_argument("metric space: bad distance");
                if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) throw std::invalid_argument("metric space: asymmetric");
            }
        }
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                for (int l = 0; l < k; ++l)
                    if ((*this)(i, l) > (*this)(i, j) + (*this)(j, l) + tol)
                        throw std::invalid_argument("metric space: triangle inequality fails");
    }
};

// CSV: "k", masses line, k distance rows
inline void write_space(std::ostream& out, const FiniteMetricMeasureSpace& x) {
    char buf[64];
    out << x.k << '\n';
    for (int i = 0; i < x.k; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", x.mass[i]);
        out << (i ? "," : "") << buf;
    }
    out << '\n';
    for (int i = 0; i < x.k; ++i) {
        for (int j = 0; j < x.k; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", x(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

inline FiniteMetricMeasureSpace read_space(std::istream& in) {
    auto row = [&](int expect) {
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("space csv: truncated");
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (static_cast<int>(v.size()) != expect) throw std::runtime_error("space csv: wrong row length");
        return v;
    };
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("space csv: missing header");
    const int k = std::stoi(line);
    if (k < 0) throw std::runtime_error("space csv: bad k");
    FiniteMetricMeasureSpace x(k);
    if (k == 0) return x;
    x.mass = row(k);
    for (int i = 0; i < k; ++i) {
        const auto r = row(k);
        for (int j = 0; j < k; ++j) x.at(i, j) = r[j];
    }
    return x;
}

using Correspondence = std::vector<std::pair<int, int>>;

inline double distortion(const Correspondence& c, const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y) {
    std::vector<char> cx(x.k, 0), cy(y.k, 0);
    for (auto [a, b] : c) {
        if (a < 0 || a >= x.k || b < 0 || b >= y.k) throw std::out_of_range("distortion: pair out of range");
        cx[a] = cy[b] = 1;
    }
    if (std::count(cx.begin(), cx.end(), 0) || std::count(cy.begin(), cy.end(), 0))
        throw std::invalid_argument("distortion: correspondence does not cover both spaces");
    double m = 0.0;
    for (auto [a, b] : c)
        for (auto [a2, b2] : c) m = std::max(m, std::fabs(x(a, a2) - y(b, b2)));
    return m;
}

namespace detail {

inline std::vector<double> distortion_levels(const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y) {
    std::vector<double> lv{0.0};
    for (int a = 0; a < x.k; ++a)
        for (int a2 = a; a2 < x.k; ++a2)
            for (int b = 0; b < y.k; ++b)
                for (int b2 = 0; b2 < y.k; ++b2) lv.push_back(std::fabs(x(a, a2) - y(b, b2)));
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    return lv;
}

// compatibility of pair nodes (a,b) at level delta; node id = a*ky + b
struct PairGraph {
    int kx, ky, nodes;
    std::vector<std::uint64_t> adj;  // bitmask rows (nodes <= 64)

    PairGraph(const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y, double delta)
        : kx(x.k), ky(y.k), nodes(x.k * y.k), adj(static_cast<std::size_t>(nodes), 0) {
        for (int p = 0; p < nodes; ++p)
            for (int q = 0; q < nodes; ++q)
                if (std::fabs(x(p / ky, q / ky) - y(p % ky, q % ky)) <= delta) adj[p] |= std::uint64_t{1} << q;
    }
    bool covers(std::uint64_t set) const {
        std::uint32_t mx = 0, my = 0;
        for (int p = 0; p < nodes; ++p)
            if (set >> p & 1u) {
                mx |= 1u << (p / ky);
                my |= 1u << (p % ky);
            }
        return mx == (1u << kx) - 1 && my == (1u << ky) - 1;
    }
};

// is there a covering clique (correspondence with dis <= delta)?
inline bool covering_clique_exists(const PairGraph& g) {
    // greedy branching on the uncovered point with fewest candidates
    std::function<bool(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t chosen, std::uint64_t allowed) -> bool {
        std::uint32_t mx = 0, my = 0;
        for (int p = 0; p < g.nodes; ++p)
            if (chosen >> p & 1u) {
                mx |= 1u << (p / g.ky);
                my |= 1u << (p % g.ky);
            }
        int best_count = std::numeric_limits<int>::max();
        std::uint64_t best_opts = 0;
        for (int a = 0; a < g.kx; ++a) {
            if (mx >> a & 1u) continue;
            std::uint64_t opts = 0;
            for (int b = 0; b < g.ky; ++b) opts |= std::uint64_t{1} << (a * g.ky + b);
            opts &= allowed;
            const int c = std::popcount(opts);
            if (c < best_count) {
                best_count = c;
                best_opts = opts;
            }
        }
        for (int b = 0; b < g.ky; ++b) {
            if (my >> b & 1u) continue;
            std::uint64_t opts = 0;
            for (int a = 0; a < g.kx; ++a) opts |= std::uint64_t{1} << (a * g.ky + b);
            opts &= allowed;
            const int c = std::popcount(opts);
            if (c < best_count) {
                best_count = c;
                best_opts = opts;
            }
        }
        if (best_count == std::numeric_limits<int>::max()) return true;
        if (best_count == 0) return false;
        for (int p = 0; p < g.nodes; ++p)
            if (best_opts >> p & 1u)
                if (rec(chosen | std::uint64_t{1} << p, allowed & g.adj[p])) return true;
        return false;
    };
    std::uint64_t self = 0;
    for (int p = 0; p < g.nodes; ++p)
        if (g.adj[p] >> p & 1u) self |= std::uint64_t{1} << p;
    return rec(0, self);
}

// maximal cliques (Bron-Kerbosch with pivot)
inline void maximal_cliques(const PairGraph& g, std::uint64_t r, std::uint64_t p, std::uint64_t x,
                            std::vector<std::uint64_t>& out) {
    if (!p && !x) {
        out.push_back(r);
        return;
    }
    const std::uint64_t px = p | x;
    int pivot = std::countr_zero(px);
    int best = -1;
    for (std::uint64_t s = px; s; s &= s - 1) {
        const int u = std::countr_zero(s);
        const int c = std::popcount(p & g.adj[u] & ~(std::uint64_t{1} << u));
        if (c > best) {
            best = c;
            pivot = u;
        }
    }
    for (std::uint64_t s = p & ~(g.adj[pivot] & ~(std::uint64_t{1} << pivot)); s; s &= s - 1) {
        const int v = std::countr_zero(s);
        const std::uint64_t bit = std::uint64_t{1} << v;
        const std::uint64_t nb = g.adj[v] & ~bit;
        maximal_cliques(g, r | bit, p & nb, x & nb, out);
        p &= ~bit;
        x |= bit;
    }
}

// exact binary value of a finite double
inline Rational exact_rational(double v) {
    if (v == 0.0) return Rational(0);
    int e = 0;
    const double frac = std::frexp(v, &e);
    const auto mant = static_cast<long long>(std::ldexp(frac, 53));
    e -= 53;
    Rational r(mant);
    if (e >= 0) return r * Rational(BigInt(1) << e);
    return r / Rational(BigInt(1) << -e);
}

// max flow from sources x (capacity mu1) to sinks y (capacity mu2) over the pair set
inline Rational max_transport(const std::vector<Rational>& m1, const std::vector<Rational>& m2, std::uint64_t pairs,
                              int ky) {
    const int kx = static_cast<int>(m1.size());
    const int nv = kx + ky + 2, s = kx + ky, t = kx + ky + 1;
    std::vector<std::vector<Rational>> cap(nv, std::vector<Rational>(nv, Rational(0)));
    const Rational big = 2;
    for (int a = 0; a < kx; ++a) cap[s][a] = m1[a];
    for (int b = 0; b < ky; ++b) cap[kx + b][t] = m2[b];
    for (int p = 0; p < kx * ky; ++p)
        if (pairs >> p & 1u) cap[p / ky][kx + p % ky] = big;
    Rational flow = 0;
    for (;;) {
        std::vector<int> prev(nv, -1);
        prev[s] = s;
        std::vector<int> q{s};
        for (std::size_t h = 0; h < q.size() && prev[t] < 0; ++h)
            for (int w = 0; w < nv; ++w)
                if (prev[w] < 0 && cap[q[h]][w] > 0) {
                    prev[w] = q[h];
                    q.push_back(w);
                }
        if (prev[t] < 0) break;
        Rational aug = -1;
        for (int v = t; v != s; v = prev[v])
            if (aug < 0 || cap[prev[v]][v] < aug) aug = cap[prev[v]][v];
        for (int v = t; v != s; v = prev[v]) {
            cap[prev[v]][v] -= aug;
            cap[v][prev[v]] += aug;
        }
        flow += aug;
    }
    return flow;
}

}  // namespace detail

// min over couplings pi of max(||mu1-pi1|| + ||mu2-pi2||, pi(C^c)) for a fixed pair set C
inline Rational ghp_inner(const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y, std::uint64_t pairs) {
    std::vector<Rational> m1, m2;
    for (double v : x.mass) m1.push_back(detail::exact_rational(v));
    for (double v : y.mass) m2.push_back(detail::exact_rational(v));
    Rational t1 = 0, t2 = 0;
    for (const auto& v : m1) t1 += v;
    for (const auto& v : m2) t2 += v;
    const Rational f = detail::max_transport(m1, m2, pairs, y.k);
    // outside mass b sits on residual cells, which all lie off C
    const Rational rest = t1 + t2 - 2 * f;
    const Rational room = (t1 < t2 ? t1 : t2) - f;
    const Rational b = rest / 3 < room ? rest / 3 : room;
    const Rational disc = rest - 2 * b;
    return disc > b ? disc : b;
}

inline double gh_exact(const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y, int cap = 7) {
    if (x.k > cap || y.k > cap) throw std::length_error("gh_exact: space too large, use gh_bounds");
    if (x.k == 0 || y.k == 0) throw std::invalid_argument("gh_exact: empty space");
    const auto lv = detail::distortion_levels(x, y);
    std::size_t lo = 0, hi = lv.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (detail::covering_clique_exists(detail::PairGraph(x, y, lv[mid])))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lv[lo] / 2.0;
}

inline double ghp_exact(const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y, int cap = 5) {
    if (x.k > cap || y.k > cap) throw std::length_error("ghp_exact: space too large");
    if (x.k == 0 || y.k == 0) throw std::invalid_argument("ghp_exact: empty space");
    const auto lv = detail::distortion_levels(x, y);
    double best = std::numeric_limits<double>::infinity();
    std::map<std::uint64_t, double> seen;
    for (double delta : lv) {
        if (delta / 2.0 >= best) break;
        const detail::PairGraph g(x, y, delta);
        std::uint64_t all = 0;
        for (int p = 0; p < g.nodes; ++p)
            if (g.adj[p] >> p & 1u) all |= std::uint64_t{1} << p;
        std::vector<std::uint64_t> cliques;
        detail::maximal_cliques(g, 0, all, 0, cliques);
        for (auto c : cliques) {
            if (!g.covers(c) || seen.count(c)) continue;
            Correspondence corr;
            for (int p = 0; p < g.nodes; ++p)
                if (c >> p & 1u) corr.push_back({p / g.ky, p % g.ky});
            const double val = std::max(distortion(corr, x, y) / 2.0, to_double(ghp_inner(x, y, c)));
            seen[c] = val;
            best = std::min(best, val);
        }
    }
    return best;
}

struct GhBounds {
    double lower = 0.0;
    double upper = 0.0;
};

inline GhBounds gh_bounds(const FiniteMetricMeasureSpace& x, const FiniteMetricMeasureSpace& y) {
    if (x.k == 0 || y.k == 0) throw std::invalid_argument("gh_bounds: empty space");
    const auto ex = x.eccentricities(), ey = y.eccentricities();
    auto nearest = [](double v, const std::vector<double>& e) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < e.size(); ++i)
            if (std::fabs(e[i] - v) < std::fabs(e[best] - v)) best = i;
        return best;
    };
    double gap = 0.0;
    Correspondence c;
    for (int a = 0; a < x.k; ++a) {
        const auto b = nearest(ex[a], ey);
        gap = std::max(gap, std::fabs(ex[a] - ey[b]));
        c.push_back({a, static_cast<int>(b)});
    }
    for (int b = 0; b < y.k; ++b) {
        const auto a = nearest(ey[b], ex);
        gap = std::max(gap, std::fabs(ey[b] - ex[a]));
        c.push_back({static_cast<int>(a), b});
    }
    double upper = std::min(std::max(x.diameter(), y.diameter()), distortion(c, x, y));
    if (x.k == y.k) {
        Correspondence same;
        for (int a = 0; a < x.k; ++a) same.push_back({a, a});
        upper = std::min(upper, distortion(same, x, y));
    }
    GhBounds r;
    r.lower = std::max(gap, std::fabs(x.diameter() - y.diameter())) / 2.0;
    r.upper = upper / 2.0;
    return r;
}

// fm(delta; X): largest closed-ball mass
inline double max_ball_mass(const FiniteMetricMeasureSpace& x, double delta) {
    if (delta < 0.0) throw std::invalid_argument("max_ball_mass: delta >= 0");
    double best = 0.0;
    for (int i = 0; i < x.k; ++i) {
        double s = 0.0;
        for (int j = 0; j < x.k; ++j)
            if (x(i, j) <= delta) s += x.mass[j];
        best = std::max(best, s);
    }
    return best;
}

// samples of d(xi, xi') with xi, xi' i.i.d. from the mass measure
inline std::vector<double> typical_distance_profile(const FiniteMetricMeasureSpace& x, int samples, Rng& rng) {
    if (x.k == 0) throw std::invalid_argument("typical_distance_profile: empty space");
    std::vector<double> cum(x.k);
    double s = 0.0;
    for (int i = 0; i < x.k; ++i) cum[i] = (s += x.mass[i]);
    auto draw = [&] {
        const double u = rng.uniform() * s;
        return std::min(static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()), x.k - 1);
    };
    std::vector<double> out(samples);
    for (auto& v : out) {
        const int a = draw();
        const int b = draw();
        v = x(a, b);
    }
    return out;
}

inline std::map<double, double> typical_distance_law(const FiniteMetricMeasureSpace& x) {
    std::map<double, double> law;
    for (int i = 0; i < x.k; ++i)
        for (int j = 0; j < x.k; ++j) law[x(i, j)] += x.mass[i] * x.mass[j];
    return law;
}

// greedy covering number by closed balls of radius delta
inline int covering_number(const FiniteMetricMeasureSpace& x, double delta) {
    std::vector<char> covered(x.k, 0);
    int n = 0;
    for (int i = 0; i < x.k; ++i) {
        if (covered[i]) continue;
        ++n;
        for (int j = 0; j < x.k; ++j)
            if (x(i, j) <= delta) covered[j] = 1;
    }
    return n;
}

inline double minkowski_slope(const FiniteMetricMeasureSpace& x, const std::vector<double>& deltas) {
    if (deltas.size() < 3) throw std::invalid_argument("minkowski_slope: need at least 3 grid points");
    std::vector<double> lx, ly;
    for (double d : deltas) {
        if (!(d > 0.0)) throw std::invalid_argument("minkowski_slope: radii must be positive");
        lx.push_back(std::log(1.0 / d));
        ly.push_back(std::log(static_cast<double>(covering_number(x, d))));
    }
    const double mx = mean(lx), my = mean(ly);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("minkowski_slope: degenerate grid");
    return sxy / sxx;
}

// max_j |sum_{i<=j} p_pi(i) - j/m| for a uniform permutation pi
inline double exch_partial_sum_stat(const std::vector<double>& p, Rng& rng) {
    const int m = static_cast<int>(p.size());
    if (m == 0) throw std::invalid_argument("exch_partial_sum_stat: empty vector");
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    double s = 0.0, best = 0.0;
    for (int j = 0; j < m; ++j) {
        s += p[perm[j]];
        best = std::max(best, std::fabs(s - static_cast<double>(j + 1) / m));
    }
    return best;
}

}  // namespace mstlab
