#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "multigraph.hpp"

namespace mstlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// (2k-1)!! for an even argument 2k; 1 for 0
inline BigInt double_factorial_odd(int ell) {
    BigInt r = 1;
    for (int i = ell - 1; i > 1; i -= 2) r *= i;
    return r;
}

inline BigInt binomial_coefficient(const BigInt& n, int k) {
    if (k < 0 || n < k) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// canonical outcome encoding: vertex count plus sorted endpoint pairs
inline std::string canonical_key(const Multigraph& g) {
    std::vector<std::pair<int, int>> p;
    p.reserve(g.m());
    for (const auto& e : g.edges()) p.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
    std::sort(p.begin(), p.end());
    std::string s = std::to_string(g.n()) + ":";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(p[i].first) + '-' + std::to_string(p[i].second);
    }
    return s;
}

// key of an edge-id set relative to a fixed graph
inline std::string edge_set_key(std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(ids[i]);
    }
    return s;
}

struct EmpiricalLaw {
    std::map<std::string, long long> counts;
    long long total = 0;

    void add(const std::string& key, long long c = 1) {
        counts[key] += c;
        total += c;
    }
    double freq(const std::string& key) const {
        auto it = counts.find(key);
        return it == counts.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / total;
    }
};

using ExactLaw = std::map<std::string, Rational>;

inline Rational total_mass(const ExactLaw& p) {
    Rational s = 0;
    for (const auto& [k, v] : p) s += v;
    return s;
}

// 1/2 sum |p_hat - p|; an empirical outcome outside the exact support is an error
inline double tv_distance(const EmpiricalLaw& emp, const ExactLaw& exact) {
    if (emp.total <= 0) throw std::invalid_argument("tv_distance: empty empirical law");
    for (const auto& [k, c] : emp.counts)
        if (!exact.count(k)) throw std::invalid_argument("tv_distance: unmatched outcome " + k);
    double s = 0.0;
    for (const auto& [k, p] : exact) s += std::fabs(emp.freq(k) - to_double(p));
    return 0.5 * s;
}

inline Rational tv_distance(const ExactLaw& a, const ExactLaw& b) {
    Rational s = 0;
    for (const auto& [k, p] : a) {
        auto it = b.find(k);
        const Rational q = it == b.end() ? Rational(0) : it->second;
        s += p > q ? p - q : q - p;
    }
    for (const auto& [k, q] : b)
        if (!a.count(k)) s += q;
    return s / 2;
}

inline double tv_distance(const EmpiricalLaw& a, const EmpiricalLaw& b) {
    double s = 0.0;
    for (const auto& [k, c] : a.counts) s += std::fabs(a.freq(k) - b.freq(k));
    for (const auto& [k, c] : b.counts)
        if (!a.counts.count(k)) s += b.freq(k);
    return 0.5 * s;
}

// all (l-1)!! pairings of the half-edges of d, as multigraphs
inline std::vector<Multigraph> enumerate_pairings(const std::vector<int>& d, int cap = 8) {
    int ell = 0;
    for (int x : d) {
        if (x < 0) throw std::invalid_argument("negative degree");
        ell += x;
    }
    if (ell % 2) throw std::invalid_argument("enumerate_pairings: odd degree sum");
    if (ell > cap) throw std::length_error("enumerate_pairings: degree sum above cap");
    std::vector<int> owner;
    for (int v = 0; v < static_cast<int>(d.size()); ++v)
        for (int j = 0; j < d[v]; ++j) owner.push_back(v);
    std::vector<Multigraph> out;
    std::vector<char> used(ell, 0);
    std::vector<std::pair<int, int>> cur;
    std::function<void()> rec = [&]() {
        int first = -1;
        for (int i = 0; i < ell; ++i)
            if (!used[i]) {
                first = i;
                break;
            }
        if (first < 0) {
            Multigraph g(static_cast<int>(d.size()));
            for (auto [a, b] : cur) g.add_edge(owner[a], owner[b]);
            out.push_back(std::move(g));
            return;
        }
        used[first] = 1;
        for (int j = first + 1; j < ell; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            cur.push_back({first, j});
            rec();
            cur.pop_back();
            used[j] = 0;
        }
        used[first] = 0;
    };
    rec();
    return out;
}

// all spanning trees as edge-id lists (empty result when disconnected)
inline std::vector<std::vector<int>> enumerate_spanning_trees(const Multigraph& g, int cap = 10) {
    if (g.m() > cap) throw std::length_error("enumerate_spanning_trees: too many edges");
    std::vector<std::vector<int>> out;
    const int need = g.n() - 1;
    if (need < 0) return out;
    if (need == 0) {
        out.push_back({});
        return out;
    }
    const std::uint32_t full = 1u << g.m();
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (std::popcount(mask) != need) continue;
        UnionFind uf(g.n());
        bool ok = true;
        std::vector<int> ids;
        for (int i = 0; i < g.m() && ok; ++i)
            if (mask >> i & 1u) {
                ok = uf.unite(g.edge(i).u, g.edge(i).v);
                ids.push_back(i);
            }
        if (ok) out.push_back(std::move(ids));
    }
    return out;
}

// every edge subset as a bitmask over edge ids
inline std::vector<std::uint32_t> enumerate_edge_subsets(const Multigraph& g, int cap = 20) {
    if (g.m() > cap) throw std::length_error("enumerate_edge_subsets: too many edges");
    std::vector<std::uint32_t> out(std::size_t{1} << g.m());
    std::iota(out.begin(), out.end(), 0u);
    return out;
}

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double standard_error(const std::vector<double>& x) {
    return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

// Monte-Carlo standard error of a frequency
inline double proportion_se(double p, long long n) {
    return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

inline double quantile(std::vector<double> x, double q) {
    if (x.empty()) throw std::invalid_argument("quantile of empty sample");
    std::sort(x.begin(), x.end());
    const double pos = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

inline double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

// Pearson goodness of fit; cells with zero expected probability must have zero counts
inline ChiSquareResult chi_square_test(const std::vector<long long>& observed, const std::vector<double>& probs) {
    if (observed.size() != probs.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square_test: size mismatch");
    long long n = 0;
    for (auto c : observed) n += c;
    if (n == 0) throw std::invalid_argument("chi_square_test: no observations");
    ChiSquareResult r;
    int cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = probs[i] * static_cast<double>(n);
        if (e <= 0.0) {
            if (observed[i] > 0) {
                r.statistic = std::numeric_limits<double>::infinity();
                r.p_value = 0.0;
                r.df = static_cast<int>(observed.size()) - 1;
                return r;
            }
            continue;
        }
        const double d = static_cast<double>(observed[i]) - e;
        r.statistic += d * d / e;
        ++cells;
    }
    r.df = cells - 1;
    if (r.df < 1) return r;
    boost::math::chi_squared_distribution<double> dist(r.df);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

// P(K > x) for the Kolmogorov distribution
inline double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.18) {
        const double pi = 3.14159265358979323846;
        double s = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double a = (2 * k - 1) * pi / x;
            s += std::exp(-a * a / 8.0);
        }
        return 1.0 - std::sqrt(2.0 * pi) / x * s;
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool rejected(double level) const { return p_value < level; }
};

inline KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    KsResult r;
    r.statistic = d;
    const double sn = std::sqrt(n);
    r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

inline KsResult ks_test(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_test: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult r;
    r.statistic = d;
    const double ne = std::sqrt(na * nb / (na + nb));
    r.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

inline double exponential_cdf(double x, double mean = 1.0) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / mean); }
inline double rayleigh_cdf(double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-0.5 * x * x); }

}  // namespace mstlab
