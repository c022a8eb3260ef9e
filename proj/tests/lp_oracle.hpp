#pragma once

// Dense two-phase simplex over exact rationals with Bland's rule.
// min c.x subject to A x = b, x >= 0, b >= 0.

#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lp {

using Q = boost::multiprecision::cpp_rational;

struct Problem {
    std::vector<std::vector<Q>> a;
    std::vector<Q> b;
    std::vector<Q> c;
};

namespace detail {

struct Tableau {
    std::vector<std::vector<Q>> t;  // rows: constraints, last column rhs
    std::vector<int> basis;
    int cols = 0;

    void pivot(int r, int col) {
        const Q p = t[r][col];
        for (auto& v : t[r]) v /= p;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (static_cast<int>(i) == r || t[i][col] == 0) continue;
            const Q f = t[i][col];
            for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = col;
    }

    // minimise cost over columns allowed[j]; false when unbounded
    bool optimise(const std::vector<Q>& cost, const std::vector<char>& allowed) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols && enter < 0; ++j) {
                if (!allowed[j]) continue;
                Q red = cost[j];
                for (std::size_t i = 0; i < t.size(); ++i) red -= cost[basis[i]] * t[i][j];
                if (red < 0) enter = j;
            }
            if (enter < 0) return true;
            int leave = -1;
            Q best;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i][enter] <= 0) continue;
                const Q ratio = t[i][cols] / t[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = static_cast<int>(i);
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace detail

// optimal value, or nullopt when infeasible or unbounded
inline std::optional<Q> minimise(const Problem& p) {
    const int m = static_cast<int>(p.a.size());
    const int n = static_cast<int>(p.c.size());
    detail::Tableau tb;
    tb.cols = n + m;
    tb.t.assign(m, std::vector<Q>(n + m + 1, Q(0)));
    tb.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        if (p.b[i] < 0) throw std::invalid_argument("lp: negative rhs");
        for (int j = 0; j < n; ++j) tb.t[i][j] = p.a[i][j];
        tb.t[i][n + i] = 1;
        tb.t[i][n + m] = p.b[i];
        tb.basis[i] = n + i;
    }
    std::vector<Q> phase1(n + m, Q(0));
    for (int i = 0; i < m; ++i) phase1[n + i] = 1;
    std::vector<char> all(n + m, 1);
    tb.optimise(phase1, all);
    Q infeas = 0;
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] >= n) infeas += tb.t[i][n + m];
    if (infeas != 0) return std::nullopt;
    // drive zero-level artificials out of the basis where possible
    for (int i = 0; i < m; ++i) {
        if (tb.basis[i] < n) continue;
        for (int j = 0; j < n; ++j)
            if (tb.t[i][j] != 0) {
                tb.pivot(i, j);
                break;
            }
    }
    std::vector<Q> cost(n + m, Q(0));
    for (int j = 0; j < n; ++j) cost[j] = p.c[j];
    std::vector<char> orig(n + m, 0);
    for (int j = 0; j < n; ++j) orig[j] = 1;
    if (!tb.optimise(cost, orig)) return std::nullopt;
    Q v = 0;
    for (int i = 0; i < m; ++i) v += cost[tb.basis[i]] * tb.t[i][n + m];
    return v;
}

// min over measures pi >= 0 on X x Y of max(sum|mu1 - pi1| + sum|mu2 - pi2|, pi(off C))
inline Q ghp_inner(const std::vector<Q>& mu1, const std::vector<Q>& mu2, const std::vector<std::vector<char>>& in_c) {
    const int kx = static_cast<int>(mu1.size()), ky = static_cast<int>(mu2.size());
    // variables: pi (kx*ky), s (kx), t (ky), z, then one slack per inequality row
    const int npi = kx * ky, is = npi, it = is + kx, iz = it + ky, base = iz + 1;
    const int rows = 2 * kx + 2 * ky + 2;
    const int n = base + rows;
    Problem p;
    p.c.assign(n, Q(0));
    p.c[iz] = 1;
    int r = 0;
    auto row = [&]() -> std::vector<Q>& {
        p.a.emplace_back(n, Q(0));
        p.b.push_back(0);
        return p.a.back();
    };
    for (int a = 0; a < kx; ++a) {
        // s_a + pi1_a - e = mu1_a
        auto& x = row();
        x[is + a] = 1;
        for (int b = 0; b < ky; ++b) x[a * ky + b] = 1;
        x[base + r++] = -1;
        p.b.back() = mu1[a];
        // pi1_a - s_a + e = mu1_a
        auto& y = row();
        y[is + a] = -1;
        for (int b = 0; b < ky; ++b) y[a * ky + b] = 1;
        y[base + r++] = 1;
        p.b.back() = mu1[a];
    }
    for (int b = 0; b < ky; ++b) {
        auto& x = row();
        x[it + b] = 1;
        for (int a = 0; a < kx; ++a) x[a * ky + b] = 1;
        x[base + r++] = -1;
        p.b.back() = mu2[b];
        auto& y = row();
        y[it + b] = -1;
        for (int a = 0; a < kx; ++a) y[a * ky + b] = 1;
        y[base + r++] = 1;
        p.b.back() = mu2[b];
    }
    {
        // z - sum s - sum t - e = 0
        auto& x = row();
        x[iz] = 1;
        for (int a = 0; a < kx; ++a) x[is + a] = -1;
        for (int b = 0; b < ky; ++b) x[it + b] = -1;
        x[base + r++] = -1;
    }
    {
        // z - pi(off C) - e = 0
        auto& x = row();
        x[iz] = 1;
        for (int a = 0; a < kx; ++a)
            for (int b = 0; b < ky; ++b)
                if (!in_c[a][b]) x[a * ky + b] = -1;
        x[base + r++] = -1;
    }
    const auto v = minimise(p);
    if (!v) throw std::logic_error("lp oracle: GHP inner problem must be feasible and bounded");
    return *v;
}

}  // namespace lp
