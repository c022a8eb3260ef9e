#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "multigraph.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace mstlab {

// ---------- configuration model ----------

inline long long degree_sum(const std::vector<int>& d) {
    long long ell = 0;
    for (int x : d) {
        if (x < 0) throw std::invalid_argument("negative degree");
        ell += x;
    }
    return ell;
}

inline Multigraph configuration_model(const std::vector<int>& d, Rng& rng) {
    const long long ell = degree_sum(d);
    if (ell % 2) throw std::invalid_argument("configuration_model: odd degree sum");
    std::vector<int> half;
    half.reserve(static_cast<std::size_t>(ell));
    for (int v = 0; v < static_cast<int>(d.size()); ++v)
        for (int j = 0; j < d[v]; ++j) half.push_back(v);
    rng.shuffle(half);
    Multigraph g(static_cast<int>(d.size()));
    for (std::size_t i = 0; i + 1 < half.size(); i += 2) g.add_edge(half[i], half[i + 1]);
    return g;
}

inline Multigraph regular_configuration_model(int n, int degree, Rng& rng) {
    return configuration_model(std::vector<int>(n, degree), rng);
}

// prod d_v! / ((l-1)!! prod_{i<j} x_ij! prod_i x_ii! 2^{x_ii})
inline Rational cm_pmf(const Multigraph& g, const std::vector<int>& d) {
    if (static_cast<int>(d.size()) != g.n()) throw std::invalid_argument("cm_pmf: vertex count mismatch");
    if (g.degrees() != d) throw std::invalid_argument("cm_pmf: degree mismatch");
    std::map<std::pair<int, int>, int> x;
    for (const auto& e : g.edges()) ++x[{std::min(e.u, e.v), std::max(e.u, e.v)}];
    BigInt num = 1, den = double_factorial_odd(static_cast<int>(degree_sum(d)));
    for (int dv : d) num *= factorial(dv);
    for (const auto& [p, c] : x) {
        den *= factorial(c);
        if (p.first == p.second) den *= BigInt(1) << c;
    }
    return Rational(num, den);
}

inline Multigraph uniform_simple_regular(int n, int degree, Rng& rng, long long max_attempts = 1000000) {
    if (n < 0 || degree < 0 || (static_cast<long long>(n) * degree) % 2)
        throw std::invalid_argument("uniform_simple_regular: n*degree must be even");
    if (degree > n - 1 && n > 0) throw std::invalid_argument("uniform_simple_regular: infeasible degree");
    for (long long a = 1; a <= max_attempts; ++a) {
        auto g = regular_configuration_model(n, degree, rng);
        if (g.is_simple()) return g;
    }
    throw std::runtime_error("uniform_simple_regular: rejection cap exceeded after " + std::to_string(max_attempts) +
                             " attempts");
}

// ---------- coupled Erdos-Renyi process ----------

// Pairs with U_ij <= u_cap, sorted by U; U is uniform on [0,1] marginally.
// Every graph at threshold <= u_cap is exact.
class ErProcess {
public:
    struct Pair {
        double u;
        int i;
        int j;
    };

    ErProcess(int n, Rng rng, double u_cap = 1.0) : n_(n), u_cap_(std::clamp(u_cap, 0.0, 1.0)) {
        if (n < 0) throw std::invalid_argument("ErProcess: negative n");
        const std::uint64_t total = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
        if (u_cap_ <= 0.0 || total == 0) return;
        std::uint64_t pos = rng.geometric(u_cap_);
        int row = 0;
        std::uint64_t row_start = 0;
        while (pos < total) {
            while (pos >= row_start + static_cast<std::uint64_t>(n - 1 - row)) {
                row_start += static_cast<std::uint64_t>(n - 1 - row);
                ++row;
            }
            const int col = row + 1 + static_cast<int>(pos - row_start);
            pairs_.push_back(Pair{u_cap_ * rng.uniform(), row, col});
            const std::uint64_t g = rng.geometric(u_cap_);
            if (g >= total - pos) break;
            pos += g + 1;
        }
        std::sort(pairs_.begin(), pairs_.end(), [](const Pair& a, const Pair& b) {
            if (a.u != b.u) return a.u < b.u;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
    }

    static double threshold(int n, double lambda) {
        return std::clamp(1.0 / n + lambda * std::pow(static_cast<double>(n), -4.0 / 3.0), 0.0, 1.0);
    }

    int n() const { return n_; }
    double u_cap() const { return u_cap_; }
    const std::vector<Pair>& pairs() const { return pairs_; }

    // number of stored pairs with U <= thr
    std::size_t count_below(double thr) const {
        return static_cast<std::size_t>(
            std::upper_bound(pairs_.begin(), pairs_.end(), thr, [](double t, const Pair& p) { return t < p.u; }) -
            pairs_.begin());
    }

    // edge length carries U
    Multigraph graph_at(double thr) const {
        if (thr > u_cap_ && u_cap_ < 1.0) throw std::out_of_range("ErProcess: threshold above stored cap");
        Multigraph g(n_);
        const auto k = count_below(thr);
        for (std::size_t i = 0; i < k; ++i) g.add_edge(pairs_[i].i, pairs_[i].j, pairs_[i].u);
        return g;
    }

private:
    int n_;
    double u_cap_;
    std::vector<Pair> pairs_;
};

inline Multigraph er_graph(const ErProcess& proc, double lambda) {
    return proc.graph_at(ErProcess::threshold(proc.n(), lambda));
}

// ---------- rooted trees ----------

struct RootedTree {
    std::vector<int> parent;  // -1 at the root
    int root = 0;
    std::vector<std::vector<int>> children;  // ascending label

    static RootedTree from_parents(std::vector<int> par) {
        RootedTree t;
        t.parent = std::move(par);
        t.children.assign(t.parent.size(), {});
        int roots = 0;
        for (int v = 0; v < t.size(); ++v) {
            if (t.parent[v] < 0) {
                t.root = v;
                ++roots;
            } else {
                if (t.parent[v] >= t.size()) throw std::out_of_range("parent out of range");
                t.children[t.parent[v]].push_back(v);
            }
        }
        if (t.size() > 0 && roots != 1) throw std::invalid_argument("RootedTree: need exactly one root");
        if (t.preorder().size() != t.parent.size()) throw std::invalid_argument("RootedTree: not a tree");
        return t;
    }

    int size() const { return static_cast<int>(parent.size()); }

    // depth-first order, children visited in ascending label
    std::vector<int> preorder() const {
        std::vector<int> out;
        if (parent.empty()) return out;
        out.reserve(parent.size());
        std::vector<int> st{root};
        while (!st.empty()) {
            const int v = st.back();
            st.pop_back();
            out.push_back(v);
            for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) st.push_back(*it);
            if (out.size() > parent.size()) break;
        }
        return out;
    }

    // ht(v,t): number of edges from v to the root
    std::vector<int> heights() const {
        std::vector<int> h(parent.size(), 0);
        for (int v : preorder())
            if (parent[v] >= 0) h[v] = h[parent[v]] + 1;
        return h;
    }

    Multigraph to_graph() const {
        Multigraph g(size());
        for (int v = 0; v < size(); ++v)
            if (parent[v] >= 0) g.add_edge(parent[v], v);
        return g;
    }
};

// uniform over the m^{m-1} rooted labelled trees: Pruefer code plus uniform root
inline RootedTree uniform_labeled_tree(int m, Rng& rng) {
    if (m < 1) throw std::invalid_argument("uniform_labeled_tree: m >= 1");
    std::vector<std::vector<int>> adj(m);
    if (m == 2) {
        adj[0].push_back(1);
        adj[1].push_back(0);
    } else if (m > 2) {
        std::vector<int> code(m - 2), deg(m, 1);
        for (auto& c : code) {
            c = static_cast<int>(rng.below(m));
            ++deg[c];
        }
        int ptr = 0;
        while (deg[ptr] != 1) ++ptr;
        int leaf = ptr;
        for (int c : code) {
            adj[leaf].push_back(c);
            adj[c].push_back(leaf);
            if (--deg[c] == 1 && c < ptr) {
                leaf = c;
            } else {
                ++ptr;
                while (deg[ptr] != 1) ++ptr;
                leaf = ptr;
            }
        }
        // last edge joins the remaining leaf with m-1
        adj[leaf].push_back(m - 1);
        adj[m - 1].push_back(leaf);
    }
    const int root = static_cast<int>(rng.below(m));
    std::vector<int> par(m, -2);
    par[root] = -1;
    std::vector<int> st{root};
    while (!st.empty()) {
        const int v = st.back();
        st.pop_back();
        for (int w : adj[v])
            if (par[w] == -2) {
                par[w] = v;
                st.push_back(w);
            }
    }
    return RootedTree::from_parents(std::move(par));
}

// ---------- R-sets and A_s ----------

struct RSets {
    std::vector<std::vector<int>> per_ancestor;  // k-th entry: R(parent^(k)(v), v, t), k = 1..ht(v)
    std::vector<int> all;                        // R(v,t)
};

inline RSets r_sets(const RootedTree& t, int v) {
    if (v < 0 || v >= t.size()) throw std::out_of_range("r_sets: vertex out of range");
    RSets r;
    int below = v;
    int anc = t.parent[v];
    while (anc >= 0) {
        std::vector<int> level;
        for (int u : t.children[anc])
            if (u > below) level.push_back(u);
        r.all.insert(r.all.end(), level.begin(), level.end());
        r.per_ancestor.push_back(std::move(level));
        below = anc;
        anc = t.parent[anc];
    }
    std::sort(r.all.begin(), r.all.end());
    return r;
}

// |R(v,t)| for every v in O(m)
inline std::vector<long long> r_set_sizes(const RootedTree& t) {
    std::vector<long long> sz(t.size(), 0);
    std::vector<int> rank_from_top(t.size(), 0);  // #siblings with larger label
    for (int p = 0; p < t.size(); ++p) {
        const int c = static_cast<int>(t.children[p].size());
        for (int i = 0; i < c; ++i) rank_from_top[t.children[p][i]] = c - 1 - i;
    }
    for (int v : t.preorder())
        if (t.parent[v] >= 0) sz[v] = sz[t.parent[v]] + rank_from_top[v];
    return sz;
}

// g(t) = |A_1(t)|
inline long long a1_count(const RootedTree& t) {
    long long s = 0;
    for (long long x : r_set_sizes(t)) s += x;
    return s;
}

// |A_s(t)| = C(|A_1(t)|, s): an element is an s-subset of the (v,u) pairs
inline BigInt a_s_count(const RootedTree& t, int s) {
    if (s < 1) throw std::invalid_argument("a_s_count: s >= 1");
    return binomial_coefficient(BigInt(a1_count(t)), s);
}

// uniform element of A_s(t), returned as (v_i, u_i) in the canonical order
inline std::vector<std::pair<int, int>> sample_a_s(const RootedTree& t, int s, Rng& rng) {
    const auto sz = r_set_sizes(t);
    long long a1 = 0;
    for (long long x : sz) a1 += x;
    if (s < 1 || s > a1) throw std::invalid_argument("sample_a_s: A_s(t) is empty");
    // Floyd's algorithm for an s-subset of [0, a1)
    std::unordered_set<long long> chosen;
    for (long long j = a1 - s; j < a1; ++j) {
        const auto x = static_cast<long long>(rng.below(static_cast<std::uint64_t>(j + 1)));
        if (!chosen.insert(x).second) chosen.insert(j);
    }
    std::vector<long long> idx(chosen.begin(), chosen.end());
    std::sort(idx.begin(), idx.end());
    std::vector<std::pair<int, int>> out;
    long long base = 0;
    std::size_t k = 0;
    for (int v = 0; v < t.size() && k < idx.size(); ++v) {
        if (idx[k] >= base + sz[v]) {
            base += sz[v];
            continue;
        }
        const auto r = r_sets(t, v).all;
        while (k < idx.size() && idx[k] < base + sz[v]) {
            out.push_back({v, r[static_cast<std::size_t>(idx[k] - base)]});
            ++k;
        }
        base += sz[v];
    }
    return out;
}

struct TiltStats {
    long long proposals = 0;
    int restarts = 0;  // envelope overshoots
};

inline long long tilt_envelope(int m, double x) {
    const long long nontree = static_cast<long long>(m) * (m - 1) / 2 - (m - 1);
    const auto grown = static_cast<long long>(std::ceil(x * std::pow(static_cast<double>(m), 1.5)));
    return std::max<long long>(0, std::min(nontree, grown));
}

// P(t) proportional to P(T_m = t)|A_s(t)| by rejection from uniform rooted trees,
// accepting with C(g(t),s)/C(K,s); an observed g(t) > K doubles the envelope and restarts
inline RootedTree sample_tilted_tree_as(int m, int s, Rng& rng, TiltStats* stats = nullptr,
                                        long long max_proposals = 100000000) {
    if (s < 1) throw std::invalid_argument("tilted tree: s >= 1");
    double x = 1.5;
    long long cap = tilt_envelope(m, x);
    if (cap < s) throw std::invalid_argument("tilted tree: no connected graph with this surplus");
    long long proposals = 0;
    for (;;) {
        if (++proposals > max_proposals) throw std::runtime_error("tilted tree: rejection cap exceeded");
        auto t = uniform_labeled_tree(m, rng);
        const long long g = a1_count(t);
        if (g > cap) {
            x *= 2.0;
            cap = tilt_envelope(m, x);
            if (stats) ++stats->restarts;
            continue;
        }
        double acc = 1.0;
        for (int i = 0; i < s; ++i) acc *= static_cast<double>(g - i) / static_cast<double>(cap - i);
        if (g >= s && rng.uniform() < acc) {
            if (stats) stats->proposals += proposals;
            return t;
        }
    }
}

// P(t) proportional to P(T_m = t)(1-p)^{-g(t)}
inline RootedTree sample_tilted_tree_gmp(int m, double p, Rng& rng, TiltStats* stats = nullptr,
                                         long long max_proposals = 10000000) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("tilted tree: 0 < p < 1");
    double x = 1.5;
    long long cap = tilt_envelope(m, x);
    const double lq = std::log1p(-p);
    long long proposals = 0;
    for (;;) {
        if (++proposals > max_proposals)
            throw std::runtime_error("tilted tree: envelope failure, rejection cap exceeded");
        auto t = uniform_labeled_tree(m, rng);
        const long long g = a1_count(t);
        if (g > cap) {
            x *= 2.0;
            cap = tilt_envelope(m, x);
            if (stats) ++stats->restarts;
            continue;
        }
        if (rng.uniform() < std::exp(lq * static_cast<double>(cap - g))) {
            if (stats) stats->proposals += proposals;
            return t;
        }
    }
}

// uniform connected simple graph on [m] with surplus s
inline Multigraph sample_H_ms(int m, int s, Rng& rng, TiltStats* stats = nullptr) {
    if (m < 1 || s < 0) throw std::invalid_argument("sample_H_ms: bad parameters");
    if (s == 0) return uniform_labeled_tree(m, rng).to_graph();
    const auto t = sample_tilted_tree_as(m, s, rng, stats);
    auto g = t.to_graph();
    for (auto [v, u] : sample_a_s(t, s, rng)) g.add_edge(v, u);
    return g;
}

// Erdos-Renyi G(m,p) conditioned on being connected
inline Multigraph sample_Gmp(int m, double p, Rng& rng, TiltStats* stats = nullptr) {
    if (m < 1) throw std::invalid_argument("sample_Gmp: m >= 1");
    const auto t = sample_tilted_tree_gmp(m, p, rng, stats);
    auto g = t.to_graph();
    for (int v = 0; v < m; ++v)
        for (int u : r_sets(t, v).all)
            if (rng.bernoulli(p)) g.add_edge(v, u);
    return g;
}

// number of 2-core edges, i.e. kernel length with unit edge lengths
inline double core_length(const Multigraph& g) {
    const auto core = two_core(g);
    double L = 0.0;
    for (const auto& e : g.edges())
        if (core[e.u] && core[e.v]) L += e.len;
    return L;
}

// H_{m,s} size-biased by its kernel length; L <= m-1+s is an exact envelope
inline Multigraph length_biased_H_ms(int m, int s, Rng& rng, long long* attempts = nullptr,
                                     long long max_attempts = 10000000) {
    if (s < 2) throw std::invalid_argument("length_biased_H_ms: s >= 2");
    const double cap = static_cast<double>(m - 1 + s);
    for (long long a = 1; a <= max_attempts; ++a) {
        auto g = sample_H_ms(m, s, rng);
        if (rng.uniform() * cap < core_length(g)) {
            if (attempts) *attempts = a;
            return g;
        }
    }
    throw std::runtime_error("length_biased_H_ms: rejection cap exceeded");
}

// ---------- plane trees ----------

// k[i] = number of vertices with i children; labels are preorder positions, 0 = root
inline RootedTree uniform_plane_tree_child_sequence(const std::vector<int>& k, Rng& rng) {
    long long m = 0, edges = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0) throw std::invalid_argument("plane tree: negative count");
        m += k[i];
        edges += static_cast<long long>(i) * k[i];
    }
    if (m < 1 || edges != m - 1) throw std::invalid_argument("plane tree: infeasible child sequence");
    std::vector<int> word;
    word.reserve(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < k.size(); ++i)
        for (int j = 0; j < k[i]; ++j) word.push_back(static_cast<int>(i));
    rng.shuffle(word);
    // cycle lemma: rotate to start just after the first minimum of the walk sum(c-1)
    long long walk = 0, best = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        walk += word[i] - 1;
        if (walk < best) {
            best = walk;
            at = i + 1;
        }
    }
    std::rotate(word.begin(), word.begin() + static_cast<long>(at % word.size()), word.end());
    std::vector<int> par(static_cast<std::size_t>(m), -1);
    std::vector<std::pair<int, int>> open;  // (vertex, children still to attach)
    for (int v = 0; v < static_cast<int>(m); ++v) {
        if (!open.empty()) {
            par[v] = open.back().first;
            if (--open.back().second == 0) open.pop_back();
        }
        if (word[v] > 0) open.push_back({v, word[v]});
    }
    return RootedTree::from_parents(std::move(par));
}

}  // namespace mstlab
