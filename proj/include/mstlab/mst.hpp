#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "multigraph.hpp"
#include "rng.hpp"
#include "samplers.hpp"

namespace mstlab {

struct WeightedGraph {
    Multigraph graph;
    std::vector<double> w;  // one per edge id

    WeightedGraph() = default;
    WeightedGraph(Multigraph g, std::vector<double> weights) : graph(std::move(g)), w(std::move(weights)) {
        if (static_cast<int>(w.size()) != graph.m()) throw std::invalid_argument("WeightedGraph: weight count");
    }
    // weights taken from edge lengths
    static WeightedGraph from_lengths(Multigraph g) {
        std::vector<double> w;
        for (const auto& e : g.edges()) w.push_back(e.len);
        return WeightedGraph(std::move(g), std::move(w));
    }
    static WeightedGraph iid_uniform(Multigraph g, Rng& rng) {
        std::vector<double> w(g.m());
        for (auto& x : w) x = rng.uniform();
        return WeightedGraph(std::move(g), std::move(w));
    }

    // less(a,b): weight order, ties by edge id
    bool lighter(int a, int b) const { return w[a] != w[b] ? w[a] < w[b] : a < b; }

    std::vector<int> order() const {
        std::vector<int> ids(graph.m());
        std::iota(ids.begin(), ids.end(), 0);
        std::sort(ids.begin(), ids.end(), [this](int a, int b) { return lighter(a, b); });
        return ids;
    }
};

// Kruskal minimum spanning forest, edge ids in acceptance order
inline std::vector<int> spanning_forest(const WeightedGraph& g) {
    UnionFind uf(g.graph.n());
    std::vector<int> out;
    for (int id : g.order()) {
        const auto& e = g.graph.edge(id);
        if (uf.unite(e.u, e.v)) out.push_back(id);
    }
    return out;
}

// MST of the largest component, sorted edge ids
inline std::vector<int> mst(const WeightedGraph& g) {
    if (g.graph.n() == 0) return {};
    const auto comps = components(g.graph);
    std::vector<char> in(g.graph.n(), 0);
    for (int v : comps.front()) in[v] = 1;
    std::vector<int> out;
    for (int id : spanning_forest(g))
        if (in[g.graph.edge(id).u]) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

// tree edge ids must span a component of G; true iff every tree path is minimax
inline bool minimax_check(const std::vector<int>& tree, const WeightedGraph& g) {
    if (tree.empty()) return true;
    const auto label = component_labels(g.graph);
    const int c = label[g.graph.edge(tree.front()).u];
    std::vector<char> in_tree(g.graph.m(), 0);
    UnionFind span(g.graph.n());
    for (int id : tree) {
        const auto& e = g.graph.edge(id);
        if (label[e.u] != c) throw std::invalid_argument("minimax_check: tree crosses components");
        if (!span.unite(e.u, e.v)) throw std::invalid_argument("minimax_check: input has a cycle");
        in_tree[id] = 1;
    }
    int csize = 0;
    for (int l : label) csize += l == c;
    if (static_cast<int>(tree.size()) != csize - 1) throw std::invalid_argument("minimax_check: tree is not spanning");
    UnionFind ug(g.graph.n()), ut(g.graph.n());
    for (int id : g.order()) {
        const auto& e = g.graph.edge(id);
        if (label[e.u] != c) continue;
        ug.unite(e.u, e.v);
        if (in_tree[id]) ut.unite(e.u, e.v);
        if (ug.count() != ut.count()) return false;
    }
    return true;
}

// delete heaviest non-bridges until a tree remains
inline std::vector<int> reverse_delete(const WeightedGraph& g) {
    if (!is_connected(g.graph)) throw std::invalid_argument("reverse_delete: graph is not connected");
    const int n = g.graph.n();
    std::vector<char> alive(g.graph.m(), 1);
    const auto adj = g.graph.adjacency();
    auto order = g.order();
    std::reverse(order.begin(), order.end());
    std::vector<int> seen(n, -1);
    int stamp = 0;
    for (int id : order) {
        const auto& e = g.graph.edge(id);
        alive[id] = 0;
        ++stamp;
        std::vector<int> st{e.u};
        seen[e.u] = stamp;
        bool reach = e.u == e.v;
        while (!st.empty() && !reach) {
            const int v = st.back();
            st.pop_back();
            for (auto [w, eid] : adj[v]) {
                if (!alive[eid] || seen[w] == stamp) continue;
                if (w == e.v) {
                    reach = true;
                    break;
                }
                seen[w] = stamp;
                st.push_back(w);
            }
        }
        if (!reach) alive[id] = 1;
    }
    std::vector<int> out;
    for (int i = 0; i < g.graph.m(); ++i)
        if (alive[i]) out.push_back(i);
    return out;
}

// MST restricted to each component of the <= u subgraph equals that component's MST
inline bool percolation_restriction_check(const WeightedGraph& g, double u) {
    const auto t = mst(g);
    std::vector<int> low;
    for (int i = 0; i < g.graph.m(); ++i)
        if (g.w[i] <= u) low.push_back(i);
    const auto sub = g.graph.edge_subgraph(low);
    const auto label = component_labels(sub);
    std::vector<double> wl;
    for (int id : low) wl.push_back(g.w[id]);
    // Kruskal on the <= u subgraph is the union of the component MSTs
    const WeightedGraph wsub(sub, wl);
    std::vector<int> expect;
    for (int local : spanning_forest(wsub)) expect.push_back(low[local]);
    std::sort(expect.begin(), expect.end());
    std::vector<int> got;
    for (int id : t) {
        const auto& e = g.graph.edge(id);
        if (label[e.u] == label[e.v]) got.push_back(id);
    }
    std::sort(got.begin(), got.end());
    return got == expect;
}

// Prim on a dense implicit graph; weight(i,j) may be +inf for absent pairs
template <class WeightFn>
Multigraph dense_prim(int n, WeightFn&& weight) {
    Multigraph t(n);
    if (n <= 1) return t;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n, inf);
    std::vector<int> from(n, -1);
    std::vector<char> done(n, 0);
    int v = 0;
    done[0] = 1;
    for (int step = 1; step < n; ++step) {
        for (int w = 0; w < n; ++w) {
            if (done[w]) continue;
            const double x = weight(v, w);
            if (x < best[w]) {
                best[w] = x;
                from[w] = v;
            }
        }
        int pick = -1;
        for (int w = 0; w < n; ++w)
            if (!done[w] && (pick < 0 || best[w] < best[pick])) pick = w;
        if (from[pick] < 0) throw std::runtime_error("dense_prim: disconnected implicit graph");
        done[pick] = 1;
        t.add_edge(from[pick], pick, best[pick]);
        v = pick;
    }
    return t;
}

inline double pair_hash01(std::uint64_t key, int i, int j) {
    if (i > j) std::swap(i, j);
    return unit_from_bits(mix(mix(key, static_cast<std::uint64_t>(i)), static_cast<std::uint64_t>(j)));
}

struct ConditionalMst {
    Multigraph tree;               // spanning tree of [n], length = weight
    double threshold = 0.0;
    std::vector<int> core;         // vertices of the largest ER(n,lambda) component
    std::vector<double> mass;      // p_v = |T_v|/n, aligned with core
};

// M_infinity given ER(n,lambda): inside weights are the U values, cross-component
// weights are fresh uniforms on [thr,1], non-edges inside a component never matter
inline ConditionalMst mst_conditional_on_er(const ErProcess& proc, double lambda, Rng& rng) {
    const int n = proc.n();
    ConditionalMst out;
    out.threshold = ErProcess::threshold(n, lambda);
    const double thr = out.threshold;
    const auto er = proc.graph_at(thr);
    const auto label = component_labels(er);
    std::vector<std::unordered_map<int, double>> inside(n);
    for (const auto& e : er.edges()) {
        inside[e.u][e.v] = e.len;
        inside[e.v][e.u] = e.len;
    }
    const std::uint64_t key = rng.next();
    const double inf = std::numeric_limits<double>::infinity();
    out.tree = dense_prim(n, [&](int a, int b) {
        if (label[a] != label[b]) return thr + (1.0 - thr) * pair_hash01(key, a, b);
        auto it = inside[a].find(b);
        return it == inside[a].end() ? inf : it->second;
    });
    const auto comps = components(er);
    out.core = comps.empty() ? std::vector<int>{} : comps.front();
    std::vector<char> in_core(n, 0);
    for (int v : out.core) in_core[v] = 1;
    UnionFind uf(n);
    for (const auto& e : out.tree.edges())
        if (!(in_core[e.u] && in_core[e.v] && e.len <= thr)) uf.unite(e.u, e.v);
    for (int v : out.core) out.mass.push_back(static_cast<double>(uf.size_of(v)) / n);
    return out;
}

// MST of K_m with i.i.d. uniform weights, as a tree with length = weight
inline Multigraph mst_complete_graph(int m, Rng& rng) {
    if (m <= 1) return Multigraph(std::max(m, 0));
    const double cap = std::min(1.0, (std::log(static_cast<double>(m)) + 8.0) / m);
    const ErProcess proc(m, rng.fork(tag("er")), cap);
    Multigraph t(m);
    UnionFind uf(m);
    for (const auto& p : proc.pairs())
        if (uf.unite(p.i, p.j)) t.add_edge(p.i, p.j, p.u);
    if (uf.count() == 1) return t;
    std::unordered_map<std::uint64_t, double> stored;
    for (const auto& p : proc.pairs()) stored[static_cast<std::uint64_t>(p.i) * m + p.j] = p.u;
    const std::uint64_t key = rng.fork(tag("above-cap")).next();
    return dense_prim(m, [&](int a, int b) {
        if (a > b) std::swap(a, b);
        auto it = stored.find(static_cast<std::uint64_t>(a) * m + b);
        return it != stored.end() ? it->second : cap + (1.0 - cap) * pair_hash01(key, a, b);
    });
}

}  // namespace mstlab
