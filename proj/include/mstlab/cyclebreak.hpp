#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mst.hpp"
#include "multigraph.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace mstlab {

inline Multigraph shape(const Multigraph& h) {
    Multigraph g(h.n());
    for (const auto& e : h.edges()) g.add_edge(e.u, e.v, e.len);
    return g;
}

// drop every red-marked edge, keep all vertices
inline Multigraph rem(const Multigraph& h, std::vector<int>* kept_ids = nullptr) {
    Multigraph g(h.n());
    if (kept_ids) kept_ids->clear();
    for (int i = 0; i < h.m(); ++i) {
        const auto& e = h.edge(i);
        if (e.red) continue;
        g.add_edge(e.u, e.v, e.len);
        if (kept_ids) kept_ids->push_back(i);
    }
    return g;
}

struct RedPoint {
    int edge;
    double offset;  // in (0, len)
};

class CbdState {
public:
    explicit CbdState(Multigraph h) : graph_(std::move(h)) {
        present_.assign(graph_.m(), 1);
        seen_.assign(graph_.m(), 0);
        red_.assign(graph_.m(), {});
        cum_.resize(graph_.m());
        double s = 0.0;
        for (int i = 0; i < graph_.m(); ++i) {
            s += graph_.edge(i).len;
            cum_[i] = s;
        }
        adj_ = graph_.adjacency();
    }

    const Multigraph& original() const { return graph_; }
    bool present(int id) const { return present_[id] != 0; }
    const std::vector<int>& removed() const { return removed_; }
    const std::vector<int>& sampled() const { return sampled_; }
    const std::vector<double>& red_points(int id) const { return red_[id]; }
    long long steps() const { return k_; }
    double total_length() const { return cum_.empty() ? 0.0 : cum_.back(); }

    // current multigraph on the original vertex set, red flags set, ids compacted
    Multigraph current(std::vector<int>* ids = nullptr) const {
        Multigraph g(graph_.n());
        if (ids) ids->clear();
        for (int i = 0; i < graph_.m(); ++i) {
            if (!present_[i]) continue;
            const auto& e = graph_.edge(i);
            const int j = g.add_edge(e.u, e.v, e.len);
            if (!red_[i].empty()) g.set_red(j);
            if (ids) ids->push_back(i);
        }
        return g;
    }

    // one step of the discrete cycle-breaking process
    void step(Rng& rng) {
        if (!(total_length() > 0.0)) throw std::invalid_argument("cbd_step: zero total length");
        const double x = rng.uniform() * total_length();
        int id = static_cast<int>(std::upper_bound(cum_.begin(), cum_.end(), x) - cum_.begin());
        id = std::min(id, graph_.m() - 1);
        while (graph_.edge(id).len <= 0.0) ++id;
        ++k_;
        if (!seen_[id]) {
            seen_[id] = 1;
            sampled_.push_back(id);
        }
        if (!present_[id]) return;
        if (connected_without(id)) {
            present_[id] = 0;
            removed_.push_back(id);
            red_[id].clear();
        } else {
            red_[id].push_back(rng.uniform_open() * graph_.edge(id).len);
        }
    }

    // every positive-length edge sampled and the present edges form a forest
    bool finished() const {
        for (int i = 0; i < graph_.m(); ++i)
            if (!seen_[i] && graph_.edge(i).len > 0.0) return false;
        UnionFind uf(graph_.n());
        for (int i = 0; i < graph_.m(); ++i)
            if (present_[i] && !uf.unite(graph_.edge(i).u, graph_.edge(i).v)) return false;
        return true;
    }

private:
    bool connected_without(int id) const {
        const auto& e = graph_.edge(id);
        if (e.u == e.v) return true;
        std::vector<char> vis(graph_.n(), 0);
        std::vector<int> st{e.u};
        vis[e.u] = 1;
        while (!st.empty()) {
            const int v = st.back();
            st.pop_back();
            for (auto [w, eid] : adj_[v]) {
                if (eid == id || !present_[eid] || vis[w]) continue;
                if (w == e.v) return true;
                vis[w] = 1;
                st.push_back(w);
            }
        }
        return false;
    }

    Multigraph graph_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::vector<char> present_, seen_;
    std::vector<double> cum_;
    std::vector<int> removed_, sampled_;
    std::vector<std::vector<double>> red_;
    long long k_ = 0;
};

inline void cbd_step(CbdState& state, Rng& rng) { state.step(rng); }

struct CbdResult {
    std::vector<int> order;    // distinct sampled edges in first-hit order
    std::vector<int> removed;  // removal order
    std::vector<char> kept;    // per edge id
    std::vector<RedPoint> red;
    std::vector<int> tree_vertices;  // largest tree, sorted
    std::vector<int> tree_edges;     // original edge ids, sorted
    Multigraph tree;                 // largest tree on the original vertex set, no marks
};

// largest tree of the kept forest; ties by smallest vertex
inline void fill_largest_tree(const Multigraph& h, CbdResult& r) {
    std::vector<int> ids;
    for (int i = 0; i < h.m(); ++i)
        if (r.kept[i]) ids.push_back(i);
    const auto forest = h.edge_subgraph(ids);
    const auto comps = components(forest);
    r.tree = Multigraph(h.n());
    r.tree_vertices.clear();
    r.tree_edges.clear();
    if (comps.empty()) return;
    r.tree_vertices = comps.front();
    std::vector<char> in(h.n(), 0);
    for (int v : r.tree_vertices) in[v] = 1;
    for (int id : ids)
        if (in[h.edge(id).u]) {
            r.tree_edges.push_back(id);
            r.tree.add_edge(h.edge(id).u, h.edge(id).v, h.edge(id).len);
        }
}

// removal decisions from a first-hit order of all edges: the k-th edge is
// removed iff its endpoints are joined by edges first hit after it
inline CbdResult cbd_from_order(const Multigraph& h, const std::vector<int>& order) {
    CbdResult r;
    r.order = order;
    r.kept.assign(h.m(), 1);
    std::vector<char> listed(h.m(), 0);
    for (int id : order) listed[id] = 1;
    UnionFind uf(h.n());
    for (int i = 0; i < h.m(); ++i)
        if (!listed[i]) uf.unite(h.edge(i).u, h.edge(i).v);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& e = h.edge(*it);
        if (uf.same(e.u, e.v)) r.kept[*it] = 0;
        uf.unite(e.u, e.v);
    }
    for (int id : order)
        if (!r.kept[id]) r.removed.push_back(id);
    fill_largest_tree(h, r);
    return r;
}

// exponential first-hit clocks, rate len(e); zero-length edges are never hit
inline std::vector<double> first_hit_times(const Multigraph& h, Rng& rng) {
    std::vector<double> t(h.m());
    for (int i = 0; i < h.m(); ++i) {
        const double len = h.edge(i).len;
        t[i] = len > 0.0 ? rng.exponential(len) : std::numeric_limits<double>::infinity();
    }
    return t;
}

inline std::vector<int> order_by_time(const std::vector<double>& t) {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(t.size()); ++i)
        if (std::isfinite(t[i])) ids.push_back(i);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) { return t[a] != t[b] ? t[a] < t[b] : a < b; });
    return ids;
}

// CBD run to its terminal forest; a kept edge carries the red point of its first hit
inline CbdResult cbd_infty(const Multigraph& h, Rng& rng) {
    if (h.m() > 0 && !(total_length(h) > 0.0)) throw std::invalid_argument("cbd_infty: zero total length");
    const auto t = first_hit_times(h, rng);
    auto r = cbd_from_order(h, order_by_time(t));
    for (int id : r.order)
        if (r.kept[id]) r.red.push_back(RedPoint{id, rng.uniform_open() * h.edge(id).len});
    return r;
}

// literal step-by-step process until the stopping rule holds
inline CbdResult cbd_run(const Multigraph& h, Rng& rng, long long max_steps = 100000000) {
    CbdState st(h);
    CbdResult r;
    if (h.m() > 0) {
        while (!st.finished()) {
            if (st.steps() >= max_steps) throw std::runtime_error("cbd_run: step cap exceeded");
            st.step(rng);
        }
    }
    r.order = st.sampled();
    r.removed = st.removed();
    r.kept.assign(h.m(), 0);
    for (int i = 0; i < h.m(); ++i) {
        r.kept[i] = st.present(i);
        if (st.present(i))
            for (double x : st.red_points(i)) r.red.push_back(RedPoint{i, x});
    }
    fill_largest_tree(h, r);
    return r;
}

// continuum cycle-breaking on a graph with lengths; cut points become new leaves
inline Multigraph cb_infty(const Multigraph& h, Rng& rng) {
    if (!is_connected(h)) throw std::invalid_argument("cb_infty: graph is not connected");
    std::vector<Edge> edges = h.edges();
    int n = h.n();
    const long long sp = surplus(h);
    for (long long step = 0; step < sp; ++step) {
        const Multigraph cur(n, edges);
        const auto cand = conne_all(cur);
        double tot = 0.0;
        for (int id : cand) tot += edges[id].len;
        int pick = cand.back();
        if (tot > 0.0) {
            double x = rng.uniform() * tot;
            for (int id : cand) {
                if (edges[id].len <= 0.0) continue;
                pick = id;
                if (x < edges[id].len) break;
                x -= edges[id].len;
            }
        } else {
            pick = cand[rng.below(cand.size())];
        }
        const Edge e = edges[pick];
        const double pos = rng.uniform() * e.len;
        const int a = n++, b = n++;
        edges[pick] = Edge{e.u, a, pos, false};
        edges.push_back(Edge{e.v, b, e.len - pos, false});
    }
    return Multigraph(n, std::move(edges));
}

struct CoupledCb {
    CbdResult cbd;
    Multigraph cb_tree;     // original vertices keep their ids; stub leaves follow
    double hausdorff = 0.0; // between CBD_infinity and the CB tree
};

// CB cut points placed uniformly on the edges CBD removes
inline CoupledCb coupled_cb_cbd(const Multigraph& h, Rng& rng) {
    if (!is_connected(h)) throw std::invalid_argument("coupled_cb_cbd: graph is not connected");
    CoupledCb out;
    out.cbd = cbd_infty(h, rng);
    std::vector<Edge> edges;
    int n = h.n();
    for (int i = 0; i < h.m(); ++i) {
        const auto& e = h.edge(i);
        if (out.cbd.kept[i]) {
            edges.push_back(Edge{e.u, e.v, e.len, false});
            continue;
        }
        const double pos = rng.uniform() * e.len;
        edges.push_back(Edge{e.u, n++, pos, false});
        edges.push_back(Edge{e.v, n++, e.len - pos, false});
    }
    out.cb_tree = Multigraph(n, std::move(edges));
    // multi-source distances from the original vertices
    Multigraph aug(n + 1, out.cb_tree.edges());
    for (int v = 0; v < h.n(); ++v) aug.add_edge(n, v, 0.0);
    const auto d = distances(aug, n);
    for (int v = h.n(); v < n; ++v) out.hausdorff = std::max(out.hausdorff, d[v]);
    return out;
}

// exact MST law of a connected graph under exchangeable distinct weights on conne
inline ExactLaw mst_law_exchangeable(const Multigraph& h, int cap = 9) {
    const auto ce = conne(h);
    if (static_cast<int>(ce.size()) > cap) throw std::length_error("mst law: too many non-bridge edges");
    std::vector<int> perm(ce.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::map<std::string, long long> counts;
    long long total = 0;
    std::vector<char> is_ce(h.m(), 0);
    for (int id : ce) is_ce[id] = 1;
    do {
        UnionFind uf(h.n());
        std::vector<int> tree;
        for (int i = 0; i < h.m(); ++i)
            if (!is_ce[i] && uf.unite(h.edge(i).u, h.edge(i).v)) tree.push_back(i);
        for (int p : perm) {
            const int id = ce[p];
            if (uf.unite(h.edge(id).u, h.edge(id).v)) tree.push_back(id);
        }
        ++counts[edge_set_key(tree)];
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    ExactLaw law;
    for (const auto& [k, c] : counts) law[k] = Rational(c, total);
    return law;
}

enum class LengthModel { Unit, Exponential };

// TV between the empirical law of Shape[CBD_infinity(H)] and the exact MST law
inline double law_equivalence_test(const Multigraph& h, long long replicas, Rng& rng,
                                   LengthModel lengths = LengthModel::Unit) {
    const auto exact = mst_law_exchangeable(h);
    EmpiricalLaw emp;
    for (long long r = 0; r < replicas; ++r) {
        Multigraph g = h;
        if (lengths == LengthModel::Exponential)
            for (int i = 0; i < g.m(); ++i) g.set_length(i, rng.exponential());
        else
            for (int i = 0; i < g.m(); ++i) g.set_length(i, 1.0);
        emp.add(edge_set_key(cbd_infty(g, rng).tree_edges));
    }
    return tv_distance(emp, exact);
}

}  // namespace mstlab
