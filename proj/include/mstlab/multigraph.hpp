#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mstlab {

struct Edge {
    int u = 0;
    int v = 0;
    double len = 1.0;
    bool red = false;
};

// vertices 0..n-1, edge id = position in the edge list
class Multigraph {
public:
    Multigraph() = default;
    explicit Multigraph(int n) : n_(n) {
        if (n < 0) throw std::invalid_argument("negative vertex count");
    }
    Multigraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n < 0) throw std::invalid_argument("negative vertex count");
        for (const auto& e : edges_) check(e);
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_.at(id); }

    int add_edge(int u, int v, double len = 1.0) {
        Edge e{u, v, len, false};
        check(e);
        edges_.push_back(e);
        return m() - 1;
    }

    void set_red(int id, bool red = true) { edges_.at(id).red = red; }
    void set_length(int id, double len) {
        if (!(len >= 0.0) || !std::isfinite(len)) throw std::invalid_argument("bad edge length");
        edges_.at(id).len = len;
    }

    // loops count twice
    std::vector<int> degrees() const {
        std::vector<int> d(n_, 0);
        for (const auto& e : edges_) {
            ++d[e.u];
            ++d[e.v];
        }
        return d;
    }

    // entry (neighbour, edge id); a loop is listed twice at its vertex
    std::vector<std::vector<std::pair<int, int>>> adjacency() const {
        std::vector<std::vector<std::pair<int, int>>> adj(n_);
        for (int i = 0; i < m(); ++i) {
            adj[edges_[i].u].push_back({edges_[i].v, i});
            adj[edges_[i].v].push_back({edges_[i].u, i});
        }
        return adj;
    }

    bool is_simple() const {
        std::vector<std::pair<int, int>> p;
        p.reserve(edges_.size());
        for (const auto& e : edges_) {
            if (e.u == e.v) return false;
            p.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
        }
        std::sort(p.begin(), p.end());
        return std::adjacent_find(p.begin(), p.end()) == p.end();
    }

    // copy with every length set to 1 and marks dropped
    Multigraph unit_lengths() const {
        Multigraph g(n_);
        for (const auto& e : edges_) g.add_edge(e.u, e.v, 1.0);
        return g;
    }

    // keep the listed edges (ids in the given order), all vertices retained
    Multigraph edge_subgraph(const std::vector<int>& ids) const {
        Multigraph g(n_);
        for (int id : ids) {
            g.edges_.push_back(edges_.at(id));
        }
        return g;
    }

    // sub-multigraph induced on verts (relabelled by position in verts)
    Multigraph induced(const std::vector<int>& verts, std::vector<int>* edge_ids = nullptr) const {
        std::vector<int> local(n_, -1);
        for (int i = 0; i < static_cast<int>(verts.size()); ++i) local[verts[i]] = i;
        Multigraph g(static_cast<int>(verts.size()));
        if (edge_ids) edge_ids->clear();
        for (int i = 0; i < m(); ++i) {
            const auto& e = edges_[i];
            if (local[e.u] >= 0 && local[e.v] >= 0) {
                g.edges_.push_back(Edge{local[e.u], local[e.v], e.len, e.red});
                if (edge_ids) edge_ids->push_back(i);
            }
        }
        return g;
    }

private:
    void check(const Edge& e) const {
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) throw std::out_of_range("edge endpoint out of range");
        if (!(e.len >= 0.0) || !std::isfinite(e.len)) throw std::invalid_argument("bad edge length");
    }

    int n_ = 0;
    std::vector<Edge> edges_;
};

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), size_(n, 1), count_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --count_;
        return true;
    }
    bool same(int a, int b) { return find(a) == find(b); }
    int size_of(int x) { return size_[find(x)]; }
    int count() const { return count_; }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
    int count_;
};

// component label per vertex; labels follow order of smallest vertex
inline std::vector<int> component_labels(const Multigraph& g) {
    UnionFind uf(g.n());
    for (const auto& e : g.edges()) uf.unite(e.u, e.v);
    std::vector<int> root_label(g.n(), -1), label(g.n());
    int next = 0;
    for (int v = 0; v < g.n(); ++v) {
        const int r = uf.find(v);
        if (root_label[r] < 0) root_label[r] = next++;
        label[v] = root_label[r];
    }
    return label;
}

// vertex sets (sorted), largest first, ties by smallest vertex
inline std::vector<std::vector<int>> components(const Multigraph& g) {
    const auto label = component_labels(g);
    int k = 0;
    for (int l : label) k = std::max(k, l + 1);
    std::vector<std::vector<int>> comps(k);
    for (int v = 0; v < g.n(); ++v) comps[label[v]].push_back(v);
    std::stable_sort(comps.begin(), comps.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return comps;
}

inline bool is_connected(const Multigraph& g) {
    if (g.n() <= 1) return true;
    UnionFind uf(g.n());
    for (const auto& e : g.edges()) uf.unite(e.u, e.v);
    return uf.count() == 1;
}

// |E|-|V|+1 of the sub-multigraph induced on a connected vertex set
inline long long surplus(const Multigraph& g, const std::vector<int>& component) {
    std::vector<char> in(g.n(), 0);
    for (int v : component) in[v] = 1;
    long long e = 0;
    UnionFind uf(g.n());
    for (const auto& ed : g.edges()) {
        if (in[ed.u] && in[ed.v]) {
            ++e;
            uf.unite(ed.u, ed.v);
        }
    }
    if (!component.empty()) {
        const int r = uf.find(component[0]);
        for (int v : component)
            if (uf.find(v) != r) throw std::invalid_argument("surplus: vertex set is not connected");
    }
    return e - static_cast<long long>(component.size()) + 1;
}

inline long long surplus(const Multigraph& g) {
    if (!is_connected(g)) throw std::invalid_argument("surplus: graph is not connected");
    return static_cast<long long>(g.m()) - g.n() + 1;
}

// per-edge bridge flags, any graph (iterative lowlink, parent tracked by edge id)
inline std::vector<char> bridge_flags(const Multigraph& g) {
    const int n = g.n();
    const auto adj = g.adjacency();
    std::vector<char> bridge(g.m(), 0);
    std::vector<int> tin(n, -1), low(n, 0), parent_edge(n, -1);
    std::vector<std::size_t> it(n, 0);
    int timer = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (tin[s] >= 0) continue;
        stack.push_back(s);
        tin[s] = low[s] = timer++;
        while (!stack.empty()) {
            const int v = stack.back();
            if (it[v] < adj[v].size()) {
                const auto [w, id] = adj[v][it[v]++];
                if (id == parent_edge[v]) continue;
                if (tin[w] < 0) {
                    parent_edge[w] = id;
                    tin[w] = low[w] = timer++;
                    stack.push_back(w);
                } else {
                    low[v] = std::min(low[v], tin[w]);
                }
            } else {
                stack.pop_back();
                if (parent_edge[v] >= 0) {
                    const auto& e = g.edge(parent_edge[v]);
                    const int p = e.u == v ? e.v : e.u;
                    low[p] = std::min(low[p], low[v]);
                    if (low[v] > tin[p]) bridge[parent_edge[v]] = 1;
                }
            }
        }
    }
    return bridge;
}

// non-bridge edge ids within each component; loops are never bridges
inline std::vector<int> conne_all(const Multigraph& g) {
    const auto b = bridge_flags(g);
    std::vector<int> out;
    for (int i = 0; i < g.m(); ++i)
        if (!b[i]) out.push_back(i);
    return out;
}

inline std::vector<int> conne(const Multigraph& g) {
    if (!is_connected(g)) throw std::invalid_argument("conne: graph is not connected");
    return conne_all(g);
}

struct Kernel {
    enum class Kind { Empty, Cycle, Graph };
    Kind kind = Kind::Empty;
    Multigraph base;                     // min degree >= 3 when kind == Graph
    std::vector<int> vertices;           // original id of each kernel vertex
    std::vector<std::vector<int>> paths; // original edge ids contracted into each kernel edge
    double L = 0.0;

    bool is_three_regular() const {
        if (kind != Kind::Graph) return false;
        for (int d : base.degrees())
            if (d != 3) return false;
        return true;
    }
};

// 2-core vertex flags (peel degree-1 and isolated vertices)
inline std::vector<char> two_core(const Multigraph& g) {
    auto deg = g.degrees();
    const auto adj = g.adjacency();
    std::vector<char> alive(g.n(), 1);
    std::vector<int> q;
    for (int v = 0; v < g.n(); ++v)
        if (deg[v] <= 1) q.push_back(v);
    while (!q.empty()) {
        const int v = q.back();
        q.pop_back();
        if (!alive[v]) continue;
        alive[v] = 0;
        for (auto [w, id] : adj[v]) {
            if (w == v || !alive[w]) continue;
            if (--deg[w] <= 1) q.push_back(w);
        }
    }
    return alive;
}

inline Kernel kernel(const Multigraph& g) {
    if (!is_connected(g)) throw std::invalid_argument("kernel: graph is not connected");
    Kernel k;
    const auto core = two_core(g);
    std::vector<int> core_edges;
    for (int i = 0; i < g.m(); ++i)
        if (core[g.edge(i).u] && core[g.edge(i).v]) core_edges.push_back(i);
    if (core_edges.empty()) return k;

    std::vector<std::vector<std::pair<int, int>>> adj(g.n());
    std::vector<int> deg(g.n(), 0);
    for (int id : core_edges) {
        const auto& e = g.edge(id);
        adj[e.u].push_back({e.v, id});
        adj[e.v].push_back({e.u, id});
        ++deg[e.u];
        ++deg[e.v];
    }
    std::vector<int> kid(g.n(), -1);
    for (int v = 0; v < g.n(); ++v)
        if (core[v] && deg[v] >= 3) {
            kid[v] = static_cast<int>(k.vertices.size());
            k.vertices.push_back(v);
        }
    double total = 0.0;
    for (int id : core_edges) total += g.edge(id).len;
    k.L = total;
    if (k.vertices.empty()) {
        k.kind = Kernel::Kind::Cycle;
        k.paths.push_back(core_edges);
        return k;
    }
    k.kind = Kernel::Kind::Graph;
    k.base = Multigraph(static_cast<int>(k.vertices.size()));
    std::vector<char> used(g.m(), 0);
    for (int start : k.vertices) {
        for (auto [w0, id0] : adj[start]) {
            if (used[id0]) continue;
            used[id0] = 1;
            std::vector<int> path{id0};
            double len = g.edge(id0).len;
            int prev_edge = id0, cur = w0;
            while (kid[cur] < 0) {
                int next_edge = -1, next_v = -1;
                for (auto [w, id] : adj[cur])
                    if (id != prev_edge) {
                        next_edge = id;
                        next_v = w;
                        break;
                    }
                used[next_edge] = 1;
                path.push_back(next_edge);
                len += g.edge(next_edge).len;
                prev_edge = next_edge;
                cur = next_v;
            }
            k.base.add_edge(kid[start], kid[cur], len);
            k.paths.push_back(std::move(path));
        }
    }
    return k;
}

constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline bool unreachable(double d) { return d == kUnreachable; }

inline std::vector<double> distances(const Multigraph& g, int source) {
    if (source < 0 || source >= g.n()) throw std::out_of_range("source out of range");
    const auto adj = g.adjacency();
    std::vector<double> dist(g.n(), kUnreachable);
    using item = std::pair<double, int>;
    std::priority_queue<item, std::vector<item>, std::greater<item>> pq;
    dist[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (auto [w, id] : adj[v]) {
            const double nd = d + g.edge(id).len;
            if (nd < dist[w]) {
                dist[w] = nd;
                pq.push({nd, w});
            }
        }
    }
    return dist;
}

inline double diameter(const Multigraph& g) {
    if (!is_connected(g)) throw std::invalid_argument("diameter: graph is not connected");
    double best = 0.0;
    for (int s = 0; s < g.n(); ++s)
        for (double d : distances(g, s)) best = std::max(best, d);
    return best;
}

// two sweeps; valid only for trees (forest components: the one containing start)
inline double tree_diameter(const Multigraph& t, int start = 0) {
    if (t.n() == 0) return 0.0;
    auto d = distances(t, start);
    int far = start;
    for (int v = 0; v < t.n(); ++v)
        if (!unreachable(d[v]) && d[v] > d[far]) far = v;
    d = distances(t, far);
    double best = 0.0;
    for (double x : d)
        if (!unreachable(x)) best = std::max(best, x);
    return best;
}

inline double total_length(const Multigraph& g) {
    double s = 0.0;
    for (const auto& e : g.edges()) s += e.len;
    return s;
}

// edge list text: "n m" then m lines "u v [len]"
inline Multigraph read_edge_list(std::istream& in) {
    long long n = -1, m = -1;
    if (!(in >> n >> m) || n < 0 || m < 0) throw std::runtime_error("edge list: bad header");
    std::string line;
    std::getline(in, line);
    Multigraph g(static_cast<int>(n));
    for (long long i = 0; i < m; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("edge list: truncated");
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            --i;
            continue;
        }
        std::istringstream ls(line);
        int u, v;
        double len = 1.0;
        if (!(ls >> u >> v)) throw std::runtime_error("edge list: bad edge line");
        if (!(ls >> len)) len = 1.0;
        g.add_edge(u, v, len);
    }
    return g;
}

inline void write_edge_list(std::ostream& out, const Multigraph& g, bool with_lengths = true) {
    out << g.n() << ' ' << g.m() << '\n';
    char buf[64];
    for (const auto& e : g.edges()) {
        out << e.u << ' ' << e.v;
        if (with_lengths) {
            std::snprintf(buf, sizeof buf, " %.17g", e.len);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace mstlab
