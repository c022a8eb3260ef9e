#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cyclebreak.hpp"
#include "multigraph.hpp"
#include "rng.hpp"
#include "samplers.hpp"

namespace mstlab {

struct PercOutcome {
    Multigraph surviving;      // all vertices, surviving edges in id order
    std::vector<int> kept;     // original ids of surviving edges
    std::vector<int> removed;  // original ids of removed edges
};

inline PercOutcome perc(const Multigraph& h, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("perc: p must lie in [0,1]");
    PercOutcome out;
    out.surviving = Multigraph(h.n());
    for (int i = 0; i < h.m(); ++i) {
        if (rng.bernoulli(p)) {
            out.surviving.add_edge(h.edge(i).u, h.edge(i).v, h.edge(i).len);
            out.kept.push_back(i);
        } else {
            out.removed.push_back(i);
        }
    }
    return out;
}

// 1/(1+t) = 1/2 + lambda n^{-1/3}
inline double t_of_lambda(double n, double lambda) {
    const double c = std::cbrt(n);
    if (!(std::fabs(lambda) < c / 2.0)) throw std::out_of_range("t_of_lambda: need |lambda| < n^{1/3}/2");
    return 1.0 / (0.5 + lambda / c) - 1.0;
}

inline double critical_survival(double n, double lambda) { return 0.5 + lambda / std::cbrt(n); }

struct MarkingOutcome {
    Multigraph marked;          // H with Exponential(1) lengths and red flags
    Multigraph rem;             // surviving edges with their lengths
    Multigraph rem_shape;       // same edges, unit lengths
    std::vector<char> survived; // per original edge id
    long long draws = 0;        // R(t)
};

// R(t) ~ Poisson(t l(H)) length-biased draws that only mark, never remove
inline MarkingOutcome poisson_marking(const Multigraph& h, double t, Rng& rng) {
    if (!(t >= 0.0)) throw std::invalid_argument("poisson_marking: t >= 0");
    MarkingOutcome out;
    out.marked = shape(h);
    for (int i = 0; i < h.m(); ++i) out.marked.set_length(i, rng.exponential());
    const double ell = total_length(out.marked);
    std::vector<double> cum(h.m());
    double s = 0.0;
    for (int i = 0; i < h.m(); ++i) cum[i] = (s += out.marked.edge(i).len);
    out.draws = ell > 0.0 ? static_cast<long long>(rng.poisson(t * ell)) : 0;
    for (long long k = 0; k < out.draws; ++k) {
        const double x = rng.uniform() * ell;
        const int id = std::min(static_cast<int>(std::upper_bound(cum.begin(), cum.end(), x) - cum.begin()), h.m() - 1);
        out.marked.set_red(id);
    }
    out.survived.assign(h.m(), 0);
    for (int i = 0; i < h.m(); ++i) out.survived[i] = !out.marked.edge(i).red;
    out.rem = rem(out.marked);
    out.rem_shape = out.rem.unit_lengths();
    return out;
}

// two-stage pairing of half-edges
struct HalfEdgeCoupling {
    Multigraph q1;
    Multigraph q2;               // q1's edges first (same ids), then the m new edges
    std::vector<int> owner;      // vertex of each half-edge; half-edges grouped by vertex
    std::vector<int> edge_of;    // q2 edge id containing each half-edge
    std::vector<char> in_q1;     // per half-edge
    int new_edges() const { return q2.m() - q1.m(); }
};

inline HalfEdgeCoupling half_edge_coupling(const std::vector<int>& d, long long m, Rng& rng) {
    const long long ell = degree_sum(d);
    if (ell % 2) throw std::invalid_argument("half_edge_coupling: odd degree sum");
    if (m < 0 || 2 * m > ell) throw std::invalid_argument("half_edge_coupling: need 0 <= 2m <= l");
    HalfEdgeCoupling c;
    for (int v = 0; v < static_cast<int>(d.size()); ++v)
        for (int j = 0; j < d[v]; ++j) c.owner.push_back(v);
    std::vector<int> perm(static_cast<std::size_t>(ell));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const auto first = static_cast<std::size_t>(ell - 2 * m);
    c.q1 = Multigraph(static_cast<int>(d.size()));
    c.edge_of.assign(perm.size(), -1);
    c.in_q1.assign(perm.size(), 0);
    for (std::size_t i = 0; i + 1 < first; i += 2) {
        const int id = c.q1.add_edge(c.owner[perm[i]], c.owner[perm[i + 1]]);
        c.edge_of[perm[i]] = c.edge_of[perm[i + 1]] = id;
        c.in_q1[perm[i]] = c.in_q1[perm[i + 1]] = 1;
    }
    c.q2 = c.q1;
    for (std::size_t i = first; i + 1 < perm.size(); i += 2) {
        const int id = c.q2.add_edge(c.owner[perm[i]], c.owner[perm[i + 1]]);
        c.edge_of[perm[i]] = c.edge_of[perm[i + 1]] = id;
    }
    return c;
}

struct DegreeStats {
    std::vector<double> histogram;  // fractions of degree 0..3
    double criticality = 0.0;       // n^{1/3}(sum d'^2 / sum d' - 2)
};

// remove m uniform edges from a fresh G_{n,3}
inline DegreeStats degree_stats_after_removal(int n, long long m, Rng& rng) {
    if (n < 0 || n % 2) throw std::invalid_argument("degree_stats_after_removal: n must be even");
    if (m < 0 || 2 * m > 3LL * n) throw std::invalid_argument("degree_stats_after_removal: m <= 3n/2");
    const auto g = regular_configuration_model(n, 3, rng);
    std::vector<int> ids(g.m());
    std::iota(ids.begin(), ids.end(), 0);
    for (long long i = 0; i < m; ++i) {
        const auto j = static_cast<std::size_t>(i + static_cast<long long>(rng.below(ids.size() - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
    }
    std::vector<int> deg(n, 3);
    for (long long i = 0; i < m; ++i) {
        const auto& e = g.edge(ids[static_cast<std::size_t>(i)]);
        --deg[e.u];
        --deg[e.v];
    }
    DegreeStats s;
    s.histogram.assign(4, 0.0);
    double s1 = 0.0, s2 = 0.0;
    for (int x : deg) {
        s.histogram[x] += 1.0;
        s1 += x;
        s2 += static_cast<double>(x) * x;
    }
    for (auto& h : s.histogram) h /= n;
    s.criticality = s1 > 0.0 ? std::cbrt(static_cast<double>(n)) * (s2 / s1 - 2.0)
                             : -std::numeric_limits<double>::infinity();
    return s;
}

// sigma_1 / (sigma_3 - 4 sigma_1)^{2/3}, sigma_k the k-th moment of nu over 0,1,2,...
inline double criticality_prefactor(const std::vector<double>& nu) {
    long double s1 = 0.0L, s3 = 0.0L;
    for (std::size_t k = 0; k < nu.size(); ++k) {
        const long double x = static_cast<long double>(k);
        s1 += nu[k] * x;
        s3 += nu[k] * x * x * x;
    }
    const long double gap = s3 - 4.0L * s1;
    if (!(gap > 0.0L)) throw std::domain_error("criticality_prefactor: need sigma_3 > 4 sigma_1");
    return static_cast<double>(s1 / std::pow(gap, 2.0L / 3.0L));
}

struct Pipeline {
    Multigraph g;                 // G_{n,3} with Exponential(1) lengths
    bool connected = false;       // the event B_n
    double t = 0.0;
    std::vector<double> hit;      // first-hit time per edge; R_{n,lambda} draws = hits before t
    long long draws = 0;
    std::vector<int> g1_vertices; // vertex set of the largest Rem component, sorted
    std::vector<int> g1_edges;    // its edge ids in g
    Multigraph frak_g1;           // with lengths, relabelled by position in g1_vertices
    Multigraph g1;                // Shape, unit lengths
    CbdResult global;             // CBD_infinity of the whole graph
    Multigraph cbd_frak_g1;       // CBD_infinity(frak G_1), relabelled
    Multigraph cbd_g1;            // same tree, unit lengths
};

// exponential lengths, Poisson(t l) length-biased draws realised through
// exponential first-hit clocks, Rem, largest component, then the continuation to infinity
inline Pipeline g1_pipeline(int n, double lambda, Rng& rng) {
    if (n < 2 || n % 2) throw std::invalid_argument("g1_pipeline: n must be even");
    Pipeline p;
    p.t = t_of_lambda(n, lambda);
    p.g = regular_configuration_model(n, 3, rng);
    for (int i = 0; i < p.g.m(); ++i) p.g.set_length(i, rng.exponential());
    p.connected = is_connected(p.g);
    p.hit = first_hit_times(p.g, rng);
    std::vector<int> rem_ids;
    for (int i = 0; i < p.g.m(); ++i) {
        if (p.hit[i] > p.t) rem_ids.push_back(i);
    }
    // repeat hits after the first arrival, so draws ~ Poisson(t l)
    for (int i = 0; i < p.g.m(); ++i)
        if (p.hit[i] <= p.t)
            p.draws += 1 + static_cast<long long>(rng.poisson((p.t - p.hit[i]) * p.g.edge(i).len));
    const auto remg = p.g.edge_subgraph(rem_ids);
    p.g1_vertices = components(remg).front();
    std::vector<int> local_ids;
    p.frak_g1 = remg.induced(p.g1_vertices, &local_ids);
    for (int j : local_ids) p.g1_edges.push_back(rem_ids[j]);
    p.g1 = p.frak_g1.unit_lengths();
    p.global = cbd_from_order(p.g, order_by_time(p.hit));
    std::vector<int> local(n, -1);
    for (int i = 0; i < static_cast<int>(p.g1_vertices.size()); ++i) local[p.g1_vertices[i]] = i;
    p.cbd_frak_g1 = Multigraph(static_cast<int>(p.g1_vertices.size()));
    for (int id : p.g1_edges)
        if (p.global.kept[id]) {
            const auto& e = p.g.edge(id);
            p.cbd_frak_g1.add_edge(local[e.u], local[e.v], e.len);
        }
    p.cbd_g1 = p.cbd_frak_g1.unit_lengths();
    return p;
}

struct Measures {
    std::vector<double> attach;  // aligned with g1_vertices
    std::vector<double> avail;
    std::vector<int> d_avail;
};

inline Measures attach_avail_measures(const Pipeline& p) {
    const int k = static_cast<int>(p.g1_vertices.size());
    const int n = p.g.n();
    Measures out;
    out.attach.assign(k, 1.0 / k);
    out.avail.assign(k, 1.0 / k);
    out.d_avail.assign(k, 3);
    for (const auto& e : p.frak_g1.edges()) {
        --out.d_avail[e.u];
        --out.d_avail[e.v];
    }
    long long tot = 0;
    for (int x : out.d_avail) tot += x;
    if (tot > 0)
        for (int i = 0; i < k; ++i) out.avail[i] = static_cast<double>(out.d_avail[i]) / static_cast<double>(tot);
    if (!p.connected) return out;
    // multi-source search over the global tree from the G_1 vertices
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < p.g.m(); ++i)
        if (p.global.kept[i]) {
            adj[p.g.edge(i).u].push_back(p.g.edge(i).v);
            adj[p.g.edge(i).v].push_back(p.g.edge(i).u);
        }
    std::vector<int> owner(n, -1), queue;
    for (int i = 0; i < k; ++i) {
        owner[p.g1_vertices[i]] = i;
        queue.push_back(p.g1_vertices[i]);
    }
    std::vector<long long> count(k, 0);
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const int v = queue[h];
        for (int w : adj[v])
            if (owner[w] < 0) {
                owner[w] = owner[v];
                ++count[owner[v]];
                queue.push_back(w);
            }
    }
    for (int i = 0; i < k; ++i) out.attach[i] = static_cast<double>(1 + count[i]) / n;
    return out;
}

struct JointSample {
    long long m = 0;
    bool connected = false;
    int c1_size = 0;
    std::vector<int> slot_sizes;  // one per available half-edge, ordered by (vertex, half-edge id)
};

inline JointSample joint_sampler(int n, double lambda, Rng& rng) {
    if (n < 2 || n % 2) throw std::invalid_argument("joint_sampler: n must be even");
    JointSample js;
    const double q = 0.5 - lambda / std::cbrt(static_cast<double>(n));
    js.m = static_cast<long long>(rng.binomial(3ULL * n / 2, std::clamp(q, 0.0, 1.0)));
    const auto c = half_edge_coupling(std::vector<int>(n, 3), js.m, rng);
    const auto c1 = components(c.q1).front();
    js.c1_size = static_cast<int>(c1.size());
    std::vector<char> in_c1(n, 0);
    for (int v : c1) in_c1[v] = 1;
    std::vector<int> avail;
    for (int h = 0; h < static_cast<int>(c.owner.size()); ++h)
        if (in_c1[c.owner[h]] && !c.in_q1[h]) avail.push_back(h);
    js.slot_sizes.assign(avail.size(), 0);
    js.connected = is_connected(c.q2);
    if (!js.connected || js.m == 0) return js;
    // uniform order of the new edges; reverse union-find from Q1
    std::vector<int> order(static_cast<std::size_t>(js.m));
    std::iota(order.begin(), order.end(), c.q1.m());
    rng.shuffle(order);
    std::vector<char> kept(c.q2.m(), 1);
    UnionFind uf(n);
    for (int i = 0; i < c.q1.m(); ++i) uf.unite(c.q1.edge(i).u, c.q1.edge(i).v);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto& e = c.q2.edge(*it);
        if (uf.same(e.u, e.v)) kept[*it] = 0;
        uf.unite(e.u, e.v);
    }
    UnionFind outside(n);
    for (int i = 0; i < c.q2.m(); ++i) {
        const auto& e = c.q2.edge(i);
        if (kept[i] && !in_c1[e.u] && !in_c1[e.v]) outside.unite(e.u, e.v);
    }
    for (std::size_t s = 0; s < avail.size(); ++s) {
        const int id = c.edge_of[avail[s]];
        if (!kept[id]) continue;
        const auto& e = c.q2.edge(id);
        const int w = in_c1[e.u] ? e.v : e.u;
        if (!in_c1[w]) js.slot_sizes[s] = outside.size_of(w);
    }
    return js;
}

}  // namespace mstlab
