#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "continuum.hpp"
#include "cyclebreak.hpp"
#include "metric.hpp"
#include "mst.hpp"
#include "multigraph.hpp"
#include "percolation.hpp"
#include "rng.hpp"
#include "samplers.hpp"
#include "stats.hpp"

namespace mstlab {

inline constexpr const char* kVersion = "1.0.0";

// ---------- run management ----------

inline int thread_count() {
    int t = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MSTLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) t = v;
    }
    return std::max(1, t);
}

// fn(i) for i in [0,count); results must be written to per-index slots
inline void parallel_for(long long count, const std::function<void(long long)>& fn) {
    const int t = static_cast<int>(std::min<long long>(thread_count(), std::max<long long>(count, 1)));
    if (t <= 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> err(t);
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            try {
                for (long long i = w; i < count; i += t) fn(i);
            } catch (...) {
                err[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
}

struct RecordRow {
    std::string experiment;
    long long replica = 0;
    std::string name;
    double value = 0.0;
};

class RunRecord {
public:
    void add(const std::string& experiment, long long replica, const std::string& name, double value) {
        rows_.push_back(RecordRow{experiment, replica, name, value});
    }
    void append(const RunRecord& other) { rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end()); }
    const std::vector<RecordRow>& rows() const { return rows_; }

    std::vector<double> values(const std::string& experiment, const std::string& name) const {
        std::vector<double> v;
        for (const auto& r : rows_)
            if (r.experiment == experiment && r.name == name) v.push_back(r.value);
        return v;
    }

    void write_csv(std::ostream& out, const std::map<std::string, std::string>& header = {},
                   bool with_experiment = true) const {
        out << "# mstlab " << kVersion << '\n';
        for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
        out << (with_experiment ? "experiment,replica,name,value\n" : "replica,name,value\n");
        char buf[64];
        for (const auto& r : rows_) {
            std::snprintf(buf, sizeof buf, "%.17g", r.value);
            if (with_experiment) out << r.experiment << ',';
            out << r.replica << ',' << r.name << ',' << buf << '\n';
        }
    }

private:
    std::vector<RecordRow> rows_;
};

// flat key=value text; '#' starts a comment
inline std::map<std::string, std::string> read_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::runtime_error("config: expected key=value, got '" + line + "'");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return read_config(in);
}

struct ExperimentConfig {
    std::string experiment = "mst_scaling";
    std::vector<int> sizes{1000};
    double lambda = 0.0;
    std::vector<double> lambdas;
    long long replicas = 10;
    std::uint64_t seed = 1;
    int grid = 1 << 14;
    int points = 512;
    int pairs = 64;
    int m = 1000;  // complete-graph size, light-path length, H_{m,s} size
    int s = 3;
    int s1 = 6;
    double c = 0.05;
    std::string output;

    static std::vector<double> parse_list(const std::string& s) {
        std::vector<double> v;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ','))
            if (!cell.empty()) v.push_back(std::stod(cell));
        return v;
    }

    static ExperimentConfig from_map(const std::map<std::string, std::string>& kv) {
        ExperimentConfig c;
        for (const auto& [k, v] : kv) {
            if (k == "experiment") c.experiment = v;
            else if (k == "sizes") {
                c.sizes.clear();
                for (double x : parse_list(v)) c.sizes.push_back(static_cast<int>(x));
                std::sort(c.sizes.begin(), c.sizes.end());
            } else if (k == "lambda") c.lambda = std::stod(v);
            else if (k == "lambdas") c.lambdas = parse_list(v);
            else if (k == "replicas") c.replicas = std::stoll(v);
            else if (k == "seed") c.seed = std::stoull(v);
            else if (k == "grid") c.grid = std::stoi(v);
            else if (k == "points") c.points = std::stoi(v);
            else if (k == "pairs") c.pairs = std::stoi(v);
            else if (k == "m") c.m = std::stoi(v);
            else if (k == "s") c.s = std::stoi(v);
            else if (k == "s1") c.s1 = std::stoi(v);
            else if (k == "c") c.c = std::stod(v);
            else if (k == "output") c.output = v;
            else throw std::runtime_error("config: unknown key " + k);
        }
        if (c.replicas < 1) throw std::runtime_error("config: replicas >= 1");
        return c;
    }

    std::map<std::string, std::string> as_map() const {
        auto join = [](const auto& v) {
            std::ostringstream o;
            for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
            return o.str();
        };
        return {{"experiment", experiment}, {"sizes", join(sizes)},      {"lambda", std::to_string(lambda)},
                {"lambdas", join(lambdas)}, {"replicas", std::to_string(replicas)}, {"seed", std::to_string(seed)},
                {"grid", std::to_string(grid)}, {"points", std::to_string(points)}, {"pairs", std::to_string(pairs)},
                {"m", std::to_string(m)},    {"s", std::to_string(s)},    {"s1", std::to_string(s1)},
                {"c", std::to_string(c)}};
    }
};

// ---------- MST geometry ----------

struct TreeStats {
    int vertices = 0;
    double diameter = 0.0;
    double typical = 0.0;  // mean graph distance over sampled vertex pairs
};

// hop counts from src over a CSR adjacency; -1 when unreachable
inline std::vector<int> bfs_hops(const std::vector<int>& start, const std::vector<int>& nbr, int src) {
    std::vector<int> d(start.size() - 1, -1), q{src};
    d[src] = 0;
    q.reserve(d.size());
    for (std::size_t h = 0; h < q.size(); ++h) {
        const int v = q[h];
        for (int i = start[v]; i < start[v + 1]; ++i)
            if (d[nbr[i]] < 0) {
                d[nbr[i]] = d[v] + 1;
                q.push_back(nbr[i]);
            }
    }
    return d;
}

// unit-length tree on a subset of vertices of [n]
inline TreeStats tree_stats(const Multigraph& tree, const std::vector<int>& verts, int pairs, Rng& rng) {
    TreeStats s;
    s.vertices = static_cast<int>(verts.size());
    if (verts.size() <= 1) return s;
    const int n = tree.n();
    std::vector<int> start(n + 1, 0), nbr(2 * static_cast<std::size_t>(tree.m()));
    for (const auto& e : tree.edges()) {
        ++start[e.u + 1];
        ++start[e.v + 1];
    }
    for (int v = 0; v < n; ++v) start[v + 1] += start[v];
    std::vector<int> fill(start.begin(), start.end() - 1);
    for (const auto& e : tree.edges()) {
        nbr[fill[e.u]++] = e.v;
        nbr[fill[e.v]++] = e.u;
    }
    auto d = bfs_hops(start, nbr, verts.front());
    const int far = static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
    d = bfs_hops(start, nbr, far);
    s.diameter = *std::max_element(d.begin(), d.end());
    double acc = 0.0;
    for (int p = 0; p < pairs; ++p) {
        const int a = verts[rng.below(verts.size())];
        const int b = verts[rng.below(verts.size())];
        acc += bfs_hops(start, nbr, a)[b];
    }
    s.typical = acc / pairs;
    return s;
}

// M_n: MST of the largest component of G_{n,3} with i.i.d. uniform weights
inline TreeStats cm_mst_stats(int n, int pairs, Rng& rng) {
    auto g = regular_configuration_model(n, 3, rng);
    const auto wg = WeightedGraph::iid_uniform(std::move(g), rng);
    const auto ids = mst(wg);
    const auto tree = wg.graph.edge_subgraph(ids);
    const auto verts = components(wg.graph).front();
    return tree_stats(tree, verts, pairs, rng);
}

inline TreeStats complete_mst_stats(int m, int pairs, Rng& rng) {
    const auto tree = mst_complete_graph(m, rng);
    std::vector<int> verts(m);
    std::iota(verts.begin(), verts.end(), 0);
    return tree_stats(tree, verts, pairs, rng);
}

inline RunRecord mst_scaling(const ExperimentConfig& c) {
    RunRecord rec;
    for (int n : c.sizes) {
        std::vector<TreeStats> out(static_cast<std::size_t>(c.replicas));
        parallel_for(c.replicas, [&](long long r) {
            auto rng = Rng::stream(c.seed, static_cast<std::uint64_t>(r), mix(tag("mst_scaling"), n));
            out[r] = cm_mst_stats(n, c.pairs, rng);
        });
        const std::string ex = "mst_scaling_n" + std::to_string(n);
        const double sc = std::cbrt(static_cast<double>(n));
        for (long long r = 0; r < c.replicas; ++r) {
            rec.add(ex, r, "diam_over_cuberoot_n", out[r].diameter / sc);
            rec.add(ex, r, "typical_over_cuberoot_n", out[r].typical / sc);
            rec.add(ex, r, "mst_vertices", out[r].vertices);
        }
    }
    return rec;
}

struct RatioResult {
    double ratio = 0.0;
    std::vector<double> cm;        // typical / n^{1/3}
    std::vector<double> complete;  // typical / m^{1/3}
};

inline RatioResult six_cuberoot_ratio(int n, int m, long long replicas, std::uint64_t seed, int pairs = 64) {
    RatioResult res;
    res.cm.assign(static_cast<std::size_t>(replicas), 0.0);
    res.complete.assign(static_cast<std::size_t>(replicas), 0.0);
    parallel_for(replicas, [&](long long r) {
        auto a = Rng::stream(seed, static_cast<std::uint64_t>(r), tag("ratio-cm"));
        res.cm[r] = cm_mst_stats(n, pairs, a).typical / std::cbrt(static_cast<double>(n));
        auto b = Rng::stream(seed, static_cast<std::uint64_t>(r), tag("ratio-complete"));
        res.complete[r] = complete_mst_stats(m, pairs, b).typical / std::cbrt(static_cast<double>(m));
    });
    res.ratio = mean(res.cm) / mean(res.complete);
    return res;
}

// ---------- critical window ----------

struct CensusRow {
    double size_scaled = 0.0;  // n^{-2/3}|C_1|
    long long surplus = 0;
    bool has_kernel = false;   // surplus >= 2
    bool three_regular = false;
    double second_scaled = 0.0;
};

inline CensusRow census_of(const Multigraph& g) {
    CensusRow row;
    const auto comps = components(g);
    const double sc = std::pow(static_cast<double>(g.n()), 2.0 / 3.0);
    row.size_scaled = comps.front().size() / sc;
    if (comps.size() > 1) row.second_scaled = comps[1].size() / sc;
    std::vector<int> ids;
    const auto sub = g.induced(comps.front(), &ids);
    row.surplus = surplus(sub);
    if (row.surplus >= 2) {
        row.has_kernel = true;
        row.three_regular = kernel(sub).is_three_regular();
    }
    return row;
}

inline CensusRow percolated_cm_census(int n, double lambda, Rng& rng) {
    const auto g = regular_configuration_model(n, 3, rng);
    return census_of(perc(g, critical_survival(n, lambda), rng).surviving);
}

inline CensusRow er_census(int n, double lambda, Rng& rng) {
    const ErProcess proc(n, rng, ErProcess::threshold(n, lambda));
    return census_of(er_graph(proc, lambda));
}

inline RunRecord critical_census(const ExperimentConfig& c) {
    RunRecord rec;
    for (int n : c.sizes) {
        std::vector<CensusRow> er(static_cast<std::size_t>(c.replicas)), cm(static_cast<std::size_t>(c.replicas));
        parallel_for(c.replicas, [&](long long r) {
            auto a = Rng::stream(c.seed, static_cast<std::uint64_t>(r), mix(tag("census-er"), n));
            er[r] = er_census(n, c.lambda, a);
            auto b = Rng::stream(c.seed, static_cast<std::uint64_t>(r), mix(tag("census-cm"), n));
            cm[r] = percolated_cm_census(n, c.lambda, b);
        });
        for (long long r = 0; r < c.replicas; ++r) {
            for (auto [label, row] : {std::pair{"er", er[r]}, std::pair{"cm", cm[r]}}) {
                const std::string ex = std::string("census_") + label + "_n" + std::to_string(n);
                rec.add(ex, r, "largest_over_n23", row.size_scaled);
                rec.add(ex, r, "second_over_n23", row.second_scaled);
                rec.add(ex, r, "largest_surplus", static_cast<double>(row.surplus));
                rec.add(ex, r, "kernel_exists", row.has_kernel);
                rec.add(ex, r, "kernel_three_regular", row.three_regular);
            }
        }
    }
    return rec;
}

// ---------- surplus trajectory along the ER filtration ----------

inline double beta_k(double k) { return k * (k + 1.0) / ((k + 1.0 / 6.0) * (k + 5.0 / 6.0)); }

struct Trajectory {
    bool reached = false;        // some component attained surplus s
    bool event = false;          // the A[s1,s] event
    double tau_s1 = std::numeric_limits<double>::quiet_NaN();
    double tau_s = std::numeric_limits<double>::quiet_NaN();
    int leader_changes = 0;      // before tau_s (or the end)
    bool monotone = true;        // total surplus never decreased
};

inline double lambda_of_threshold(int n, double u) {
    return (u - 1.0 / n) * std::pow(static_cast<double>(n), 4.0 / 3.0);
}

// edge-by-edge in U order; tau_k = first time some component has surplus k while all others have <= 1
inline Trajectory surplus_trajectory(const ErProcess& proc, int s1, int s) {
    if (s1 < 2 || s < s1) throw std::invalid_argument("surplus_trajectory: need 2 <= s1 <= s");
    const int n = proc.n();
    Trajectory tr;
    UnionFind uf(n);
    std::vector<long long> sp(n, 0);
    std::map<long long, int> count{{0, n}};
    auto drop = [&](long long v) {
        if (--count[v] == 0) count.erase(v);
    };
    auto max_other = [&](long long mine) {
        // largest surplus among the other components
        auto it = count.rbegin();
        if (it->first != mine || it->second > 1) return it->first;
        ++it;
        return it == count.rend() ? 0LL : it->first;
    };
    int leader = 0;
    int star = -1;
    std::vector<char> visited(static_cast<std::size_t>(s) + 1, 0);
    bool others_ok = true;
    long long total = 0;
    for (const auto& p : proc.pairs()) {
        int a = uf.find(p.i), b = uf.find(p.j);
        int r;
        if (a == b) {
            drop(sp[a]);
            ++sp[a];
            ++count[sp[a]];
            r = a;
        } else {
            const long long merged = sp[a] + sp[b];
            drop(sp[a]);
            drop(sp[b]);
            const int old_leader = uf.find(leader);
            uf.unite(a, b);
            r = uf.find(a);
            sp[r] = merged;
            ++count[merged];
            if (tr.tau_s != tr.tau_s && old_leader != a && old_leader != b && uf.size_of(r) > uf.size_of(old_leader))
                ++tr.leader_changes;
            if (uf.size_of(r) > uf.size_of(old_leader) || old_leader == a || old_leader == b) leader = r;
        }
        long long now = 0;
        for (const auto& [v, k] : count) now += v * k;
        if (now < total) tr.monotone = false;
        total = now;
        const double lam = lambda_of_threshold(n, p.u);
        if (star < 0) {
            if (sp[r] >= s1) {
                star = r;
                tr.tau_s1 = lam;
                others_ok = sp[r] == s1 && max_other(sp[r]) <= 1;
                if (sp[r] <= s) visited[sp[r]] = 1;
            }
        } else {
            const int cs = uf.find(star);
            if (cs != star) star = cs;
            if (sp[star] <= s) visited[sp[star]] = 1;
            if (max_other(sp[star]) > 1) others_ok = false;
        }
        if (star >= 0 && sp[star] >= s) {
            tr.reached = true;
            tr.tau_s = lam;
            bool all = true;
            for (int v = s1; v <= s; ++v) all = all && visited[v];
            tr.event = others_ok && all && sp[star] == s;
            break;
        }
    }
    return tr;
}

// ---------- light paths ----------

struct LightPath {
    bool found = false;
    bool inconclusive = false;
    long long nodes = 0;
};

// self-avoiding path with |P| >= m edges and total length <= c|P|; it suffices to scan |P| in [m, 2m-1]
inline LightPath light_path_probe(const Multigraph& g, double c, int m, long long budget = 50000000) {
    LightPath res;
    if (m < 1) throw std::invalid_argument("light_path_probe: m >= 1");
    const auto adj = g.adjacency();
    const double limit = c * (2 * m - 1);
    std::vector<char> on(g.n(), 0);
    std::function<bool(int, int, double)> dfs = [&](int v, int depth, double sum) -> bool {
        if (++res.nodes > budget) {
            res.inconclusive = true;
            return false;
        }
        if (depth >= m && sum <= c * depth) return true;
        if (depth == 2 * m - 1) return false;
        for (auto [w, id] : adj[v]) {
            if (on[w]) continue;
            const double ns = sum + g.edge(id).len;
            if (ns > limit) continue;
            on[w] = 1;
            const bool hit = dfs(w, depth + 1, ns);
            on[w] = 0;
            if (hit) return true;
            if (res.inconclusive) return false;
        }
        return false;
    };
    for (int v = 0; v < g.n() && !res.found && !res.inconclusive; ++v) {
        on[v] = 1;
        res.found = dfs(v, 0, 0.0);
        on[v] = 0;
    }
    return res;
}

// ---------- pendant masses of H_{m,s} ----------

// |V_i|/m per kernel edge: every vertex joins its nearest 2-core vertex; interior path vertices
// belong to their kernel edge, a kernel vertex goes to its incident kernel edge of smallest id
inline std::vector<double> pendant_masses(const Multigraph& h) {
    const auto k = kernel(h);
    if (k.kind != Kernel::Kind::Graph) throw std::invalid_argument("pendant_masses: surplus must be >= 2");
    const int n = h.n();
    std::vector<int> slot(n, -1);
    for (int e = 0; e < static_cast<int>(k.paths.size()); ++e)
        for (int id : k.paths[e]) {
            const auto& ed = h.edge(id);
            for (int v : {ed.u, ed.v})
                if (slot[v] < 0 || slot[v] > e) slot[v] = e;
        }
    // kernel vertices: smallest incident kernel edge id (already the min above); interior vertices have one edge
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (slot[v] >= 0) queue.push_back(v);
    const auto adj = h.adjacency();
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (auto [w, id] : adj[queue[i]])
            if (slot[w] < 0) {
                slot[w] = slot[queue[i]];
                queue.push_back(w);
            }
    std::vector<double> mass(k.paths.size(), 0.0);
    for (int v = 0; v < n; ++v) mass[slot[v]] += 1.0 / n;
    return mass;
}

// ---------- max pendant mass of the conditional MST ----------

inline double delta_max_mass(int n, double lambda, Rng& rng) {
    const ErProcess proc(n, rng.fork(tag("er")), ErProcess::threshold(n, lambda));
    auto r = rng.fork(tag("outside"));
    const auto res = mst_conditional_on_er(proc, lambda, r);
    double best = 0.0;
    for (double p : res.mass) best = std::max(best, p);
    return best;
}

// ---------- config-driven wrappers ----------

inline RunRecord surplus_trajectories(const ExperimentConfig& c, double lambda_max = 8.0) {
    RunRecord rec;
    for (int n : c.sizes) {
        std::vector<Trajectory> out(static_cast<std::size_t>(c.replicas));
        parallel_for(c.replicas, [&](long long r) {
            auto rng = Rng::stream(c.seed, static_cast<std::uint64_t>(r), mix(tag("trajectory"), n));
            const ErProcess proc(n, rng, ErProcess::threshold(n, lambda_max));
            out[r] = surplus_trajectory(proc, c.s1, c.s);
        });
        const std::string ex = "surplus_trajectory_n" + std::to_string(n);
        for (long long r = 0; r < c.replicas; ++r) {
            rec.add(ex, r, "reached", out[r].reached);
            rec.add(ex, r, "event", out[r].event);
            rec.add(ex, r, "tau_s1", out[r].tau_s1);
            rec.add(ex, r, "tau_s", out[r].tau_s);
            rec.add(ex, r, "leader_changes", out[r].leader_changes);
            rec.add(ex, r, "monotone", out[r].monotone);
        }
    }
    return rec;
}

inline RunRecord light_paths(const ExperimentConfig& c) {
    RunRecord rec;
    for (int n : c.sizes) {
        std::vector<LightPath> out(static_cast<std::size_t>(c.replicas));
        parallel_for(c.replicas, [&](long long r) {
            auto rng = Rng::stream(c.seed, static_cast<std::uint64_t>(r), mix(tag("light"), n));
            auto g = regular_configuration_model(n, 3, rng);
            for (int e = 0; e < g.m(); ++e) g.set_length(e, rng.exponential());
            out[r] = light_path_probe(g, c.c, c.m);
        });
        const std::string ex = "light_path_n" + std::to_string(n);
        for (long long r = 0; r < c.replicas; ++r) {
            rec.add(ex, r, "found", out[r].found);
            rec.add(ex, r, "inconclusive", out[r].inconclusive);
            rec.add(ex, r, "nodes", static_cast<double>(out[r].nodes));
        }
    }
    return rec;
}

inline RunRecord pendant_mass_census(const ExperimentConfig& c) {
    RunRecord rec;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(c.replicas));
    parallel_for(c.replicas, [&](long long r) {
        auto rng = Rng::stream(c.seed, static_cast<std::uint64_t>(r), tag("pendant"));
        out[r] = pendant_masses(sample_H_ms(c.m, c.s, rng));
    });
    for (long long r = 0; r < c.replicas; ++r) {
        rec.add("pendant_mass", r, "kernel_edges", static_cast<double>(out[r].size()));
        for (std::size_t i = 0; i < out[r].size(); ++i) rec.add("pendant_mass", r, "edge_" + std::to_string(i), out[r][i]);
    }
    return rec;
}

inline RunRecord delta_max_masses(const ExperimentConfig& c) {
    RunRecord rec;
    const auto lams = c.lambdas.empty() ? std::vector<double>{c.lambda} : c.lambdas;
    for (int n : c.sizes)
        for (double lam : lams) {
            std::vector<double> out(static_cast<std::size_t>(c.replicas));
            parallel_for(c.replicas, [&](long long r) {
                auto rng = Rng::stream(c.seed, static_cast<std::uint64_t>(r), mix(mix(tag("delta"), n), tag(std::to_string(lam))));
                out[r] = delta_max_mass(n, lam, rng);
            });
            const std::string ex = "delta_max_mass_n" + std::to_string(n) + "_lambda" + std::to_string(lam);
            for (long long r = 0; r < c.replicas; ++r) rec.add(ex, r, "delta", out[r]);
        }
    return rec;
}

inline RunRecord run_experiment(const ExperimentConfig& c) {
    if (c.experiment == "mst_scaling") return mst_scaling(c);
    if (c.experiment == "critical_census") return critical_census(c);
    if (c.experiment == "surplus_trajectory") return surplus_trajectories(c);
    if (c.experiment == "light_path_probe") return light_paths(c);
    if (c.experiment == "pendant_mass_census") return pendant_mass_census(c);
    if (c.experiment == "delta_max_mass") return delta_max_masses(c);
    if (c.experiment == "six_cuberoot_ratio") {
        RunRecord rec;
        for (int n : c.sizes) {
            const auto res = six_cuberoot_ratio(n, c.m, c.replicas, c.seed, c.pairs);
            const std::string ex = "six_cuberoot_ratio_n" + std::to_string(n);
            for (long long r = 0; r < c.replicas; ++r) {
                rec.add(ex, r, "cm_typical_over_cuberoot_n", res.cm[r]);
                rec.add(ex, r, "complete_typical_over_cuberoot_m", res.complete[r]);
            }
            rec.add(ex, 0, "ratio", res.ratio);
        }
        return rec;
    }
    throw std::runtime_error("unknown experiment: " + c.experiment);
}

// count, mean and quantiles per (experiment, name)
inline nlohmann::json summary_json(const RunRecord& rec) {
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const auto& r : rec.rows()) groups[{r.experiment, r.name}].push_back(r.value);
    nlohmann::json out = nlohmann::json::object();
    for (auto& [key, v] : groups) {
        std::vector<double> finite;
        for (double x : v)
            if (std::isfinite(x)) finite.push_back(x);
        nlohmann::json s{{"count", v.size()}, {"finite", finite.size()}};
        if (!finite.empty()) {
            s["mean"] = mean(finite);
            for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) s["q" + std::to_string(static_cast<int>(q * 100 + 0.5))] = quantile(finite, q);
        }
        out[key.first][key.second] = s;
    }
    return out;
}

}  // namespace mstlab
