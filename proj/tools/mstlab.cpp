#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "mstlab/acceptance.hpp"

using namespace mstlab;

namespace {

struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream& get(const std::string& path) {
        if (path.empty() || path == "-") return std::cout;
        file = std::make_unique<std::ofstream>(path);
        if (!*file) throw std::runtime_error("cannot write " + path);
        return *file;
    }
};

Multigraph load_graph(const std::string& path) {
    if (path.empty() || path == "-") return read_edge_list(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_edge_list(in);
}

// flags override config entries
std::map<std::string, std::string> merged(const std::string& config, const std::map<std::string, std::string>& flags) {
    auto kv = config.empty() ? std::map<std::string, std::string>{} : read_config_file(config);
    for (const auto& [k, v] : flags)
        if (!v.empty()) kv[k] = v;
    return kv;
}

void emit_records(const RunRecord& rec, const std::map<std::string, std::string>& header, const std::string& out,
                  bool with_experiment = true) {
    Output o;
    rec.write_csv(o.get(out), header, with_experiment);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mstlab: minimum spanning trees of random graphs"};
    app.require_subcommand(1);
    std::string config;
    app.add_option("--config", config, "flat key=value config file");

    // generate
    auto* gen = app.add_subcommand("generate", "sample a random graph");
    std::string model = "cm", gen_out;
    int n = 10, degree = 3, m = 10, s = 1;
    double lambda = 0.0, p = 0.5;
    std::uint64_t seed = 1;
    std::vector<int> degrees, children;
    gen->add_option("--model", model)->check(CLI::IsMember({"cm", "simple", "er", "hms", "gmp", "tree", "planetree"}));
    gen->add_option("--n", n, "vertices (cm, simple, er)");
    gen->add_option("--degree", degree, "regular degree (cm, simple)");
    gen->add_option("--degrees", degrees, "explicit degree sequence (cm)");
    gen->add_option("--lambda", lambda, "critical window parameter (er)");
    gen->add_option("--m", m, "vertices (hms, gmp, tree)");
    gen->add_option("--s", s, "surplus (hms)");
    gen->add_option("--p", p, "edge probability (gmp)");
    gen->add_option("--children", children, "entry i = number of vertices with i children (planetree)");
    gen->add_option("--seed", seed);
    gen->add_option("--out", gen_out);

    // mst
    auto* mst_cmd = app.add_subcommand("mst", "minimum spanning tree of an edge list");
    std::string mst_in, mst_out;
    std::uint64_t mst_seed = 0;
    mst_cmd->add_option("--input", mst_in, "edge list; the third column is the weight")->required();
    auto* mst_seed_opt = mst_cmd->add_option("--seed", mst_seed, "use i.i.d. uniform weights instead");
    mst_cmd->add_option("--out", mst_out);

    // cbd
    auto* cbd_cmd = app.add_subcommand("cbd", "cycle-breaking dynamics to completion");
    std::string cbd_in, cbd_lengths = "unit", cbd_emit = "tree", cbd_out;
    std::uint64_t cbd_seed = 1;
    cbd_cmd->add_option("--input", cbd_in)->required();
    cbd_cmd->add_option("--lengths", cbd_lengths)->check(CLI::IsMember({"unit", "exp", "file"}));
    cbd_cmd->add_option("--seed", cbd_seed);
    cbd_cmd->add_option("--emit", cbd_emit)->check(CLI::IsMember({"tree", "trace"}));
    cbd_cmd->add_option("--out", cbd_out);

    // percolate
    auto* perc_cmd = app.add_subcommand("percolate", "critical percolation on G_{n,3}");
    int perc_n = 10000;
    double perc_lambda = 0.0;
    std::uint64_t perc_seed = 1;
    long long perc_reps = 1;
    std::string perc_emit = "histogram", perc_out;
    perc_cmd->add_option("--n", perc_n);
    perc_cmd->add_option("--lambda", perc_lambda);
    perc_cmd->add_option("--seed", perc_seed);
    perc_cmd->add_option("--replicas", perc_reps);
    perc_cmd->add_option("--emit", perc_emit)->check(CLI::IsMember({"histogram", "pipeline", "measures"}));
    perc_cmd->add_option("--out", perc_out);

    // continuum
    auto* cont = app.add_subcommand("continuum", "sample a continuum object as a finite metric measure space");
    std::string object = "crt", cont_out;
    int cont_s = 2, grid = 1 << 12, points = 64;
    std::uint64_t cont_seed = 1;
    cont->add_option("--object", object)->check(CLI::IsMember({"crt", "hs", "hs-tilted"}));
    cont->add_option("--s", cont_s);
    cont->add_option("--grid", grid);
    cont->add_option("--points", points);
    cont->add_option("--seed", cont_seed);
    cont->add_option("--out", cont_out);

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a configured experiment");
    std::map<std::string, std::string> flags;
    for (const char* key : {"experiment", "sizes", "lambda", "lambdas", "replicas", "seed", "grid", "points", "pairs",
                            "m", "s", "s1", "c", "output"})
        exp->add_option(std::string("--") + key, flags[key]);
    std::string json_out;
    exp->add_option("--json", json_out, "summary with quantiles");

    // verify
    auto* ver = app.add_subcommand("verify", "run the acceptance suite");
    std::uint64_t ver_seed = 42;
    std::string ver_out = "verify.csv";
    std::vector<int> only;
    ver->add_option("--seed", ver_seed);
    ver->add_option("--out", ver_out, "RunRecord CSV");
    ver->add_option("--only", only, "subset of criteria 1-14");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto rng = Rng::stream(seed, 0, tag("generate"));
            Multigraph g;
            if (model == "cm") g = degrees.empty() ? regular_configuration_model(n, degree, rng) : configuration_model(degrees, rng);
            else if (model == "simple") g = uniform_simple_regular(n, degree, rng);
            else if (model == "er") g = er_graph(ErProcess(n, rng, ErProcess::threshold(n, lambda)), lambda);
            else if (model == "hms") g = sample_H_ms(m, s, rng);
            else if (model == "gmp") g = sample_Gmp(m, p, rng);
            else if (model == "tree") g = uniform_labeled_tree(m, rng).to_graph();
            else g = uniform_plane_tree_child_sequence(children, rng).to_graph();
            Output o;
            write_edge_list(o.get(gen_out), g, model == "er");
        } else if (*mst_cmd) {
            auto g = load_graph(mst_in);
            WeightedGraph wg = WeightedGraph::from_lengths(g);
            if (*mst_seed_opt) {
                auto rng = Rng::stream(mst_seed, 0, tag("mst"));
                wg = WeightedGraph::iid_uniform(std::move(g), rng);
            }
            const auto ids = spanning_forest(wg);
            Multigraph t(wg.graph.n());
            for (int id : ids) t.add_edge(wg.graph.edge(id).u, wg.graph.edge(id).v, wg.w[id]);
            Output o;
            write_edge_list(o.get(mst_out), t);
        } else if (*cbd_cmd) {
            auto g = load_graph(cbd_in);
            auto rng = Rng::stream(cbd_seed, 0, tag("cbd"));
            if (cbd_lengths == "unit") g = g.unit_lengths();
            else if (cbd_lengths == "exp")
                for (int i = 0; i < g.m(); ++i) g.set_length(i, rng.exponential());
            const auto res = cbd_infty(g, rng);
            Output o;
            auto& out = o.get(cbd_out);
            if (cbd_emit == "tree") {
                write_edge_list(out, res.tree);
            } else {
                out << "rank,edge,action\n";
                for (std::size_t i = 0; i < res.order.size(); ++i)
                    out << i << ',' << res.order[i] << ',' << (res.kept[res.order[i]] ? "mark" : "remove") << '\n';
            }
        } else if (*perc_cmd) {
            RunRecord rec;
            for (long long r = 0; r < perc_reps; ++r) {
                auto rng = Rng::stream(perc_seed, static_cast<std::uint64_t>(r), tag("percolate"));
                const std::string ex = "percolate_" + perc_emit;
                if (perc_emit == "histogram") {
                    const auto g = regular_configuration_model(perc_n, 3, rng);
                    const auto out = perc(g, critical_survival(perc_n, perc_lambda), rng);
                    const auto deg = out.surviving.degrees();
                    std::vector<double> h(4, 0.0);
                    for (int d : deg) h[d] += 1.0 / perc_n;
                    for (int k = 0; k < 4; ++k) rec.add(ex, r, "degree_" + std::to_string(k), h[k]);
                    const auto row = census_of(out.surviving);
                    rec.add(ex, r, "largest_over_n23", row.size_scaled);
                    rec.add(ex, r, "largest_surplus", static_cast<double>(row.surplus));
                } else {
                    const auto pl = g1_pipeline(perc_n, perc_lambda, rng);
                    rec.add(ex, r, "connected", pl.connected);
                    rec.add(ex, r, "t", pl.t);
                    rec.add(ex, r, "draws", static_cast<double>(pl.draws));
                    rec.add(ex, r, "g1_vertices", static_cast<double>(pl.g1_vertices.size()));
                    rec.add(ex, r, "g1_surplus", static_cast<double>(surplus(pl.g1)));
                    if (perc_emit == "measures") {
                        const auto ms = attach_avail_measures(pl);
                        double amax = 0.0, avail_sum = 0.0;
                        long long slots = 0;
                        for (double a : ms.attach) amax = std::max(amax, a);
                        for (double a : ms.avail) avail_sum += a;
                        for (int d : ms.d_avail) slots += d;
                        rec.add(ex, r, "attach_max", amax);
                        rec.add(ex, r, "avail_total", avail_sum);
                        rec.add(ex, r, "available_half_edges", static_cast<double>(slots));
                    }
                }
            }
            emit_records(rec, {{"n", std::to_string(perc_n)}, {"lambda", std::to_string(perc_lambda)},
                               {"seed", std::to_string(perc_seed)}, {"emit", perc_emit}},
                         perc_out, false);
        } else if (*cont) {
            auto rng = Rng::stream(cont_seed, 0, tag("continuum"));
            FiniteMetricMeasureSpace x(1);
            if (object == "crt") x = sample_crt(grid, points, rng);
            else if (object == "hs") x = construct_H_s(cont_s, grid, points, rng).space;
            else x = construct_H_s_tilted(cont_s, grid, points, rng).space;
            Output o;
            write_space(o.get(cont_out), x);
        } else if (*exp) {
            const auto c = ExperimentConfig::from_map(merged(config, flags));
            const auto t0 = std::chrono::steady_clock::now();
            const auto rec = run_experiment(c);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            emit_records(rec, c.as_map(), c.output);
            if (!json_out.empty()) {
                auto j = nlohmann::json{{"config", c.as_map()}, {"version", kVersion}, {"wall_clock_seconds", secs},
                                        {"statistics", summary_json(rec)}};
                std::ofstream(json_out) << j.dump(2) << '\n';
            }
        } else if (*ver) {
            const auto suite = run_suite(ver_seed, &std::cerr, only);
            for (const auto& r : suite.results) std::cout << verdict_line(r) << '\n';
            emit_records(suite.record, {{"seed", std::to_string(ver_seed)}}, ver_out);
            return suite.all_pass() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "mstlab: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
