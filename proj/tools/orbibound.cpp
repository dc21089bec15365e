#include "orbi/algebraic.hpp"
#include "orbi/embedding.hpp"
#include "orbi/errors.hpp"
#include "orbi/hypgeom.hpp"
#include "orbi/io.hpp"
#include "orbi/pipeline.hpp"
#include "orbi/simplicial.hpp"
#include "orbi/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::ordered_json;

struct GlobalArgs {
    std::string config_path;
    std::string json_out;
    std::uint64_t seed = 1;
    bool seed_set = false;
};

orbi::pipeline::PipelineConfig load_config(const GlobalArgs& args) {
    std::map<std::string, std::string> overrides;
    if (!args.config_path.empty())
        overrides = orbi::io::parse_config(orbi::io::slurp_file(args.config_path));
    auto cfg = orbi::pipeline::PipelineConfig::from_overrides(overrides);
    if (args.seed_set) {
        cfg.seed = args.seed;
        cfg.configured_keys.insert("seed");
    }
    return cfg;
}

void emit(const GlobalArgs& args, const ordered_json& j) {
    const std::string text = j.dump(2) + "\n";
    if (args.json_out.empty())
        std::cout << text;
    else
        orbi::io::spit_file(args.json_out, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale toolkit for hyperbolic orbifold bound computations"};
    app.require_subcommand(1);

    GlobalArgs global;
    app.add_option("--config", global.config_path, "key=value configuration file");
    app.add_option("--json-out", global.json_out, "write the JSON report to this path");
    app.add_option("--seed", global.seed, "random seed")->each([&](const std::string&) {
        global.seed_set = true;
    });

    // mahler ------------------------------------------------------------------
    auto* mahler = app.add_subcommand("mahler", "Mahler measure of an integer polynomial");
    std::string mahler_coeffs, mahler_file;
    double mahler_precision = 1e-9;
    mahler->add_option("--coeffs", mahler_coeffs,
                       "space-separated integer coefficients, constant term first");
    mahler->add_option("--coeffs-file", mahler_file, "file with the coefficients");
    mahler->add_option("--precision", mahler_precision, "absolute output tolerance");

    // bounds ------------------------------------------------------------------
    auto* bounds = app.add_subcommand("bounds", "number-theoretic bound chain");
    double bounds_volume = 0.0;
    std::uint32_t bounds_deg_k = 0;
    bounds->add_option("--volume", bounds_volume, "orbifold volume");
    bounds->add_option("--deg-k", bounds_deg_k, "degree of the field of definition");

    // net ---------------------------------------------------------------------
    auto* net = app.add_subcommand("net", "maximal epsilon-separated net in a ball");
    double net_radius = 1.0, net_eps = 0.2;
    std::string net_seeds_file, net_points_out = "net_points.txt";
    net->add_option("--radius", net_radius, "ball radius");
    net->add_option("--epsilon", net_eps, "separation epsilon");
    net->add_option("--seeds", net_seeds_file, "file of mandatory seed points");
    net->add_option("--points-out", net_points_out, "output point file");

    // delaunay ----------------------------------------------------------------
    auto* delaunay = app.add_subcommand("delaunay", "hyperbolic Delaunay triangulation");
    std::string del_in, del_out = "complex.txt";
    delaunay->add_option("--in", del_in, "input point file")->required();
    delaunay->add_option("--out", del_out, "output complex file");

    // complex -----------------------------------------------------------------
    auto* complex_cmd = app.add_subcommand("complex", "simplicial complex checks");
    auto* complex_check = complex_cmd->add_subcommand("check", "validate a complex and marking");
    std::string cx_file, cx_marking;
    complex_check->add_option("--complex", cx_file, "complex file")->required();
    complex_check->add_option("--marking", cx_marking, "marking file");

    // spectral ----------------------------------------------------------------
    auto* spectral_cmd = app.add_subcommand("spectral", "graph spectral/Cheeger report");
    std::string sp_graph, sp_mode = "exact";
    spectral_cmd->add_option("--graph", sp_graph, "edge-list graph file")->required();
    spectral_cmd->add_option("--mode", sp_mode, "exact|sweep")
        ->check(CLI::IsMember({"exact", "sweep"}));

    // embed -------------------------------------------------------------------
    auto* embed_cmd = app.add_subcommand("embed", "thick-embed a graph");
    std::string em_graph, em_cycles, em_out = "embedding.txt";
    int em_dim = 3;
    embed_cmd->add_option("--graph", em_graph, "edge-list graph file")->required();
    embed_cmd->add_option("--dim", em_dim, "ambient dimension");
    embed_cmd->add_option("--cycles", em_cycles, "file of base cycles, one per line");
    embed_cmd->add_option("--out", em_out, "output embedding file");

    // tube --------------------------------------------------------------------
    auto* tube_cmd = app.add_subcommand("tube", "Monte-Carlo tube volume");
    std::string tb_embedding;
    double tb_thickness = 1.0;
    std::uint64_t tb_samples = 100000;
    tube_cmd->add_option("--embedding", tb_embedding, "embedding file")->required();
    tube_cmd->add_option("--thickness", tb_thickness, "tube radius T");
    tube_cmd->add_option("--samples", tb_samples, "sample budget");

    // slice -------------------------------------------------------------------
    auto* slice_cmd = app.add_subcommand("slice", "search for a thin slicing direction");
    std::string sl_embedding;
    double sl_thickness = 1.0;
    int sl_budget = 64;
    slice_cmd->add_option("--embedding", sl_embedding, "embedding file")->required();
    slice_cmd->add_option("--thickness", sl_thickness, "tube radius T");
    slice_cmd->add_option("--budget", sl_budget, "direction budget");

    // gg-check ----------------------------------------------------------------
    auto* gg_cmd = app.add_subcommand("gg-check", "evaluate the main inequality");
    double gg_lambda1 = 0.75, gg_vhyp = 1.0, gg_t = 1.0, gg_vt = 1.0, gg_cn = 1.0;
    int gg_n = 30;
    gg_cmd->add_option("--lambda1", gg_lambda1, "spectral gap");
    gg_cmd->add_option("--vhyp", gg_vhyp, "hyperbolic volume");
    gg_cmd->add_option("--thickness", gg_t, "embedding thickness T");
    gg_cmd->add_option("--vt", gg_vt, "tube volume V_T");
    gg_cmd->add_option("--dim", gg_n, "ambient dimension n");
    gg_cmd->add_option("--cn", gg_cn, "dimension constant c_n");

    // pipeline ----------------------------------------------------------------
    auto* pipeline_cmd = app.add_subcommand("pipeline", "end-to-end demo and covolume chain");
    std::string pl_graph, pl_artifacts;
    pipeline_cmd->add_option("--graph", pl_graph, "skip geometry stages and embed this graph");
    pipeline_cmd->add_option("--artifacts-dir", pl_artifacts,
                             "write intermediate point/complex/graph/embedding files here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto cfg = load_config(global);

        if (mahler->parsed()) {
            std::string text = mahler_coeffs;
            if (!mahler_file.empty()) text = orbi::io::slurp_file(mahler_file);
            if (text.empty())
                throw orbi::PreconditionError("give the polynomial via --coeffs or --coeffs-file");
            const auto poly = orbi::algebraic::IntPolynomial::parse(text);
            const double m = orbi::algebraic::mahler_measure(poly, mahler_precision);
            emit(global, ordered_json{{"mahler", m},
                                      {"degree", poly.degree()},
                                      {"log_mahler_nat", std::log(m)},
                                      {"log_mahler_base2", std::log2(m)}});
        } else if (bounds->parsed()) {
            ordered_json j;
            const auto& c = cfg.constants;
            if (bounds_volume > 0.0) {
                j["volume"] = bounds_volume;
                j["deg_k_bound"] = orbi::algebraic::degree_bound_from_volume(bounds_volume, c);
                j["r_inj_bound"] = orbi::algebraic::injectivity_radius_bound(bounds_volume, c);
            }
            if (bounds_deg_k > 0) {
                j["deg_k"] = bounds_deg_k;
                j["finite_subgroup_order_bound"] =
                    orbi::algebraic::finite_subgroup_order_bound(bounds_deg_k, c);
                if (2 * bounds_deg_k >= 4)
                    j["dobrowolski_bound"] =
                        orbi::algebraic::dobrowolski_bound(static_cast<int>(2 * bounds_deg_k), c);
            }
            if (j.empty())
                throw orbi::PreconditionError("give --volume and/or --deg-k");
            emit(global, j);
        } else if (net->parsed()) {
            std::vector<orbi::hypgeom::HPoint> seeds;
            if (!net_seeds_file.empty())
                seeds = orbi::io::read_points(orbi::io::slurp_file(net_seeds_file));
            const orbi::hypgeom::BallDomain domain{orbi::hypgeom::HPoint::origin(), net_radius};
            const auto result = orbi::hypgeom::epsilon_net(domain, net_eps, seeds, cfg.seed);
            orbi::io::spit_file(net_points_out, orbi::io::write_points(result.points));
            emit(global, ordered_json{{"points", result.points.size()},
                                      {"epsilon", result.epsilon},
                                      {"seeds", result.seed_indices.size()},
                                      {"declared_maximal", result.declared_maximal},
                                      {"candidates_tried", result.candidates_tried},
                                      {"points_file", net_points_out}});
        } else if (delaunay->parsed()) {
            const auto points = orbi::io::read_points(orbi::io::slurp_file(del_in));
            const auto result = orbi::hypgeom::delaunay(points);
            orbi::io::spit_file(del_out, orbi::io::write_complex(result.complex));
            emit(global, ordered_json{{"vertices", result.complex.count(0)},
                                      {"edges", result.complex.count(1)},
                                      {"faces", result.complex.count(2)},
                                      {"tetrahedra", result.complex.count(3)},
                                      {"jitter_applied", result.jitter_applied},
                                      {"complex_file", del_out}});
        } else if (complex_check->parsed()) {
            const auto k = orbi::io::read_complex(orbi::io::slurp_file(cx_file));
            orbi::simplicial::MarkedSingularSet marking;
            if (!cx_marking.empty())
                marking = orbi::io::read_marking(orbi::io::slurp_file(cx_marking));
            const auto validation = orbi::simplicial::validate_good_triangulation(k, marking);
            const auto counts = orbi::simplicial::manifold_count_check(k);
            emit(global,
                 ordered_json{
                     {"good_triangulation", validation.pass},
                     {"violations", validation.violations},
                     {"counts",
                      {{"vertices", counts.vertices},
                       {"edges", counts.edges},
                       {"faces", counts.faces},
                       {"tetrahedra", counts.tetrahedra},
                       {"euler_characteristic", counts.euler_characteristic},
                       {"closed_manifold_count_identity", counts.faces_equal_twice_tets},
                       {"boundary_faces", counts.boundary_faces},
                       {"incidence_identity", counts.incidence_identity},
                       {"max_vertex_degree", counts.max_vertex_degree}}},
                     {"simplex_count_bound",
                      counts.max_vertex_degree >= 2
                          ? ordered_json(orbi::simplicial::simplex_count_bound(
                                counts.vertices, counts.max_vertex_degree))
                          : ordered_json(nullptr)}});
        } else if (spectral_cmd->parsed()) {
            const auto g = orbi::io::read_graph(orbi::io::slurp_file(sp_graph));
            const auto mode = sp_mode == "exact" ? orbi::spectral::CheegerMode::exact
                                                 : orbi::spectral::CheegerMode::sweep;
            const double h = orbi::spectral::cheeger_constant(g, mode);
            const double l1 = orbi::spectral::lambda1(g);
            emit(global, ordered_json{{"h", h},
                                      {"lambda1", l1},
                                      {"mode", sp_mode},
                                      {"sandwich_lhs", 0.5 * h * h},
                                      {"sandwich_rhs", 2.0 * h},
                                      {"continuous_lhs", 0.25 * h * h},
                                      {"continuous_rhs", 4.0 * h + 10.0 * h * h}});
        } else if (embed_cmd->parsed()) {
            const auto g = orbi::io::read_graph(orbi::io::slurp_file(em_graph));
            std::vector<std::vector<std::uint32_t>> cycles;
            if (!em_cycles.empty()) {
                std::istringstream in(orbi::io::slurp_file(em_cycles));
                std::string line;
                while (std::getline(in, line)) {
                    std::istringstream ls(line);
                    std::vector<std::uint32_t> cycle;
                    std::uint32_t v;
                    while (ls >> v) cycle.push_back(v);
                    if (!cycle.empty()) cycles.push_back(cycle);
                }
            }
            const auto embedded = orbi::embedding::thick_embed(g, em_dim, cycles);
            orbi::io::spit_file(em_out, orbi::io::write_embedding(embedded));
            emit(global, ordered_json{{"ambient_dim", embedded.ambient_dim},
                                      {"vertices", embedded.coords.size()},
                                      {"edges", embedded.edges.size()},
                                      {"max_degree", embedded.max_degree()},
                                      {"embedding_file", em_out}});
        } else if (tube_cmd->parsed()) {
            const auto e = orbi::io::read_embedding(orbi::io::slurp_file(tb_embedding));
            const auto est = orbi::embedding::tube_volume(e, tb_thickness, tb_samples, cfg.seed);
            emit(global, ordered_json{{"value", est.value},
                                      {"half_width", est.half_width},
                                      {"samples", est.samples},
                                      {"hits", est.hits},
                                      {"box_volume", est.box_volume},
                                      {"seed", est.seed}});
        } else if (slice_cmd->parsed()) {
            const auto e = orbi::io::read_embedding(orbi::io::slurp_file(sl_embedding));
            const auto result =
                orbi::embedding::slice_search(e, sl_thickness, sl_budget, cfg.seed);
            std::vector<double> dir(result.direction.data(),
                                    result.direction.data() + result.direction.size());
            emit(global, ordered_json{{"direction", dir},
                                      {"max_cross_section", result.max_cross_section},
                                      {"offsets_evaluated", result.offsets.size()},
                                      {"method", result.method}});
        } else if (gg_cmd->parsed()) {
            const auto r =
                orbi::embedding::gromov_guth_evaluate(gg_lambda1, gg_vhyp, gg_t, gg_vt, gg_n, gg_cn);
            emit(global, ordered_json{{"lhs", r.lhs},
                                      {"rhs", r.rhs},
                                      {"holds", r.holds},
                                      {"lambda1", r.lambda1},
                                      {"v_hyp", r.v_hyp},
                                      {"thickness", r.thickness},
                                      {"v_tube", r.v_tube},
                                      {"n", r.n},
                                      {"cn", r.cn}});
        } else if (pipeline_cmd->parsed()) {
            std::optional<orbi::spectral::WeightedGraph> graph;
            if (!pl_graph.empty())
                graph = orbi::io::read_graph(orbi::io::slurp_file(pl_graph));
            const auto report = orbi::pipeline::end_to_end_demo(cfg, graph);
            if (!pl_artifacts.empty()) {
                namespace fs = std::filesystem;
                fs::create_directories(pl_artifacts);
                const fs::path dir(pl_artifacts);
                if (!graph) {
                    orbi::io::spit_file((dir / "net_points.txt").string(),
                                        orbi::io::write_points(report.net.points));
                    orbi::io::spit_file((dir / "complex.txt").string(),
                                        orbi::io::write_complex(report.complex));
                }
                orbi::io::spit_file((dir / "graph.txt").string(),
                                    orbi::io::write_graph(report.graph));
                orbi::io::spit_file((dir / "embedding.txt").string(),
                                    orbi::io::write_embedding(report.embedded));
            }
            emit(global, report.to_json());
        }
        return 0;
    } catch (const orbi::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const orbi::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
