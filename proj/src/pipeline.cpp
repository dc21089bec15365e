#include "orbi/pipeline.hpp"
#include "orbi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orbi::pipeline {

using nlohmann::ordered_json;

void PipelineConfig::validate() const {
    constants.validate();
    if (n < 7) throw PreconditionError("ambient dimension n must be >= 7");
    if (!(exponent_epsilon > 0.0)) throw PreconditionError("exponent_epsilon must be positive");
    if (!(thickness > 0.0)) throw PreconditionError("thickness must be positive");
    const double gap =
        static_cast<double>(n) / static_cast<double>(n - 1) - (1.0 + exponent_epsilon);
    if (!(gap > 0.0)) {
        std::ostringstream out;
        out << "solvability condition n/(n-1) - (1 + exponent_epsilon) > 0 fails: " << n << "/"
            << (n - 1) << " - " << (1.0 + exponent_epsilon) << " = " << gap;
        throw PreconditionError(out.str());
    }
    if (!(reference_volume > 1.0))
        throw PreconditionError("reference volume must exceed 1");
    if (samples < 1000) throw PreconditionError("sample budget must be >= 1000");
    if (!(demo_radius > 0.0) || !(demo_net_epsilon > 0.0))
        throw PreconditionError("demo radius and net epsilon must be positive");
    if (demo_embed_dim < 7)
        throw PreconditionError("demo embedding dimension must be >= 7");
}

PipelineConfig PipelineConfig::from_overrides(const std::map<std::string, std::string>& overrides) {
    PipelineConfig cfg;
    auto as_double = [](const std::string& key, const std::string& value) {
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            return v;
        } catch (const std::exception&) {
            throw PreconditionError("config value for " + key + " is not a number: " + value);
        }
    };
    for (const auto& [key, value] : overrides) {
        const double v = as_double(key, value);
        if (key == "n") cfg.n = static_cast<int>(v);
        else if (key == "exponent_epsilon") cfg.exponent_epsilon = v;
        else if (key == "thickness") cfg.thickness = v;
        else if (key == "volume") cfg.reference_volume = v;
        else if (key == "net_epsilon") cfg.net_epsilon = v;
        else if (key == "demo_radius") cfg.demo_radius = v;
        else if (key == "demo_net_epsilon") cfg.demo_net_epsilon = v;
        else if (key == "demo_embed_dim") cfg.demo_embed_dim = static_cast<int>(v);
        else if (key == "samples") cfg.samples = static_cast<std::uint64_t>(v);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(v);
        else if (key == "c1") cfg.constants.c1 = v;
        else if (key == "c2") cfg.constants.c2 = v;
        else if (key == "c3") cfg.constants.c3 = v;
        else if (key == "c4") cfg.constants.c4 = v;
        else if (key == "c5") cfg.constants.c5 = v;
        else if (key == "margulis_mu3") cfg.constants.margulis_mu3 = v;
        else if (key == "lambda1_floor") cfg.constants.lambda1_floor = v;
        else if (key == "cn") cfg.constants.cn = v;
        else if (key == "cDn") cfg.constants.cDn = v;
        else if (key == "symmetry_multiplier") cfg.constants.symmetry_multiplier = v;
        else throw PreconditionError("unknown config key: " + key);
        cfg.configured_keys.insert(key);
    }
    return cfg;
}

namespace {

std::string provenance(const PipelineConfig& cfg, const std::string& key) {
    return cfg.configured_keys.count(key) ? "configured" : "default";
}

ordered_json constant_entry(const PipelineConfig& cfg, const std::string& key, double value) {
    return ordered_json{{"value", value}, {"provenance", provenance(cfg, key)}};
}

}  // namespace

CovolumeReport covolume_bound(const PipelineConfig& config) {
    config.validate();
    CovolumeReport r;
    r.config = config;
    const auto& c = config.constants;
    const double n_ratio = static_cast<double>(config.n) / static_cast<double>(config.n - 1);
    r.exponent_gap = n_ratio - (1.0 + config.exponent_epsilon);
    r.covolume_bound =
        std::pow(c.cn * c.cDn * std::pow(c.lambda1_floor, -n_ratio), 1.0 / r.exponent_gap);

    // the chain at the reference volume
    const double v = config.reference_volume;
    r.deg_k_bound = algebraic::degree_bound_from_volume(v, c);
    r.degree_d_bound = 2.0 * r.deg_k_bound;
    r.r_inj_bound = algebraic::injectivity_radius_bound(v, c);
    if (r.degree_d_bound >= 4.0)
        r.dobrowolski_value = 2.0 * r.r_inj_bound;  // ell(gamma) = 2 r_inj at the bound
    const auto deg_k_floor = static_cast<std::uint32_t>(std::max(1.0, std::floor(r.deg_k_bound)));
    r.m_bound = algebraic::finite_subgroup_order_bound(deg_k_floor, c);
    r.net_epsilon = config.net_epsilon > 0.0
                        ? config.net_epsilon
                        : 0.1 * std::min(r.r_inj_bound, c.margulis_mu3);
    const auto [vertex_bound, degree_bound] = hypgeom::net_cardinality_and_degree_bounds(
        static_cast<std::uint32_t>(std::min<std::uint64_t>(r.m_bound, 1u << 30)), v,
        r.net_epsilon);
    r.vertex_bound = vertex_bound;
    r.degree_bound = degree_bound;
    r.simplex_bound = r.vertex_bound * (r.degree_bound - 1.0);
    r.min_volume_bound =
        std::pow(std::max(1.0, r.simplex_bound), 1.0 / (1.0 + config.exponent_epsilon));
    r.tube_bound = c.cDn * r.simplex_bound;
    r.gg = embedding::gromov_guth_evaluate(c.lambda1_floor, v, config.thickness, r.tube_bound,
                                           config.n, c.cn);
    return r;
}

ordered_json CovolumeReport::to_json() const {
    const auto& cfg = config;
    ordered_json constants = {
        {"c1", constant_entry(cfg, "c1", cfg.constants.c1)},
        {"c2", constant_entry(cfg, "c2", cfg.constants.c2)},
        {"c3", constant_entry(cfg, "c3", cfg.constants.c3)},
        {"c4", constant_entry(cfg, "c4", cfg.constants.c4)},
        {"c5", constant_entry(cfg, "c5", cfg.constants.c5)},
        {"margulis_mu3", constant_entry(cfg, "margulis_mu3", cfg.constants.margulis_mu3)},
        {"lambda1_floor", constant_entry(cfg, "lambda1_floor", cfg.constants.lambda1_floor)},
        {"cn", constant_entry(cfg, "cn", cfg.constants.cn)},
        {"cDn", constant_entry(cfg, "cDn", cfg.constants.cDn)},
        {"symmetry_multiplier",
         constant_entry(cfg, "symmetry_multiplier", cfg.constants.symmetry_multiplier)},
    };
    return ordered_json{
        {"config",
         {{"n", cfg.n},
          {"exponent_epsilon", cfg.exponent_epsilon},
          {"thickness", cfg.thickness},
          {"reference_volume", cfg.reference_volume},
          {"seed", cfg.seed},
          {"samples", cfg.samples}}},
        {"constants", constants},
        {"exponent_gap", exponent_gap},
        {"covolume_bound", covolume_bound},
        {"chain",
         {{"deg_k_bound", deg_k_bound},
          {"degree_d_bound", degree_d_bound},
          {"dobrowolski_value", dobrowolski_value},
          {"r_inj_bound", r_inj_bound},
          {"m_bound", m_bound},
          {"net_epsilon",
           {{"value", net_epsilon},
            {"provenance",
             cfg.net_epsilon > 0.0 ? provenance(cfg, "net_epsilon") : "derived"}}},
          {"vertex_bound", vertex_bound},
          {"degree_bound", degree_bound},
          {"simplex_bound", simplex_bound},
          {"min_volume_bound", min_volume_bound},
          {"tube_bound", tube_bound},
          {"gg_lhs", gg.lhs},
          {"gg_rhs", gg.rhs},
          {"gg_holds", gg.holds}}},
    };
}

namespace {

template <typename F>
auto stage(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        throw PreconditionError("stage " + name + ": " + e.what());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError("stage " + name + ": " + e.what());
    }
}

}  // namespace

DemoReport end_to_end_demo(const PipelineConfig& config,
                           const std::optional<spectral::WeightedGraph>& graph_input) {
    config.validate();
    DemoReport report;
    report.covolume = stage("covolume", [&] { return covolume_bound(config); });

    if (!graph_input) {
        report.net = stage("net", [&] {
            const hypgeom::BallDomain domain{hypgeom::HPoint::origin(), config.demo_radius};
            return hypgeom::epsilon_net(domain, config.demo_net_epsilon, {}, config.seed);
        });
        auto delaunay_result = stage("delaunay", [&] {
            return hypgeom::delaunay(report.net.points);
        });
        report.complex = std::move(delaunay_result.complex);
        report.delaunay_jitter = delaunay_result.jitter_applied;

        stage("triangulation-check", [&] {
            report.triangulation_check =
                simplicial::validate_good_triangulation(report.complex, {});
            if (!report.triangulation_check.pass)
                throw PreconditionError("good-triangulation containment failed");
            report.counts = simplicial::manifold_count_check(report.complex);
            return 0;
        });

        report.graph = stage("graph-extraction", [&] {
            spectral::WeightedGraph g;
            g.vertex_count = report.complex.vertex_count();
            for (const auto& s : report.complex.simplices(1)) {
                const auto& pa = report.net.points[s[0]];
                const auto& pb = report.net.points[s[1]];
                g.edges.push_back({s[0], s[1], hypgeom::hyp_distance(pa, pb)});
            }
            g.validate();
            return g;
        });
    } else {
        report.graph = *graph_input;
    }

    report.spectral_report = stage("spectral", [&] {
        return spectral::cheeger_buser_report(report.graph);
    });

    report.embedded = stage("embed", [&] {
        return embedding::thick_embed(report.graph, config.demo_embed_dim, {});
    });

    report.tube = stage("tube", [&] {
        return embedding::tube_volume(report.embedded, config.thickness, config.samples,
                                      config.seed);
    });

    report.demo_gg = stage("inequality", [&] {
        const std::uint64_t n_simplices =
            graph_input ? report.graph.edges.size() + report.graph.vertex_count
                        : report.complex.total_simplices();
        const double v_hyp =
            simplicial::min_volume_from_complexity(n_simplices, config.exponent_epsilon);
        return embedding::gromov_guth_evaluate(config.constants.lambda1_floor, v_hyp,
                                               config.thickness, report.tube.value,
                                               config.demo_embed_dim, config.constants.cn);
    });

    return report;
}

ordered_json DemoReport::to_json() const {
    ordered_json j;
    j["covolume"] = covolume.to_json();
    j["net"] = {{"points", net.points.size()},
                {"epsilon", net.epsilon},
                {"declared_maximal", net.declared_maximal},
                {"candidates_tried", net.candidates_tried}};
    j["complex"] = {{"vertices", complex.count(0)},
                    {"edges", complex.count(1)},
                    {"faces", complex.count(2)},
                    {"tetrahedra", complex.count(3)},
                    {"delaunay_jitter", delaunay_jitter},
                    {"good_triangulation", triangulation_check.pass},
                    {"euler_characteristic", counts.euler_characteristic},
                    {"closed_manifold_count_identity", counts.faces_equal_twice_tets},
                    {"max_vertex_degree", counts.max_vertex_degree}};
    j["spectral"] = {{"h", spectral_report.h},
                     {"lambda1", spectral_report.lambda1},
                     {"mode",
                      spectral_report.mode_used == spectral::CheegerMode::exact ? "exact"
                                                                                : "sweep"},
                     {"sandwich_lhs", spectral_report.sandwich_lhs},
                     {"sandwich_rhs", spectral_report.sandwich_rhs},
                     {"sandwich_holds", spectral_report.sandwich_holds},
                     {"provenance", "measured"}};
    j["embedding"] = {{"ambient_dim", embedded.ambient_dim},
                      {"vertices", embedded.coords.size()},
                      {"edges", embedded.edges.size()},
                      {"max_degree", embedded.max_degree()}};
    j["tube"] = {{"value", tube.value},
                 {"half_width", tube.half_width},
                 {"samples", tube.samples},
                 {"hits", tube.hits},
                 {"box_volume", tube.box_volume},
                 {"seed", tube.seed},
                 {"provenance", "measured"}};
    j["inequality"] = {{"lhs", demo_gg.lhs},
                       {"rhs", demo_gg.rhs},
                       {"holds", demo_gg.holds},
                       {"lambda1", demo_gg.lambda1},
                       {"v_hyp", demo_gg.v_hyp},
                       {"v_tube", demo_gg.v_tube},
                       {"n", demo_gg.n}};
    return j;
}

}  // namespace orbi::pipeline
