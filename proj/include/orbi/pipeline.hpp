#pragma once

#include "orbi/algebraic.hpp"
#include "orbi/embedding.hpp"
#include "orbi/hypgeom.hpp"
#include "orbi/simplicial.hpp"
#include "orbi/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace orbi::pipeline {

/// Full configuration of the bound chain and the demo pipeline. Every value
/// has a documented default; configured_keys records which ones were set
/// explicitly so reports can state provenance.
struct PipelineConfig {
    int n = 30;                      ///< ambient dimension of the embedding
    double exponent_epsilon = 0.01;  ///< triangulation-size exponent epsilon
    double thickness = 1.0;
    double reference_volume = 1.0e6; ///< volume at which the chain is evaluated
    double net_epsilon = 0.0;        ///< <= 0: derive min(r_inj, mu3)/10
    algebraic::BoundConstants constants;

    // demo stage parameters
    double demo_radius = 0.8;
    double demo_net_epsilon = 0.2;
    int demo_embed_dim = 7;
    std::uint64_t samples = 2000000;
    std::uint64_t seed = 1;

    std::set<std::string> configured_keys;

    void validate() const;

    /// Apply key=value overrides (keys match the field names above and the
    /// constant names c1..c5, margulis_mu3, lambda1_floor, cn, cDn,
    /// symmetry_multiplier).
    static PipelineConfig from_overrides(const std::map<std::string, std::string>& overrides);
};

/// The evaluated inequality chain. Self-contained: recomputable from the
/// config alone.
struct CovolumeReport {
    PipelineConfig config;
    double exponent_gap = 0.0;        // n/(n-1) - (1 + eps)
    double covolume_bound = 0.0;      // C
    // chain at the reference volume
    double deg_k_bound = 0.0;         // c2 log2 V + c3
    double degree_d_bound = 0.0;      // 2 deg_k
    double dobrowolski_value = 0.0;   // c1 (log2 log2 d / log2 d)^3 at d = degree_d_bound
    double r_inj_bound = 0.0;
    std::uint64_t m_bound = 0;
    double net_epsilon = 0.0;
    double vertex_bound = 0.0;
    double degree_bound = 0.0;
    double simplex_bound = 0.0;
    double min_volume_bound = 0.0;    // simplex_bound^(1/(1+eps))
    double tube_bound = 0.0;          // cDn * simplex_bound
    embedding::GromovGuthReport gg;

    nlohmann::ordered_json to_json() const;
};

/// Compute the exponent gap, the covolume bound C, and the rest of the chain
/// at the configured reference volume.
CovolumeReport covolume_bound(const PipelineConfig& config);

/// Everything the demo produced, including the intermediate artifacts.
struct DemoReport {
    CovolumeReport covolume;
    hypgeom::NetResult net;
    bool delaunay_jitter = false;
    simplicial::SimplicialComplex3 complex;
    simplicial::GoodTriangulationReport triangulation_check;
    simplicial::ManifoldCountReport counts;
    spectral::WeightedGraph graph;
    spectral::CheegerBuserReport spectral_report;
    embedding::EmbeddedComplex embedded;
    embedding::TubeEstimate tube;
    embedding::GromovGuthReport demo_gg;

    nlohmann::ordered_json to_json() const;
};

/// net -> delaunay -> good-triangulation check -> graph extraction ->
/// thick_embed -> tube_volume -> inequality -> covolume chain. A failing
/// stage aborts with a stage-tagged error. Passing a graph skips the
/// geometry stages and embeds it directly.
DemoReport end_to_end_demo(const PipelineConfig& config,
                           const std::optional<spectral::WeightedGraph>& graph_input = {});

}  // namespace orbi::pipeline
