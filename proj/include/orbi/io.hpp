#pragma once

#include "orbi/embedding.hpp"
#include "orbi/hypgeom.hpp"
#include "orbi/simplicial.hpp"
#include "orbi/spectral.hpp"

#include <map>
#include <string>
#include <vector>

namespace orbi::io {

/// Format a double so it round-trips and always carries a decimal point or
/// exponent (keeps coordinate lines distinguishable from index lines).
std::string format_double(double v);

// Point files: one point per line, 4 hyperboloid coordinates.
std::string write_points(const std::vector<hypgeom::HPoint>& points);
std::vector<hypgeom::HPoint> read_points(const std::string& text);

// Complex files: header "V E F T", optional vertex coordinate lines, then
// simplex lines "dim i [j [k [l]]]".
std::string write_complex(const simplicial::SimplicialComplex3& k);
simplicial::SimplicialComplex3 read_complex(const std::string& text);

// Marking files: lines "v <index>" and "e <i> <j> <label>".
std::string write_marking(const simplicial::MarkedSingularSet& s);
simplicial::MarkedSingularSet read_marking(const std::string& text);

// Graph files: edge-list lines "i j w".
std::string write_graph(const spectral::WeightedGraph& g);
spectral::WeightedGraph read_graph(const std::string& text);

// Vertex function files: one value per line.
std::vector<double> read_values(const std::string& text);

// Embedding files: header "n T", vertex coordinate lines, edge index pairs.
std::string write_embedding(const embedding::EmbeddedComplex& e);
embedding::EmbeddedComplex read_embedding(const std::string& text);

// Plain key=value configuration lines ('#' starts a comment).
std::map<std::string, std::string> parse_config(const std::string& text);

std::string slurp_file(const std::string& path);
void spit_file(const std::string& path, const std::string& content);

}  // namespace orbi::io
