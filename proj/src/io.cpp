#include "orbi/io.hpp"
#include "orbi/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace orbi::io {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (tokenize(line).empty()) continue;
        lines.push_back(line);
    }
    return lines;
}

double parse_double(const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw PreconditionError("trailing characters in number: " + tok);
        return v;
    } catch (const PreconditionError&) {
        throw;
    } catch (const std::exception&) {
        throw PreconditionError("could not parse number: " + tok);
    }
}

long long parse_int(const std::string& tok) {
    long long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw PreconditionError("could not parse integer: " + tok);
    return v;
}

bool looks_integral(const std::string& tok) {
    return tok.find_first_of(".eEnN") == std::string::npos;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEnN") == std::string::npos) s += ".0";
    return s;
}

std::string write_points(const std::vector<hypgeom::HPoint>& points) {
    std::ostringstream out;
    for (const auto& p : points)
        out << format_double(p.x0) << ' ' << format_double(p.x1) << ' ' << format_double(p.x2)
            << ' ' << format_double(p.x3) << '\n';
    return out.str();
}

std::vector<hypgeom::HPoint> read_points(const std::string& text) {
    std::vector<hypgeom::HPoint> points;
    for (const auto& line : data_lines(text)) {
        const auto toks = tokenize(line);
        if (toks.size() != 4)
            throw PreconditionError("point line must have 4 coordinates: " + line);
        points.push_back(hypgeom::HPoint::from_coords(parse_double(toks[0]), parse_double(toks[1]),
                                                      parse_double(toks[2]),
                                                      parse_double(toks[3])));
    }
    return points;
}

std::string write_complex(const simplicial::SimplicialComplex3& k) {
    std::ostringstream out;
    out << k.count(0) << ' ' << k.count(1) << ' ' << k.count(2) << ' ' << k.count(3) << '\n';
    if (!k.coordinates.empty()) {
        for (const auto& c : k.coordinates) {
            for (std::size_t i = 0; i < c.size(); ++i)
                out << (i ? " " : "") << format_double(c[i]);
            out << '\n';
        }
    }
    for (int d = 0; d < 4; ++d)
        for (const auto& s : k.simplices(d)) {
            out << d;
            for (auto v : s) out << ' ' << v;
            out << '\n';
        }
    return out.str();
}

simplicial::SimplicialComplex3 read_complex(const std::string& text) {
    const auto lines = data_lines(text);
    if (lines.empty()) throw PreconditionError("empty complex file");
    const auto header = tokenize(lines[0]);
    if (header.size() != 4) throw PreconditionError("complex header must be 'V E F T'");
    const std::size_t v_count = static_cast<std::size_t>(parse_int(header[0]));

    std::size_t cursor = 1;
    std::vector<std::vector<double>> coords;
    // coordinate lines carry decimal points; simplex lines are pure integers
    if (cursor < lines.size()) {
        const auto first = tokenize(lines[cursor]);
        const bool has_coords =
            std::any_of(first.begin(), first.end(),
                        [](const std::string& t) { return !looks_integral(t); });
        if (has_coords) {
            for (std::size_t i = 0; i < v_count; ++i) {
                if (cursor >= lines.size())
                    throw PreconditionError("complex file ends inside the coordinate block");
                std::vector<double> c;
                for (const auto& t : tokenize(lines[cursor])) c.push_back(parse_double(t));
                coords.push_back(std::move(c));
                ++cursor;
            }
        }
    }

    std::vector<simplicial::Simplex> simplices;
    for (; cursor < lines.size(); ++cursor) {
        const auto toks = tokenize(lines[cursor]);
        const long long dim = parse_int(toks[0]);
        if (dim < 0 || dim > 3) throw PreconditionError("simplex dimension must be 0..3");
        if (static_cast<long long>(toks.size()) != dim + 2)
            throw PreconditionError("simplex line has wrong arity: " + lines[cursor]);
        simplicial::Simplex s;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            const long long idx = parse_int(toks[i]);
            if (idx < 0) throw PreconditionError("negative vertex index");
            s.push_back(static_cast<simplicial::VertexId>(idx));
        }
        simplices.push_back(std::move(s));
    }
    auto k = simplicial::SimplicialComplex3::from_simplices(static_cast<std::uint32_t>(v_count),
                                                            simplices);
    k.coordinates = std::move(coords);
    if (!k.coordinates.empty() && k.coordinates.size() != v_count)
        throw PreconditionError("coordinate count does not match vertex count");
    return k;
}

std::string write_marking(const simplicial::MarkedSingularSet& s) {
    std::ostringstream out;
    for (auto v : s.vertices) out << "v " << v << '\n';
    for (const auto& e : s.edges) out << "e " << e.u << ' ' << e.v << ' ' << e.label << '\n';
    return out.str();
}

simplicial::MarkedSingularSet read_marking(const std::string& text) {
    simplicial::MarkedSingularSet s;
    for (const auto& line : data_lines(text)) {
        const auto toks = tokenize(line);
        if (toks[0] == "v" && toks.size() == 2) {
            s.vertices.push_back(static_cast<simplicial::VertexId>(parse_int(toks[1])));
        } else if (toks[0] == "e" && toks.size() == 4) {
            s.edges.push_back({static_cast<simplicial::VertexId>(parse_int(toks[1])),
                               static_cast<simplicial::VertexId>(parse_int(toks[2])),
                               static_cast<std::uint32_t>(parse_int(toks[3]))});
        } else {
            throw PreconditionError("marking line must be 'v <i>' or 'e <i> <j> <label>': " + line);
        }
    }
    s.validate();
    return s;
}

std::string write_graph(const spectral::WeightedGraph& g) {
    std::ostringstream out;
    out << "# vertices " << g.vertex_count << '\n';
    for (const auto& e : g.edges)
        out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
    return out.str();
}

spectral::WeightedGraph read_graph(const std::string& text) {
    spectral::WeightedGraph g;
    std::uint32_t max_vertex = 0;
    {
        // optional "# vertices N" header survives comment stripping by being
        // parsed up front
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            const auto toks = tokenize(line);
            if (toks.size() == 3 && toks[0] == "#" && toks[1] == "vertices") {
                g.vertex_count = static_cast<std::uint32_t>(parse_int(toks[2]));
                break;
            }
        }
    }
    for (const auto& line : data_lines(text)) {
        const auto toks = tokenize(line);
        if (toks.size() != 3)
            throw PreconditionError("graph line must be 'i j w': " + line);
        const auto u = static_cast<std::uint32_t>(parse_int(toks[0]));
        const auto v = static_cast<std::uint32_t>(parse_int(toks[1]));
        g.edges.push_back({u, v, parse_double(toks[2])});
        max_vertex = std::max({max_vertex, u, v});
    }
    if (g.vertex_count == 0 && !g.edges.empty()) g.vertex_count = max_vertex + 1;
    g.validate();
    return g;
}

std::vector<double> read_values(const std::string& text) {
    std::vector<double> out;
    for (const auto& line : data_lines(text))
        for (const auto& tok : tokenize(line)) out.push_back(parse_double(tok));
    return out;
}

std::string write_embedding(const embedding::EmbeddedComplex& e) {
    std::ostringstream out;
    out << e.ambient_dim << ' ' << format_double(e.thickness) << '\n';
    for (const auto& p : e.coords) {
        for (int k = 0; k < p.size(); ++k) out << (k ? " " : "") << format_double(p[k]);
        out << '\n';
    }
    for (const auto& edge : e.edges) out << edge.u << ' ' << edge.v << '\n';
    return out.str();
}

embedding::EmbeddedComplex read_embedding(const std::string& text) {
    const auto lines = data_lines(text);
    if (lines.empty()) throw PreconditionError("empty embedding file");
    const auto header = tokenize(lines[0]);
    if (header.size() != 2) throw PreconditionError("embedding header must be 'n T'");
    embedding::EmbeddedComplex e;
    e.ambient_dim = static_cast<int>(parse_int(header[0]));
    e.thickness = parse_double(header[1]);
    for (std::size_t cursor = 1; cursor < lines.size(); ++cursor) {
        const auto toks = tokenize(lines[cursor]);
        const bool edge_line = toks.size() == 2 && looks_integral(toks[0]) &&
                               looks_integral(toks[1]);
        if (edge_line) {
            e.edges.push_back({static_cast<std::uint32_t>(parse_int(toks[0])),
                               static_cast<std::uint32_t>(parse_int(toks[1]))});
        } else {
            if (static_cast<int>(toks.size()) != e.ambient_dim)
                throw PreconditionError("coordinate line arity mismatch: " + lines[cursor]);
            Eigen::VectorXd p(e.ambient_dim);
            for (int k = 0; k < e.ambient_dim; ++k)
                p[k] = parse_double(toks[static_cast<std::size_t>(k)]);
            e.coords.push_back(std::move(p));
        }
    }
    e.validate();
    return e;
}

std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (!tokenize(line).empty())
                throw PreconditionError("config line is not key=value: " + line);
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw PreconditionError("config line is not key=value: " + line);
        out[key] = value;
    }
    return out;
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("could not open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spit_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("could not write file: " + path);
    out << content;
}

}  // namespace orbi::io
