#include "rgg/graph_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace rgg {

using nlohmann::json;

std::string graph_to_json(const AdjacencySample& graph, double p) {
    json edges = json::array();
    for (auto [i, j] : graph.edges()) edges.push_back({i, j});
    json doc = {
        {"n", graph.n()},
        {"p", p},
        {"mode", std::string(to_string(graph.mode()))},
        {"seed", graph.seed()},
        {"edges", std::move(edges)},
    };
    return doc.dump();
}

GraphFile graph_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("malformed graph JSON: ") + e.what());
    }
    try {
        const int n = doc.at("n").get<int>();
        const double p = doc.at("p").get<double>();
        const SampleMode mode = parse_sample_mode(doc.at("mode").get<std::string>());
        const auto seed = doc.at("seed").get<std::uint64_t>();
        AdjacencySample g(n, mode, seed);
        for (const auto& e : doc.at("edges")) {
            const int i = e.at(0).get<int>();
            const int j = e.at(1).get<int>();
            if (!(0 <= i && i < j && j < n)) throw DomainError("graph edge must satisfy 0 <= i < j < n");
            g.set_edge(i, j, true);
        }
        return {std::move(g), p};
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed graph JSON: ") + e.what());
    }
}

std::string latent_to_json(const LatentMatrix& latent, int model_dim) {
    json rows = json::array();
    for (int i = 0; i < latent.rows(); ++i) {
        auto r = latent.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    json doc = {
        {"n", latent.rows()},
        {"d", model_dim},
        {"kind", std::string(to_string(latent.kind()))},
        {"rows", std::move(rows)},
    };
    return doc.dump();
}

LatentMatrix latent_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        const int n = doc.at("n").get<int>();
        const LatentKind kind = parse_latent_kind(doc.at("kind").get<std::string>());
        const auto& rows = doc.at("rows");
        if (static_cast<int>(rows.size()) != n || n == 0) throw DomainError("latent rows do not match n");
        const int cols = static_cast<int>(rows.at(0).size());
        std::vector<double> data;
        data.reserve(static_cast<std::size_t>(n) * cols);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols) throw DomainError("ragged latent rows");
            for (const auto& v : r) data.push_back(v.get<double>());
        }
        return LatentMatrix(n, cols, kind, std::move(data));
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed latent JSON: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write file: " + path);
    out << text;
    if (!out) throw DomainError("failed writing file: " + path);
}

}  // namespace rgg
