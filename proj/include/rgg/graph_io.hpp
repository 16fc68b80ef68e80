#pragma once

#include "rgg/model.hpp"

#include <iosfwd>
#include <string>

namespace rgg {

/// A graph file: {"n", "p", "mode", "seed", "edges": [[i, j], ...]} with
/// 0-based i < j listed in packing order.
struct GraphFile {
    AdjacencySample graph;
    double p;
};

std::string graph_to_json(const AdjacencySample& graph, double p);
GraphFile graph_from_json(const std::string& text);

/// Optional latent file: {"n", "d", "kind", "rows": [[...], ...]}.
std::string latent_to_json(const LatentMatrix& latent, int model_dim);
LatentMatrix latent_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rgg
