#include "qwalk/graph.hpp"

#include <queue>
#include <utility>

#include <nlohmann/json.hpp>

namespace qwalk {

LabeledGraph::LabeledGraph(std::uint32_t n_vertices, std::uint32_t degree,
                           std::vector<std::uint32_t> neighbor_table,
                           GraphKind kind)
    : n_vertices_(n_vertices), degree_(degree),
      table_(std::move(neighbor_table)), kind_(kind) {
    if (n_vertices_ == 0 || degree_ == 0) {
        throw ConfigurationError("LabeledGraph: n_vertices and degree must be positive");
    }
    if (table_.size() != std::size_t(n_vertices_) * degree_) {
        throw ConfigurationError("LabeledGraph: neighbor table has " +
                                 std::to_string(table_.size()) + " entries, expected " +
                                 std::to_string(std::size_t(n_vertices_) * degree_));
    }
    for (std::uint32_t t : table_) {
        if (t >= n_vertices_) {
            throw ConfigurationError("LabeledGraph: neighbor index " + std::to_string(t) +
                                     " out of range [0, " + std::to_string(n_vertices_) + ")");
        }
    }
}

LabeledGraph hypercube(int n) {
    if (n < 1 || n > 30) {
        throw ConfigurationError("hypercube: dimension " + std::to_string(n) +
                                 " outside supported range [1, 30]");
    }
    const std::uint32_t n_vertices = 1u << n;
    std::vector<std::uint32_t> table(std::size_t(n_vertices) * n);
    for (std::uint32_t v = 0; v < n_vertices; ++v) {
        for (int j = 0; j < n; ++j) {
            table[std::size_t(v) * n + j] = v ^ (1u << j);
        }
    }
    return LabeledGraph(n_vertices, std::uint32_t(n), std::move(table), GraphKind::Hypercube);
}

LabeledGraph distorted_hypercube(int n) {
    if (n < 2) {
        throw ConfigurationError("distorted_hypercube: dimension " + std::to_string(n) +
                                 " has no face to rewire (need n >= 2)");
    }
    if (n > 30) {
        throw ConfigurationError("distorted_hypercube: dimension " + std::to_string(n) +
                                 " outside supported range [2, 30]");
    }
    const std::uint32_t n_vertices = 1u << n;
    std::vector<std::uint32_t> table(std::size_t(n_vertices) * n);
    for (std::uint32_t v = 0; v < n_vertices; ++v) {
        for (int j = 0; j < n; ++j) {
            table[std::size_t(v) * n + j] = v ^ (1u << j);
        }
    }
    // Face {0, 1, 2, 3}: replace label-0 edges 0-1 and 2-3 by 0-3 and 1-2.
    table[std::size_t(0) * n + 0] = 3;
    table[std::size_t(3) * n + 0] = 0;
    table[std::size_t(1) * n + 0] = 2;
    table[std::size_t(2) * n + 0] = 1;
    return LabeledGraph(n_vertices, std::uint32_t(n), std::move(table),
                        GraphKind::DistortedHypercube);
}

std::vector<LabelingViolation> validate_labeling(const LabeledGraph& g) {
    std::vector<LabelingViolation> violations;
    for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
        for (std::uint32_t j = 0; j < g.degree(); ++j) {
            const std::uint32_t u = g.neighbor(v, j);
            if (u == v) {
                violations.push_back({v, j, "self-loop"});
                continue;
            }
            if (g.neighbor(u, j) != v) {
                violations.push_back({v, j,
                    "label mismatch: neighbor(" + std::to_string(u) + ", " +
                    std::to_string(j) + ") = " + std::to_string(g.neighbor(u, j)) +
                    ", expected " + std::to_string(v)});
            }
        }
    }
    return violations;
}

bool is_bipartite(const LabeledGraph& g) {
    std::vector<int> color(g.n_vertices(), -1);
    for (std::uint32_t root = 0; root < g.n_vertices(); ++root) {
        if (color[root] != -1) continue;
        color[root] = 0;
        std::queue<std::uint32_t> queue;
        queue.push(root);
        while (!queue.empty()) {
            const std::uint32_t v = queue.front();
            queue.pop();
            for (std::uint32_t j = 0; j < g.degree(); ++j) {
                const std::uint32_t u = g.neighbor(v, j);
                if (color[u] == -1) {
                    color[u] = 1 - color[v];
                    queue.push(u);
                } else if (color[u] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::string graph_to_json(const LabeledGraph& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
        nlohmann::json row = nlohmann::json::array();
        for (std::uint32_t j = 0; j < g.degree(); ++j) {
            row.push_back(g.neighbor(v, j));
        }
        rows.push_back(std::move(row));
    }
    nlohmann::json doc{{"n_vertices", g.n_vertices()},
                       {"degree", g.degree()},
                       {"neighbors", std::move(rows)}};
    return doc.dump();
}

LabeledGraph graph_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigurationError(std::string("graph_from_json: ") + e.what());
    }
    if (!doc.contains("n_vertices") || !doc.contains("degree") || !doc.contains("neighbors")) {
        throw ConfigurationError("graph_from_json: missing n_vertices/degree/neighbors");
    }
    const auto n_vertices = doc["n_vertices"].get<std::uint32_t>();
    const auto degree = doc["degree"].get<std::uint32_t>();
    const auto& rows = doc["neighbors"];
    if (!rows.is_array() || rows.size() != n_vertices) {
        throw ConfigurationError("graph_from_json: neighbors must list one row per vertex");
    }
    std::vector<std::uint32_t> table;
    table.reserve(std::size_t(n_vertices) * degree);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != degree) {
            throw ConfigurationError("graph_from_json: each row must list degree entries");
        }
        for (const auto& entry : row) {
            table.push_back(entry.get<std::uint32_t>());
        }
    }
    return LabeledGraph(n_vertices, degree, std::move(table), GraphKind::Custom);
}

} // namespace qwalk
