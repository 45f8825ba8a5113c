#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

enum class GraphKind { Hypercube, DistortedHypercube, Custom };

// Regular graph of degree d with a proper edge labeling: the edge between two
// vertices carries the same label at both endpoints, so following a label
// twice returns to the starting vertex. Immutable after construction.
class LabeledGraph {
public:
    // The table stores neighbor(v, j) at v * degree + j. Shape and index
    // ranges are checked here; labeling properness is not (see
    // validate_labeling), so tests can build improper Custom tables.
    LabeledGraph(std::uint32_t n_vertices, std::uint32_t degree,
                 std::vector<std::uint32_t> neighbor_table,
                 GraphKind kind = GraphKind::Custom);

    std::uint32_t n_vertices() const { return n_vertices_; }
    std::uint32_t degree() const { return degree_; }
    GraphKind kind() const { return kind_; }

    std::uint32_t neighbor(std::uint32_t vertex, std::uint32_t label) const {
        return table_[std::size_t(vertex) * degree_ + label];
    }

private:
    std::uint32_t n_vertices_;
    std::uint32_t degree_;
    std::vector<std::uint32_t> table_;
    GraphKind kind_;
};

struct LabelingViolation {
    std::uint32_t vertex;
    std::uint32_t label;
    std::string reason;
};

// n-dimensional hypercube: 2^n vertices, neighbor(v, j) = v XOR (1 << j).
// Requires 1 <= n <= 30.
LabeledGraph hypercube(int n);

// Hypercube with one face rewired: with A=0, B=1, C=2, D=3, the label-0 edges
// A-B and C-D are replaced by A-D and B-C. The new edges reuse label 0 at all
// four endpoints, so the labeling stays proper. Requires 2 <= n <= 30.
LabeledGraph distorted_hypercube(int n);

// Empty iff the proper-labeling invariants hold: no self-loops and
// neighbor(neighbor(v, j), j) == v for every (v, j).
std::vector<LabelingViolation> validate_labeling(const LabeledGraph& g);

// Two-coloring by BFS over all components.
bool is_bipartite(const LabeledGraph& g);

// {"n_vertices":N,"degree":d,"neighbors":[[...],...]}, row v in label order.
std::string graph_to_json(const LabeledGraph& g);
LabeledGraph graph_from_json(const std::string& text);

} // namespace qwalk
