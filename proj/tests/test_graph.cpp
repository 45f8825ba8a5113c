#include <doctest.h>

#include <algorithm>
#include <queue>
#include <vector>

#include "qwalk/graph.hpp"

using namespace qwalk;

namespace {

// Length of the shortest odd cycle through `root`, or -1 if none: BFS depths
// plus one cross edge between equal-parity vertices bound the cycle length.
int shortest_odd_cycle_through(const LabeledGraph& g, std::uint32_t root) {
    std::vector<int> dist(g.n_vertices(), -1);
    dist[root] = 0;
    std::queue<std::uint32_t> queue;
    queue.push(root);
    while (!queue.empty()) {
        const std::uint32_t v = queue.front();
        queue.pop();
        for (std::uint32_t j = 0; j < g.degree(); ++j) {
            const std::uint32_t u = g.neighbor(v, j);
            if (dist[u] == -1) {
                dist[u] = dist[v] + 1;
                queue.push(u);
            }
        }
    }
    int best = -1;
    for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
        for (std::uint32_t j = 0; j < g.degree(); ++j) {
            const std::uint32_t u = g.neighbor(v, j);
            if (dist[v] == -1 || dist[u] == -1) continue;
            if ((dist[v] + dist[u]) % 2 == 0) {
                const int cycle = dist[v] + dist[u] + 1;
                if (best == -1 || cycle < best) best = cycle;
            }
        }
    }
    return best;
}

} // namespace

TEST_CASE("hypercube neighbors flip single bits") {
    const auto g3 = hypercube(3);
    CHECK(g3.n_vertices() == 8);
    CHECK(g3.degree() == 3);
    CHECK(g3.neighbor(0b011, 2) == 0b111);

    const auto g1 = hypercube(1);
    CHECK(g1.neighbor(0, 0) == 1);
    CHECK(g1.neighbor(1, 0) == 0);

    const auto g4 = hypercube(4);
    CHECK(g4.neighbor(g4.neighbor(5, 2), 2) == 5);
}

TEST_CASE("hypercube rejects out-of-range dimensions") {
    CHECK_THROWS_AS(hypercube(0), ConfigurationError);
    CHECK_THROWS_AS(hypercube(-2), ConfigurationError);
    CHECK_THROWS_AS(hypercube(31), ConfigurationError);
}

TEST_CASE("distorted hypercube rewires exactly one face") {
    const auto g = distorted_hypercube(3);
    CHECK(g.neighbor(0b000, 0) == 0b011);
    CHECK(g.neighbor(0b011, 0) == 0b000);
    CHECK(g.neighbor(0b001, 0) == 0b010);
    CHECK(g.neighbor(0b010, 0) == 0b001);
    // Vertices off the face keep the XOR rule.
    CHECK(g.neighbor(0b100, 0) == 0b101);

    CHECK_THROWS_AS(distorted_hypercube(1), ConfigurationError);
}

TEST_CASE("distortion changes exactly four table entries") {
    for (int n = 3; n <= 6; ++n) {
        const auto plain = hypercube(n);
        const auto bent = distorted_hypercube(n);
        int changed = 0;
        for (std::uint32_t v = 0; v < plain.n_vertices(); ++v) {
            for (std::uint32_t j = 0; j < plain.degree(); ++j) {
                if (plain.neighbor(v, j) != bent.neighbor(v, j)) ++changed;
            }
        }
        CHECK(changed == 4);
    }
}

TEST_CASE("labeling validates for both families up to n = 10") {
    for (int n = 1; n <= 10; ++n) {
        CHECK(validate_labeling(hypercube(n)).empty());
        if (n >= 2) {
            CHECK(validate_labeling(distorted_hypercube(n)).empty());
        }
    }
}

TEST_CASE("validate_labeling reports mismatches and self-loops") {
    // neighbor(0,0)=1 but neighbor(1,0)=2: labels disagree across the edge.
    const LabeledGraph broken(3, 1, {1, 2, 0});
    const auto violations = validate_labeling(broken);
    REQUIRE(!violations.empty());
    bool found_mismatch = false;
    for (const auto& v : violations) {
        if (v.reason.find("label mismatch") != std::string::npos) found_mismatch = true;
    }
    CHECK(found_mismatch);

    const LabeledGraph loopy(2, 1, {0, 1});
    const auto loops = validate_labeling(loopy);
    REQUIRE(!loops.empty());
    CHECK(loops[0].reason == "self-loop");
}

TEST_CASE("hypercube is bipartite, the distorted one is not") {
    for (int n = 3; n <= 6; ++n) {
        CHECK(is_bipartite(hypercube(n)));
        const auto bent = distorted_hypercube(n);
        CHECK(!is_bipartite(bent));
        // The rewired face sits on an odd cycle of length 5 (no triangle
        // exists: the new edges connect vertices at hypercube distance 2).
        const int cycle = shortest_odd_cycle_through(bent, 0);
        REQUIRE(cycle > 0);
        CHECK(cycle == 5);
    }
}

TEST_CASE("constructor rejects malformed tables") {
    CHECK_THROWS_AS(LabeledGraph(2, 1, {0}), ConfigurationError);      // short
    CHECK_THROWS_AS(LabeledGraph(2, 1, {1, 2}), ConfigurationError);   // range
    CHECK_THROWS_AS(LabeledGraph(0, 1, {}), ConfigurationError);       // empty
}

TEST_CASE("json round trip preserves the table") {
    const auto g = distorted_hypercube(3);
    const std::string text = graph_to_json(g);
    const auto back = graph_from_json(text);
    CHECK(back.n_vertices() == g.n_vertices());
    CHECK(back.degree() == g.degree());
    for (std::uint32_t v = 0; v < g.n_vertices(); ++v) {
        for (std::uint32_t j = 0; j < g.degree(); ++j) {
            CHECK(back.neighbor(v, j) == g.neighbor(v, j));
        }
    }
    CHECK(back.kind() == GraphKind::Custom);

    CHECK_THROWS_AS(graph_from_json("{"), ConfigurationError);
    CHECK_THROWS_AS(graph_from_json("{\"n_vertices\":2}"), ConfigurationError);
}
