#pragma once

#include "treefiber/graph.hpp"

#include <memory>

namespace treefiber::testfix {

// BS(m,n): one vertex of rank 1, one non-tree loop edge with M⁻ = (m), M⁺ = (n),
// so t·a^m·t⁻¹ = a^n.
inline std::shared_ptr<GraphOfGroups> bs(Int m, Int n) {
    std::vector<VertexSpec> vs{{"v", 1}};
    std::vector<EdgeSpec> es{{"e", 0, 0, MatZ(1, {m}), MatZ(1, {n}), false}};
    return std::make_shared<GraphOfGroups>(vs, es, 0);
}

// Z^n: a single rank-n vertex with no edges.
inline std::shared_ptr<GraphOfGroups> free_abelian(int n) {
    std::vector<VertexSpec> vs{{"v", n}};
    return std::make_shared<GraphOfGroups>(vs, std::vector<EdgeSpec>{}, 0);
}

// One rank-2 vertex with a loop edge (torus bundle style).
inline std::shared_ptr<GraphOfGroups> torus_loop(const MatZ& minus, const MatZ& plus) {
    std::vector<VertexSpec> vs{{"v", 2}};
    std::vector<EdgeSpec> es{{"e", 0, 0, minus, plus, false}};
    return std::make_shared<GraphOfGroups>(vs, es, 0);
}

// Two vertices joined by a spanning-tree edge (2 -> 3 gluing) plus one
// non-tree edge from u back to itself through v's lattice.
inline std::shared_ptr<GraphOfGroups> two_vertex() {
    std::vector<VertexSpec> vs{{"u", 1}, {"v", 1}};
    std::vector<EdgeSpec> es{
        {"f", 0, 1, MatZ(1, {2}), MatZ(1, {3}), true},
        {"g", 0, 1, MatZ(1, {1}), MatZ(1, {2}), false},
    };
    return std::make_shared<GraphOfGroups>(vs, es, 0);
}

} // namespace treefiber::testfix
