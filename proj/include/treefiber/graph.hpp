#pragma once

#include "treefiber/linalg.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace treefiber {

struct VertexSpec {
    std::string id;
    int rank = 1;
};

// Oriented edge e: i(e) = from, t(e) = to. minus/plus are the edge-group
// monomorphism matrices into the from/to vertex groups. The relator convention
// is the appendix form  t_e · (M⁻ g) · t_e⁻¹ = M⁺ g.
struct EdgeSpec {
    std::string id;
    int from = 0;
    int to = 0;
    MatZ minus;
    MatZ plus;
    bool in_tree = false;
};

// One traversal step of an edge: sign = -1 walks i(e) -> t(e) (letter t_e⁻¹),
// sign = +1 walks t(e) -> i(e) (letter t_e).
struct Letter {
    int edge = 0;
    int sign = 0;

    friend bool operator==(const Letter& a, const Letter& b) {
        return a.edge == b.edge && a.sign == b.sign;
    }
};

// Finite connected graph of Z^n groups with finite-index integer edge maps.
// Immutable after construction; all derived data (lattices, spanning-tree
// paths, lift maps) is precomputed here.
class GraphOfGroups {
  public:
    GraphOfGroups(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges, int base_vertex);

    int rank() const { return rank_; }
    int base() const { return base_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const VertexSpec& vertex(int v) const { return vertices_[v]; }
    const EdgeSpec& edge(int e) const { return edges_[e]; }

    int vertex_index(const std::string& id) const;
    int edge_index(const std::string& id) const;

    const LatticeBasis& minus_lattice(int e) const { return *minus_lat_[e]; }
    const LatticeBasis& plus_lattice(int e) const { return *plus_lat_[e]; }
    const MatQ& minus_inverse(int e) const { return minus_inv_[e]; }
    const MatQ& plus_inverse(int e) const { return plus_inv_[e]; }

    // Walk target/source for a letter.
    int letter_departs(const Letter& l) const { return l.sign < 0 ? edges_[l.edge].from : edges_[l.edge].to; }
    int letter_arrives(const Letter& l) const { return l.sign < 0 ? edges_[l.edge].to : edges_[l.edge].from; }

    // Reduced spanning-tree path between vertex types, as letters.
    const std::vector<Letter>& tree_path(int from, int to) const;

    // Lifted covering maps and the gluing homeomorphism of an edge:
    // p̃⁻ = M⁻, p̃⁺ = M⁺, f_e = M⁺ (M⁻)⁻¹.
    const MatQ& f_edge(int e) const { return f_edge_[e]; }
    // Fiber identification h_v transporting the base-vertex fiber along the
    // spanning tree (h_{v0} = id).
    const MatQ& h_vertex(int v) const { return h_vertex_[v]; }

  private:
    void validate() const;
    void build_tree_paths();
    void build_lifts();

    std::vector<VertexSpec> vertices_;
    std::vector<EdgeSpec> edges_;
    int base_;
    int rank_;
    std::vector<std::unique_ptr<LatticeBasis>> minus_lat_;
    std::vector<std::unique_ptr<LatticeBasis>> plus_lat_;
    std::vector<MatQ> minus_inv_;
    std::vector<MatQ> plus_inv_;
    std::vector<std::vector<std::vector<Letter>>> tree_paths_; // [from][to]
    std::vector<MatQ> f_edge_;
    std::vector<MatQ> h_vertex_;
};

} // namespace treefiber
