#pragma once

#include "treefiber/words.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace treefiber {

// Fiber action Θ: group words -> exact affine self-maps of R^n, built from the
// lift homeomorphisms f_e = p̃⁺ ∘ (p̃⁻)⁻¹ and the spanning-tree transports h_v.
class Theta {
  public:
    explicit Theta(const WordOps& ops);

    const WordOps& ops() const { return ops_; }

    // p̃⁻, p̃⁺ and f_e for one edge.
    struct LiftMaps {
        AffineMap p_minus;
        AffineMap p_plus;
        AffineMap f_e;
    };
    LiftMaps lift_maps(int e) const;

    AffineMap theta_vertex(int v, const VecZ& z) const; // h_v⁻¹ ∘ (x+z) ∘ h_v
    AffineMap theta_edge_letter(const Letter& l) const; // θ_F(e)^{±1}
    AffineMap apply(const Word& w) const;               // homomorphism on loop words

  private:
    const WordOps& ops_;
    std::vector<MatQ> h_inv_;
    std::vector<AffineMap> theta_f_;     // θ_F(e)
    std::vector<AffineMap> theta_f_inv_; // θ_F(e)⁻¹
};

struct RelatorCheck {
    int edge = 0;
    int generator = 0; // basis index of the edge group; -1 for the Γ0-identity check
    bool pass = false;
    std::string lhs;
    std::string rhs;
};

struct RelatorReport {
    std::vector<RelatorCheck> checks;
    bool all_pass = true;
};

// Exact verification that Θ sends every defining relator to the identity:
// θ_F(e) ∘ θ_{i(e)}(M⁻β) ∘ θ_F(e)⁻¹ = θ_{t(e)}(M⁺β) for each basis β, and
// θ_F(e) = id for spanning-tree edges.
RelatorReport verify_relators(const Theta& theta);

// Lazily expanded Bass-Serre tree over canonical coset words. Vertices are
// interned by canonical key; expansion is idempotent, so query results do not
// depend on expansion order.
class BassSerreTree {
  public:
    explicit BassSerreTree(const WordOps& ops);

    const WordOps& ops() const { return ops_; }

    struct EdgeRef {
        Word rep;      // canonical walk ending at i(e), trailing = minus-residue
        int edge = 0;
        std::string key;
    };

    int base() const { return 0; }
    int vertex_count() const { return static_cast<int>(nodes_.size()); }
    const Word& rep(int id) const { return nodes_[id].rep; }
    int type(int id) const { return nodes_[id].type; }
    int depth(int id) const { return nodes_[id].depth; }

    int intern_coset(const Word& walk); // canonicalizes and interns

    // Neighbor enumeration via edge transversals; deterministic order.
    const std::vector<std::pair<EdgeRef, int>>& neighbors(int id);

    int degree_formula(int vertex_type) const;

    int act(const Word& g, int id);                 // left action on cosets
    int distance(int a, int b) const;               // edge letters of rep(a)⁻¹·rep(b)
    std::vector<int> path(int a, int b);            // vertex ids along the geodesic

  private:
    struct Node {
        Word rep;
        int type = 0;
        int depth = 0;
        bool expanded = false;
        std::vector<std::pair<EdgeRef, int>> nbrs;
    };

    const WordOps& ops_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> index_;
};

} // namespace treefiber
