#pragma once

#include "treefiber/graph.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace treefiber {

// Typed alternating word  z0 · e1^ε1 · z1 · ... · ek^εk · zk  tracing a walk in
// the quotient graph. Group elements are loops at the base vertex; coset
// representatives for the Bass-Serre tree are walks ending at other vertices.
// Canonical (Britton-reduced, transversal-normalized) after Word::reduce.
struct Word {
    int start = 0;
    VecZ head;                                    // z0, in G_start
    std::vector<std::pair<Letter, VecZ>> tail;    // (e_i^{ε_i}, z_i)

    int letter_count() const { return static_cast<int>(tail.size()); }
    const VecZ& trailing() const { return tail.empty() ? head : tail.back().second; }
    VecZ& trailing() { return tail.empty() ? head : tail.back().second; }
};

// Canonical words compare and hash by this key.
std::string word_key(const Word& w);

class WordOps {
  public:
    explicit WordOps(const GraphOfGroups& g) : g_(g) {}

    const GraphOfGroups& graph() const { return g_; }

    Word identity(int at_vertex) const;
    int end_vertex(const Word& w) const;

    // Britton reduction to the unique canonical form: interior syllables are
    // reduced to lattice residues (pushing quotients rightward through the
    // relator) and pinches e^ε·0·e^{-ε} are deleted.
    Word reduce(const Word& w) const;

    // Concatenation u·w (end vertex of u must equal start of w), reduced.
    Word multiply(const Word& u, const Word& w) const;
    Word invert(const Word& u) const;

    bool is_identity(const Word& w) const { return w.tail.empty() && vec_is_zero(w.head); }
    int syllable_length(const Word& w) const { return w.letter_count(); }

    // Loop words at the base vertex for the standard generators.
    Word vertex_generator(int vertex, int coordinate, int sign) const;
    Word stable_letter(int edge, int sign) const;

    // Append a vertex-group element / stable letter to a loop word, inserting
    // spanning-tree glue letters where the walk typing requires them.
    Word append_vertex_element(const Word& w, int vertex, const VecZ& z) const;
    Word append_stable_letter(const Word& w, int edge, int sign) const;

    // Canonical coset representative: canonical form with trailing syllable
    // zeroed (used for tree vertices) or reduced to a lattice residue (edges).
    Word coset_rep_vertex(const Word& w) const;

    friend bool operator==(const Word&, const Word&) = delete;
    bool equal(const Word& a, const Word& b) const;

  private:
    const GraphOfGroups& g_;
};

struct BallElement {
    Word word;        // canonical form
    int length = 0;   // word length in the weight-1 generating set
};

// Graded enumeration of the word-metric ball of radius L: BFS over the
// generating set {a_{v,i}^±} ∪ {t_e^± : e ∉ Γ0}, dedup by canonical form,
// spheres sorted by canonical key. guard bounds the element count.
std::vector<BallElement> enumerate_ball(const WordOps& ops, int L, std::size_t guard = 2'000'000);

} // namespace treefiber
