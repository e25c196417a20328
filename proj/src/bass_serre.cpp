#include "treefiber/bass_serre.hpp"

namespace treefiber {

Theta::Theta(const WordOps& ops) : ops_(ops) {
    const GraphOfGroups& g = ops.graph();
    h_inv_.reserve(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) h_inv_.push_back(g.h_vertex(v).inverse());
    for (int e = 0; e < g.edge_count(); ++e) {
        // θ_F(e) = h_{t(e)}⁻¹ ∘ f_e ∘ h_{i(e)}
        MatQ m = h_inv_[g.edge(e).to].mul(g.f_edge(e)).mul(g.h_vertex(g.edge(e).from));
        theta_f_.push_back(AffineMap::linear(m));
        theta_f_inv_.push_back(AffineMap::linear(m.inverse()));
    }
}

Theta::LiftMaps Theta::lift_maps(int e) const {
    const GraphOfGroups& g = ops_.graph();
    return {AffineMap::linear(MatQ::from_int(g.edge(e).minus)),
            AffineMap::linear(MatQ::from_int(g.edge(e).plus)),
            AffineMap::linear(g.f_edge(e))};
}

AffineMap Theta::theta_vertex(int v, const VecZ& z) const {
    VecQ zq(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) zq[i] = Rational(z[i]);
    return {MatQ::identity(ops_.graph().rank()), h_inv_[v].apply(zq)};
}

AffineMap Theta::theta_edge_letter(const Letter& l) const {
    return l.sign > 0 ? theta_f_[l.edge] : theta_f_inv_[l.edge];
}

AffineMap Theta::apply(const Word& w) const {
    const GraphOfGroups& g = ops_.graph();
    int cursor = w.start;
    AffineMap acc = theta_vertex(cursor, w.head);
    for (const auto& [l, z] : w.tail) {
        acc = acc.compose(theta_edge_letter(l));
        cursor = g.letter_arrives(l);
        if (!vec_is_zero(z)) acc = acc.compose(theta_vertex(cursor, z));
    }
    return acc;
}

RelatorReport verify_relators(const Theta& theta) {
    const GraphOfGroups& g = theta.ops().graph();
    RelatorReport report;
    AffineMap id = AffineMap::identity(g.rank());
    for (int e = 0; e < g.edge_count(); ++e) {
        if (g.edge(e).in_tree) {
            AffineMap tf = theta.theta_edge_letter(Letter{e, +1});
            bool ok = tf == id;
            report.checks.push_back({e, -1, ok, tf.str(), id.str()});
            report.all_pass &= ok;
        }
        for (int j = 0; j < g.rank(); ++j) {
            VecZ basis(g.rank(), 0);
            basis[j] = 1;
            AffineMap lhs = theta.theta_edge_letter(Letter{e, +1})
                                .compose(theta.theta_vertex(g.edge(e).from, g.edge(e).minus.apply(basis)))
                                .compose(theta.theta_edge_letter(Letter{e, -1}));
            AffineMap rhs = theta.theta_vertex(g.edge(e).to, g.edge(e).plus.apply(basis));
            bool ok = lhs == rhs;
            report.checks.push_back({e, j, ok, lhs.str(), rhs.str()});
            report.all_pass &= ok;
        }
    }
    return report;
}

BassSerreTree::BassSerreTree(const WordOps& ops) : ops_(ops) {
    Node n;
    n.rep = ops.coset_rep_vertex(ops.identity(ops.graph().base()));
    n.type = ops.graph().base();
    n.depth = 0;
    index_.emplace(word_key(n.rep), 0);
    nodes_.push_back(std::move(n));
}

int BassSerreTree::intern_coset(const Word& walk) {
    Word rep = ops_.coset_rep_vertex(walk);
    std::string key = word_key(rep);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    Node n;
    n.type = ops_.end_vertex(rep);
    n.depth = rep.letter_count(); // reduced walks from the base trace geodesics
    n.rep = std::move(rep);
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    index_.emplace(std::move(key), id);
    return id;
}

int BassSerreTree::degree_formula(int vertex_type) const {
    const GraphOfGroups& g = ops_.graph();
    Int deg = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (g.edge(e).from == vertex_type) deg = checked_add(deg, g.minus_lattice(e).index());
        if (g.edge(e).to == vertex_type) deg = checked_add(deg, g.plus_lattice(e).index());
    }
    return static_cast<int>(deg);
}

const std::vector<std::pair<BassSerreTree::EdgeRef, int>>& BassSerreTree::neighbors(int id) {
    if (nodes_[id].expanded) return nodes_[id].nbrs;
    const GraphOfGroups& g = ops_.graph();
    // Copy before interning: intern_coset may reallocate nodes_.
    const Word rep = nodes_[id].rep;
    const int vtype = nodes_[id].type;
    std::vector<std::pair<EdgeRef, int>> nbrs;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (g.edge(e).from == vtype) {
            for (const VecZ& r : g.minus_lattice(e).residues()) {
                Word w = rep;
                w.trailing() = r; // already the canonical minus-residue
                EdgeRef ref{w, e, word_key(w) + "#e" + std::to_string(e)};
                Word far = w;
                far.tail.emplace_back(Letter{e, -1}, VecZ(g.rank(), 0));
                nbrs.emplace_back(std::move(ref), intern_coset(far));
            }
        }
        if (g.edge(e).to == vtype) {
            for (const VecZ& r : g.plus_lattice(e).residues()) {
                Word w = rep;
                w.trailing() = r;
                w.tail.emplace_back(Letter{e, +1}, VecZ(g.rank(), 0));
                w = ops_.reduce(w);
                EdgeRef ref{w, e, word_key(w) + "#e" + std::to_string(e)};
                nbrs.emplace_back(std::move(ref), intern_coset(w));
            }
        }
    }
    nodes_[id].nbrs = std::move(nbrs);
    nodes_[id].expanded = true;
    return nodes_[id].nbrs;
}

int BassSerreTree::act(const Word& g, int id) {
    return intern_coset(ops_.multiply(g, nodes_[id].rep));
}

int BassSerreTree::distance(int a, int b) const {
    return ops_.multiply(ops_.invert(nodes_[a].rep), nodes_[b].rep).letter_count();
}

std::vector<int> BassSerreTree::path(int a, int b) {
    // Vertices along the geodesic are the coset prefixes of the reduced
    // connecting word.
    Word w = ops_.multiply(ops_.invert(nodes_[a].rep), nodes_[b].rep);
    std::vector<int> out{a};
    Word acc;
    acc.start = w.start;
    acc.head = w.head;
    for (const auto& pair : w.tail) {
        acc.tail.push_back(pair);
        out.push_back(intern_coset(ops_.multiply(nodes_[a].rep, acc)));
    }
    return out;
}

} // namespace treefiber
