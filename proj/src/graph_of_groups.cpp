#include "treefiber/graph.hpp"

#include <algorithm>
#include <queue>

namespace treefiber {

GraphOfGroups::GraphOfGroups(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges,
                             int base_vertex)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), base_(base_vertex) {
    if (vertices_.empty()) throw InvalidInput("graph of groups needs at least one vertex");
    rank_ = vertices_[0].rank;
    validate();
    for (const auto& e : edges_) {
        minus_lat_.push_back(std::make_unique<LatticeBasis>(e.minus));
        plus_lat_.push_back(std::make_unique<LatticeBasis>(e.plus));
        minus_inv_.push_back(MatQ::from_int(e.minus).inverse());
        plus_inv_.push_back(MatQ::from_int(e.plus).inverse());
    }
    build_tree_paths();
    build_lifts();
}

void GraphOfGroups::validate() const {
    for (const auto& v : vertices_)
        if (v.rank != rank_) throw InvalidInput("all vertex groups must share one rank");
    if (base_ < 0 || base_ >= vertex_count()) throw InvalidInput("base vertex out of range");
    int tree_edges = 0;
    for (const auto& e : edges_) {
        if (e.from < 0 || e.from >= vertex_count() || e.to < 0 || e.to >= vertex_count())
            throw InvalidInput("edge endpoint out of range");
        if (e.minus.n() != rank_ || e.plus.n() != rank_)
            throw InvalidInput("edge matrix rank mismatch");
        if (e.minus.det() == 0 || e.plus.det() == 0)
            throw InvalidInput("edge monomorphism must have nonzero determinant (finite index)");
        if (e.in_tree) ++tree_edges;
    }
    // Spanning-tree flags must form a maximal tree: V-1 edges connecting everything.
    if (tree_edges != vertex_count() - 1)
        throw InvalidInput("spanning-tree flags must select exactly V-1 edges");
    std::vector<char> seen(vertex_count(), 0);
    std::queue<int> q;
    q.push(base_);
    seen[base_] = 1;
    int reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : edges_) {
            if (!e.in_tree) continue;
            int other = -1;
            if (e.from == v) other = e.to;
            else if (e.to == v) other = e.from;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                ++reached;
                q.push(other);
            }
        }
    }
    if (reached != vertex_count()) throw InvalidInput("spanning-tree flags do not connect the graph");
    // Connectivity of the whole graph follows from the spanning tree.
}

void GraphOfGroups::build_tree_paths() {
    const int V = vertex_count();
    // BFS in the spanning tree from every vertex; paths as letter sequences.
    tree_paths_.assign(V, std::vector<std::vector<Letter>>(V));
    for (int s = 0; s < V; ++s) {
        std::vector<int> prev_vertex(V, -1);
        std::vector<Letter> prev_letter(V);
        std::vector<char> seen(V, 0);
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int ei = 0; ei < edge_count(); ++ei) {
                const auto& e = edges_[ei];
                if (!e.in_tree) continue;
                if (e.from == v && !seen[e.to]) {
                    seen[e.to] = 1;
                    prev_vertex[e.to] = v;
                    prev_letter[e.to] = Letter{ei, -1}; // i -> t
                    q.push(e.to);
                } else if (e.to == v && !seen[e.from]) {
                    seen[e.from] = 1;
                    prev_vertex[e.from] = v;
                    prev_letter[e.from] = Letter{ei, +1}; // t -> i
                    q.push(e.from);
                }
            }
        }
        for (int t = 0; t < V; ++t) {
            std::vector<Letter> path;
            for (int v = t; v != s; v = prev_vertex[v]) path.push_back(prev_letter[v]);
            std::reverse(path.begin(), path.end());
            tree_paths_[s][t] = std::move(path);
        }
    }
}

void GraphOfGroups::build_lifts() {
    f_edge_.reserve(edges_.size());
    for (const auto& e : edges_)
        f_edge_.push_back(MatQ::from_int(e.plus).mul(MatQ::from_int(e.minus).inverse()));
    h_vertex_.assign(vertex_count(), MatQ::identity(rank_));
    for (int v = 0; v < vertex_count(); ++v) {
        MatQ h = MatQ::identity(rank_);
        for (const Letter& l : tree_paths_[base_][v]) {
            // Traversing i(e)->t(e) applies f_e; the reverse applies f_e⁻¹.
            h = (l.sign < 0 ? f_edge_[l.edge] : f_edge_[l.edge].inverse()).mul(h);
        }
        h_vertex_[v] = h;
    }
}

int GraphOfGroups::vertex_index(const std::string& id) const {
    for (int i = 0; i < vertex_count(); ++i)
        if (vertices_[i].id == id) return i;
    throw InvalidInput("unknown vertex id: " + id);
}

int GraphOfGroups::edge_index(const std::string& id) const {
    for (int i = 0; i < edge_count(); ++i)
        if (edges_[i].id == id) return i;
    throw InvalidInput("unknown edge id: " + id);
}

const std::vector<Letter>& GraphOfGroups::tree_path(int from, int to) const {
    return tree_paths_[from][to];
}

} // namespace treefiber
