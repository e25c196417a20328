#include "treefiber/words.hpp"

#include <algorithm>
#include <map>

namespace treefiber {

std::string word_key(const Word& w) {
    std::string s = "v" + std::to_string(w.start) + ":";
    auto put_vec = [&s](const VecZ& z) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(z[i]);
        }
    };
    put_vec(w.head);
    for (const auto& [l, z] : w.tail) {
        s += l.sign < 0 ? "|-" : "|+";
        s += std::to_string(l.edge);
        s += ":";
        put_vec(z);
    }
    return s;
}

Word WordOps::identity(int at_vertex) const {
    Word w;
    w.start = at_vertex;
    w.head.assign(g_.rank(), 0);
    return w;
}

int WordOps::end_vertex(const Word& w) const {
    int v = w.start;
    for (const auto& [l, z] : w.tail) {
        (void)z;
        v = g_.letter_arrives(l);
    }
    return v;
}

namespace {

// Quotient of z by the side lattice: z = M q + r with r canonical.
VecZ side_quotient(const GraphOfGroups& g, const Letter& l, const VecZ& z, const VecZ& r) {
    const MatQ& inv = l.sign < 0 ? g.minus_inverse(l.edge) : g.plus_inverse(l.edge);
    VecQ diff(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) diff[i] = Rational(checked_sub(z[i], r[i]));
    VecQ q = inv.apply(diff);
    VecZ qi(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!q[i].is_integer()) throw InvalidInput("non-integral pinch quotient");
        qi[i] = q[i].num();
    }
    return qi;
}

struct Reducer {
    const GraphOfGroups& g;
    Word out;
    int cursor; // current walk vertex

    void push_syllable(const VecZ& z) { out.trailing() = vec_add(out.trailing(), z); }

    void push_letter(const Letter& l) {
        if (g.letter_departs(l) != cursor) throw InvalidInput("word letter breaks walk typing");
        const LatticeBasis& side = l.sign < 0 ? g.minus_lattice(l.edge) : g.plus_lattice(l.edge);
        const MatZ& other = l.sign < 0 ? g.edge(l.edge).plus : g.edge(l.edge).minus;

        VecZ& t = out.trailing();
        VecZ r = side.reduce(t);
        VecZ q = side_quotient(g, l, t, r);
        VecZ carry = other.apply(q);

        if (vec_is_zero(r) && !out.tail.empty() && out.tail.back().first.edge == l.edge &&
            out.tail.back().first.sign == -l.sign) {
            // Pinch: e^{-ε} · (side-image) · e^{ε} collapses to the carried image
            // one vertex back.
            out.tail.pop_back();
            out.trailing() = vec_add(out.trailing(), carry);
        } else {
            t = r;
            out.tail.emplace_back(l, carry);
        }
        cursor = g.letter_arrives(l);
    }
};

} // namespace

Word WordOps::reduce(const Word& w) const {
    Reducer red{g_, identity(w.start), w.start};
    red.push_syllable(w.head);
    for (const auto& [l, z] : w.tail) {
        red.push_letter(l);
        red.push_syllable(z);
    }
    return std::move(red.out);
}

Word WordOps::multiply(const Word& u, const Word& w) const {
    if (end_vertex(u) != w.start) throw InvalidInput("word concatenation breaks walk typing");
    Word cat = u;
    cat.trailing() = vec_add(cat.trailing(), w.head);
    for (const auto& p : w.tail) cat.tail.push_back(p);
    return reduce(cat);
}

Word WordOps::invert(const Word& u) const {
    Word r;
    r.start = end_vertex(u);
    r.head = vec_neg(u.trailing());
    for (auto it = u.tail.rbegin(); it != u.tail.rend(); ++it) {
        Letter inv{it->first.edge, -it->first.sign};
        const VecZ* prev = (it + 1 != u.tail.rend()) ? &(it + 1)->second : &u.head;
        r.tail.emplace_back(inv, vec_neg(*prev));
    }
    return reduce(r);
}

Word WordOps::append_vertex_element(const Word& w, int vertex, const VecZ& z) const {
    Word r = w;
    for (const Letter& l : g_.tree_path(end_vertex(w), vertex)) r.tail.emplace_back(l, VecZ(g_.rank(), 0));
    r.trailing() = vec_add(r.trailing(), z);
    return reduce(r);
}

Word WordOps::append_stable_letter(const Word& w, int edge, int sign) const {
    Word r = w;
    int depart = sign < 0 ? g_.edge(edge).from : g_.edge(edge).to;
    for (const Letter& l : g_.tree_path(end_vertex(w), depart)) r.tail.emplace_back(l, VecZ(g_.rank(), 0));
    r.tail.emplace_back(Letter{edge, sign}, VecZ(g_.rank(), 0));
    return reduce(r);
}

Word WordOps::vertex_generator(int vertex, int coordinate, int sign) const {
    VecZ z(g_.rank(), 0);
    z[coordinate] = sign;
    Word w = append_vertex_element(identity(g_.base()), vertex, z);
    // Close the loop back to the base vertex.
    for (const Letter& l : g_.tree_path(end_vertex(w), g_.base())) w.tail.emplace_back(l, VecZ(g_.rank(), 0));
    return reduce(w);
}

Word WordOps::stable_letter(int edge, int sign) const {
    Word w = append_stable_letter(identity(g_.base()), edge, sign);
    for (const Letter& l : g_.tree_path(end_vertex(w), g_.base())) w.tail.emplace_back(l, VecZ(g_.rank(), 0));
    return reduce(w);
}

Word WordOps::coset_rep_vertex(const Word& w) const {
    Word r = reduce(w);
    r.trailing().assign(g_.rank(), 0);
    return r;
}

bool WordOps::equal(const Word& a, const Word& b) const { return word_key(a) == word_key(b); }

std::vector<BallElement> enumerate_ball(const WordOps& ops, int L, std::size_t guard) {
    const GraphOfGroups& g = ops.graph();
    std::vector<Word> gens;
    for (int v = 0; v < g.vertex_count(); ++v)
        for (int i = 0; i < g.rank(); ++i)
            for (int s : {+1, -1}) gens.push_back(ops.vertex_generator(v, i, s));
    for (int e = 0; e < g.edge_count(); ++e) {
        if (g.edge(e).in_tree) continue;
        for (int s : {+1, -1}) gens.push_back(ops.stable_letter(e, s));
    }

    std::vector<BallElement> out;
    std::map<std::string, int> seen;
    Word id = ops.identity(g.base());
    seen.emplace(word_key(id), 0);
    out.push_back({id, 0});
    std::size_t layer_begin = 0;
    for (int len = 1; len <= L; ++len) {
        std::size_t layer_end = out.size();
        std::map<std::string, Word> next;
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            for (const Word& gen : gens) {
                Word p = ops.multiply(out[i].word, gen);
                std::string key = word_key(p);
                if (seen.count(key) || next.count(key)) continue;
                next.emplace(std::move(key), std::move(p));
                if (out.size() + next.size() > guard)
                    throw ResourceGuard("enumerate_ball guard exceeded at " +
                                        std::to_string(out.size() + next.size()) + " elements");
            }
        }
        for (auto& [key, word] : next) {
            seen.emplace(key, len);
            out.push_back({std::move(word), len});
        }
        layer_begin = layer_end;
    }
    return out;
}

} // namespace treefiber
