#include "treefiber/metric.hpp"

#include <algorithm>
#include <cmath>

namespace treefiber {

// ---------------------------------------------------------------- RegularTree

RegularTree::RegularTree(int degree) : degree_(degree) {
    if (degree < 2) throw InvalidInput("regular tree needs degree >= 2");
    nodes_.push_back({-1, 0, {}});
}

int RegularTree::child(int id, int slot) {
    if (nodes_[id].children.empty()) {
        int count = nodes_[id].parent < 0 ? degree_ : degree_ - 1;
        int depth = nodes_[id].depth;
        for (int c = 0; c < count; ++c) {
            nodes_.push_back({id, depth + 1, {}});
            nodes_[id].children.push_back(static_cast<int>(nodes_.size()) - 1);
        }
    }
    return nodes_[id].children[slot];
}

std::vector<int> RegularTree::neighbors(int id) {
    std::vector<int> out;
    if (nodes_[id].parent >= 0) out.push_back(nodes_[id].parent);
    int count = nodes_[id].parent < 0 ? degree_ : degree_ - 1;
    for (int c = 0; c < count; ++c) out.push_back(child(id, c));
    return out;
}

int RegularTree::distance(int a, int b) {
    int d = 0;
    while (a != b) {
        if (nodes_[a].depth < nodes_[b].depth) std::swap(a, b);
        a = nodes_[a].parent;
        ++d;
    }
    return d;
}

std::vector<int> RegularTree::path(int a, int b) {
    std::vector<int> up{a}, down{b};
    int x = a, y = b;
    while (x != y) {
        if (nodes_[x].depth >= nodes_[y].depth) {
            x = nodes_[x].parent;
            up.push_back(x);
        } else {
            y = nodes_[y].parent;
            down.push_back(y);
        }
    }
    down.pop_back(); // LCA already in `up`
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

std::vector<int> BassSerreGeometry::neighbors(int id) {
    std::vector<int> out;
    for (const auto& [ref, v] : tree_->neighbors(id)) {
        (void)ref;
        out.push_back(v);
    }
    return out;
}

// ------------------------------------------------------------------ HypPoint

HypPoint HypPoint::polar(double r, double theta) {
    return {std::sinh(r) * std::cos(theta), std::sinh(r) * std::sin(theta), std::cosh(r)};
}

// --------------------------------------------------------------------- Space

SpacePtr Space::tree(std::shared_ptr<TreeGeometry> geom) {
    auto sp = std::shared_ptr<Space>(new Space());
    sp->tag_ = Tag::Tree;
    sp->dim_ = 1;
    sp->base_ = ModelPoint(TreePoint::vertex(geom->root()));
    sp->tree_ = std::move(geom);
    return sp;
}

SpacePtr Space::euclidean(int dim, std::vector<double> base) {
    if (dim < 1) throw InvalidInput("euclidean dimension must be positive");
    if (base.empty()) base.assign(dim, 0.0);
    if (static_cast<int>(base.size()) != dim) throw InvalidInput("basepoint dimension mismatch");
    auto sp = std::shared_ptr<Space>(new Space());
    sp->tag_ = Tag::Euclidean;
    sp->dim_ = dim;
    sp->base_ = ModelPoint(std::move(base));
    return sp;
}

SpacePtr Space::hyperbolic() {
    auto sp = std::shared_ptr<Space>(new Space());
    sp->tag_ = Tag::Hyperbolic;
    sp->dim_ = 2;
    sp->base_ = ModelPoint(HypPoint{0, 0, 1});
    return sp;
}

SpacePtr Space::product(SpacePtr left, SpacePtr right) {
    auto sp = std::shared_ptr<Space>(new Space());
    sp->tag_ = Tag::Product;
    sp->dim_ = left->dim_ + right->dim_;
    sp->base_ = ModelPoint(left->basepoint(), right->basepoint());
    sp->left_ = std::move(left);
    sp->right_ = std::move(right);
    return sp;
}

void Space::validate(const ModelPoint& p) const {
    switch (tag_) {
        case Tag::Tree: {
            const TreePoint& t = p.tree();
            if (t.s < 0 || t.s > 1) throw InvalidInput("tree offset outside [0,1]");
            if (t.a != t.b && tree_->distance(t.a, t.b) != 1)
                throw InvalidInput("tree point endpoints not adjacent");
            break;
        }
        case Tag::Euclidean:
            if (static_cast<int>(p.eucl().size()) != dim_)
                throw InvalidInput("euclidean point dimension mismatch");
            break;
        case Tag::Hyperbolic: {
            const HypPoint& h = p.hyp();
            if (h.z <= 0) throw InvalidInput("hyperboloid point must have z > 0");
            double res = h.x * h.x + h.y * h.y - h.z * h.z + 1.0;
            double scale = std::max(1.0, h.z * h.z);
            if (std::abs(res) > 1e-9 * scale)
                throw InvalidInput("hyperboloid constraint violated");
            break;
        }
        case Tag::Product:
            left_->validate(p.left());
            right_->validate(p.right());
            break;
    }
}

namespace {

double tree_node_to_point(TreeGeometry& g, int u, const TreePoint& q) {
    if (q.a == q.b) return static_cast<double>(g.distance(u, q.a));
    return std::min(g.distance(u, q.a) + q.s, g.distance(u, q.b) + 1.0 - q.s);
}

bool same_edge(const TreePoint& p, const TreePoint& q, double& sp, double& sq) {
    if (p.a == q.a && p.b == q.b) {
        sp = p.s;
        sq = q.s;
        return true;
    }
    if (p.a == q.b && p.b == q.a) {
        sp = p.s;
        sq = 1.0 - q.s;
        return true;
    }
    // Vertex points double as degenerate edges; handled by the caller.
    return false;
}

double tree_distance(TreeGeometry& g, const TreePoint& p, const TreePoint& q) {
    double sp, sq;
    if (p.a != p.b && q.a != q.b && same_edge(p, q, sp, sq)) return std::abs(sp - sq);
    if (p.a == p.b) return tree_node_to_point(g, p.a, q);
    if (q.a == q.b) return tree_node_to_point(g, q.a, p);
    return std::min(p.s + tree_node_to_point(g, p.a, q), (1.0 - p.s) + tree_node_to_point(g, p.b, q));
}

double hyp_distance(const HypPoint& p, const HypPoint& q) {
    // Polar form is stable far from the origin where the Minkowski dot cancels.
    double r1 = p.radius(), r2 = q.radius();
    double dtheta = p.angle() - q.angle();
    double arg = std::cosh(r1 - r2) + std::sinh(r1) * std::sinh(r2) * (1.0 - std::cos(dtheta));
    return std::acosh(std::max(1.0, arg));
}

// Walks the geodesic [p, q] in a tree and returns the point at arclength s.
TreePoint tree_geodesic_point(TreeGeometry& g, const TreePoint& p, const TreePoint& q, double s) {
    double total = tree_distance(g, p, q);
    if (s <= 0) return p;
    if (s >= total) return q;
    double sp, sq;
    if (p.a != p.b && q.a != q.b && same_edge(p, q, sp, sq)) {
        double u = sp + (sq > sp ? s : -s);
        return {p.a, p.b, u};
    }
    // Exit vertex of p toward q, then the vertex path, then q's entry offset.
    int exit_p = p.a;
    double lead = 0;
    if (p.a != p.b) {
        double via_a = p.s + tree_node_to_point(g, p.a, q);
        double via_b = (1.0 - p.s) + tree_node_to_point(g, p.b, q);
        if (via_a <= via_b) {
            exit_p = p.a;
            lead = p.s;
        } else {
            exit_p = p.b;
            lead = 1.0 - p.s;
        }
        if (s <= lead) {
            // Still on p's edge, moving toward exit_p.
            double u = exit_p == p.a ? p.s - s : p.s + s;
            return {p.a, p.b, u};
        }
    }
    int entry_q = q.a;
    double tail = 0;
    if (q.a != q.b) {
        double via_a = tree_node_to_point(g, q.a, {exit_p, exit_p, 0}) + q.s;
        double via_b = tree_node_to_point(g, q.b, {exit_p, exit_p, 0}) + 1.0 - q.s;
        if (via_a <= via_b) {
            entry_q = q.a;
            tail = q.s;
        } else {
            entry_q = q.b;
            tail = 1.0 - q.s;
        }
    }
    std::vector<int> nodes = g.path(exit_p, entry_q);
    double rem = s - lead;
    std::size_t hop = static_cast<std::size_t>(rem);
    if (hop + 1 < nodes.size()) {
        double frac = rem - static_cast<double>(hop);
        if (frac == 0.0) return TreePoint::vertex(nodes[hop]);
        return {nodes[hop], nodes[hop + 1], frac};
    }
    // On q's edge.
    double into = rem - static_cast<double>(nodes.size() - 1);
    if (q.a == q.b || into <= 0) return TreePoint::vertex(entry_q);
    (void)tail;
    double u = entry_q == q.a ? into : 1.0 - into;
    return {q.a, q.b, u};
}

} // namespace

double Space::distance(const ModelPoint& a, const ModelPoint& b) const {
    switch (tag_) {
        case Tag::Tree:
            return tree_distance(*tree_, a.tree(), b.tree());
        case Tag::Euclidean: {
            double acc = 0;
            for (int i = 0; i < dim_; ++i) {
                double d = a.eucl()[i] - b.eucl()[i];
                acc += d * d;
            }
            return std::sqrt(acc);
        }
        case Tag::Hyperbolic:
            return hyp_distance(a.hyp(), b.hyp());
        case Tag::Product: {
            double dl = left_->distance(a.left(), b.left());
            double dr = right_->distance(a.right(), b.right());
            return std::hypot(dl, dr);
        }
    }
    throw InvalidInput("unreachable");
}

ModelPoint Space::geodesic_point(const ModelPoint& a, const ModelPoint& b, double s) const {
    switch (tag_) {
        case Tag::Tree:
            return ModelPoint(tree_geodesic_point(*tree_, a.tree(), b.tree(), s));
        case Tag::Euclidean: {
            double d = distance(a, b);
            if (d == 0) return a;
            double t = s / d;
            std::vector<double> r(dim_);
            for (int i = 0; i < dim_; ++i) r[i] = a.eucl()[i] + t * (b.eucl()[i] - a.eucl()[i]);
            return ModelPoint(std::move(r));
        }
        case Tag::Hyperbolic: {
            double d = distance(a, b);
            if (d == 0 || s <= 0) return a;
            if (s >= d) return b;
            const HypPoint& A = a.hyp();
            const HypPoint& B = b.hyp();
            double c1 = std::sinh(d - s) / std::sinh(d);
            double c2 = std::sinh(s) / std::sinh(d);
            HypPoint r{c1 * A.x + c2 * B.x, c1 * A.y + c2 * B.y, c1 * A.z + c2 * B.z};
            // Renormalize onto the sheet against rounding drift.
            double norm = std::sqrt(std::max(1e-300, r.z * r.z - r.x * r.x - r.y * r.y));
            r.x /= norm;
            r.y /= norm;
            r.z /= norm;
            return ModelPoint(r);
        }
        case Tag::Product: {
            double dl = left_->distance(a.left(), b.left());
            double dr = right_->distance(a.right(), b.right());
            double d = std::hypot(dl, dr);
            if (d == 0) return a;
            return ModelPoint(left_->geodesic_point(a.left(), b.left(), s * dl / d),
                              right_->geodesic_point(a.right(), b.right(), s * dr / d));
        }
    }
    throw InvalidInput("unreachable");
}

ModelPoint Space::project_to_ball(const ModelPoint& y, double r) const {
    if (r <= 0) throw InvalidInput("ball radius must be positive");
    double d = distance(base_, y);
    if (d <= r) return y;
    return geodesic_point(base_, y, r);
}

ModelPoint Space::midpoint(const ModelPoint& a, const ModelPoint& b) const {
    return geodesic_point(a, b, distance(a, b) / 2);
}

bool Space::in_cone_nbhd(const ModelPoint& y, const ConeNbhd& v) const {
    double dx = distance(base_, v.center);
    if (dx <= 0) throw InvalidInput("cone neighborhood center must differ from the basepoint");
    if (v.eps <= 0) throw InvalidInput("cone neighborhood epsilon must be positive");
    double dy = distance(base_, y);
    if (!(dy > dx)) return false;
    return distance(v.center, project_to_ball(y, dx)) < v.eps;
}

bool Space::in_cone_nbhd(const GeodesicRay& ray, const ConeNbhd& v) const {
    double dx = distance(base_, v.center);
    if (dx <= 0) throw InvalidInput("cone neighborhood center must differ from the basepoint");
    if (v.eps <= 0) throw InvalidInput("cone neighborhood epsilon must be positive");
    return distance(v.center, ray.eval(*this, dx)) < v.eps;
}

GeodesicRay Space::ray_through(const ModelPoint& y) const {
    switch (tag_) {
        case Tag::Euclidean: {
            double d = distance(base_, y);
            if (d == 0) throw InvalidInput("no ray through the basepoint itself");
            std::vector<double> dir(dim_);
            for (int i = 0; i < dim_; ++i) dir[i] = (y.eucl()[i] - base_.eucl()[i]) / d;
            return GeodesicRay(GeodesicRay::EuclRay{std::move(dir)});
        }
        case Tag::Hyperbolic: {
            const HypPoint& h = y.hyp();
            if (h.radius() == 0) throw InvalidInput("no ray through the basepoint itself");
            return GeodesicRay(GeodesicRay::HypRay{h.angle()});
        }
        default:
            throw InvalidInput("ray_through is defined for Euclidean and hyperbolic spaces");
    }
}

// --------------------------------------------------------------- GeodesicRay

double GeodesicRay::depth(const Space& sp) const {
    if (is<TreeRay>()) return static_cast<double>(as<TreeRay>().nodes.size() - 1);
    if (is<ProdRay>()) {
        const ProdRay& p = as<ProdRay>();
        double m = p.m;
        double a = std::isinf(m) ? 0.0 : 1.0 / std::sqrt(1.0 + m * m);
        double b = std::isinf(m) ? 1.0 : m / std::sqrt(1.0 + m * m);
        double dl = p.left->depth(*sp.left());
        double dr = p.right->depth(*sp.right());
        double cap = std::numeric_limits<double>::infinity();
        if (a > 0) cap = std::min(cap, dl / a);
        if (b > 0) cap = std::min(cap, dr / b);
        return cap;
    }
    return std::numeric_limits<double>::infinity();
}

ModelPoint GeodesicRay::eval(const Space& sp, double t) const {
    if (t < 0) throw InvalidInput("ray parameter must be nonnegative");
    switch (sp.tag()) {
        case Space::Tag::Tree: {
            const TreeRay& r = as<TreeRay>();
            if (t > static_cast<double>(r.nodes.size() - 1) + 1e-12)
                throw InvalidInput("tree ray evaluated past its truncation depth");
            std::size_t hop = static_cast<std::size_t>(t);
            double frac = t - static_cast<double>(hop);
            if (hop >= r.nodes.size() - 1) return ModelPoint(TreePoint::vertex(r.nodes.back()));
            if (frac == 0.0) return ModelPoint(TreePoint::vertex(r.nodes[hop]));
            return ModelPoint(TreePoint{r.nodes[hop], r.nodes[hop + 1], frac});
        }
        case Space::Tag::Euclidean: {
            const EuclRay& r = as<EuclRay>();
            std::vector<double> p(sp.dim());
            for (int i = 0; i < sp.dim(); ++i) p[i] = sp.basepoint().eucl()[i] + t * r.dir[i];
            return ModelPoint(std::move(p));
        }
        case Space::Tag::Hyperbolic:
            return ModelPoint(HypPoint::polar(t, as<HypRay>().theta));
        case Space::Tag::Product: {
            const ProdRay& r = as<ProdRay>();
            double m = r.m;
            double a = std::isinf(m) ? 0.0 : 1.0 / std::sqrt(1.0 + m * m);
            double b = std::isinf(m) ? 1.0 : m / std::sqrt(1.0 + m * m);
            return ModelPoint(r.left->eval(*sp.left(), a * t), r.right->eval(*sp.right(), b * t));
        }
    }
    throw InvalidInput("unreachable");
}

// ------------------------------------------------------------ cover machinery

CoverReport cover_constants(const Space& sp, const std::vector<ConeNbhd>& cover,
                            const std::vector<GeodesicRay>& net, double margin) {
    if (cover.empty() || net.empty()) throw InvalidInput("cover and net must be nonempty");
    if (margin <= 0) throw InvalidInput("margin must be positive");

    CoverReport report;
    report.assignment.assign(net.size(), -1);
    for (std::size_t k = 0; k < net.size(); ++k) {
        for (std::size_t i = 0; i < cover.size(); ++i)
            if (sp.in_cone_nbhd(net[k], cover[i])) {
                report.assignment[k] = static_cast<int>(i);
                break;
            }
        if (report.assignment[k] < 0)
            throw CoverageError("boundary net ray " + std::to_string(k) +
                                " is not covered by any cone neighborhood");
    }

    double max_center = 0;
    for (const ConeNbhd& v : cover) max_center = std::max(max_center, sp.distance(sp.basepoint(), v.center));
    // Strictly exceeds max + margin for any positive margin.
    double R = max_center + 2 * margin;

    for (const GeodesicRay& ray : net)
        if (ray.depth(sp) < R)
            throw InvalidInput("boundary net rays truncated shallower than the cover radius");

    std::vector<ModelPoint> sphere;
    sphere.reserve(net.size());
    for (const GeodesicRay& ray : net) sphere.push_back(ray.eval(sp, R));

    // eta_i(x) at net resolution: distance to the nearest sphere point whose ray
    // escapes V_i. delta' = min over x of max_i eta_i.
    double delta_prime = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < net.size(); ++k) {
        double best = 0;
        for (std::size_t i = 0; i < cover.size(); ++i) {
            double eta = 2 * R;
            for (std::size_t j = 0; j < net.size(); ++j) {
                if (sp.in_cone_nbhd(net[j], cover[i])) continue;
                eta = std::min(eta, sp.distance(sphere[k], sphere[j]));
            }
            best = std::max(best, eta);
        }
        delta_prime = std::min(delta_prime, best);
    }

    report.delta_prime = delta_prime;
    report.consts.radius_R = R;
    report.consts.delta = std::min(delta_prime / 2, 1.0 / R);

    auto missing = verify_cover_constants(sp, cover, net, report.consts);
    if (!missing.empty())
        throw CertificationFailure("cover constants fail their own net post-check at ray " +
                                   std::to_string(missing.front()));
    return report;
}

std::vector<int> verify_cover_constants(const Space& sp, const std::vector<ConeNbhd>& cover,
                                        const std::vector<GeodesicRay>& net,
                                        const CoverConstants& consts) {
    std::vector<int> bad;
    const double R = consts.radius_R;
    std::vector<ModelPoint> sphere;
    sphere.reserve(net.size());
    for (const GeodesicRay& ray : net) sphere.push_back(ray.eval(sp, R));
    std::vector<std::vector<char>> in_cover(cover.size(), std::vector<char>(net.size(), 0));
    for (std::size_t i = 0; i < cover.size(); ++i)
        for (std::size_t j = 0; j < net.size(); ++j)
            in_cover[i][j] = sp.in_cone_nbhd(net[j], cover[i]) ? 1 : 0;

    for (std::size_t k = 0; k < net.size(); ++k) {
        bool ok = false;
        for (std::size_t i = 0; i < cover.size() && !ok; ++i) {
            bool contained = true;
            for (std::size_t j = 0; j < net.size(); ++j) {
                if (sp.distance(sphere[k], sphere[j]) < consts.delta && !in_cover[i][j]) {
                    contained = false;
                    break;
                }
            }
            ok = contained;
        }
        if (!ok) bad.push_back(static_cast<int>(k));
    }
    return bad;
}

double sublinear_ball_threshold(const CoverConstants& consts,
                                const std::function<double(double)>& phi, bool phi_certified,
                                double horizon) {
    if (!phi_certified)
        throw CertificationFailure("sublinear_ball_threshold requires a certified sublinear phi");
    const double R = consts.radius_R;
    const double d2 = consts.delta * consts.delta;
    // Geometric grid anchored at R; conservative upward rounding: the answer is
    // the grid point after the last failure.
    std::vector<double> grid;
    for (double t = R; t <= horizon; t *= 1.02) grid.push_back(t);
    auto holds = [&](double t) {
        double p = phi(t);
        return (t - p > R) && (p / (t - p) < d2);
    };
    int last_fail = -1;
    for (int i = 0; i < static_cast<int>(grid.size()); ++i)
        if (!holds(grid[i])) last_fail = i;
    if (last_fail + 1 >= static_cast<int>(grid.size()))
        throw CertificationFailure("no threshold below the horizon; phi is not sublinear enough");
    return grid[last_fail + 1];
}

// ------------------------------------------------------------- boundary nets

std::vector<GeodesicRay> tree_boundary_net(const Space& sp, int depth) {
    if (sp.tag() != Space::Tag::Tree) throw InvalidInput("tree net on a non-tree space");
    if (depth < 1) throw InvalidInput("net depth must be positive");
    TreeGeometry& g = sp.tree_geometry();
    std::vector<std::vector<int>> paths{{g.root()}};
    for (int d = 0; d < depth; ++d) {
        std::vector<std::vector<int>> next;
        for (const auto& p : paths)
            for (int nb : g.neighbors(p.back())) {
                if (p.size() >= 2 && nb == p[p.size() - 2]) continue;
                auto q = p;
                q.push_back(nb);
                next.push_back(std::move(q));
            }
        paths = std::move(next);
    }
    std::vector<GeodesicRay> out;
    out.reserve(paths.size());
    for (auto& p : paths) out.push_back(GeodesicRay(GeodesicRay::TreeRay{std::move(p)}));
    return out;
}

std::vector<GeodesicRay> euclidean_boundary_net(const Space& sp, int samples) {
    if (sp.tag() != Space::Tag::Euclidean) throw InvalidInput("euclidean net on a wrong space");
    std::vector<GeodesicRay> out;
    if (sp.dim() == 1) {
        out.push_back(GeodesicRay(GeodesicRay::EuclRay{{+1.0}}));
        out.push_back(GeodesicRay(GeodesicRay::EuclRay{{-1.0}}));
        return out;
    }
    if (sp.dim() != 2) throw InvalidInput("euclidean nets implemented for dim 1 and 2");
    for (int k = 0; k < samples; ++k) {
        double th = 2 * M_PI * k / samples;
        out.push_back(GeodesicRay(GeodesicRay::EuclRay{{std::cos(th), std::sin(th)}}));
    }
    return out;
}

std::vector<GeodesicRay> product_boundary_net(const Space& sp, std::vector<GeodesicRay> left,
                                              std::vector<GeodesicRay> right,
                                              const std::vector<double>& slopes) {
    if (sp.tag() != Space::Tag::Product) throw InvalidInput("product net on a non-product space");
    std::vector<GeodesicRay> out;
    for (const auto& l : left)
        for (const auto& r : right)
            for (double m : slopes) {
                auto lp = std::make_shared<GeodesicRay>(l);
                auto rp = std::make_shared<GeodesicRay>(r);
                out.push_back(GeodesicRay(GeodesicRay::ProdRay{lp, rp, m}));
            }
    return out;
}

} // namespace treefiber
