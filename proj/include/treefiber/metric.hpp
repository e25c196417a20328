#pragma once

#include "treefiber/bass_serre.hpp"
#include "treefiber/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace treefiber {

// Locally finite simplicial tree with interned integer node ids. Unit edge
// lengths. Implementations expand lazily; expansion is idempotent so results
// are independent of query order.
class TreeGeometry {
  public:
    virtual ~TreeGeometry() = default;
    virtual int root() const = 0;
    virtual std::vector<int> neighbors(int id) = 0;
    virtual int distance(int a, int b) = 0;
    virtual std::vector<int> path(int a, int b) = 0; // inclusive vertex list
};

// The d-regular tree (every vertex has degree d); T4 with d = 4.
class RegularTree : public TreeGeometry {
  public:
    explicit RegularTree(int degree);
    int root() const override { return 0; }
    std::vector<int> neighbors(int id) override;
    int distance(int a, int b) override;
    std::vector<int> path(int a, int b) override;
    int depth(int id) const { return nodes_[id].depth; }

  private:
    int child(int id, int slot);
    struct Node {
        int parent;
        int depth;
        std::vector<int> children;
    };
    int degree_;
    std::vector<Node> nodes_;
};

// Bass-Serre tree viewed as bare tree geometry.
class BassSerreGeometry : public TreeGeometry {
  public:
    explicit BassSerreGeometry(std::shared_ptr<BassSerreTree> tree) : tree_(std::move(tree)) {}
    int root() const override { return tree_->base(); }
    std::vector<int> neighbors(int id) override;
    int distance(int a, int b) override { return tree_->distance(a, b); }
    std::vector<int> path(int a, int b) override { return tree_->path(a, b); }
    BassSerreTree& tree() { return *tree_; }

  private:
    std::shared_ptr<BassSerreTree> tree_;
};

// Point on a metric tree: on the edge a--b at parameter s from a (0 <= s <= 1);
// vertex points have a == b, s == 0.
struct TreePoint {
    int a = 0;
    int b = 0;
    double s = 0.0;
    static TreePoint vertex(int v) { return {v, v, 0.0}; }
};

struct HypPoint {
    double x = 0, y = 0, z = 1; // hyperboloid sheet, z > 0
    static HypPoint polar(double r, double theta);
    double radius() const { return std::asinh(std::hypot(x, y)); }
    double angle() const { return (x == 0 && y == 0) ? 0.0 : std::atan2(y, x); }
};

class ModelPoint {
  public:
    ModelPoint() : data_(TreePoint{}) {}
    explicit ModelPoint(TreePoint p) : data_(p) {}
    explicit ModelPoint(std::vector<double> eucl) : data_(std::move(eucl)) {}
    explicit ModelPoint(HypPoint p) : data_(p) {}
    ModelPoint(ModelPoint left, ModelPoint right)
        : data_(std::make_shared<const std::pair<ModelPoint, ModelPoint>>(std::move(left),
                                                                          std::move(right))) {}

    const TreePoint& tree() const { return std::get<TreePoint>(data_); }
    const std::vector<double>& eucl() const { return std::get<std::vector<double>>(data_); }
    const HypPoint& hyp() const { return std::get<HypPoint>(data_); }
    const ModelPoint& left() const { return std::get<3>(data_)->first; }
    const ModelPoint& right() const { return std::get<3>(data_)->second; }

  private:
    std::variant<TreePoint, std::vector<double>, HypPoint,
                 std::shared_ptr<const std::pair<ModelPoint, ModelPoint>>>
        data_;
};

class Space;
using SpacePtr = std::shared_ptr<const Space>;

// Unit-speed geodesic ray from the basepoint. Tree rays are truncated vertex
// paths (depth is an explicit certification parameter); product rays carry a
// slope m in [0, inf].
class GeodesicRay {
  public:
    struct TreeRay {
        std::vector<int> nodes; // nodes[0] = base
    };
    struct EuclRay {
        std::vector<double> dir; // unit vector
    };
    struct HypRay {
        double theta = 0;
    };
    struct ProdRay {
        std::shared_ptr<const GeodesicRay> left;
        std::shared_ptr<const GeodesicRay> right;
        double m = 1; // slope d_right / d_left
    };

    explicit GeodesicRay(TreeRay r) : data_(std::move(r)) {}
    explicit GeodesicRay(EuclRay r) : data_(std::move(r)) {}
    explicit GeodesicRay(HypRay r) : data_(r) {}
    explicit GeodesicRay(ProdRay r) : data_(std::move(r)) {}

    // Max parameter this ray can be evaluated at (tree truncation; +inf else).
    double depth(const Space& sp) const;
    ModelPoint eval(const Space& sp, double t) const;

    template <class T> const T& as() const { return std::get<T>(data_); }
    template <class T> bool is() const { return std::holds_alternative<T>(data_); }

  private:
    std::variant<TreeRay, EuclRay, HypRay, ProdRay> data_;
};

// Cone-topology basis element V(x, eps): points past x whose ball projection
// lands eps-close to x.
struct ConeNbhd {
    ModelPoint center;
    double eps = 0;
};

struct CoverConstants {
    double radius_R = 0;
    double delta = 0;
};

// Proper CAT(0) model space with an immutable basepoint fixed at construction.
class Space {
  public:
    enum class Tag { Tree, Euclidean, Hyperbolic, Product };

    static SpacePtr tree(std::shared_ptr<TreeGeometry> geom);
    static SpacePtr euclidean(int dim, std::vector<double> base = {});
    static SpacePtr hyperbolic(); // basepoint at the hyperboloid origin
    static SpacePtr product(SpacePtr left, SpacePtr right);

    Tag tag() const { return tag_; }
    int dim() const { return dim_; }
    const ModelPoint& basepoint() const { return base_; }
    TreeGeometry& tree_geometry() const { return *tree_; }
    const SpacePtr& left() const { return left_; }
    const SpacePtr& right() const { return right_; }

    void validate(const ModelPoint& p) const;
    double distance(const ModelPoint& a, const ModelPoint& b) const;
    // Point at arclength s from a on the geodesic [a, b]; requires 0 <= s <= d(a,b).
    ModelPoint geodesic_point(const ModelPoint& a, const ModelPoint& b, double s) const;
    ModelPoint project_to_ball(const ModelPoint& y, double r) const;
    ModelPoint midpoint(const ModelPoint& a, const ModelPoint& b) const;

    bool in_cone_nbhd(const ModelPoint& y, const ConeNbhd& v) const;
    bool in_cone_nbhd(const GeodesicRay& ray, const ConeNbhd& v) const;

    GeodesicRay ray_through(const ModelPoint& y) const; // Euclidean/Hyperbolic only

  private:
    Space() = default;
    Tag tag_ = Tag::Euclidean;
    int dim_ = 0;
    ModelPoint base_;
    std::shared_ptr<TreeGeometry> tree_;
    SpacePtr left_, right_;
};

// Cover/threshold machinery. Net certification: all containment checks are
// evaluated on the supplied boundary net only, and the chosen constants are
// reported together with that caveat.
struct CoverReport {
    CoverConstants consts;
    double delta_prime = 0;
    std::vector<int> assignment; // net ray -> index of a cover element containing it
};

CoverReport cover_constants(const Space& sp, const std::vector<ConeNbhd>& cover,
                            const std::vector<GeodesicRay>& net, double margin);

// Re-checks the cover constants on another (e.g. refined) net; returns indices
// of net rays x where V(x(R), delta) escapes every cover element.
std::vector<int> verify_cover_constants(const Space& sp, const std::vector<ConeNbhd>& cover,
                                        const std::vector<GeodesicRay>& net,
                                        const CoverConstants& consts);

// Least grid value T with phi(t)/(t - phi(t)) < delta^2 and t - phi(t) > R for
// all sampled t >= T. phi must carry a sublinearity certificate.
double sublinear_ball_threshold(const CoverConstants& consts,
                                const std::function<double(double)>& phi, bool phi_certified,
                                double horizon = 1e8);

// Boundary nets for the model spaces (net resolution is the caller's
// certification parameter).
std::vector<GeodesicRay> tree_boundary_net(const Space& sp, int depth);
std::vector<GeodesicRay> euclidean_boundary_net(const Space& sp, int samples);
std::vector<GeodesicRay> product_boundary_net(const Space& sp, std::vector<GeodesicRay> left,
                                              std::vector<GeodesicRay> right,
                                              const std::vector<double>& slopes);

} // namespace treefiber
