#pragma once

#include "treefiber/metric.hpp"
#include "treefiber/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace treefiber {

// Symbolic sublinear functions. All members are concave and increasing with
// phi(0) = 0, so the uniform modulus max_{|x-y|=t}|phi(x)-phi(y)| equals
// phi(t) itself (asserted in tests).
struct SublinearFn {
    enum class Kind { Zero, Log, Pow, LogLog };
    Kind kind = Kind::Log;
    double c = 1.0; // Pow scale
    double p = 0.5; // Pow exponent, 0 < p < 1

    double eval(double x) const;
    // phi(X + d) - phi(X), stable when d << X.
    double eval_delta(double X, double d) const;
    double inverse(double y) const; // may overflow to +inf (Log family)
    std::string name() const;

    static SublinearFn zero() { return {Kind::Zero, 0, 0}; }
    static SublinearFn log() { return {Kind::Log, 1, 0}; }
    static SublinearFn loglog() { return {Kind::LogLog, 1, 0}; }
    static SublinearFn pow(double c, double p) { return {Kind::Pow, c, p}; }
    static SublinearFn parse(const std::string& name); // "zero"|"log"|"loglog"|"pow:p"
};

// Proper bound psi(R) = psi0 + f(R) with f(x) = a(C^x - 1) + b x from the
// closed family: a, b >= 0, C > 1, a + b >= 1, and derivative-at-0
// a ln C + b >= 1 so the identity branch of the profile meets the curved
// branch with slope <= 1.
struct ProperFunctionPair {
    Rational psi0{0};
    Rational a{0};
    Rational b{1};
    Rational C{2};

    void validate() const;
    double f(double x) const;
    double f_prime(double x) const;
    double f_inverse(double y) const; // closed form when a == 0 or b == 0, else bisection to 1e-12
    // delta with f(X + delta) = f(X) + s, stable for huge X (0 when below resolution).
    double f_shift_inverse(double X, double s) const;
    double psi(double R) const { return psi0.to_double() + f(R); }
};

// Fit a ProperFunctionPair over raw (R, bound) samples. With an exponential
// growth hint (D, C): psi0 = D, f(R) = D(C^R - 1) + R, which majorizes D·C^R
// for every R >= 0. Without a hint: psi0 = max bound (decimal-rounded up),
// f(R) = R.
ProperFunctionPair envelope(const std::vector<std::pair<double, double>>& raw_samples,
                            std::optional<std::pair<Rational, Rational>> growth_hint);

struct ConjResult {
    double value = 0;  // hhat(alpha * hhat^{-1}(t) + beta)
    double delta = 0;  // value - t, computed without cancellation
    bool saturated = false; // true when the exact delta is below double resolution
};

// The 1-d compressing profile. Identity below psi0, psi0 + phi(f^{-1}(x-psi0))
// above; optionally precomposed with log(1+x), which is what makes the profile
// linearly controlled.
class CompressionMap {
  public:
    CompressionMap(ProperFunctionPair pair, SublinearFn phi, bool log_precomposed = false);

    const ProperFunctionPair& pair() const { return pair_; }
    const SublinearFn& phi() const { return phi_; }
    bool log_precomposed() const { return pre_; }
    double kappa() const { return kappa_; }

    double hhat(double x) const;
    double hhat_inverse(double y) const;

    // Sublinear contract modulus: phi*(R) = phi(R + kappa) + psi0.
    double phi_star(double R) const;
    // The paper's unshifted one-step modulus phi(R) + psi0, reported alongside.
    double phi_unshifted(double R) const;

    // hhat(alpha·hhat^{-1}(t) + beta) evaluated through a log-space path that
    // stays finite where naive evaluation overflows. Requires the
    // log-precomposed profile and alpha > 0.
    ConjResult conjugate_scale(double alpha, double beta, double t) const;

    // |hhat(m·hhat^{-1}(t))/t - 1|; certified only for the log-precomposed
    // construction.
    double linear_control_defect(double m, double t) const;

    std::function<double(double)> profile() const {
        return [this](double x) { return hhat(x); };
    }

  private:
    double core(double y) const;
    double core_inverse(double t) const;

    ProperFunctionPair pair_;
    SublinearFn phi_;
    bool pre_;
    double psi0_;
    double kappa_;
};

// Radial compression about a center along geodesic rays. Defined on Euclidean
// spaces (any center) and the hyperbolic plane (center = basepoint); trees are
// rejected, rays bifurcate there.
ModelPoint radial_compress(const Space& sp, const ModelPoint& center,
                           const std::function<double(double)>& profile, const ModelPoint& p);

struct ContractPair {
    ModelPoint x;
    ModelPoint y;
    double R = 0;
};

struct ContractReport {
    std::size_t checked = 0;
    double max_ratio_shifted = 0;   // d(hx,hy) / (4 phi*(R))
    double max_ratio_unshifted = 0; // d(hx,hy) / (phi(R) + psi0)
};

// Checks d(h x, h y) <= 4 phi*(R) for every pair (precondition d(x,y) < psi(R));
// throws CertificationFailure with the violating pair otherwise.
ContractReport compression_contract_check(const Space& sp, const ModelPoint& center,
                                          const CompressionMap& map,
                                          const std::vector<ContractPair>& pairs,
                                          double tol = 1e-9);

struct SublinearCertificate {
    bool certified = false;
    double ratio_at_horizon = 0;
    double threshold = 0;
    double horizon = 0;
};

// Heuristic certificate: phi(x)/x below `threshold` at the horizon and
// nonincreasing over the last decade of a geometric grid. Labeled heuristic in
// every report that carries it.
SublinearCertificate certify_sublinear(const std::function<double(double)>& phi, double horizon,
                                       double threshold = 1e-2);

} // namespace treefiber
