#include "treefiber/compression.hpp"

#include <cmath>
#include <limits>

namespace treefiber {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ----------------------------------------------------------------- SublinearFn

double SublinearFn::eval(double x) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Log: return std::log1p(x);
        case Kind::Pow: return c * std::pow(x, p);
        case Kind::LogLog: return std::log1p(std::log1p(x));
    }
    return 0.0;
}

double SublinearFn::eval_delta(double X, double d) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Log:
            return std::log1p(d / (1.0 + X));
        case Kind::Pow:
            if (X <= 0) return c * std::pow(d, p);
            return c * std::pow(X, p) * std::expm1(p * std::log1p(d / X));
        case Kind::LogLog: {
            double inner = std::log1p(X);
            double dinner = std::log1p(d / (1.0 + X));
            return std::log1p(dinner / (1.0 + inner));
        }
    }
    return 0.0;
}

double SublinearFn::inverse(double y) const {
    switch (kind) {
        case Kind::Zero: throw InvalidInput("zero function has no inverse");
        case Kind::Log: return std::expm1(y);
        case Kind::Pow: return std::pow(y / c, 1.0 / p);
        case Kind::LogLog: return std::expm1(std::expm1(y));
    }
    return 0.0;
}

std::string SublinearFn::name() const {
    switch (kind) {
        case Kind::Zero: return "zero";
        case Kind::Log: return "log";
        case Kind::Pow: return "pow:" + std::to_string(p);
        case Kind::LogLog: return "loglog";
    }
    return "?";
}

SublinearFn SublinearFn::parse(const std::string& name) {
    if (name == "zero") return zero();
    if (name == "log") return log();
    if (name == "loglog") return loglog();
    if (name.rfind("pow:", 0) == 0) {
        double p = std::stod(name.substr(4));
        if (!(p > 0 && p < 1)) throw ParseError("pow exponent must lie in (0,1): " + name);
        return pow(1.0, p);
    }
    throw ParseError("unknown sublinear function: " + name);
}

// ---------------------------------------------------------- ProperFunctionPair

void ProperFunctionPair::validate() const {
    if (psi0 < Rational(0) || a < Rational(0) || b < Rational(0))
        throw InvalidInput("proper function pair needs psi0, a, b >= 0");
    if (a + b < Rational(1)) throw InvalidInput("proper function family requires a + b >= 1");
    if (!(C > Rational(1))) throw InvalidInput("exponential base C must exceed 1");
    double deriv0 = a.to_double() * std::log(C.to_double()) + b.to_double();
    if (deriv0 < 1.0 - 1e-12) throw InvalidInput("derivative at 0 must be >= 1");
}

double ProperFunctionPair::f(double x) const {
    double ad = a.to_double(), bd = b.to_double(), Cd = C.to_double();
    double expo = ad == 0 ? 0.0 : ad * std::expm1(x * std::log(Cd));
    return expo + bd * x;
}

double ProperFunctionPair::f_prime(double x) const {
    double ad = a.to_double(), bd = b.to_double(), Cd = C.to_double();
    double lnC = std::log(Cd);
    return (ad == 0 ? 0.0 : ad * lnC * std::exp(x * lnC)) + bd;
}

double ProperFunctionPair::f_inverse(double y) const {
    if (y < 0) throw InvalidInput("f_inverse argument must be nonnegative");
    if (y == 0) return 0.0;
    double ad = a.to_double(), bd = b.to_double(), Cd = C.to_double();
    if (ad == 0) return y / bd;
    if (bd == 0) return std::log1p(y / ad) / std::log(Cd);
    double lo = 0, hi = 1;
    while (f(hi) < y) {
        hi *= 2;
        if (hi > 1e300) throw InvalidInput("f_inverse bracket escaped");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ProperFunctionPair::f_shift_inverse(double X, double s) const {
    if (s == 0) return 0.0;
    double ad = a.to_double(), bd = b.to_double(), Cd = C.to_double();
    if (ad == 0) return s / bd;
    double lnC = std::log(Cd);
    double fp = f_prime(X);
    if (!std::isfinite(fp) || fp > 1e290) return 0.0; // below double resolution
    double d = s / fp;
    // Newton steps on a(C^X)(C^d - 1) + b d = s, all increments stable.
    double aCX = ad * std::exp(X * lnC);
    for (int it = 0; it < 4; ++it) {
        double g = aCX * std::expm1(d * lnC) + bd * d - s;
        double gp = aCX * lnC * std::exp(d * lnC) + bd;
        d -= g / gp;
    }
    return d;
}

ProperFunctionPair envelope(const std::vector<std::pair<double, double>>& raw_samples,
                            std::optional<std::pair<Rational, Rational>> growth_hint) {
    for (const auto& [R, bound] : raw_samples) {
        if (bound < 0 || R < 0) throw InvalidInput("envelope samples must be nonnegative");
    }
    ProperFunctionPair pair;
    if (growth_hint) {
        auto [D, C] = *growth_hint;
        if (!(C > Rational(1))) throw InvalidInput("growth hint base C must exceed 1");
        pair.psi0 = D;
        pair.a = D;
        pair.b = Rational(1);
        pair.C = C;
    } else {
        double maxb = 0;
        for (const auto& [R, bound] : raw_samples) {
            (void)R;
            maxb = std::max(maxb, bound);
        }
        // Decimal round-up keeps the constant exactly representable.
        pair.psi0 = Rational(static_cast<Int>(std::ceil(maxb * 1e6)), 1'000'000);
        pair.a = Rational(0);
        pair.b = Rational(1);
        pair.C = Rational(2);
    }
    pair.validate();
    for (const auto& [R, bound] : raw_samples) {
        if (pair.psi(R) < bound - 1e-9)
            throw InvalidInput("sample (" + std::to_string(R) + ", " + std::to_string(bound) +
                               ") is not majorized by the fitted proper function");
    }
    return pair;
}

// -------------------------------------------------------------- CompressionMap

CompressionMap::CompressionMap(ProperFunctionPair pair, SublinearFn phi, bool log_precomposed)
    : pair_(std::move(pair)), phi_(phi), pre_(log_precomposed) {
    pair_.validate();
    if (phi_.kind == SublinearFn::Kind::Zero)
        throw InvalidInput("compression profile needs a nonzero sublinear function");
    psi0_ = pair_.psi0.to_double();
    kappa_ = pair_.f_inverse(psi0_);
}

double CompressionMap::core(double y) const {
    if (y <= psi0_) return y;
    return psi0_ + phi_.eval(pair_.f_inverse(y - psi0_));
}

double CompressionMap::core_inverse(double t) const {
    if (t <= psi0_) return t;
    double x = phi_.inverse(t - psi0_);
    if (!std::isfinite(x)) return kInf;
    double f = pair_.f(x);
    return std::isfinite(f) ? psi0_ + f : kInf;
}

double CompressionMap::hhat(double x) const {
    if (x < 0) throw InvalidInput("profile argument must be nonnegative");
    return pre_ ? core(std::log1p(x)) : core(x);
}

double CompressionMap::hhat_inverse(double y) const {
    if (y < 0) throw InvalidInput("profile argument must be nonnegative");
    double z = core_inverse(y);
    return pre_ ? std::expm1(z) : z;
}

double CompressionMap::phi_star(double R) const { return phi_.eval(R + kappa_) + psi0_; }

double CompressionMap::phi_unshifted(double R) const { return phi_.eval(R) + psi0_; }

ConjResult CompressionMap::conjugate_scale(double alpha, double beta, double t) const {
    if (!(alpha > 0)) throw InvalidInput("conjugate_scale needs a positive scale");
    if (!(t > 0)) throw InvalidInput("conjugate_scale needs t > 0");
    if (!pre_)
        throw CertificationFailure(
            "linear control is certified only for the log-precomposed construction");

    double z = core_inverse(t);
    if (!std::isfinite(z) || z > 1e290) {
        // hhat^{-1}(t) is astronomically large; the exact shift correction is
        // far below the resolution of double at scale t.
        return {t, 0.0, true};
    }
    // log1p(alpha·expm1(z) + beta) = z + s, with s exact in log space.
    double s;
    if (z > 40.0) {
        s = std::log(alpha) + std::log1p((beta + 1.0 - alpha) * std::exp(-z) / alpha);
    } else {
        double arg = alpha * std::expm1(z) + beta;
        if (arg <= -1.0) throw InvalidInput("conjugated point left the ray");
        s = std::log1p(arg) - z;
    }
    if (s == 0.0) return {t, 0.0, false};

    if (z <= psi0_ || z < 64.0) {
        // Small scale: evaluate the branch directly.
        double v = core(z + s);
        return {v, v - t, false};
    }
    double X = pair_.f_inverse(z - psi0_);
    double d = pair_.f_shift_inverse(X, s);
    double delta = phi_.eval_delta(X, d);
    return {t + delta, delta, d == 0.0 && s != 0.0};
}

double CompressionMap::linear_control_defect(double m, double t) const {
    if (!(t > 0)) throw InvalidInput("linear control defect needs t > 0");
    if (!(m > 0)) throw InvalidInput("linear control defect needs m > 0");
    ConjResult r = conjugate_scale(m, 0.0, t);
    return std::abs(r.delta) / t;
}

// ------------------------------------------------------------ radial machinery

ModelPoint radial_compress(const Space& sp, const ModelPoint& center,
                           const std::function<double(double)>& profile, const ModelPoint& p) {
    switch (sp.tag()) {
        case Space::Tag::Euclidean: {
            double r = sp.distance(center, p);
            if (r == 0) return center;
            double rr = profile(r);
            std::vector<double> out(sp.dim());
            for (int i = 0; i < sp.dim(); ++i)
                out[i] = center.eucl()[i] + (p.eucl()[i] - center.eucl()[i]) * (rr / r);
            return ModelPoint(std::move(out));
        }
        case Space::Tag::Hyperbolic: {
            if (sp.distance(center, sp.basepoint()) != 0)
                throw InvalidInput("hyperbolic radial compression is centered at the basepoint");
            const HypPoint& h = p.hyp();
            double r = h.radius();
            if (r == 0) return center;
            return ModelPoint(HypPoint::polar(profile(r), h.angle()));
        }
        default:
            throw InvalidInput(
                "radial compression needs a unique-ray space (Euclidean or hyperbolic); "
                "tree-like spaces bifurcate");
    }
}

ContractReport compression_contract_check(const Space& sp, const ModelPoint& center,
                                          const CompressionMap& map,
                                          const std::vector<ContractPair>& pairs, double tol) {
    ContractReport report;
    auto prof = map.profile();
    for (const auto& pr : pairs) {
        double d = sp.distance(pr.x, pr.y);
        if (!(d < map.pair().psi(pr.R)))
            throw InvalidInput("contract pair violates its precondition d(x,y) < psi(R)");
        ModelPoint hx = radial_compress(sp, center, prof, pr.x);
        ModelPoint hy = radial_compress(sp, center, prof, pr.y);
        double dh = sp.distance(hx, hy);
        double shifted = 4.0 * map.phi_star(pr.R);
        double unshifted = map.phi_unshifted(pr.R);
        if (dh > shifted + tol)
            throw CertificationFailure("compression contract violated: d(hx,hy)=" +
                                       std::to_string(dh) + " > 4 phi*(R)=" + std::to_string(shifted) +
                                       " at R=" + std::to_string(pr.R));
        report.max_ratio_shifted = std::max(report.max_ratio_shifted, shifted > 0 ? dh / shifted : 0.0);
        report.max_ratio_unshifted =
            std::max(report.max_ratio_unshifted, unshifted > 0 ? dh / unshifted : 0.0);
        ++report.checked;
    }
    return report;
}

SublinearCertificate certify_sublinear(const std::function<double(double)>& phi, double horizon,
                                       double threshold) {
    SublinearCertificate cert;
    cert.threshold = threshold;
    cert.horizon = horizon;
    cert.ratio_at_horizon = phi(horizon) / horizon;
    bool decreasing = true;
    double prev = kInf;
    for (double x = horizon / 10; x <= horizon * 1.0000001; x *= 1.25) {
        double ratio = phi(x) / x;
        if (ratio > prev + 1e-12) decreasing = false;
        prev = ratio;
    }
    cert.certified = decreasing && cert.ratio_at_horizon < threshold;
    return cert;
}

} // namespace treefiber
