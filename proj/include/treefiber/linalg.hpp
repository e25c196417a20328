#pragma once

#include "treefiber/rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace treefiber {

using VecZ = std::vector<Int>;
using VecQ = std::vector<Rational>;

inline VecZ vec_add(const VecZ& a, const VecZ& b) {
    VecZ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
    return r;
}

inline VecZ vec_neg(const VecZ& a) {
    VecZ r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_neg(a[i]);
    return r;
}

inline bool vec_is_zero(const VecZ& a) {
    for (Int x : a)
        if (x != 0) return false;
    return true;
}

// Dense square integer matrix, row-major.
class MatZ {
  public:
    MatZ() : n_(0) {}
    explicit MatZ(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}
    MatZ(int n, std::vector<Int> entries) : n_(n), a_(std::move(entries)) {
        if (a_.size() != static_cast<std::size_t>(n) * n) throw InvalidInput("matrix size mismatch");
    }

    static MatZ identity(int n) {
        MatZ m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int n() const { return n_; }
    Int& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    Int operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    VecZ apply(const VecZ& v) const {
        VecZ r(n_, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r[i] = checked_add(r[i], checked_mul((*this)(i, j), v[j]));
        return r;
    }

    MatZ mul(const MatZ& o) const {
        MatZ r(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                Int aik = (*this)(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < n_; ++j)
                    r(i, j) = checked_add(r(i, j), checked_mul(aik, o(k, j)));
            }
        return r;
    }

    // Determinant by exact expansion/elimination over rationals (n is small here).
    Int det() const;

    friend bool operator==(const MatZ& a, const MatZ& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  private:
    int n_;
    std::vector<Int> a_;
};

class MatQ {
  public:
    MatQ() : n_(0) {}
    explicit MatQ(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    static MatQ identity(int n) {
        MatQ m(n);
        for (int i = 0; i < n; ++i) m(i, i) = Rational(1);
        return m;
    }
    static MatQ from_int(const MatZ& m) {
        MatQ r(m.n());
        for (int i = 0; i < m.n(); ++i)
            for (int j = 0; j < m.n(); ++j) r(i, j) = Rational(m(i, j));
        return r;
    }

    int n() const { return n_; }
    Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    VecQ apply(const VecQ& v) const {
        VecQ r(n_, Rational(0));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    MatQ mul(const MatQ& o) const {
        MatQ r(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                if ((*this)(i, k).is_zero()) continue;
                for (int j = 0; j < n_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
            }
        return r;
    }

    Rational det() const {
        MatQ m = *this;
        Rational d(1);
        for (int c = 0; c < n_; ++c) {
            int piv = -1;
            for (int r = c; r < n_; ++r)
                if (!m(r, c).is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) return Rational(0);
            if (piv != c) {
                for (int j = 0; j < n_; ++j) std::swap(m(c, j), m(piv, j));
                d = -d;
            }
            d *= m(c, c);
            Rational inv = Rational(1) / m(c, c);
            for (int r = c + 1; r < n_; ++r) {
                if (m(r, c).is_zero()) continue;
                Rational f = m(r, c) * inv;
                for (int j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
            }
        }
        return d;
    }

    MatQ inverse() const {
        MatQ m = *this;
        MatQ inv = MatQ::identity(n_);
        for (int c = 0; c < n_; ++c) {
            int piv = -1;
            for (int r = c; r < n_; ++r)
                if (!m(r, c).is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw InvalidInput("singular matrix has no inverse");
            if (piv != c)
                for (int j = 0; j < n_; ++j) {
                    std::swap(m(c, j), m(piv, j));
                    std::swap(inv(c, j), inv(piv, j));
                }
            Rational f = Rational(1) / m(c, c);
            for (int j = 0; j < n_; ++j) {
                m(c, j) *= f;
                inv(c, j) *= f;
            }
            for (int r = 0; r < n_; ++r) {
                if (r == c || m(r, c).is_zero()) continue;
                Rational g = m(r, c);
                for (int j = 0; j < n_; ++j) {
                    m(r, j) -= g * m(c, j);
                    inv(r, j) -= g * inv(c, j);
                }
            }
        }
        return inv;
    }

    friend bool operator==(const MatQ& a, const MatQ& b) { return a.n_ == b.n_ && a.a_ == b.a_; }
    friend bool operator!=(const MatQ& a, const MatQ& b) { return !(a == b); }

  private:
    int n_;
    std::vector<Rational> a_;
};

inline Int MatZ::det() const {
    Rational d = MatQ::from_int(*this).det();
    if (!d.is_integer()) throw InvalidInput("integer matrix with non-integer determinant");
    return d.num();
}

// Exact rational affine self-map of R^n: x |-> A x + b.
struct AffineMap {
    MatQ A;
    VecQ b;

    static AffineMap identity(int n) { return {MatQ::identity(n), VecQ(n, Rational(0))}; }
    static AffineMap translation(const VecZ& z) {
        AffineMap m = identity(static_cast<int>(z.size()));
        for (std::size_t i = 0; i < z.size(); ++i) m.b[i] = Rational(z[i]);
        return m;
    }
    static AffineMap linear(const MatQ& A) { return {A, VecQ(A.n(), Rational(0))}; }

    int n() const { return A.n(); }

    VecQ apply(const VecQ& x) const {
        VecQ r = A.apply(x);
        for (int i = 0; i < n(); ++i) r[i] += b[i];
        return r;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> r(x.size(), 0.0);
        for (int i = 0; i < n(); ++i) {
            double acc = b[i].to_double();
            for (int j = 0; j < n(); ++j) acc += A(i, j).to_double() * x[j];
            r[i] = acc;
        }
        return r;
    }

    // this ∘ other.
    AffineMap compose(const AffineMap& o) const {
        AffineMap r{A.mul(o.A), A.apply(o.b)};
        for (int i = 0; i < n(); ++i) r.b[i] += b[i];
        return r;
    }

    AffineMap inverse() const {
        MatQ Ainv = A.inverse();
        VecQ bi = Ainv.apply(b);
        for (auto& x : bi) x = -x;
        return {Ainv, bi};
    }

    friend bool operator==(const AffineMap& a, const AffineMap& o) { return a.A == o.A && a.b == o.b; }
    friend bool operator!=(const AffineMap& a, const AffineMap& o) { return !(a == o); }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < n(); ++i) {
            if (i) s += "; ";
            for (int j = 0; j < n(); ++j) {
                if (j) s += " ";
                s += A(i, j).str();
            }
            s += " | " + b[i].str();
        }
        return s + "]";
    }
};

// Column-style Hermite form of a nonsingular integer matrix: a lower-triangular
// basis H (positive diagonal) of the column lattice M·Z^n.
class LatticeBasis {
  public:
    explicit LatticeBasis(const MatZ& M);

    int n() const { return H_.n(); }
    Int index() const { return index_; } // |det M| = number of residues
    const MatZ& hermite() const { return H_; }

    // Canonical representative of z + M·Z^n: coordinate i reduced into [0, H_ii)
    // in the Hermite basis, processed first coordinate to last.
    VecZ reduce(const VecZ& z) const;

    // All canonical residues, in lexicographic order; size == index().
    std::vector<VecZ> residues(Int guard = 1 << 20) const;

    bool contains(const VecZ& z) const { return vec_is_zero(reduce(z)); }

  private:
    MatZ H_;
    Int index_;
};

// residue(z, M) of the spec: canonical residue r and the exact quotient q with
// z = M q + r. Throws on singular M.
struct ResidueResult {
    VecZ r;
    VecZ q;
};
ResidueResult residue(const VecZ& z, const MatZ& M);

inline LatticeBasis::LatticeBasis(const MatZ& M) : H_(M) {
    const int n = M.n();
    // Row by row, Euclid across columns j >= i until a single nonzero pivot
    // remains in column i; flip it positive.
    for (int i = 0; i < n; ++i) {
        for (;;) {
            int jmin = -1;
            Int best = 0;
            int nonzero = 0;
            for (int j = i; j < n; ++j) {
                Int v = H_(i, j);
                if (v == 0) continue;
                ++nonzero;
                Int av = v < 0 ? checked_neg(v) : v;
                if (jmin < 0 || av < best) {
                    jmin = j;
                    best = av;
                }
            }
            if (jmin < 0) throw InvalidInput("singular edge monomorphism matrix");
            if (jmin != i)
                for (int r = 0; r < n; ++r) std::swap(H_(r, i), H_(r, jmin));
            if (nonzero == 1) break;
            for (int j = i + 1; j < n; ++j) {
                if (H_(i, j) == 0) continue;
                Int q = floor_div(H_(i, j), H_(i, i));
                for (int r = 0; r < n; ++r) H_(r, j) = checked_sub(H_(r, j), checked_mul(q, H_(r, i)));
            }
        }
        if (H_(i, i) < 0)
            for (int r = 0; r < n; ++r) H_(r, i) = checked_neg(H_(r, i));
    }
    index_ = 1;
    for (int i = 0; i < n; ++i) index_ = checked_mul(index_, H_(i, i));
}

inline VecZ LatticeBasis::reduce(const VecZ& z) const {
    const int n = H_.n();
    if (static_cast<int>(z.size()) != n) throw InvalidInput("vector/lattice rank mismatch");
    VecZ r = z;
    for (int i = 0; i < n; ++i) {
        Int q = floor_div(r[i], H_(i, i));
        if (q == 0) continue;
        for (int k = i; k < n; ++k) r[k] = checked_sub(r[k], checked_mul(q, H_(k, i)));
    }
    return r;
}

inline std::vector<VecZ> LatticeBasis::residues(Int guard) const {
    if (index_ > guard) throw ResourceGuard("transversal larger than guard: " + std::to_string(index_));
    const int n = H_.n();
    std::vector<VecZ> out;
    out.reserve(static_cast<std::size_t>(index_));
    VecZ cur(n, 0);
    for (;;) {
        out.push_back(cur);
        int i = n - 1;
        while (i >= 0) {
            if (++cur[i] < H_(i, i)) break;
            cur[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

inline ResidueResult residue(const VecZ& z, const MatZ& M) {
    LatticeBasis basis(M);
    VecZ r = basis.reduce(z);
    // q = M^{-1}(z - r); exact and necessarily integral.
    MatQ Minv = MatQ::from_int(M).inverse();
    VecQ diff(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) diff[i] = Rational(checked_sub(z[i], r[i]));
    VecQ q = Minv.apply(diff);
    VecZ qi(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!q[i].is_integer()) throw InvalidInput("non-integral lattice quotient");
        qi[i] = q[i].num();
    }
    return {r, qi};
}

} // namespace treefiber
