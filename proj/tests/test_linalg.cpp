#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "treefiber/linalg.hpp"

#include <random>
#include <set>

using namespace treefiber;

TEST_CASE("rational arithmetic is normalized and exact") {
    Rational a(6, 4), b(-3, 9);
    CHECK(a == Rational(3, 2));
    CHECK(b == Rational(-1, 3));
    CHECK(a + b == Rational(7, 6));
    CHECK(a * b == Rational(-1, 2));
    CHECK(a / a == Rational(1));
    CHECK(Rational::parse("-14/21") == Rational(-2, 3));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 0), InvalidInput);
}

TEST_CASE("checked arithmetic guards overflow") {
    CHECK_THROWS_AS(checked_mul(INT64_MAX / 2, 3), ResourceGuard);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(floor_mod(-7, 2) == 1);
}

TEST_CASE("residue: rank-1 parity") {
    auto [r, q] = residue({5}, MatZ(1, {2}));
    CHECK(r == VecZ{1});
    CHECK(q == VecZ{2});
}

TEST_CASE("residue: diagonal componentwise mod") {
    auto [r, q] = residue({3, 4}, MatZ(2, {2, 0, 0, 3}));
    CHECK(r == (VecZ{1, 1}));
    CHECK(q == (VecZ{1, 1}));
}

TEST_CASE("residue: Hermite reduction against brute force") {
    MatZ M(2, {1, 1, 0, 2});
    auto [r, q] = residue({0, 3}, M);
    // z - r must lie in M·Z^2 and r must be canonical.
    VecZ back = M.apply(q);
    CHECK(back == (VecZ{0 - r[0], 3 - r[1]}));

    // Brute force: enumerate all canonical residues by reducing a box of
    // vectors; exactly |det| = 2 classes must appear.
    LatticeBasis basis(M);
    std::set<VecZ> classes;
    for (Int x = -6; x <= 6; ++x)
        for (Int y = -6; y <= 6; ++y) classes.insert(basis.reduce({x, y}));
    CHECK(classes.size() == 2);
    CHECK(classes.count(r) == 1);
}

TEST_CASE("transversal completeness on random small matrices") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Int> entry(-3, 3);
    int done = 0;
    while (done < 25) {
        MatZ M(2, {entry(rng), entry(rng), entry(rng), entry(rng)});
        Int d = M.det();
        if (d == 0 || (d < 0 ? -d : d) > 12) continue;
        ++done;
        LatticeBasis basis(M);
        Int idx = basis.index();
        CHECK(idx == (d < 0 ? -d : d));
        // Residues exhaust a fundamental box: reducing every vector of a box
        // produces each residue, and residues reduce to themselves.
        std::set<VecZ> seen;
        for (Int x = -8; x <= 8; ++x)
            for (Int y = -8; y <= 8; ++y) seen.insert(basis.reduce({x, y}));
        CHECK(static_cast<Int>(seen.size()) == idx);
        for (const VecZ& r : basis.residues()) {
            CHECK(basis.reduce(r) == r);
            CHECK(seen.count(r) == 1);
        }
    }
}

TEST_CASE("affine maps compose and invert exactly") {
    MatQ A = MatQ::identity(2);
    A(0, 0) = Rational(3, 2);
    A(0, 1) = Rational(1);
    A(1, 1) = Rational(-2);
    AffineMap m{A, {Rational(1, 3), Rational(0)}};
    AffineMap id = m.compose(m.inverse());
    CHECK(id == AffineMap::identity(2));
    VecQ x{Rational(2), Rational(-1)};
    CHECK(m.inverse().apply(m.apply(x)) == x);
}

TEST_CASE("singular matrices are rejected") {
    CHECK_THROWS_AS(residue({1, 1}, MatZ(2, {1, 1, 1, 1})), InvalidInput);
}
