#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "weylmod/lattice_norms.hpp"

using namespace weylmod;

TEST_CASE("lattice enumeration") {
    Lattice L(0.5, 2, 3);
    CHECK(L.size() == 49);
    CHECK(L.index(0) == std::vector<int>{-3, -3});
    CHECK(L.index(1) == std::vector<int>{-3, -2});
    for (std::size_t i = 0; i < L.size(); ++i) CHECK(*L.find(L.index(i)) == i);
    CHECK_FALSE(L.find(std::vector<int>{4, 0}).has_value());
    CHECK(L.point(48) == RVec{1.5, 1.5});
    CHECK(Lattice::covering(0.5, 1, 8.0).radius() == 16);
}

TEST_CASE("quasi-triangle constant") {
    CHECK(quasi_triangle_constant({2, 2}) == 1.0);
    CHECK(quasi_triangle_constant({0.5, 3}) == 0.5);
    CHECK(quasi_triangle_constant({inf, 1.0 / 3}) == doctest::Approx(1.0 / 3));
}

TEST_CASE("mixed norm examples") {
    Lattice L(1.0, 1, 5);
    SUBCASE("single entry") {
        LatticeSequence c(L, L);
        c.at(*L.find(std::vector<int>{2}), *L.find(std::vector<int>{-1})) = cplx(3, 4);
        auto w = Weight::polynomial(2, 1.0);
        const double expect = 5.0 * w(RVec{2.0, -1.0});
        for (auto e : {MixedExponent(0.5, 3), MixedExponent(2, 2), MixedExponent(inf, 1)})
            CHECK(mixed_norm(c, e, w) == doctest::Approx(expect).epsilon(1e-14));
    }
    SUBCASE("N x N block of ones") {
        Lattice B(1.0, 1, 4);  // N = 9
        LatticeSequence c(B, B, CVec(81, 1.0));
        CHECK(mixed_norm(c, {2, 2}) == doctest::Approx(9.0));
    }
    SUBCASE("geometric decay, radius 40") {
        Lattice G(1.0, 1, 40);
        LatticeSequence c(G, G);
        for (std::size_t j = 0; j < G.size(); ++j)
            for (std::size_t k = 0; k < G.size(); ++k)
                c.at(j, k) = std::pow(2.0, -std::abs(G.index(j)[0]) - std::abs(G.index(k)[0]));
        CHECK(mixed_norm(c, {1, 1}) == doctest::Approx(9.0).epsilon(1e-10));
    }
    SUBCASE("nesting: inner over position, outer over frequency") {
        Lattice P(1.0, 1, 1);
        LatticeSequence c(P, P);
        c.at(0, 0) = 1.0;
        c.at(1, 0) = 1.0;  // two positions, one frequency
        CHECK(mixed_norm(c, {1, inf}) == doctest::Approx(2.0));
        CHECK(mixed_norm(c, {inf, 1}) == doctest::Approx(1.0));
    }
    SUBCASE("rejects non-finite values") {
        LatticeSequence c(L, L);
        c.values[3] = cplx(NAN, 0);
        CHECK_THROWS_AS(mixed_norm(c, {2, 2}), InvalidArgument);
    }
}

namespace {
LatticeSequence random_sequence(std::mt19937_64& rng, const Lattice& L) {
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(-12.0, 0.0);
    LatticeSequence c(L, L);
    for (auto& v : c.values) v = cplx(n(rng), n(rng)) * std::pow(10.0, u(rng));
    return c;
}
}  // namespace

TEST_CASE("mixed norm properties") {
    std::mt19937_64 rng(11);
    Lattice L(1.0, 1, 4);
    const MixedExponent es[] = {{0.3, 0.7}, {0.5, 2}, {1, 1}, {2, inf}, {inf, 0.4}, {3, 1.5}};
    for (int t = 0; t < 25; ++t) {
        auto a = random_sequence(rng, L), b = random_sequence(rng, L);
        LatticeSequence s(L, L), scaled(L, L);
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            s.values[i] = a.values[i] + b.values[i];
            scaled.values[i] = cplx(-2.5, 1.0) * a.values[i];
        }
        for (const auto& e : es) {
            const double r = quasi_triangle_constant(e);
            CHECK(std::pow(mixed_norm(s, e), r) <= (std::pow(mixed_norm(a, e), r) + std::pow(mixed_norm(b, e), r)) * (1 + 1e-12));
            CHECK(mixed_norm(scaled, e) == doctest::Approx(std::abs(cplx(-2.5, 1.0)) * mixed_norm(a, e)).epsilon(1e-12));
        }
        // monotone in exponents and weights
        const auto w1 = Weight::polynomial(2, 1.0), w2 = Weight::one(2);
        CHECK(mixed_norm(a, {2, 3}, w2) <= mixed_norm(a, {1, 0.5}, w1) * (1 + 1e-12));
        CHECK(mixed_norm(a, {1e6, 1e6}) == doctest::Approx(mixed_norm(a, {inf, inf})).epsilon(0.01));
    }
}

TEST_CASE("lp_norm keeps precision across magnitudes") {
    RVec v{1e-200, 1e-150, 1.0};
    CHECK(lp_norm(v, 0.5) == doctest::Approx(std::pow(1e-100 + 1e-75 + 1.0, 2.0)));
    CHECK(lp_norm(RVec{0.0, 0.0}, 0.3) == 0.0);
}

TEST_CASE("sequence CSV and binary round trip") {
    std::mt19937_64 rng(2);
    Lattice L(0.5, 1, 3);
    auto c = random_sequence(rng, L);
    auto dir = std::filesystem::temp_directory_path();
    c.write_csv((dir / "wm_seq.csv").string());
    c.write_binary((dir / "wm_seq.bin").string());
    CHECK(LatticeSequence::read_csv((dir / "wm_seq.csv").string(), L, L).values == c.values);
    CHECK(LatticeSequence::read_binary((dir / "wm_seq.bin").string(), L, L).values == c.values);
    CHECK_THROWS_AS(LatticeSequence::read_binary((dir / "wm_seq.bin").string(), Lattice(0.5, 1, 4), L), IoError);
}

TEST_CASE("exponents from JSON") {
    CHECK(std::isinf(exponent_from_json("inf")));
    CHECK(MixedExponent::from_json(nlohmann::json::array({0.5, "inf"})).q == inf);
    CHECK_THROWS_AS(MixedExponent(0.0, 1.0), InvalidArgument);
}
