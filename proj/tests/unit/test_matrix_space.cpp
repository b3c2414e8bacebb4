#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "weylmod/matrix_space.hpp"

using namespace weylmod;

namespace {

GaborMatrix random_matrix(std::mt19937_64& rng, int n, bool complex) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = complex ? cplx(u(rng) - 0.5, u(rng) - 0.5) : cplx(u(rng));
    return GaborMatrix(GaborMatrix::range_index(n), 1.0, m);
}

GaborMatrix band(int size, int width) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            if (std::abs(r - c) <= width) m(r, c) = 1.0;
    return GaborMatrix(GaborMatrix::range_index(size), 1.0, m);
}

}  // namespace

TEST_CASE("u_norm examples") {
    const int N = 7;
    const auto I = GaborMatrix::identity(GaborMatrix::range_index(N), 1.0);
    for (MixedExponent e : {MixedExponent(0.5, 3), MixedExponent(1, 1), MixedExponent(2, inf), MixedExponent(inf, 0.5)})
        CHECK(u_norm(I, e) == doctest::Approx(std::isinf(e.p) ? 1.0 : std::pow(N, 1.0 / e.p)));

    auto S = GaborMatrix::zeros(GaborMatrix::range_index(N), 0.5);
    S.entries()(4, 1) = cplx(0, -2.5);
    const auto w = Weight::polynomial(2, 1.0);
    CHECK(u_norm(S, {0.7, 1.3}, w) == doctest::Approx(2.5 * w(RVec{2.0, 0.5})));

    std::mt19937_64 rng(1);
    const auto R = random_matrix(rng, 5, true);
    CHECK(u_norm(R, {1, 1}) == doctest::Approx(R.entries().cwiseAbs().sum()).epsilon(1e-14));

    const auto prof = u_profile(I, 2.0, Weight::one(2));
    for (std::size_t i = 0; i < prof.diffs.size(); ++i)
        CHECK(prof.h[i] == (prof.diffs[i][0] == 0 ? doctest::Approx(std::sqrt(N)) : doctest::Approx(0.0)));
}

TEST_CASE("u_norm is homogeneous and r-subadditive") {
    std::mt19937_64 rng(2);
    const MixedExponent es[] = {{0.4, 0.8}, {1, 2}, {3, 0.5}, {inf, 1}};
    const auto w = convolution_weight(Weight::polynomial(1, 1.0));
    for (int t = 0; t < 20; ++t) {
        const auto A = random_matrix(rng, 8, true), B = random_matrix(rng, 8, true);
        GaborMatrix S(A.index(), 1.0, A.entries() + B.entries()), T(A.index(), 1.0, cplx(0, 3) * A.entries());
        for (const auto& e : es) {
            const double r = quasi_triangle_constant(e);
            CHECK(std::pow(u_norm(S, e, w), r) <= (std::pow(u_norm(A, e, w), r) + std::pow(u_norm(B, e, w), r)) * (1 + 1e-12));
            CHECK(u_norm(T, e, w) == doctest::Approx(3 * u_norm(A, e, w)).epsilon(1e-12));
        }
    }
}

TEST_CASE("compose") {
    std::mt19937_64 rng(3);
    const auto A = random_matrix(rng, 6, true), B = random_matrix(rng, 6, true), C = random_matrix(rng, 6, true);
    CHECK((compose(A, GaborMatrix::identity(A.index(), 1.0)).entries() - A.entries()).norm() == 0.0);
    CHECK((compose(compose(A, B), C).entries() - compose(A, compose(B, C)).entries()).norm() <= 1e-13);

    Eigen::MatrixXcd a(2, 2), b(2, 2), ab(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    b << 0.0, 1.0, 1.0, 0.0;
    ab << 2.0, 1.0, 4.0, 3.0;
    const auto idx = GaborMatrix::range_index(2);
    CHECK(compose(GaborMatrix(idx, 1.0, a), GaborMatrix(idx, 1.0, b)).entries() == ab);
}

TEST_CASE("composition estimate") {
    const Weight one = Weight::one(2);
    SUBCASE("identity") {
        const int N = 9;
        const auto I = GaborMatrix::identity(GaborMatrix::range_index(N), 1.0);
        const auto r = check_composition_estimate(I, I, {1, 1}, {1, 1}, {1, 1}, one, one, one);
        CHECK(r.lhs == doctest::Approx(N));
        CHECK(r.rhs == doctest::Approx(N * N));
        CHECK(r.ratio == doctest::Approx(1.0 / N));
        CHECK(r.weights_ok());
    }
    SUBCASE("random nonnegative matrices stay below one") {
        std::mt19937_64 rng(4);
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const auto r = check_composition_estimate(random_matrix(rng, 20, false), random_matrix(rng, 20, false),
                                                      {1, 1}, {2, 1}, {2, 1}, one, one, one, t);
            CHECK(r.conditions.admissible());
            worst = std::max(worst, r.ratio);
        }
        CHECK(worst <= 1.0 + 1e-10);
    }
    SUBCASE("complex matrices stay below sixteen") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 50; ++t) {
            const auto r = check_composition_estimate(random_matrix(rng, 12, true), random_matrix(rng, 12, true),
                                                      {0.5, 0.5}, {1, 0.4}, {1, 0.4}, one, one, one, t);
            CHECK(r.ratio <= 16.0);
        }
    }
    SUBCASE("violating exponents let the ratio grow") {
        double prev = 0.0;
        for (int width : {1, 2, 4, 8}) {
            const auto A = band(40, width);
            const auto r = check_composition_estimate(A, A, {1, 0.5}, {2, 2}, {2, 2}, one, one, one);
            CHECK_FALSE(r.conditions.admissible());
            CHECK(r.flag() == "conditions-not-satisfied");
            CHECK(r.ratio > prev);
            prev = r.ratio;
        }
        CHECK(prev > 10.0);
    }
    SUBCASE("weight inequality is validated") {
        const auto I = GaborMatrix::identity(GaborMatrix::range_index(4), 1.0);
        const auto big = convolution_weight(Weight::polynomial(1, 2.0));
        CHECK_FALSE(check_composition_estimate(I, I, {1, 1}, {1, 1}, {1, 1}, big, one, one).weights_ok());
    }
}

TEST_CASE("c_matrix") {
    const Grid g(1, 256, 16.0);
    const auto phi = gaussian_window(g);
    const Lattice L(1.0, 1, 4);
    const auto C = c_matrix(phi, phi, L);
    const double peak = 1.0 / std::sqrt(2 * pi);
    for (std::size_t i = 0; i < C.size(); ++i) CHECK(std::abs(C.entries()(i, i) - peak) <= 1e-14);
    CHECK(C.entries().cwiseAbs().maxCoeff() == doctest::Approx(peak).epsilon(1e-14));
    CHECK(c_matrix_membership(C, inf, Weight::one(2)) == doctest::Approx(peak).epsilon(1e-14));

    // C_phi D_phi applied to unit sequences
    const LatticeTransform T(g, L, L);
    double worst = 0.0;
    for (std::size_t k = 0; k < C.size(); ++k) {
        LatticeSequence e(L, L);
        e.values[k] = 1.0;
        const auto col = T.analysis(T.synthesis(e, phi), phi);
        for (std::size_t j = 0; j < C.size(); ++j) {
            const cplx a = C.entries()(j, k), b = col.values[j];
            worst = std::max(worst, std::abs(a - b) / (std::abs(b) + 1e-6 * peak));
        }
    }
    CHECK(worst <= 1e-9);

    // proof identity for the membership norm
    const auto w = Weight::polynomial(2, 2.0);
    const Lattice diff(1.0, 1, 8);
    const auto V = stft_grid(phi, phi, diff, diff);
    for (double q : {0.5, 1.0, 2.0}) {
        RVec vals;
        for (std::size_t j = 0; j < diff.size(); ++j)
            for (std::size_t k = 0; k < diff.size(); ++k)
                vals.push_back(std::abs(V.at(j, k)) * w(RVec{diff.point(j)[0], diff.point(k)[0]}));
        CHECK(c_matrix_membership(C, q, w) == doctest::Approx(lp_norm(vals, q)).epsilon(1e-10));
    }

    // Gaussian decay of the entries
    const auto prof = u_profile(C, inf, Weight::one(4));
    for (std::size_t i = 0; i < prof.diffs.size(); ++i) {
        const double r2 = std::pow(prof.diffs[i][0], 2) + std::pow(prof.diffs[i][1], 2);
        CHECK(prof.h[i] <= peak * std::exp(-r2 / 4) * (1 + 1e-10) + 1e-16);
    }
}

TEST_CASE("c_matrix refuses lattices past the Nyquist range") {
    const Grid g(1, 64, 16.0);
    CHECK_THROWS_AS(c_matrix(gaussian_window(g), gaussian_window(g), Lattice(1.0, 1, 4)), GridError);
}

TEST_CASE("COO round trip") {
    std::mt19937_64 rng(6);
    auto A = random_matrix(rng, 5, true);
    A.entries()(2, 3) = 0.0;
    const auto path = (std::filesystem::temp_directory_path() / "wm_matrix.csv").string();
    A.write_coo(path);
    const auto B = GaborMatrix::read_coo(path);
    CHECK(B.index() == A.index());
    CHECK(B.theta() == A.theta());
    CHECK(B.entries() == A.entries());
}
