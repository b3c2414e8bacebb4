#include <doctest.h>

#include <cmath>
#include <random>

#include "weylmod/weights.hpp"

using namespace weylmod;

TEST_CASE("weight families evaluate their formulas") {
    const RVec x{1.0, -2.0};
    CHECK(Weight::polynomial(2, 3.0)(x) == doctest::Approx(std::pow(6.0, 1.5)));
    CHECK(Weight::exponential(2, 0.5)(x) == doctest::Approx(std::exp(0.5 * std::sqrt(5.0))));
    CHECK(Weight::one(2)(x) == 1.0);
    auto w = Weight::from_json({{"family", "polynomial"}, {"s", 2.0}}, 1);
    CHECK(w(RVec{3.0}) == doctest::Approx(10.0));
    CHECK_THROWS_AS(Weight::from_json({{"family", "nope"}}, 1), InvalidArgument);
}

TEST_CASE("tabulated weight interpolates linearly and stays positive") {
    auto w = Weight::tabulated(1, -1.0, 1.0, 3, {1.0, 2.0, 4.0});
    CHECK(w(RVec{0.5}) == doctest::Approx(3.0));
    CHECK(w(RVec{5.0}) == doctest::Approx(4.0));
}

TEST_CASE("transform_TA examples") {
    const RVec X{1.0, 0.0}, Y{0.0, 1.0};
    SUBCASE("A = 0") {
        const RVec x{0.3, -1.2}, y{2.0, 0.7};
        auto t = transform_TA(Eigen::MatrixXd::Zero(1, 1), x, y);
        CHECK(t == RVec{2.0, -1.2, 0.7 - -1.2, 0.3 - 2.0});
    }
    SUBCASE("A = I") {
        const RVec x{0.3, -1.2}, y{2.0, 0.7};
        auto t = transform_TA(Eigen::MatrixXd::Identity(1, 1), x, y);
        CHECK(t[0] == doctest::Approx(0.3));
        CHECK(t[1] == doctest::Approx(0.7));
    }
    SUBCASE("A = 1/2 by hand") {
        auto t = transform_TA(0.5 * Eigen::MatrixXd::Identity(1, 1), X, Y);
        CHECK(t == RVec{0.5, 0.5, 1.0, 1.0});
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(transform_TA(Eigen::MatrixXd::Zero(2, 2), X, Y), InvalidArgument);
    }
}

TEST_CASE("transform_TA is linear") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    Eigen::MatrixXd A(2, 2);
    A << 0.3, -0.2, 0.7, 0.1;
    for (int t = 0; t < 20; ++t) {
        RVec X1(4), Y1(4), X2(4), Y2(4);
        for (int i = 0; i < 4; ++i) X1[i] = n(rng), Y1[i] = n(rng), X2[i] = n(rng), Y2[i] = n(rng);
        const double a = n(rng), b = n(rng);
        RVec X(4), Y(4);
        for (int i = 0; i < 4; ++i) X[i] = a * X1[i] + b * X2[i], Y[i] = a * Y1[i] + b * Y2[i];
        auto lhs = transform_TA(A, X, Y);
        auto r1 = transform_TA(A, X1, Y1), r2 = transform_TA(A, X2, Y2);
        for (int i = 0; i < 8; ++i) CHECK(lhs[i] == doctest::Approx(a * r1[i] + b * r2[i]).epsilon(1e-12));
    }
}

TEST_CASE("check_moderate") {
    SamplingOptions opt;
    opt.n_samples = 2000;
    CHECK(check_moderate(Weight::one(2), Weight::one(2), opt).max_ratio == 1.0);
    for (double s : {-3.0, 1.0, 2.5}) {
        auto r = check_moderate(Weight::polynomial(2, s), Weight::polynomial(2, std::abs(s)), opt);
        CHECK(r.max_ratio <= std::pow(2.0, std::abs(s) / 2.0) + 1e-12);
        CHECK(r.passes());
    }
    auto e = check_moderate(Weight::exponential(2, 0.7), Weight::exponential(2, 0.7), opt);
    CHECK(e.max_ratio <= 1.0 + 1e-12);
    CHECK_THROWS(check_moderate(Weight::one(1), Weight::one(2), opt));
}

TEST_CASE("three-weight condition") {
    SamplingOptions opt;
    opt.n_samples = 2000;
    const Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(1, 1);
    const Weight one = Weight::one(4);
    CHECK(check_weight_condition(half, one, one, one, opt).max_ratio == 1.0);

    StructuredWeightTriple st(Weight::polynomial(2, 1.5), Weight::exponential(2, 0.3), Weight::polynomial(2, -2.0));
    auto weyl = check_weyl_condition(st.omega(0), st.omega(1), st.omega(2), opt);
    CHECK(weyl.max_ratio <= 1.0 + 1e-12);
    auto ta = check_weight_condition(half, st.omega_ta(0), st.omega_ta(1), st.omega_ta(2), opt);
    CHECK(ta.max_ratio <= 1.0 + 1e-12);

    // exponential growth in the first 2d coordinates alone cannot be dominated
    const Weight grow = Weight::exponential(2, 1.0).embedded(4, 0);
    double prev = 0.0;
    for (double box : {2.0, 4.0, 8.0}) {
        opt.box = box;
        const double r = check_weight_condition(half, grow, one, one, opt).max_ratio;
        CHECK(r > prev);
        prev = r;
    }
    CHECK(prev > 1e3);
}

TEST_CASE("exponential envelope is finite for standard families") {
    for (const Weight& w : {Weight::polynomial(2, 4.0), Weight::polynomial(2, -4.0), Weight::exponential(2, 0.5)}) {
        auto [c, cp] = exponential_envelope(w, 1.0);
        CHECK(std::isfinite(c));
        CHECK(std::isfinite(cp));
    }
}

TEST_CASE("sobol points are deterministic and in the box") {
    auto a = sobol_points(3, 64, 2.0, 5), b = sobol_points(3, 64, 2.0, 5);
    CHECK(a == b);
    for (const auto& p : a)
        for (double v : p) CHECK(std::abs(v) <= 2.0);
}
