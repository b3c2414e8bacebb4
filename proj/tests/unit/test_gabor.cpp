#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "weylmod/gabor.hpp"

using namespace weylmod;

namespace {

const Grid grid(1, 256, 16.0);
constexpr double theta = 0.5;

const GaborSystem& system() {
    static const GaborSystem sys(gaussian_window(grid), Lattice(theta, 1, 24));
    return sys;
}

SampledSymbol packet(double x0, double xi0, double s) {
    return SampledSymbol::sample(grid, [=](auto x) {
        const double t = (x[0] - x0) / s;
        return std::exp(-t * t / 2) * std::exp(cplx(0, xi0 * x[0]));
    });
}

SampledSymbol tf_shift(const SampledSymbol& f, double x, double xi) {
    return modulate(shift(f, std::span<const double>(&x, 1)), std::span<const double>(&xi, 1));
}

}  // namespace

TEST_CASE("analysis") {
    const auto& sys = system();
    const auto& L = sys.position();
    const auto c0 = sys.analysis(sys.window());
    const std::size_t o = *L.find(std::vector<int>{0});
    CHECK(std::abs(c0.at(o, o) - sys.window().l2_norm() * sys.window().l2_norm() / std::sqrt(2 * pi)) <= 1e-12);
    CHECK(mixed_norm(sys.analysis(SampledSymbol(grid)), {1, 1}) == 0.0);

    const int j0 = 3, i0 = -4;
    const auto c = sys.analysis(tf_shift(sys.window(), theta * j0, theta * i0));
    double worst = 0.0;
    for (int j = -10; j <= 10; ++j)
        for (int i = -10; i <= 10; ++i) {
            const auto a = c.at(*L.find(std::vector<int>{j}), *L.find(std::vector<int>{i}));
            const auto b = c0.at(*L.find(std::vector<int>{j - j0}), *L.find(std::vector<int>{i - i0}));
            worst = std::max(worst, std::abs(std::abs(a) - std::abs(b)));
        }
    CHECK(worst <= 1e-12);
}

TEST_CASE("synthesis and reconstruction") {
    const auto& sys = system();
    const auto& L = sys.position();
    LatticeSequence unit(L, L);
    unit.at(*L.find(std::vector<int>{0}), *L.find(std::vector<int>{0})) = 1.0;
    CHECK(relative_l2(sys.synthesis(unit), sys.dual()) <= 1e-14);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> n;
    LatticeSequence c1(L, L), c2(L, L), mix(L, L);
    const cplx a(0.3, -1.1), b(2.0, 0.5);
    for (std::size_t i = 0; i < c1.values.size(); ++i) {
        c1.values[i] = cplx(n(rng), n(rng));
        c2.values[i] = cplx(n(rng), n(rng));
        mix.values[i] = a * c1.values[i] + b * c2.values[i];
    }
    CHECK(relative_l2(sys.synthesis(mix), a * sys.synthesis(c1) + b * sys.synthesis(c2)) <= 1e-13);

    for (auto f : {packet(0, 0, 1), packet(1.5, -2, 0.7), packet(-2, 1, 1.3)}) {
        CHECK(relative_l2(sys.synthesis(sys.analysis(f)), f) <= 1e-8);
        CHECK(relative_l2(sys.window_synthesis(sys.dual_analysis(f)), f) <= 1e-8);
    }
}

TEST_CASE("frame operator") {
    const auto& sys = system();
    const auto f = packet(0.5, 0.5, 1.1);
    const auto Sf = sys.frame_operator(f);
    CHECK(relative_l2(frame_operator(sys.window(), sys.position(), f), Sf) <= 1e-14);
    for (auto [j, i] : {std::pair{2, 0}, {0, 3}, {-2, 2}})
        CHECK(relative_l2(sys.frame_operator(tf_shift(f, theta * j, theta * i)), tf_shift(Sf, theta * j, theta * i)) <=
              1e-10);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    for (int t = 0; t < 5; ++t) {
        const auto g = SampledSymbol::sample(grid, [&](auto x) { return cplx(n(rng), n(rng)) * std::exp(-x[0] * x[0] / 8); });
        const cplx q = inner(sys.frame_operator(g), g);
        CHECK(q.real() >= 0.0);
        CHECK(std::abs(q.imag()) <= 1e-10 * q.real());
    }
    auto fb = sys.frame_bounds();
    REQUIRE(fb.has_value());
    CHECK(fb->first > 0.0);
    CHECK(fb->first <= fb->second);
}

TEST_CASE("canonical dual") {
    SUBCASE("dense lattice gives a nearly proportional dual") {
        const Grid g(1, 128, 8.0);
        const auto phi = gaussian_window(g);
        DualOptions opt;
        opt.estimate_bounds = false;
        const auto psi = canonical_dual(phi, Lattice(0.25, 1, 31), opt);
        double lo = 1e300, hi = 0.0;
        for (int k = 0; k < g.n; ++k) {
            if (std::abs(g.x(k)) > 3.0) continue;
            const double r = psi[k].real() / phi[k].real();
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo - 1.0 <= 0.01);
    }
    SUBCASE("sparse lattice is rejected") {
        const Grid g(1, 128, 8.0);
        CHECK_THROWS_AS(canonical_dual(gaussian_window(g), Lattice(3.0, 1, 3)), ConvergenceError);
    }
}

TEST_CASE("modulation quasi-norm estimates") {
    const auto& sys = system();
    CHECK(modnorm_estimate(sys, SampledSymbol(grid), {1, 1}) == 0.0);

    DualOptions opt;
    opt.estimate_bounds = false;
    const GaborSystem wide(gaussian_window(grid, 1.2), Lattice(theta, 1, 24), opt);
    for (MixedExponent e : {MixedExponent(1, 1), MixedExponent(2, 2), MixedExponent(inf, 1)}) {
        RVec r;
        for (double lambda : {0.5, 0.75, 1.0, 1.5, 2.0}) {
            const auto f = SampledSymbol::sample(grid, [=](auto x) { return cplx(std::exp(-lambda * x[0] * x[0])); });
            r.push_back(modnorm_estimate(sys, f, e) / modnorm_estimate(wide, f, e));
        }
        CHECK(*std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()) <= 1.1);
    }
}

TEST_CASE("system save and load") {
    const auto& sys = system();
    const auto dir = (std::filesystem::temp_directory_path() / "wm_gabor").string();
    sys.save(dir);
    const auto r = GaborSystem::load(dir);
    CHECK(r.dual().values == sys.dual().values);
    CHECK(r.position().radius() == sys.position().radius());
    const auto f = packet(1, 1, 1);
    CHECK(relative_l2(r.synthesis(r.analysis(f)), f) <= 1e-8);
}
