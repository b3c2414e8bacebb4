#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "weylmod/phase_space.hpp"

using namespace weylmod;

namespace {

SampledSymbol gaussian(const Grid& g, double x0 = 0.0) {
    return SampledSymbol::sample(g, [&](std::span<const double> x) { return cplx(std::exp(-(x[0] - x0) * (x[0] - x0) / 2)); });
}

double rel_err(const SampledSymbol& a, const std::function<cplx(std::span<const double>)>& exact) {
    return relative_l2(a, SampledSymbol::sample(a.grid, exact));
}

}  // namespace

TEST_CASE("fourier of Gaussians") {
    const Grid g(1, 256, 12.0);
    const auto F = fourier(gaussian(g));
    CHECK(F.grid == g.dual());
    CHECK(rel_err(F, [](auto xi) { return cplx(std::exp(-xi[0] * xi[0] / 2)); }) <= 1e-10);

    const auto Fs = fourier(gaussian(g, 1.0));
    CHECK(rel_err(Fs, [](auto xi) { return std::exp(-xi[0] * xi[0] / 2) * std::exp(cplx(0, -xi[0])); }) <= 1e-10);
    CHECK(relative_l2(fourier_direct(gaussian(g, 1.0), g.dual()), Fs) <= 1e-10);

    CHECK(Fs.l2_norm() == doctest::Approx(gaussian(g, 1.0).l2_norm()).epsilon(1e-10));
    CHECK(relative_l2(inverse_fourier(Fs), gaussian(g, 1.0)) <= 1e-12);
}

TEST_CASE("fourier flags boundary mass") {
    const Grid g(1, 64, 2.0);
    CHECK_THROWS_AS(fourier(gaussian(g)), GridError);
}

TEST_CASE("symplectic fourier") {
    // half-width sqrt(pi n / 4) makes the output grid coincide with the input grid
    const Grid pg(2, 128, std::sqrt(pi * 128 / 4));
    auto gauss = [](auto X) { return cplx(std::exp(-X[0] * X[0] - X[1] * X[1])); };
    const auto a = SampledSymbol::sample(pg, gauss);
    const auto Fa = symplectic_fourier(a);
    CHECK(Fa.grid.L == doctest::Approx(pg.L).epsilon(1e-14));
    CHECK(relative_l2(Fa, SampledSymbol::sample(Fa.grid, gauss)) <= 1e-10);

    // direct quadrature of the defining integral at a few points
    const double h2 = pg.cell();
    for (RVec X : {RVec{0.3, -0.5}, RVec{1.0, 0.2}}) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < pg.size(); ++i) {
            const RVec Y = pg.point(i);
            s += a[i] * std::exp(cplx(0, 2 * (Y[1] * X[0] - Y[0] * X[1])));
        }
        CHECK(std::abs(s * h2 / pi - evaluate(Fa, X)) <= 1e-10);
    }

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double p[4][5];
    for (auto& r : p)
        for (auto& v : r) v = u(rng);
    const auto b = SampledSymbol::sample(pg, [&](auto X) {
        cplx s = 0.0;
        for (const auto& r : p)
            s += cplx(r[0], r[1]) * std::exp(-std::pow(X[0] - r[2], 2) - std::pow(X[1] - r[3], 2) / 2) *
                 std::exp(cplx(0, r[4] * X[0]));
        return s;
    });
    const auto bb = symplectic_fourier(symplectic_fourier(b, false), false);
    CHECK(relative_l2(SampledSymbol(pg, bb.values), b) <= 1e-9);
    CHECK(symplectic_fourier(SampledSymbol(pg)).max_abs() == 0.0);
}

TEST_CASE("stft of the Gaussian window") {
    const Grid g(1, 256, 12.0);
    const auto phi = gaussian_window(g);
    for (RVec X : {RVec{0.0, 0.0}, RVec{1.0, -0.5}, RVec{-2.0, 1.5}, RVec{0.7, 3.0}}) {
        const cplx exact = std::pow(2 * pi, -0.5) * std::exp(-(X[0] * X[0] + X[1] * X[1]) / 4) * std::exp(cplx(0, -X[0] * X[1] / 2));
        CHECK(std::abs(stft(phi, phi, X) - exact) <= 1e-8 * std::abs(exact) + 1e-14);
    }
    CHECK(std::abs(stft(phi, phi, RVec{0.0, 0.0}) - 1.0 / std::sqrt(2 * pi)) <= 1e-12);
    const auto rot = std::exp(cplx(0, 0.9)) * phi;
    CHECK(std::abs(stft(rot, phi, RVec{0.4, 0.4})) == doctest::Approx(std::abs(stft(phi, phi, RVec{0.4, 0.4}))));

    const Lattice L(0.5, 1, 8);
    const auto c = stft_grid(phi, phi, L, L);
    for (std::size_t j = 0; j < L.size(); j += 3)
        for (std::size_t k = 0; k < L.size(); k += 5) {
            const RVec X{L.point(j)[0], L.point(k)[0]};
            CHECK(std::abs(c.at(j, k) - stft(phi, phi, X)) <= 1e-12);
        }
}

TEST_CASE("wigner distribution") {
    const Grid g(1, 256, 12.0);
    const auto phi = gaussian_window(g);
    const auto W = wigner(phi, phi);
    CHECK(rel_err(W, [](auto X) { return cplx(std::sqrt(2 / pi) * std::exp(-X[0] * X[0] - X[1] * X[1])); }) <= 1e-8);

    // direct quadrature of the lag integral
    const auto f = SampledSymbol::sample(g, [](auto x) { return cplx(x[0] * std::exp(-x[0] * x[0] / 2), 0.0); });
    const auto Wf = wigner(f, phi);
    const Interpolant If(f), Ip(phi);
    for (RVec X : {RVec{0.375, -0.5}, RVec{-1.125, 1.0}}) {
        cplx s = 0.0;
        const int m = 4096;
        const double dy = 40.0 / m;
        for (int k = 0; k < m; ++k) {
            const double y = -20.0 + k * dy;
            const double a = X[0] + y / 2, b = X[0] - y / 2;
            if (std::abs(a) >= 12 || std::abs(b) >= 12) continue;
            s += If(std::span<const double>(&a, 1)) * std::conj(Ip(std::span<const double>(&b, 1))) *
                 std::exp(cplx(0, -y * X[1]));
        }
        s *= dy / std::sqrt(2 * pi);
        CHECK(std::abs(evaluate(Wf, X) - s) <= 1e-8 * Wf.max_abs());
    }

    // conjugate symmetry for real inputs
    const Grid& wg = Wf.grid;
    double asym = 0.0;
    for (int i = 0; i < wg.n; ++i)
        for (int k = 1; k < wg.n; ++k)
            asym = std::max(asym, std::abs(Wf[i * wg.n + k] - std::conj(Wf[i * wg.n + (wg.n - k)])));
    CHECK(asym <= 1e-12 * Wf.max_abs());

    // marginal is proportional to |f|^2 with constant (2 pi)^{1/2}
    double worst = 0.0;
    for (int i = 0; i < wg.n; ++i) {
        cplx m = 0.0;
        for (int k = 0; k < wg.n; ++k) m += W[i * wg.n + k];
        m *= wg.h();
        const double x = wg.x(i);
        worst = std::max(worst, std::abs(m - std::sqrt(2 * pi) * std::exp(-x * x) / std::sqrt(pi)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("rihaczek window") {
    const Grid g(1, 256, 12.0);
    const auto phi = gaussian_window(g);
    const auto R = rihaczek_window(phi, phi);
    CHECK(rel_err(R, [](auto X) {
              return std::exp(-(X[0] * X[0] + X[1] * X[1]) / 2) * std::exp(cplx(0, -X[0] * X[1])) / std::sqrt(pi);
          }) <= 1e-10);
    CHECK(R.l2_norm() == doctest::Approx(phi.l2_norm() * phi.l2_norm()).epsilon(1e-10));
}

TEST_CASE("gaussian closed forms") {
    const Grid pg(2, 64, 6.0);
    const auto a = gaussian_symbol(1, 1, pg);
    CHECK(evaluate(a, RVec{0.0, 0.0}).real() == doctest::Approx(1.0));
    CHECK(evaluate(a, RVec{1.0, 0.0}).real() == doctest::Approx(std::exp(-1.0)));
    for (std::size_t i = 0; i < pg.size(); i += 37) {
        auto X = pg.point(i);
        if (X[0] == -pg.L || X[1] == -pg.L) continue;
        CHECK(evaluate(a, RVec{-X[0], -X[1]}).real() == doctest::Approx(a[i].real()));
    }
    CHECK(gaussian_weyl_product(1, 1, RVec{0.0, 0.0}) == 0.5);
    CHECK(gaussian_weyl_product(2, 0.5, RVec{0.0, 0.0}) == 0.5);
    CHECK(gaussian_weyl_product(1, 1, RVec{0.6, 0.8}) == doctest::Approx(0.5 * std::exp(-1.0)));
    CHECK(gaussian_modnorm(1, 2, 2, 1) == doctest::Approx(0.5));
    CHECK(gaussian_modnorm(1, inf, inf, 1) == doctest::Approx(1 / (2 * pi)));
    CHECK(gaussian_modnorm(1, 0.5, 0.5, 1) == doctest::Approx(128 * std::pow(pi, 3)));
}

TEST_CASE("continuous quasi-norm matches the closed form") {
    const Grid pg(2, 64, 8.0);
    for (double lambda : {0.5, 2.0}) {
        const auto a = gaussian_symbol(lambda, lambda, pg);
        CHECK(continuous_modnorm(a, {2, 2}) == doctest::Approx(gaussian_modnorm(lambda, 2, 2, 1)).epsilon(1e-6));
    }
}

TEST_CASE("sampled symbol save and load") {
    const Grid g(1, 32, 4.0);
    const auto f = gaussian(g, 0.5);
    const auto path = (std::filesystem::temp_directory_path() / "wm_sym.bin").string();
    f.save(path);
    const auto r = SampledSymbol::load(path);
    CHECK(r.grid == g);
    CHECK(r.values == f.values);
}
