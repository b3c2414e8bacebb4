#include "weylmod/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "weylmod/gabor.hpp"
#include "weylmod/hermite.hpp"
#include "weylmod/matrix_space.hpp"
#include "weylmod/pseudodiff.hpp"
#include "weylmod/sweep.hpp"

namespace weylmod {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.3g", v); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

SampledSymbol packet(const Grid& g, double x0, double xi0, double sigma) {
    return SampledSymbol::sample(g, [=](std::span<const double> x) {
        const double t = x[0] - x0;
        return std::pow(pi, -0.25) / std::sqrt(sigma) * std::exp(-t * t / (2 * sigma * sigma)) *
               std::polar(1.0, xi0 * x[0]);
    });
}

CriterionResult gaussian_weyl_product() {
    const Grid g(2, 128, 12.0);
    const auto a = gaussian_symbol(1.0, 1.0, g);
    const Interpolant I(sharp_product_kernel(a, a, CalculusParam::weyl()));
    double worst = 0.0;
    const double X0[2] = {0.0, 0.0};
    worst = std::max(worst, rel(I(X0), cplx(0.5)));
    const double pts[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}};
    for (const auto& p : pts) worst = std::max(worst, rel(I(p), cplx(0.5 * std::exp(-1.0))));
    return {1, "gaussian-weyl-product", worst <= 1e-5, "max rel err " + sci(worst) + " (tol 1e-5)"};
}

CriterionResult gaussian_modnorm_quadrature() {
    const Grid g(2, 128, 8.0);
    const auto a = gaussian_symbol(1.0, 1.0, g);
    struct Case {
        double p;
        double expected;
    };
    const Case cases[] = {{2.0, 0.5}, {inf, 1.0 / (2.0 * pi)}, {0.5, 128.0 * pi * pi * pi}};
    bool ok = true;
    std::ostringstream d;
    for (const auto& c : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const double v = continuous_modnorm(a, MixedExponent(c.p, c.p));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double e = std::abs(v - c.expected) / c.expected;
        const double formula = std::abs(gaussian_modnorm(1.0, c.p, c.p, 1) - c.expected) / c.expected;
        ok = ok && e <= 1e-3 && formula <= 1e-12 && secs < 30.0;
        d << "p=q=" << (std::isinf(c.p) ? std::string("inf") : fmt("%g", c.p)) << " rel " << sci(e) << " in "
          << fmt("%.1f", secs) << " s; ";
    }
    d << "(tol 1e-3, 30 s per case)";
    return {2, "gaussian-modulation-norm", ok, d.str()};
}

CriterionResult matrix_composition() {
    struct Branch {
        const char* name;
        MixedExponent e0, e1, e2;
    };
    const Branch branches[] = {
        {"p0<1,q<=p", {0.5, 0.5}, {1.0, 0.4}, {1.0, 0.4}},
        {"p0<1,p<=q", {0.5, 2.0}, {1.0, 0.75}, {1.0, 0.75}},
        {"p0>=1,p<=q", {2.0, 2.0}, {4.0, 1.2}, {4.0, 1.5}},
        {"p0>=1,q<=p", {1.5, 1.0}, {3.0, 0.7}, {3.0, 0.9}},
    };
    const int trials = 1000, n = 20;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto idx = GaborMatrix::range_index(n);
    const Weight one = Weight::one(2);
    const Weight conv = convolution_weight(Weight::polynomial(1, 1.5));
    bool ok = true;
    std::ostringstream d;
    for (const auto& b : branches) {
        const auto c = composition_conditions(b.e0, b.e1, b.e2);
        ok = ok && c.admissible();
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double density = 0.2 + 0.8 * u(rng);
            auto rand_matrix = [&] {
                Eigen::MatrixXcd m(n, n);
                for (int r = 0; r < n; ++r)
                    for (int s = 0; s < n; ++s) m(r, s) = u(rng) < density ? std::pow(u(rng), 3.0) : 0.0;
                return GaborMatrix(idx, 1.0, m);
            };
            const auto A1 = rand_matrix();
            const auto A2 = rand_matrix();
            const Weight& w = t % 2 ? conv : one;
            const double lhs = u_norm(compose(A1, A2), b.e0, w);
            const double rhs = u_norm(A1, b.e1, w) * u_norm(A2, b.e2, w);
            if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
        }
        ok = ok && worst <= 1.0 + 1e-10;
        d << b.name << " max ratio " << fmt("%.6f", worst) << "; ";
    }
    d << "(" << trials << " trials each, tol 1+1e-10)";
    return {3, "matrix-composition-estimate", ok, d.str()};
}

CriterionResult c_matrix_identity() {
    const Grid g(1, 1024, 32.0);
    const auto phi = gaussian_window(g);
    const Weight w = Weight::polynomial(2, 2.0);
    const double theta = 1.0;
    double worst = 0.0, closed = 0.0;
    double norms[2][3];
    const double qs[3] = {0.5, 1.0, 2.0};
    const int radii[2] = {7, 14};
    for (int ri = 0; ri < 2; ++ri) {
        const Lattice lat(theta, 1, radii[ri]);
        const auto C = c_matrix(phi, phi, lat);
        const Lattice diff(theta, 1, 2 * radii[ri]);
        const auto V = stft_grid(phi, phi, diff, diff);
        const auto prof = u_profile(C, inf, convolution_weight(w));
        for (std::size_t i = 0; i < prof.diffs.size(); ++i) {
            const double X[2] = {theta * prof.diffs[i][0], theta * prof.diffs[i][1]};
            const double vw = std::abs(V.at(*diff.find(std::vector<int>{prof.diffs[i][0]}),
                                            *diff.find(std::vector<int>{prof.diffs[i][1]}))) *
                              w(X);
            if (vw > 0.0) worst = std::max(worst, std::abs(prof.h[i] - vw) / vw);
            // |V_phi phi(X)| = (2 pi)^{-1/2} e^{-|X|^2 / 4} for the unit Gaussian
            const double exact = std::pow(2.0 * pi, -0.5) * std::exp(-(X[0] * X[0] + X[1] * X[1]) / 4.0);
            closed = std::max(closed, std::abs(prof.h[i] / w(X) - exact));
        }
        for (int qi = 0; qi < 3; ++qi) norms[ri][qi] = c_matrix_membership(C, qs[qi], w);
    }
    bool ok = worst <= 1e-10 && closed <= 1e-14;
    std::ostringstream d;
    d << "entrywise rel " << sci(worst) << " (tol 1e-10); closed form abs " << sci(closed) << " (tol 1e-14); ";
    for (int qi = 0; qi < 3; ++qi) {
        const double s = std::abs(norms[1][qi] - norms[0][qi]) / norms[0][qi];
        ok = ok && std::isfinite(norms[0][qi]) && std::isfinite(norms[1][qi]) && s <= 1e-8;
        d << "q=" << qs[qi] << " norm " << fmt("%.6g", norms[1][qi]) << " doubling " << sci(s) << "; ";
    }
    d << "(tol 1e-8)";
    return {4, "c-matrix-identity", ok, d.str()};
}

CriterionResult operator_matrix_link() {
    const MatrixRoute route;
    const Grid& fg = route.function_grid();
    const double params[5][3] = {{0, 0, 1}, {0.5, 0, 0.8}, {-1, 0.5, 1.2}, {0.3, -1, 1}, {1, 1, 0.9}};
    double worst = 0.0;
    for (double lam : {0.5, 1.0, 2.0}) {
        const auto a = gaussian_symbol(lam, lam, route.symbol_grid());
        const auto A = route.symbol_to_matrix(a);
        const auto K = kernel_from_symbol(a, CalculusParam::kohn_nirenberg());
        for (const auto& p : params) {
            const auto f = packet(fg, p[0], p[1], p[2]);
            worst = std::max(worst, relative_l2(route.apply(A, f), apply_kernel(K, f)));
        }
    }
    return {5, "operator-matrix-link", worst <= 1e-4, "max rel L2 err " + sci(worst) + " (tol 1e-4)"};
}

CriterionResult sharpness_slopes() {
    const std::vector<ExponentTriple> triples = {
        {{1, 1}, {2, 0.5}, {2, 0.5}}, {{2, 2}, {2, 2}, {2, 2}},           {{0.5, 0.5}, {1, 0.4}, {1, 0.4}},
        {{2, 2}, {4, 1.2}, {4, 1.5}}, {{1, 1}, {4, 4}, {4, 4}},           {{inf, 1}, {1, 2}, {1, 2}},
    };
    const RVec lambdas = log_space(1e-4, 1e4, 81);
    double worst = 0.0;
    int admissible = 0, violating = 0;
    for (const auto& t : triples) {
        const auto s = gaussian_ratio_sweep(t, lambdas, 1);
        worst = std::max({worst, std::abs(s.slope_large - t.large_lambda_slope()),
                          std::abs(s.slope_small - t.small_lambda_slope())});
        (s.admissible ? admissible : violating) += 1;
    }
    const bool ok = worst <= 0.05 && admissible > 0 && violating > 0;
    return {6, "sharpness-slopes", ok,
            "max slope deviation " + sci(worst) + " over " + std::to_string(admissible) + " admissible and " +
                std::to_string(violating) + " violating triples (tol 0.05)"};
}

CriterionResult counterexample_divergence() {
    SweepConfig cfg;
    cfg.counterexample.N_list = {8, 32, 64};
    const auto rows = run_counterexample(cfg);
    const double growth = rows[2].m_inf_q0 / rows[0].m_inf_q0;
    const double drift = std::abs(rows[2].m_p_q1 / rows[1].m_p_q1 - 1.0);
    bool bound = true;
    for (const auto& r : rows) bound = bound && r.m_inf_q0 >= r.lower_bound;
    const bool ok = growth >= 2.0 && drift <= 0.02 && bound;
    return {7, "counterexample-divergence", ok,
            "M^{inf,1} growth N=8->64 " + fmt("%.4f", growth) + " (need >= 2); M^{2,2} drift N=32->64 " +
                sci(drift) + " (tol 0.02); lower bound " + (bound ? "holds" : "violated")};
}

CriterionResult stfta_closed_form_check() {
    SweepConfig cfg;
    cfg.seed = 7;
    const auto rep = run_stfta_check(cfg, 1e-4);
    return {8, "stfta-closed-form", rep.ok,
            "max rel err " + sci(rep.max_rel_error) + " at " + std::to_string(rep.points.size()) +
                " points (tol 1e-4); Wigner closed form rel " + sci(rep.wigner_rel_error)};
}

CriterionResult gabor_reconstruction() {
    const Grid g(1, 256, 16.0);
    const double theta = 0.5;
    DualOptions opt;
    opt.estimate_bounds = false;
    const GaborSystem sys(gaussian_window(g), Lattice(theta, 1, 24), opt);
    double recon = 0.0, comm = 0.0;
    const double params[4][3] = {{0, 0, 1}, {1.5, -2, 0.7}, {-2, 1, 1.3}, {0.5, 3, 1}};
    for (const auto& p : params) {
        const auto f = packet(g, p[0], p[1], p[2]);
        recon = std::max(recon, relative_l2(sys.synthesis(sys.analysis(f)), f));
    }
    const auto f = packet(g, 0, 0, 1);
    const auto Sf = sys.frame_operator(f);
    const int shifts[3][2] = {{2, 0}, {0, 3}, {-2, 2}};
    for (const auto& s : shifts) {
        const double x = theta * s[0], xi = theta * s[1];
        auto tf = [&](const SampledSymbol& v) {
            return modulate(shift(v, std::span<const double>(&x, 1)), std::span<const double>(&xi, 1));
        };
        comm = std::max(comm, relative_l2(sys.frame_operator(tf(f)), tf(Sf)));
    }
    const bool ok = recon <= 1e-8 && comm <= 1e-10;
    return {9, "gabor-reconstruction", ok,
            "D_psi C_phi rel " + sci(recon) + " (tol 1e-8); frame-operator commutation rel " + sci(comm) +
                " (tol 1e-10)"};
}

CriterionResult hermite_pairing() {
    const Grid g(1, 256, 16.0);
    double ortho = 0.0;
    std::vector<RVec> H(21);
    for (int k = 0; k < g.n; ++k) {
        const RVec t = hermite_table(20, g.x(k));
        for (int a = 0; a <= 20; ++a) H[a].push_back(t[a]);
    }
    for (int a = 0; a <= 20; ++a)
        for (int b = 0; b <= 20; ++b) {
            double s = 0.0;
            for (int k = 0; k < g.n; ++k) s += H[a][k] * H[b][k] * g.h();
            ortho = std::max(ortho, std::abs(s - (a == b ? 1.0 : 0.0)));
        }

    const Grid a1(1, 128, 12.0), g2(2, 128, 12.0);
    auto gauss = [&](double c, double s) {
        return SampledSymbol::sample(a1, [=](std::span<const double> x) { return cplx(std::exp(-(x[0] - c) * (x[0] - c) / (2 * s * s))); });
    };
    const auto sep = SampledSymbol::sample(g2, [](std::span<const double> X) { return cplx(std::exp(-X[0] * X[0] - 0.6 * X[1] * X[1])); });
    const auto mixed = SampledSymbol::sample(g2, [](std::span<const double> X) {
        return std::exp(-X[0] * X[0] - 0.7 * X[1] * X[1] - 0.3 * X[0] * X[1]) * std::polar(1.0, 0.5 * X[0]);
    });
    double fub = 0.0;
    fub = std::max(fub, fubini_check(gauss(0.0, 1.0), gauss(0.0, 1.0), sep, 1e-8).discrepancy);
    fub = std::max(fub, fubini_check(gauss(0.3, 0.9), gauss(-0.5, 1.1), mixed, 1e-8).discrepancy);

    const Grid gg(1, 256, 16.0);
    const auto phi = gaussian_window(gg);
    HermiteExpansion finite(1, 10);
    for (std::size_t i = 0; i < finite.size(); ++i) finite.coef[i] = 1.0 / (1.0 + static_cast<double>(i));
    const auto chirp = SampledSymbol::sample(gg, [](std::span<const double> x) {
        return std::exp(-0.5 * x[0] * x[0]) * std::polar(1.0, 0.5 * x[0] * x[0]);
    });
    const HermiteExpansion tests[3] = {analyze(gaussian_window(gg), 20), finite, analyze(chirp, 60)};
    std::vector<RVec> xi;
    for (int i = -20; i <= 20; ++i) xi.push_back({0.4 * i});
    int holds = 0;
    for (const auto& t : tests) holds += stft_growth_check(t, phi, 0.5, 0.1, xi).fitted_bound_ok ? 1 : 0;

    const bool ok = ortho <= 1e-10 && fub <= 1e-8 && holds == 3;
    return {10, "hermite-pairing", ok,
            "orthonormality " + sci(ortho) + " (tol 1e-10); pairing discrepancy " + sci(fub) +
                " (tol 1e-8); growth bound holds for " + std::to_string(holds) + "/3"};
}

struct Entry {
    CriterionResult (*fn)();
    double limit;  // seconds, 0 for none
};

const Entry entries[acceptance_criteria] = {
    {gaussian_weyl_product, 10.0},  {gaussian_modnorm_quadrature, 0.0}, {matrix_composition, 60.0},
    {c_matrix_identity, 0.0},       {operator_matrix_link, 0.0},        {sharpness_slopes, 10.0},
    {counterexample_divergence, 120.0}, {stfta_closed_form_check, 0.0}, {gabor_reconstruction, 0.0},
    {hermite_pairing, 0.0},
};

}  // namespace

CriterionResult run_criterion(int id) {
    require(id >= 1 && id <= acceptance_criteria, "unknown acceptance criterion");
    const auto& e = entries[id - 1];
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = e.fn();
    } catch (const std::exception& ex) {
        r = {id, "criterion-" + std::to_string(id), false, std::string("error: ") + ex.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.limit > 0.0 && r.seconds >= e.limit) {
        r.pass = false;
        r.detail += "; runtime limit " + fmt("%g", e.limit) + " s exceeded";
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& only) {
    std::vector<CriterionResult> out;
    if (only.empty()) {
        for (int i = 1; i <= acceptance_criteria; ++i) out.push_back(run_criterion(i));
    } else {
        for (int i : only) out.push_back(run_criterion(i));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    return std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + ": " + r.detail +
           " (" + fmt("%.2f", r.seconds) + " s)";
}

}  // namespace weylmod
