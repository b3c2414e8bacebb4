#include "weylmod/gabor.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

namespace weylmod {

namespace {

cplx dot(const CVec& a, const CVec& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const CVec& a) { return std::sqrt(std::real(dot(a, a))); }

void check_density(const Lattice& position, const Lattice& frequency) {
    if (position.theta() * frequency.theta() >= 2.0 * pi)
        throw ConvergenceError("not a frame at this lattice spacing: position x frequency spacing " +
                               std::to_string(position.theta() * frequency.theta()) + " >= 2 pi");
}

}  // namespace

SampledSymbol canonical_dual(const SampledSymbol& phi, const Lattice& position, const Lattice& frequency,
                             const DualOptions& opt, DualReport* report) {
    if (opt.enforce_density) check_density(position, frequency);
    LatticeTransform engine(phi.grid, position, frequency);
    auto apply = [&](const CVec& v) {
        SampledSymbol s(phi.grid, v);
        return engine.synthesis(engine.analysis(s, phi), phi).values;
    };
    const CVec& b = phi.values;
    const double bnorm = norm2(b);
    require(bnorm > 0.0, "canonical_dual: zero window");
    CVec x(b.size(), cplx(0.0)), r = b, p = r;
    double rr = std::real(dot(r, r));
    double best = std::sqrt(rr) / bnorm;
    int since_best = 0;
    int it = 0;
    while (std::sqrt(rr) / bnorm > opt.tol) {
        if (it >= opt.max_iter || since_best >= 50)
            throw ConvergenceError("not a frame at this lattice spacing: dual iteration stalled at residual " +
                                   std::to_string(std::sqrt(rr) / bnorm));
        CVec Ap = apply(p);
        const cplx pAp = dot(p, Ap);
        if (!(std::real(pAp) > 0.0))
            throw ConvergenceError("not a frame at this lattice spacing: frame operator lost definiteness");
        const cplx alpha = rr / pAp;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rr_new = std::real(dot(r, r));
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + (rr_new / rr) * p[i];
        rr = rr_new;
        ++it;
        const double rel = std::sqrt(rr) / bnorm;
        if (rel < 0.5 * best) {
            best = rel;
            since_best = 0;
        } else {
            ++since_best;
        }
    }
    CVec Sx = apply(x);
    for (std::size_t i = 0; i < Sx.size(); ++i) Sx[i] -= b[i];
    if (report) {
        report->iterations = it;
        report->residual = norm2(Sx) / bnorm;
    }
    return SampledSymbol(phi.grid, std::move(x));
}

SampledSymbol canonical_dual(const SampledSymbol& phi, const Lattice& lattice, const DualOptions& opt) {
    return canonical_dual(phi, lattice, lattice, opt);
}

std::pair<double, double> estimate_frame_bounds(const LatticeTransform& engine, const SampledSymbol& phi,
                                                int iterations, std::uint64_t seed) {
    const Grid& g = phi.grid;
    // Bounds on the box covered by the position lattice.
    const double cover = engine.position().theta() * engine.position().radius();
    CVec mask(g.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        auto x = g.point(i);
        bool in = true;
        for (double v : x) in = in && std::abs(v) <= cover;
        mask[i] = in ? 1.0 : 0.0;
    }
    auto apply = [&](const CVec& v) {
        CVec m(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) m[i] = mask[i] * v[i];
        auto out = engine.synthesis(engine.analysis(SampledSymbol(g, m), phi), phi).values;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
        return out;
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CVec v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mask[i] * cplx(nd(rng), nd(rng));
    const double n0 = norm2(v);
    for (auto& z : v) z /= n0;
    // Lanczos with full reorthogonalization; extreme Ritz values.
    std::vector<CVec> basis{v};
    std::vector<double> alpha, beta;
    for (int k = 0; k < iterations; ++k) {
        CVec w = apply(basis.back());
        const double a = std::real(dot(basis.back(), w));
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) {
                const cplx c = dot(q, w);
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
            }
        const double b = norm2(w);
        if (b < 1e-12 * std::abs(a)) break;
        beta.push_back(b);
        for (auto& z : w) z /= b;
        basis.push_back(std::move(w));
    }
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    return {es.eigenvalues()(0), es.eigenvalues()(m - 1)};
}

GaborSystem::GaborSystem(SampledSymbol window, SampledSymbol dual, LatticeTransform engine)
    : window_(std::move(window)), dual_(std::move(dual)), engine_(std::move(engine)) {}

GaborSystem::GaborSystem(SampledSymbol window, Lattice lattice, const DualOptions& opt)
    : GaborSystem(std::move(window), lattice, lattice, opt) {}

GaborSystem::GaborSystem(SampledSymbol window, Lattice position, Lattice frequency, const DualOptions& opt)
    : window_(window), dual_(window.grid), engine_(window.grid, position, frequency) {
    dual_ = canonical_dual(window_, position, frequency, opt, &report_);
    if (opt.estimate_bounds) bounds_ = estimate_frame_bounds(engine_, window_, opt.bound_iterations);
}

GaborSystem GaborSystem::with_dual(SampledSymbol window, SampledSymbol dual, Lattice position, Lattice frequency) {
    require(window.grid == dual.grid, "window and dual must share a grid");
    LatticeTransform engine(window.grid, position, frequency);
    return GaborSystem(std::move(window), std::move(dual), std::move(engine));
}

LatticeSequence GaborSystem::analysis(const SampledSymbol& f) const { return engine_.analysis(f, window_); }
LatticeSequence GaborSystem::dual_analysis(const SampledSymbol& f) const { return engine_.analysis(f, dual_); }
SampledSymbol GaborSystem::synthesis(const LatticeSequence& c) const { return engine_.synthesis(c, dual_); }
SampledSymbol GaborSystem::window_synthesis(const LatticeSequence& c) const {
    return engine_.synthesis(c, window_);
}
SampledSymbol GaborSystem::frame_operator(const SampledSymbol& f) const {
    return engine_.synthesis(engine_.analysis(f, window_), window_);
}

void GaborSystem::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    window_.save(dir + "/window.bin");
    dual_.save(dir + "/dual.bin");
    std::ofstream out(dir + "/system.json");
    if (!out) throw IoError("cannot write " + dir + "/system.json");
    nlohmann::json j{{"position", position().to_json()}, {"frequency", frequency().to_json()}};
    if (bounds_) j["frame_bounds"] = {bounds_->first, bounds_->second};
    out << j.dump(2) << '\n';
}

GaborSystem GaborSystem::load(const std::string& dir) {
    std::ifstream in(dir + "/system.json");
    if (!in) throw IoError("cannot read " + dir + "/system.json");
    auto j = nlohmann::json::parse(in);
    auto sys = with_dual(SampledSymbol::load(dir + "/window.bin"), SampledSymbol::load(dir + "/dual.bin"),
                         Lattice::from_json(j.at("position")), Lattice::from_json(j.at("frequency")));
    if (j.contains("frame_bounds")) sys.bounds_ = {j["frame_bounds"][0].get<double>(), j["frame_bounds"][1].get<double>()};
    return sys;
}

SampledSymbol frame_operator(const SampledSymbol& phi, const Lattice& lattice, const SampledSymbol& f) {
    LatticeTransform engine(phi.grid, lattice, lattice);
    return engine.synthesis(engine.analysis(f, phi), phi);
}

double modnorm_estimate(const GaborSystem& sys, const SampledSymbol& f, const MixedExponent& e,
                        const Weight& omega) {
    return mixed_norm(sys.analysis(f), e, omega);
}

double modnorm_estimate(const GaborSystem& sys, const SampledSymbol& f, const MixedExponent& e) {
    return mixed_norm(sys.analysis(f), e);
}

}  // namespace weylmod
