#pragma once

#include <optional>
#include <string>
#include <utility>

#include "weylmod/lattice_norms.hpp"
#include "weylmod/phase_space.hpp"
#include "weylmod/weights.hpp"

namespace weylmod {

struct DualOptions {
    double tol = 1e-10;
    int max_iter = 500;
    bool enforce_density = true;  // reject position x frequency spacing >= 2 pi
    bool estimate_bounds = true;
    int bound_iterations = 40;
};

struct DualReport {
    int iterations = 0;
    double residual = 0.0;
};

// Window, canonical dual and lattices. Position and frequency lattices may differ.
class GaborSystem {
public:
    GaborSystem(SampledSymbol window, Lattice lattice, const DualOptions& opt = {});
    GaborSystem(SampledSymbol window, Lattice position, Lattice frequency, const DualOptions& opt = {});
    // Uses a dual that is already known, e.g. from disk.
    static GaborSystem with_dual(SampledSymbol window, SampledSymbol dual, Lattice position, Lattice frequency);

    const SampledSymbol& window() const { return window_; }
    const SampledSymbol& dual() const { return dual_; }
    const Lattice& position() const { return engine_.position(); }
    const Lattice& frequency() const { return engine_.frequency(); }
    const Grid& grid() const { return window_.grid; }
    const LatticeTransform& engine() const { return engine_; }
    // (A, B) from estimate_frame_bounds, when requested at construction.
    std::optional<std::pair<double, double>> frame_bounds() const { return bounds_; }
    const DualReport& dual_report() const { return report_; }

    LatticeSequence analysis(const SampledSymbol& f) const;       // C_phi
    LatticeSequence dual_analysis(const SampledSymbol& f) const;  // C_psi
    SampledSymbol synthesis(const LatticeSequence& c) const;      // D_psi
    SampledSymbol window_synthesis(const LatticeSequence& c) const;  // D_phi
    SampledSymbol frame_operator(const SampledSymbol& f) const;  // D_phi C_phi

    void save(const std::string& dir) const;
    static GaborSystem load(const std::string& dir);

private:
    GaborSystem(SampledSymbol window, SampledSymbol dual, LatticeTransform engine);

    SampledSymbol window_;
    SampledSymbol dual_;
    LatticeTransform engine_;
    std::optional<std::pair<double, double>> bounds_;
    DualReport report_;
};

SampledSymbol frame_operator(const SampledSymbol& phi, const Lattice& lattice, const SampledSymbol& f);

// Solves S psi = phi by conjugate gradients; ConvergenceError when the iteration
// stalls or hits the cap.
SampledSymbol canonical_dual(const SampledSymbol& phi, const Lattice& position, const Lattice& frequency,
                             const DualOptions& opt = {}, DualReport* report = nullptr);
SampledSymbol canonical_dual(const SampledSymbol& phi, const Lattice& lattice, const DualOptions& opt = {});

// Extreme Lanczos Ritz values of the frame operator on functions supported in the
// box covered by the position lattice. The lower value also reflects the finite
// frequency truncation.
std::pair<double, double> estimate_frame_bounds(const LatticeTransform& engine, const SampledSymbol& phi,
                                                int iterations, std::uint64_t seed = 0);

double modnorm_estimate(const GaborSystem& sys, const SampledSymbol& f, const MixedExponent& e,
                        const Weight& omega);
double modnorm_estimate(const GaborSystem& sys, const SampledSymbol& f, const MixedExponent& e);

}  // namespace weylmod
