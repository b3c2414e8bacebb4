#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylmod/common.hpp"
#include "weylmod/lattice_norms.hpp"

namespace weylmod {

// Centered uniform grid: every axis holds x_k = -L + k h, k = 0..n-1, h = 2L/n.
// Phase-space objects on R^{2d} use a Grid with dimension 2d.
struct Grid {
    int d;
    int n;
    double L;

    Grid(int d, int n, double L);

    double h() const { return 2.0 * L / n; }
    double x(int k) const { return -L + k * h(); }
    // Grid carrying the FFT frequencies: spacing pi/L, half-width pi n / (2L).
    Grid dual() const;
    std::size_t size() const { return ipow(static_cast<std::size_t>(n), d); }
    std::vector<int> shape() const { return std::vector<int>(d, n); }
    std::vector<int> index(std::size_t flat) const;
    RVec point(std::size_t flat) const;
    // Grid index of a coordinate if it lies on the grid (within 1e-9 h).
    std::optional<int> index_of(double coord) const;
    double cell() const;

    nlohmann::json to_json() const;
    static Grid from_json(const nlohmann::json& j);
    bool operator==(const Grid&) const = default;
};

struct SampledSymbol {
    Grid grid;
    CVec values;

    explicit SampledSymbol(Grid g);
    SampledSymbol(Grid g, CVec v);

    static SampledSymbol sample(Grid g, const std::function<cplx(std::span<const double>)>& fn);

    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    double l2_norm() const;
    double max_abs() const;

    // Raw little-endian complex128 plus a JSON sidecar at path + ".json".
    void save(const std::string& path) const;
    static SampledSymbol load(const std::string& path);
};

SampledSymbol operator+(const SampledSymbol& a, const SampledSymbol& b);
SampledSymbol operator-(const SampledSymbol& a, const SampledSymbol& b);
SampledSymbol operator*(cplx s, const SampledSymbol& a);
cplx inner(const SampledSymbol& f, const SampledSymbol& g);  // integral of f conj(g)
double relative_l2(const SampledSymbol& approx, const SampledSymbol& exact);

// Unit L^2-norm Gaussian pi^{-d/4} s^{-d/2} e^{-|x|^2 / (2 s^2)}.
SampledSymbol gaussian_window(const Grid& g, double sigma = 1.0);

// (2 pi)^{-d/2} integral f(x) e^{-i<x,xi>} dx on grid.dual().
// check: throw GridError when the output does not decay at the boundary.
SampledSymbol fourier(const SampledSymbol& f, bool check = true);
// Inverse of fourier: input on a dual grid, output on its dual.
SampledSymbol inverse_fourier(const SampledSymbol& F, bool check = true);
// Direct quadrature of the same integral at the points of out.
SampledSymbol fourier_direct(const SampledSymbol& f, const Grid& out);

// pi^{-d} integral a(Y) e^{2i sigma(X,Y)} dY on R^{2d}, via 2^d Fa(-2 xi, 2x).
// Output grid has half-width pi n / (4L).
SampledSymbol symplectic_fourier(const SampledSymbol& a, bool check = true);

// y -> f(y - x): index shift with zero fill on grid-aligned x, spectral shift otherwise.
SampledSymbol shift(const SampledSymbol& f, std::span<const double> x);
// Same spacing, half-width multiplied by factor (a power of two), zero outside the old box.
SampledSymbol zero_pad(const SampledSymbol& f, int factor);
// y -> e^{i<y,xi>} f(y).
SampledSymbol modulate(const SampledSymbol& f, std::span<const double> xi);

// Trigonometric interpolant of sampled data, evaluated anywhere in the box.
class Interpolant {
public:
    explicit Interpolant(const SampledSymbol& f);
    cplx operator()(std::span<const double> x) const;

private:
    Grid grid_;
    CVec coef_;
};

cplx evaluate(const SampledSymbol& f, std::span<const double> x);

// Riemann sum of (2 pi)^{-d/2} integral f(y) conj(phi(y-x)) e^{-i<y,xi>} dy at X = (x, xi).
cplx stft(const SampledSymbol& f, const SampledSymbol& phi, std::span<const double> X);

// Short-time Fourier transform and its adjoint-type synthesis sampled on a
// position lattice times a frequency lattice. Uses per-position FFT patches
// when the frequency lattice matches an FFT bin spacing on the grid, direct
// separable sums otherwise.
class LatticeTransform {
public:
    LatticeTransform(Grid grid, Lattice position, Lattice frequency);

    // c(j, iota) = V_phi f(x_j, xi_iota).
    LatticeSequence analysis(const SampledSymbol& f, const SampledSymbol& window) const;
    // sum_{j,iota} c(j,iota) e^{i<., xi_iota>} window(. - x_j).
    SampledSymbol synthesis(const LatticeSequence& c, const SampledSymbol& window) const;

    const Grid& grid() const { return grid_; }
    const Lattice& position() const { return pos_; }
    const Lattice& frequency() const { return freq_; }
    bool uses_fft() const { return patch_ > 0; }
    int patch() const { return patch_; }

private:
    struct Placement {
        std::vector<int> center;  // grid index of the patch center per axis
        RVec center_point;
        std::vector<int> offset;  // integer window shift, when aligned
        bool aligned;
    };
    Placement place(std::size_t j) const;
    // Window translated to position j, sampled on the whole grid.
    CVec shifted_window(const SampledSymbol& window, const Placement& pl, std::size_t j) const;

    Grid grid_;
    Lattice pos_;
    Lattice freq_;
    int patch_ = 0;
    std::vector<CVec> axis_dft_;  // direct path: per-axis e^{-i x_k xi_iota}, rows iota
};

LatticeSequence stft_grid(const SampledSymbol& f, const SampledSymbol& phi, const Lattice& position,
                          const Lattice& frequency);

// (2 pi)^{-d/2} integral f(x + y/2) conj(phi(x - y/2)) e^{-i<y,xi>} dy for d = 1.
// Output on the phase grid out (dimension 2); its x-axis points must be points of f's grid.
SampledSymbol wigner(const SampledSymbol& f, const SampledSymbol& phi, const Grid& out);
SampledSymbol wigner(const SampledSymbol& f, const SampledSymbol& phi);

// phi1(x) conj(phi2^(xi)) e^{-i<x,xi>} on the phase grid with the same n and L.
SampledSymbol rihaczek_window(const SampledSymbol& phi1, const SampledSymbol& phi2);

// e^{-lambda |x|^2 - mu |xi|^2} on a phase grid of dimension 2d.
SampledSymbol gaussian_symbol(double lambda, double mu, const Grid& phase_grid);
// Weyl product of a_lambda and a_mu at X in R^{2d}.
double gaussian_weyl_product(double lambda, double mu, std::span<const double> X);
// Modulation quasi-norm of a_lambda in M^{p,q}(R^{2d}) under the symplectic STFT
// with window pi^{-d} e^{-|X|^2}.
double gaussian_modnorm(double lambda, double p, double q, int d);

// Quadrature value of the same quasi-norm for a sampled symbol on a phase grid.
// X is sampled with the given stride; the frequency variable on the FFT dual grid.
double continuous_modnorm(const SampledSymbol& a, const MixedExponent& e, int x_stride = 2);

}  // namespace weylmod
