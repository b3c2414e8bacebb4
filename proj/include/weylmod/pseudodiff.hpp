#pragma once

#include <memory>

#include <Eigen/Dense>

#include "weylmod/gabor.hpp"
#include "weylmod/matrix_space.hpp"
#include "weylmod/phase_space.hpp"

namespace weylmod {

// Real d x d matrix selecting the calculus; 0 is Kohn-Nirenberg, I/2 is Weyl.
struct CalculusParam {
    Eigen::MatrixXd A;

    explicit CalculusParam(Eigen::MatrixXd a);
    static CalculusParam kohn_nirenberg(int d = 1);
    static CalculusParam weyl(int d = 1);
    static CalculusParam scalar(double t, int d = 1);

    int d() const { return static_cast<int>(A.rows()); }
    bool is_zero() const { return A.isZero(0.0); }
};

// Distribution kernel sampled on (x, y), both axes on the spatial grid of a symbol.
struct Kernel {
    Grid grid;  // dimension 2
    Eigen::MatrixXcd values;  // values(k, l) = K(x_k, x_l)

    Grid space() const { return Grid(1, grid.n, grid.L); }
};

// Kernel of Op_A(a) for d = 1. The symbol grid's x-axis is the kernel grid.
Kernel kernel_from_symbol(const SampledSymbol& a, const CalculusParam& P);
SampledSymbol symbol_from_kernel(const Kernel& K, const CalculusParam& P);
double roundtrip_error(const SampledSymbol& a, const CalculusParam& P);

SampledSymbol apply_kernel(const Kernel& K, const SampledSymbol& f);
SampledSymbol apply_op(const SampledSymbol& a, const CalculusParam& P, const SampledSymbol& f);
// K_ab(x, z) = integral K_a(x, y) K_b(y, z) dy.
Kernel compose_kernels(const Kernel& Ka, const Kernel& Kb);

// Symbol a2 with Op_{A2}(a2) = Op_{A1}(a1), by a Fourier multiplier on phase space.
SampledSymbol calculi_transfer(const SampledSymbol& a, const CalculusParam& A1, const CalculusParam& A2);

struct MatrixRouteOptions {
    int n = 256;             // samples per axis of the function and symbol grids
    int index_radius = 20;   // one-dimensional index lattice radius
    int step = 5;            // grid points per lattice step
    DualOptions dual{1e-10, 500, true, false, 0};
};

// Gabor-matrix discretization for d = 1: Op_0(a) = D_{phi1} A C_{phi2}, with A built
// from the STFT of a against the dual of the Rihaczek window of (phi1, phi2).
// Lattice spacing theta satisfies theta^2 = 2 pi step / (n / 2) so lattice points fall
// on grid points and lattice frequencies on FFT bins of half-size patches.
class MatrixRoute {
public:
    explicit MatrixRoute(const MatrixRouteOptions& opt = {});

    double theta() const { return index_.theta(); }
    const Grid& function_grid() const { return fgrid_; }
    const Grid& symbol_grid() const { return sgrid_; }
    const Lattice& index_lattice() const { return index_; }
    const SampledSymbol& phi1() const { return phi1_; }
    const SampledSymbol& phi2() const { return phi2_; }
    const GaborSystem& symbol_system() const { return *sys2_; }

    // Matrix of Op_P(a); non-zero P goes through calculi_transfer to Kohn-Nirenberg first.
    GaborMatrix symbol_to_matrix(const SampledSymbol& a,
                                 const CalculusParam& P = CalculusParam::kohn_nirenberg()) const;
    // C_{phi2} D_{phi1} as a matrix.
    GaborMatrix c_matrix() const;
    SampledSymbol apply(const GaborMatrix& A, const SampledSymbol& f) const;
    LatticeSequence analysis(const SampledSymbol& f) const;
    SampledSymbol synthesis(const LatticeSequence& c) const;

private:
    Grid fgrid_;
    Grid sgrid_;
    Lattice index_;
    SampledSymbol phi1_, phi2_;
    LatticeTransform engine1_;
    std::shared_ptr<const GaborSystem> sys2_;
};

// Symbol of Op_P(a) Op_P(b) through kernel composition.
SampledSymbol sharp_product_kernel(const SampledSymbol& a, const SampledSymbol& b, const CalculusParam& P);
// A o C o B for the matrix route.
GaborMatrix sharp_product_matrix(const MatrixRoute& route, const SampledSymbol& a, const SampledSymbol& b,
                                 const CalculusParam& P = CalculusParam::kohn_nirenberg());

}  // namespace weylmod
