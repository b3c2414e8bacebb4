#include "weylmod/pseudodiff.hpp"

#include <cmath>

#include "tensor.hpp"

namespace weylmod {

CalculusParam::CalculusParam(Eigen::MatrixXd a) : A(std::move(a)) {
    require(A.rows() == A.cols() && A.rows() >= 1, "calculus parameter must be a square matrix");
    require(A.allFinite(), "calculus parameter must be finite");
}

CalculusParam CalculusParam::kohn_nirenberg(int d) { return CalculusParam(Eigen::MatrixXd::Zero(d, d)); }
CalculusParam CalculusParam::weyl(int d) { return CalculusParam(0.5 * Eigen::MatrixXd::Identity(d, d)); }
CalculusParam CalculusParam::scalar(double t, int d) { return CalculusParam(t * Eigen::MatrixXd::Identity(d, d)); }

namespace {

struct LagSet {
    int n;
    double h;
    std::vector<int> m;  // lag indices u = m h with |u| < pi / h
};

LagSet lags(const Grid& g) {
    LagSet s{g.n, g.h(), {}};
    for (int m = -(g.n - 1); m <= g.n - 1; ++m)
        if (std::abs(m * s.h) < pi / s.h) s.m.push_back(m);
    return s;
}

void check_kernel_setup(const Grid& g, const CalculusParam& P) {
    require(g.d == 2, "kernel routines are implemented for d = 1");
    require(P.d() == 1, "calculus parameter dimension must match the symbol");
}

}  // namespace

Kernel kernel_from_symbol(const SampledSymbol& a, const CalculusParam& P) {
    const Grid& g = a.grid;
    check_kernel_setup(g, P);
    const double mx = a.max_abs();
    for (int k = 0; k < g.n; ++k)
        for (int e : {0, g.n - 1}) {
            const double v = std::max(std::abs(a.values[static_cast<std::size_t>(k) * g.n + e]),
                                      std::abs(a.values[static_cast<std::size_t>(e) * g.n + k]));
            if (v > 1e-8 * mx) throw GridError("kernel_from_symbol: symbol has not decayed at the grid boundary");
        }
    const int n = g.n;
    const double h = g.h();
    const double t = P.A(0, 0);
    const auto L = lags(g);
    const auto nu = static_cast<Eigen::Index>(L.m.size());
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> amat(a.values.data(), n, n);
    Eigen::MatrixXcd E(n, nu);
    for (int j = 0; j < n; ++j)
        for (Eigen::Index c = 0; c < nu; ++c) E(j, c) = std::polar(h / (2.0 * pi), L.m[c] * h * g.x(j));
    Eigen::MatrixXcd B = amat * E;
    Grid sg(1, n, g.L);
    Kernel K{Grid(2, n, g.L), Eigen::MatrixXcd::Zero(n, n)};
    for (Eigen::Index c = 0; c < nu; ++c) {
        const int m = L.m[c];
        SampledSymbol col(sg, CVec(B.col(c).data(), B.col(c).data() + n));
        const double sh = t * m * h;
        if (sh != 0.0) col = shift(col, std::span<const double>(&sh, 1));
        for (int k = std::max(0, m); k < std::min(n, n + m); ++k) K.values(k, k - m) = col.values[k];
    }
    return K;
}

SampledSymbol symbol_from_kernel(const Kernel& K, const CalculusParam& P) {
    const Grid& g = K.grid;
    check_kernel_setup(g, P);
    const int n = g.n;
    const double h = g.h();
    const double t = P.A(0, 0);
    const auto L = lags(g);
    const auto nu = static_cast<Eigen::Index>(L.m.size());
    Grid sg(1, n, g.L);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, nu);
    for (Eigen::Index c = 0; c < nu; ++c) {
        const int m = L.m[c];
        SampledSymbol col(sg);
        for (int k = std::max(0, m); k < std::min(n, n + m); ++k) col.values[k] = K.values(k, k - m);
        const double sh = -t * m * h;
        if (sh != 0.0) col = shift(col, std::span<const double>(&sh, 1));
        for (int k = 0; k < n; ++k) B(k, c) = col.values[k];
    }
    Eigen::MatrixXcd E(nu, n);
    for (Eigen::Index c = 0; c < nu; ++c)
        for (int j = 0; j < n; ++j) E(c, j) = std::polar(h, -L.m[c] * h * g.x(j));
    Eigen::MatrixXcd amat = B * E;
    SampledSymbol a(g);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) a.values[static_cast<std::size_t>(k) * n + j] = amat(k, j);
    return a;
}

double roundtrip_error(const SampledSymbol& a, const CalculusParam& P) {
    return relative_l2(symbol_from_kernel(kernel_from_symbol(a, P), P), a);
}

SampledSymbol apply_kernel(const Kernel& K, const SampledSymbol& f) {
    require(f.grid == K.space(), "apply_kernel: function must live on the kernel grid");
    Eigen::Map<const Eigen::VectorXcd> fv(f.values.data(), static_cast<Eigen::Index>(f.values.size()));
    Eigen::VectorXcd g = K.values * fv * K.grid.h();
    return SampledSymbol(f.grid, CVec(g.data(), g.data() + g.size()));
}

SampledSymbol apply_op(const SampledSymbol& a, const CalculusParam& P, const SampledSymbol& f) {
    return apply_kernel(kernel_from_symbol(a, P), f);
}

Kernel compose_kernels(const Kernel& Ka, const Kernel& Kb) {
    require(Ka.grid == Kb.grid, "compose_kernels: grid mismatch");
    return Kernel{Ka.grid, Ka.values * Kb.values * Ka.grid.h()};
}

SampledSymbol calculi_transfer(const SampledSymbol& a, const CalculusParam& A1, const CalculusParam& A2) {
    const Grid& g = a.grid;
    require(g.d % 2 == 0, "calculi_transfer needs a phase-space grid");
    const int d = g.d / 2;
    require(A1.d() == d && A2.d() == d, "calculus parameter dimension must match the symbol");
    const Eigen::MatrixXd dA = A1.A - A2.A;
    if (dA.isZero(0.0)) return a;
    SampledSymbol F = fourier(a, true);
    detail::Odometer od(F.grid.shape());
    for (std::size_t i = 0; i < F.values.size(); ++i, od.next()) {
        double ph = 0.0;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) ph += F.grid.x(od.idx[r]) * dA(r, c) * F.grid.x(od.idx[d + c]);
        F.values[i] *= std::polar(1.0, ph);
    }
    return inverse_fourier(F, false);
}

namespace {

double route_theta(const MatrixRouteOptions& o) {
    require(o.n >= 16 && o.step >= 1 && o.index_radius >= 1, "matrix route: bad options");
    return std::sqrt(2.0 * pi * o.step / (o.n / 2));
}

double route_half_width(const MatrixRouteOptions& o) { return o.n * (route_theta(o) / o.step) / 2.0; }

}  // namespace

MatrixRoute::MatrixRoute(const MatrixRouteOptions& opt)
    : fgrid_(1, opt.n, route_half_width(opt)),
      sgrid_(2, opt.n, route_half_width(opt)),
      index_(route_theta(opt), 1, opt.index_radius),
      phi1_(gaussian_window(fgrid_)),
      phi2_(gaussian_window(fgrid_)),
      engine1_(fgrid_, index_, index_) {
    SampledSymbol Phi = rihaczek_window(phi1_, phi2_);
    Lattice pos(index_.theta(), 2, opt.index_radius);
    Lattice freq(index_.theta(), 2, 2 * opt.index_radius);
    sys2_ = std::make_shared<const GaborSystem>(std::move(Phi), pos, freq, opt.dual);
}

GaborMatrix MatrixRoute::symbol_to_matrix(const SampledSymbol& a, const CalculusParam& P) const {
    require(a.grid == sgrid_, "symbol_to_matrix: symbol must live on the route's symbol grid");
    SampledSymbol a0 = P.is_zero() ? a : calculi_transfer(a, P, CalculusParam::kohn_nirenberg());
    LatticeSequence v = sys2_->dual_analysis(a0);
    auto index = GaborMatrix::square_index(index_);
    const std::size_t n = index.size();
    const double t2 = theta() * theta();
    Eigen::MatrixXcd E(n, n);
    int pj[2], fw[2];
    for (std::size_t r = 0; r < n; ++r) {
        const int j = index[r][0], iota = index[r][1];
        for (std::size_t c = 0; c < n; ++c) {
            const int k = index[c][0], kappa = index[c][1];
            pj[0] = j;
            pj[1] = kappa;
            fw[0] = iota - kappa;
            fw[1] = k - j;
            const auto ip = v.position.find(pj);
            const auto iw = v.frequency.find(fw);
            E(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                v.at(*ip, *iw) * std::polar(1.0, t2 * (k - j) * kappa);
        }
    }
    return GaborMatrix(std::move(index), theta(), std::move(E));
}

GaborMatrix MatrixRoute::c_matrix() const { return weylmod::c_matrix(phi1_, phi2_, index_); }

LatticeSequence MatrixRoute::analysis(const SampledSymbol& f) const { return engine1_.analysis(f, phi2_); }

SampledSymbol MatrixRoute::synthesis(const LatticeSequence& c) const { return engine1_.synthesis(c, phi1_); }

SampledSymbol MatrixRoute::apply(const GaborMatrix& A, const SampledSymbol& f) const {
    require(A.size() == index_.size() * index_.size(), "apply: matrix does not match the index lattice");
    LatticeSequence c = analysis(f);
    Eigen::Map<const Eigen::VectorXcd> cv(c.values.data(), static_cast<Eigen::Index>(c.values.size()));
    Eigen::VectorXcd b = A.entries() * cv;
    LatticeSequence bs(index_, index_, CVec(b.data(), b.data() + b.size()));
    return synthesis(bs);
}

SampledSymbol sharp_product_kernel(const SampledSymbol& a, const SampledSymbol& b, const CalculusParam& P) {
    require(a.grid == b.grid, "sharp_product_kernel: symbols must share a grid");
    return symbol_from_kernel(compose_kernels(kernel_from_symbol(a, P), kernel_from_symbol(b, P)), P);
}

GaborMatrix sharp_product_matrix(const MatrixRoute& route, const SampledSymbol& a, const SampledSymbol& b,
                                 const CalculusParam& P) {
    auto A = route.symbol_to_matrix(a, P);
    auto B = route.symbol_to_matrix(b, P);
    return compose(compose(A, route.c_matrix()), B);
}

}  // namespace weylmod
