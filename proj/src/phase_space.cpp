#include "weylmod/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fft.hpp"
#include "tensor.hpp"

namespace weylmod {

using detail::contract_axis;
using detail::Odometer;

Grid::Grid(int d_, int n_, double L_) : d(d_), n(n_), L(L_) {
    require(d >= 1, "grid dimension must be positive");
    require(n >= 4 && (n & (n - 1)) == 0, "grid size must be a power of two >= 4");
    require(std::isfinite(L) && L > 0.0, "grid half-width must be positive");
}

Grid Grid::dual() const { return Grid(d, n, pi * n / (2.0 * L)); }

std::vector<int> Grid::index(std::size_t flat) const {
    std::vector<int> out(d);
    for (int a = d - 1; a >= 0; --a) {
        out[a] = static_cast<int>(flat % static_cast<std::size_t>(n));
        flat /= static_cast<std::size_t>(n);
    }
    return out;
}

RVec Grid::point(std::size_t flat) const {
    auto idx = index(flat);
    RVec out(d);
    for (int a = 0; a < d; ++a) out[a] = x(idx[a]);
    return out;
}

std::optional<int> Grid::index_of(double coord) const {
    const double r = (coord + L) / h();
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-9 || k < 0 || k >= n) return std::nullopt;
    return static_cast<int>(k);
}

double Grid::cell() const { return std::pow(h(), d); }

nlohmann::json Grid::to_json() const { return {{"d", d}, {"n", n}, {"L", L}}; }

Grid Grid::from_json(const nlohmann::json& j) {
    return Grid(j.at("d").get<int>(), j.at("n").get<int>(), j.at("L").get<double>());
}

SampledSymbol::SampledSymbol(Grid g) : grid(g), values(g.size(), cplx(0.0)) {}

SampledSymbol::SampledSymbol(Grid g, CVec v) : grid(g), values(std::move(v)) {
    require(values.size() == grid.size(), "sample count does not match grid");
}

SampledSymbol SampledSymbol::sample(Grid g, const std::function<cplx(std::span<const double>)>& fn) {
    SampledSymbol s(g);
    Odometer od(g.shape());
    RVec x(g.d);
    for (std::size_t i = 0; i < s.values.size(); ++i, od.next()) {
        for (int a = 0; a < g.d; ++a) x[a] = g.x(od.idx[a]);
        s.values[i] = fn(x);
    }
    return s;
}

double SampledSymbol::l2_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s * grid.cell());
}

double SampledSymbol::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

void SampledSymbol::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(cplx)));
    std::ofstream side(path + ".json");
    if (!side) throw IoError("cannot write " + path + ".json");
    auto j = grid.to_json();
    j["dtype"] = "complex128";
    side << j.dump(2) << '\n';
}

SampledSymbol SampledSymbol::load(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw IoError("cannot read " + path + ".json");
    auto j = nlohmann::json::parse(side);
    Grid g = Grid::from_json(j);
    const std::string dtype = j.value("dtype", "complex128");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    SampledSymbol s(g);
    if (dtype == "complex128") {
        in.read(reinterpret_cast<char*>(s.values.data()),
                static_cast<std::streamsize>(s.values.size() * sizeof(cplx)));
    } else if (dtype == "complex64") {
        std::vector<std::complex<float>> buf(s.values.size());
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(std::complex<float>)));
        for (std::size_t i = 0; i < buf.size(); ++i) s.values[i] = cplx(buf[i]);
    } else {
        throw IoError("unsupported dtype " + dtype);
    }
    if (!in) throw IoError("short read in " + path);
    return s;
}

SampledSymbol operator+(const SampledSymbol& a, const SampledSymbol& b) {
    require(a.grid == b.grid, "grid mismatch");
    SampledSymbol out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

SampledSymbol operator-(const SampledSymbol& a, const SampledSymbol& b) {
    require(a.grid == b.grid, "grid mismatch");
    SampledSymbol out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

SampledSymbol operator*(cplx s, const SampledSymbol& a) {
    SampledSymbol out = a;
    for (auto& v : out.values) v *= s;
    return out;
}

cplx inner(const SampledSymbol& f, const SampledSymbol& g) {
    require(f.grid == g.grid, "grid mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s * f.grid.cell();
}

double relative_l2(const SampledSymbol& approx, const SampledSymbol& exact) {
    return (approx - exact).l2_norm() / exact.l2_norm();
}

SampledSymbol gaussian_window(const Grid& g, double sigma) {
    const double c = std::pow(pi, -0.25 * g.d) * std::pow(sigma, -0.5 * g.d);
    return SampledSymbol::sample(g, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return cplx(c * std::exp(-r2 / (2.0 * sigma * sigma)));
    });
}

namespace {

int index_sum(std::size_t flat, int n, int d) {
    int s = 0;
    for (int a = 0; a < d; ++a) {
        s += static_cast<int>(flat % static_cast<std::size_t>(n));
        flat /= static_cast<std::size_t>(n);
    }
    return s;
}

void alternate(CVec& v, int n, int d) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (index_sum(i, n, d) & 1) v[i] = -v[i];
}

void check_boundary(const SampledSymbol& s, const char* what) {
    const double mx = s.max_abs();
    if (mx == 0.0) return;
    double edge = 0.0;
    Odometer od(s.grid.shape());
    for (std::size_t i = 0; i < s.values.size(); ++i, od.next()) {
        bool on_edge = false;
        for (int k : od.idx) on_edge = on_edge || k == 0 || k == s.grid.n - 1;
        if (on_edge) edge = std::max(edge, std::abs(s.values[i]));
    }
    if (edge > 1e-6 * mx)
        throw GridError(std::string(what) + ": grid too coarse, boundary magnitude " + std::to_string(edge / mx) +
                        " of maximum");
}

// Angular frequency of DFT bin m on a grid with spacing h; Nyquist bin taken negative.
double bin_frequency(int m, int n, double h) {
    const int w = m < n / 2 ? m : m - n;
    return 2.0 * pi * w / (n * h);
}

}  // namespace

SampledSymbol fourier(const SampledSymbol& f, bool check) {
    const Grid& g = f.grid;
    CVec buf = f.values;
    alternate(buf, g.n, g.d);
    detail::fft_inplace(buf, g.shape(), -1);
    alternate(buf, g.n, g.d);
    const double scale = std::pow(2.0 * pi, -0.5 * g.d) * g.cell();
    for (auto& v : buf) v *= scale;
    SampledSymbol out(g.dual(), std::move(buf));
    if (check) check_boundary(out, "fourier");
    return out;
}

SampledSymbol inverse_fourier(const SampledSymbol& F, bool check) {
    const Grid& g = F.grid;
    CVec buf = F.values;
    alternate(buf, g.n, g.d);
    detail::fft_inplace(buf, g.shape(), +1);
    alternate(buf, g.n, g.d);
    const double scale = std::pow(2.0 * pi, -0.5 * g.d) * g.cell();
    for (auto& v : buf) v *= scale;
    SampledSymbol out(g.dual(), std::move(buf));
    if (check) check_boundary(out, "inverse_fourier");
    return out;
}

SampledSymbol fourier_direct(const SampledSymbol& f, const Grid& out) {
    const Grid& g = f.grid;
    require(out.d == g.d, "fourier_direct: dimension mismatch");
    CVec m(static_cast<std::size_t>(out.n) * g.n);
    for (int r = 0; r < out.n; ++r)
        for (int c = 0; c < g.n; ++c) m[static_cast<std::size_t>(r) * g.n + c] = std::polar(1.0, -out.x(r) * g.x(c));
    CVec t = f.values;
    std::vector<int> shape = g.shape();
    for (int a = 0; a < g.d; ++a) {
        t = contract_axis(t, shape, a, m, out.n, false);
        shape[a] = out.n;
    }
    const double scale = std::pow(2.0 * pi, -0.5 * g.d) * g.cell();
    for (auto& v : t) v *= scale;
    return SampledSymbol(out, std::move(t));
}

SampledSymbol symplectic_fourier(const SampledSymbol& a, bool check) {
    const Grid& g = a.grid;
    require(g.d % 2 == 0, "symplectic_fourier needs a phase-space grid");
    const int d = g.d / 2;
    SampledSymbol Fa = fourier(a, check);
    Grid og(g.d, g.n, pi * g.n / (4.0 * g.L));
    SampledSymbol out(og);
    const double c = std::pow(2.0, d);
    Odometer od(og.shape());
    std::vector<int> src(g.d);
    for (std::size_t i = 0; i < out.values.size(); ++i, od.next()) {
        bool inside = true;
        for (int k = 0; k < d; ++k) {
            src[k] = g.n - od.idx[d + k];
            src[d + k] = od.idx[k];
            inside = inside && src[k] < g.n;
        }
        if (!inside) continue;
        std::size_t flat = 0;
        for (int k = 0; k < g.d; ++k) flat = flat * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(src[k]);
        out.values[i] = c * Fa.values[flat];
    }
    return out;
}

SampledSymbol shift(const SampledSymbol& f, std::span<const double> x) {
    const Grid& g = f.grid;
    require(static_cast<int>(x.size()) == g.d, "shift: dimension mismatch");
    std::vector<int> r(g.d);
    bool aligned = true;
    for (int a = 0; a < g.d; ++a) {
        const double q = x[a] / g.h();
        r[a] = static_cast<int>(std::lround(q));
        aligned = aligned && std::abs(q - r[a]) <= 1e-9;
    }
    SampledSymbol out(g);
    if (aligned) {
        Odometer od(g.shape());
        for (std::size_t i = 0; i < out.values.size(); ++i, od.next()) {
            std::size_t flat = 0;
            bool inside = true;
            for (int a = 0; a < g.d; ++a) {
                const int k = od.idx[a] - r[a];
                inside = inside && k >= 0 && k < g.n;
                flat = flat * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(k);
            }
            if (inside) out.values[i] = f.values[flat];
        }
        return out;
    }
    CVec buf = f.values;
    detail::fft_inplace(buf, g.shape(), -1);
    std::vector<CVec> ramp(g.d, CVec(g.n));
    for (int a = 0; a < g.d; ++a)
        for (int m = 0; m < g.n; ++m) ramp[a][m] = std::polar(1.0, -x[a] * bin_frequency(m, g.n, g.h()));
    Odometer od(g.shape());
    for (std::size_t i = 0; i < buf.size(); ++i, od.next()) {
        cplx p = 1.0;
        for (int a = 0; a < g.d; ++a) p *= ramp[a][od.idx[a]];
        buf[i] *= p;
    }
    detail::fft_inplace(buf, g.shape(), +1);
    const double inv = 1.0 / static_cast<double>(buf.size());
    for (auto& v : buf) v *= inv;
    out.values = std::move(buf);
    return out;
}

SampledSymbol zero_pad(const SampledSymbol& f, int factor) {
    require(factor >= 1 && (factor & (factor - 1)) == 0, "zero_pad: factor must be a power of two");
    const Grid& g = f.grid;
    Grid big(g.d, g.n * factor, g.L * factor);
    const int off = (big.n - g.n) / 2;
    SampledSymbol out(big);
    Odometer od(g.shape());
    for (std::size_t i = 0; i < f.values.size(); ++i, od.next()) {
        std::size_t flat = 0;
        for (int a = 0; a < g.d; ++a) flat = flat * static_cast<std::size_t>(big.n) + static_cast<std::size_t>(od.idx[a] + off);
        out.values[flat] = f.values[i];
    }
    return out;
}

SampledSymbol modulate(const SampledSymbol& f, std::span<const double> xi) {
    const Grid& g = f.grid;
    require(static_cast<int>(xi.size()) == g.d, "modulate: dimension mismatch");
    SampledSymbol out = f;
    Odometer od(g.shape());
    for (std::size_t i = 0; i < out.values.size(); ++i, od.next()) {
        double ph = 0.0;
        for (int a = 0; a < g.d; ++a) ph += g.x(od.idx[a]) * xi[a];
        out.values[i] *= std::polar(1.0, ph);
    }
    return out;
}

Interpolant::Interpolant(const SampledSymbol& f) : grid_(f.grid), coef_(f.values) {
    detail::fft_inplace(coef_, grid_.shape(), -1);
    const double inv = 1.0 / static_cast<double>(coef_.size());
    for (auto& v : coef_) v *= inv;
}

cplx Interpolant::operator()(std::span<const double> x) const {
    const Grid& g = grid_;
    require(static_cast<int>(x.size()) == g.d, "evaluate: dimension mismatch");
    CVec t = coef_;
    std::vector<int> shape = g.shape();
    for (int a = g.d - 1; a >= 0; --a) {
        CVec e(g.n);
        const double u = x[a] + g.L;
        for (int m = 0; m < g.n; ++m) {
            const double w = bin_frequency(m, g.n, g.h());
            e[m] = m == g.n / 2 ? cplx(std::cos(w * u)) : std::polar(1.0, w * u);
        }
        t = contract_axis(t, shape, a, e, 1, false);
        shape[a] = 1;
    }
    return t[0];
}

cplx evaluate(const SampledSymbol& f, std::span<const double> x) { return Interpolant(f)(x); }

cplx stft(const SampledSymbol& f, const SampledSymbol& phi, std::span<const double> X) {
    const Grid& g = f.grid;
    require(phi.grid == g, "stft: function and window must share a grid");
    require(static_cast<int>(X.size()) == 2 * g.d, "stft: point must lie in R^{2d}");
    for (int a = 0; a < g.d; ++a)
        if (X[a] < -g.L || X[a] >= g.L) throw InvalidArgument("stft: point outside grid support");
    SampledSymbol w = shift(phi, X.subspan(0, g.d));
    cplx s = 0.0;
    Odometer od(g.shape());
    for (std::size_t i = 0; i < f.values.size(); ++i, od.next()) {
        double ph = 0.0;
        for (int a = 0; a < g.d; ++a) ph += g.x(od.idx[a]) * X[g.d + a];
        s += f.values[i] * std::conj(w.values[i]) * std::polar(1.0, -ph);
    }
    return s * std::pow(2.0 * pi, -0.5 * g.d) * g.cell();
}

LatticeTransform::LatticeTransform(Grid grid, Lattice position, Lattice frequency)
    : grid_(grid), pos_(position), freq_(frequency) {
    require(pos_.d() == grid_.d && freq_.d() == grid_.d, "lattice and grid dimensions differ");
    require(pos_.theta() * pos_.radius() < grid_.L, "lattice point outside grid support");
    const double mreal = 2.0 * pi / (grid_.h() * freq_.theta());
    const long m = std::lround(mreal);
    if (std::abs(mreal - static_cast<double>(m)) < 1e-9 * mreal && m % 2 == 0 && m >= 4 && m <= grid_.n &&
        freq_.radius() < m / 2)
        patch_ = static_cast<int>(m);
    if (!uses_fft()) {
        const int nf = freq_.per_axis();
        CVec e(static_cast<std::size_t>(nf) * grid_.n);
        for (int r = 0; r < nf; ++r)
            for (int k = 0; k < grid_.n; ++k)
                e[static_cast<std::size_t>(r) * grid_.n + k] =
                    std::polar(1.0, -grid_.x(k) * freq_.theta() * (r - freq_.radius()));
        axis_dft_.assign(1, std::move(e));
    }
}

LatticeTransform::Placement LatticeTransform::place(std::size_t j) const {
    Placement pl;
    auto p = pos_.point(j);
    pl.aligned = true;
    for (int a = 0; a < grid_.d; ++a) {
        const double q = p[a] / grid_.h();
        const int r = static_cast<int>(std::lround(q));
        pl.aligned = pl.aligned && std::abs(q - r) <= 1e-9;
        pl.offset.push_back(r);
        pl.center.push_back(grid_.n / 2 + r);
        pl.center_point.push_back(grid_.x(grid_.n / 2 + r));
    }
    return pl;
}

CVec LatticeTransform::shifted_window(const SampledSymbol& window, const Placement&, std::size_t j) const {
    auto p = pos_.point(j);
    return shift(window, p).values;
}

LatticeSequence LatticeTransform::analysis(const SampledSymbol& f, const SampledSymbol& window) const {
    require(f.grid == grid_ && window.grid == grid_, "analysis: grid mismatch");
    LatticeSequence out(pos_, freq_);
    const int d = grid_.d;
    const double scale = std::pow(2.0 * pi, -0.5 * d) * grid_.cell();
    const std::size_t nf = freq_.size();
    if (uses_fft()) {
        const int m = patch_;
        const std::vector<int> pshape(d, m);
        std::vector<std::size_t> bins(nf);
        std::vector<RVec> fpts(nf);
        std::vector<int> bsum(nf);
        for (std::size_t k = 0; k < nf; ++k) {
            auto b = freq_.index(k);
            std::size_t flat = 0;
            int s = 0;
            for (int a = 0; a < d; ++a) {
                flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>((b[a] % m + m) % m);
                s += b[a];
            }
            bins[k] = flat;
            bsum[k] = s;
            fpts[k] = freq_.point(k);
        }
        CVec buf(ipow(static_cast<std::size_t>(m), d));
        for (std::size_t j = 0; j < pos_.size(); ++j) {
            auto pl = place(j);
            CVec wfull;
            if (!pl.aligned) wfull = shifted_window(window, pl, j);
            std::fill(buf.begin(), buf.end(), cplx(0.0));
            Odometer od(pshape);
            for (std::size_t s = 0; s < buf.size(); ++s, od.next()) {
                std::size_t kf = 0, kw = 0;
                bool inside = true, winside = true;
                for (int a = 0; a < d; ++a) {
                    const int k = pl.center[a] - m / 2 + od.idx[a];
                    inside = inside && k >= 0 && k < grid_.n;
                    const int kk = k - pl.offset[a];
                    winside = winside && kk >= 0 && kk < grid_.n;
                    kf = kf * static_cast<std::size_t>(grid_.n) + static_cast<std::size_t>(k);
                    kw = kw * static_cast<std::size_t>(grid_.n) + static_cast<std::size_t>(kk);
                }
                if (!inside) continue;
                cplx w = pl.aligned ? (winside ? window.values[kw] : cplx(0.0)) : wfull[kf];
                buf[s] = f.values[kf] * std::conj(w);
            }
            detail::fft_inplace(buf, pshape, -1);
            for (std::size_t k = 0; k < nf; ++k) {
                double ph = 0.0;
                for (int a = 0; a < d; ++a) ph += pl.center_point[a] * fpts[k][a];
                const double sg = (bsum[k] & 1) ? -scale : scale;
                out.at(j, k) = sg * buf[bins[k]] * std::polar(1.0, -ph);
            }
        }
        return out;
    }
    const int nfa = freq_.per_axis();
    CVec u(grid_.size());
    for (std::size_t j = 0; j < pos_.size(); ++j) {
        auto pl = place(j);
        CVec w = shifted_window(window, pl, j);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = f.values[i] * std::conj(w[i]);
        CVec t = u;
        std::vector<int> shape = grid_.shape();
        for (int a = 0; a < d; ++a) {
            t = contract_axis(t, shape, a, axis_dft_[0], nfa, false);
            shape[a] = nfa;
        }
        for (std::size_t k = 0; k < nf; ++k) out.at(j, k) = scale * t[k];
    }
    return out;
}

SampledSymbol LatticeTransform::synthesis(const LatticeSequence& c, const SampledSymbol& window) const {
    require(window.grid == grid_, "synthesis: grid mismatch");
    require(c.position == pos_ && c.frequency == freq_, "synthesis: lattice mismatch");
    SampledSymbol out(grid_);
    const int d = grid_.d;
    const std::size_t nf = freq_.size();
    if (uses_fft()) {
        const int m = patch_;
        const std::vector<int> pshape(d, m);
        CVec buf(ipow(static_cast<std::size_t>(m), d));
        for (std::size_t j = 0; j < pos_.size(); ++j) {
            auto pl = place(j);
            std::fill(buf.begin(), buf.end(), cplx(0.0));
            bool any = false;
            for (std::size_t k = 0; k < nf; ++k) {
                const cplx v = c.at(j, k);
                if (v == cplx(0.0)) continue;
                any = true;
                auto b = freq_.index(k);
                auto xi = freq_.point(k);
                std::size_t flat = 0;
                int s = 0;
                double ph = 0.0;
                for (int a = 0; a < d; ++a) {
                    flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>((b[a] % m + m) % m);
                    s += b[a];
                    ph += pl.center_point[a] * xi[a];
                }
                buf[flat] = ((s & 1) ? -1.0 : 1.0) * v * std::polar(1.0, ph);
            }
            if (!any) continue;
            detail::fft_inplace(buf, pshape, +1);
            CVec wfull;
            if (!pl.aligned) wfull = shifted_window(window, pl, j);
            Odometer od(pshape);
            for (std::size_t s = 0; s < buf.size(); ++s, od.next()) {
                std::size_t kf = 0, kw = 0;
                bool inside = true, winside = true;
                for (int a = 0; a < d; ++a) {
                    const int k = pl.center[a] - m / 2 + od.idx[a];
                    inside = inside && k >= 0 && k < grid_.n;
                    const int kk = k - pl.offset[a];
                    winside = winside && kk >= 0 && kk < grid_.n;
                    kf = kf * static_cast<std::size_t>(grid_.n) + static_cast<std::size_t>(k);
                    kw = kw * static_cast<std::size_t>(grid_.n) + static_cast<std::size_t>(kk);
                }
                if (!inside) continue;
                cplx w = pl.aligned ? (winside ? window.values[kw] : cplx(0.0)) : wfull[kf];
                out.values[kf] += buf[s] * w;
            }
        }
        return out;
    }
    const int nfa = freq_.per_axis();
    for (std::size_t j = 0; j < pos_.size(); ++j) {
        CVec t(c.values.begin() + static_cast<std::ptrdiff_t>(j * nf),
               c.values.begin() + static_cast<std::ptrdiff_t>((j + 1) * nf));
        bool any = std::any_of(t.begin(), t.end(), [](const cplx& v) { return v != cplx(0.0); });
        if (!any) continue;
        std::vector<int> shape(d, nfa);
        for (int a = 0; a < d; ++a) {
            t = contract_axis(t, shape, a, axis_dft_[0], grid_.n, true);
            shape[a] = grid_.n;
        }
        auto pl = place(j);
        CVec w = shifted_window(window, pl, j);
        for (std::size_t i = 0; i < t.size(); ++i) out.values[i] += t[i] * w[i];
    }
    return out;
}

LatticeSequence stft_grid(const SampledSymbol& f, const SampledSymbol& phi, const Lattice& position,
                          const Lattice& frequency) {
    return LatticeTransform(f.grid, position, frequency).analysis(f, phi);
}

SampledSymbol wigner(const SampledSymbol& f, const SampledSymbol& phi, const Grid& out) {
    const Grid& g = f.grid;
    require(g.d == 1, "wigner is implemented for d = 1");
    require(phi.grid == g, "wigner: function and window must share a grid");
    require(out.d == 2, "wigner: output must be a phase-space grid");
    std::vector<int> kx(out.n);
    for (int i = 0; i < out.n; ++i) {
        auto k = g.index_of(out.x(i));
        if (!k) throw InvalidArgument("wigner: output positions must be points of the function grid");
        kx[i] = *k;
    }
    const double h = g.h();
    const int n = g.n;
    // lag index m in (-n, n), stored at m + n
    CVec table(static_cast<std::size_t>(out.n) * 2 * n);
    for (int r = 0; r < out.n; ++r)
        for (int m = -n + 1; m < n; ++m)
            table[static_cast<std::size_t>(r) * 2 * n + (m + n)] = std::polar(1.0, -2.0 * m * h * out.x(r));
    const double scale = std::pow(2.0 * pi, -0.5) * 2.0 * h;
    SampledSymbol W(out);
    CVec lag(2 * n);
    for (int i = 0; i < out.n; ++i) {
        const int k = kx[i];
        std::fill(lag.begin(), lag.end(), cplx(0.0));
        const int mmax = std::min(k, n - 1 - k);
        for (int m = -mmax; m <= mmax; ++m) lag[m + n] = f.values[k + m] * std::conj(phi.values[k - m]);
        for (int r = 0; r < out.n; ++r) {
            const cplx* row = &table[static_cast<std::size_t>(r) * 2 * n];
            cplx s = 0.0;
            for (int m = -mmax; m <= mmax; ++m) s += lag[m + n] * row[m + n];
            W.values[static_cast<std::size_t>(i) * out.n + r] = scale * s;
        }
    }
    return W;
}

SampledSymbol wigner(const SampledSymbol& f, const SampledSymbol& phi) {
    return wigner(f, phi, Grid(2, f.grid.n, f.grid.L));
}

SampledSymbol rihaczek_window(const SampledSymbol& phi1, const SampledSymbol& phi2) {
    const Grid& g = phi1.grid;
    require(phi2.grid == g, "rihaczek_window: windows must share a grid");
    const int d = g.d;
    SampledSymbol hat = fourier_direct(phi2, g);
    Grid pg(2 * d, g.n, g.L);
    SampledSymbol out(pg);
    const std::size_t nd = g.size();
    for (std::size_t i = 0; i < nd; ++i) {
        auto x = g.point(i);
        for (std::size_t k = 0; k < nd; ++k) {
            auto xi = g.point(k);
            double ph = 0.0;
            for (int a = 0; a < d; ++a) ph += x[a] * xi[a];
            out.values[i * nd + k] = phi1.values[i] * std::conj(hat.values[k]) * std::polar(1.0, -ph);
        }
    }
    return out;
}

SampledSymbol gaussian_symbol(double lambda, double mu, const Grid& pg) {
    require(lambda > 0.0 && mu > 0.0, "gaussian_symbol: parameters must be positive");
    require(pg.d % 2 == 0, "gaussian_symbol needs a phase-space grid");
    const int d = pg.d / 2;
    return SampledSymbol::sample(pg, [&](std::span<const double> X) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += lambda * X[a] * X[a] + mu * X[d + a] * X[d + a];
        return cplx(std::exp(-s));
    });
}

double gaussian_weyl_product(double lambda, double mu, std::span<const double> X) {
    require(lambda > 0.0 && mu > 0.0, "gaussian_weyl_product: parameters must be positive");
    require(X.size() % 2 == 0, "gaussian_weyl_product: point must lie in R^{2d}");
    const double d = static_cast<double>(X.size() / 2);
    double r2 = 0.0;
    for (double v : X) r2 += v * v;
    const double den = 1.0 + lambda * mu;
    return std::pow(den, -d) * std::exp(-r2 * (lambda + mu) / den);
}

double gaussian_modnorm(double lambda, double p, double q, int d) {
    require(lambda > 0.0 && p > 0.0 && q > 0.0, "gaussian_modnorm: bad parameters");
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const double pp = std::isinf(p) ? 1.0 : std::pow(p, -ip);
    const double qq = std::isinf(q) ? 1.0 : std::pow(q, -iq);
    const double base = std::pow(pi, ip + iq - 1.0) * pp * qq * std::pow(lambda, -ip) * std::pow(1.0 + lambda, ip + iq - 1.0);
    return std::pow(base, d);
}

double continuous_modnorm(const SampledSymbol& a, const MixedExponent& e, int x_stride) {
    const Grid& g = a.grid;
    require(g.d % 2 == 0, "continuous_modnorm needs a phase-space grid");
    require(x_stride >= 1 && g.n % x_stride == 0, "continuous_modnorm: bad stride");
    const int d = g.d / 2;
    const std::size_t N = g.size();
    const double amp = std::pow(2.0, d) * std::pow(2.0 * pi, -d) * g.cell();
    const double xcell = std::pow(x_stride * g.h(), g.d);
    const double ycell = std::pow(pi / (2.0 * g.L), g.d);
    const bool pinf = std::isinf(e.p), qinf = std::isinf(e.q);
    RVec acc(N, 0.0);
    CVec buf(N);
    std::vector<int> xs(g.d);
    const int nx = g.n / x_stride;
    Odometer ox(std::vector<int>(g.d, nx));
    const std::size_t nX = ipow(static_cast<std::size_t>(nx), g.d);
    const double wnorm = std::pow(pi, -d);
    for (std::size_t c = 0; c < nX; ++c, ox.next()) {
        RVec X(g.d);
        for (int a2 = 0; a2 < g.d; ++a2) X[a2] = g.x(ox.idx[a2] * x_stride);
        Odometer oz(g.shape());
        for (std::size_t i = 0; i < N; ++i, oz.next()) {
            double r2 = 0.0;
            for (int a2 = 0; a2 < g.d; ++a2) {
                const double t = g.x(oz.idx[a2]) - X[a2];
                r2 += t * t;
            }
            buf[i] = a.values[i] * (wnorm * std::exp(-r2));
        }
        detail::fft_inplace(buf, g.shape(), -1);
        for (std::size_t i = 0; i < N; ++i) {
            const double v = amp * std::abs(buf[i]);
            if (pinf)
                acc[i] = std::max(acc[i], v);
            else
                acc[i] += std::pow(v, e.p) * xcell;
        }
    }
    RVec inner(N);
    for (std::size_t i = 0; i < N; ++i) inner[i] = pinf ? acc[i] : std::pow(acc[i], 1.0 / e.p);
    if (qinf) return *std::max_element(inner.begin(), inner.end());
    RVec terms(N);
    for (std::size_t i = 0; i < N; ++i) terms[i] = std::pow(inner[i], e.q) * ycell;
    return std::pow(pairwise_sum(terms), 1.0 / e.q);
}

}  // namespace weylmod
