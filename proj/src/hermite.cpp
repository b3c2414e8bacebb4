#include "weylmod/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tensor.hpp"

namespace weylmod {

namespace {

const double pi_quarter = std::pow(pi, -0.25);

int total(std::span<const int> a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

// Rows a = 0..n, columns grid points, entries h_a(x_k) * scale.
CVec axis_matrix(const Grid& g, int n, double scale) {
    CVec m(static_cast<std::size_t>(n + 1) * g.n);
    for (int k = 0; k < g.n; ++k) {
        RVec t = hermite_table(n, g.x(k));
        for (int a = 0; a <= n; ++a) m[static_cast<std::size_t>(a) * g.n + k] = t[a] * scale;
    }
    return m;
}

}  // namespace

RVec hermite_table(int n, double x) {
    require(n >= 0 && n <= hermite_order_cap, "hermite order outside the recurrence-stable range");
    RVec out(static_cast<std::size_t>(n) + 1);
    const double base = -0.5 * x * x;
    double prev = 0.0, cur = pi_quarter, logscale = 0.0;
    out[0] = cur * std::exp(base);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e100) {
            cur *= 1e-100;
            prev *= 1e-100;
            logscale += 100.0 * std::log(10.0);
        }
        out[static_cast<std::size_t>(k) + 1] = cur * std::exp(base + logscale);
    }
    return out;
}

double hermite_rodrigues(int n, double x) {
    require(n >= 0 && n <= 8, "hermite_rodrigues: order above 8");
    // d^k/dx^k e^{-x^2} = Q_k(x) e^{-x^2}, Q_{k+1} = Q_k' - 2x Q_k.
    RVec q{1.0};
    for (int k = 0; k < n; ++k) {
        RVec nq(q.size() + 1, 0.0);
        for (std::size_t i = 1; i < q.size(); ++i) nq[i - 1] += static_cast<double>(i) * q[i];
        for (std::size_t i = 0; i < q.size(); ++i) nq[i + 1] -= 2.0 * q[i];
        q = std::move(nq);
    }
    double poly = 0.0;
    for (std::size_t i = q.size(); i-- > 0;) poly = poly * x + q[i];
    const double norm = std::sqrt(std::ldexp(std::tgamma(n + 1.0), n));
    return pi_quarter * (n % 2 ? -1.0 : 1.0) / norm * poly * std::exp(-0.5 * x * x);
}

double hermite_function(std::span<const int> alpha, std::span<const double> x) {
    require(alpha.size() == x.size() && !alpha.empty(), "hermite_function: dimension mismatch");
    double v = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        require(alpha[i] >= 0, "hermite_function: negative order");
        v *= hermite_table(alpha[i], x[i]).back();
    }
    return v;
}

HermiteExpansion::HermiteExpansion(int d_, int max_order_)
    : d(d_), max_order(max_order_), alphas(multi_indices(d_, max_order_)), coef(alphas.size(), cplx(0.0)) {}

std::vector<std::vector<int>> HermiteExpansion::multi_indices(int d, int max_order) {
    require(d >= 1 && max_order >= 0, "multi_indices: bad dimension or order");
    std::vector<std::vector<int>> out;
    for (int n = 0; n <= max_order; ++n) {
        detail::Odometer od(std::vector<int>(static_cast<std::size_t>(d), n + 1));
        const std::size_t count = ipow(static_cast<std::size_t>(n + 1), d);
        for (std::size_t i = 0; i < count; ++i, od.next())
            if (total(od.idx) == n) out.push_back(od.idx);
    }
    return out;
}

cplx HermiteExpansion::at(std::span<const int> alpha) const {
    auto it = std::find_if(alphas.begin(), alphas.end(),
                           [&](const std::vector<int>& a) { return std::equal(a.begin(), a.end(), alpha.begin(), alpha.end()); });
    return it == alphas.end() ? cplx(0.0) : coef[static_cast<std::size_t>(it - alphas.begin())];
}

double HermiteExpansion::l2_norm_squared() const {
    double s = 0.0;
    for (const auto& c : coef) s += std::norm(c);
    return s;
}

void HermiteExpansion::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out.precision(17);
    for (std::size_t i = 0; i < coef.size(); ++i) {
        for (int a : alphas[i]) out << a << ',';
        out << coef[i].real() << ',' << coef[i].imag() << '\n';
    }
}

HermiteExpansion HermiteExpansion::read_csv(const std::string& path, int d) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::vector<std::pair<std::vector<int>, cplx>> rows;
    int order = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<int> a(static_cast<std::size_t>(d));
        double re = 0.0, im = 0.0;
        for (auto& v : a) ss >> v;
        ss >> re >> im;
        if (!ss || std::any_of(a.begin(), a.end(), [](int v) { return v < 0; }))
            throw IoError("malformed Hermite row in " + path);
        order = std::max(order, total(a));
        rows.emplace_back(std::move(a), cplx(re, im));
    }
    HermiteExpansion e(d, order);
    for (auto& [a, c] : rows) {
        auto it = std::find(e.alphas.begin(), e.alphas.end(), a);
        e.coef[static_cast<std::size_t>(it - e.alphas.begin())] = c;
    }
    return e;
}

HermiteExpansion analyze(const SampledSymbol& f, int max_order) {
    const Grid& g = f.grid;
    require(max_order >= 0 && max_order <= hermite_order_cap, "analyze: order outside the recurrence-stable range");
    const CVec m = axis_matrix(g, max_order, g.h());
    CVec t = f.values;
    std::vector<int> shape = g.shape();
    for (int a = 0; a < g.d; ++a) {
        t = detail::contract_axis(t, shape, a, m, max_order + 1, false);
        shape[a] = max_order + 1;
    }
    HermiteExpansion e(g.d, max_order);
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::size_t flat = 0;
        for (int v : e.alphas[i]) flat = flat * static_cast<std::size_t>(max_order + 1) + static_cast<std::size_t>(v);
        e.coef[i] = t[flat];
    }
    e.residual = relative_l2(synthesize(e, g), f);
    return e;
}

SampledSymbol synthesize(const HermiteExpansion& e, const Grid& g) {
    require(e.d == g.d, "synthesize: dimension mismatch");
    require(e.max_order <= hermite_order_cap, "synthesize: order outside the recurrence-stable range");
    const int N = e.max_order + 1;
    CVec t(ipow(static_cast<std::size_t>(N), g.d), cplx(0.0));
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::size_t flat = 0;
        for (int v : e.alphas[i]) flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(v);
        t[flat] = e.coef[i];
    }
    const CVec m = axis_matrix(g, e.max_order, 1.0);
    std::vector<int> shape(static_cast<std::size_t>(g.d), N);
    for (int a = 0; a < g.d; ++a) {
        t = detail::contract_axis(t, shape, a, m, g.n, true);
        shape[a] = g.n;
    }
    return SampledSymbol(g, std::move(t));
}

RVec seq_space_log_profile(const HermiteExpansion& e, double s, const RVec& r_list) {
    require(s >= 0.5, "seq_space_profile: s must be at least 1/2");
    RVec out;
    for (double r : r_list) {
        RVec terms;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const double a = std::abs(e.coef[i]);
            if (!std::isfinite(a)) throw InvalidArgument("seq_space_profile: non-finite coefficient");
            if (a == 0.0) continue;
            terms.push_back(2.0 * std::log(a) + r * std::pow(static_cast<double>(total(e.alphas[i])), 1.0 / (2.0 * s)));
        }
        if (terms.empty()) {
            out.push_back(-inf);
            continue;
        }
        const double mx = *std::max_element(terms.begin(), terms.end());
        double acc = 0.0;
        for (double t : terms) acc += std::exp(t - mx);
        out.push_back(mx + std::log(acc));
    }
    return out;
}

RVec seq_space_profile(const HermiteExpansion& e, double s, const RVec& r_list) {
    RVec out = seq_space_log_profile(e, s, r_list);
    for (auto& v : out) v = std::exp(v);
    return out;
}

FubiniReport fubini_check(const SampledSymbol& f1, const SampledSymbol& f2, const SampledSymbol& phi,
                          double tolerance, int max_order) {
    const Grid& g = phi.grid;
    require(g.d == 2, "fubini_check: phi must be two-dimensional");
    const Grid axis(1, g.n, g.L);
    require(f1.grid == axis && f2.grid == axis, "fubini_check: f1, f2 must live on the axes of phi's grid");
    const int n = g.n;
    const double h = g.h();
    auto v = [&](int k, int l) {
        return f1.values[k] * f2.values[l] * std::conj(phi.values[static_cast<std::size_t>(k) * n + l]);
    };
    FubiniReport rep;
    for (int l = 0; l < n; ++l) {
        cplx inner(0.0);
        for (int k = 0; k < n; ++k) inner += v(k, l) * h;
        rep.x_first += inner * h;
    }
    for (int k = 0; k < n; ++k) {
        cplx inner(0.0);
        for (int l = 0; l < n; ++l) inner += v(k, l) * h;
        rep.y_first += inner * h;
    }
    const auto c1 = analyze(f1, max_order);
    const auto c2 = analyze(f2, max_order);
    const auto dd = analyze(phi, max_order);
    for (std::size_t i = 0; i < dd.size(); ++i) {
        const auto& a = dd.alphas[i];
        rep.hermite += c1.coef[static_cast<std::size_t>(a[0])] * c2.coef[static_cast<std::size_t>(a[1])] *
                       std::conj(dd.coef[i]);
    }
    const cplx vals[3] = {rep.x_first, rep.y_first, rep.hermite};
    double scale = 0.0, diff = 0.0;
    for (int i = 0; i < 3; ++i) {
        scale = std::max(scale, std::abs(vals[i]));
        for (int j = i + 1; j < 3; ++j) diff = std::max(diff, std::abs(vals[i] - vals[j]));
    }
    rep.discrepancy = scale > 0.0 ? diff / scale : diff;
    rep.ok = rep.discrepancy <= tolerance;
    return rep;
}

GrowthReport stft_growth_check(const HermiteExpansion& f, const SampledSymbol& phi, double s, double c,
                               const std::vector<RVec>& xi_samples) {
    require(s > 0.0 && c > 0.0, "stft_growth_check: s and c must be positive");
    require(!xi_samples.empty(), "stft_growth_check: no samples");
    const Grid& g = phi.grid;
    const SampledSymbol fs = synthesize(f, g);
    CVec prod(fs.values.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fs.values[i] * std::conj(phi.values[i]);
    const double pref = std::pow(2.0 * pi, -0.5 * g.d) * std::pow(g.h(), g.d);
    GrowthReport rep;
    RVec norms, scaled;
    for (const auto& xi : xi_samples) {
        require(static_cast<int>(xi.size()) == g.d, "stft_growth_check: sample dimension mismatch");
        cplx u(0.0);
        detail::Odometer od(g.shape());
        for (std::size_t i = 0; i < prod.size(); ++i, od.next()) {
            double ph = 0.0;
            for (int a = 0; a < g.d; ++a) ph += g.x(od.idx[a]) * xi[a];
            u += prod[i] * std::polar(1.0, -ph);
        }
        double r = 0.0;
        for (double v : xi) r += v * v;
        r = std::sqrt(r);
        rep.xi.push_back(r);
        rep.abs_u.push_back(std::abs(u) * pref);
        scaled.push_back(rep.abs_u.back() * std::exp(-c * std::pow(r, 1.0 / s)));
    }
    RVec sorted = rep.xi;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    bool finite = true;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        finite = finite && std::isfinite(scaled[i]);
        if (rep.xi[i] <= median) rep.c_fit = std::max(rep.c_fit, scaled[i]);
        rep.worst = std::max(rep.worst, scaled[i]);
    }
    rep.fitted_bound_ok = finite && rep.worst <= rep.c_fit * (1.0 + 1e-9);
    return rep;
}

}  // namespace weylmod
