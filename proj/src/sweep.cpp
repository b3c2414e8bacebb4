#include "weylmod/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <random>

#include "weylmod/gabor.hpp"
#include "weylmod/matrix_space.hpp"
#include "weylmod/pseudodiff.hpp"

namespace weylmod {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Runs f(i) for i < n on up to jobs threads; results keep index order.
template <class F>
auto parallel_map(std::size_t n, int jobs, F f) {
    using R = decltype(f(std::size_t{0}));
    std::vector<R> out;
    out.reserve(n);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
        return out;
    }
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(jobs)) {
        std::vector<std::future<R>> batch;
        for (std::size_t i = start; i < std::min(n, start + static_cast<std::size_t>(jobs)); ++i)
            batch.push_back(std::async(std::launch::async, f, i));
        for (auto& b : batch) out.push_back(b.get());
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out.precision(17);
    return out;
}

}  // namespace

nlohmann::json ExponentTriple::to_json() const {
    return nlohmann::json::array({e0.to_json(), e1.to_json(), e2.to_json()});
}

ExponentTriple ExponentTriple::from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw InvalidArgument("exponent triple must be a list of three [p, q] pairs");
    return {MixedExponent::from_json(j[0]), MixedExponent::from_json(j[1]), MixedExponent::from_json(j[2])};
}

double ExponentTriple::large_lambda_slope() const { return inv(e0.p) - inv(e1.q) - inv(e2.q); }
double ExponentTriple::small_lambda_slope() const { return inv(e1.p) + inv(e2.p) - inv(e0.p); }

RVec log_space(double lo, double hi, int points) {
    require(lo > 0.0 && hi > lo && points >= 2, "log_space: need 0 < lo < hi and at least two points");
    RVec out(static_cast<std::size_t>(points));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i) out[i] = std::exp(a + (b - a) * i / (points - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

double fit_slope(const RVec& x, const RVec& y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_slope: need at least two points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, "fit_slope: values must be positive");
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    require(sxx > 0.0, "fit_slope: x values must differ");
    return sxy / sxx;
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
    SweepConfig c;
    if (j.contains("schema") && j.at("schema").get<int>() != sweep_schema_version)
        throw InvalidArgument("unsupported config schema version");
    if (j.contains("triples"))
        for (const auto& t : j.at("triples")) c.triples.push_back(ExponentTriple::from_json(t));
    if (j.contains("lambda_grid")) {
        const auto& lg = j.at("lambda_grid");
        if (lg.is_array()) {
            c.lambda_grid = lg.get<RVec>();
        } else {
            c.lambda_grid = log_space(lg.at("min").get<double>(), lg.at("max").get<double>(), lg.at("points").get<int>());
        }
    } else {
        c.lambda_grid = log_space(1e-4, 1e4, 81);
    }
    for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
        if (!(c.lambda_grid[i] > 0.0) || !std::isfinite(c.lambda_grid[i]))
            throw InvalidArgument("lambda_grid values must be positive and finite");
        if (i > 0 && c.lambda_grid[i] <= c.lambda_grid[i - 1]) throw InvalidArgument("lambda_grid must be sorted");
    }
    c.d = j.value("d", 1);
    if (c.d < 1) throw InvalidArgument("d must be positive");
    if (j.contains("weight")) c.weight = j.at("weight");
    Weight::from_json(c.weight, 4 * c.d);
    if (j.contains("counterexample")) {
        const auto& ce = j.at("counterexample");
        c.counterexample.q0 = exponent_from_json(ce.value("q0", nlohmann::json(1.0)));
        c.counterexample.q1 = exponent_from_json(ce.value("q1", nlohmann::json(2.0)));
        c.counterexample.p = exponent_from_json(ce.value("p", nlohmann::json(2.0)));
        c.counterexample.N_list = ce.value("N_list", c.counterexample.N_list);
        c.counterexample.grid_n = ce.value("grid_n", c.counterexample.grid_n);
        c.counterexample.grid_L = ce.value("grid_L", c.counterexample.grid_L);
        c.counterexample.theta = ce.value("theta", c.counterexample.theta);
    }
    if (!(c.counterexample.q0 < c.counterexample.q1))
        throw InvalidArgument("counterexample needs q0 < q1");
    for (int N : c.counterexample.N_list)
        if (N < 0) throw InvalidArgument("counterexample N must be nonnegative");
    if (j.contains("stfta")) {
        const auto& s = j.at("stfta");
        c.stfta.N = s.value("N", c.stfta.N);
        c.stfta.q0 = exponent_from_json(s.value("q0", nlohmann::json(1.0)));
        c.stfta.points = s.value("points", c.stfta.points);
        c.stfta.grid_n = s.value("grid_n", c.stfta.grid_n);
        c.stfta.grid_L = s.value("grid_L", c.stfta.grid_L);
    }
    if (c.stfta.N < 0 || c.stfta.N > 8) throw InvalidArgument("stfta N must lie in [0, 8]");
    if (j.contains("numeric_check")) {
        const auto& nc = j.at("numeric_check");
        c.numeric.enabled = nc.value("enabled", false);
        c.numeric.lambdas = nc.value("lambdas", c.numeric.lambdas);
        c.numeric.grid_n = nc.value("grid_n", c.numeric.grid_n);
        c.numeric.grid_L = nc.value("grid_L", c.numeric.grid_L);
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.out = j.value("out", c.out);
    c.jobs = j.value("jobs", 1);
    return c;
}

SweepConfig SweepConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad config: ") + e.what());
    }
}

nlohmann::json SweepConfig::to_json() const {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& x : triples) t.push_back(x.to_json());
    return {{"schema", sweep_schema_version},
            {"triples", t},
            {"lambda_grid", lambda_grid},
            {"d", d},
            {"weight", weight},
            {"counterexample",
             {{"q0", exponent_to_json(counterexample.q0)},
              {"q1", exponent_to_json(counterexample.q1)},
              {"p", exponent_to_json(counterexample.p)},
              {"N_list", counterexample.N_list},
              {"grid_n", counterexample.grid_n},
              {"grid_L", counterexample.grid_L},
              {"theta", counterexample.theta}}},
            {"stfta",
             {{"N", stfta.N},
              {"q0", exponent_to_json(stfta.q0)},
              {"points", stfta.points},
              {"grid_n", stfta.grid_n},
              {"grid_L", stfta.grid_L}}},
            {"numeric_check",
             {{"enabled", numeric.enabled},
              {"lambdas", numeric.lambdas},
              {"grid_n", numeric.grid_n},
              {"grid_L", numeric.grid_L}}},
            {"seed", seed},
            {"out", out},
            {"jobs", jobs}};
}

RatioRow gaussian_ratio(double lambda, const ExponentTriple& t, int d) {
    // a_lambda # a_lambda = (1 + lambda^2)^{-d} a_{2 lambda / (1 + lambda^2)}
    const double l2 = 2.0 * lambda / (1.0 + lambda * lambda);
    RatioRow r;
    r.lambda = lambda;
    r.lhs = std::pow(1.0 + lambda * lambda, -d) * gaussian_modnorm(l2, t.e0.p, t.e0.q, d);
    r.rhs1 = gaussian_modnorm(lambda, t.e1.p, t.e1.q, d);
    r.rhs2 = gaussian_modnorm(lambda, t.e2.p, t.e2.q, d);
    r.ratio = r.lhs / (r.rhs1 * r.rhs2);
    return r;
}

RatioSweep gaussian_ratio_sweep(const ExponentTriple& t, const RVec& lambdas, int d) {
    RatioSweep s;
    s.triple = t;
    for (double l : lambdas) s.rows.push_back(gaussian_ratio(l, t, d));
    s.admissible = composition_conditions(t.e0, t.e1, t.e2).admissible();
    s.necessary = inv(t.e0.p) <= inv(t.e1.p) + inv(t.e2.p) && inv(t.e0.p) <= inv(t.e1.q) + inv(t.e2.q) &&
                  t.e1.q <= t.e0.q && t.e2.q <= t.e0.q;
    const double lo = lambdas.front(), hi = lambdas.back();
    RVec xs, ys, xl, yl;
    for (const auto& r : s.rows) {
        if (r.lambda <= lo * 10.0) {
            xs.push_back(r.lambda);
            ys.push_back(r.ratio);
        }
        if (r.lambda >= hi / 10.0) {
            xl.push_back(r.lambda);
            yl.push_back(r.ratio);
        }
    }
    if (xs.size() >= 2) s.slope_small = fit_slope(xs, ys);
    if (xl.size() >= 2) s.slope_large = fit_slope(xl, yl);
    return s;
}

nlohmann::json RatioSweep::to_json() const {
    return {{"triple", triple.to_json()},
            {"slope_large", slope_large},
            {"slope_small", slope_small},
            {"expected_large", triple.large_lambda_slope()},
            {"expected_small", triple.small_lambda_slope()},
            {"admissible", admissible},
            {"necessary", necessary}};
}

std::vector<RatioSweep> run_gaussian_ratio_sweep(const SweepConfig& cfg) {
    require(!cfg.triples.empty(), "sweep-ratio: config lists no exponent triples");
    return parallel_map(cfg.triples.size(), cfg.jobs,
                        [&](std::size_t i) { return gaussian_ratio_sweep(cfg.triples[i], cfg.lambda_grid, cfg.d); });
}

void write_ratio_csv(const std::vector<RatioSweep>& sweeps, const std::string& path) {
    auto out = open_out(path);
    out << "triple,lambda,lhs,rhs1,rhs2,ratio\n";
    for (std::size_t i = 0; i < sweeps.size(); ++i)
        for (const auto& r : sweeps[i].rows)
            out << i << ',' << r.lambda << ',' << r.lhs << ',' << r.rhs1 << ',' << r.rhs2 << ',' << r.ratio << '\n';
}

RVec numeric_gaussian_ratio(const ExponentTriple& t, const NumericCheckConfig& nc) {
    const Grid g(2, nc.grid_n, nc.grid_L);
    const auto W = CalculusParam::weyl();
    RVec out;
    for (double l : nc.lambdas) {
        const auto a = gaussian_symbol(l, l, g);
        const auto ab = sharp_product_kernel(a, a, W);
        const double lhs = continuous_modnorm(ab, t.e0);
        out.push_back(lhs / (continuous_modnorm(a, t.e1) * continuous_modnorm(a, t.e2)));
    }
    return out;
}

RVec counterexample_sequence(int N, double q0) {
    require(N >= 0 && q0 > 0.0, "counterexample_sequence: bad parameters");
    RVec c;
    for (int k = -N; k <= N; ++k) c.push_back(std::pow(1.0 + std::abs(k), -inv(q0)));
    return c;
}

SampledSymbol counterexample_function(const Grid& g, int N, double q0) {
    require(g.d == 1, "counterexample_function: d = 1 only");
    const RVec c = counterexample_sequence(N, q0);
    const double norm = std::pow(pi, -0.25);
    return SampledSymbol::sample(g, [&](std::span<const double> x) {
        cplx s(0.0);
        for (int k = -N; k <= N; ++k) s += c[static_cast<std::size_t>(k + N)] * std::polar(1.0, x[0] * k);
        return s * norm * std::exp(-0.5 * x[0] * x[0]);
    });
}

std::vector<CounterexampleRow> run_counterexample(const SweepConfig& cfg) {
    const auto& ce = cfg.counterexample;
    require(ce.q0 < ce.q1, "counterexample needs q0 < q1");
    require(!ce.N_list.empty(), "counterexample: empty N list");
    const Grid g(1, ce.grid_n, ce.grid_L);
    const int Nmax = *std::max_element(ce.N_list.begin(), ce.N_list.end());
    require(Nmax + 8.0 < pi / g.h(), "counterexample: grid does not resolve the largest frequency");
    const Lattice pos = Lattice::covering(ce.theta, 1, ce.grid_L - 4.0);
    const Lattice freq = Lattice::covering(ce.theta, 1, Nmax + 8.0);
    DualOptions opt;
    opt.estimate_bounds = false;
    const GaborSystem sys(gaussian_window(g), pos, freq, opt);
    return parallel_map(ce.N_list.size(), cfg.jobs, [&](std::size_t i) {
        const int N = ce.N_list[i];
        const RVec c = counterexample_sequence(N, ce.q0);
        const auto f = counterexample_function(g, N, ce.q0);
        CounterexampleRow r;
        r.N = N;
        r.c_q0 = lp_norm(c, ce.q0);
        r.c_q1 = lp_norm(c, ce.q1);
        r.lower_bound = std::pow(2.0 * pi, -0.5 * inv(ce.q0)) * r.c_q0;
        r.m_inf_q0 = modnorm_estimate(sys, f, MixedExponent(inf, ce.q0));
        r.m_p_q1 = modnorm_estimate(sys, f, MixedExponent(ce.p, ce.q1));
        return r;
    });
}

void write_counterexample_csv(const std::vector<CounterexampleRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "N,c_q0,c_q1,lower_bound,m_inf_q0,m_p_q1\n";
    for (const auto& r : rows)
        out << r.N << ',' << r.c_q0 << ',' << r.c_q1 << ',' << r.lower_bound << ',' << r.m_inf_q0 << ','
            << r.m_p_q1 << '\n';
}

cplx stfta_closed_form(const RVec& c, int N, const RVec& X) {
    require(X.size() == 4, "stfta_closed_form: point must be (x, xi, eta, y)");
    require(c.size() == static_cast<std::size_t>(2 * N + 1), "stfta_closed_form: sequence length mismatch");
    const double x = X[0], xi = X[1], eta = X[2], y = X[3];
    cplx s(0.0);
    for (int k = -N; k <= N; ++k) {
        const double e = x * x / 2 + 0.5 * (xi - k / 2.0) * (xi - k / 2.0) + (eta - k) * (eta - k) / 8 + y * y / 8;
        const double ph = -0.5 * (x * (eta - k) + y * (xi + k / 2.0));
        s += c[static_cast<std::size_t>(k + N)] * std::exp(-e) * std::polar(1.0, ph);
    }
    return s / (4.0 * pi);
}

cplx wigner_closed_form(const RVec& c, int N, double x, double xi) {
    cplx s(0.0);
    for (int k = -N; k <= N; ++k)
        s += c[static_cast<std::size_t>(k + N)] * std::exp(-x * x - (xi - k / 2.0) * (xi - k / 2.0)) *
             std::polar(1.0, x * k);
    return s * std::sqrt(2.0 / pi);
}

nlohmann::json StftaReport::to_json() const {
    return {{"points", points.size()},
            {"max_rel_error", max_rel_error},
            {"wigner_rel_error", wigner_rel_error},
            {"ok", ok}};
}

StftaReport run_stfta_check(const SweepConfig& cfg, double tolerance) {
    const auto& sc = cfg.stfta;
    require(sc.N >= 0 && sc.N <= 8, "stfta check needs N in [0, 8]");
    require(sc.points >= 1, "stfta check needs at least one point");
    const Grid g(1, sc.grid_n, sc.grid_L);
    const RVec c = counterexample_sequence(sc.N, sc.q0);
    const auto f = counterexample_function(g, sc.N, sc.q0);
    const auto a = wigner(f, gaussian_window(g));
    StftaReport rep;
    {
        SampledSymbol exact(a.grid);
        for (int i = 0; i < a.grid.n; ++i)
            for (int k = 0; k < a.grid.n; ++k)
                exact.values[static_cast<std::size_t>(i) * a.grid.n + k] = wigner_closed_form(c, sc.N, a.grid.x(i), a.grid.x(k));
        rep.wigner_rel_error = relative_l2(a, exact);
    }
    const SampledSymbol Phi = std::pow(2.0 * pi, -0.5) * gaussian_symbol(1.0, 1.0, a.grid);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> pos(-1.5, 1.5), eta(-sc.N - 2.0, sc.N + 2.0), yy(-3.0, 3.0);
    double scale = 0.0, err = 0.0;
    for (int i = 0; i < sc.points; ++i) {
        RVec X{pos(rng), pos(rng), eta(rng), yy(rng)};
        const cplx cf = stfta_closed_form(c, sc.N, X);
        const cplx nm = stft(a, Phi, X);
        rep.points.push_back(X);
        rep.closed.push_back(cf);
        rep.numeric.push_back(nm);
        scale = std::max(scale, std::abs(cf));
        err = std::max(err, std::abs(nm - cf));
    }
    rep.max_rel_error = scale > 0.0 ? err / scale : err;
    rep.ok = rep.max_rel_error <= tolerance;
    return rep;
}

}  // namespace weylmod
