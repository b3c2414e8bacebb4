#include "weylmod/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/random/sobol.hpp>

namespace weylmod {

std::string to_string(WeightFamily f) {
    switch (f) {
        case WeightFamily::polynomial: return "polynomial";
        case WeightFamily::exponential: return "exponential";
        case WeightFamily::structured: return "structured";
        case WeightFamily::one: return "one";
        case WeightFamily::tabulated: return "tabulated";
        case WeightFamily::custom: return "custom";
    }
    return "custom";
}

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

void check_dim(const Weight& w, std::size_t n) {
    if (static_cast<std::size_t>(w.dim()) != n)
        throw InvalidArgument("weight of dimension " + std::to_string(w.dim()) +
                              " evaluated at a point of dimension " + std::to_string(n));
}

}  // namespace

Weight::Weight(int dim, WeightFamily family, std::string name, Fn fn, nlohmann::json params)
    : dim_(dim),
      family_(family),
      name_(std::move(name)),
      fn_(std::make_shared<const Fn>(std::move(fn))),
      params_(std::move(params)) {
    require(dim > 0, "weight dimension must be positive");
}

Weight Weight::polynomial(int dim, double s) {
    require(std::isfinite(s), "polynomial weight needs finite s");
    return Weight(dim, WeightFamily::polynomial, "polynomial(" + std::to_string(s) + ")",
                  [s](std::span<const double> x) { return std::pow(1.0 + norm2(x), 0.5 * s); },
                  {{"family", "polynomial"}, {"s", s}});
}

Weight Weight::exponential(int dim, double r) {
    require(std::isfinite(r) && r >= 0.0, "exponential weight needs finite r >= 0");
    return Weight(dim, WeightFamily::exponential, "exponential(" + std::to_string(r) + ")",
                  [r](std::span<const double> x) { return std::exp(r * std::sqrt(norm2(x))); },
                  {{"family", "exponential"}, {"r", r}});
}

Weight Weight::one(int dim) {
    return Weight(dim, WeightFamily::one, "one", [](std::span<const double>) { return 1.0; },
                  {{"family", "one"}});
}

Weight Weight::tabulated(int dim, double lo, double hi, int n, RVec values) {
    require(n >= 2 && hi > lo, "tabulated weight needs n >= 2 and hi > lo");
    require(values.size() == ipow(static_cast<std::size_t>(n), dim),
            "tabulated weight: value count must be n^dim");
    for (double v : values) require(v > 0.0 && std::isfinite(v), "tabulated weight values must be positive");
    auto table = std::make_shared<const RVec>(std::move(values));
    nlohmann::json params = {{"family", "tabulated"}, {"lo", lo}, {"hi", hi}, {"n", n}, {"values", *table}};
    auto fn = [dim, lo, hi, n, table](std::span<const double> x) {
        const double step = (hi - lo) / (n - 1);
        std::vector<int> base(dim);
        RVec frac(dim);
        for (int a = 0; a < dim; ++a) {
            double t = (std::clamp(x[a], lo, hi) - lo) / step;
            int i = std::min(static_cast<int>(std::floor(t)), n - 2);
            base[a] = i;
            frac[a] = t - i;
        }
        double acc = 0.0;
        for (int corner = 0; corner < (1 << dim); ++corner) {
            double wgt = 1.0;
            std::size_t idx = 0;
            for (int a = 0; a < dim; ++a) {
                int bit = (corner >> a) & 1;
                wgt *= bit ? frac[a] : 1.0 - frac[a];
                idx = idx * n + static_cast<std::size_t>(base[a] + bit);
            }
            if (wgt != 0.0) acc += wgt * (*table)[idx];
        }
        return acc;
    };
    return Weight(dim, WeightFamily::tabulated, "tabulated", fn, params);
}

Weight Weight::custom(int dim, WeightFamily family, std::string name, Fn fn) {
    return Weight(dim, family, name, std::move(fn), {{"family", to_string(family)}, {"name", name}});
}

Weight Weight::from_json(const nlohmann::json& j, int dim) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "polynomial") return polynomial(dim, j.at("s").get<double>());
    if (fam == "exponential") return exponential(dim, j.at("r").get<double>());
    if (fam == "one" || fam == "constant-one") return one(dim);
    if (fam == "tabulated")
        return tabulated(dim, j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("n").get<int>(),
                         j.at("values").get<RVec>());
    throw InvalidArgument("unknown weight family '" + fam + "'");
}

Weight Weight::embedded(int total, int offset) const {
    require(offset >= 0 && offset + dim_ <= total, "embedded weight does not fit");
    auto inner = *this;
    nlohmann::json p = {{"embedded", params_}, {"total", total}, {"offset", offset}};
    return Weight(total, family_, name_ + "@" + std::to_string(offset),
                  [inner, offset](std::span<const double> x) {
                      return inner(x.subspan(static_cast<std::size_t>(offset), static_cast<std::size_t>(inner.dim())));
                  },
                  p);
}

Weight Weight::composed(const Eigen::MatrixXd& m) const {
    require(m.rows() == dim_ && m.cols() == dim_, "composed weight: matrix must be dim x dim");
    auto inner = *this;
    return Weight(dim_, family_, name_ + "*M", [inner, m](std::span<const double> x) {
        Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::VectorXd y = m * v;
        return inner(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
    }, {{"composed", params_}});
}

double Weight::operator()(std::span<const double> x) const {
    check_dim(*this, x.size());
    return (*fn_)(x);
}

nlohmann::json Weight::to_json() const { return params_; }

RVec transform_TA(const Eigen::MatrixXd& A, std::span<const double> X, std::span<const double> Y) {
    const auto d = A.rows();
    if (A.cols() != d || static_cast<Eigen::Index>(X.size()) != 2 * d ||
        static_cast<Eigen::Index>(Y.size()) != 2 * d)
        throw InvalidArgument("transform_TA: A must be d x d and X, Y in R^{2d}");
    Eigen::Map<const Eigen::VectorXd> x(X.data(), d), xi(X.data() + d, d);
    Eigen::Map<const Eigen::VectorXd> y(Y.data(), d), eta(Y.data() + d, d);
    Eigen::VectorXd out(4 * d);
    out.segment(0, d) = y + A * (x - y);
    out.segment(d, d) = xi + A.transpose() * (eta - xi);
    out.segment(2 * d, d) = eta - xi;
    out.segment(3 * d, d) = x - y;
    return RVec(out.data(), out.data() + out.size());
}

nlohmann::json SampleReport::to_json() const {
    return {{"max_ratio", max_ratio}, {"n_samples", n_samples}, {"box", box}, {"bound", bound},
            {"passes", passes()}, {"witnesses", witnesses}};
}

std::vector<RVec> sobol_points(int dim, std::size_t count, double box, std::uint64_t seed) {
    require(dim > 0, "sobol_points: dim must be positive");
    boost::random::sobol gen(static_cast<std::size_t>(dim));
    // skip the origin corner and offset the sequence by the seed
    gen.discard(static_cast<std::uintmax_t>(dim) * (seed + 1));
    const double scale = 1.0 / (static_cast<double>(gen.max()) + 1.0);
    std::vector<RVec> pts(count, RVec(static_cast<std::size_t>(dim)));
    for (auto& p : pts)
        for (auto& c : p) c = box * (2.0 * (static_cast<double>(gen()) * scale) - 1.0);
    return pts;
}

namespace {

struct Tracker {
    SampleReport rep;
    std::vector<std::pair<double, RVec>> top;
    std::size_t keep;

    Tracker(const SamplingOptions& o) : keep(o.n_witnesses) {
        rep.box = o.box;
        rep.bound = o.bound;
        rep.n_samples = o.n_samples;
    }

    void add(double ratio, const RVec& arg) {
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (keep == 0) return;
        if (top.size() < keep || ratio > top.back().first) {
            top.emplace_back(ratio, arg);
            std::sort(top.begin(), top.end(), [](auto& a, auto& b) { return a.first > b.first; });
            if (top.size() > keep) top.pop_back();
        }
    }

    SampleReport finish() {
        for (auto& t : top) rep.witnesses.push_back(t.second);
        return rep;
    }
};

}  // namespace

SampleReport check_moderate(const Weight& w, const Weight& v, const SamplingOptions& opt) {
    require(w.dim() == v.dim(), "check_moderate: weights must share dimension");
    require(opt.n_samples >= 1, "check_moderate: need at least one sample");
    const int n = w.dim();
    Tracker t(opt);
    for (const auto& p : sobol_points(2 * n, opt.n_samples, opt.box, opt.seed)) {
        std::span<const double> x(p.data(), n), y(p.data() + n, n);
        RVec s(n);
        for (int i = 0; i < n; ++i) s[i] = x[i] + y[i];
        t.add(w(s) / (w(x) * v(y)), p);
    }
    return t.finish();
}

SampleReport check_weight_condition(const Eigen::MatrixXd& A, const Weight& w0, const Weight& w1,
                                    const Weight& w2, const SamplingOptions& opt) {
    const int d = static_cast<int>(A.rows());
    for (const Weight* w : {&w0, &w1, &w2})
        require(w->dim() == 4 * d, "check_weight_condition: weights must live on R^{4d}");
    Tracker t(opt);
    for (const auto& p : sobol_points(6 * d, opt.n_samples, opt.box, opt.seed)) {
        std::span<const double> X(p.data(), 2 * d), Y(p.data() + 2 * d, 2 * d), Z(p.data() + 4 * d, 2 * d);
        double num = w0(transform_TA(A, Z, X));
        double den = w1(transform_TA(A, Y, X)) * w2(transform_TA(A, Z, Y));
        t.add(num / den, p);
    }
    return t.finish();
}

SampleReport check_weyl_condition(const Weight& w0, const Weight& w1, const Weight& w2,
                                  const SamplingOptions& opt) {
    require(w0.dim() == w1.dim() && w1.dim() == w2.dim() && w0.dim() % 2 == 0,
            "check_weyl_condition: weights must share an even dimension");
    const int m = w0.dim() / 2;
    Tracker t(opt);
    auto sd = [m](std::span<const double> A, std::span<const double> B) {
        RVec out(2 * m);
        for (int i = 0; i < m; ++i) {
            out[i] = A[i] + B[i];
            out[m + i] = A[i] - B[i];
        }
        return out;
    };
    for (const auto& p : sobol_points(3 * m, opt.n_samples, opt.box, opt.seed)) {
        std::span<const double> X(p.data(), m), Y(p.data() + m, m), Z(p.data() + 2 * m, m);
        t.add(w0(sd(Z, X)) / (w1(sd(Y, X)) * w2(sd(Z, Y))), p);
    }
    return t.finish();
}

std::pair<double, double> exponential_envelope(const Weight& w, double r, const SamplingOptions& opt) {
    double lower = 0.0, upper = 0.0;
    for (const auto& x : sobol_points(w.dim(), opt.n_samples, opt.box, opt.seed)) {
        double e = std::exp(r * std::sqrt(norm2(x)));
        double wx = w(x);
        lower = std::max(lower, 1.0 / (e * wx));
        upper = std::max(upper, wx / e);
    }
    return {lower, upper};
}

StructuredWeightTriple::StructuredWeightTriple(Weight a, Weight b, Weight c)
    : t0(std::move(a)), t1(std::move(b)), t2(std::move(c)) {
    require(t0.dim() == t1.dim() && t1.dim() == t2.dim() && t0.dim() % 2 == 0,
            "structured weights: vartheta_j must share an even dimension 2d");
}

Weight StructuredWeightTriple::omega(int k) const {
    require(k >= 0 && k <= 2, "structured weights: index must be 0, 1 or 2");
    const Weight& num = k == 2 ? t1 : t2;
    const Weight& den = k == 1 ? t1 : t0;
    const int m = t0.dim();
    return Weight::custom(2 * m, WeightFamily::structured, "structured-omega" + std::to_string(k),
                          [num, den, m](std::span<const double> xy) {
                              RVec dif(m), sum(m);
                              for (int i = 0; i < m; ++i) {
                                  dif[i] = xy[i] - xy[m + i];
                                  sum[i] = xy[i] + xy[m + i];
                              }
                              return num(dif) / den(sum);
                          });
}

Weight StructuredWeightTriple::omega_ta(int k) const {
    Weight w = omega(k);
    const int d = t0.dim() / 2;
    return Weight::custom(4 * d, WeightFamily::structured, w.name() + "-ta",
                          [w, d](std::span<const double> p) {
                              RVec q(p.begin(), p.end());
                              // W = (w1, w2) -> (w2/2, -w1/2)
                              for (int i = 0; i < d; ++i) {
                                  q[2 * d + i] = 0.5 * p[3 * d + i];
                                  q[3 * d + i] = -0.5 * p[2 * d + i];
                              }
                              return w(q);
                          });
}

}  // namespace weylmod
