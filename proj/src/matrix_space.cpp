#include "weylmod/matrix_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace weylmod {

GaborMatrix::GaborMatrix(std::vector<IndexPoint> index, double theta, Eigen::MatrixXcd entries)
    : index_(std::move(index)), theta_(theta), entries_(std::move(entries)) {
    require(!index_.empty(), "GaborMatrix: empty index set");
    require(theta_ > 0.0, "GaborMatrix: spacing must be positive");
    const auto n = static_cast<Eigen::Index>(index_.size());
    require(entries_.rows() == n && entries_.cols() == n, "GaborMatrix: entry shape does not match index set");
    for (const auto& p : index_) require(p.size() == index_.front().size(), "GaborMatrix: ragged index points");
}

GaborMatrix GaborMatrix::zeros(std::vector<IndexPoint> index, double theta) {
    const auto n = static_cast<Eigen::Index>(index.size());
    return GaborMatrix(std::move(index), theta, Eigen::MatrixXcd::Zero(n, n));
}

GaborMatrix GaborMatrix::identity(std::vector<IndexPoint> index, double theta) {
    const auto n = static_cast<Eigen::Index>(index.size());
    return GaborMatrix(std::move(index), theta, Eigen::MatrixXcd::Identity(n, n));
}

std::vector<IndexPoint> GaborMatrix::square_index(const Lattice& lattice) {
    std::vector<IndexPoint> out;
    out.reserve(lattice.size() * lattice.size());
    for (std::size_t j = 0; j < lattice.size(); ++j) {
        auto jp = lattice.index(j);
        for (std::size_t k = 0; k < lattice.size(); ++k) {
            auto p = jp;
            auto kp = lattice.index(k);
            p.insert(p.end(), kp.begin(), kp.end());
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<IndexPoint> GaborMatrix::range_index(int n) {
    require(n >= 1, "range_index: need at least one point");
    std::vector<IndexPoint> out;
    for (int i = 0; i < n; ++i) out.push_back({i});
    return out;
}

std::optional<std::size_t> GaborMatrix::find(const IndexPoint& p) const {
    auto it = std::find(index_.begin(), index_.end(), p);
    if (it == index_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - index_.begin());
}

RVec GaborMatrix::point(std::size_t i) const {
    RVec out;
    for (int v : index_[i]) out.push_back(theta_ * v);
    return out;
}

void GaborMatrix::write_coo(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out.precision(17);
    for (Eigen::Index r = 0; r < entries_.rows(); ++r)
        for (Eigen::Index c = 0; c < entries_.cols(); ++c) {
            const cplx v = entries_(r, c);
            if (v != cplx(0.0)) out << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
        }
    std::ofstream side(path + ".json");
    if (!side) throw IoError("cannot write " + path + ".json");
    side << nlohmann::json{{"theta", theta_}, {"index", index_}}.dump() << '\n';
}

GaborMatrix GaborMatrix::read_coo(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw IoError("cannot read " + path + ".json");
    auto j = nlohmann::json::parse(side);
    auto m = zeros(j.at("index").get<std::vector<IndexPoint>>(), j.at("theta").get<double>());
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::string line;
    const auto n = static_cast<long>(m.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        long r = 0, c = 0;
        double re = 0.0, im = 0.0;
        char s1 = 0, s2 = 0, s3 = 0;
        if (!(ss >> r >> s1 >> c >> s2 >> re >> s3 >> im) || r < 0 || c < 0 || r >= n || c >= n)
            throw IoError("malformed COO row in " + path);
        m.entries_(r, c) = cplx(re, im);
    }
    return m;
}

UProfile u_profile(const GaborMatrix& A, double p, const Weight& omega) {
    const int D = A.index_dim();
    require(omega.dim() == 2 * D, "u_norm: weight must live on pairs of index points");
    std::map<IndexPoint, RVec> groups;
    RVec X(2 * D);
    IndexPoint diff(D);
    const auto& E = A.entries();
    for (Eigen::Index r = 0; r < E.rows(); ++r) {
        const auto& jr = A.index()[r];
        for (Eigen::Index c = 0; c < E.cols(); ++c) {
            const cplx v = E(r, c);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw InvalidArgument("u_norm: non-finite matrix entry");
            if (v == cplx(0.0)) continue;
            const auto& jc = A.index()[c];
            for (int a = 0; a < D; ++a) {
                diff[a] = jr[a] - jc[a];
                X[a] = A.theta() * jr[a];
                X[D + a] = A.theta() * jc[a];
            }
            groups[diff].push_back(std::abs(v) * omega(X));
        }
    }
    UProfile out;
    for (auto& [k, vals] : groups) {
        out.diffs.push_back(k);
        out.h.push_back(lp_norm(vals, p));
    }
    return out;
}

double u_norm(const GaborMatrix& A, const MixedExponent& e, const Weight& omega) {
    auto prof = u_profile(A, e.p, omega);
    if (prof.h.empty()) return 0.0;
    return lp_norm(prof.h, e.q);
}

double u_norm(const GaborMatrix& A, const MixedExponent& e) {
    return u_norm(A, e, Weight::one(2 * A.index_dim()));
}

GaborMatrix compose(const GaborMatrix& A1, const GaborMatrix& A2) {
    require(A1.index() == A2.index() && A1.theta() == A2.theta(), "compose: index sets differ");
    return GaborMatrix(A1.index(), A1.theta(), A1.entries() * A2.entries());
}

CompositionConditions composition_conditions(const MixedExponent& e0, const MixedExponent& e1,
                                             const MixedExponent& e2) {
    auto inv = [](double x) { return std::isinf(x) ? 0.0 : 1.0 / x; };
    const double tol = 1e-12;
    CompositionConditions c;
    c.holder = inv(e0.p) <= inv(e1.p) + inv(e2.p) + tol;
    const double m = std::min(1.0, e0.p);
    c.q_less_p = e1.q <= e0.q && e2.q <= e0.q && e0.q <= m;
    c.p_less_q = m <= e1.q && m <= e2.q && e1.q <= e0.q && e2.q <= e0.q &&
                 inv(m) + inv(e0.q) <= inv(e1.q) + inv(e2.q) + tol;
    return c;
}

std::string CompositionReport::flag() const {
    if (!conditions.admissible()) return "conditions-not-satisfied";
    if (!weights_ok()) return "weight-condition-violated";
    return "ok";
}

nlohmann::json CompositionReport::to_json() const {
    return {{"lhs", lhs},
            {"rhs", rhs},
            {"ratio", ratio},
            {"holder", conditions.holder},
            {"q_less_p", conditions.q_less_p},
            {"p_less_q", conditions.p_less_q},
            {"weight_ratio", weight_ratio},
            {"weight_triples", weight_triples},
            {"flag", flag()}};
}

CompositionReport check_composition_estimate(const GaborMatrix& A1, const GaborMatrix& A2,
                                             const MixedExponent& e0, const MixedExponent& e1,
                                             const MixedExponent& e2, const Weight& w0, const Weight& w1,
                                             const Weight& w2, std::uint64_t seed) {
    CompositionReport rep;
    rep.conditions = composition_conditions(e0, e1, e2);
    const std::size_t n = A1.size();
    auto ratio_at = [&](std::size_t x, std::size_t y, std::size_t z) {
        RVec px = A1.point(x), py = A1.point(y), pz = A1.point(z);
        RVec xz = px, xy = px, yz = py;
        xz.insert(xz.end(), pz.begin(), pz.end());
        xy.insert(xy.end(), py.begin(), py.end());
        yz.insert(yz.end(), pz.begin(), pz.end());
        return w0(xz) / (w1(xy) * w2(yz));
    };
    if (n * n * n <= 1000000) {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z) rep.weight_ratio = std::max(rep.weight_ratio, ratio_at(x, y, z));
        rep.weight_triples = n * n * n;
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        rep.weight_triples = 200000;
        for (std::size_t t = 0; t < rep.weight_triples; ++t)
            rep.weight_ratio = std::max(rep.weight_ratio, ratio_at(pick(rng), pick(rng), pick(rng)));
    }
    rep.lhs = u_norm(compose(A1, A2), e0, w0);
    rep.rhs = u_norm(A1, e1, w1) * u_norm(A2, e2, w2);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? inf : 0.0);
    return rep;
}

GaborMatrix c_matrix(const SampledSymbol& phi1, const SampledSymbol& phi2, const Lattice& lattice) {
    require(phi1.grid == phi2.grid, "c_matrix: windows must share a grid");
    const int d = lattice.d();
    require(phi1.grid.d == d, "c_matrix: lattice and grid dimensions differ");
    Lattice diff(lattice.theta(), d, 2 * lattice.radius());
    int factor = 1;
    while (diff.theta() * diff.radius() >= factor * phi1.grid.L) factor *= 2;
    if (diff.theta() * diff.radius() >= phi1.grid.dual().L)
        throw GridError("c_matrix: lattice frequencies exceed the grid's Nyquist range");
    LatticeSequence v = stft_grid(zero_pad(phi1, factor), zero_pad(phi2, factor), diff, diff);
    auto index = GaborMatrix::square_index(lattice);
    const std::size_t n = index.size();
    Eigen::MatrixXcd E(n, n);
    IndexPoint dp(d), df(d);
    const double t2 = lattice.theta() * lattice.theta();
    for (std::size_t r = 0; r < n; ++r) {
        const auto& J = index[r];
        for (std::size_t c = 0; c < n; ++c) {
            const auto& K = index[c];
            int phase = 0;
            for (int a = 0; a < d; ++a) {
                dp[a] = J[a] - K[a];
                df[a] = J[d + a] - K[d + a];
                phase += K[a] * (K[d + a] - J[d + a]);
            }
            const auto jd = diff.find(dp);
            const auto kd = diff.find(df);
            E(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                std::polar(1.0, t2 * phase) * v.at(*jd, *kd);
        }
    }
    return GaborMatrix(std::move(index), lattice.theta(), std::move(E));
}

Weight convolution_weight(const Weight& omega) {
    const int D = omega.dim();
    return Weight::custom(2 * D, omega.family(), "convolution(" + omega.name() + ")",
                          [omega, D](std::span<const double> x) {
                              RVec z(D);
                              for (int a = 0; a < D; ++a) z[a] = x[a] - x[D + a];
                              return omega(z);
                          });
}

double c_matrix_membership(const GaborMatrix& C, double q, const Weight& omega) {
    require(omega.dim() == C.index_dim(), "c_matrix_membership: weight must live on the index space");
    return u_norm(C, MixedExponent(inf, q), convolution_weight(omega));
}

}  // namespace weylmod
