#include "weylmod/lattice_norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace weylmod {

Lattice::Lattice(double theta, int d, int radius) : theta_(theta), d_(d), radius_(radius) {
    require(std::isfinite(theta) && theta > 0.0, "lattice spacing must be positive");
    require(d >= 1, "lattice dimension must be positive");
    require(radius >= 1, "lattice radius must be positive");
}

Lattice Lattice::covering(double theta, int d, double half_width) {
    int r = static_cast<int>(std::ceil(half_width / theta - 1e-9));
    return Lattice(theta, d, std::max(r, 1));
}

std::vector<int> Lattice::index(std::size_t i) const {
    std::vector<int> out(d_);
    const auto m = static_cast<std::size_t>(per_axis());
    for (int a = d_ - 1; a >= 0; --a) {
        out[a] = static_cast<int>(i % m) - radius_;
        i /= m;
    }
    return out;
}

RVec Lattice::point(std::size_t i) const {
    auto idx = index(i);
    RVec out(d_);
    for (int a = 0; a < d_; ++a) out[a] = theta_ * idx[a];
    return out;
}

std::optional<std::size_t> Lattice::find(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != d_) return std::nullopt;
    std::size_t flat = 0;
    for (int v : idx) {
        if (v < -radius_ || v > radius_) return std::nullopt;
        flat = flat * static_cast<std::size_t>(per_axis()) + static_cast<std::size_t>(v + radius_);
    }
    return flat;
}

nlohmann::json Lattice::to_json() const { return {{"theta", theta_}, {"d", d_}, {"radius", radius_}}; }

Lattice Lattice::from_json(const nlohmann::json& j) {
    return Lattice(j.at("theta").get<double>(), j.at("d").get<int>(), j.at("radius").get<int>());
}

MixedExponent::MixedExponent(double p_, double q_) : p(p_), q(q_) {
    require(p > 0.0 && q > 0.0 && !std::isnan(p) && !std::isnan(q), "exponents must lie in (0, inf]");
}

double MixedExponent::r() const { return std::min({1.0, p, q}); }

double exponent_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Inf") return inf;
        throw InvalidArgument("bad exponent '" + s + "'");
    }
    return j.get<double>();
}

nlohmann::json exponent_to_json(double p) {
    if (std::isinf(p)) return "inf";
    return p;
}

nlohmann::json MixedExponent::to_json() const { return {{"p", exponent_to_json(p)}, {"q", exponent_to_json(q)}}; }

MixedExponent MixedExponent::from_json(const nlohmann::json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw InvalidArgument("mixed exponent must be [p, q]");
        return MixedExponent(exponent_from_json(j[0]), exponent_from_json(j[1]));
    }
    return MixedExponent(exponent_from_json(j.at("p")), exponent_from_json(j.at("q")));
}

double quasi_triangle_constant(const MixedExponent& e) { return e.r(); }

LatticeSequence::LatticeSequence(Lattice pos, Lattice freq)
    : position(pos), frequency(freq), values(pos.size() * freq.size(), cplx(0.0)) {}

LatticeSequence::LatticeSequence(Lattice pos, Lattice freq, CVec v)
    : position(pos), frequency(freq), values(std::move(v)) {
    require(values.size() == position.size() * frequency.size(), "lattice sequence size mismatch");
}

void LatticeSequence::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out.precision(17);
    for (std::size_t j = 0; j < npos(); ++j) {
        auto jp = position.index(j);
        for (std::size_t k = 0; k < nfreq(); ++k) {
            auto kp = frequency.index(k);
            for (int v : jp) out << v << ',';
            for (int v : kp) out << v << ',';
            out << at(j, k).real() << ',' << at(j, k).imag() << '\n';
        }
    }
}

LatticeSequence LatticeSequence::read_csv(const std::string& path, Lattice pos, Lattice freq) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    LatticeSequence s(pos, freq);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(ss, tok, ',')) toks.push_back(tok);
        const std::size_t need = static_cast<std::size_t>(pos.d() + freq.d() + 2);
        if (toks.size() != need) throw IoError("malformed row in " + path);
        std::vector<int> jp, kp;
        for (int a = 0; a < pos.d(); ++a) jp.push_back(std::stoi(toks[a]));
        for (int a = 0; a < freq.d(); ++a) kp.push_back(std::stoi(toks[pos.d() + a]));
        auto j = pos.find(jp);
        auto k = freq.find(kp);
        if (!j || !k) throw IoError("index outside lattice in " + path);
        s.at(*j, *k) = cplx(std::stod(toks[need - 2]), std::stod(toks[need - 1]));
    }
    return s;
}

void LatticeSequence::write_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(cplx)));
}

LatticeSequence LatticeSequence::read_binary(const std::string& path, Lattice pos, Lattice freq) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    LatticeSequence s(pos, freq);
    in.read(reinterpret_cast<char*>(s.values.data()),
            static_cast<std::streamsize>(s.values.size() * sizeof(cplx)));
    if (!in) throw IoError("short read in " + path);
    return s;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    auto half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

double lp_norm(std::span<const double> v, double p) {
    double mx = 0.0, mn = inf;
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("lp_norm: values must be finite and nonnegative");
        mx = std::max(mx, x);
        if (x > 0.0) mn = std::min(mn, x);
    }
    if (std::isinf(p) || mx == 0.0) return mx;
    RVec terms(v.size());
    if (p < 1.0 && mx / mn > 1e10) {
        // log domain: log sum x^p = log mx^p + log sum exp(p (log x - log mx))
        const double lmx = std::log(mx);
        for (std::size_t i = 0; i < v.size(); ++i)
            terms[i] = v[i] > 0.0 ? std::exp(p * (std::log(v[i]) - lmx)) : 0.0;
        return std::exp(lmx + std::log(pairwise_sum(terms)) / p);
    }
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = std::pow(v[i] / mx, p);
    return mx * std::pow(pairwise_sum(terms), 1.0 / p);
}

double mixed_norm_dense(std::span<const double> mags, std::size_t ninner, std::size_t nouter,
                        const MixedExponent& e) {
    require(mags.size() == ninner * nouter, "mixed_norm_dense: size mismatch");
    RVec inner(nouter);
    for (std::size_t o = 0; o < nouter; ++o) inner[o] = lp_norm(mags.subspan(o * ninner, ninner), e.p);
    return lp_norm(inner, e.q);
}

double mixed_norm(const LatticeSequence& c, const MixedExponent& e, const Weight& omega) {
    const int dp = c.position.d(), df = c.frequency.d();
    require(omega.dim() == dp + df, "mixed_norm: weight must live on the joint index space");
    RVec mags(c.values.size());
    std::vector<RVec> fpts(c.nfreq());
    for (std::size_t k = 0; k < c.nfreq(); ++k) fpts[k] = c.frequency.point(k);
    RVec X(dp + df);
    for (std::size_t j = 0; j < c.npos(); ++j) {
        auto jp = c.position.point(j);
        std::copy(jp.begin(), jp.end(), X.begin());
        for (std::size_t k = 0; k < c.nfreq(); ++k) {
            const cplx z = c.at(j, k);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw InvalidArgument("mixed_norm: non-finite sequence value");
            std::copy(fpts[k].begin(), fpts[k].end(), X.begin() + dp);
            mags[k * c.npos() + j] = std::abs(z) * omega(X);
        }
    }
    return mixed_norm_dense(mags, c.npos(), c.nfreq(), e);
}

double mixed_norm(const LatticeSequence& c, const MixedExponent& e) {
    return mixed_norm(c, e, Weight::one(c.position.d() + c.frequency.d()));
}

}  // namespace weylmod
