#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylmod/common.hpp"
#include "weylmod/weights.hpp"

namespace weylmod {

// theta Z^d truncated to integer coordinates in [-radius, radius]^d,
// enumerated lexicographically (first coordinate slowest).
class Lattice {
public:
    Lattice(double theta, int d, int radius);
    // Smallest radius whose points cover [-half_width, half_width]^d.
    static Lattice covering(double theta, int d, double half_width);

    double theta() const { return theta_; }
    int d() const { return d_; }
    int radius() const { return radius_; }
    int per_axis() const { return 2 * radius_ + 1; }
    std::size_t size() const { return ipow(static_cast<std::size_t>(per_axis()), d_); }

    std::vector<int> index(std::size_t i) const;
    RVec point(std::size_t i) const;
    std::optional<std::size_t> find(std::span<const int> idx) const;

    nlohmann::json to_json() const;
    static Lattice from_json(const nlohmann::json& j);
    bool operator==(const Lattice&) const = default;

private:
    double theta_;
    int d_;
    int radius_;
};

struct MixedExponent {
    double p;
    double q;
    MixedExponent(double p, double q);
    double r() const;
    nlohmann::json to_json() const;
    static MixedExponent from_json(const nlohmann::json& j);
};

// Exponent from JSON: a number or the string "inf".
double exponent_from_json(const nlohmann::json& j);
nlohmann::json exponent_to_json(double p);

double quasi_triangle_constant(const MixedExponent& e);

// Complex values on position x frequency lattice pairs (j, iota);
// value(j, iota) = values[j * frequency.size() + iota].
struct LatticeSequence {
    Lattice position;
    Lattice frequency;
    CVec values;

    LatticeSequence(Lattice position, Lattice frequency);
    LatticeSequence(Lattice position, Lattice frequency, CVec values);

    std::size_t npos() const { return position.size(); }
    std::size_t nfreq() const { return frequency.size(); }
    cplx& at(std::size_t j, std::size_t iota) { return values[j * nfreq() + iota]; }
    const cplx& at(std::size_t j, std::size_t iota) const { return values[j * nfreq() + iota]; }

    void write_csv(const std::string& path) const;
    static LatticeSequence read_csv(const std::string& path, Lattice position, Lattice frequency);
    void write_binary(const std::string& path) const;
    static LatticeSequence read_binary(const std::string& path, Lattice position, Lattice frequency);
};

// ( sum_iota ( sum_j |c(j,iota) w(j,iota)|^p )^{q/p} )^{1/q}, sup for infinite exponents.
double mixed_norm(const LatticeSequence& c, const MixedExponent& e, const Weight& omega);
double mixed_norm(const LatticeSequence& c, const MixedExponent& e);

// l^p quasi-norm of nonnegative values; fixed pairwise summation order.
double lp_norm(std::span<const double> v, double p);

// Same nesting on a dense table: mags[outer * ninner + inner] >= 0.
double mixed_norm_dense(std::span<const double> mags, std::size_t ninner, std::size_t nouter,
                        const MixedExponent& e);

// Pairwise (fixed-tree) sum.
double pairwise_sum(std::span<const double> v);

}  // namespace weylmod
