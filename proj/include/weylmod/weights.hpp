#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "weylmod/common.hpp"

namespace weylmod {

enum class WeightFamily { polynomial, exponential, structured, one, tabulated, custom };

std::string to_string(WeightFamily f);

// Positive function on R^dim. Cheap to copy; immutable.
class Weight {
public:
    using Fn = std::function<double(std::span<const double>)>;

    static Weight polynomial(int dim, double s);    // (1+|x|^2)^{s/2}
    static Weight exponential(int dim, double r);   // e^{r|x|}
    static Weight one(int dim);
    // Regular grid on [lo, hi]^dim with n nodes per axis, multilinear interpolation,
    // clamped to the box. values in row-major order, first axis slowest.
    static Weight tabulated(int dim, double lo, double hi, int n, RVec values);
    static Weight custom(int dim, WeightFamily family, std::string name, Fn fn);
    static Weight from_json(const nlohmann::json& j, int dim);

    // Weight on R^total whose value depends only on coordinates [offset, offset+dim()).
    Weight embedded(int total, int offset = 0) const;
    // x -> w(Mx) for a dim x dim matrix M.
    Weight composed(const Eigen::MatrixXd& m) const;

    double operator()(std::span<const double> x) const;
    double operator()(const RVec& x) const { return (*this)(std::span<const double>(x)); }

    int dim() const { return dim_; }
    WeightFamily family() const { return family_; }
    const std::string& name() const { return name_; }
    nlohmann::json to_json() const;

private:
    Weight(int dim, WeightFamily family, std::string name, Fn fn, nlohmann::json params);
    int dim_ = 0;
    WeightFamily family_ = WeightFamily::one;
    std::string name_;
    std::shared_ptr<const Fn> fn_;
    nlohmann::json params_;
};

// T_A(X,Y) = (y + A(x-y), xi + A^T(eta-xi), eta-xi, x-y) for X=(x,xi), Y=(y,eta) in R^{2d}.
RVec transform_TA(const Eigen::MatrixXd& A, std::span<const double> X, std::span<const double> Y);

struct SampleReport {
    double max_ratio = 0.0;
    std::size_t n_samples = 0;
    double box = 0.0;                 // half-width of the sampled cube
    double bound = 10.0;              // pass threshold
    std::vector<RVec> witnesses;      // arguments of the largest ratios, largest first
    bool passes() const { return max_ratio <= bound; }
    nlohmann::json to_json() const;
};

struct SamplingOptions {
    double box = 4.0;
    std::size_t n_samples = 4096;
    std::uint64_t seed = 0;
    double bound = 10.0;
    std::size_t n_witnesses = 3;
};

// max over sampled (x,y) of w(x+y) / (w(x) v(y)).
SampleReport check_moderate(const Weight& w, const Weight& v, const SamplingOptions& opt = {});

// max over sampled X,Y,Z in R^{2d} of w0(T_A(Z,X)) / (w1(T_A(Y,X)) w2(T_A(Z,Y))).
SampleReport check_weight_condition(const Eigen::MatrixXd& A, const Weight& w0, const Weight& w1,
                                    const Weight& w2, const SamplingOptions& opt = {});

// max over sampled X,Y,Z of w0(Z+X, Z-X) / (w1(Y+X, Y-X) w2(Z+Y, Z-Y)).
SampleReport check_weyl_condition(const Weight& w0, const Weight& w1, const Weight& w2,
                                  const SamplingOptions& opt = {});

// Sampled bounds for e^{-r|x|} <= C w(x) and w(x) <= C' e^{r|x|}; returns {C, C'}.
std::pair<double, double> exponential_envelope(const Weight& w, double r,
                                               const SamplingOptions& opt = {});

// Weights built from vartheta_0..2 on R^{2d}:
//   omega0(X,Y) = t2(X-Y)/t0(X+Y), omega1 = t2(X-Y)/t1(X+Y), omega2 = t1(X-Y)/t0(X+Y).
// These satisfy the sum/difference three-weight condition with constant 1.
struct StructuredWeightTriple {
    Weight t0, t1, t2;

    StructuredWeightTriple(Weight t0, Weight t1, Weight t2);

    int d() const { return t0.dim() / 2; }
    Weight omega(int k) const;
    // The same weights written in the coordinates of T_A with A = I/2:
    // (X', W) -> omega_k(X', J^{-1}W/2), J(a,b) = (-b,a).
    Weight omega_ta(int k) const;
};

// Deterministic low-discrepancy points in [-box, box]^dim.
std::vector<RVec> sobol_points(int dim, std::size_t count, double box, std::uint64_t seed);

}  // namespace weylmod
