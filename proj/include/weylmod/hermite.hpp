#pragma once

#include <span>
#include <string>
#include <vector>

#include "weylmod/common.hpp"
#include "weylmod/phase_space.hpp"

namespace weylmod {

inline constexpr int hermite_order_cap = 60;

// Normalized Hermite function h_alpha(x) = prod_i h_{alpha_i}(x_i).
double hermite_function(std::span<const int> alpha, std::span<const double> x);
// h_0(x), ..., h_n(x) by the normalized three-term recurrence.
RVec hermite_table(int n, double x);
// Same value from the derivative form of the definition; only for n <= 8.
double hermite_rodrigues(int n, double x);

// Coefficients c_alpha for all |alpha| <= max_order, graded then lexicographic.
struct HermiteExpansion {
    int d = 1;
    int max_order = 0;
    std::vector<std::vector<int>> alphas;
    CVec coef;
    double residual = 0.0;  // relative L2 truncation residual from analyze, 0 otherwise

    HermiteExpansion() = default;
    HermiteExpansion(int d, int max_order);  // zero coefficients

    static std::vector<std::vector<int>> multi_indices(int d, int max_order);
    std::size_t size() const { return coef.size(); }
    cplx at(std::span<const int> alpha) const;  // 0 outside the stored range
    double l2_norm_squared() const;

    // Rows "alpha_1,...,alpha_d,re,im".
    void write_csv(const std::string& path) const;
    static HermiteExpansion read_csv(const std::string& path, int d);
};

HermiteExpansion analyze(const SampledSymbol& f, int max_order);
SampledSymbol synthesize(const HermiteExpansion& e, const Grid& g);

// sum_alpha |c_alpha|^2 e^{r |alpha|^{1/(2s)}} for each r; +inf when it overflows.
RVec seq_space_profile(const HermiteExpansion& e, double s, const RVec& r_list);
// Natural log of the same sums, computed without overflow.
RVec seq_space_log_profile(const HermiteExpansion& e, double s, const RVec& r_list);

struct FubiniReport {
    cplx x_first;   // integrate x, then y
    cplx y_first;   // integrate y, then x
    cplx hermite;   // sum c1 c2 conj(d)
    double discrepancy = 0.0;  // max pairwise difference relative to the largest value
    bool ok = false;
};

// (f1 (x) f2, phi) on phi's two-dimensional grid; f1, f2 live on its axes.
FubiniReport fubini_check(const SampledSymbol& f1, const SampledSymbol& f2, const SampledSymbol& phi,
                          double tolerance, int max_order = 40);

struct GrowthReport {
    RVec xi;
    RVec abs_u;
    double c_fit = 0.0;   // max of |u| e^{-c |xi|^{1/s}} over the inner half of the samples
    double worst = 0.0;   // same maximum over all samples
    bool fitted_bound_ok = false;
};

// u(xi) = (2 pi)^{-d/2} (f, phi e^{i<., xi>}) with f synthesized on phi's grid.
GrowthReport stft_growth_check(const HermiteExpansion& f, const SampledSymbol& phi, double s, double c,
                               const std::vector<RVec>& xi_samples);

}  // namespace weylmod
