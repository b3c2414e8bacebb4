#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylmod/lattice_norms.hpp"
#include "weylmod/phase_space.hpp"
#include "weylmod/weights.hpp"

namespace weylmod {

inline constexpr int sweep_schema_version = 1;

// (p_j, q_j) for the product and the two factors.
struct ExponentTriple {
    MixedExponent e0{2.0, 2.0}, e1{2.0, 2.0}, e2{2.0, 2.0};
    nlohmann::json to_json() const;
    static ExponentTriple from_json(const nlohmann::json& j);
    double large_lambda_slope() const;  // 1/p0 - 1/q1 - 1/q2
    double small_lambda_slope() const;  // 1/p1 + 1/p2 - 1/p0
};

struct CounterexampleConfig {
    double q0 = 1.0;
    double q1 = 2.0;
    double p = 2.0;
    std::vector<int> N_list{8, 16, 32, 64};
    int grid_n = 1024;
    double grid_L = 16.0;
    double theta = 0.5;
};

struct StftaConfig {
    int N = 4;
    double q0 = 1.0;  // c(kappa) = (1 + |kappa|)^{-1/q0}
    int points = 50;
    int grid_n = 256;
    double grid_L = 12.0;
};

struct NumericCheckConfig {
    bool enabled = false;
    RVec lambdas{0.5, 1.0, 2.0};
    int grid_n = 64;
    double grid_L = 8.0;
};

struct SweepConfig {
    std::vector<ExponentTriple> triples;
    RVec lambda_grid;
    int d = 1;
    nlohmann::json weight = {{"family", "one"}};
    CounterexampleConfig counterexample;
    StftaConfig stfta;
    NumericCheckConfig numeric;
    std::uint64_t seed = 0;
    std::string out = "out";
    int jobs = 1;

    // lambda_grid is a list or {"min", "max", "points"} (log-spaced).
    static SweepConfig from_json(const nlohmann::json& j);
    static SweepConfig load(const std::string& path);
    nlohmann::json to_json() const;
};

// Log-spaced points from lo to hi inclusive.
RVec log_space(double lo, double hi, int points);
// Least-squares slope of log y against log x.
double fit_slope(const RVec& x, const RVec& y);

struct RatioRow {
    double lambda, lhs, rhs1, rhs2, ratio;
};

struct RatioSweep {
    ExponentTriple triple;
    std::vector<RatioRow> rows;
    double slope_large = 0.0, slope_small = 0.0;  // fitted over the top and bottom decade
    bool admissible = false;                     // sufficient conditions for the composition estimate
    bool necessary = false;                      // necessary conditions from the Gaussian family
    nlohmann::json to_json() const;
};

// || a_lambda # a_lambda ||_{M^{p0,q0}} / (|| a_lambda ||_{M^{p1,q1}} || a_lambda ||_{M^{p2,q2}}).
RatioRow gaussian_ratio(double lambda, const ExponentTriple& t, int d);
RatioSweep gaussian_ratio_sweep(const ExponentTriple& t, const RVec& lambdas, int d);
std::vector<RatioSweep> run_gaussian_ratio_sweep(const SweepConfig& cfg);
void write_ratio_csv(const std::vector<RatioSweep>& sweeps, const std::string& path);

// Same ratio from the kernel-route Weyl product and quadrature norms (d = 1).
RVec numeric_gaussian_ratio(const ExponentTriple& t, const NumericCheckConfig& nc);

// c(kappa) = (1 + |kappa|)^{-1/q0}, |kappa| <= N.
RVec counterexample_sequence(int N, double q0);
// sum_{|kappa| <= N} c(kappa) e^{i x kappa} phi(x) with the unit Gaussian phi.
SampledSymbol counterexample_function(const Grid& g, int N, double q0);

struct CounterexampleRow {
    int N;
    double c_q0;         // || c ||_{l^q0} over |kappa| <= N
    double c_q1;         // || c ||_{l^q1}
    double lower_bound;  // (2 pi)^{-d/(2 q0)} || c ||_{l^q0}, bounds the (inf, q0) lattice norm from below
    double m_inf_q0;     // Gabor estimate of || f_N ||_{M^{inf,q0}}
    double m_p_q1;       // Gabor estimate of || f_N ||_{M^{p,q1}}
};
std::vector<CounterexampleRow> run_counterexample(const SweepConfig& cfg);
void write_counterexample_csv(const std::vector<CounterexampleRow>& rows, const std::string& path);

// Closed form of V_Phi a at (x, xi, eta, y) for a = W_{f, phi}, Phi = (2 pi)^{-1/2} e^{-|X|^2}.
cplx stfta_closed_form(const RVec& c, int N, const RVec& X);
// 2^{1/2} pi^{-1/2} sum c(kappa) e^{-x^2 - (xi - kappa/2)^2} e^{i x kappa}.
cplx wigner_closed_form(const RVec& c, int N, double x, double xi);

struct StftaReport {
    std::vector<RVec> points;
    CVec closed, numeric;
    double max_rel_error = 0.0;      // max |numeric - closed| / max |closed|
    double wigner_rel_error = 0.0;   // sampled Wigner vs its closed form, relative L2
    bool ok = false;
    nlohmann::json to_json() const;
};
StftaReport run_stfta_check(const SweepConfig& cfg, double tolerance = 1e-4);

}  // namespace weylmod
