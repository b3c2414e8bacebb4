#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "weylmod/lattice_norms.hpp"
#include "weylmod/phase_space.hpp"
#include "weylmod/weights.hpp"

namespace weylmod {

using IndexPoint = std::vector<int>;

// Dense complex matrix whose rows and columns are labelled by integer index
// points; the point of an index is theta times its coordinates.
class GaborMatrix {
public:
    GaborMatrix(std::vector<IndexPoint> index, double theta, Eigen::MatrixXcd entries);
    static GaborMatrix zeros(std::vector<IndexPoint> index, double theta);
    static GaborMatrix identity(std::vector<IndexPoint> index, double theta);

    // (j, iota) for j, iota in the lattice, j slowest; matches LatticeSequence order.
    static std::vector<IndexPoint> square_index(const Lattice& lattice);
    // 0, 1, ..., n-1 on Z.
    static std::vector<IndexPoint> range_index(int n);

    std::size_t size() const { return index_.size(); }
    int index_dim() const { return static_cast<int>(index_.front().size()); }
    double theta() const { return theta_; }
    const std::vector<IndexPoint>& index() const { return index_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    Eigen::MatrixXcd& entries() { return entries_; }
    std::optional<std::size_t> find(const IndexPoint& p) const;
    RVec point(std::size_t i) const;

    // Rows "j_idx,k_idx,re,im" of nonzero entries; the index list goes to path + ".json".
    void write_coo(const std::string& path) const;
    static GaborMatrix read_coo(const std::string& path);

private:
    std::vector<IndexPoint> index_;
    double theta_;
    Eigen::MatrixXcd entries_;
};

// h(k) = || a(., . - k) w(., . - k) ||_{l^p} for every occurring difference k.
struct UProfile {
    std::vector<IndexPoint> diffs;
    RVec h;
};
UProfile u_profile(const GaborMatrix& A, double p, const Weight& omega);

// || h ||_{l^q} with h from u_profile; omega lives on R^{2 index_dim} as (row point, column point).
double u_norm(const GaborMatrix& A, const MixedExponent& e, const Weight& omega);
double u_norm(const GaborMatrix& A, const MixedExponent& e);

GaborMatrix compose(const GaborMatrix& A1, const GaborMatrix& A2);

struct CompositionConditions {
    bool holder = false;    // 1/p0 <= 1/p1 + 1/p2
    bool q_less_p = false;  // q1, q2 <= q0 <= min(1, p0)
    bool p_less_q = false;  // min(1,p0) <= q1, q2 <= q0 and 1/min(1,p0) + 1/q0 <= 1/q1 + 1/q2
    bool admissible() const { return holder && (q_less_p || p_less_q); }
};
CompositionConditions composition_conditions(const MixedExponent& e0, const MixedExponent& e1,
                                             const MixedExponent& e2);

struct CompositionReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    CompositionConditions conditions;
    double weight_ratio = 0.0;  // max of w0(x,z) / (w1(x,y) w2(y,z)) over checked triples
    std::size_t weight_triples = 0;
    bool weights_ok() const { return weight_ratio <= 1.0 + 1e-12; }
    std::string flag() const;
    nlohmann::json to_json() const;
};

CompositionReport check_composition_estimate(const GaborMatrix& A1, const GaborMatrix& A2,
                                             const MixedExponent& e0, const MixedExponent& e1,
                                             const MixedExponent& e2, const Weight& w0, const Weight& w1,
                                             const Weight& w2, std::uint64_t seed = 0);

// c(J, K) = e^{i<k, kappa - iota>} V_{phi2} phi1(J - K), J = (j, iota), K = (k, kappa) in the
// square index of the lattice.
GaborMatrix c_matrix(const SampledSymbol& phi1, const SampledSymbol& phi2, const Lattice& lattice);

// u_norm(C, (inf, q), w0) with w0(X, Y) = omega(X - Y).
double c_matrix_membership(const GaborMatrix& C, double q, const Weight& omega);
Weight convolution_weight(const Weight& omega);

}  // namespace weylmod
