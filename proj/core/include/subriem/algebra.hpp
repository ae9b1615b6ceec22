#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace subriem {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// One structure constant c_ij^k with 0-based indices.
struct BracketEntry {
    int i;
    int j;
    int k;
    double c;
};

struct Violation {
    std::string invariant;  // "antisymmetry", "jacobi", "grading", "generation", "metric"
    double residual;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    const Violation* find(const std::string& invariant) const;
};

// Stratified nilpotent Lie algebra g = g^1 + ... + g^r in a graded basis e_0..e_{n-1}.
// Basis indices are 0-based throughout the C++ interface; the JSON format uses 1-based ones.
class StratifiedAlgebra {
public:
    // Entries with i > j are stored as (j, i, k, -c). The metric defaults to the identity.
    StratifiedAlgebra(std::vector<int> layer_dims, const std::vector<BracketEntry>& entries);
    StratifiedAlgebra(std::vector<int> layer_dims, const std::vector<BracketEntry>& entries, Mat metric);

    int dim() const { return dim_; }
    int step() const { return static_cast<int>(layer_dims_.size()); }
    int horizontal_dim() const { return layer_dims_.front(); }
    const std::vector<int>& layer_dims() const { return layer_dims_; }

    // Degree (1-based layer number) of basis vector k.
    int degree(int k) const;
    // First basis index of a layer (layer is 1-based).
    int layer_offset(int layer) const;
    int hausdorff_dimension() const;

    const Mat& metric() const { return metric_; }
    StratifiedAlgebra with_metric(Mat metric) const;

    // c_ij^k for any ordering of i, j.
    double constant(int i, int j, int k) const;
    // Canonical entries keyed by (i, j, k) with i < j.
    const std::map<std::tuple<int, int, int>, double>& constants() const { return constants_; }

    Vec bracket(const Vec& x, const Vec& y) const;
    Vec torsion(const Vec& x, const Vec& y) const { return -bracket(x, y); }
    // Matrix of ad_x, so that ad(x) * y == bracket(x, y).
    Mat ad(const Vec& x) const;

    // Largest inconsistency found while canonicalizing the input entries.
    double load_antisymmetry_residual() const { return load_residual_; }
    const std::string& load_antisymmetry_detail() const { return load_detail_; }

    double inner(const Vec& x, const Vec& y) const { return x.dot(metric_ * y); }

private:
    void check_dims(const Vec& x) const;

    std::vector<int> layer_dims_;
    std::vector<int> degree_of_;
    int dim_ = 0;
    std::map<std::tuple<int, int, int>, double> constants_;
    Mat metric_;
    double load_residual_ = 0.0;
    std::string load_detail_;
};

ValidationReport validate(const StratifiedAlgebra& alg);

// Extends the layer-1 scalar product to all layers so that each bracket map
// B_k : g^1 (x) g^k -> g^{k+1} is an isometry on (ker B_k)^perp.
StratifiedAlgebra canonical_metric_extension(const StratifiedAlgebra& alg);

// Heisenberg algebra of dimension 2n+1 with [e_i, e_{i+n}] = e_{2n}.
// The centre is unit length unless canonical is requested.
StratifiedAlgebra heisenberg_algebra(int n, bool canonical_metric = false);

// Abelian R^n with a single layer.
StratifiedAlgebra abelian_algebra(int n);

StratifiedAlgebra parse_algebra_json(const std::string& text);
StratifiedAlgebra load_algebra_json(const std::filesystem::path& path);

}  // namespace subriem
