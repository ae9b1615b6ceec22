#include "subriem/algebra.hpp"

#include "subriem/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace subriem {

namespace {

constexpr double kRankTol = 1e-12;

int numerical_rank(const Mat& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const Vec& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > kRankTol * s(0)) ++rank;
    return rank;
}

// Matrix of B_k : g^1 (x) g^k -> g^{k+1}; column a*d_k + b holds [e_a, e_b] on layer k+1.
Mat bracket_map(const StratifiedAlgebra& alg, int k) {
    const int d1 = alg.horizontal_dim();
    const int dk = alg.layer_dims()[k - 1];
    const int dn = alg.layer_dims()[k];
    const int ok = alg.layer_offset(k);
    const int on = alg.layer_offset(k + 1);
    Mat b = Mat::Zero(dn, d1 * dk);
    for (int a = 0; a < d1; ++a)
        for (int j = 0; j < dk; ++j)
            for (int l = 0; l < dn; ++l)
                b(l, a * dk + j) = alg.constant(a, ok + j, on + l);
    return b;
}

Mat kron(const Mat& x, const Mat& y) {
    Mat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

}  // namespace

const Violation* ValidationReport::find(const std::string& invariant) const {
    auto it = std::find_if(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.invariant == invariant; });
    return it == violations.end() ? nullptr : &*it;
}

StratifiedAlgebra::StratifiedAlgebra(std::vector<int> layer_dims, const std::vector<BracketEntry>& entries)
    : StratifiedAlgebra(std::move(layer_dims), entries, Mat()) {}

StratifiedAlgebra::StratifiedAlgebra(std::vector<int> layer_dims, const std::vector<BracketEntry>& entries,
                                     Mat metric)
    : layer_dims_(std::move(layer_dims)) {
    if (layer_dims_.empty()) throw std::invalid_argument("layer_dims must be non-empty");
    for (int d : layer_dims_)
        if (d <= 0) throw std::invalid_argument("layer dimensions must be positive");
    dim_ = std::accumulate(layer_dims_.begin(), layer_dims_.end(), 0);
    for (int layer = 0; layer < step(); ++layer)
        degree_of_.insert(degree_of_.end(), layer_dims_[layer], layer + 1);

    for (const auto& e : entries) {
        if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim_ || e.j >= dim_ || e.k >= dim_)
            throw std::out_of_range("structure constant index out of range");
        if (!std::isfinite(e.c)) throw std::invalid_argument("structure constant is not finite");
        if (e.i == e.j) {
            if (std::abs(e.c) > load_residual_) {
                load_residual_ = std::abs(e.c);
                load_detail_ = "c_ii^k != 0 at i=" + std::to_string(e.i + 1) + ", k=" + std::to_string(e.k + 1);
            }
            continue;
        }
        const bool swap = e.i > e.j;
        const auto key = swap ? std::make_tuple(e.j, e.i, e.k) : std::make_tuple(e.i, e.j, e.k);
        const double c = swap ? -e.c : e.c;
        auto [it, inserted] = constants_.emplace(key, c);
        if (!inserted && it->second != c) {
            const double r = std::abs(it->second - c);
            if (r > load_residual_) {
                load_residual_ = r;
                load_detail_ = "conflicting entries for (" + std::to_string(e.i + 1) + "," +
                               std::to_string(e.j + 1) + "," + std::to_string(e.k + 1) + ")";
            }
        }
    }
    for (auto it = constants_.begin(); it != constants_.end();)
        it = it->second == 0.0 ? constants_.erase(it) : std::next(it);

    if (metric.size() == 0) {
        metric_ = Mat::Identity(dim_, dim_);
    } else {
        if (metric.rows() != dim_ || metric.cols() != dim_)
            throw std::invalid_argument("metric must be n x n");
        metric_ = std::move(metric);
    }
}

int StratifiedAlgebra::degree(int k) const {
    if (k < 0 || k >= dim_) throw std::out_of_range("basis index out of range");
    return degree_of_[k];
}

int StratifiedAlgebra::layer_offset(int layer) const {
    if (layer < 1 || layer > step() + 1) throw std::out_of_range("layer out of range");
    return std::accumulate(layer_dims_.begin(), layer_dims_.begin() + (layer - 1), 0);
}

int StratifiedAlgebra::hausdorff_dimension() const {
    int q = 0;
    for (int layer = 0; layer < step(); ++layer) q += (layer + 1) * layer_dims_[layer];
    return q;
}

StratifiedAlgebra StratifiedAlgebra::with_metric(Mat metric) const {
    if (metric.rows() != dim_ || metric.cols() != dim_) throw std::invalid_argument("metric must be n x n");
    StratifiedAlgebra out = *this;
    out.metric_ = std::move(metric);
    return out;
}

double StratifiedAlgebra::constant(int i, int j, int k) const {
    if (i == j) return 0.0;
    const bool swap = i > j;
    auto it = constants_.find(swap ? std::make_tuple(j, i, k) : std::make_tuple(i, j, k));
    if (it == constants_.end()) return 0.0;
    return swap ? -it->second : it->second;
}

void StratifiedAlgebra::check_dims(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("algebra vector has wrong dimension");
}

Vec StratifiedAlgebra::bracket(const Vec& x, const Vec& y) const {
    check_dims(x);
    check_dims(y);
    Vec out = Vec::Zero(dim_);
    for (const auto& [key, c] : constants_) {
        const auto [i, j, k] = key;
        out(k) += c * (x(i) * y(j) - x(j) * y(i));
    }
    return out;
}

Mat StratifiedAlgebra::ad(const Vec& x) const {
    check_dims(x);
    Mat out = Mat::Zero(dim_, dim_);
    for (const auto& [key, c] : constants_) {
        const auto [i, j, k] = key;
        out(k, j) += c * x(i);
        out(k, i) -= c * x(j);
    }
    return out;
}

ValidationReport validate(const StratifiedAlgebra& alg) {
    ValidationReport report;
    const int n = alg.dim();

    if (alg.load_antisymmetry_residual() > 0.0)
        report.violations.push_back({"antisymmetry", alg.load_antisymmetry_residual(), alg.load_antisymmetry_detail()});

    double grading = 0.0;
    std::string grading_detail;
    for (const auto& [key, c] : alg.constants()) {
        const auto [i, j, k] = key;
        if (alg.degree(k) != alg.degree(i) + alg.degree(j) && std::abs(c) > grading) {
            grading = std::abs(c);
            grading_detail = "c_" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(k + 1) +
                             " links degrees " + std::to_string(alg.degree(i)) + "+" +
                             std::to_string(alg.degree(j)) + " to " + std::to_string(alg.degree(k));
        }
    }
    if (grading > 0.0) report.violations.push_back({"grading", grading, grading_detail});

    double jacobi = 0.0;
    std::string jacobi_detail;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const Vec ei = Vec::Unit(n, i), ej = Vec::Unit(n, j), ek = Vec::Unit(n, k);
                const Vec r = alg.bracket(alg.bracket(ei, ej), ek) + alg.bracket(alg.bracket(ej, ek), ei) +
                              alg.bracket(alg.bracket(ek, ei), ej);
                const double m = r.cwiseAbs().maxCoeff();
                if (m > jacobi) {
                    jacobi = m;
                    jacobi_detail = "at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                                    std::to_string(k + 1) + ")";
                }
            }
    if (jacobi > 1e-12) report.violations.push_back({"jacobi", jacobi, jacobi_detail});

    for (int m = 1; m < alg.step(); ++m) {
        const int rank = numerical_rank(bracket_map(alg, m));
        const int want = alg.layer_dims()[m];
        if (rank < want)
            report.violations.push_back({"generation", static_cast<double>(want - rank),
                                         "[g^1, g^" + std::to_string(m) + "] has rank " + std::to_string(rank) +
                                             " < dim g^" + std::to_string(m + 1) + " = " + std::to_string(want)});
    }

    const Mat& g = alg.metric();
    const int d1 = alg.horizontal_dim();
    double metric_res = (g.topLeftCorner(d1, d1) - Mat::Identity(d1, d1)).cwiseAbs().maxCoeff();
    std::string metric_detail = "layer-1 block differs from identity";
    const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    if (asym > metric_res) {
        metric_res = asym;
        metric_detail = "metric is not symmetric";
    }
    double off_block = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (alg.degree(i) != alg.degree(j)) off_block = std::max(off_block, std::abs(g(i, j)));
    if (off_block > metric_res) {
        metric_res = off_block;
        metric_detail = "metric is not block-diagonal by layer";
    }
    if (metric_res > 1e-12) report.violations.push_back({"metric", metric_res, metric_detail});
    if (asym <= 1e-12 && Eigen::LLT<Mat>(g).info() != Eigen::Success)
        report.violations.push_back({"metric", 1.0, "metric is not positive definite"});

    return report;
}

StratifiedAlgebra canonical_metric_extension(const StratifiedAlgebra& alg) {
    const int n = alg.dim();
    const int d1 = alg.horizontal_dim();
    Mat g = Mat::Zero(n, n);
    g.topLeftCorner(d1, d1) = alg.metric().topLeftCorner(d1, d1);

    Eigen::LLT<Mat> llt1(g.topLeftCorner(d1, d1));
    if (llt1.info() != Eigen::Success) throw std::invalid_argument("layer-1 metric is not positive definite");
    const Mat l1t = Mat(llt1.matrixL()).transpose();

    for (int k = 1; k < alg.step(); ++k) {
        const int ok = alg.layer_offset(k);
        const int on = alg.layer_offset(k + 1);
        const int dk = alg.layer_dims()[k - 1];
        const int dn = alg.layer_dims()[k];
        Eigen::LLT<Mat> lltk(g.block(ok, ok, dk, dk));
        const Mat lkt = Mat(lltk.matrixL()).transpose();

        // B in orthonormal coordinates of g^1 (x) g^k.
        const Mat bprime = bracket_map(alg, k) * kron(l1t, lkt).inverse();
        Eigen::JacobiSVD<Mat> svd(bprime, Eigen::ComputeFullU);
        const Vec& s = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(0) > 0.0 && s(i) > kRankTol * s(0)) ++rank;
        if (rank < dn)
            throw std::domain_error("bracket map onto layer " + std::to_string(k + 1) + " is not surjective");
        const Mat& u = svd.matrixU();
        Mat gk = u * s.head(dn).cwiseInverse().cwiseAbs2().asDiagonal() * u.transpose();
        g.block(on, on, dn, dn) = 0.5 * (gk + gk.transpose());
    }
    return alg.with_metric(g);
}

StratifiedAlgebra heisenberg_algebra(int n, bool canonical_metric) {
    if (n < 1) throw std::invalid_argument("Heisenberg rank must be positive");
    std::vector<BracketEntry> entries;
    for (int i = 0; i < n; ++i) entries.push_back({i, i + n, 2 * n, 1.0});
    StratifiedAlgebra alg({2 * n, 1}, entries);
    return canonical_metric ? canonical_metric_extension(alg) : alg;
}

StratifiedAlgebra abelian_algebra(int n) { return StratifiedAlgebra({n}, {}); }

StratifiedAlgebra parse_algebra_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    try {
        auto dims = doc.at("layer_dims").get<std::vector<int>>();
        std::vector<BracketEntry> entries;
        for (const auto& row : doc.value("brackets", nlohmann::json::array())) {
            if (!row.is_array() || row.size() != 4) throw InputError("bracket entries must be [i, j, k, c]");
            entries.push_back({row[0].get<int>() - 1, row[1].get<int>() - 1, row[2].get<int>() - 1,
                               row[3].get<double>()});
        }
        StratifiedAlgebra alg(dims, entries);

        const auto& higher = doc.contains("metric_higher_layers") ? doc["metric_higher_layers"]
                                                                    : nlohmann::json("unit");
        if (higher.is_string()) {
            const auto mode = higher.get<std::string>();
            if (mode == "canonical") return canonical_metric_extension(alg);
            if (mode == "unit") return alg;
            throw InputError("metric_higher_layers must be \"canonical\", \"unit\" or a list of blocks");
        }
        if (!higher.is_array() || static_cast<int>(higher.size()) != alg.step() - 1)
            throw InputError("metric_higher_layers needs one block per layer above the first");
        Mat g = Mat::Identity(alg.dim(), alg.dim());
        for (int layer = 2; layer <= alg.step(); ++layer) {
            const auto rows = higher[layer - 2].get<std::vector<std::vector<double>>>();
            const int d = alg.layer_dims()[layer - 1];
            const int off = alg.layer_offset(layer);
            if (static_cast<int>(rows.size()) != d) throw InputError("metric block has wrong size");
            for (int i = 0; i < d; ++i) {
                if (static_cast<int>(rows[i].size()) != d) throw InputError("metric block has wrong size");
                for (int j = 0; j < d; ++j) g(off + i, off + j) = rows[i][j];
            }
        }
        return alg.with_metric(g);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed algebra definition: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw InputError(std::string("malformed algebra definition: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("malformed algebra definition: ") + e.what());
    }
}

StratifiedAlgebra load_algebra_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_algebra_json(ss.str());
}

}  // namespace subriem
