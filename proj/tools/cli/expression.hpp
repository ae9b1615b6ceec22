#pragma once

#include <subriem/surfaces.hpp>

#include <memory>
#include <string>
#include <vector>

namespace subriem::cli {

// Parsed arithmetic expression in x1..xd with +, -, *, /, ^, sin, cos, exp and pi.
// Evaluation carries value, gradient and Hessian by forward-mode second-order jets.
class Expression {
public:
    struct Node;

    static Expression parse(const std::string& text);

    const std::string& text() const { return text_; }
    // Largest variable index used (1-based), 0 for constants.
    int max_variable() const { return max_var_; }

    double value(const Vec& x) const;
    surfaces::ScalarJet jet(const Vec& x) const;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
    int max_var_ = 0;
};

}  // namespace subriem::cli
