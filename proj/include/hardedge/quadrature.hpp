#pragma once

#include <string>
#include <vector>

namespace hardedge {

enum class RuleKind { gauss_legendre, clenshaw_curtis, gauss_jacobi };

std::string to_string(RuleKind kind);
RuleKind rule_kind_from_string(const std::string& name);

struct QuadratureRule {
    RuleKind kind = RuleKind::gauss_legendre;
    int n = 0;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre or Clenshaw-Curtis on (a, b). Clenshaw-Curtis includes both
// endpoints as nodes.
QuadratureRule make_rule(RuleKind kind, int n, double a, double b);

// Gauss-Jacobi for the weight (x - a)^alpha (b - x)^beta on (a, b).
QuadratureRule make_jacobi_rule(int n, double alpha, double beta, double a, double b);

}  // namespace hardedge
