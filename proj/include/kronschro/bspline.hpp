#pragma once

#include <vector>

namespace kronschro {

/// Open knot vector on [a, b] for degree-p B-splines. The spanned space
/// has dimension m = knots.size() - p - 1.
class KnotVector {
  public:
    KnotVector(int degree, std::vector<double> knots);

    /// Uniform breakpoints, all interior knots simple (C^{p-1}).
    static KnotVector open_uniform(int p, int n_el, double a, double b);

    int degree() const { return p_; }
    int dim() const { return static_cast<int>(knots_.size()) - p_ - 1; }
    double a() const { return knots_.front(); }
    double b() const { return knots_.back(); }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    int n_elements() const { return static_cast<int>(breakpoints_.size()) - 1; }
    double mesh_size() const;

    /// Index i with knots[i] <= x < knots[i+1] restricted to the basis
    /// span range [p, m-1]; x = b maps to the last span.
    int find_span(double x) const;

    /// Greville abscissae (knot averages), m points.
    std::vector<double> greville() const;

  private:
    int p_;
    std::vector<double> knots_;
    std::vector<double> breakpoints_;
};

/// Values (and derivatives) of the p+1 B-splines supported at a point.
/// Basis index of column j is first + j; d(k, j) is the k-th derivative.
struct BasisValues {
    int span = 0;
    int first = 0;
    int nderiv = 0;
    int ncols = 0;
    std::vector<double> table; // (nderiv+1) x (p+1), row-major

    double d(int k, int j) const { return table[k * ncols + j]; }
};

BasisValues eval_basis(const KnotVector& kv, double x, int nderiv);

/// Per-element Gauss-Legendre rule; nodes/weights are stored flat,
/// npts per element, elements in breakpoint order.
struct QuadratureRule {
    int npts_per_element = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule element_quadrature(const KnotVector& kv, int npts);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace kronschro
