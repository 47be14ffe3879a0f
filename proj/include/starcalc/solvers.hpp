#pragma once

#include <Eigen/Core>
#include <vector>

#include "starcalc/inverse.hpp"
#include "starcalc/star_element.hpp"

namespace starcalc {

/// Square matrix with StarElement entries, shared domain and orientation.
class MatrixStarElement {
  public:
    MatrixStarElement(int r, Interval dom);

    int dim() const { return r_; }
    const Interval& domain() const { return dom_; }
    StarElement& at(int i, int j) { return entries_[size_t(i) * r_ + j]; }
    const StarElement& at(int i, int j) const { return entries_[size_t(i) * r_ + j]; }

    /// Identity matrix of star units delta.
    static MatrixStarElement identity(int r, Interval dom);

  private:
    int r_;
    Interval dom_;
    std::vector<StarElement> entries_;
};

/// Entrywise star product: (D E)_{ij} = sum_k D_{ik} star E_{kj}.
MatrixStarElement star_matrix_mul(const MatrixStarElement& D, const MatrixStarElement& E);

/// u(x) = g(x) + int_{lo}^x K(x,tau) u(tau) dtau on I.
struct VolterraProblem {
    SeparableFn kernel;
    UnivariateFn forcing;
};

struct VolterraSolution {
    UnivariateFn u;
    /// sup residual of the integral equation over 257 probe points.
    double residual;
};

/// Second-kind Volterra solve through the star resolvent:
/// u = g + apply_left(R Theta, g) with R = volterra_resolvent(K).
/// Throws when the substituted-back residual exceeds tol.
VolterraSolution solve_volterra2(const VolterraProblem& p, double tol = 1e-9);

/// Propagator of the non-autonomous system u' = A(x) u: U(x,y) = V(x)V(y)^{-1}
/// with V' = A V, V(lo) = Id. Exposes both a pointwise evaluator and the
/// Theta-kernel matrix U(x,y)Theta(x-y) whose entries are rank-r separable.
class TimeOrderedExp {
  public:
    int dim() const { return r_; }
    const Interval& domain() const { return dom_; }

    /// V(x) V(y)^{-1}; returns the identity exactly when x == y.
    Eigen::MatrixXcd eval(double x, double y) const;

    /// The matrix of Theta kernels U_{ij}(x,y) Theta(x-y).
    const MatrixStarElement& kernel() const { return kernel_; }

  private:
    friend TimeOrderedExp time_ordered_exp(const std::vector<std::vector<UnivariateFn>>& A,
                                           double tol);
    TimeOrderedExp(int r, Interval dom, MatrixStarElement kernel,
                   std::vector<std::vector<UnivariateFn>> V,
                   std::vector<std::vector<UnivariateFn>> W);

    int r_;
    Interval dom_;
    MatrixStarElement kernel_;
    std::vector<std::vector<UnivariateFn>> V_;  // fundamental matrix entries
    std::vector<std::vector<UnivariateFn>> W_;  // inverse via the adjoint system
};

/// RK4 with Richardson step control on V' = A V and the adjoint W' = -W A.
TimeOrderedExp time_ordered_exp(const std::vector<std::vector<UnivariateFn>>& A,
                                double tol = 1e-10);

}  // namespace starcalc
