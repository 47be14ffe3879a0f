#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "starcalc/interval.hpp"

namespace starcalc {

using complexd = std::complex<double>;

/// One smooth complex-valued function on an interval, stored as Chebyshev
/// coefficients f(x) = sum_k c_k T_k(t), t the affine map of x onto [-1,1].
///
/// Values are immutable after construction; every operation returns a new
/// function. The coefficient vector is plain (no halved c_0 convention).
class UnivariateFn {
  public:
    /// Degree cap applied after multiplication (re-interpolation past this).
    static constexpr int kDegreeCap = 128;
    /// Default interpolation degree.
    static constexpr int kDefaultDegree = 32;

    UnivariateFn(Interval dom, std::vector<complexd> coeffs);

    /// Constant function.
    static UnivariateFn constant(Interval dom, complexd value);
    /// The identity map x -> x.
    static UnivariateFn identity(Interval dom);

    const Interval& domain() const { return dom_; }
    const std::vector<complexd>& coeffs() const { return coeffs_; }
    int degree() const { return int(coeffs_.size()) - 1; }

    complexd eval(double x) const;
    std::vector<complexd> eval(const std::vector<double>& xs) const;

    UnivariateFn add(const UnivariateFn& g) const;
    UnivariateFn sub(const UnivariateFn& g) const;
    UnivariateFn mul(const UnivariateFn& g) const;
    UnivariateFn scale(complexd s) const;

    /// Exact derivative of the polynomial representation.
    UnivariateFn diff() const;
    /// Antiderivative F with F(base) = 0.
    UnivariateFn antideriv(double base) const;
    /// Exact definite integral over the whole domain.
    complexd integrate() const;

    /// Max |f| over the standard 100-point Chebyshev probe grid.
    double probe_sup() const;

    /// Drop trailing coefficients below tol * (1 + max |c_k|).
    UnivariateFn trimmed(double tol = 1e-300) const;

    bool same_domain(const UnivariateFn& g) const { return dom_ == g.dom_; }

  private:
    Interval dom_;
    std::vector<complexd> coeffs_;
};

/// Interpolate a sampler at degree+1 Chebyshev points of the domain.
/// Exact (to roundoff) for polynomials of degree <= degree.
/// Throws if any sample is non-finite, reporting the offending point.
UnivariateFn interpolate(const std::function<complexd(double)>& sampler,
                         Interval dom, int degree);

/// Linear combination sum_i w_i f_i (all sharing a domain); exact on
/// coefficients. Empty input is not allowed.
UnivariateFn linear_combination(const std::vector<UnivariateFn>& fs,
                                const std::vector<complexd>& ws);

}  // namespace starcalc
