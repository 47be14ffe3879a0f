#pragma once

#include <utility>
#include <vector>

#include "starcalc/univariate.hpp"

namespace starcalc {

/// Finite-rank bivariate function f(x,y) = sum_i a_i(x) b_i(y).
/// Rank 0 (no terms) is the zero function.
class SeparableFn {
  public:
    struct Term {
        UnivariateFn a;
        UnivariateFn b;
    };

    explicit SeparableFn(Interval dom) : dom_(dom) {}
    SeparableFn(Interval dom, std::vector<Term> terms);

    static SeparableFn zero(Interval dom) { return SeparableFn(dom); }
    /// Rank-1 function a(x) b(y).
    static SeparableFn rank1(UnivariateFn a, UnivariateFn b);
    static SeparableFn constant(Interval dom, complexd value);

    const Interval& domain() const { return dom_; }
    const std::vector<Term>& terms() const { return terms_; }
    int rank() const { return int(terms_.size()); }

    complexd eval(double x, double y) const;

    SeparableFn add(const SeparableFn& g) const;
    SeparableFn scale(complexd s) const;
    SeparableFn pointwise_mul(const SeparableFn& g) const;

    /// Term-wise partial derivative d^k/dx^k d^l/dy^l; rank preserved.
    SeparableFn partial(int kx, int ly) const;

    /// Diagonal trace x -> f(x,x).
    UnivariateFn diag() const;

    enum class Slot { x, y };
    /// Evaluate one slot at the other variable: freezing the x slot turns
    /// f into the rank-1 function (x,y) -> sum_i a_i(y) b_i(y), constant in x.
    SeparableFn freeze(Slot which) const;

    /// Deterministic rank reduction: orthogonalize both factor families on
    /// the probe grid and drop singular directions below
    /// tol * (1 + probe sup of f). Never increases rank.
    SeparableFn compress(double tol) const;

    /// Max |f| over the 100x100 Chebyshev probe grid.
    double probe_sup() const;

    bool same_domain(const SeparableFn& g) const { return dom_ == g.dom_; }

  private:
    Interval dom_;
    std::vector<Term> terms_;
};

}  // namespace starcalc
