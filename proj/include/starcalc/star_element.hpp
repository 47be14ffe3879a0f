#pragma once

#include <map>
#include <optional>
#include <string>

#include "starcalc/separable.hpp"

namespace starcalc {

enum class Orientation { causal, anticausal };

/// Element of the distribution algebra: finite sum
///   d(x,y) = sum_{i >= -1} d_i(x,y) delta^{(i)}(x-y),
/// with order -1 denoting the Heaviside part d_{-1}(x,y) Theta(x-y).
/// Anticausal orientation means the transposed support Theta(y-x); only
/// causal elements participate in the star product.
class StarElement {
  public:
    /// Rank/degree control applied after every product primitive.
    static constexpr double kCompressTol = 1e-12;

    explicit StarElement(Interval dom, Orientation orient = Orientation::causal)
        : dom_(dom), orient_(orient) {}

    const Interval& domain() const { return dom_; }
    Orientation orientation() const { return orient_; }
    bool causal() const { return orient_ == Orientation::causal; }

    const std::map<int, SeparableFn>& parts() const { return parts_; }
    /// Coefficient of delta^{(i)}; zero function when absent.
    SeparableFn part(int order) const;
    bool has_part(int order) const { return parts_.count(order) != 0; }
    /// Largest order present, or -2 for the zero element.
    int max_order() const { return parts_.empty() ? -2 : parts_.rbegin()->first; }
    bool is_zero() const { return parts_.empty(); }

    /// Add c * delta^{(order)} into this element. Orders below -1 are
    /// normalized into the Theta coefficient via the closed form
    /// Theta^{star n} = (x-y)^{n-1}/(n-1)! Theta.
    void accumulate(int order, const SeparableFn& c);

    /// Drop coefficients that vanish on probes (relative threshold tol).
    StarElement pruned(double tol = kCompressTol) const;
    /// compress every coefficient with the given tolerance.
    StarElement compressed(double tol = kCompressTol) const;

    StarElement add(const StarElement& e) const;
    StarElement sub(const StarElement& e) const;
    StarElement scale(complexd s) const;

    double probe_sup() const;

  private:
    Interval dom_;
    Orientation orient_;
    std::map<int, SeparableFn> parts_;
};

/// delta^{(k)} on the domain; k = -1 is Theta, k = 0 the star unit,
/// k < -1 normalizes to the Theta-power closed form.
StarElement delta(int k, Interval dom);
/// The unit delta(0).
StarElement identity_element(Interval dom);
/// f(x,y) Theta(x-y).
StarElement smooth_part(const SeparableFn& f);

/// The star product, assembled bilinearly from the Volterra, Dirac x Dirac
/// and Dirac x Theta primitives. Both operands must be causal and share a
/// domain.
StarElement star(const StarElement& d, const StarElement& e);

/// d^{star n}. n >= 0 for general d; any integer n when d is a pure
/// delta^{(k)} (then delta(k)^{star n} = delta(k n)).
StarElement star_power(const StarElement& d, int n);

/// Schwartz expansion delta^{(j)} star (f delta^{(i)}):
///   sum_{k=0}^{j} C(j,k) f^{(j-k,0)}(x,y) delta^{(i+k)}.
StarElement schwartz_left(int j, const SeparableFn& f, int i);
/// (f delta^{(i)}) star delta^{(j)}:
///   sum_{k=0}^{j} (-1)^{j+k} C(j,k) f^{(0,j-k)}(x,y) delta^{(i+k)}.
StarElement schwartz_right(const SeparableFn& f, int i, int j);

struct ConvolutionForm {
    bool stationary = false;
    /// Per-order profile D_i(u) on [0, |I|] with d_i(x,y) = D_i(x-y).
    std::map<int, UnivariateFn> profiles;
    std::string diagnostic;
};

/// Detect difference-stationary elements: every coefficient must satisfy
/// d_i(x+h, y+h) = d_i(x, y) within tol on probes.
ConvolutionForm to_convolution(const StarElement& d, double tol = 1e-9);

}  // namespace starcalc
