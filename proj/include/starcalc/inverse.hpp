#pragma once

#include "starcalc/star_element.hpp"

namespace starcalc {

/// Output of the separable Volterra resolvent solve.
struct ResolventResult {
    /// R with R = K + K *_V R (Volterra composition), rank <= rank(K).
    SeparableFn resolvent;
    /// Fundamental matrix V(x) with V' = B(x)V, V(lo) = I, entrywise.
    std::vector<std::vector<UnivariateFn>> fundamental;
    /// max over nodes of ||V(x)||_F ||V(x)^{-1}||_F.
    double condition;
};

/// Resolvent of a separable kernel via the fundamental-matrix ODE
/// V' = b(x)a(x)^T V. Step count doubles (Richardson control) until two
/// successive resolvents agree within tol/10 on probes.
ResolventResult volterra_resolvent(const SeparableFn& K, double tol = 1e-10);

/// Closed form (delta - a(x)b(y)Theta)^{star -1} = delta + a b e^{F(x)-F(y)}
/// Theta with F an antiderivative of a*b.
StarElement rank1_resolvent(const UnivariateFn& a, const UnivariateFn& b);

/// Star-inverse of e = e~ Theta with nonvanishing diagonal:
/// e^{star -1} = delta' star (1/e~(y,y) delta) star (delta + R Theta).
StarElement invert_theta_kernel(const StarElement& e, double tol = 1e-9,
                                double diag_floor = 1e-8);

/// Star-inverse of a finite-order element d via the Theta-power reduction
/// d^{star -1} = Theta^{star(k+1)} star (d star Theta^{star(k+1)})^{star -1}.
StarElement invert_finite_order(const StarElement& d, double tol = 1e-9);

/// Residual of delta' star (e^{int_y^x h} Theta) star (delta - h(x) Theta)
/// against delta, measured by the action on random test functions.
double exp_identity_check(const UnivariateFn& h);

}  // namespace starcalc
