#pragma once

#include <cstdint>

#include "starcalc/star_element.hpp"

namespace starcalc {

/// (g star psi_l(f))(x) = int_I g(x,tau) f(tau) dtau.
/// The Theta part integrates over [lo, x] (causal) or [x, hi] (anticausal);
/// an order-k Dirac part with coefficient c contributes
/// d_tau^k [c(x,tau) f(tau)] at tau = x.
UnivariateFn apply_left(const StarElement& g, const UnivariateFn& f);

/// (psi_r(f) star g)(y) = int_I f(tau) g(tau,y) dtau.
UnivariateFn apply_right(const UnivariateFn& f, const StarElement& g);

/// int_I h f dtau, exact for polynomial integrands up to the degree cap.
complexd inner(const UnivariateFn& h, const UnivariateFn& f);

/// (psi_l(h) star psi_r(f))(x,y) = |I| h(x) f(y), rank 1.
SeparableFn outer(const UnivariateFn& h, const UnivariateFn& f);

/// 1 star g: the row integral y -> int_I g(tau,y) dtau.
UnivariateFn integrate_rows(const StarElement& g);

/// Schwartz bracket <h, f> = int_{I^2} h(x,y) f(x,y) dx dy; the Theta part
/// integrates over the triangle {x >= y}, an order-k Dirac part contributes
/// int_I d_y^k [c(x,y) f(x,y)]|_{y=x} dx.
complexd bracket2(const StarElement& h, const SeparableFn& f);

/// g^T(x,y) = g(y,x). Dirac order-k coefficients pick up (-1)^k and swap
/// slots; the support orientation flips whenever a Theta part is present.
StarElement transpose(const StarElement& d);

/// Canonical equality test: d and e are considered equal iff their left
/// star actions agree on `trials` seeded random polynomial test functions,
/// within tol relative to the magnitudes involved.
bool action_equal(const StarElement& d, const StarElement& e, int trials, double tol,
                  std::uint64_t seed = 0x5eedULL);

/// Largest relative action deviation observed (what action_equal compares
/// against tol); useful for diagnostics.
double action_residual(const StarElement& d, const StarElement& e, int trials,
                       std::uint64_t seed = 0x5eedULL);

/// Seeded random polynomial test function of small degree; trial index
/// selects an independent draw.
UnivariateFn random_test_function(Interval dom, std::uint64_t seed, int trial);

}  // namespace starcalc
