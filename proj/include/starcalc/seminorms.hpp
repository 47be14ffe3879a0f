#pragma once

#include <vector>

#include "starcalc/star_element.hpp"

namespace starcalc {

/// Nested squares K_{-1} <= K_0 <= ... inside I^2, each given as one
/// sub-interval per axis. Indexing clamps to the last square, so a single
/// entry describes the constant family K_k = I^2.
class CompactFamily {
  public:
    struct Square {
        Interval x;
        Interval y;
        double area() const { return x.length() * y.length(); }
    };

    CompactFamily(std::vector<Square> squares, int k_max = 12);
    /// The constant family K_k = I^2 for every k.
    static CompactFamily whole(Interval dom, int k_max = 12);

    /// K_k for k >= -1 (clamped to the deepest square provided).
    const Square& set(int k) const;
    int k_max() const { return k_max_; }

  private:
    std::vector<Square> squares_;  // index 0 holds K_{-1}
    int k_max_;
};

/// p_k(d) = sup over orders i in [-1, k], bi-indices |alpha| <= k+1, of
/// |d^alpha d_i| on K_{k+1}, sampled on a 64x64 grid and once more at 128x128
/// (max of both). Derivatives are exact for the representation.
double seminorm(const StarElement& d, int k, const CompactFamily& family);

struct MetricResult {
    double value;
    /// Remainder bound of the truncated series: 2^{-k_max-1}.
    double tail_bound;
};

/// Frechet metric sum_{k=-1}^{k_max} 2^{-(k+1)} p_k(d-e) / (1 + p_k(d-e)).
MetricResult metric(const StarElement& d, const StarElement& e, const CompactFamily& family);

struct SubmultReport {
    double lhs;       // p_k(d star e)
    double rhs;       // c_k p_k(d) p_k(e)
    double constant;  // c_k = 3^{k+1} + |K_{k+1}|
    bool pass;
};

/// Check p_k(d star e) <= (3^{k+1} + |K_{k+1}|) p_k(d) p_k(e) with the
/// sampled sups on both sides.
SubmultReport submult_probe(const StarElement& d, const StarElement& e, int k,
                            const CompactFamily& family);

}  // namespace starcalc
