#include "starcalc/seminorms.hpp"

#include <cmath>
#include <stdexcept>

namespace starcalc {

namespace {

// Max of |f| over an nx x ny uniform grid on the square, evaluated through
// the factor samples so the cost is linear in the rank.
double grid_sup(const SeparableFn& f, const CompactFamily::Square& sq, int n) {
    if (f.rank() == 0) return 0.0;
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        const double t = double(i) / double(n - 1);
        xs[i] = sq.x.lo + t * sq.x.length();
        ys[i] = sq.y.lo + t * sq.y.length();
    }
    std::vector<std::vector<complexd>> av(f.rank(), std::vector<complexd>(n));
    std::vector<std::vector<complexd>> bv(f.rank(), std::vector<complexd>(n));
    for (int r = 0; r < f.rank(); ++r)
        for (int i = 0; i < n; ++i) {
            av[r][i] = f.terms()[r].a.eval(xs[i]);
            bv[r][i] = f.terms()[r].b.eval(ys[i]);
        }
    double m = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            complexd s = 0.0;
            for (int r = 0; r < f.rank(); ++r) s += av[r][i] * bv[r][j];
            m = std::max(m, std::abs(s));
        }
    return m;
}

double square_sup(const SeparableFn& f, const CompactFamily::Square& sq) {
    return std::max(grid_sup(f, sq, 64), grid_sup(f, sq, 128));
}

}  // namespace

CompactFamily::CompactFamily(std::vector<Square> squares, int k_max)
    : squares_(std::move(squares)), k_max_(k_max) {
    if (squares_.empty()) throw std::invalid_argument("CompactFamily: at least one square");
    for (size_t i = 0; i + 1 < squares_.size(); ++i) {
        const Square& a = squares_[i];
        const Square& b = squares_[i + 1];
        if (a.x.lo < b.x.lo || a.x.hi > b.x.hi || a.y.lo < b.y.lo || a.y.hi > b.y.hi)
            throw std::invalid_argument("CompactFamily: squares must be nested increasing");
    }
}

CompactFamily CompactFamily::whole(Interval dom, int k_max) {
    return CompactFamily({Square{dom, dom}}, k_max);
}

const CompactFamily::Square& CompactFamily::set(int k) const {
    if (k < -1) throw std::invalid_argument("CompactFamily: index >= -1");
    const size_t i = size_t(k + 1);
    return i < squares_.size() ? squares_[i] : squares_.back();
}

double seminorm(const StarElement& d, int k, const CompactFamily& family) {
    if (k < -1) throw std::invalid_argument("seminorm: k >= -1");
    const CompactFamily::Square& sq = family.set(k + 1);
    double m = 0.0;
    for (const auto& [i, c] : d.parts()) {
        if (i > k) continue;
        for (int a1 = 0; a1 <= k + 1; ++a1)
            for (int a2 = 0; a1 + a2 <= k + 1; ++a2)
                m = std::max(m, square_sup(c.partial(a1, a2), sq));
    }
    return m;
}

MetricResult metric(const StarElement& d, const StarElement& e, const CompactFamily& family) {
    const StarElement diff = d.sub(e);
    double total = 0.0;
    for (int k = -1; k <= family.k_max(); ++k) {
        const double p = seminorm(diff, k, family);
        total += std::pow(2.0, -(k + 1)) * p / (1.0 + p);
    }
    return {total, std::pow(2.0, -family.k_max() - 1)};
}

SubmultReport submult_probe(const StarElement& d, const StarElement& e, int k,
                            const CompactFamily& family) {
    const double c = std::pow(3.0, k + 1) + family.set(k + 1).area();
    const double lhs = seminorm(star(d, e), k, family);
    const double rhs = c * seminorm(d, k, family) * seminorm(e, k, family);
    return {lhs, rhs, c, lhs <= rhs * (1.0 + 1e-6)};
}

}  // namespace starcalc
