#include "starcalc/star_element.hpp"

#include <cmath>
#include <sstream>

namespace starcalc {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

// Coefficient of Theta in Theta^{star n}: (x-y)^{n-1}/(n-1)!  (n >= 1).
SeparableFn theta_power_coeff(int n, Interval dom) {
    if (n < 1) throw std::invalid_argument("theta_power_coeff: n >= 1");
    if (n == 1) return SeparableFn::constant(dom, 1.0);
    const int q = n - 1;
    double fact = 1.0;
    for (int i = 2; i <= q; ++i) fact *= double(i);
    UnivariateFn x = UnivariateFn::identity(dom);
    std::vector<UnivariateFn> xpow{UnivariateFn::constant(dom, 1.0)};
    for (int j = 1; j <= q; ++j) xpow.push_back(xpow.back().mul(x));
    std::vector<SeparableFn::Term> ts;
    for (int j = 0; j <= q; ++j) {
        double sign = ((q - j) % 2 == 0) ? 1.0 : -1.0;
        ts.push_back({xpow[j].scale(binom(q, j) * sign / fact), xpow[q - j]});
    }
    return SeparableFn(dom, std::move(ts));
}

bool is_unit(const StarElement& d) {
    if (d.parts().size() != 1) return false;
    auto it = d.parts().find(0);
    if (it == d.parts().end()) return false;
    complexd s = 0.0;
    for (const auto& t : it->second.terms()) {
        if (t.a.degree() != 0 || t.b.degree() != 0) return false;
        s += t.a.coeffs()[0] * t.b.coeffs()[0];
    }
    return s == complexd(1.0);
}

// (f Theta) star (g Theta): Volterra composition of the coefficients.
// Per term pair the inner integral is P(x) - P(y) with P' = b_f a_g.
SeparableFn volterra_primitive(const SeparableFn& f, const SeparableFn& g) {
    const Interval dom = f.domain();
    std::vector<SeparableFn::Term> ts;
    ts.reserve(2 * f.terms().size() * g.terms().size());
    for (const auto& tf : f.terms())
        for (const auto& tg : g.terms()) {
            UnivariateFn P = tf.b.mul(tg.a).antideriv(dom.lo);
            ts.push_back({tf.a.mul(P), tg.b});
            ts.push_back({tf.a, P.mul(tg.b).scale(-1.0)});
        }
    return SeparableFn(dom, std::move(ts));
}

}  // namespace

SeparableFn StarElement::part(int order) const {
    auto it = parts_.find(order);
    return it != parts_.end() ? it->second : SeparableFn::zero(dom_);
}

void StarElement::accumulate(int order, const SeparableFn& c) {
    if (c.rank() == 0) return;
    if (!(c.domain() == dom_)) throw std::invalid_argument("StarElement: coefficient domain mismatch");
    if (order < -1) {
        // delta^{(-n)} is the smooth function (x-y)^{n-1}/(n-1)! Theta;
        // fold the polynomial factor into the Theta coefficient.
        accumulate(-1, c.pointwise_mul(theta_power_coeff(-order, dom_)));
        return;
    }
    auto it = parts_.find(order);
    if (it == parts_.end())
        parts_.emplace(order, c);
    else
        it->second = it->second.add(c);
}

StarElement StarElement::pruned(double tol) const {
    double scale = probe_sup();
    StarElement out(dom_, orient_);
    for (const auto& [k, c] : parts_)
        if (c.rank() > 0 && c.probe_sup() > tol * (1.0 + scale)) out.parts_.emplace(k, c);
    return out;
}

StarElement StarElement::compressed(double tol) const {
    StarElement out(dom_, orient_);
    for (const auto& [k, c] : parts_) {
        SeparableFn cc = c.compress(tol);
        if (cc.rank() > 0) out.parts_.emplace(k, cc);
    }
    return out.pruned(tol);
}

StarElement StarElement::add(const StarElement& e) const {
    if (!(dom_ == e.dom_)) throw std::invalid_argument("StarElement::add: domain mismatch");
    if (orient_ != e.orient_) throw std::invalid_argument("StarElement::add: orientation mismatch");
    StarElement out(dom_, orient_);
    for (const auto& [k, c] : parts_) out.accumulate(k, c);
    for (const auto& [k, c] : e.parts_) out.accumulate(k, c);
    return out;
}

StarElement StarElement::sub(const StarElement& e) const { return add(e.scale(-1.0)); }

StarElement StarElement::scale(complexd s) const {
    StarElement out(dom_, orient_);
    if (s == complexd(0.0)) return out;
    for (const auto& [k, c] : parts_) out.parts_.emplace(k, c.scale(s));
    return out;
}

double StarElement::probe_sup() const {
    double m = 0.0;
    for (const auto& [k, c] : parts_) m = std::max(m, c.probe_sup());
    return m;
}

StarElement delta(int k, Interval dom) {
    StarElement d(dom);
    d.accumulate(k, SeparableFn::constant(dom, 1.0));
    return d;
}

StarElement identity_element(Interval dom) { return delta(0, dom); }

StarElement smooth_part(const SeparableFn& f) {
    StarElement d(f.domain());
    d.accumulate(-1, f);
    return d;
}

StarElement star(const StarElement& d, const StarElement& e) {
    if (!(d.domain() == e.domain())) throw std::invalid_argument("star: domain mismatch");
    if (!d.causal() || !e.causal())
        throw std::invalid_argument("star: defined on causal representation only");
    if (is_unit(d)) return e;
    if (is_unit(e)) return d;

    const Interval dom = d.domain();
    StarElement out(dom);
    for (const auto& [p, f] : d.parts()) {
        for (const auto& [m, g] : e.parts()) {
            if (p == -1 && m == -1) {
                out.accumulate(-1, volterra_primitive(f, g));
            } else if (p >= 0) {
                // Dirac on the left: d_tau^p [f(x,tau) g(tau,y) s(tau-y)] at
                // tau = x, where s is the singular factor of the right part.
                // Each derivative landing on s raises its order by one; the
                // rest differentiate the smooth factor before the trace.
                for (int j = 0; j <= p; ++j) {
                    std::vector<SeparableFn::Term> ts;
                    ts.reserve(f.terms().size() * g.terms().size());
                    for (const auto& tf : f.terms())
                        for (const auto& tg : g.terms()) {
                            UnivariateFn bc = tf.b.mul(tg.a);
                            for (int q = 0; q < p - j; ++q) bc = bc.diff();
                            ts.push_back({tf.a.mul(bc).scale(binom(p, j)), tg.b});
                        }
                    out.accumulate(m + j, SeparableFn(dom, std::move(ts)));
                }
            } else {
                // Theta against Dirac of order m: (-1)^m d_tau^m of
                // f(x,tau) g(tau,y) Theta(x-tau) at tau = y. Derivatives that
                // hit Theta leave Dirac parts of order r-1 with sign (-1)^r.
                for (int r = 0; r <= m; ++r) {
                    const int q = m - r;
                    const double sign =
                        ((m + r) % 2 == 0 ? 1.0 : -1.0) * binom(m, r);
                    std::vector<SeparableFn::Term> ts;
                    ts.reserve(f.terms().size() * g.terms().size());
                    for (const auto& tf : f.terms())
                        for (const auto& tg : g.terms()) {
                            UnivariateFn bc = tf.b.mul(tg.a);
                            for (int s2 = 0; s2 < q; ++s2) bc = bc.diff();
                            ts.push_back({tf.a.scale(sign), bc.mul(tg.b)});
                        }
                    out.accumulate(r == 0 ? -1 : r - 1, SeparableFn(dom, std::move(ts)));
                }
            }
        }
    }
    return out.compressed(StarElement::kCompressTol);
}

StarElement star_power(const StarElement& d, int n) {
    const Interval dom = d.domain();
    if (n == 0) return identity_element(dom);
    // Pure delta^{(k)}: closed-form power for any integer n.
    if (d.parts().size() == 1) {
        const auto& [k, c] = *d.parts().begin();
        bool pure = true;
        complexd s = 0.0;
        for (const auto& t : c.terms()) {
            if (t.a.degree() != 0 || t.b.degree() != 0) { pure = false; break; }
            s += t.a.coeffs()[0] * t.b.coeffs()[0];
        }
        if (pure && s == complexd(1.0)) return delta(k * n, dom);
    }
    if (n < 0) throw std::invalid_argument("star_power: negative power of non-delta element");
    StarElement acc = d;
    for (int i = 1; i < n; ++i) acc = star(acc, d);
    return acc;
}

StarElement schwartz_left(int j, const SeparableFn& f, int i) {
    if (j < -1 || i < -1) throw std::invalid_argument("schwartz_left: orders >= -1");
    const Interval dom = f.domain();
    if (j == -1) {
        StarElement e(dom);
        e.accumulate(i, f);
        return star(delta(-1, dom), e);
    }
    // Leibniz form of delta^{(j)} star (f delta^{(i)}): each derivative either
    // lands on f's x slot or raises the Dirac order.
    StarElement out(dom);
    for (int k = 0; k <= j; ++k)
        out.accumulate(i + k, f.partial(j - k, 0).scale(binom(j, k)));
    return out.compressed(StarElement::kCompressTol);
}

StarElement schwartz_right(const SeparableFn& f, int i, int j) {
    if (j < -1 || i < -1) throw std::invalid_argument("schwartz_right: orders >= -1");
    const Interval dom = f.domain();
    if (j == -1) {
        StarElement e(dom);
        e.accumulate(i, f);
        return star(e, delta(-1, dom));
    }
    // (f delta^{(i)}) star delta^{(j)}: mirror expansion with (-1)^{j+k} from
    // the right pairing, derivatives in f's y slot.
    StarElement out(dom);
    for (int k = 0; k <= j; ++k) {
        double s = ((j + k) % 2 == 0) ? 1.0 : -1.0;
        out.accumulate(i + k, f.partial(0, j - k).scale(s * binom(j, k)));
    }
    return out.compressed(StarElement::kCompressTol);
}

ConvolutionForm to_convolution(const StarElement& d, double tol) {
    if (!d.causal()) throw std::invalid_argument("to_convolution: causal input required");
    ConvolutionForm out;
    const Interval dom = d.domain();
    const double L = dom.length();
    const Interval inner(dom.lo, dom.lo + 0.75 * L);
    auto pts = cheb_points(inner, 12);
    const double shifts[] = {0.05 * L, 0.13 * L, 0.25 * L};

    for (const auto& [k, c] : d.parts()) {
        double scale = c.probe_sup();
        double dev = 0.0;
        for (double h : shifts)
            for (double x : pts)
                for (double y : pts)
                    dev = std::max(dev, std::abs(c.eval(x + h, y + h) - c.eval(x, y)));
        if (dev > tol * (1.0 + scale)) {
            std::ostringstream os;
            os << "not difference-stationary: order " << k << " coefficient deviates by " << dev;
            out.stationary = false;
            out.profiles.clear();
            out.diagnostic = os.str();
            return out;
        }
        // Profile along u = x - y, anchored at y = lo.
        UnivariateFn prof = interpolate(
            [&](double u) { return c.eval(dom.lo + u, dom.lo); }, Interval(0.0, L),
            std::max(UnivariateFn::kDefaultDegree, 2));
        out.profiles.emplace(k, prof);
    }
    out.stationary = true;
    return out;
}

}  // namespace starcalc
