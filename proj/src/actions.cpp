#include "starcalc/actions.hpp"

#include <cmath>
#include <random>

namespace starcalc {

namespace {

// d^k/dx^k [ c(x, .) f(.) ] traced on the diagonal, where c = sum a_i b_i:
// sum_i a_i(x) (b_i f)^{(k)}(x).
UnivariateFn dirac_left_trace(const SeparableFn& c, const UnivariateFn& f, int k) {
    UnivariateFn acc = UnivariateFn::constant(f.domain(), 0.0);
    for (const auto& t : c.terms()) {
        UnivariateFn bf = t.b.mul(f);
        for (int q = 0; q < k; ++q) bf = bf.diff();
        acc = acc.add(t.a.mul(bf));
    }
    return acc;
}

}  // namespace

UnivariateFn apply_left(const StarElement& g, const UnivariateFn& f) {
    if (!(g.domain() == f.domain())) throw std::invalid_argument("apply_left: domain mismatch");
    const Interval dom = g.domain();
    UnivariateFn out = UnivariateFn::constant(dom, 0.0);
    for (const auto& [k, c] : g.parts()) {
        if (k == -1) {
            // int over tau in [lo, x] (causal) or [x, hi] (anticausal)
            const double base = g.causal() ? dom.lo : dom.hi;
            const double sgn = g.causal() ? 1.0 : -1.0;
            for (const auto& t : c.terms()) {
                UnivariateFn B = t.b.mul(f).antideriv(base);
                out = out.add(t.a.mul(B).scale(sgn));
            }
        } else {
            out = out.add(dirac_left_trace(c, f, k));
        }
    }
    return out;
}

UnivariateFn apply_right(const UnivariateFn& f, const StarElement& g) {
    if (!(g.domain() == f.domain())) throw std::invalid_argument("apply_right: domain mismatch");
    const Interval dom = g.domain();
    UnivariateFn out = UnivariateFn::constant(dom, 0.0);
    for (const auto& [k, c] : g.parts()) {
        if (k == -1) {
            // causal support {tau >= y}: int over [y, hi]; anticausal: [lo, y]
            const double base = g.causal() ? dom.hi : dom.lo;
            const double sgn = g.causal() ? -1.0 : 1.0;
            for (const auto& t : c.terms()) {
                UnivariateFn A = f.mul(t.a).antideriv(base);
                out = out.add(A.scale(sgn).mul(t.b));
            }
        } else {
            // int f(tau) c(tau,y) delta^{(k)}(tau-y) dtau
            //   = (-1)^k d_tau^k [ f(tau) c(tau,y) ] at tau = y
            double s = (k % 2 == 0) ? 1.0 : -1.0;
            for (const auto& t : c.terms()) {
                UnivariateFn fa = f.mul(t.a);
                for (int q = 0; q < k; ++q) fa = fa.diff();
                out = out.add(fa.mul(t.b).scale(s));
            }
        }
    }
    return out;
}

complexd inner(const UnivariateFn& h, const UnivariateFn& f) {
    if (!h.same_domain(f)) throw std::invalid_argument("inner: domain mismatch");
    return h.mul(f).integrate();
}

SeparableFn outer(const UnivariateFn& h, const UnivariateFn& f) {
    if (!h.same_domain(f)) throw std::invalid_argument("outer: domain mismatch");
    return SeparableFn::rank1(h.scale(h.domain().length()), f);
}

UnivariateFn integrate_rows(const StarElement& g) {
    const Interval dom = g.domain();
    UnivariateFn out = UnivariateFn::constant(dom, 0.0);
    for (const auto& [k, c] : g.parts()) {
        if (k == -1) {
            const double base = g.causal() ? dom.hi : dom.lo;
            const double sgn = g.causal() ? -1.0 : 1.0;
            for (const auto& t : c.terms()) {
                UnivariateFn A = t.a.antideriv(base);
                out = out.add(A.scale(sgn).mul(t.b));
            }
        } else {
            double s = (k % 2 == 0) ? 1.0 : -1.0;
            for (const auto& t : c.terms()) {
                UnivariateFn a = t.a;
                for (int q = 0; q < k; ++q) a = a.diff();
                out = out.add(a.mul(t.b).scale(s));
            }
        }
    }
    return out;
}

complexd bracket2(const StarElement& h, const SeparableFn& f) {
    if (!(h.domain() == f.domain())) throw std::invalid_argument("bracket2: domain mismatch");
    const Interval dom = h.domain();
    complexd out = 0.0;
    for (const auto& [k, c] : h.parts()) {
        SeparableFn cf = c.pointwise_mul(f);
        if (k == -1) {
            // triangle {x >= y} (causal) or {y >= x} (anticausal)
            for (const auto& t : cf.terms()) {
                if (h.causal()) {
                    UnivariateFn B = t.b.antideriv(dom.lo);
                    out += t.a.mul(B).integrate();
                } else {
                    UnivariateFn B = t.b.antideriv(dom.hi);
                    out += t.a.mul(B.scale(-1.0)).integrate();
                }
            }
        } else {
            out += cf.partial(0, k).diag().integrate();
        }
    }
    return out;
}

StarElement transpose(const StarElement& d) {
    Orientation orient = d.orientation();
    if (d.has_part(-1))
        orient = (orient == Orientation::causal) ? Orientation::anticausal : Orientation::causal;
    StarElement out(d.domain(), orient);
    for (const auto& [k, c] : d.parts()) {
        double s = (k <= 0 || k % 2 == 0) ? 1.0 : -1.0;
        std::vector<SeparableFn::Term> ts;
        for (const auto& t : c.terms()) ts.push_back({t.b.scale(s), t.a});
        out.accumulate(k, SeparableFn(d.domain(), std::move(ts)));
    }
    return out;
}

UnivariateFn random_test_function(Interval dom, std::uint64_t seed, int trial) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * std::uint64_t(trial + 1));
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int deg = 5;
    std::vector<complexd> mono(deg + 1);
    for (auto& c : mono) c = complexd(U(rng), 0.25 * U(rng));
    // Horner in x keeps the draw independent of the Chebyshev representation.
    return interpolate(
        [&](double x) {
            complexd v = 0.0;
            for (int k = deg; k >= 0; --k) v = v * x + mono[k];
            return v;
        },
        dom, deg);
}

double action_residual(const StarElement& d, const StarElement& e, int trials,
                       std::uint64_t seed) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        UnivariateFn phi = random_test_function(d.domain(), seed, t);
        UnivariateFn ud = apply_left(d, phi);
        UnivariateFn ue = apply_left(e, phi);
        double dev = ud.sub(ue).probe_sup();
        double scale = 1.0 + std::max(ud.probe_sup(), ue.probe_sup());
        worst = std::max(worst, dev / scale);
    }
    return worst;
}

bool action_equal(const StarElement& d, const StarElement& e, int trials, double tol,
                  std::uint64_t seed) {
    if (!(d.domain() == e.domain())) throw std::invalid_argument("action_equal: domain mismatch");
    if (d.orientation() != e.orientation())
        throw std::invalid_argument("action_equal: orientation mismatch");
    return action_residual(d, e, trials, seed) <= tol;
}

}  // namespace starcalc
