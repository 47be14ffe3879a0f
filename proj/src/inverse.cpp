#include "starcalc/inverse.hpp"

#include "starcalc/actions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace starcalc {

namespace {

using Eigen::MatrixXcd;

// B(x) = b(x) a(x)^T for K = sum a_i(x) b_i(y).
MatrixXcd system_matrix(const SeparableFn& K, double x) {
    const auto& ts = K.terms();
    const int s = int(ts.size());
    MatrixXcd B(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) B(i, j) = ts[i].b.eval(x) * ts[j].a.eval(x);
    return B;
}

struct FundamentalSolve {
    std::vector<double> nodes;       // ascending
    std::vector<MatrixXcd> V;        // V(node)
    std::vector<MatrixXcd> W;        // V(node)^{-1} via the adjoint system
    double condition = 1.0;
};

// March V' = B(x)V and W' = -W B(x) jointly with fixed-step RK4, landing
// exactly on each requested node.
FundamentalSolve march(const SeparableFn& K, const std::vector<double>& nodes,
                       int base_steps) {
    const int s = K.rank();
    const double len = nodes.back() - nodes.front();
    FundamentalSolve out;
    out.nodes = nodes;
    MatrixXcd V = MatrixXcd::Identity(s, s);
    MatrixXcd W = MatrixXcd::Identity(s, s);
    out.V.push_back(V);
    out.W.push_back(W);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double gap = nodes[i + 1] - nodes[i];
        const int m = std::max(1, int(std::ceil(base_steps * gap / len)));
        const double h = gap / m;
        double t = nodes[i];
        for (int q = 0; q < m; ++q) {
            const MatrixXcd B1 = system_matrix(K, t);
            const MatrixXcd B2 = system_matrix(K, t + 0.5 * h);
            const MatrixXcd B4 = system_matrix(K, t + h);
            // V' = B V
            MatrixXcd k1 = B1 * V;
            MatrixXcd k2 = B2 * (V + 0.5 * h * k1);
            MatrixXcd k3 = B2 * (V + 0.5 * h * k2);
            MatrixXcd k4 = B4 * (V + h * k3);
            MatrixXcd Vn = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            // W' = -W B
            MatrixXcd l1 = -(W * B1);
            MatrixXcd l2 = -((W + 0.5 * h * l1) * B2);
            MatrixXcd l3 = -((W + 0.5 * h * l2) * B2);
            MatrixXcd l4 = -((W + h * l3) * B4);
            W = W + (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
            V = Vn;
            t += h;
        }
        const double slack = (W * V - MatrixXcd::Identity(s, s)).cwiseAbs().maxCoeff();
        if (!V.allFinite() || !W.allFinite() || slack > 1e-6) {
            std::ostringstream os;
            os << "volterra_resolvent: fundamental matrix numerically singular near x = "
               << nodes[i + 1] << " (inverse slack " << slack << ")";
            throw std::runtime_error(os.str());
        }
        out.condition = std::max(out.condition, V.norm() * W.norm());
        out.V.push_back(V);
        out.W.push_back(W);
    }
    return out;
}

// Interpolate one matrix entry from its node values (nodes are exactly the
// Chebyshev points interpolate() will request).
UnivariateFn entry_fn(const FundamentalSolve& fs, Interval dom, bool inverse, int r,
                      int c) {
    const double eps = 1e-9 * (dom.length() + 1.0);
    auto lookup = [&, r, c, inverse](double x) {
        auto it = std::lower_bound(fs.nodes.begin(), fs.nodes.end(), x - eps);
        if (it == fs.nodes.end() || std::abs(*it - x) > eps)
            throw std::runtime_error("volterra_resolvent: node lookup miss");
        const size_t i = size_t(it - fs.nodes.begin());
        return inverse ? fs.W[i](r, c) : fs.V[i](r, c);
    };
    return interpolate(lookup, dom, int(fs.nodes.size()) - 1);
}

SeparableFn assemble_resolvent(const SeparableFn& K, const FundamentalSolve& fs) {
    const Interval dom = K.domain();
    const int s = K.rank();
    std::vector<SeparableFn::Term> ts;
    ts.reserve(s);
    for (int k = 0; k < s; ++k) {
        // x-factor: sum_i a_i(x) V_{ik}(x); y-factor: sum_j W_{kj}(y) b_j(y)
        UnivariateFn fa = UnivariateFn::constant(dom, 0.0);
        UnivariateFn fb = UnivariateFn::constant(dom, 0.0);
        for (int i = 0; i < s; ++i)
            fa = fa.add(K.terms()[i].a.mul(entry_fn(fs, dom, false, i, k)));
        for (int j = 0; j < s; ++j)
            fb = fb.add(entry_fn(fs, dom, true, k, j).mul(K.terms()[j].b));
        ts.push_back({std::move(fa), std::move(fb)});
    }
    return SeparableFn(dom, std::move(ts));
}

}  // namespace

ResolventResult volterra_resolvent(const SeparableFn& K, double tol) {
    if (K.rank() == 0) {
        return {SeparableFn::zero(K.domain()), {}, 1.0};
    }
    const Interval dom = K.domain();
    const int degree = 48;
    auto nodes = cheb_points(dom, degree + 1);

    FundamentalSolve fs = march(K, nodes, 512);
    SeparableFn R = assemble_resolvent(K, fs);
    for (int steps = 1024; steps <= 8192; steps *= 2) {
        FundamentalSolve fs2 = march(K, nodes, steps);
        SeparableFn R2 = assemble_resolvent(K, fs2);
        const double dev = R2.add(R.scale(-1.0)).probe_sup();
        fs = std::move(fs2);
        R = std::move(R2);
        if (dev < tol / 10.0 * (1.0 + R.probe_sup())) break;
    }

    ResolventResult out{R, {}, fs.condition};
    const int s = K.rank();
    out.fundamental.resize(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            out.fundamental[i].push_back(entry_fn(fs, dom, false, i, j));
    return out;
}

StarElement rank1_resolvent(const UnivariateFn& a, const UnivariateFn& b) {
    const Interval dom = a.domain();
    if (!a.same_domain(b)) throw std::invalid_argument("rank1_resolvent: domain mismatch");
    UnivariateFn F = a.mul(b).antideriv(dom.lo);
    UnivariateFn ef =
        interpolate([&](double x) { return std::exp(F.eval(x)); }, dom, 64).trimmed(1e-14);
    UnivariateFn emf =
        interpolate([&](double x) { return std::exp(-F.eval(x)); }, dom, 64).trimmed(1e-14);
    StarElement out = identity_element(dom);
    out.accumulate(-1, SeparableFn::rank1(a.mul(ef), b.mul(emf)));
    return out.compressed(StarElement::kCompressTol);
}

StarElement invert_theta_kernel(const StarElement& e, double tol, double diag_floor) {
    const Interval dom = e.domain();
    if (!e.causal()) throw std::invalid_argument("invert_theta_kernel: causal input required");
    for (const auto& [k, c] : e.parts())
        if (k != -1 && c.probe_sup() > 0.0)
            throw std::invalid_argument("invert_theta_kernel: input must be a pure Theta kernel");
    const SeparableFn et = e.part(-1);

    UnivariateFn diag = et.diag();
    double mn = 1.0 / 0.0;
    for (double x : cheb_points(dom, 200)) mn = std::min(mn, std::abs(diag.eval(x)));
    if (!(mn > diag_floor)) {
        std::ostringstream os;
        os << "invert_theta_kernel: diagonal magnitude " << mn << " below floor " << diag_floor
           << "; inverses at isolated diagonal zeros are unsupported";
        throw std::invalid_argument(os.str());
    }
    UnivariateFn invd =
        interpolate([&](double x) { return 1.0 / diag.eval(x); }, dom, 64);

    // K(x,y) = e~^{(0,1)}(x,y) / e~(y,y); resolve delta - K Theta.
    const SeparableFn det = et.partial(0, 1);
    std::vector<SeparableFn::Term> kts;
    for (const auto& t : det.terms()) kts.push_back({t.a, t.b.mul(invd)});
    SeparableFn Kk(dom, std::move(kts));
    SeparableFn R = volterra_resolvent(Kk, tol).resolvent;

    // e^{star -1} = delta' star (1/e~(y,y) delta) star (delta + R Theta)
    StarElement mid(dom);
    mid.accumulate(0, SeparableFn::rank1(UnivariateFn::constant(dom, 1.0), invd));
    StarElement right = identity_element(dom);
    right.accumulate(-1, R);
    return star(star(delta(1, dom), mid), right).compressed(StarElement::kCompressTol);
}

StarElement invert_finite_order(const StarElement& d, double tol) {
    const Interval dom = d.domain();
    if (!d.causal()) throw std::invalid_argument("invert_finite_order: causal input required");
    if (d.is_zero()) throw std::invalid_argument("invert_finite_order: zero element");
    const int k = d.max_order();
    StarElement thp = star_power(delta(-1, dom), k + 1);
    StarElement e = star(d, thp);

    // A Dirac part of order j only acts through its diagonal y-traces up to
    // order j; coefficients with vanishing traces (e.g. multiples of x-y)
    // are action-null and acceptable residue.
    double scale = e.probe_sup();
    for (const auto& [order, c] : e.parts()) {
        if (order == -1) continue;
        double res = 0.0;
        for (int l = 0; l <= order; ++l) {
            const SeparableFn cl = c.partial(0, l);
            res = std::max(res, cl.diag().probe_sup());
        }
        if (res > 1e-9 * (1.0 + scale)) {
            std::ostringstream os;
            os << "invert_finite_order: d star Theta^{star " << (k + 1)
               << "} keeps a Dirac residue at order " << order << "; not proportional to Theta";
            throw std::invalid_argument(os.str());
        }
    }
    StarElement etheta = smooth_part(e.part(-1));
    return star(thp, invert_theta_kernel(etheta, tol)).compressed(StarElement::kCompressTol);
}

double exp_identity_check(const UnivariateFn& h) {
    const Interval dom = h.domain();
    UnivariateFn H = h.antideriv(dom.lo);
    UnivariateFn ef =
        interpolate([&](double x) { return std::exp(H.eval(x)); }, dom, 64).trimmed(1e-14);
    UnivariateFn emf =
        interpolate([&](double x) { return std::exp(-H.eval(x)); }, dom, 64).trimmed(1e-14);
    StarElement mid = smooth_part(SeparableFn::rank1(ef, emf));
    StarElement right = identity_element(dom);
    right.accumulate(-1, SeparableFn::rank1(h.scale(-1.0), UnivariateFn::constant(dom, 1.0)));
    StarElement lhs = star(star(delta(1, dom), mid), right);
    return action_residual(lhs, identity_element(dom), 10);
}

}  // namespace starcalc
