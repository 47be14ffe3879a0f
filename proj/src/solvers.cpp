#include "starcalc/solvers.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "starcalc/actions.hpp"

namespace starcalc {

namespace {

using Eigen::MatrixXcd;

struct Propagated {
    std::vector<double> nodes;
    std::vector<MatrixXcd> V;
    std::vector<MatrixXcd> W;
};

// Fixed-step RK4 for V' = A(t)V and W' = -W A(t), landing exactly on each
// node so the entries can be interpolated without resampling.
Propagated march(const std::function<MatrixXcd(double)>& A, int r,
                 const std::vector<double>& nodes, int base_steps) {
    const double len = nodes.back() - nodes.front();
    Propagated out;
    out.nodes = nodes;
    MatrixXcd V = MatrixXcd::Identity(r, r);
    MatrixXcd W = MatrixXcd::Identity(r, r);
    out.V.push_back(V);
    out.W.push_back(W);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double gap = nodes[i + 1] - nodes[i];
        const int m = std::max(1, int(std::ceil(base_steps * gap / len)));
        const double h = gap / m;
        double t = nodes[i];
        for (int q = 0; q < m; ++q) {
            const MatrixXcd A1 = A(t);
            const MatrixXcd A2 = A(t + 0.5 * h);
            const MatrixXcd A4 = A(t + h);
            MatrixXcd k1 = A1 * V;
            MatrixXcd k2 = A2 * (V + 0.5 * h * k1);
            MatrixXcd k3 = A2 * (V + 0.5 * h * k2);
            MatrixXcd k4 = A4 * (V + h * k3);
            MatrixXcd Vn = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            MatrixXcd l1 = -(W * A1);
            MatrixXcd l2 = -((W + 0.5 * h * l1) * A2);
            MatrixXcd l3 = -((W + 0.5 * h * l2) * A2);
            MatrixXcd l4 = -((W + h * l3) * A4);
            W = W + (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
            V = Vn;
            t += h;
        }
        if (!V.allFinite() || !W.allFinite() ||
            (W * V - MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff() > 1e-6) {
            std::ostringstream os;
            os << "time_ordered_exp: propagator step failed near x = " << nodes[i + 1]
               << " (substeps " << m << ", h = " << h << ")";
            throw std::runtime_error(os.str());
        }
        out.V.push_back(V);
        out.W.push_back(W);
    }
    return out;
}

UnivariateFn node_interpolant(const Propagated& prop, Interval dom, bool inverse, int r,
                              int c) {
    const double eps = 1e-9 * (dom.length() + 1.0);
    auto lookup = [&prop, eps, inverse, r, c](double x) {
        auto it = std::lower_bound(prop.nodes.begin(), prop.nodes.end(), x - eps);
        if (it == prop.nodes.end() || std::abs(*it - x) > eps)
            throw std::runtime_error("time_ordered_exp: node lookup miss");
        const size_t i = size_t(it - prop.nodes.begin());
        return inverse ? prop.W[i](r, c) : prop.V[i](r, c);
    };
    return interpolate(lookup, dom, int(prop.nodes.size()) - 1);
}

}  // namespace

MatrixStarElement::MatrixStarElement(int r, Interval dom) : r_(r), dom_(dom) {
    if (r < 1) throw std::invalid_argument("MatrixStarElement: dimension >= 1");
    entries_.assign(size_t(r) * r, StarElement(dom));
}

MatrixStarElement MatrixStarElement::identity(int r, Interval dom) {
    MatrixStarElement m(r, dom);
    for (int i = 0; i < r; ++i) m.at(i, i) = identity_element(dom);
    return m;
}

MatrixStarElement star_matrix_mul(const MatrixStarElement& D, const MatrixStarElement& E) {
    if (D.dim() != E.dim()) throw std::invalid_argument("star_matrix_mul: dimension mismatch");
    if (!(D.domain() == E.domain()))
        throw std::invalid_argument("star_matrix_mul: domain mismatch");
    MatrixStarElement out(D.dim(), D.domain());
    for (int i = 0; i < D.dim(); ++i)
        for (int j = 0; j < D.dim(); ++j) {
            StarElement acc(D.domain());
            for (int k = 0; k < D.dim(); ++k) acc = acc.add(star(D.at(i, k), E.at(k, j)));
            out.at(i, j) = acc.compressed(StarElement::kCompressTol);
        }
    return out;
}

VolterraSolution solve_volterra2(const VolterraProblem& p, double tol) {
    const Interval dom = p.forcing.domain();
    if (!(p.kernel.domain() == dom))
        throw std::invalid_argument("solve_volterra2: kernel/forcing domain mismatch");

    UnivariateFn u = p.forcing;
    if (p.kernel.rank() > 0) {
        SeparableFn R = volterra_resolvent(p.kernel, tol / 10.0).resolvent;
        u = p.forcing.add(apply_left(smooth_part(R), p.forcing));
    }

    // substitute back: r(x) = u - g - int_{lo}^x K u
    UnivariateFn ku = p.kernel.rank() > 0 ? apply_left(smooth_part(p.kernel), u)
                                          : UnivariateFn::constant(dom, 0.0);
    double res = 0.0;
    double scale = 0.0;
    for (int i = 0; i < 257; ++i) {
        const double x = dom.lo + dom.length() * double(i) / 256.0;
        res = std::max(res, std::abs(u.eval(x) - p.forcing.eval(x) - ku.eval(x)));
        scale = std::max(scale, std::abs(u.eval(x)));
    }
    if (res > tol * (1.0 + scale)) {
        std::ostringstream os;
        os << "solve_volterra2: residual " << res << " exceeds tolerance " << tol;
        throw std::runtime_error(os.str());
    }
    return {u, res};
}

TimeOrderedExp::TimeOrderedExp(int r, Interval dom, MatrixStarElement kernel,
                               std::vector<std::vector<UnivariateFn>> V,
                               std::vector<std::vector<UnivariateFn>> W)
    : r_(r), dom_(dom), kernel_(std::move(kernel)), V_(std::move(V)), W_(std::move(W)) {}

Eigen::MatrixXcd TimeOrderedExp::eval(double x, double y) const {
    if (x == y) return MatrixXcd::Identity(r_, r_);
    MatrixXcd vx(r_, r_), wy(r_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j) {
            vx(i, j) = V_[i][j].eval(x);
            wy(i, j) = W_[i][j].eval(y);
        }
    return vx * wy;
}

TimeOrderedExp time_ordered_exp(const std::vector<std::vector<UnivariateFn>>& A, double tol) {
    const int r = int(A.size());
    if (r < 1) throw std::invalid_argument("time_ordered_exp: empty system");
    for (const auto& row : A)
        if (int(row.size()) != r) throw std::invalid_argument("time_ordered_exp: square matrix required");
    const Interval dom = A[0][0].domain();

    auto coeff = [&A, r](double t) {
        MatrixXcd m(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) m(i, j) = A[i][j].eval(t);
        return m;
    };

    const auto nodes = cheb_points(dom, 49);
    Propagated prop = march(coeff, r, nodes, 512);
    for (int steps = 1024; steps <= 8192; steps *= 2) {
        Propagated next = march(coeff, r, nodes, steps);
        double dev = 0.0, scale = 1.0;
        for (size_t i = 0; i < nodes.size(); ++i) {
            dev = std::max(dev, (next.V[i] - prop.V[i]).cwiseAbs().maxCoeff());
            dev = std::max(dev, (next.W[i] - prop.W[i]).cwiseAbs().maxCoeff());
            scale = std::max(scale, next.V[i].cwiseAbs().maxCoeff());
        }
        prop = std::move(next);
        if (dev < tol / 10.0 * scale) break;
    }

    std::vector<std::vector<UnivariateFn>> V(r), W(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            V[i].push_back(node_interpolant(prop, dom, false, i, j));
            W[i].push_back(node_interpolant(prop, dom, true, i, j));
        }

    MatrixStarElement kernel(r, dom);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            std::vector<SeparableFn::Term> ts;
            for (int k = 0; k < r; ++k) ts.push_back({V[i][k], W[k][j]});
            kernel.at(i, j) = smooth_part(SeparableFn(dom, std::move(ts)));
        }
    return TimeOrderedExp(r, dom, std::move(kernel), std::move(V), std::move(W));
}

}  // namespace starcalc
