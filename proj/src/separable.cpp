#include "starcalc/separable.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace starcalc {

SeparableFn::SeparableFn(Interval dom, std::vector<Term> terms)
    : dom_(dom), terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (!(t.a.domain() == dom_) || !(t.b.domain() == dom_))
            throw std::invalid_argument("SeparableFn: term domain mismatch");
}

SeparableFn SeparableFn::rank1(UnivariateFn a, UnivariateFn b) {
    Interval dom = a.domain();
    if (!(b.domain() == dom)) throw std::invalid_argument("SeparableFn::rank1: domain mismatch");
    return SeparableFn(dom, {Term{std::move(a), std::move(b)}});
}

SeparableFn SeparableFn::constant(Interval dom, complexd value) {
    if (value == complexd(0.0)) return zero(dom);
    return rank1(UnivariateFn::constant(dom, value), UnivariateFn::constant(dom, 1.0));
}

complexd SeparableFn::eval(double x, double y) const {
    complexd s = 0.0;
    for (const auto& t : terms_) s += t.a.eval(x) * t.b.eval(y);
    return s;
}

SeparableFn SeparableFn::add(const SeparableFn& g) const {
    if (!same_domain(g)) throw std::invalid_argument("SeparableFn::add: domain mismatch");
    std::vector<Term> ts = terms_;
    ts.insert(ts.end(), g.terms_.begin(), g.terms_.end());
    return SeparableFn(dom_, std::move(ts));
}

SeparableFn SeparableFn::scale(complexd s) const {
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (const auto& t : terms_) ts.push_back(Term{t.a.scale(s), t.b});
    return SeparableFn(dom_, std::move(ts));
}

SeparableFn SeparableFn::pointwise_mul(const SeparableFn& g) const {
    if (!same_domain(g)) throw std::invalid_argument("SeparableFn::pointwise_mul: domain mismatch");
    std::vector<Term> ts;
    ts.reserve(terms_.size() * g.terms_.size());
    for (const auto& tf : terms_)
        for (const auto& tg : g.terms_)
            ts.push_back(Term{tf.a.mul(tg.a), tf.b.mul(tg.b)});
    return SeparableFn(dom_, std::move(ts));
}

SeparableFn SeparableFn::partial(int kx, int ly) const {
    if (kx < 0 || ly < 0) throw std::invalid_argument("SeparableFn::partial: negative order");
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (const auto& t : terms_) {
        UnivariateFn a = t.a, b = t.b;
        for (int i = 0; i < kx; ++i) a = a.diff();
        for (int i = 0; i < ly; ++i) b = b.diff();
        ts.push_back(Term{std::move(a), std::move(b)});
    }
    return SeparableFn(dom_, std::move(ts));
}

UnivariateFn SeparableFn::diag() const {
    UnivariateFn acc = UnivariateFn::constant(dom_, 0.0);
    for (const auto& t : terms_) acc = acc.add(t.a.mul(t.b));
    return acc;
}

SeparableFn SeparableFn::freeze(Slot which) const {
    UnivariateFn d = diag();
    if (rank() == 0) return zero(dom_);
    if (which == Slot::x)
        return rank1(UnivariateFn::constant(dom_, 1.0), std::move(d));
    return rank1(std::move(d), UnivariateFn::constant(dom_, 1.0));
}

double SeparableFn::probe_sup() const {
    auto pts = cheb_points(dom_, 100);
    double m = 0.0;
    if (terms_.empty()) return 0.0;
    // Evaluate factor-wise to keep this O(rank * n) rather than O(rank * n^2).
    std::vector<std::vector<complexd>> av, bv;
    for (const auto& t : terms_) {
        av.push_back(t.a.eval(pts));
        bv.push_back(t.b.eval(pts));
    }
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = 0; j < pts.size(); ++j) {
            complexd s = 0.0;
            for (size_t r = 0; r < terms_.size(); ++r) s += av[r][i] * bv[r][j];
            m = std::max(m, std::abs(s));
        }
    return m;
}

SeparableFn SeparableFn::compress(double tol) const {
    if (tol < 0.0) throw std::invalid_argument("SeparableFn::compress: tol >= 0");
    const int r = rank();
    if (r == 0) return *this;

    const int m = 100;
    auto pts = cheb_points(dom_, m);
    Eigen::MatrixXcd A(m, r), B(m, r);
    for (int j = 0; j < r; ++j) {
        auto va = terms_[j].a.eval(pts);
        auto vb = terms_[j].b.eval(pts);
        for (int i = 0; i < m; ++i) {
            A(i, j) = va[i];
            B(i, j) = vb[i];
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svdA(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svdB(B, Eigen::ComputeThinU | Eigen::ComputeThinV);

    // Numerical ranks of the factor families.
    const double eps = 1e-14;
    auto numrank = [&](const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd) {
        int k = 0;
        double s0 = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > eps * (1.0 + s0)) ++k;
        return k;
    };
    const int ra = numrank(svdA), rb = numrank(svdB);
    if (ra == 0 || rb == 0) return zero(dom_);

    // Samples factor as F = A B^T = Ua M Ub^T with M = Sa Va^H conj(Vb) Sb.
    Eigen::MatrixXcd M = svdA.singularValues().head(ra).asDiagonal() *
                         (svdA.matrixV().leftCols(ra).adjoint() *
                          svdB.matrixV().leftCols(rb).conjugate()) *
                         svdB.singularValues().head(rb).asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svdM(M, Eigen::ComputeFullU | Eigen::ComputeFullV);

    const double fsup = (A * B.transpose()).cwiseAbs().maxCoeff();
    const double thresh = tol * (1.0 + fsup);
    int keep = 0;
    for (int i = 0; i < svdM.singularValues().size(); ++i)
        if (svdM.singularValues()(i) > thresh) ++keep;
    keep = std::min(keep, r);
    if (keep == 0) return zero(dom_);
    if (keep == r) return *this;  // nothing to gain; preserve exact representation

    // u_j(x) = sum_i a_i(x) (Va Sa^{-1})_{ij};  new a_k = sigma_k sum_j u_j P_{jk}.
    Eigen::MatrixXcd CoefU = svdA.matrixV().leftCols(ra) *
                             svdA.singularValues().head(ra).cwiseInverse().asDiagonal();
    Eigen::MatrixXcd CoefV = svdB.matrixV().leftCols(rb) *
                             svdB.singularValues().head(rb).cwiseInverse().asDiagonal();
    Eigen::MatrixXcd CA = CoefU * svdM.matrixU().leftCols(keep);               // r x keep
    Eigen::MatrixXcd CB = CoefV * svdM.matrixV().conjugate().leftCols(keep);   // r x keep

    std::vector<UnivariateFn> as, bs;
    for (const auto& t : terms_) {
        as.push_back(t.a);
        bs.push_back(t.b);
    }
    std::vector<Term> ts;
    for (int k = 0; k < keep; ++k) {
        std::vector<complexd> wa(r), wb(r);
        for (int i = 0; i < r; ++i) {
            wa[i] = CA(i, k) * svdM.singularValues()(k);
            wb[i] = CB(i, k);
        }
        ts.push_back(Term{linear_combination(as, wa), linear_combination(bs, wb)});
    }
    return SeparableFn(dom_, std::move(ts));
}

}  // namespace starcalc
