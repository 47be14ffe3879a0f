#include "starcalc/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace starcalc {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool finite(complexd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Chebyshev points of the second kind t_j = cos(pi j / n), j = 0..n.
std::vector<double> second_kind_nodes(int n) {
    std::vector<double> t(n + 1);
    for (int j = 0; j <= n; ++j) t[j] = std::cos(kPi * double(j) / double(n));
    return t;
}

// Values at second-kind nodes -> plain Chebyshev coefficients (DCT-I).
std::vector<complexd> values_to_coeffs(const std::vector<complexd>& v) {
    const int n = int(v.size()) - 1;
    std::vector<complexd> c(n + 1);
    if (n == 0) {
        c[0] = v[0];
        return c;
    }
    for (int k = 0; k <= n; ++k) {
        complexd s = 0.5 * (v[0] + (k % 2 == 0 ? v[n] : -v[n]));
        for (int j = 1; j < n; ++j)
            s += v[j] * std::cos(kPi * double(j) * double(k) / double(n));
        c[k] = s * (2.0 / double(n));
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return c;
}

}  // namespace

UnivariateFn::UnivariateFn(Interval dom, std::vector<complexd> coeffs)
    : dom_(dom), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    for (const auto& c : coeffs_)
        if (!finite(c)) throw std::invalid_argument("UnivariateFn: non-finite coefficient");
}

UnivariateFn UnivariateFn::constant(Interval dom, complexd value) {
    return UnivariateFn(dom, {value});
}

UnivariateFn UnivariateFn::identity(Interval dom) {
    // x = mid + half * T_1(t)
    return UnivariateFn(dom, {dom.mid(), 0.5 * dom.length()});
}

complexd UnivariateFn::eval(double x) const {
    const double t = (2.0 * x - dom_.lo - dom_.hi) / dom_.length();
    // Clenshaw recurrence
    complexd b1 = 0.0, b2 = 0.0;
    for (int k = int(coeffs_.size()) - 1; k >= 1; --k) {
        complexd b0 = coeffs_[k] + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coeffs_[0] + t * b1 - b2;
}

std::vector<complexd> UnivariateFn::eval(const std::vector<double>& xs) const {
    std::vector<complexd> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = eval(xs[i]);
    return out;
}

UnivariateFn UnivariateFn::add(const UnivariateFn& g) const {
    if (!same_domain(g)) throw std::invalid_argument("UnivariateFn::add: domain mismatch");
    std::vector<complexd> c(std::max(coeffs_.size(), g.coeffs_.size()), 0.0);
    for (size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
    for (size_t k = 0; k < g.coeffs_.size(); ++k) c[k] += g.coeffs_[k];
    return UnivariateFn(dom_, std::move(c));
}

UnivariateFn UnivariateFn::sub(const UnivariateFn& g) const { return add(g.scale(-1.0)); }

UnivariateFn UnivariateFn::scale(complexd s) const {
    std::vector<complexd> c(coeffs_);
    for (auto& ck : c) ck *= s;
    return UnivariateFn(dom_, std::move(c));
}

UnivariateFn UnivariateFn::mul(const UnivariateFn& g) const {
    if (!same_domain(g)) throw std::invalid_argument("UnivariateFn::mul: domain mismatch");
    // Degree-0 factors scale exactly.
    if (degree() == 0) return g.scale(coeffs_[0]);
    if (g.degree() == 0) return scale(g.coeffs_[0]);
    const int full = degree() + g.degree();
    const int n = std::min(full, kDegreeCap);
    auto t = second_kind_nodes(n);
    std::vector<complexd> v(n + 1);
    for (int j = 0; j <= n; ++j) {
        double x = dom_.mid() + 0.5 * dom_.length() * t[j];
        v[j] = eval(x) * g.eval(x);
    }
    return UnivariateFn(dom_, values_to_coeffs(v));
}

UnivariateFn UnivariateFn::diff() const {
    const int n = degree();
    if (n == 0) return constant(dom_, 0.0);
    std::vector<complexd> b(n, 0.0);
    // b holds coefficients of f' in T_k on [-1,1]
    std::vector<complexd> work(n + 2, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        complexd above = (k + 2 <= n - 1) ? work[k + 2] : complexd(0.0);
        work[k] = above + 2.0 * double(k + 1) * coeffs_[k + 1];
    }
    work[0] *= 0.5;
    const double s = 2.0 / dom_.length();
    for (int k = 0; k < n; ++k) b[k] = work[k] * s;
    return UnivariateFn(dom_, std::move(b));
}

UnivariateFn UnivariateFn::antideriv(double base) const {
    if (!dom_.contains(base))
        throw std::invalid_argument("UnivariateFn::antideriv: base outside domain");
    const int n = degree();
    std::vector<complexd> a(coeffs_);
    a.resize(n + 3, 0.0);
    std::vector<complexd> b(n + 2, 0.0);
    b[1] = a[0] - 0.5 * a[2];
    for (int k = 2; k <= n + 1; ++k) b[k] = (a[k - 1] - a[k + 1]) / (2.0 * double(k));
    const double s = 0.5 * dom_.length();
    for (auto& bk : b) bk *= s;
    UnivariateFn F(dom_, std::move(b));
    complexd off = F.eval(base);
    auto c = F.coeffs_;
    c[0] -= off;
    return UnivariateFn(dom_, std::move(c));
}

complexd UnivariateFn::integrate() const {
    // Exact: int_{-1}^{1} T_k = 0 for odd k, 2/(1-k^2) for even k.
    complexd s = 0.0;
    for (int k = 0; k <= degree(); k += 2) s += coeffs_[k] * (2.0 / (1.0 - double(k) * double(k)));
    return s * (0.5 * dom_.length());
}

double UnivariateFn::probe_sup() const {
    auto pts = cheb_points(dom_, 100);
    double m = 0.0;
    for (double x : pts) m = std::max(m, std::abs(eval(x)));
    return m;
}

UnivariateFn UnivariateFn::trimmed(double tol) const {
    double mx = 0.0;
    for (const auto& c : coeffs_) mx = std::max(mx, std::abs(c));
    double thresh = tol * (1.0 + mx);
    int last = 0;
    for (int k = 0; k <= degree(); ++k)
        if (std::abs(coeffs_[k]) > thresh) last = k;
    std::vector<complexd> c(coeffs_.begin(), coeffs_.begin() + last + 1);
    return UnivariateFn(dom_, std::move(c));
}

UnivariateFn interpolate(const std::function<complexd(double)>& sampler,
                         Interval dom, int degree) {
    if (degree < 1) throw std::invalid_argument("interpolate: degree >= 1");
    auto t = second_kind_nodes(degree);
    std::vector<complexd> v(degree + 1);
    for (int j = 0; j <= degree; ++j) {
        double x = dom.mid() + 0.5 * dom.length() * t[j];
        v[j] = sampler(x);
        if (!finite(v[j])) {
            std::ostringstream os;
            os << "interpolate: non-finite sample at x = " << x;
            throw std::invalid_argument(os.str());
        }
    }
    return UnivariateFn(dom, values_to_coeffs(v));
}

UnivariateFn linear_combination(const std::vector<UnivariateFn>& fs,
                                const std::vector<complexd>& ws) {
    if (fs.empty() || fs.size() != ws.size())
        throw std::invalid_argument("linear_combination: size mismatch");
    UnivariateFn acc = fs[0].scale(ws[0]);
    for (size_t i = 1; i < fs.size(); ++i) acc = acc.add(fs[i].scale(ws[i]));
    return acc;
}

}  // namespace starcalc
