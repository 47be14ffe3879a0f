#include "starcalc/discretize.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "starcalc/actions.hpp"

namespace starcalc {

namespace {

// Band profile of H^{-k} along r = i - j:
//   k > 0:  (I - S)^k        -> (-1)^r C(k, r), zero past r = k
//   k = 0:  identity
//   k < 0:  H^{|k|}          -> C(|k| + r - 1, r)
double band_coeff(int k, int r) {
    if (k == 0) return r == 0 ? 1.0 : 0.0;
    if (k > 0) {
        if (r > k) return 0.0;
        double c = 1.0;
        for (int i = 1; i <= r; ++i) c = c * double(k - r + i) / double(i);
        return (r % 2 == 0) ? c : -c;
    }
    const int m = -k;
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * double(m + i - 1) / double(i);
    return c;
}

}  // namespace

Grid::Grid(Interval dom, int count) : domain(dom), n(count) {
    if (count < 2) throw std::invalid_argument("Grid: at least two points required");
}

bool TriangularSample::lower_triangular() const {
    for (int i = 0; i < entries.rows(); ++i)
        for (int j = i + 1; j < entries.cols(); ++j)
            if (entries(i, j) != complexd(0.0)) return false;
    return true;
}

TriangularSample sample(const StarElement& d, const Grid& grid) {
    if (!(d.domain() == grid.domain))
        throw std::invalid_argument("sample: element and grid domains differ");
    if (!d.causal()) {
        TriangularSample t = sample(transpose(d), grid);
        t.entries = t.entries.transpose().eval();
        return t;
    }
    const int n = grid.n;
    const double dx = grid.spacing();
    TriangularSample out{grid, Eigen::MatrixXcd::Zero(n, n)};
    for (const auto& [k, c] : d.parts()) {
        const double s = std::pow(dx, double(k + 1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                const double w = band_coeff(k, i - j);
                if (w != 0.0)
                    out.entries(i, j) += c.eval(grid.point(i), grid.point(j)) * (w / s);
            }
    }
    return out;
}

TriangularSample sample_delta(int k, const Grid& grid) {
    const int n = grid.n;
    const double s = std::pow(grid.spacing(), double(k + 1));
    TriangularSample out{grid, Eigen::MatrixXcd::Zero(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) out.entries(i, j) = band_coeff(k, i - j) / s;
    return out;
}

TriangularSample mat_star(const TriangularSample& F, const TriangularSample& G) {
    if (!(F.grid == G.grid)) throw std::invalid_argument("mat_star: grid mismatch");
    TriangularSample out{F.grid, (F.entries * G.entries) * F.grid.spacing()};
    if (F.lower_triangular() && G.lower_triangular() && !out.lower_triangular())
        throw std::logic_error("mat_star: triangular closure violated");
    return out;
}

Eigen::MatrixXcd mat_transpose(const TriangularSample& F) {
    return F.entries.transpose();
}

ConvergenceTable convergence_probe(const StarElement& d, const StarElement& e,
                                   const std::vector<int>& ns) {
    ConvergenceTable table;
    const StarElement prod = star(d, e);
    for (int n : ns) {
        Grid g(d.domain(), n);
        TriangularSample lhs = mat_star(sample(d, g), sample(e, g));
        TriangularSample rhs = sample(prod, g);
        const double err = (lhs.entries - rhs.entries).cwiseAbs().maxCoeff();
        table.rows.push_back({n, g.spacing(), err});
    }
    // Slope of log error vs log dx; rows at roundoff level carry no rate
    // information and are left out of the fit.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : table.rows) {
        if (r.sup_error < 1e-13) continue;
        const double lx = std::log(r.dx), ly = std::log(r.sup_error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    table.rate = (m >= 2) ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    return table;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("write_matrix: square matrices only");
    const char magic[8] = {'S', 'T', 'A', 'R', 'M', 'A', 'T', '1'};
    const std::uint32_t n = std::uint32_t(m.rows());
    const std::uint32_t reserved = 0;
    os.write(magic, 8);
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&reserved), 4);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const double re = m(i, j).real(), im = m(i, j).imag();
            os.write(reinterpret_cast<const char*>(&re), 8);
            os.write(reinterpret_cast<const char*>(&im), 8);
        }
}

Eigen::MatrixXcd read_matrix(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "STARMAT1", 8) != 0)
        throw std::runtime_error("read_matrix: bad magic");
    std::uint32_t n = 0, reserved = 0;
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&reserved), 4);
    Eigen::MatrixXcd m(n, n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
            double re = 0, im = 0;
            is.read(reinterpret_cast<char*>(&re), 8);
            is.read(reinterpret_cast<char*>(&im), 8);
            m(i, j) = complexd(re, im);
        }
    if (!is) throw std::runtime_error("read_matrix: truncated payload");
    return m;
}

}  // namespace starcalc
