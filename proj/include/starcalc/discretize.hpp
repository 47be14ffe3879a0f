#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "starcalc/star_element.hpp"

namespace starcalc {

/// Uniform ascending grid x_i = lo + i * dx, dx = |I|/(n-1).
struct Grid {
    Interval domain;
    int n;

    Grid(Interval dom, int count);
    double spacing() const { return domain.length() / double(n - 1); }
    double point(int i) const { return domain.lo + double(i) * spacing(); }
    bool operator==(const Grid& g) const { return domain == g.domain && n == g.n; }
};

/// A StarElement sampled on a grid. Causal elements sample to
/// lower-triangular matrices; anticausal ones to their transposes.
struct TriangularSample {
    Grid grid;
    Eigen::MatrixXcd entries;

    bool lower_triangular() const;
};

/// Entrywise sampling with Theta(0) = 1 on the diagonal. An order-k Dirac
/// part with coefficient c contributes the Hadamard product of the sampled
/// c(x_i, x_j) with (H^{-k})_{ij} / dx^{k+1}, H the all-ones lower triangle.
/// Anticausal input is sampled through its transpose and transposed back.
TriangularSample sample(const StarElement& d, const Grid& grid);

/// H^{-k} / dx^{k+1} for any integer k (k = 0 gives Id/dx, k = -1 gives H).
/// Unlike sample(delta(k)), this stays exact for k < -1 where the element
/// form folds into a Theta coefficient.
TriangularSample sample_delta(int k, const Grid& grid);

/// The grid star product F G dx. Both operands must share the grid; products
/// of lower-triangular samples are asserted lower-triangular.
TriangularSample mat_star(const TriangularSample& F, const TriangularSample& G);

/// Plain transpose, for grid-level adjoint checks.
Eigen::MatrixXcd mat_transpose(const TriangularSample& F);

struct ConvergenceRow {
    int n;
    double dx;
    double sup_error;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    /// Least-squares slope of log(sup_error) against log(dx).
    double rate;
};

/// Compare mat_star(sample d, sample e) against sample(star(d, e)) over a
/// schedule of grid sizes and fit the convergence rate.
ConvergenceTable convergence_probe(const StarElement& d, const StarElement& e,
                                   const std::vector<int>& ns);

/// Binary matrix dump: 16-byte header (magic "STARMAT1", u32 N, u32 zero),
/// then row-major complex entries as little-endian 64-bit floats.
void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix(std::istream& is);

}  // namespace starcalc
