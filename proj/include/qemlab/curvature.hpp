#pragma once

#include <span>
#include <vector>

#include "qemlab/chart.hpp"
#include "qemlab/tensor.hpp"

namespace qemlab {

// Metric and its inverse as jets at a point.
struct MetricJets {
    int n = 0;
    int order = 0;
    std::vector<Jet> g;     // n*n row-major
    std::vector<Jet> ginv;  // same layout

    const Jet& gc(int i, int j) const { return g[i * n + j]; }
    const Jet& gi(int i, int j) const { return ginv[i * n + j]; }
};

MetricJets metric_jets(const MetricField& g, std::span<const double> point, int order);

// Inverse of a jet matrix (row-major, size n*n) by Gauss-Jordan elimination
// with value pivoting.
std::vector<Jet> jet_matrix_inverse(std::vector<Jet> a, int n);

// One curvature pass at a point.  Everything downstream of the metric is
// carried as a jet of order `jet_order`, so first (and with jet_order >= 2,
// second) covariant derivatives of curvature are available without any
// finite differencing.
struct CurvatureJets {
    int n = 0;
    int jet_order = 0;
    std::vector<double> point;
    MetricJets mj;            // order jet_order + 2
    std::vector<Jet> gamma;   // n^3, [k][i][j], order jet_order + 1
    std::vector<Jet> rm;      // n^4, lowered R_ijkl, order jet_order
    std::vector<Jet> ric;     // n^2, order jet_order
    Jet scal;                 // order jet_order
    Eigen::MatrixXd g, ginv;  // values

    const Jet& Gamma(int k, int i, int j) const { return gamma[(k * n + i) * n + j]; }
    const Jet& Rm(int i, int j, int k, int l) const {
        return rm[((i * n + j) * n + k) * n + l];
    }
    const Jet& Ric(int i, int j) const { return ric[i * n + j]; }
    double R() const { return scal.value(); }
};

CurvatureJets curvature_jets(const MetricField& g, std::span<const double> point,
                             int jet_order);

// Pointwise operations.  Index order of the returned components:
//   christoffel:            (k, i, j) -> Gamma^k_ij
//   riemann:                (i, j, k, l) -> R_ijkl (all slots lowered)
//   covariant_derivative_ricci: (i, j, k) -> (nabla_i Ric)_jk
TensorValue christoffel(const MetricField& g, std::span<const double> point);
TensorValue riemann(const MetricField& g, std::span<const double> point);
TensorValue ricci(const MetricField& g, std::span<const double> point);
double scalar_curvature(const MetricField& g, std::span<const double> point);
double sectional_curvature(const MetricField& g, std::span<const double> point,
                           std::span<const double> X, std::span<const double> Y);
TensorValue covariant_derivative_ricci(const MetricField& g, std::span<const double> point);

// Value snapshots of a pass, as covariant TensorValues at c's point.
TensorValue metric_values(const CurvatureJets& c);
TensorValue ricci_values(const CurvatureJets& c);
TensorValue riemann_values(const CurvatureJets& c);

// Scalar field calculus; gradient is contravariant, hessian covariant.
TensorValue gradient(const MetricField& g, const ScalarField& f,
                     std::span<const double> point);
TensorValue hessian(const MetricField& g, const ScalarField& f,
                    std::span<const double> point);
double laplacian(const MetricField& g, const ScalarField& f, std::span<const double> point);

// Same, from an already evaluated jet of f (order >= 2) at c's point.
TensorValue hessian_from(const CurvatureJets& c, const Jet& f);
double laplacian_from(const CurvatureJets& c, const Jet& f);

// Value-level covariant derivative of a rank-2 covariant tensor given as jets
// (order >= 1) on c's chart: out(i, j, k) = (nabla_i S)_jk.
TensorValue covariant_derivative_rank2(const CurvatureJets& c, std::span<const Jet> S);

// Independent Ricci for a warped product (base, phi^2 * fiber) assembled from
// lower-dimensional pieces: curvature of the base factor, derivatives of the
// warping function, and the fiber's Einstein constant.  Never touches the
// assembled product metric, so it cross-checks `ricci` on such geometries.
TensorValue warped_ricci_oracle(const MetricField& base, const ScalarField& phi,
                                const MetricField& fiber, double fiber_einstein_const,
                                std::span<const double> point);

} // namespace qemlab
