#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qemlab/jet.hpp"

namespace qemlab {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Coordinate chart: coordinate names plus the box that sampling draws from.
// The box doubles as the validity region for evaluations; it is always chosen
// away from coordinate degeneracies (poles, axis of a polar chart, u = 0).
struct Chart {
    int dim = 0;
    std::vector<std::string> coordinate_names;
    std::vector<Interval> sample_domain;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<std::string> names, std::vector<Interval> domain);

// Scalar-valued function of coordinate jets.  Implementations must derive the
// shape of any constants from the jets they receive, so the same callable
// works unchanged inside a product chart of larger dimension.
using JetFn = std::function<Jet(std::span<const Jet>)>;

inline Jet const_like(const Jet& ref, double c) {
    return Jet::constant(ref.dim(), ref.order(), c);
}

struct ScalarField {
    ChartPtr chart;
    JetFn fn;
};

// Riemannian metric given componentwise on a chart.  comps is dim*dim,
// row-major; builders install the same callable for (i,j) and (j,i).
struct MetricField {
    ChartPtr chart;
    std::vector<JetFn> comps;

    int dim() const { return chart ? chart->dim : 0; }
    const JetFn& comp(int i, int j) const { return comps[i * dim() + j]; }
};

void check_in_domain(const Chart& chart, std::span<const double> point);

// Coordinate seed jets at `point`.
std::vector<Jet> seed_point(const Chart& chart, std::span<const double> point, int order);

// Evaluate f as a jet of the requested order at a point of its chart.
Jet evaluate_jet(const ScalarField& f, std::span<const double> point, int order);

struct MetricAt {
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
    double det = 0.0;
};

// Metric, exact inverse and determinant at a point.  Throws
// MetricSignatureError if g is not positive definite there.
MetricAt metric_at(const MetricField& g, std::span<const double> point);

// Quasi-uniform points in the chart box: Halton sequence with a seeded
// Cranley-Patterson rotation.  Same seed, same points, in the same order.
std::vector<std::vector<double>> sample_points(const Chart& chart, int count, std::uint64_t seed);

// --- metric builders ---------------------------------------------------

ChartPtr interval_chart(const std::string& name, Interval dom);

MetricField make_metric(ChartPtr chart, std::vector<JetFn> comps);

// Identity metric on the given chart.
MetricField flat_metric(ChartPtr chart);

// Euclidean box chart with coordinates prefix1..prefixd.
MetricField flat_box(const std::string& prefix, int dim, Interval each);

// Round unit sphere S^d in iterated polar coordinates.  d = 1 degenerates to
// a flat circle coordinate.
MetricField sphere_metric(int d);

// Hyperbolic space H^d of curvature -1 in upper half-space coordinates.
// d = 1 degenerates to a flat line.
MetricField hyperbolic_metric(int d);

// c * g with c > 0.
MetricField scaled_metric(const MetricField& g, double c);

// Block-diagonal product; coordinate names must not collide.
MetricField product_metric(const MetricField& a, const MetricField& b);

// dr^2 + phi(r)^2 * fiber on [dom] x fiber, r named `coord`.
MetricField warped_metric(const std::string& coord, Interval dom,
                          std::function<Jet(const Jet&)> phi, const MetricField& fiber);

// Scalar field depending only on the first coordinate of the chart.
ScalarField radial_field(ChartPtr chart, std::function<Jet(const Jet&)> f);

// Pointwise sum f + c (used for perturbed potentials).
ScalarField shifted_field(const ScalarField& f, double c);

} // namespace qemlab
