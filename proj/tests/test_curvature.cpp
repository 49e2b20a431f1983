#include <cmath>
#include <vector>

#include "doctest.h"
#include "qemlab/chart.hpp"
#include "qemlab/curvature.hpp"
#include "qemlab/errors.hpp"

using namespace qemlab;

namespace {

// K (g_ik g_jl - g_il g_jk): lowered curvature tensor of a space form.
double space_form_rm(const Eigen::MatrixXd& g, double K, int i, int j, int k, int l) {
    return K * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
}

void check_space_form(const MetricField& m, double K, double tol) {
    auto pts = sample_points(*m.chart, 6, 11);
    for (const auto& p : pts) {
        const TensorValue rm = riemann(m, p);
        const MetricAt ma = metric_at(m, p);
        const int n = m.dim();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        CHECK(std::abs(rm.at(i, j, k, l) - space_form_rm(ma.g, K, i, j, k, l)) <=
                              tol);
        const TensorValue rc = ricci(m, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(rc.at(i, j) - K * (n - 1) * ma.g(i, j)) <= tol);
        CHECK(std::abs(scalar_curvature(m, p) - K * n * (n - 1)) <= tol);
    }
}

} // namespace

TEST_CASE("round sphere S^2: lowered curvature sign convention") {
    MetricField s2 = sphere_metric(2);
    const double x[] = {0.8, 1.1};
    const TensorValue rm = riemann(s2, x);
    const double s = std::sin(0.8);
    // R_{r th r th} = + sin^2 r fixes the sign convention once and for all.
    CHECK(rm.at(0, 1, 0, 1) == doctest::Approx(s * s).epsilon(1e-12));
    CHECK(rm.at(1, 0, 0, 1) == doctest::Approx(-s * s).epsilon(1e-12));

    const std::vector<double> X{1.0, 0.0}, Y{0.0, 1.0};
    CHECK(sectional_curvature(s2, x, X, Y) == doctest::Approx(1.0).epsilon(1e-11));

    const TensorValue rc = ricci(s2, x);
    CHECK(rc.at(0, 0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(rc.at(1, 1) == doctest::Approx(s * s).epsilon(1e-11));
    CHECK(scalar_curvature(s2, x) == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("space forms: S^4, H^3, flat box") {
    check_space_form(sphere_metric(4), 1.0, 1e-9);
    check_space_form(hyperbolic_metric(3), -1.0, 1e-9);
    check_space_form(flat_box("x", 3, {-1.0, 1.0}), 0.0, 1e-12);
}

TEST_CASE("christoffel symbols of the sphere") {
    MetricField s2 = sphere_metric(2);
    const double x[] = {0.8, 1.1};
    const TensorValue ch = christoffel(s2, x);
    CHECK(ch.at(0, 1, 1) == doctest::Approx(-std::sin(0.8) * std::cos(0.8)).epsilon(1e-12));
    CHECK(ch.at(1, 0, 1) == doctest::Approx(std::cos(0.8) / std::sin(0.8)).epsilon(1e-12));
    CHECK(ch.at(1, 1, 0) == ch.at(1, 0, 1));
    CHECK(ch.at(0, 0, 0) == 0.0);
}

namespace {

MetricField bumpy_metric() {
    auto c = make_chart({"a", "b", "c"}, {{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}});
    std::vector<JetFn> comps(9);
    auto diag = [](int i) {
        return [i](std::span<const Jet> x) {
            return 1.0 + 0.2 * sin(x[i]) * cos(x[(i + 1) % 3]);
        };
    };
    auto off = [](int i, int j) {
        return [i, j](std::span<const Jet> x) {
            return 0.05 * sin(x[i] + 2.0 * x[j]);
        };
    };
    for (int i = 0; i < 3; ++i) comps[i * 3 + i] = diag(i);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j) comps[i * 3 + j] = comps[j * 3 + i] = off(j, i);
    return make_metric(c, comps);
}

} // namespace

TEST_CASE("algebraic and differential curvature identities on a generic metric") {
    MetricField m = bumpy_metric();
    auto pts = sample_points(*m.chart, 8, 3);
    const int n = 3;
    for (const auto& p : pts) {
        CurvatureJets c = curvature_jets(m, p, 1);
        // pair symmetry and both antisymmetries
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const double v = c.Rm(i, j, k, l).value();
                        CHECK(std::abs(v + c.Rm(j, i, k, l).value()) <= 1e-9);
                        CHECK(std::abs(v + c.Rm(i, j, l, k).value()) <= 1e-9);
                        CHECK(std::abs(v - c.Rm(k, l, i, j).value()) <= 1e-9);
                        // first Bianchi
                        const double b = v + c.Rm(j, k, i, l).value() +
                                         c.Rm(k, i, j, l).value();
                        CHECK(std::abs(b) <= 1e-9);
                    }
        // contracted second Bianchi: g^{jk} (nabla_j Ric)_ki = d_i R / 2
        const TensorValue dric = covariant_derivative_rank2(c, c.ric);
        for (int i = 0; i < n; ++i) {
            double div = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) div += c.ginv(j, k) * dric.at(j, k, i);
            CHECK(std::abs(div - 0.5 * c.scal.d1(i)) <= 1e-8);
        }
        // Ricci is symmetric
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(c.Ric(i, j).value() - c.Ric(j, i).value()) <= 1e-12);
    }
}

TEST_CASE("hessian, gradient and laplacian on the unit sphere") {
    MetricField s2 = sphere_metric(2);
    ScalarField f = radial_field(s2.chart, [](const Jet& r) { return cos(r); });
    const double x[] = {0.8, 1.1};
    const MetricAt ma = metric_at(s2, x);

    // On S^n, Hess(cos r) = -cos r g and Lap(cos r) = -n cos r.
    const TensorValue h = hessian(s2, f, x);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(h.at(i, j) + std::cos(0.8) * ma.g(i, j)) <= 1e-12);
    CHECK(laplacian(s2, f, x) == doctest::Approx(-2.0 * std::cos(0.8)).epsilon(1e-12));

    const TensorValue gr = gradient(s2, f, x);
    CHECK(gr.at(0) == doctest::Approx(-std::sin(0.8)).epsilon(1e-12));
    CHECK(gr.at(1) == 0.0);
}

TEST_CASE("warped product Ricci against the assembled computation") {
    // dt^2 + cosh^2 t * (0.5 g_{H^2}): fiber Einstein constant is -2.
    MetricField fiber = scaled_metric(hyperbolic_metric(2), 0.5);
    MetricField base = flat_metric(interval_chart("t", {0.1, 2.0}));
    ScalarField phi = radial_field(base.chart, [](const Jet& t) { return cosh(t); });
    MetricField total = warped_metric("t", {0.1, 2.0}, [](const Jet& t) { return cosh(t); },
                                      fiber);

    auto pts = sample_points(*total.chart, 6, 19);
    for (const auto& p : pts) {
        const TensorValue direct = ricci(total, p);
        const TensorValue oracle = warped_ricci_oracle(base, phi, fiber, -2.0, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(direct.at(i, j) - oracle.at(i, j)) <= 1e-8);
    }
}

TEST_CASE("covariant derivative of Ricci against the warped-product closed form") {
    // Same non-Einstein warped metric; all nonzero entries of nabla Ric have
    // one-dimensional closed forms in t.
    MetricField fiber = scaled_metric(hyperbolic_metric(2), 0.5);
    MetricField total = warped_metric("t", {0.1, 2.0}, [](const Jet& t) { return cosh(t); },
                                      fiber);

    auto pts = sample_points(*total.chart, 5, 23);
    for (const auto& p : pts) {
        const double t = p[0], y = p[2];
        const double ch = std::cosh(t), sh = std::sinh(t);
        const double ghat = 0.5 / (y * y); // fiber metric diagonal
        const double A = -2.0;             // tt-component of Ric
        const double B = -2.0 - (ch * ch + sh * sh);
        const double Bp = -4.0 * sh * ch;

        const TensorValue d = covariant_derivative_ricci(total, p);

        CHECK(std::abs(d.at(0, 0, 0)) <= 1e-9); // A' = 0
        for (int a = 1; a < 3; ++a) {
            CHECK(std::abs(d.at(0, a, a) - (Bp - 2.0 * (sh / ch) * B) * ghat) <= 1e-8);
            const double cross = sh * ghat * (ch * A - B / ch);
            CHECK(std::abs(d.at(a, 0, a) - cross) <= 1e-8);
            CHECK(std::abs(d.at(a, a, 0) - cross) <= 1e-8);
        }
        CHECK(std::abs(d.at(1, 2, 0)) <= 1e-9);
        CHECK(std::abs(d.at(0, 1, 2)) <= 1e-9);
    }
}
