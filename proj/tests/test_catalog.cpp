#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "qemlab/catalog.hpp"
#include "qemlab/errors.hpp"

using namespace qemlab;

namespace {

// Normalized residual of hess u = (u/m)(Ric - lambda g) at a point.
double qe_residual(const QEStructure& qe, std::span<const double> pt) {
    const CurvatureJets c = curvature_jets(qe.g, pt, 0);
    const Jet uj = evaluate_jet(qe.u, pt, 2);
    const TensorValue h = hessian_from(c, uj);
    double worst = 0.0, scale = 1.0;
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            const double rhs =
                uj.value() / qe.m * (c.Ric(i, j).value() - qe.lambda * c.g(i, j));
            worst = std::max(worst, std::abs(h.at(i, j) - rhs));
            scale = std::max({scale, std::abs(h.at(i, j)), std::abs(rhs)});
        }
    return worst / scale;
}

double t_norm_sq(const QEStructure& qe, std::span<const double> pt) {
    const CurvatureJets c = curvature_jets(qe.g, pt, 1);
    const Jet uj = evaluate_jet(qe.u, pt, 1);
    return norm_sq(t_tensor(qe, c, uj), c.g, c.ginv);
}

double oracle_mismatch(const CatalogEntry& e, std::span<const double> pt) {
    const TensorValue a = e.ricci_oracle(pt);
    const TensorValue b = ricci(e.qe.g, pt);
    double worst = 0.0, scale = 1.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
            scale = std::max(scale, std::abs(b.at(i, j)));
        }
    return worst / scale;
}

} // namespace

TEST_CASE("every entry solves the defining system with its recorded constants") {
    for (const auto& id : catalog_ids()) {
        CAPTURE(id);
        const CatalogEntry e = build_entry(id);
        const auto pts = sample_points(*e.qe.g.chart, 5, 7);
        for (const auto& pt : pts) {
            CHECK(qe_residual(e.qe, pt) <= 1e-9);
            CHECK(e.qe.mu_at(pt) == doctest::Approx(e.expected.mu).epsilon(1e-9));
            CHECK(scalar_curvature(e.qe.g, pt) ==
                  doctest::Approx(e.expected.scalar_curvature).epsilon(1e-9));
        }
    }
}

TEST_CASE("independent block-assembled Ricci matches the pipeline on every entry") {
    for (const auto& id : catalog_ids()) {
        CAPTURE(id);
        const CatalogEntry e = build_entry(id);
        for (const auto& pt : sample_points(*e.qe.g.chart, 4, 11))
            CHECK(oracle_mismatch(e, pt) <= 1e-9);
    }
}

TEST_CASE("entries honor non-default parameters") {
    const CatalogEntry hyp = build_entry("hyperbolic", {{"n", 4}, {"m", 2.5}});
    CHECK(hyp.qe.lambda == doctest::Approx(-5.5));
    CHECK(hyp.expected.scalar_curvature == doctest::Approx(-12.0));
    CHECK(hyp.expected.mu == doctest::Approx(-1.5));
    CHECK(hyp.expected.case_label == "ThmB(iv)");

    const CatalogEntry cyl = build_entry("cylinder", {{"n", 4}, {"m", 3}, {"lambda", 2}});
    CHECK(cyl.expected.scalar_curvature == doctest::Approx(6.0));
    CHECK(cyl.expected.mu == doctest::Approx(4.0 / 3.0));
    const auto cp = sample_points(*cyl.qe.g.chart, 3, 5);
    for (const auto& pt : cp) {
        CHECK(qe_residual(cyl.qe, pt) <= 1e-9);
        CHECK(scalar_curvature(cyl.qe.g, pt) == doctest::Approx(6.0).epsilon(1e-9));
    }

    const CatalogEntry exa = build_entry("exampleA", {{"p", 2}, {"q", 2}, {"m", 2.5}});
    CHECK(exa.qe.dim() == 5);
    CHECK(exa.qe.lambda == doctest::Approx(-4.5));
    CHECK(exa.expected.scalar_curvature == doctest::Approx(-15.0));
    for (const auto& pt : sample_points(*exa.qe.g.chart, 2, 5))
        CHECK(scalar_curvature(exa.qe.g, pt) == doctest::Approx(-15.0).epsilon(1e-9));
}

TEST_CASE("case labels, spectrum slots and rigidity hints are as recorded") {
    CHECK(build_entry("hyperbolic").expected.case_label == "ThmA(i)");
    CHECK(build_entry("cosh_cylinder").expected.case_label == "ThmA(ii)");
    CHECK(build_entry("product_sinh").expected.case_label == "ThmA(iii)");
    CHECK(build_entry("exp_cigar").expected.case_label == "ThmA(iv)");
    CHECK(build_entry("product_R_H2").expected.case_label == "ThmA(v)");
    CHECK(build_entry("half_line_flat").expected.case_label == "ThmA(vi)");
    CHECK(build_entry("half_line_flat", {{"n", 5}}).expected.case_label == "ThmB(iii)");
    CHECK(build_entry("product_exp").expected.case_label == "ThmB(viii)");
    CHECK(build_entry("hemisphere").expected.case_label == "ThmB(i)");
    CHECK(build_entry("prop_rigid_a").expected.case_label == "ThmA(iii)");
    CHECK(build_entry("prop_rigid_c", {{"q", 3}}).expected.case_label == "ThmB(vii)");

    CHECK(!build_entry("hemisphere").expected.kappa.has_value());
    CHECK(!build_entry("half_line_flat").expected.kappa.has_value());
    CHECK(build_entry("hyperbolic").expected.kappa == 0);
    CHECK(build_entry("product_cosh", {{"n", 4}}).expected.kappa == 3);
    CHECK(build_entry("exampleA").expected.kappa == 2);
    CHECK(build_entry("prop_rigid_d").expected.kappa == 2);

    CHECK(build_entry("exampleA").expected.rigid_hint == "rigid(f)");
    CHECK(build_entry("prop_rigid_e").expected.rigid_hint == "rigid(e)");
    CHECK(build_entry("product_sinh").expected.rigid_hint.empty());
    CHECK(build_entry("exampleA").expected.case_label == "no match");
}

TEST_CASE("coupling-tensor flatness matches the records") {
    for (const auto& id : catalog_ids()) {
        const CatalogEntry e = build_entry(id);
        if (!e.expected.t_flat.has_value()) {
            CHECK(e.qe.dim() == 2);
            continue;
        }
        CAPTURE(id);
        const auto pts = sample_points(*e.qe.g.chart, 3, 13);
        for (const auto& pt : pts) {
            const double tsq = t_norm_sq(e.qe, pt);
            if (*e.expected.t_flat)
                CHECK(tsq <= 1e-16);
            else
                CHECK(tsq >= 1e-3);
        }
    }
}

TEST_CASE("parameter validation names the violated constraint") {
    CHECK_THROWS_AS(build_entry("hemisphere", {{"n", 2}}), ParamError);
    CHECK_THROWS_AS(build_entry("exampleA", {{"p", 0}}), ParamError);
    CHECK_THROWS_AS(build_entry("exampleA", {{"q", 1}}), ParamError);
    CHECK_THROWS_AS(build_entry("exampleA", {{"p", 4}, {"q", 4}}), ParamError);
    CHECK_THROWS_AS(build_entry("product_cosh", {{"lambda", 1.0}}), ParamError);
    CHECK_THROWS_AS(build_entry("cylinder", {{"lambda", -1.0}}), ParamError);
    CHECK_THROWS_AS(build_entry("hyperbolic", {{"m", 1.0}}), ParamError);
    CHECK_THROWS_AS(build_entry("hyperbolic", {{"n", 3.5}}), ParamError);
    CHECK_THROWS_AS(build_entry("hyperbolic", {{"bogus", 1.0}}), ParamError);
    CHECK_THROWS_AS(build_entry("no_such_entry"), ParamError);
    CHECK_THROWS_AS(build_entry("hemisphere", {}, Perturbation{0.0, 0.0, -1.0}),
                    ParamError);
    CHECK_THROWS_WITH_AS(build_entry("prop_rigid_d", {{"n", 3}}), // forces q < 2
                         doctest::Contains("n"), ParamError);
}

TEST_CASE("rescaling moves lambda, mu and R by 1/c^2 and keeps the system exact") {
    const CatalogEntry e = build_entry("hyperbolic");
    for (const double c : {0.5, 2.0}) {
        CAPTURE(c);
        const QEStructure s = rescaled(e.qe, c);
        CHECK(s.lambda == doctest::Approx(e.qe.lambda / (c * c)));
        for (const auto& pt : sample_points(*s.g.chart, 3, 19)) {
            CHECK(qe_residual(s, pt) <= 1e-9);
            CHECK(scalar_curvature(s.g, pt) ==
                  doctest::Approx(-6.0 / (c * c)).epsilon(1e-9));
            CHECK(s.mu_at(pt) == doctest::Approx(-1.0 / (c * c)).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(rescaled(e.qe, 0.0), ParamError);
}

TEST_CASE("perturbations break the system; fiber scaling is a reparametrization in 2d") {
    const auto pt_of = [](const CatalogEntry& e) {
        return sample_points(*e.qe.g.chart, 1, 23).front();
    };

    const CatalogEntry bad_l = build_entry("exampleA", {}, {0.05, 0.0, 1.0});
    CHECK(qe_residual(bad_l.qe, pt_of(bad_l)) >= 1e-3);

    const CatalogEntry bad_u = build_entry("hyperbolic", {}, {0.0, 0.05, 1.0});
    CHECK(qe_residual(bad_u.qe, pt_of(bad_u)) >= 1e-3);

    const CatalogEntry bad_f = build_entry("hemisphere", {}, {0.0, 0.0, 1.05});
    CHECK(qe_residual(bad_f.qe, pt_of(bad_f)) >= 1e-3);

    // a one-dimensional fiber only changes coordinates, never the geometry
    const CatalogEntry same = build_entry("twod_hyperbolic", {}, {0.0, 0.0, 1.3});
    CHECK(qe_residual(same.qe, pt_of(same)) <= 1e-9);
}

TEST_CASE("closed-form scalar curvature helper") {
    CHECK(expected_scalar_curvature("exampleA") == doctest::Approx(-8.0));
    CHECK(expected_scalar_curvature("hyperbolic") == doctest::Approx(-6.0));
    CHECK(expected_scalar_curvature("product_R_H2") == doctest::Approx(-2.0));
    CHECK(expected_scalar_curvature("prop_rigid_a") == doctest::Approx(-4.0));
    CHECK(expected_scalar_curvature("twod_exp") == doctest::Approx(-2.0));
    CHECK(catalog_ids().size() == 21);
}
