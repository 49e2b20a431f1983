#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "qemlab/catalog.hpp"
#include "qemlab/errors.hpp"
#include "qemlab/qe_verify.hpp"

using namespace qemlab;

namespace {

const IdentityReport& find_report(const std::vector<IdentityReport>& reps,
                                  const std::string& id) {
    for (const auto& r : reps)
        if (r.identity_id == id) return r;
    throw std::out_of_range("no report for identity " + id);
}

PointList entry_points(const CatalogEntry& e, int count, std::uint64_t seed) {
    return sample_points(*e.qe.g.chart, count, seed);
}

const std::vector<std::string> kAllIds = {
    "system",
    "trace",
    "mu-constant",
    "curvature-gradient",
    "curvature-laplacian",
    "radial-ricci",
    "radial-ricci-traceless",
    "traceless-norm",
    "transnormal",
    "p-gradient",
    "p-trace-laplacian",
    "p-skew-derivative",
    "q-contraction",
    "p-derivative-square",
    "coupling-decomposition",
    "coupling-dt",
    "coupling-contraction",
    "tflat-balance",
};

} // namespace

TEST_CASE("every catalog entry passes the full identity suite") {
    for (const auto& id : catalog_ids()) {
        CAPTURE(id);
        const CatalogEntry e = build_entry(id);
        const auto reps = verify_all(e.qe, entry_points(e, 8, 31));
        REQUIRE(reps.size() == kAllIds.size());

        int not_applicable = 0;
        for (const auto& rep : reps) {
            CAPTURE(rep.identity_id);
            CAPTURE(rep.max_residual);
            CHECK(rep.pass);
            if (rep.status == CheckStatus::NotApplicable)
                ++not_applicable;
            else
                CHECK(rep.max_residual <= 1e-7);
        }
        // the four coupling identities need n >= 3, everything else applies
        CHECK(not_applicable == (e.qe.dim() == 2 ? 4 : 0));
    }
}

TEST_CASE("group checks report their documented identity subsets in order") {
    const CatalogEntry e = build_entry("exampleA");
    const auto pts = entry_points(e, 4, 17);

    const auto all = verify_all(e.qe, pts);
    REQUIRE(all.size() == kAllIds.size());
    for (std::size_t i = 0; i < kAllIds.size(); ++i)
        CHECK(all[i].identity_id == kAllIds[i]);

    CHECK(check_qe_system(e.qe, pts).identity_id == "system");
    CHECK(check_trace(e.qe, pts).identity_id == "trace");
    CHECK(check_mu_constant(e.qe, pts).identity_id == "mu-constant");

    const auto prop = check_propA(e.qe, pts);
    REQUIRE(prop.size() == 2);
    CHECK(prop[0].identity_id == "curvature-gradient");
    CHECK(prop[1].identity_id == "curvature-laplacian");

    const auto cr = check_constantR_identities(e.qe, pts);
    REQUIRE(cr.size() == 4);
    CHECK(cr[0].identity_id == "radial-ricci");
    CHECK(cr[3].identity_id == "transnormal");

    const auto aux = check_lemma_aux(e.qe, pts);
    REQUIRE(aux.size() == 5);
    CHECK(aux[0].identity_id == "p-gradient");
    CHECK(aux[4].identity_id == "p-derivative-square");

    const auto coup = check_lem1_and_tric(e.qe, pts);
    REQUIRE(coup.size() == 4);
    CHECK(coup[0].identity_id == "coupling-decomposition");
    CHECK(coup[3].identity_id == "tflat-balance");

    for (const auto& rep : coup) CHECK(rep.points_checked == 4);
}

TEST_CASE("transnormal coefficients and measured constants on the cosh example") {
    const CatalogEntry e = build_entry("exampleA");

    const TransnormalData td = transnormal_data(e.qe, -8.0, -1.0);
    CHECK(td.c0 == doctest::Approx(-1.0));
    CHECK(td.c2 == doctest::Approx(1.0));
    CHECK(td.alpha == doctest::Approx(-1.0));
    CHECK(td.a1 == doctest::Approx(2.0));

    const MeasuredConstants mc = measure_constants(e.qe, entry_points(e, 6, 3));
    CHECK(mc.mu_mean == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(mc.mu_spread <= 1e-9);
    CHECK(mc.r_mean == doctest::Approx(-8.0).epsilon(1e-10));
    CHECK(mc.r_spread <= 1e-9);

    QEStructure degenerate = e.qe;
    degenerate.m = 1.0;
    CHECK_THROWS_AS(transnormal_data(degenerate, -8.0, -1.0), ParamError);
}

TEST_CASE("contracted coupling norm matches its closed form on the cosh example") {
    const CatalogEntry e = build_entry("exampleA");
    const double m = e.qe.m;
    const double n = e.qe.dim();
    for (const auto& pt : entry_points(e, 6, 29)) {
        const double r = pt[0];
        const CurvatureJets c = curvature_jets(e.qe.g, pt, 1);
        const Jet uj = evaluate_jet(e.qe.u, pt, 1);
        const double t_sq = norm_sq(t_tensor(e.qe, c, uj), c.g, c.ginv);
        const double sh2 = std::sinh(r) * std::sinh(r);
        CHECK(t_sq == doctest::Approx(64.0 / 3.0 * sh2).epsilon(1e-9));
        CHECK((n - 2.0) / (2.0 * (m + n - 2.0)) * t_sq ==
              doctest::Approx(16.0 / 3.0 * sh2).epsilon(1e-9));
    }
}

TEST_CASE("identities that assume constant scalar curvature are skipped when it varies") {
    // cosh-warped round sphere: a perfectly fine metric whose scalar
    // curvature genuinely depends on r, paired with an arbitrary potential
    QEStructure qe;
    qe.g = warped_metric("r", {0.2, 1.5}, [](const Jet& r) { return cosh(r); },
                         sphere_metric(2));
    qe.u = radial_field(qe.g.chart, [](const Jet& r) { return cosh(r); });
    qe.m = 2.0;
    qe.lambda = -3.0;

    const auto reps = verify_all(qe, sample_points(*qe.g.chart, 5, 41));
    const std::vector<std::string> gated = {
        "radial-ricci",     "radial-ricci-traceless", "traceless-norm",
        "transnormal",      "q-contraction",          "p-derivative-square",
        "coupling-contraction", "tflat-balance"};
    for (const auto& id : gated) {
        const auto& rep = find_report(reps, id);
        CAPTURE(id);
        CHECK(rep.status == CheckStatus::NotApplicable);
        CHECK(rep.pass);
        CHECK(rep.points_checked == 0);
        CHECK(rep.note.find("varies") != std::string::npos);
    }
    // not a solution of the coupled system, and the report says so
    const auto& sys = find_report(reps, "system");
    CHECK(sys.status == CheckStatus::Checked);
    CHECK_FALSE(sys.pass);
    CHECK(sys.max_residual >= 1e-3);
}

TEST_CASE("coupling identities are not applicable in two dimensions") {
    const CatalogEntry e = build_entry("twod_hyperbolic");
    const auto pts = entry_points(e, 5, 7);

    for (const auto& rep : check_lem1_and_tric(e.qe, pts)) {
        CAPTURE(rep.identity_id);
        CHECK(rep.status == CheckStatus::NotApplicable);
        CHECK(rep.note.find("dimension") != std::string::npos);
    }
    for (const auto& rep : check_constantR_identities(e.qe, pts)) {
        CAPTURE(rep.identity_id);
        CHECK(rep.status == CheckStatus::Checked);
        CHECK(rep.pass);
    }
}

TEST_CASE("m = 1 disables everything that divides by m - 1") {
    const CatalogEntry e = build_entry("exampleA");
    QEStructure degenerate = e.qe;
    degenerate.m = 1.0;

    const auto reps = verify_all(degenerate, entry_points(e, 3, 11));
    const std::vector<std::string> gated = {
        "mu-constant", "radial-ricci", "traceless-norm", "transnormal",
        "p-gradient",  "q-contraction", "tflat-balance"};
    for (const auto& id : gated) {
        const auto& rep = find_report(reps, id);
        CAPTURE(id);
        CHECK(rep.status == CheckStatus::NotApplicable);
        CHECK(rep.note.find("m > 1") != std::string::npos);
    }
    CHECK(find_report(reps, "system").status == CheckStatus::Checked);
    CHECK(find_report(reps, "coupling-decomposition").status == CheckStatus::Checked);
}

TEST_CASE("a wrong lambda breaks every identity in the suite") {
    const CatalogEntry bad = build_entry("exampleA", {}, {0.1, 0.0, 1.0});
    const auto reps = verify_all(bad.qe, entry_points(bad, 8, 53));
    for (const auto& rep : reps) {
        CAPTURE(rep.identity_id);
        CAPTURE(rep.max_residual);
        CHECK(rep.status == CheckStatus::Checked);
        CHECK_FALSE(rep.pass);
        CHECK(rep.max_residual >= 1e-3);
    }
}

TEST_CASE("a shifted potential is caught even where the coupling tensors cannot see it") {
    const CatalogEntry bad = build_entry("exampleA", {}, {0.0, 0.05, 1.0});
    const auto reps = verify_all(bad.qe, entry_points(bad, 8, 59));

    CHECK_FALSE(find_report(reps, "system").pass);
    CHECK(find_report(reps, "system").max_residual >= 1e-3);
    CHECK_FALSE(find_report(reps, "trace").pass);
    CHECK_FALSE(find_report(reps, "mu-constant").pass);

    // with R constant the coupling tensor only sees grad u, so these three
    // stay exactly satisfied under u -> u + c; the system check above is
    // what rules such a shift out
    CHECK(find_report(reps, "coupling-dt").pass);
    CHECK(find_report(reps, "coupling-contraction").pass);
    CHECK(find_report(reps, "tflat-balance").pass);
}

TEST_CASE("reduction note and potential floor bookkeeping") {
    const CatalogEntry e = build_entry("exampleA");
    const auto reps = verify_all(e.qe, entry_points(e, 4, 13));
    CHECK(find_report(reps, "curvature-laplacian").note.find("reduces") !=
          std::string::npos);

    // raise the floor above part of the hemisphere potential's range and the
    // u-dividing checks drop those points instead of dividing by ~0
    const CatalogEntry hemi = build_entry("hemisphere");
    VerifyOptions opt;
    opt.u_floor = 0.5;
    const auto hreps = verify_all(hemi.qe, entry_points(hemi, 10, 37), opt);
    const auto& sys = find_report(hreps, "system");
    const auto& dt = find_report(hreps, "coupling-dt");
    CHECK(sys.points_checked == 10);
    CHECK(dt.points_checked > 0);
    CHECK(dt.points_checked < 10);
    CHECK(dt.pass);
}
