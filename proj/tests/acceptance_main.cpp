// Acceptance gate: one line per documented criterion, exit code = number of
// failures.  argv[1] must be the path to the qemlab CLI binary; the last
// criterion shells out to it twice and byte-compares the JSON.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "qemlab/catalog.hpp"
#include "qemlab/chart.hpp"
#include "qemlab/classify.hpp"
#include "qemlab/conformal.hpp"
#include "qemlab/curvature.hpp"
#include "qemlab/qe_verify.hpp"
#include "qemlab/tensor.hpp"

namespace {

using namespace qemlab;

PointList pts_for(const CatalogEntry& e, int count, std::uint64_t seed) {
    return sample_points(*e.qe.g.chart, count, seed);
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

const IdentityReport& find_report(const std::vector<IdentityReport>& reps,
                                  const std::string& id) {
    for (const auto& r : reps)
        if (r.identity_id == id) return r;
    throw std::runtime_error("no report for identity " + id);
}

// ------------------------------------------------------------- criterion 1

std::string criterion_system_and_mu() {
    struct Case { double p, q, m; };
    for (const Case& c : {Case{1, 2, 2}, Case{2, 3, 2.5}}) {
        const CatalogEntry e =
            build_entry("exampleA", {{"p", c.p}, {"q", c.q}, {"m", c.m}});
        const PointList pts = pts_for(e, 100, 42);
        const IdentityReport sys = check_qe_system(e.qe, pts);
        if (sys.status != CheckStatus::Checked || sys.max_residual > 1e-8)
            return "system residual " + num(sys.max_residual) + " at (p,q,m)=(" + num(c.p) +
                   "," + num(c.q) + "," + num(c.m) + ")";
        const MeasuredConstants mc = measure_constants(e.qe, pts);
        const double want = -(c.m - 1.0);
        if (std::abs(mc.mu_mean - want) > 1e-9)
            return "mu " + num(mc.mu_mean) + " != " + num(want);
        if (mc.mu_spread > 1e-9) return "mu spread " + num(mc.mu_spread);
    }
    return {};
}

// ------------------------------------------------------------- criterion 2

std::string criterion_scalar_curvature_row() {
    const CatalogEntry e = build_entry("exampleA", {{"p", 1}, {"q", 2}, {"m", 2}});
    const MeasuredConstants mc = measure_constants(e.qe, pts_for(e, 100, 42));
    if (std::abs(mc.r_mean - (-8.0)) > 1e-8)
        return "measured R " + num(mc.r_mean) + " not within 1e-8 of -8";
    const SpectrumTable t = admissible_spectrum(4, make_rational(2, 1), -3.0);
    if (t.rows.at(2).value != -8.0)
        return "spectrum row kappa=2 is " + num(t.rows.at(2).value) + ", not exactly -8";
    if (t.rows.at(2).value != e.expected.scalar_curvature)
        return "catalog R and spectrum row differ at table level";
    return {};
}

// ------------------------------------------------------------- criterion 3

const std::vector<std::string> kSuiteIdentities = {
    "trace",
    "curvature-gradient",
    "curvature-laplacian",
    "radial-ricci",
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
};

std::string criterion_identity_suite() {
    for (const auto& id : catalog_ids()) {
        const CatalogEntry e = build_entry(id);
        const auto reps = verify_all(e.qe, pts_for(e, 30, 42));
        for (const auto& name : kSuiteIdentities) {
            const IdentityReport& r = find_report(reps, name);
            if (r.status != CheckStatus::Checked) continue;
            if (r.max_residual > 1e-7)
                return id + "/" + name + " residual " + num(r.max_residual);
        }
    }
    // negative control: a wrong lambda must make every listed identity fail
    const CatalogEntry bad = build_entry("exampleA", {}, {0.1, 0.0, 1.0});
    const auto reps = verify_all(bad.qe, pts_for(bad, 30, 42));
    for (const auto& name : kSuiteIdentities) {
        const IdentityReport& r = find_report(reps, name);
        if (r.status != CheckStatus::Checked)
            return "control: " + name + " not applicable under perturbation";
        if (r.max_residual < 1e-3)
            return "control: " + name + " residual " + num(r.max_residual) + " < 1e-3";
    }
    return {};
}

// ------------------------------------------------------------- criterion 4

std::string criterion_t_norm_closed_form() {
    const CatalogEntry e = build_entry("exampleA", {{"p", 1}, {"q", 2}, {"m", 2}});
    if (e.qe.g.chart->coordinate_names.at(0) != "r") return "axis coordinate is not first";
    std::vector<double> pt = pts_for(e, 1, 42).at(0);
    for (int k = 0; k < 20; ++k) {
        const double r = 0.1 + k * (1.9 / 19.0);
        pt[0] = r;
        const TensorValue T = t_tensor(e.qe, pt);
        const MetricAt ma = metric_at(e.qe.g, pt);
        const double tsq = norm_sq(T, ma.g, ma.g_inv);
        const double want = (64.0 / 3.0) * std::sinh(r) * std::sinh(r);
        if (std::abs(tsq - want) > 1e-6 * std::abs(want))
            return "|T|^2 " + num(tsq) + " vs " + num(want) + " at r=" + num(r);
    }
    return {};
}

// ------------------------------------------------------------- criterion 5

std::string criterion_spectrum_endpoints() {
    const auto reduced = [](long long num_, long long den_) {
        const long long g = std::gcd(num_, den_);
        return std::pair<long long, long long>{num_ / g, den_ / g};
    };
    for (int n : {3, 4, 5}) {
        for (const Rational m : {make_rational(2, 1), make_rational(5, 2), make_rational(7, 1)}) {
            const SpectrumTable t = admissible_spectrum(n, m, -1.0);
            const long long a = m.num, b = m.den;
            const std::map<int, std::pair<long long, long long>> want = {
                {0, reduced(static_cast<long long>(n) * (n - 1) * b, a + (n - 1) * b)},
                {1, reduced(a + static_cast<long long>(n) * (n - 2) * b, a + (n - 2) * b)},
                {n - 1, {n - 1, 1}},
                {n, {n, 1}},
            };
            for (const auto& [kappa, frac] : want) {
                const SpectrumRow& row = t.rows.at(static_cast<std::size_t>(kappa));
                if (row.num != frac.first || row.den != frac.second)
                    return "n=" + std::to_string(n) + " m=" + std::to_string(a) + "/" +
                           std::to_string(b) + " kappa=" + std::to_string(kappa) + ": " +
                           std::to_string(row.num) + "/" + std::to_string(row.den) + " != " +
                           std::to_string(frac.first) + "/" + std::to_string(frac.second);
            }
        }
    }
    return {};
}

// ------------------------------------------------------------- criterion 6

std::string criterion_t_flat_dichotomy() {
    for (const auto& id : catalog_ids()) {
        const CatalogEntry e = build_entry(id);
        if (e.qe.dim() < 3) continue;
        if (!e.expected.t_flat) return id + ": no recorded T-flat expectation";
        const TFlatResult tf = t_flat_test(e.qe, pts_for(e, 30, 42));
        if (tf.is_t_flat != *e.expected.t_flat)
            return id + ": t_flat_test says " + (tf.is_t_flat ? "true" : "false");
        if (tf.which_branch == TBranch::Einstein) {
            if (std::abs(tf.r_measured - tf.einstein_branch_r) >
                1e-6 * (1.0 + std::abs(tf.r_measured)))
                return id + ": Einstein branch R mismatch";
        } else if (tf.which_branch == TBranch::Product) {
            if (std::abs(tf.r_measured - tf.product_branch_r) >
                1e-6 * (1.0 + std::abs(tf.r_measured)))
                return id + ": product branch R mismatch";
        } else if (tf.is_t_flat) {
            return id + ": T-flat with no branch";
        }
    }
    const CatalogEntry ex = build_entry("exampleA");
    if (t_flat_test(ex.qe, pts_for(ex, 30, 42)).is_t_flat)
        return "exampleA reported T-flat";
    return {};
}

// ------------------------------------------------------------- criterion 7

std::string criterion_3d_classifier() {
    const std::vector<std::string> six = {"hyperbolic",     "cosh_cylinder", "product_sinh",
                                          "exp_cigar",      "product_cosh",  "half_line_flat"};
    std::set<std::string> labels;
    for (const auto& id : six) {
        const CatalogEntry e = build_entry(id);
        const ClassificationReport rep = classify(e.qe, pts_for(e, 30, 42));
        if (rep.matched_case != e.expected.case_label)
            return id + " classified as '" + rep.matched_case + "'";
        labels.insert(rep.matched_case);
    }
    if (labels.size() != six.size()) return "case labels are not distinct";

    for (const auto& id : catalog_ids()) {
        const CatalogEntry e = build_entry(id);
        if (e.qe.dim() != 3 || e.expected.einstein) continue;
        for (const auto& pt : pts_for(e, 5, 42)) {
            const Eigenstructure3D es = eigenstructure_3d(e.qe, pt);
            if (es.status != CheckStatus::Checked) return id + ": eigenstructure not applicable";
            if (es.product_residual > 1e-7)
                return id + ": product residual " + num(es.product_residual);
            if (es.poly_residual > 1e-7)
                return id + ": polynomial residual " + num(es.poly_residual);
        }
    }
    return {};
}

// ------------------------------------------------------------- criterion 8

double ricci_oracle_gap(const CatalogEntry& e, const PointList& pts) {
    double worst = 0.0;
    for (const auto& pt : pts) {
        const TensorValue want = e.ricci_oracle(pt);
        const TensorValue got = ricci(e.qe.g, pt);
        TensorValue diff = got - want;
        worst = std::max(worst, diff.max_abs() / (1.0 + got.max_abs()));
    }
    return worst;
}

double bianchi_gap(const MetricField& g, const PointList& pts) {
    double worst = 0.0;
    for (const auto& pt : pts) {
        const CurvatureJets c = curvature_jets(g, pt, 1);
        const TensorValue dric = covariant_derivative_rank2(c, c.ric);
        const int n = c.n;
        double scale = 0.0, gap = 0.0;
        for (int k = 0; k < n; ++k) {
            double div = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) div += c.ginv(i, j) * dric.at(i, j, k);
            const double half_dr = 0.5 * c.scal.d1(k);
            scale = std::max({scale, std::abs(div), std::abs(half_dr)});
            gap = std::max(gap, std::abs(div - half_dr));
        }
        worst = std::max(worst, gap / (1.0 + scale));
    }
    return worst;
}

std::string criterion_curvature_oracles() {
    for (const auto& id : catalog_ids()) {
        const CatalogEntry e = build_entry(id);
        const PointList pts = pts_for(e, 20, 42);
        const double gap = ricci_oracle_gap(e, pts);
        if (gap > 1e-8) return id + ": oracle gap " + num(gap);
        const double bianchi = bianchi_gap(e.qe.g, pts);
        if (bianchi > 1e-8) return id + ": Bianchi gap " + num(bianchi);
    }

    struct SpaceForm {
        MetricField g;
        double einstein;  // Ric = einstein * g
    };
    const std::vector<SpaceForm> forms = {
        {sphere_metric(2), 1.0},
        {sphere_metric(3), 2.0},
        {hyperbolic_metric(3), -2.0},
        {flat_box("x", 3, {-1.0, 1.0}), 0.0},
    };
    for (const auto& f : forms) {
        for (const auto& pt : sample_points(*f.g.chart, 10, 42)) {
            const TensorValue ric = ricci(f.g, pt);
            const MetricAt ma = metric_at(f.g, pt);
            const int n = static_cast<int>(ma.g.rows());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (std::abs(ric.at(i, j) - f.einstein * ma.g(i, j)) > 1e-9)
                        return "space form Ricci off by more than 1e-9";
        }
    }
    return {};
}

// ------------------------------------------------------------- criterion 9

std::string criterion_suite_determinism(const std::string& cli) {
    if (cli.empty()) return "CLI path not passed as argv[1]";
    const auto run = [&cli](const std::string& out) -> std::string {
        const std::string cmd =
            "\"" + cli + "\" suite --format json --seed 42 --output " + out;
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = std::system(cmd.c_str());
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) != 0)
            return "suite run failed with status " + std::to_string(rc);
        if (secs > 60.0) return "suite run took " + num(secs) + "s";
        return {};
    };
    if (std::string err = run("acceptance_suite_1.json"); !err.empty()) return err;
    if (std::string err = run("acceptance_suite_2.json"); !err.empty()) return err;

    const auto slurp = [](const char* path) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    };
    const std::string a = slurp("acceptance_suite_1.json");
    const std::string b = slurp("acceptance_suite_2.json");
    if (a.empty()) return "suite produced no output";
    if (a != b) return "suite JSON differs between runs";
    return {};
}

int g_failures = 0;

void report(int k, const char* what, const std::string& err) {
    if (err.empty()) {
        std::printf("criterion %d: PASS  %s\n", k, what);
    } else {
        std::printf("criterion %d: FAIL  %s: %s\n", k, what, err.c_str());
        ++g_failures;
    }
}

template <typename F>
void run_criterion(int k, const char* what, F&& f) {
    std::string err;
    try {
        err = f();
    } catch (const std::exception& ex) {
        err = std::string("exception: ") + ex.what();
    }
    report(k, what, err);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    run_criterion(1, "defining system and mu on the example family", criterion_system_and_mu);
    run_criterion(2, "example scalar curvature matches its spectrum row",
                  criterion_scalar_curvature_row);
    run_criterion(3, "identity suite passes everywhere, fails under wrong lambda",
                  criterion_identity_suite);
    run_criterion(4, "coupling-tensor norm matches its closed form along the axis",
                  criterion_t_norm_closed_form);
    run_criterion(5, "spectrum endpoint rows are exact rationals",
                  criterion_spectrum_endpoints);
    run_criterion(6, "T-flat dichotomy separates product families from the rigid example",
                  criterion_t_flat_dichotomy);
    run_criterion(7, "3D geometries get distinct labels and eigenvalue relations hold",
                  criterion_3d_classifier);
    run_criterion(8, "curvature kernel matches oracles, Bianchi and space forms",
                  criterion_curvature_oracles);
    run_criterion(9, "suite JSON is byte-identical across two runs",
                  [&cli] { return criterion_suite_determinism(cli); });
    return g_failures;
}
