#include "qemlab/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "qemlab/errors.hpp"

namespace qemlab {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// eigenvalues of g^{-1} S ascending, grouped into multiplicities
std::vector<RicEigenvalue> grouped_eigenvalues(const Eigen::MatrixXd& s,
                                               const Eigen::MatrixXd& g,
                                               double gap_rel) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, g);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigenvalue decomposition failed");
    const Eigen::VectorXd vals = solver.eigenvalues();
    std::vector<RicEigenvalue> groups;
    for (int i = 0; i < vals.size(); ++i) {
        const double v = vals(i);
        if (!groups.empty() &&
            v - groups.back().value <= gap_rel * (1.0 + std::abs(v))) {
            ++groups.back().multiplicity;
        } else {
            groups.push_back({v, 1});
        }
    }
    return groups;
}

} // namespace

Rational make_rational(long long num, long long den) {
    if (den == 0) throw ParamError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
    return {num, den};
}

Rational rational_from_string(const std::string& text) {
    const auto bad = [&text] {
        return ParamError("cannot parse rational from \"" + text + "\"");
    };
    if (text.empty()) throw bad();

    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::size_t a = 0, b = 0;
            const long long num = std::stoll(text.substr(0, slash), &a);
            const long long den = std::stoll(text.substr(slash + 1), &b);
            if (a != slash || b != text.size() - slash - 1) throw bad();
            return make_rational(num, den);
        }
        const auto dot = text.find('.');
        if (dot == std::string::npos) {
            std::size_t a = 0;
            const long long num = std::stoll(text, &a);
            if (a != text.size()) throw bad();
            return {num, 1};
        }
        const std::string frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 15) throw bad();
        std::size_t a = 0, b = 0;
        const std::string whole = text.substr(0, dot);
        long long ip = whole.empty() || whole == "-" ? 0 : std::stoll(whole, &a);
        if (!(whole.empty() || whole == "-") && a != whole.size()) throw bad();
        const long long fp = std::stoll(frac, &b);
        if (b != frac.size() || fp < 0) throw bad();
        long long den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const bool neg = !whole.empty() && whole[0] == '-';
        if (neg) ip = -ip;
        long long num = ip * den + fp;
        if (neg) num = -num;
        return make_rational(num, den);
    } catch (const std::invalid_argument&) {
        throw bad();
    } catch (const std::out_of_range&) {
        throw bad();
    }
}

double rational_value(const Rational& r) {
    return static_cast<double>(r.num) / static_cast<double>(r.den);
}

SpectrumTable admissible_spectrum(int n, const Rational& m, double lambda) {
    if (n < 2) throw ParamError("spectrum requires n >= 2");
    if (!(rational_value(m) > 1.0)) throw ParamError("spectrum requires m > 1");
    if (!(lambda < 0.0)) throw ParamError("spectrum requires lambda < 0");

    const Rational mr = make_rational(m.num, m.den);
    const long long a = mr.num, b = mr.den;
    SpectrumTable table;
    table.n = n;
    table.m = mr;
    table.lambda = lambda;
    table.rows.reserve(static_cast<std::size_t>(n) + 1);
    for (int kappa = 0; kappa <= n; ++kappa) {
        // coefficient of lambda with m = a/b cleared of denominators
        const long long num = kappa * (a - n * b) + static_cast<long long>(n) * (n - 1) * b;
        const long long den = a + static_cast<long long>(n - kappa - 1) * b;
        if (den == 0) throw ParamError("degenerate denominator at kappa = " +
                                       std::to_string(kappa));
        const Rational c = make_rational(num, den);
        table.rows.push_back(
            {kappa, c.num, c.den,
             static_cast<double>(c.num) * lambda / static_cast<double>(c.den)});
    }
    return table;
}

double spectrum_row_value(int n, double m, double lambda, int kappa) {
    return (kappa * (m - n) + n * (n - 1.0)) * lambda / (m + n - kappa - 1.0);
}

const char* branch_name(TBranch b) {
    switch (b) {
    case TBranch::Einstein: return "Einstein-branch";
    case TBranch::Product: return "(n-1)lambda-branch";
    default: return "neither";
    }
}

TFlatResult t_flat_test(const QEStructure& qe, const PointList& pts,
                        const ClassifyOptions& opt) {
    const int n = qe.dim();
    if (n < 3) throw DimensionError("T-flat test needs dimension >= 3");
    if (pts.empty()) throw ParamError("T-flat test needs at least one point");

    TFlatResult res;
    const double m = qe.m, lam = qe.lambda;
    res.einstein_branch_r = n * (n - 1.0) * lam / (m + n - 1.0);
    res.product_branch_r = (n - 1.0) * lam;

    double r_min = 0.0, r_max = 0.0;
    bool first = true;
    for (const auto& pt : pts) {
        const CurvatureJets c = curvature_jets(qe.g, pt, 1);
        const Jet uj = evaluate_jet(qe.u, pt, 1);
        const double R = c.R();

        Eigen::VectorXd du(n);
        for (int i = 0; i < n; ++i) du(i) = uj.d1(i);
        const Eigen::VectorXd du_up = c.ginv * du;
        const double grad_sq = du.dot(du_up);

        Eigen::MatrixXd ric(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ric(i, j) = c.Ric(i, j).value();
        const double ric_sq = (c.ginv * ric * c.ginv * ric).trace();

        const double t_sq = norm_sq(t_tensor(qe, c, uj), c.g, c.ginv);
        res.t_norm_sq_max =
            std::max(res.t_norm_sq_max, t_sq / (1.0 + ric_sq * grad_sq));

        if (first) {
            r_min = r_max = R;
            res.r_measured = R;
            res.distinct_ric_eigenvalues = 0;
            const auto groups = grouped_eigenvalues(ric, c.g, opt.eigen_gap_rel);
            res.distinct_ric_eigenvalues = static_cast<int>(groups.size());
            for (const auto& grp : groups)
                res.dominant_multiplicity =
                    std::max(res.dominant_multiplicity, grp.multiplicity);
            first = false;
        } else {
            r_min = std::min(r_min, R);
            r_max = std::max(r_max, R);
        }
    }
    if (r_max - r_min > opt.constant_r_spread)
        throw ParamError("T-flat test requires constant scalar curvature (spread " +
                         fmt(r_max - r_min) + ")");

    const auto matches = [&](double target) {
        return std::abs(res.r_measured - target) <=
               opt.kappa_rel_tol * (1.0 + std::abs(target));
    };
    res.is_t_flat = res.t_norm_sq_max <= opt.t_flat_tol;
    if (matches(res.einstein_branch_r))
        res.which_branch = TBranch::Einstein;
    else if (matches(res.product_branch_r))
        res.which_branch = TBranch::Product;
    else
        res.which_branch = TBranch::Neither;

    const bool on_branch = res.which_branch != TBranch::Neither;
    if (res.is_t_flat != on_branch)
        throw InconsistencyError(
            std::string("|T|^2 decision disagrees with the curvature level: "
                        "normalized |T|^2 = ") +
            fmt(res.t_norm_sq_max) + ", R = " + fmt(res.r_measured) +
            ", admissible levels " + fmt(res.einstein_branch_r) + " and " +
            fmt(res.product_branch_r));

    // a vanishing T forces at most two distinct Ricci eigenvalues, the
    // dominant one of multiplicity >= n-1
    res.eigen_structure_consistent =
        !res.is_t_flat || (res.distinct_ric_eigenvalues <= 2 &&
                           res.dominant_multiplicity >= n - 1);
    if (!res.eigen_structure_consistent)
        res.note = "T vanishes but the Ricci eigenvalue pattern does not match "
                   "the two-eigenvalue structure";
    return res;
}

Eigenstructure3D eigenstructure_3d(const QEStructure& qe,
                                   std::span<const double> point) {
    const int n = qe.dim();
    if (n != 3) throw DimensionError("eigenstructure analysis is specific to dimension 3");

    Eigenstructure3D out;
    const CurvatureJets c = curvature_jets(qe.g, point, 1);
    const Jet uj = evaluate_jet(qe.u, point, 1);
    const double R = c.R();
    const double m = qe.m, lam = qe.lambda;

    Eigen::VectorXd du(n), dR(n);
    for (int i = 0; i < n; ++i) {
        du(i) = uj.d1(i);
        dR(i) = c.scal.d1(i);
    }
    const Eigen::VectorXd du_up = c.ginv * du;
    const double grad_norm = std::sqrt(du.dot(du_up));
    if (grad_norm <= 1e-8)
        throw ParamError("eigenstructure analysis needs |grad u| > 1e-8 at the point");

    const double grad_r = std::sqrt(dR.dot(c.ginv * dR));
    if (grad_r / (1.0 + std::abs(R)) > 1e-6) {
        out.status = CheckStatus::NotApplicable;
        out.note = "scalar curvature is not constant at this point";
        return out;
    }

    out.rho = qe.rho(R);
    Eigen::MatrixXd ric(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ric(i, j) = c.Ric(i, j).value();
    const Eigen::MatrixXd P = ric - out.rho * c.g;

    // g-orthonormal frame led by -grad u/|grad u|
    std::vector<Eigen::VectorXd> frame;
    frame.push_back(-du_up / grad_norm);
    for (int k = 0; k < n && frame.size() < 3; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v(k) = 1.0;
        for (const auto& e : frame) v -= e.dot(c.g * v) * e;
        const double len = std::sqrt(v.dot(c.g * v));
        if (len > 1e-6) frame.push_back(v / len);
    }
    if (frame.size() != 3)
        throw NumericError("failed to complete an orthonormal frame");

    const Eigen::VectorXd p_rad = P * frame[0];
    out.radial_norm = std::sqrt(p_rad.dot(c.ginv * p_rad));

    const double b00 = frame[1].dot(P * frame[1]);
    const double b01 = frame[1].dot(P * frame[2]);
    const double b11 = frame[2].dot(P * frame[2]);
    const double mid = 0.5 * (b00 + b11);
    const double disc = std::sqrt(0.25 * (b00 - b11) * (b00 - b11) + b01 * b01);
    out.mu2 = mid - disc;
    out.mu3 = mid + disc;

    const double s = 2.0 * lam - (m + 2.0) * out.rho;
    const double alpha = s * (lam - (m + 1.0) * out.rho);
    const double lhs = 2.0 * out.mu2 * out.mu3;
    out.product_residual =
        std::abs(lhs - alpha) / (1.0 + std::max(std::abs(lhs), std::abs(alpha)));
    const double poly = 2.0 * out.mu3 * out.mu3 + alpha - 2.0 * out.mu3 * s;
    out.poly_residual =
        std::abs(poly) / (1.0 + std::abs(2.0 * out.mu3 * out.mu3) + std::abs(alpha));

    if (std::abs(out.mu2 * out.mu3) <= 1e-9 * (1.0 + out.mu3 * out.mu3))
        out.note = "eigenvalue product vanishes: parallel Ricci branch, the "
                   "coupling tensor must vanish";
    return out;
}

namespace {

std::string einstein_family_label(int n, int mu_sign) {
    if (mu_sign < 0) return n == 3 ? "ThmA(i)" : "ThmB(iv)";
    if (mu_sign == 0) return n == 3 ? "ThmA(iv)" : "ThmB(vi)";
    return n == 3 ? "ThmA(ii)" : "ThmB(v)";
}

std::string product_family_label(int n, int mu_sign) {
    if (mu_sign < 0) return n == 3 ? "ThmA(v)" : "ThmB(vii)";
    if (mu_sign == 0) return "ThmB(viii)";
    return n == 3 ? "ThmA(iii)" : "ThmB(ix)";
}

} // namespace

ClassificationReport classify(const QEStructure& qe, const PointList& pts,
                              const ClassifyOptions& opt) {
    if (pts.empty()) throw ParamError("classification needs at least one point");

    ClassificationReport rep;
    const int n = qe.dim();
    rep.n = n;
    rep.m = qe.m;
    rep.lambda = qe.lambda;
    rep.points_used = static_cast<int>(pts.size());
    rep.assumptions = {
        "the sampled chart is assumed to come from a complete simply connected "
        "manifold; neither hypothesis is checkable from samples",
    };

    double r_min = 0.0, r_max = 0.0, r_sum = 0.0;
    double mu_min = 0.0, mu_max = 0.0, mu_sum = 0.0;
    bool first = true;
    for (const auto& pt : pts) {
        const CurvatureJets c = curvature_jets(qe.g, pt, 0);
        const Jet uj = evaluate_jet(qe.u, pt, 2);
        const double R = c.R();
        const double u = uj.value();

        Eigen::VectorXd du(n);
        for (int i = 0; i < n; ++i) du(i) = uj.d1(i);
        const Eigen::VectorXd du_up = c.ginv * du;
        const double grad_sq = du.dot(du_up);
        const double mu =
            u * laplacian_from(c, uj) + (qe.m - 1.0) * grad_sq + qe.lambda * u * u;

        Eigen::MatrixXd ric(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ric(i, j) = c.Ric(i, j).value();
        const Eigen::MatrixXd ric0 = ric - (R / n) * c.g;
        const double dev =
            (c.ginv * ric0 * c.ginv * ric0).trace() / (1.0 + R * R);
        rep.einstein_deviation = std::max(rep.einstein_deviation, dev);

        r_sum += R;
        mu_sum += mu;
        if (first) {
            r_min = r_max = R;
            mu_min = mu_max = mu;
            rep.ric_spectrum = grouped_eigenvalues(ric, c.g, opt.eigen_gap_rel);
            if (grad_sq > 1e-16)
                rep.radial_ric_eigenvalue = du_up.dot(ric * du_up) / grad_sq;
            first = false;
        } else {
            r_min = std::min(r_min, R);
            r_max = std::max(r_max, R);
            mu_min = std::min(mu_min, mu);
            mu_max = std::max(mu_max, mu);
        }
    }
    const double count = static_cast<double>(pts.size());
    rep.r_mean = r_sum / count;
    rep.r_spread = r_max - r_min;
    rep.mu_mean = mu_sum / count;
    rep.mu_spread = mu_max - mu_min;
    rep.constant_r = rep.r_spread <= opt.constant_r_spread;
    rep.einstein = rep.einstein_deviation <= opt.einstein_tol;

    const double mu_scale = 1.0 + std::abs(qe.lambda) + std::abs(rep.r_mean);
    if (std::abs(rep.mu_mean) <= opt.mu_zero_tol * mu_scale)
        rep.mu_sign = 0;
    else
        rep.mu_sign = rep.mu_mean > 0.0 ? 1 : -1;

    if (!rep.constant_r) {
        rep.matched_case = "NonConstantR";
        rep.diagnostics.push_back("scalar curvature spread " + fmt(rep.r_spread) +
                                  " exceeds " + fmt(opt.constant_r_spread) +
                                  "; no constant-curvature case applies");
        return rep;
    }

    if (qe.lambda < 0.0) {
        int best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int kappa = 0; kappa <= n; ++kappa) {
            const double row = spectrum_row_value(n, qe.m, qe.lambda, kappa);
            const double dist =
                std::abs(rep.r_mean - row) / (1.0 + std::abs(row));
            if (dist < best_dist) {
                best_dist = dist;
                best = kappa;
            }
        }
        if (best_dist <= opt.kappa_rel_tol)
            rep.kappa = best;
        else
            rep.diagnostics.push_back(
                "nearest admissible curvature row is kappa = " + std::to_string(best) +
                " at R = " + fmt(spectrum_row_value(n, qe.m, qe.lambda, best)) +
                ", relative distance " + fmt(best_dist));
    }

    if (n >= 3) rep.t_flat = t_flat_test(qe, pts, opt);

    const auto no_match = [&] {
        rep.matched_case = "no match";
        rep.diagnostics.push_back(
            "einstein deviation " + fmt(rep.einstein_deviation) + " (threshold " +
            fmt(opt.einstein_tol) + "), mu = " + fmt(rep.mu_mean) + ", R = " +
            fmt(rep.r_mean));
        if (rep.t_flat)
            rep.diagnostics.push_back(
                std::string("coupling tensor: normalized |T|^2 = ") +
                fmt(rep.t_flat->t_norm_sq_max) + ", curvature level " +
                branch_name(rep.t_flat->which_branch));
        if (qe.lambda < 0.0 && rep.kappa && *rep.kappa >= 1 && *rep.kappa <= n - 2) {
            rep.rigid_hint = rep.mu_sign < 0   ? "rigid(f)"
                             : rep.mu_sign == 0 ? "rigid(e)"
                                                : "rigid(d)";
            rep.diagnostics.push_back(
                "invariants fit a rigid two-block structure: a kappa = " +
                std::to_string(*rep.kappa) +
                " dimensional Einstein factor against a warped complement (" +
                rep.rigid_hint + ")");
        }
    };

    if (n == 2) {
        // surfaces are pointwise Einstein; the potential decides the case
        if (qe.lambda == 0.0 && std::abs(rep.r_mean) <= opt.kappa_rel_tol &&
            rep.mu_sign > 0)
            rep.matched_case = "2D(i)";
        else if (qe.lambda < 0.0 && rep.kappa == 0) {
            rep.matched_case = rep.mu_sign > 0    ? "2D(ii)"
                               : rep.mu_sign == 0 ? "2D(iii)"
                                                  : "2D(iv)";
        } else {
            no_match();
        }
        return rep;
    }

    if (qe.lambda == 0.0) {
        if (rep.einstein && std::abs(rep.r_mean) <= opt.kappa_rel_tol &&
            rep.mu_sign > 0)
            rep.matched_case = n == 3 ? "ThmA(vi)" : "ThmB(iii)";
        else
            no_match();
        return rep;
    }

    const TBranch branch = rep.t_flat->which_branch;
    if (qe.lambda > 0.0) {
        if (rep.einstein && branch == TBranch::Einstein && rep.mu_sign > 0)
            rep.matched_case = "ThmB(i)";
        else if (!rep.einstein && branch == TBranch::Product && rep.mu_sign > 0)
            rep.matched_case = "ThmB(ii)";
        else
            no_match();
        return rep;
    }

    if (rep.einstein && branch == TBranch::Einstein)
        rep.matched_case = einstein_family_label(n, rep.mu_sign);
    else if (!rep.einstein && branch == TBranch::Product)
        rep.matched_case = product_family_label(n, rep.mu_sign);
    else
        no_match();
    return rep;
}

} // namespace qemlab
