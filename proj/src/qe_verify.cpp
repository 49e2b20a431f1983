#include "qemlab/qe_verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "qemlab/errors.hpp"

namespace qemlab {

namespace {

enum IdentityIndex : int {
    kSystem = 0,
    kTrace,
    kMuConstant,
    kCurvGradient,
    kCurvLaplacian,
    kRadialRicci,
    kRadialRicciTraceless,
    kTracelessNorm,
    kTransnormal,
    kPGradient,
    kPTraceLaplacian,
    kPSkewDerivative,
    kQContraction,
    kPDerivativeSquare,
    kCouplingDecomposition,
    kCouplingDT,
    kCouplingContraction,
    kTFlatBalance,
    kIdCount,
};

constexpr std::array<const char*, kIdCount> kIdNames = {
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

// Identities that only make sense once R is constant across the sample.
constexpr std::array<int, 8> kNeedsConstantR = {
    kRadialRicci,      kRadialRicciTraceless, kTracelessNorm,      kTransnormal,
    kQContraction,     kPDerivativeSquare,    kCouplingContraction, kTFlatBalance};

constexpr std::array<int, 4> kNeedsDim3 = {kCouplingDecomposition, kCouplingDT,
                                           kCouplingContraction, kTFlatBalance};

// m = 1 degenerates every formula that divides by m - 1.
constexpr std::array<int, 12> kNeedsM = {
    kMuConstant,       kRadialRicci,        kRadialRicciTraceless,
    kTracelessNorm,    kTransnormal,        kPGradient,
    kPTraceLaplacian,  kPSkewDerivative,    kQContraction,
    kPDerivativeSquare, kCouplingContraction, kTFlatBalance};

struct PointOutcome {
    std::array<double, kIdCount> diff{};
    std::array<double, kIdCount> scale{};
    std::array<bool, kIdCount> used{};
    double u = 0.0;
    double grad_sq = 0.0;
    double r = 0.0;
    double mu = 0.0;
};

// All per-point identity residuals from one shared jet-order-2 pass.
PointOutcome evaluate_point(const QEStructure& qe, std::span<const double> pt,
                            const VerifyOptions& opt) {
    PointOutcome o{};
    const int n = qe.dim();
    const double m = qe.m, lam = qe.lambda;
    const bool m_ok = m > 1.0;

    const CurvatureJets c = curvature_jets(qe.g, pt, 2);
    const Jet uj = evaluate_jet(qe.u, pt, 2);
    const double u = uj.value();
    const double R = c.R();

    Eigen::VectorXd du(n), dR(n);
    for (int i = 0; i < n; ++i) {
        du(i) = uj.d1(i);
        dR(i) = c.scal.d1(i);
    }
    const Eigen::VectorXd du_up = c.ginv * du;
    const double grad_sq = du.dot(du_up);

    Eigen::MatrixXd ric(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ric(i, j) = c.Ric(i, j).value();
    const Eigen::MatrixXd& g = c.g;
    const Eigen::MatrixXd ric0 = ric - (R / n) * g;

    const TensorValue hu = hessian_from(c, uj);
    const double lap_u = laplacian_from(c, uj);
    const double lap_R = laplacian_from(c, c.scal);

    o.u = u;
    o.grad_sq = grad_sq;
    o.r = R;
    o.mu = u * lap_u + (m - 1.0) * grad_sq + lam * u * u;

    const auto set = [&o](int id, double diff, double scale) {
        o.diff[id] = diff;
        o.scale[id] = scale;
        o.used[id] = true;
    };

    // hess u = (u/m)(Ric - lambda g) and its trace
    {
        double d = 0.0, s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double lhs = hu.at(i, j);
                const double rhs = u / m * (ric(i, j) - lam * g(i, j));
                d = std::max(d, std::abs(lhs - rhs));
                s = std::max({s, std::abs(lhs), std::abs(rhs)});
            }
        set(kSystem, d, s);

        const double lhs = lap_u;
        const double rhs = u / m * (R - lam * n);
        set(kTrace, std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));
    }

    // (1/2) u grad R + (m-1) Ric(grad u) + (R - (n-1) lambda) grad u = 0
    {
        const Eigen::VectorXd ric_du = ric * du_up;
        double d = 0.0, s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t1 = 0.5 * u * dR(i);
            const double t2 = (m - 1.0) * ric_du(i);
            const double t3 = (R - (n - 1.0) * lam) * du(i);
            d = std::max(d, std::abs(t1 + t2 + t3));
            s = std::max({s, std::abs(t1), std::abs(t2), std::abs(t3)});
        }
        set(kCurvGradient, d, s);
    }

    const double tr0_sq = (c.ginv * ric0 * c.ginv * ric0).trace();

    // (1/2) lap R + (m+2)/(2u) <grad u, grad R> = -(m-1)/m |Ric0|^2 - ...
    if (u >= opt.u_floor) {
        const double t1 = 0.5 * lap_R;
        const double t2 = (m + 2.0) / (2.0 * u) * du_up.dot(dR);
        const double rhs = -(m - 1.0) / m * tr0_sq -
                           (n + m - 1.0) / (n * m) * (R - n * lam) *
                               (R - n * (n - 1.0) * lam / (n + m - 1.0));
        set(kCurvLaplacian, std::abs(t1 + t2 - rhs),
            std::max({std::abs(t1), std::abs(t2), std::abs(rhs)}));
    }

    double rho = 0.0;
    Eigen::MatrixXd P;
    if (m_ok) {
        rho = ((n - 1.0) * lam - R) / (m - 1.0);
        P = ric - rho * g;
    }

    // constant-R consequences: Ric(grad u) = rho grad u and friends
    if (m_ok) {
        const Eigen::VectorXd ric_du = ric * du_up;
        double d = 0.0, s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double lhs = ric_du(i);
            const double rhs = rho * du(i);
            d = std::max(d, std::abs(lhs - rhs));
            s = std::max({s, std::abs(lhs), std::abs(rhs)});
        }
        set(kRadialRicci, d, s);

        const Eigen::VectorXd tr0_du = ric0 * du_up;
        const double coef = (n * (n - 1.0) * lam - (m + n - 1.0) * R) / (n * (m - 1.0));
        d = 0.0;
        s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double lhs = tr0_du(i);
            const double rhs = coef * du(i);
            d = std::max(d, std::abs(lhs - rhs));
            s = std::max({s, std::abs(lhs), std::abs(rhs)});
        }
        set(kRadialRicciTraceless, d, s);

        const double rhs = (R - n * lam) *
                           (n * (n - 1.0) * lam - (m + n - 1.0) * R) / (n * (m - 1.0));
        set(kTracelessNorm, std::abs(tr0_sq - rhs),
            std::max(std::abs(tr0_sq), std::abs(rhs)));
    }

    // P identities
    if (m_ok) {
        const Eigen::VectorXd p_du = P * du_up;

        double d = 0.0, s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double lhs = p_du(i);
            const double rhs = -u * dR(i) / (2.0 * (m - 1.0));
            d = std::max(d, std::abs(lhs - rhs));
            s = std::max({s, std::abs(lhs), std::abs(rhs)});
        }
        set(kPGradient, d, s);

        const Eigen::MatrixXd pmix = c.ginv * P;
        const double lhs = 0.5 * (u * lap_R + (m + 2.0) * du_up.dot(dR));
        const double rhs =
            (m - 1.0) / m * ((lam - rho) * pmix.trace() - (pmix * pmix).trace());
        set(kPTraceLaplacian, std::abs(lhs - rhs),
            std::max(std::abs(lhs), std::abs(rhs)));
    }

    if (m_ok) {
        // jet-valued P, its covariant derivative, Q and the Kulkarni-Nomizu
        // block: the skew derivative identity and its constant-R corollaries
        const Jet rho_jet = (((n - 1.0) * lam) - c.scal) * (1.0 / (m - 1.0));
        std::vector<Jet> pj;
        pj.reserve(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                pj.push_back(c.Ric(i, j) - rho_jet * c.mj.gc(i, j));
        const TensorValue dP = covariant_derivative_rank2(c, pj);
        const TensorValue dRic = covariant_derivative_rank2(c, c.ric);
        const TensorValue Q = q_tensor(qe, c);
        const TensorValue gv = metric_values(c);
        const TensorValue gg = kulkarni_nomizu(gv, gv);
        const Eigen::VectorXd p_du_up = c.ginv * (P * du_up);

        double d = 0.0, s = 0.0;
        double d4 = 0.0, s4 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double q_du = 0.0, gg_pdu = 0.0;
                    for (int l = 0; l < n; ++l) {
                        q_du += Q.at(i, j, k, l) * du_up(l);
                        gg_pdu += gg.at(i, j, k, l) * p_du_up(l);
                    }
                    const double lhs = u * (dP.at(i, j, k) - dP.at(j, i, k));
                    const double rhs = m * q_du + 0.5 * gg_pdu;
                    d = std::max(d, std::abs(lhs - rhs));
                    s = std::max({s, std::abs(lhs), std::abs(rhs)});

                    const double rhs4 = u / m * (dRic.at(i, j, k) - dRic.at(j, i, k));
                    d4 = std::max(d4, std::abs(q_du - rhs4));
                    s4 = std::max({s4, std::abs(q_du), std::abs(rhs4)});
                }
        set(kPSkewDerivative, d, s);
        set(kQContraction, d4, s4);

        const Eigen::MatrixXd pp = P * c.ginv * P;
        d = 0.0;
        s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double lhs = 0.0;
                for (int l = 0; l < n; ++l) lhs += dP.at(l, i, j) * du_up(l);
                lhs *= u / m;
                double q_uu = 0.0;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        q_uu += Q.at(k, i, j, l) * du_up(k) * du_up(l);
                const double rhs =
                    (u / m) * (u / m) * (-(lam - rho) * P(i, j) + pp(i, j)) + q_uu;
                d = std::max(d, std::abs(lhs - rhs));
                s = std::max({s, std::abs(lhs), std::abs(rhs)});
            }
        set(kPDerivativeSquare, d, s);
    }

    // coupling 3-tensor identities need dimension >= 3
    if (n >= 3) {
        const TensorValue T = t_tensor(qe, c, uj);
        const TensorValue W = weyl(c);
        const TensorValue Ct = cotton(c);

        double d = 0.0, s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double w_du = 0.0;
                    for (int l = 0; l < n; ++l) w_du += W.at(i, j, k, l) * du_up(l);
                    const double lhs = u * Ct.at(i, j, k);
                    const double rhs = m * w_du + T.at(i, j, k);
                    d = std::max(d, std::abs(lhs - rhs));
                    s = std::max({s, std::abs(lhs), std::abs(rhs)});
                }
        set(kCouplingDecomposition, d, s);

        if (u >= opt.u_floor) {
            const TensorValue D = d_tensor(qe, c, uj);
            const double coef = (m + n - 2.0) / m * u;
            d = 0.0;
            s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        const double lhs = T.at(i, j, k);
                        const double rhs = coef * D.at(i, j, k);
                        d = std::max(d, std::abs(lhs - rhs));
                        s = std::max({s, std::abs(lhs), std::abs(rhs)});
                    }
            set(kCouplingDT, d, s);
        }

        // traceless-Ricci contraction of T, three routes that must agree
        {
            const Eigen::MatrixXd tr0_up = c.ginv * ric0 * c.ginv;
            double a = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        a += tr0_up(i, k) * T.at(i, j, k) * du_up(j);

            const Eigen::VectorXd w = ric0 * du_up;
            const double w_sq = w.dot(c.ginv * w);
            const double quad = du_up.dot(ric0 * du_up);
            const double b = (m + n - 2.0) / (n - 2.0) * (tr0_sq * grad_sq - w_sq) +
                             (n * (n - 1.0) * lam - (m + n - 1.0) * R) /
                                 (n * (n - 1.0)) * quad -
                             m / (n - 2.0) * w_sq;
            const double t_sq = norm_sq(T, c.g, c.ginv);
            const double c2 = (n - 2.0) / (2.0 * (m + n - 2.0)) * t_sq;

            const double d3 = std::max({std::abs(a - b), std::abs(a - c2),
                                        std::abs(b - c2)});
            set(kCouplingContraction, d3,
                std::max({std::abs(a), std::abs(b), std::abs(c2)}));

            if (m_ok) {
                const double lhs = (n - 2.0) * (n - 2.0) /
                                   (2.0 * (m + n - 2.0) * (m + n - 2.0)) * t_sq;
                const double rhs = m / ((n - 1.0) * (m - 1.0) * (m - 1.0)) *
                                   (R - (n - 1.0) * lam) *
                                   (n * (n - 1.0) * lam - (m + n - 1.0) * R) * grad_sq;
                set(kTFlatBalance, std::abs(lhs - rhs),
                    std::max(std::abs(lhs), std::abs(rhs)));
            }
        }
    }

    return o;
}

std::vector<PointOutcome> map_points(const QEStructure& qe, const PointList& pts,
                                     const VerifyOptions& opt) {
    std::vector<PointOutcome> out(pts.size());
    if (pts.empty()) return out;
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pts.size()) return;
            out[i] = evaluate_point(qe, pts[i], opt);
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> helpers;
    for (unsigned t = 1; t < hw && t < pts.size(); ++t)
        helpers.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& h : helpers) h.get();
    return out;
}

std::vector<IdentityReport> run_all(const QEStructure& qe, const PointList& pts,
                                    const VerifyOptions& opt) {
    const std::vector<PointOutcome> outs = map_points(qe, pts, opt);

    std::vector<IdentityReport> reps(kIdCount);
    for (int id = 0; id < kIdCount; ++id) {
        reps[id].identity_id = kIdNames[id];
        reps[id].tolerance = opt.tolerance;
    }

    double r_min = std::numeric_limits<double>::infinity();
    double r_max = -r_min;
    for (const auto& o : outs) {
        r_min = std::min(r_min, o.r);
        r_max = std::max(r_max, o.r);
        for (int id = 0; id < kIdCount; ++id) {
            if (!o.used[id]) continue;
            ++reps[id].points_checked;
            reps[id].max_residual =
                std::max(reps[id].max_residual, o.diff[id] / (1.0 + o.scale[id]));
        }
    }
    const bool const_r = outs.empty() || (r_max - r_min) <= opt.constant_r_spread;
    const bool m_ok = qe.m > 1.0;

    // cross-point identities, folded against the first sampled point
    if (!outs.empty()) {
        const double mu0 = outs.front().mu;
        for (const auto& o : outs) {
            if (m_ok) {
                ++reps[kMuConstant].points_checked;
                reps[kMuConstant].max_residual = std::max(
                    reps[kMuConstant].max_residual,
                    std::abs(o.mu - mu0) /
                        (1.0 + std::max(std::abs(o.mu), std::abs(mu0))));
            }
            if (m_ok && const_r) {
                const TransnormalData tc = transnormal_data(qe, o.r, mu0);
                const double quad = tc.c2 * o.u * o.u;
                const double b = tc.c0 + quad;
                ++reps[kTransnormal].points_checked;
                reps[kTransnormal].max_residual =
                    std::max(reps[kTransnormal].max_residual,
                             std::abs(o.grad_sq - b) /
                                 (1.0 + std::max({std::abs(o.grad_sq),
                                                  std::abs(tc.c0), std::abs(quad)})));
            }
        }
    }

    const auto not_applicable = [&reps](int id, const std::string& why) {
        reps[id].status = CheckStatus::NotApplicable;
        reps[id].note = why;
        reps[id].points_checked = 0;
        reps[id].max_residual = 0.0;
    };
    if (!m_ok)
        for (int id : kNeedsM) not_applicable(id, "requires m > 1");
    if (qe.dim() < 3)
        for (int id : kNeedsDim3) not_applicable(id, "requires dimension >= 3");
    if (!const_r)
        for (int id : kNeedsConstantR)
            not_applicable(id, "scalar curvature varies across the sample");
    if (const_r && reps[kCurvLaplacian].status == CheckStatus::Checked)
        reps[kCurvLaplacian].note =
            "constant scalar curvature: left side vanishes, identity reduces to "
            "traceless-norm";
    if (!outs.empty())
        for (auto& rep : reps)
            if (rep.status == CheckStatus::Checked && rep.points_checked == 0)
                rep.note = "all sampled points fall below the potential floor";

    for (auto& rep : reps)
        rep.pass = rep.status == CheckStatus::NotApplicable ||
                   rep.max_residual <= rep.tolerance;
    return reps;
}

std::vector<IdentityReport> pick(std::vector<IdentityReport> all,
                                 std::initializer_list<int> ids) {
    std::vector<IdentityReport> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(std::move(all[id]));
    return out;
}

} // namespace

TransnormalData transnormal_data(const QEStructure& qe, double scalar_curv, double mu) {
    if (!(qe.m > 1.0)) throw ParamError("transnormal coefficients require m > 1");
    const int n = qe.dim();
    TransnormalData t;
    t.alpha = (scalar_curv + (qe.m - n) * qe.lambda) / (qe.m * (qe.m - 1.0));
    t.c2 = -t.alpha;
    t.c0 = mu / (qe.m - 1.0);
    t.a1 = (scalar_curv - n * qe.lambda) / qe.m;
    return t;
}

MeasuredConstants measure_constants(const QEStructure& qe, const PointList& pts) {
    MeasuredConstants mc;
    if (pts.empty()) return mc;
    double mu_lo = std::numeric_limits<double>::infinity(), mu_hi = -mu_lo;
    double r_lo = mu_lo, r_hi = -mu_lo;
    double mu_sum = 0.0, r_sum = 0.0;
    for (const auto& pt : pts) {
        const double r = scalar_curvature(qe.g, pt);
        const double mu = qe.mu_at(pt);
        mu_lo = std::min(mu_lo, mu);
        mu_hi = std::max(mu_hi, mu);
        r_lo = std::min(r_lo, r);
        r_hi = std::max(r_hi, r);
        mu_sum += mu;
        r_sum += r;
    }
    const double count = static_cast<double>(pts.size());
    mc.mu_mean = mu_sum / count;
    mc.mu_spread = mu_hi - mu_lo;
    mc.r_mean = r_sum / count;
    mc.r_spread = r_hi - r_lo;
    return mc;
}

IdentityReport check_qe_system(const QEStructure& qe, const PointList& pts,
                               const VerifyOptions& opt) {
    return pick(run_all(qe, pts, opt), {kSystem}).front();
}

IdentityReport check_trace(const QEStructure& qe, const PointList& pts,
                           const VerifyOptions& opt) {
    return pick(run_all(qe, pts, opt), {kTrace}).front();
}

IdentityReport check_mu_constant(const QEStructure& qe, const PointList& pts,
                                 const VerifyOptions& opt) {
    return pick(run_all(qe, pts, opt), {kMuConstant}).front();
}

std::vector<IdentityReport> check_propA(const QEStructure& qe, const PointList& pts,
                                        const VerifyOptions& opt) {
    return pick(run_all(qe, pts, opt), {kCurvGradient, kCurvLaplacian});
}

std::vector<IdentityReport> check_constantR_identities(const QEStructure& qe,
                                                       const PointList& pts,
                                                       const VerifyOptions& opt) {
    return pick(run_all(qe, pts, opt),
                {kRadialRicci, kRadialRicciTraceless, kTracelessNorm, kTransnormal});
}

std::vector<IdentityReport> check_lemma_aux(const QEStructure& qe, const PointList& pts,
                                            const VerifyOptions& opt) {
    return pick(run_all(qe, pts, opt), {kPGradient, kPTraceLaplacian, kPSkewDerivative,
                                        kQContraction, kPDerivativeSquare});
}

std::vector<IdentityReport> check_lem1_and_tric(const QEStructure& qe,
                                                const PointList& pts,
                                                const VerifyOptions& opt) {
    return pick(run_all(qe, pts, opt), {kCouplingDecomposition, kCouplingDT,
                                        kCouplingContraction, kTFlatBalance});
}

std::vector<IdentityReport> verify_all(const QEStructure& qe, const PointList& pts,
                                       const VerifyOptions& opt) {
    return run_all(qe, pts, opt);
}

} // namespace qemlab
