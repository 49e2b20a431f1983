#pragma once

#include <string>
#include <vector>

#include "qemlab/conformal.hpp"

namespace qemlab {

// Outcome of checking one pointwise identity over a sample.
//
// Residuals are normalized per point by (1 + max term magnitude), so pass
// thresholds are scale-free.  Identities that require hypotheses the input
// does not satisfy (constant scalar curvature, dimension >= 3) are reported
// as NotApplicable with a note instead of a fake pass.
enum class CheckStatus { Checked, NotApplicable };

struct IdentityReport {
    std::string identity_id;
    int points_checked = 0;
    double max_residual = 0.0;
    double tolerance = 1e-7;
    bool pass = true;
    CheckStatus status = CheckStatus::Checked;
    std::string note;
};

struct VerifyOptions {
    double tolerance = 1e-7;
    // Points with u below this are excluded from identities that divide by u
    // (the boundary of a structure has u = 0).
    double u_floor = 1e-8;
    // Sampled scalar curvature spread below which R counts as constant.
    double constant_r_spread = 1e-8;
};

// Coefficients of |grad u|^2 = b(u) = c0 + c2 u^2 and of the isoparametric
// companion lap u = a1 * u, valid once R is constant:
//   c0 = mu/(m-1),  c2 = -alpha,  alpha = (R+(m-n)lambda)/(m(m-1)),
//   a1 = (R - n lambda)/m.
struct TransnormalData {
    double c0 = 0.0;
    double c2 = 0.0;
    double alpha = 0.0;
    double a1 = 0.0;
};

TransnormalData transnormal_data(const QEStructure& qe, double scalar_curv, double mu);

// Constants measured from the sample (order-0 passes only).
struct MeasuredConstants {
    double mu_mean = 0.0;
    double mu_spread = 0.0;
    double r_mean = 0.0;
    double r_spread = 0.0;
};

using PointList = std::vector<std::vector<double>>;

MeasuredConstants measure_constants(const QEStructure& qe, const PointList& pts);

// --- identity checks -------------------------------------------------------
//
// Identity ids, grouped as the checks below report them:
//   system, trace, mu-constant
//   curvature-gradient, curvature-laplacian
//   radial-ricci, radial-ricci-traceless, traceless-norm, transnormal
//   p-gradient, p-trace-laplacian, p-skew-derivative, q-contraction,
//   p-derivative-square
//   coupling-decomposition, coupling-dt, coupling-contraction, tflat-balance

IdentityReport check_qe_system(const QEStructure& qe, const PointList& pts,
                               const VerifyOptions& opt = {});
IdentityReport check_trace(const QEStructure& qe, const PointList& pts,
                           const VerifyOptions& opt = {});
IdentityReport check_mu_constant(const QEStructure& qe, const PointList& pts,
                                 const VerifyOptions& opt = {});
std::vector<IdentityReport> check_propA(const QEStructure& qe, const PointList& pts,
                                        const VerifyOptions& opt = {});
std::vector<IdentityReport> check_constantR_identities(const QEStructure& qe,
                                                       const PointList& pts,
                                                       const VerifyOptions& opt = {});
std::vector<IdentityReport> check_lemma_aux(const QEStructure& qe, const PointList& pts,
                                            const VerifyOptions& opt = {});
std::vector<IdentityReport> check_lem1_and_tric(const QEStructure& qe,
                                                const PointList& pts,
                                                const VerifyOptions& opt = {});

// Every check above, in registry order.
std::vector<IdentityReport> verify_all(const QEStructure& qe, const PointList& pts,
                                       const VerifyOptions& opt = {});

} // namespace qemlab
