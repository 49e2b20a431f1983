#pragma once

#include <span>

#include "qemlab/chart.hpp"
#include "qemlab/curvature.hpp"
#include "qemlab/tensor.hpp"

namespace qemlab {

// A metric with a positive potential u and constants (m, lambda) coupled by
//   hess u = (u/m)(Ric - lambda g)
// on the chart interior.  Instances are plain data; nothing is validated at
// construction, the verification suite does that pointwise.
struct QEStructure {
    MetricField g;
    ScalarField u;
    double m = 2.0;
    double lambda = 0.0;

    int dim() const { return g.dim(); }

    // ((n-1) lambda - R)/(m-1); the eigenvalue shift that makes grad u an
    // eigenvector of Ric - rho g.  Requires m > 1.
    double rho(double scalar_curv) const;

    // lambda/(m+n-1), the curvature scale of the Einstein comparison space.
    double space_form_constant() const;

    // u*lap(u) + (m-1)|grad u|^2 + lambda u^2, recomputed from scratch at the
    // point.  Constant on any valid structure with m != 1.
    double mu_at(std::span<const double> point) const;
};

// --- conformal curvature pieces -----------------------------------------
//
// Each operation has a cheap overload on a precomputed CurvatureJets pass
// (for batch verification) and a convenience overload that runs the pass
// itself.  All returned components are fully covariant.

// A_ij = Ric_ij - R/(2(n-1)) g_ij.  Dimension >= 3.
TensorValue schouten(const CurvatureJets& c);
TensorValue schouten(const MetricField& g, std::span<const double> point);

// W_ijkl: Riemann minus its Ricci part, per the standard decomposition
//   Rm = W + 1/(n-2) (Ric ^ g terms) - R/((n-1)(n-2)) (g ^ g terms).
// Identically zero for n = 3 (numerically, not short-circuited).
TensorValue weyl(const CurvatureJets& c);
TensorValue weyl(const MetricField& g, std::span<const double> point);

// C_ijk = cov_i Ric_jk - cov_j Ric_ik - (dR_i g_jk - dR_j g_ik)/(2(n-1)).
// Needs a jet_order >= 1 pass.
TensorValue cotton(const CurvatureJets& c);
TensorValue cotton(const MetricField& g, std::span<const double> point);

// (divW)_ijk = g^{ls} cov_s W_ijkl, the divergence in the last slot.  For
// n >= 4 this matches -(n-3)/(n-2) * cotton.  Needs jet_order >= 1.
TensorValue weyl_divergence(const CurvatureJets& c);
TensorValue weyl_divergence(const MetricField& g, std::span<const double> point);

// Kulkarni-Nomizu product of two symmetric covariant 2-tensors:
//   (a ^ b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il.
// Algebraic curvature symmetries hold exactly by construction.
TensorValue kulkarni_nomizu(const TensorValue& a, const TensorValue& b);

// Ric - (R/n) g.
TensorValue traceless_ricci(const CurvatureJets& c);
TensorValue traceless_ricci(const MetricField& g, std::span<const double> point);

// The 3-tensor coupling Cotton and Weyl on a quasi-Einstein structure:
//   u C_ijk = m W_ijkl du^l + T_ijk
// assembled directly from its closed form (Ricci, du, dR and metric terms).
// `u_jet` must be evaluated at c's point with order >= 1; the pass needs
// jet_order >= 1 for the dR term.
TensorValue t_tensor(const QEStructure& qe, const CurvatureJets& c, const Jet& u_jet);
TensorValue t_tensor(const QEStructure& qe, std::span<const double> point);

// Cao-Chen style 3-tensor in terms of f with grad f = -m grad u / u; related
// to t_tensor by T = ((m+n-2)/m) u D.  Requires u > 0 at the point.
TensorValue d_tensor(const QEStructure& qe, const CurvatureJets& c, const Jet& u_jet);
TensorValue d_tensor(const QEStructure& qe, std::span<const double> point);

// P = Ric - rho(R) g, with rho as in QEStructure::rho.  Requires m > 1.
TensorValue p_tensor(const QEStructure& qe, const CurvatureJets& c);
TensorValue p_tensor(const QEStructure& qe, std::span<const double> point);

// Q = Rm + (1/m) P^g + ((n-m)lambda - R)/(2m(m-1)) g^g  (^ = Kulkarni-Nomizu).
TensorValue q_tensor(const QEStructure& qe, const CurvatureJets& c);
TensorValue q_tensor(const QEStructure& qe, std::span<const double> point);

} // namespace qemlab
