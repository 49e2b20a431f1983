#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qemlab/qe_verify.hpp"

namespace qemlab {

// Reduced fraction, denominator always positive.
struct Rational {
    long long num = 0;
    long long den = 1;
};

Rational make_rational(long long num, long long den);
// Accepts "7", "5/2" and terminating decimals like "2.5".
Rational rational_from_string(const std::string& text);
double rational_value(const Rational& r);

// One admissible scalar-curvature level: R = num/den * lambda.
struct SpectrumRow {
    int kappa = 0;
    long long num = 0;
    long long den = 1;
    double value = 0.0;
};

// The admissible constant scalar curvatures
//   R_kappa = (kappa (m-n) + n(n-1)) / (m+n-kappa-1) * lambda,  kappa = 0..n,
// with the coefficient kept as an exact reduced fraction.  Rows stay in kappa
// order; they are never sorted or deduplicated, since distinct kappa are not
// guaranteed to give distinct values for every (n, m).
struct SpectrumTable {
    int n = 0;
    Rational m;
    double lambda = 0.0;
    std::vector<SpectrumRow> rows;
};

// Requires n >= 2, m > 1, lambda < 0.
SpectrumTable admissible_spectrum(int n, const Rational& m, double lambda);

// Same row formula in floating point, used to infer kappa from a measured R.
double spectrum_row_value(int n, double m, double lambda, int kappa);

struct ClassifyOptions {
    double einstein_tol = 1e-10;      // on |Ric0|^2 / (1 + R^2)
    double t_flat_tol = 1e-10;        // on normalized |T|^2
    double kappa_rel_tol = 1e-6;      // matching R against spectrum rows
    double constant_r_spread = 1e-8;  // absolute spread of sampled R
    double mu_zero_tol = 1e-8;        // scaled by (1 + |lambda| + |R|)
    double eigen_gap_rel = 1e-6;      // eigenvalue multiplicity grouping
};

// The two scalar-curvature levels a vanishing coupling tensor allows.
enum class TBranch { Einstein, Product, Neither };
const char* branch_name(TBranch b);

struct TFlatResult {
    bool is_t_flat = false;
    TBranch which_branch = TBranch::Neither;
    double t_norm_sq_max = 0.0;  // |T|^2 / (1 + |Ric|^2 |grad u|^2), worst point
    double einstein_branch_r = 0.0;  // n(n-1) lambda / (m+n-1)
    double product_branch_r = 0.0;   // (n-1) lambda
    double r_measured = 0.0;
    // eigenvalue restatement of the dichotomy, reported as diagnostics: a
    // T-flat structure has at most two distinct Ricci eigenvalues, one of
    // multiplicity >= n-1 orthogonal to grad u
    int distinct_ric_eigenvalues = 0;
    int dominant_multiplicity = 0;
    bool eigen_structure_consistent = true;
    std::string note;
};

// Decides |T|^2 = 0 (threshold on the normalized norm) and which admissible
// curvature level the input sits on.  The two decisions must agree; if they
// do not, an InconsistencyError is thrown since that indicates a kernel bug,
// not bad input.  Requires n >= 3 and constant scalar curvature.
TFlatResult t_flat_test(const QEStructure& qe, const PointList& pts,
                        const ClassifyOptions& opt = {});

// P-eigenvalue data in dimension 3: in a frame whose first leg is
// -grad u/|grad u|, P = Ric - rho g restricted to the orthogonal plane has
// eigenvalues mu2 <= mu3 with
//   2 mu2 mu3 = (2 lambda - (m+2) rho)(lambda - (m+1) rho)
// and mu3 a root of  2 x^2 + 2 mu2 mu3 = 2 x (2 lambda - (m+2) rho).
struct Eigenstructure3D {
    double mu2 = 0.0;
    double mu3 = 0.0;
    double rho = 0.0;
    double radial_norm = 0.0;        // |P(grad u)| / |grad u|, ~0 when R is constant
    double product_residual = 0.0;   // the 2 mu2 mu3 relation, normalized
    double poly_residual = 0.0;      // the quadratic in mu3, normalized
    CheckStatus status = CheckStatus::Checked;
    std::string note;
};

// Requires dim == 3 and |grad u| > 1e-8 at the point; reports NotApplicable
// when the scalar curvature is not constant (detected from grad R).
Eigenstructure3D eigenstructure_3d(const QEStructure& qe, std::span<const double> point);

struct RicEigenvalue {
    double value = 0.0;
    int multiplicity = 0;
};

struct ClassificationReport {
    int n = 0;
    double m = 0.0;
    double lambda = 0.0;
    int points_used = 0;

    bool constant_r = true;
    double r_mean = 0.0;
    double r_spread = 0.0;
    double mu_mean = 0.0;
    double mu_spread = 0.0;
    int mu_sign = 0;  // -1/0/+1 against mu_zero_tol
    double einstein_deviation = 0.0;  // max |Ric0|^2/(1+R^2) over the sample
    bool einstein = false;

    std::optional<TFlatResult> t_flat;  // engaged when n >= 3 and R is constant
    double radial_ric_eigenvalue = 0.0;       // Ric(grad u, grad u)/|grad u|^2
    std::vector<RicEigenvalue> ric_spectrum;  // grouped ascending, first point

    std::optional<int> kappa;  // inferred spectrum row, lambda < 0 only
    std::string matched_case;  // family label, "no match" or "NonConstantR"
    std::string rigid_hint;    // set when the no-match invariants fit a rigid family
    std::vector<std::string> diagnostics;
    std::vector<std::string> assumptions;
};

// Signature matcher: measures the invariants above and walks the case lists.
// Never throws on strange input; unmatched signatures come back as "no match"
// with nearest-candidate diagnostics.
ClassificationReport classify(const QEStructure& qe, const PointList& pts,
                              const ClassifyOptions& opt = {});

} // namespace qemlab
