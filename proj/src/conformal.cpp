#include "qemlab/conformal.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qemlab/errors.hpp"

namespace qemlab {

namespace {

void require_dim(int n, const char* what) {
    if (n < 3)
        throw DimensionError(std::string(what) + ": needs dimension >= 3, got " +
                             std::to_string(n));
}

void require_jets(const CurvatureJets& c, int order, const char* what) {
    if (c.jet_order < order)
        throw ShapeError(std::string(what) + ": curvature pass must carry jets of order >= " +
                         std::to_string(order));
}

std::vector<Variance> co(int rank) {
    return std::vector<Variance>(static_cast<std::size_t>(rank), Variance::Co);
}

// Weyl components as jets of the pass order, for divergence computations.
std::vector<Jet> weyl_jets(const CurvatureJets& c) {
    const int n = c.n;
    const double a = 1.0 / (n - 2);
    std::vector<Jet> w;
    w.reserve(static_cast<std::size_t>(n) * n * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Jet ric_part = c.Ric(i, k) * c.mj.gc(j, l) + c.Ric(j, l) * c.mj.gc(i, k) -
                                   c.Ric(i, l) * c.mj.gc(j, k) - c.Ric(j, k) * c.mj.gc(i, l);
                    Jet g_part = c.mj.gc(j, l) * c.mj.gc(i, k) - c.mj.gc(i, l) * c.mj.gc(j, k);
                    w.push_back(c.Rm(i, j, k, l) - a * ric_part +
                                (a / (n - 1)) * (c.scal * g_part));
                }
    return w;
}

} // namespace

double QEStructure::rho(double scalar_curv) const {
    if (!(m > 1.0)) throw ParamError("rho: requires m > 1");
    return ((dim() - 1) * lambda - scalar_curv) / (m - 1.0);
}

double QEStructure::space_form_constant() const {
    return lambda / (m + dim() - 1);
}

double QEStructure::mu_at(std::span<const double> point) const {
    const CurvatureJets c = curvature_jets(g, point, 0);
    const Jet uj = evaluate_jet(u, point, 2);
    const double lap = laplacian_from(c, uj);
    double grad_sq = 0.0;
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) grad_sq += c.ginv(i, j) * uj.d1(i) * uj.d1(j);
    const double uv = uj.value();
    return uv * lap + (m - 1.0) * grad_sq + lambda * uv * uv;
}

TensorValue schouten(const CurvatureJets& c) {
    require_dim(c.n, "schouten");
    TensorValue t(c.n, co(2), c.point);
    const double f = c.R() / (2.0 * (c.n - 1));
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) t.at(i, j) = c.Ric(i, j).value() - f * c.g(i, j);
    return t;
}

TensorValue schouten(const MetricField& g, std::span<const double> point) {
    return schouten(curvature_jets(g, point, 0));
}

TensorValue weyl(const CurvatureJets& c) {
    require_dim(c.n, "weyl");
    const int n = c.n;
    const double a = 1.0 / (n - 2);
    const double b = c.R() * a / (n - 1);
    TensorValue t(n, co(4), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double ric_part =
                        c.Ric(i, k).value() * c.g(j, l) + c.Ric(j, l).value() * c.g(i, k) -
                        c.Ric(i, l).value() * c.g(j, k) - c.Ric(j, k).value() * c.g(i, l);
                    const double g_part = c.g(j, l) * c.g(i, k) - c.g(i, l) * c.g(j, k);
                    t.at(i, j, k, l) = c.Rm(i, j, k, l).value() - a * ric_part + b * g_part;
                }
    return t;
}

TensorValue weyl(const MetricField& g, std::span<const double> point) {
    return weyl(curvature_jets(g, point, 0));
}

TensorValue cotton(const CurvatureJets& c) {
    require_dim(c.n, "cotton");
    require_jets(c, 1, "cotton");
    const int n = c.n;
    const TensorValue dric = covariant_derivative_rank2(c, c.ric);
    const double f = 1.0 / (2.0 * (n - 1));
    TensorValue t(n, co(3), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                t.at(i, j, k) = dric.at(i, j, k) - dric.at(j, i, k) -
                                f * (c.scal.d1(i) * c.g(j, k) - c.scal.d1(j) * c.g(i, k));
    return t;
}

TensorValue cotton(const MetricField& g, std::span<const double> point) {
    return cotton(curvature_jets(g, point, 1));
}

TensorValue weyl_divergence(const CurvatureJets& c) {
    require_dim(c.n, "weyl_divergence");
    require_jets(c, 1, "weyl_divergence");
    const int n = c.n;
    const std::vector<Jet> w = weyl_jets(c);
    auto W = [&](int i, int j, int k, int l) -> const Jet& {
        return w[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    };
    TensorValue t(n, co(3), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    for (int d = 0; d < n; ++d) {
                        double cov = W(i, j, k, l).d1(d);
                        for (int a = 0; a < n; ++a)
                            cov -= c.Gamma(a, d, i).value() * W(a, j, k, l).value() +
                                   c.Gamma(a, d, j).value() * W(i, a, k, l).value() +
                                   c.Gamma(a, d, k).value() * W(i, j, a, l).value() +
                                   c.Gamma(a, d, l).value() * W(i, j, k, a).value();
                        s += c.ginv(l, d) * cov;
                    }
                t.at(i, j, k) = s;
            }
    return t;
}

TensorValue weyl_divergence(const MetricField& g, std::span<const double> point) {
    return weyl_divergence(curvature_jets(g, point, 1));
}

TensorValue kulkarni_nomizu(const TensorValue& a, const TensorValue& b) {
    if (a.rank() != 2 || b.rank() != 2)
        throw ShapeError("kulkarni_nomizu: operands must be rank-2 tensors");
    if (a.dim() != b.dim())
        throw ShapeError("kulkarni_nomizu: operand dimensions differ");
    if (a.point() != b.point())
        throw ShapeError("kulkarni_nomizu: operands evaluated at different points");
    const int n = a.dim();
    // Canonical reads keep the mirror writes below exact even when the
    // operands carry rounding-level asymmetry.
    auto av = [&](int i, int k) { return i <= k ? a.at(i, k) : a.at(k, i); };
    auto bv = [&](int i, int k) { return i <= k ? b.at(i, k) : b.at(k, i); };
    TensorValue t(n, co(4), a.point());
    // One evaluation per orbit of the curvature symmetry group; everything
    // else is a mirrored copy, so the symmetries hold exactly.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = i; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    if (k == i && l < j) continue;
                    const double v = av(i, k) * bv(j, l) + av(j, l) * bv(i, k) -
                                     av(i, l) * bv(j, k) - av(j, k) * bv(i, l);
                    t.at(i, j, k, l) = v;
                    t.at(j, i, k, l) = -v;
                    t.at(i, j, l, k) = -v;
                    t.at(j, i, l, k) = v;
                    t.at(k, l, i, j) = v;
                    t.at(l, k, i, j) = -v;
                    t.at(k, l, j, i) = -v;
                    t.at(l, k, j, i) = v;
                }
    return t;
}

TensorValue traceless_ricci(const CurvatureJets& c) {
    TensorValue t(c.n, co(2), c.point);
    const double f = c.R() / c.n;
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) t.at(i, j) = c.Ric(i, j).value() - f * c.g(i, j);
    return t;
}

TensorValue traceless_ricci(const MetricField& g, std::span<const double> point) {
    return traceless_ricci(curvature_jets(g, point, 0));
}

TensorValue t_tensor(const QEStructure& qe, const CurvatureJets& c, const Jet& u_jet) {
    require_dim(c.n, "t_tensor");
    require_jets(c, 1, "t_tensor");
    const int n = c.n;
    const double m = qe.m;
    const double R = c.R();
    const double uv = u_jet.value();

    std::vector<double> du(n), dR(n), gradu_up(n, 0.0), ric_du(n, 0.0);
    for (int i = 0; i < n; ++i) {
        du[i] = u_jet.d1(i);
        dR[i] = c.scal.d1(i);
    }
    for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s) gradu_up[l] += c.ginv(l, s) * du[s];
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) ric_du[j] += c.Ric(j, l).value() * gradu_up[l];

    const double c1 = (m + n - 2.0) / (n - 2.0);
    const double c2 = m / (n - 2.0);
    const double c3 = ((n - 1.0) * (n - 2.0) * qe.lambda + m * R) / ((n - 1.0) * (n - 2.0));
    const double c4 = uv / (2.0 * (n - 1.0));

    TensorValue t(n, co(3), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                t.at(i, j, k) =
                    c1 * (c.Ric(i, k).value() * du[j] - c.Ric(j, k).value() * du[i]) +
                    c2 * (ric_du[j] * c.g(i, k) - ric_du[i] * c.g(j, k)) +
                    c3 * (du[i] * c.g(j, k) - du[j] * c.g(i, k)) -
                    c4 * (dR[i] * c.g(j, k) - dR[j] * c.g(i, k));
    return t;
}

TensorValue t_tensor(const QEStructure& qe, std::span<const double> point) {
    require_dim(qe.dim(), "t_tensor");
    const CurvatureJets c = curvature_jets(qe.g, point, 1);
    return t_tensor(qe, c, evaluate_jet(qe.u, point, 1));
}

TensorValue d_tensor(const QEStructure& qe, const CurvatureJets& c, const Jet& u_jet) {
    require_dim(c.n, "d_tensor");
    const int n = c.n;
    const double uv = u_jet.value();
    if (!(uv > 0.0)) throw DomainError("d_tensor: potential must be positive at the point");
    const double R = c.R();

    std::vector<double> df(n), gradf_up(n, 0.0), ric_df(n, 0.0);
    for (int i = 0; i < n; ++i) df[i] = -qe.m * u_jet.d1(i) / uv;
    for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s) gradf_up[l] += c.ginv(l, s) * df[s];
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) ric_df[i] += c.Ric(i, l).value() * gradf_up[l];

    const double e1 = 1.0 / (n - 2.0);
    const double e2 = 1.0 / ((n - 1.0) * (n - 2.0));
    const double e3 = R * e2;

    TensorValue t(n, co(3), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                t.at(i, j, k) =
                    e1 * (c.Ric(j, k).value() * df[i] - c.Ric(i, k).value() * df[j]) +
                    e2 * (ric_df[i] * c.g(j, k) - ric_df[j] * c.g(i, k)) -
                    e3 * (c.g(j, k) * df[i] - c.g(i, k) * df[j]);
    return t;
}

TensorValue d_tensor(const QEStructure& qe, std::span<const double> point) {
    require_dim(qe.dim(), "d_tensor");
    const CurvatureJets c = curvature_jets(qe.g, point, 0);
    return d_tensor(qe, c, evaluate_jet(qe.u, point, 1));
}

TensorValue p_tensor(const QEStructure& qe, const CurvatureJets& c) {
    const double r = qe.rho(c.R());
    TensorValue t(c.n, co(2), c.point);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) t.at(i, j) = c.Ric(i, j).value() - r * c.g(i, j);
    return t;
}

TensorValue p_tensor(const QEStructure& qe, std::span<const double> point) {
    return p_tensor(qe, curvature_jets(qe.g, point, 0));
}

TensorValue q_tensor(const QEStructure& qe, const CurvatureJets& c) {
    if (!(qe.m > 1.0)) throw ParamError("q_tensor: requires m > 1");
    const int n = c.n;
    const double coef = ((n - qe.m) * qe.lambda - c.R()) / (2.0 * qe.m * (qe.m - 1.0));
    const TensorValue gv = metric_values(c);
    TensorValue t = riemann_values(c);
    t += (1.0 / qe.m) * kulkarni_nomizu(p_tensor(qe, c), gv);
    t += coef * kulkarni_nomizu(gv, gv);
    return t;
}

TensorValue q_tensor(const QEStructure& qe, std::span<const double> point) {
    return q_tensor(qe, curvature_jets(qe.g, point, 0));
}

} // namespace qemlab
