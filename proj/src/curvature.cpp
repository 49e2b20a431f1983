#include "qemlab/curvature.hpp"

#include <cmath>

#include "qemlab/errors.hpp"

namespace qemlab {

MetricJets metric_jets(const MetricField& g, std::span<const double> point, int order) {
    const int n = g.dim();
    if (static_cast<int>(g.comps.size()) != n * n)
        throw ShapeError("metric component table has wrong shape");
    const auto seeds = seed_point(*g.chart, point, order);
    MetricJets mj;
    mj.n = n;
    mj.order = order;
    mj.g.resize(static_cast<std::size_t>(n) * n, Jet(n, order));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            Jet v = g.comp(i, j)(seeds);
            if (!v.finite())
                throw NumericError("metric component produced a non-finite jet");
            mj.g[i * n + j] = v;
            mj.g[j * n + i] = std::move(v);
        }
    mj.ginv = jet_matrix_inverse(mj.g, n);
    return mj;
}

std::vector<Jet> jet_matrix_inverse(std::vector<Jet> a, int n) {
    if (static_cast<int>(a.size()) != n * n)
        throw ShapeError("jet matrix has wrong shape");
    const int dim = a[0].dim();
    const int ord = a[0].order();
    std::vector<Jet> inv(static_cast<std::size_t>(n) * n, Jet(dim, ord));
    for (int i = 0; i < n; ++i) inv[i * n + i] = Jet::constant(dim, ord, 1.0);

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col].value()) > std::abs(a[piv * n + col].value()))
                piv = r;
        if (std::abs(a[piv * n + col].value()) < 1e-14)
            throw NumericError("jet matrix is singular");
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a[piv * n + c], a[col * n + c]);
                std::swap(inv[piv * n + c], inv[col * n + c]);
            }
        const Jet d = a[col * n + col];
        for (int c = 0; c < n; ++c) {
            a[col * n + c] = a[col * n + c] / d;
            inv[col * n + c] = inv[col * n + c] / d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Jet f = a[r * n + col];
            for (int c = 0; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    return inv;
}

CurvatureJets curvature_jets(const MetricField& gf, std::span<const double> point,
                             int jet_order) {
    if (jet_order < 0 || jet_order > Jet::kMaxOrder - 2)
        throw ShapeError("curvature jet order out of range");
    CurvatureJets c;
    c.n = gf.dim();
    c.jet_order = jet_order;
    c.point.assign(point.begin(), point.end());
    c.mj = metric_jets(gf, point, jet_order + 2);
    const int n = c.n;

    c.g.resize(n, n);
    c.ginv.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            c.g(i, j) = c.mj.gc(i, j).value();
            c.ginv(i, j) = c.mj.gi(i, j).value();
        }
    {
        Eigen::LLT<Eigen::MatrixXd> llt(c.g);
        if (llt.info() != Eigen::Success)
            throw MetricSignatureError("metric is not positive definite at the point");
    }

    // dg[c][a][b] = d/dx_c of g_ab, order jet_order + 1
    std::vector<Jet> dg(static_cast<std::size_t>(n) * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Jet& gab = c.mj.gc(a, b);
            for (int k = 0; k < n; ++k)
                dg[(static_cast<std::size_t>(k) * n + a) * n + b] = gab.spatial_derivative(k);
        }
    auto dgc = [&](int k, int a, int b) -> const Jet& {
        return dg[(static_cast<std::size_t>(k) * n + a) * n + b];
    };

    c.gamma.assign(static_cast<std::size_t>(n) * n * n, Jet(n, jet_order + 1));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                Jet s(n, jet_order + 1);
                for (int l = 0; l < n; ++l) {
                    Jet t = dgc(i, j, l) + dgc(j, i, l) - dgc(l, i, j);
                    s += c.mj.gi(k, l) * t;
                }
                s *= 0.5;
                c.gamma[(k * n + i) * n + j] = s;
                c.gamma[(k * n + j) * n + i] = std::move(s);
            }

    // dGamma[i][s][a][b] = d/dx_i of Gamma^s_ab, order jet_order
    std::vector<Jet> dgam(static_cast<std::size_t>(n) * n * n * n);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b <= a; ++b) {
                const Jet& G = c.Gamma(s, a, b);
                for (int i = 0; i < n; ++i) {
                    Jet d = G.spatial_derivative(i);
                    dgam[((static_cast<std::size_t>(i) * n + s) * n + b) * n + a] = d;
                    dgam[((static_cast<std::size_t>(i) * n + s) * n + a) * n + b] =
                        std::move(d);
                }
            }
    auto dG = [&](int i, int s, int a, int b) -> const Jet& {
        return dgam[((static_cast<std::size_t>(i) * n + s) * n + a) * n + b];
    };

    // R_ijkl = g_ls (d_j Gamma^s_ik - d_i Gamma^s_jk
    //          + Gamma^s_ja Gamma^a_ik - Gamma^s_ia Gamma^a_jk).
    // Antisymmetry in (i, j) is manifest and mirrored; the remaining
    // symmetries are emergent and checked by the test suite.
    c.rm.assign(static_cast<std::size_t>(n) * n * n * n, Jet(n, jet_order));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Jet s(n, jet_order);
                    for (int a = 0; a < n; ++a) {
                        Jet inner = dG(j, a, i, k) - dG(i, a, j, k);
                        for (int b = 0; b < n; ++b)
                            inner += c.Gamma(a, j, b) * c.Gamma(b, i, k) -
                                     c.Gamma(a, i, b) * c.Gamma(b, j, k);
                        s += c.mj.gc(l, a) * inner;
                    }
                    c.rm[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l] = s;
                    c.rm[((static_cast<std::size_t>(j) * n + i) * n + k) * n + l] = -s;
                }

    // Ric_jl = g^ik R_ijkl
    c.ric.assign(static_cast<std::size_t>(n) * n, Jet(n, jet_order));
    for (int j = 0; j < n; ++j)
        for (int l = 0; l <= j; ++l) {
            Jet s(n, jet_order);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    if (i == j) continue; // R_ijkl vanishes identically for i == j
                    s += c.mj.gi(i, k) * c.Rm(i, j, k, l);
                }
            c.ric[j * n + l] = s;
            c.ric[l * n + j] = std::move(s);
        }

    c.scal = Jet(n, jet_order);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) c.scal += c.mj.gi(j, l) * c.Ric(j, l);

    if (!c.scal.finite())
        throw NumericError("curvature produced a non-finite jet");
    return c;
}

namespace {

std::vector<Variance> co(int rank) {
    return std::vector<Variance>(static_cast<std::size_t>(rank), Variance::Co);
}

std::vector<double> to_vec(std::span<const double> p) {
    return std::vector<double>(p.begin(), p.end());
}

} // namespace

TensorValue christoffel(const MetricField& g, std::span<const double> point) {
    const CurvatureJets c = curvature_jets(g, point, 0);
    const int n = c.n;
    TensorValue t(n, {Variance::Contra, Variance::Co, Variance::Co}, to_vec(point));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.at(k, i, j) = c.Gamma(k, i, j).value();
    return t;
}

TensorValue riemann(const MetricField& g, std::span<const double> point) {
    const CurvatureJets c = curvature_jets(g, point, 0);
    const int n = c.n;
    TensorValue t(n, co(4), to_vec(point));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) t.at(i, j, k, l) = c.Rm(i, j, k, l).value();
    return t;
}

TensorValue ricci(const MetricField& g, std::span<const double> point) {
    const CurvatureJets c = curvature_jets(g, point, 0);
    const int n = c.n;
    TensorValue t(n, co(2), to_vec(point));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.at(i, j) = c.Ric(i, j).value();
    return t;
}

double scalar_curvature(const MetricField& g, std::span<const double> point) {
    return curvature_jets(g, point, 0).R();
}

TensorValue metric_values(const CurvatureJets& c) {
    TensorValue t(c.n, co(2), c.point);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) t.at(i, j) = c.g(i, j);
    return t;
}

TensorValue ricci_values(const CurvatureJets& c) {
    TensorValue t(c.n, co(2), c.point);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) t.at(i, j) = c.Ric(i, j).value();
    return t;
}

TensorValue riemann_values(const CurvatureJets& c) {
    const int n = c.n;
    TensorValue t(n, co(4), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) t.at(i, j, k, l) = c.Rm(i, j, k, l).value();
    return t;
}

double sectional_curvature(const MetricField& g, std::span<const double> point,
                           std::span<const double> X, std::span<const double> Y) {
    const CurvatureJets c = curvature_jets(g, point, 0);
    const int n = c.n;
    if (static_cast<int>(X.size()) != n || static_cast<int>(Y.size()) != n)
        throw ShapeError("sectional_curvature: vector dimension mismatch");
    double xx = 0, yy = 0, xy = 0, num = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            xx += c.g(i, j) * X[i] * X[j];
            yy += c.g(i, j) * Y[i] * Y[j];
            xy += c.g(i, j) * X[i] * Y[j];
        }
    const double denom = xx * yy - xy * xy;
    if (!(denom > 1e-14))
        throw ParamError("sectional_curvature: degenerate 2-plane");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    num += c.Rm(i, j, k, l).value() * X[i] * Y[j] * X[k] * Y[l];
    return num / denom;
}

TensorValue covariant_derivative_rank2(const CurvatureJets& c, std::span<const Jet> S) {
    const int n = c.n;
    if (static_cast<int>(S.size()) != n * n)
        throw ShapeError("covariant_derivative_rank2: table has wrong shape");
    TensorValue t(n, co(3), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double v = S[j * n + k].d1(i);
                for (int a = 0; a < n; ++a)
                    v -= c.Gamma(a, i, j).value() * S[a * n + k].value() +
                         c.Gamma(a, i, k).value() * S[j * n + a].value();
                t.at(i, j, k) = v;
            }
    return t;
}

TensorValue covariant_derivative_ricci(const MetricField& g, std::span<const double> point) {
    const CurvatureJets c = curvature_jets(g, point, 1);
    return covariant_derivative_rank2(c, c.ric);
}

TensorValue hessian_from(const CurvatureJets& c, const Jet& f) {
    const int n = c.n;
    TensorValue t(n, co(2), c.point);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = f.d2(i, j);
            for (int k = 0; k < n; ++k) v -= c.Gamma(k, i, j).value() * f.d1(k);
            t.at(i, j) = v;
        }
    return t;
}

double laplacian_from(const CurvatureJets& c, const Jet& f) {
    const TensorValue h = hessian_from(c, f);
    double s = 0.0;
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) s += c.ginv(i, j) * h.at(i, j);
    return s;
}

TensorValue gradient(const MetricField& g, const ScalarField& f,
                     std::span<const double> point) {
    const MetricAt ma = metric_at(g, point);
    const Jet fj = evaluate_jet(f, point, 1);
    const int n = g.dim();
    TensorValue t(n, {Variance::Contra}, to_vec(point));
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += ma.g_inv(i, j) * fj.d1(j);
        t.at(i) = s;
    }
    return t;
}

TensorValue hessian(const MetricField& g, const ScalarField& f,
                    std::span<const double> point) {
    const CurvatureJets c = curvature_jets(g, point, 0);
    return hessian_from(c, evaluate_jet(f, point, 2));
}

double laplacian(const MetricField& g, const ScalarField& f, std::span<const double> point) {
    const CurvatureJets c = curvature_jets(g, point, 0);
    return laplacian_from(c, evaluate_jet(f, point, 2));
}

TensorValue warped_ricci_oracle(const MetricField& base, const ScalarField& phi,
                                const MetricField& fiber, double fiber_einstein_const,
                                std::span<const double> point) {
    const int db = base.dim(), df = fiber.dim(), n = db + df;
    if (static_cast<int>(point.size()) != n)
        throw ShapeError("warped_ricci_oracle: point dimension mismatch");
    const auto xb = point.first(static_cast<std::size_t>(db));
    const auto xf = point.subspan(static_cast<std::size_t>(db));

    const Jet phj = evaluate_jet(phi, xb, 2);
    const double ph = phj.value();
    if (!(ph > 0.0))
        throw DomainError("warped_ricci_oracle: warping function must be positive");

    const TensorValue ricB = ricci(base, xb);
    const TensorValue hessB = hessian(base, phi, xb);
    const double lapB = laplacian(base, phi, xb);
    const MetricAt mb = metric_at(base, xb);
    double grad_sq = 0.0;
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j) grad_sq += mb.g_inv(i, j) * phj.d1(i) * phj.d1(j);

    TensorValue out(n, co(2), to_vec(point));
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j)
            out.at(i, j) = ricB.at(i, j) - (df / ph) * hessB.at(i, j);

    const double fiber_coeff =
        fiber_einstein_const - (ph * lapB + (df - 1) * grad_sq);
    const auto seeds = seed_point(*fiber.chart, xf, 0);
    for (int a = 0; a < df; ++a)
        for (int b = 0; b < df; ++b)
            out.at(db + a, db + b) = fiber_coeff * fiber.comp(a, b)(seeds).value();
    return out;
}

} // namespace qemlab
