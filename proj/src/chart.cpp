#include "qemlab/chart.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Cholesky>

#include "qemlab/errors.hpp"

namespace qemlab {

ChartPtr make_chart(std::vector<std::string> names, std::vector<Interval> domain) {
    if (names.empty() || names.size() != domain.size())
        throw ParamError("chart needs one name and one interval per coordinate");
    if (names.size() > static_cast<std::size_t>(Jet::kMaxDim))
        throw ParamError("chart dimension exceeds jet limit");
    std::set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size())
        throw ParamError("duplicate coordinate names in chart");
    for (const auto& iv : domain)
        if (!(iv.lo < iv.hi))
            throw ParamError("empty sample interval in chart");
    auto c = std::make_shared<Chart>();
    c->dim = static_cast<int>(names.size());
    c->coordinate_names = std::move(names);
    c->sample_domain = std::move(domain);
    return c;
}

void check_in_domain(const Chart& chart, std::span<const double> point) {
    if (static_cast<int>(point.size()) != chart.dim)
        throw ShapeError("point dimension does not match chart");
    for (int i = 0; i < chart.dim; ++i) {
        const Interval& iv = chart.sample_domain[i];
        const double slack = 1e-9 * (iv.hi - iv.lo);
        if (!(point[i] >= iv.lo - slack && point[i] <= iv.hi + slack))
            throw DomainError("coordinate " + chart.coordinate_names[i] +
                              " outside sample domain");
    }
}

std::vector<Jet> seed_point(const Chart& chart, std::span<const double> point, int order) {
    check_in_domain(chart, point);
    std::vector<Jet> seeds;
    seeds.reserve(chart.dim);
    for (int i = 0; i < chart.dim; ++i)
        seeds.push_back(Jet::variable(chart.dim, order, i, point[i]));
    return seeds;
}

Jet evaluate_jet(const ScalarField& f, std::span<const double> point, int order) {
    if (!f.chart || !f.fn)
        throw ShapeError("scalar field is empty");
    const auto seeds = seed_point(*f.chart, point, order);
    Jet r = f.fn(seeds);
    if (!r.finite())
        throw NumericError("scalar field produced a non-finite jet");
    return r;
}

MetricAt metric_at(const MetricField& g, std::span<const double> point) {
    const int n = g.dim();
    if (n < 1 || static_cast<int>(g.comps.size()) != n * n)
        throw ShapeError("metric component table has wrong shape");
    const auto seeds = seed_point(*g.chart, point, 0);
    MetricAt out;
    out.g.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const Jet v = g.comp(i, j)(seeds);
            if (!std::isfinite(v.value()))
                throw NumericError("metric component is not finite");
            out.g(i, j) = v.value();
            out.g(j, i) = v.value();
        }
    Eigen::LLT<Eigen::MatrixXd> llt(out.g);
    if (llt.info() != Eigen::Success)
        throw MetricSignatureError("metric is not positive definite at the point");
    out.g_inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    const double resid =
        (out.g * out.g_inv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(resid <= 1e-12))
        throw NumericError("metric inverse residual too large");
    double det = 1.0;
    const Eigen::MatrixXd L = llt.matrixL();
    for (int i = 0; i < n; ++i) det *= L(i, i) * L(i, i);
    out.det = det;
    return out;
}

namespace {

double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

constexpr int kHaltonBases[Jet::kMaxDim] = {2, 3, 5, 7, 11, 13, 17, 19};

} // namespace

std::vector<std::vector<double>> sample_points(const Chart& chart, int count,
                                               std::uint64_t seed) {
    if (count < 1)
        throw ParamError("sample count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> shift(chart.dim);
    for (double& s : shift) s = unit(rng);

    std::vector<std::vector<double>> pts(count, std::vector<double>(chart.dim));
    for (int k = 0; k < count; ++k)
        for (int j = 0; j < chart.dim; ++j) {
            double h = radical_inverse(static_cast<std::uint64_t>(k) + 1, kHaltonBases[j]);
            h += shift[j];
            h -= std::floor(h);
            const Interval& iv = chart.sample_domain[j];
            pts[k][j] = iv.lo + h * (iv.hi - iv.lo);
        }
    return pts;
}

// --- builders -----------------------------------------------------------

ChartPtr interval_chart(const std::string& name, Interval dom) {
    return make_chart({name}, {dom});
}

MetricField make_metric(ChartPtr chart, std::vector<JetFn> comps) {
    if (!chart)
        throw ParamError("metric needs a chart");
    if (comps.size() != static_cast<std::size_t>(chart->dim) * chart->dim)
        throw ShapeError("metric component table has wrong shape");
    return MetricField{std::move(chart), std::move(comps)};
}

namespace {

JetFn zero_fn() {
    return [](std::span<const Jet> x) { return const_like(x[0], 0.0); };
}

JetFn const_fn(double c) {
    return [c](std::span<const Jet> x) { return const_like(x[0], c); };
}

std::vector<JetFn> diag_table(int n, const std::vector<JetFn>& diag) {
    std::vector<JetFn> t(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[i * n + j] = (i == j) ? diag[i] : zero_fn();
    return t;
}

} // namespace

MetricField flat_metric(ChartPtr chart) {
    const int n = chart->dim;
    return make_metric(std::move(chart), diag_table(n, std::vector<JetFn>(n, const_fn(1.0))));
}

MetricField flat_box(const std::string& prefix, int dim, Interval each) {
    std::vector<std::string> names;
    std::vector<Interval> dom(dim, each);
    for (int i = 1; i <= dim; ++i) names.push_back(prefix + std::to_string(i));
    return flat_metric(make_chart(std::move(names), std::move(dom)));
}

MetricField sphere_metric(int d) {
    std::vector<std::string> names;
    std::vector<Interval> dom(d, Interval{0.15, 2.9});
    for (int i = 1; i <= d; ++i) names.push_back("th" + std::to_string(i));
    auto chart = make_chart(std::move(names), std::move(dom));
    std::vector<JetFn> diag;
    for (int i = 0; i < d; ++i)
        diag.push_back([i](std::span<const Jet> x) {
            Jet v = const_like(x[0], 1.0);
            for (int j = 0; j < i; ++j) {
                const Jet s = sin(x[j]);
                v = v * (s * s);
            }
            return v;
        });
    return make_metric(std::move(chart), diag_table(d, diag));
}

MetricField hyperbolic_metric(int d) {
    std::vector<std::string> names;
    std::vector<Interval> dom;
    for (int i = 1; i < d; ++i) {
        names.push_back("x" + std::to_string(i));
        dom.push_back({-1.0, 1.0});
    }
    names.push_back(d == 1 ? "x1" : "y");
    dom.push_back(d == 1 ? Interval{-1.0, 1.0} : Interval{0.5, 2.5});
    auto chart = make_chart(std::move(names), std::move(dom));
    if (d == 1) return flat_metric(std::move(chart));
    const int last = d - 1;
    std::vector<JetFn> diag(d, [last](std::span<const Jet> x) {
        return 1.0 / (x[last] * x[last]);
    });
    return make_metric(std::move(chart), diag_table(d, diag));
}

MetricField scaled_metric(const MetricField& g, double c) {
    if (!(c > 0.0))
        throw ParamError("metric scale factor must be positive");
    MetricField out;
    out.chart = g.chart;
    out.comps.reserve(g.comps.size());
    for (const auto& f : g.comps)
        out.comps.push_back([f, c](std::span<const Jet> x) { return f(x) * c; });
    return out;
}

namespace {

// Restrict a factor's component to its coordinate block inside a product.
JetFn block_fn(JetFn f, int offset, int len) {
    return [f = std::move(f), offset, len](std::span<const Jet> x) {
        return f(x.subspan(static_cast<std::size_t>(offset), static_cast<std::size_t>(len)));
    };
}

} // namespace

MetricField product_metric(const MetricField& a, const MetricField& b) {
    const int da = a.dim(), db = b.dim(), n = da + db;
    std::vector<std::string> names = a.chart->coordinate_names;
    names.insert(names.end(), b.chart->coordinate_names.begin(),
                 b.chart->coordinate_names.end());
    std::vector<Interval> dom = a.chart->sample_domain;
    dom.insert(dom.end(), b.chart->sample_domain.begin(), b.chart->sample_domain.end());
    auto chart = make_chart(std::move(names), std::move(dom));

    std::vector<JetFn> comps(static_cast<std::size_t>(n) * n, zero_fn());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) comps[i * n + j] = block_fn(a.comp(i, j), 0, da);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j)
            comps[(da + i) * n + (da + j)] = block_fn(b.comp(i, j), da, db);
    return make_metric(std::move(chart), std::move(comps));
}

MetricField warped_metric(const std::string& coord, Interval dom,
                          std::function<Jet(const Jet&)> phi, const MetricField& fiber) {
    const int df = fiber.dim(), n = 1 + df;
    std::vector<std::string> names{coord};
    names.insert(names.end(), fiber.chart->coordinate_names.begin(),
                 fiber.chart->coordinate_names.end());
    std::vector<Interval> box{dom};
    box.insert(box.end(), fiber.chart->sample_domain.begin(),
               fiber.chart->sample_domain.end());
    auto chart = make_chart(std::move(names), std::move(box));

    std::vector<JetFn> comps(static_cast<std::size_t>(n) * n, zero_fn());
    comps[0] = const_fn(1.0);
    for (int i = 0; i < df; ++i)
        for (int j = 0; j < df; ++j) {
            JetFn base = fiber.comp(i, j);
            comps[(1 + i) * n + (1 + j)] = [base, phi](std::span<const Jet> x) {
                const Jet w = phi(x[0]);
                return w * w * base(x.subspan(1));
            };
        }
    return make_metric(std::move(chart), std::move(comps));
}

ScalarField radial_field(ChartPtr chart, std::function<Jet(const Jet&)> f) {
    return ScalarField{std::move(chart),
                       [f = std::move(f)](std::span<const Jet> x) { return f(x[0]); }};
}

ScalarField shifted_field(const ScalarField& f, double c) {
    return ScalarField{f.chart, [fn = f.fn, c](std::span<const Jet> x) { return fn(x) + c; }};
}

} // namespace qemlab
