#include "qemlab/catalog.hpp"

#include <cmath>
#include <utility>

#include "qemlab/errors.hpp"

namespace qemlab {

namespace {

// ---- parameter plumbing -------------------------------------------------

double take(Params& pool, Params& resolved, const std::string& key, double def) {
    double v = def;
    if (auto it = pool.find(key); it != pool.end()) {
        v = it->second;
        pool.erase(it);
    }
    resolved[key] = v;
    return v;
}

int take_int(Params& pool, Params& resolved, const std::string& entry,
             const std::string& key, int def, int min) {
    const double v = take(pool, resolved, key, static_cast<double>(def));
    if (std::floor(v) != v || !std::isfinite(v))
        throw ParamError(entry + ": parameter " + key + " must be an integer");
    const int k = static_cast<int>(v);
    if (k < min)
        throw ParamError(entry + ": parameter " + key + " must be >= " + std::to_string(min));
    return k;
}

void require(bool ok, const std::string& entry, const std::string& constraint) {
    if (!ok) throw ParamError(entry + ": " + constraint);
}

void no_leftovers(const Params& pool, const std::string& entry) {
    if (!pool.empty())
        throw ParamError(entry + ": unknown parameter " + pool.begin()->first);
}

double take_m(Params& pool, Params& resolved, const std::string& entry) {
    const double m = take(pool, resolved, "m", 2.0);
    require(m > 1.0, entry, "m must be > 1");
    return m;
}

// ---- geometric building blocks ------------------------------------------

// Same metric on a chart with renamed coordinates, so product factors never
// collide.
MetricField with_prefix(const MetricField& g, const std::string& prefix) {
    std::vector<std::string> names;
    names.reserve(g.chart->coordinate_names.size());
    for (const auto& nm : g.chart->coordinate_names) names.push_back(prefix + nm);
    return {make_chart(std::move(names), g.chart->sample_domain), g.comps};
}

// Model space with Ric = e * g: rescaled hyperbolic space (e < 0), rescaled
// round sphere (e > 0), or a flat box (e = 0).  A 1-dimensional factor is
// necessarily flat.
MetricField einstein_model(int d, double e, const std::string& entry) {
    if (d == 1) {
        require(e == 0.0, entry, "a 1-dimensional factor is flat (Einstein constant 0)");
        return hyperbolic_metric(1);
    }
    if (e == 0.0) return flat_box("f", d, {-1.0, 1.0});
    if (e < 0.0) return scaled_metric(hyperbolic_metric(d), (d - 1) / (-e));
    return scaled_metric(sphere_metric(d), (d - 1) / e);
}

MetricField line_metric(const std::string& name, Interval dom) {
    return flat_metric(interval_chart(name, dom));
}

std::function<Jet(const Jet&)> unit_warp() {
    return [](const Jet& t) { return const_like(t, 1.0); };
}

// ---- independent Ricci assembly ------------------------------------------
//
// Every catalog geometry is (base x_phi fiber) x tail with a 1-dimensional
// base, phi possibly constant and the tail factor optional.  Its Ricci is
// block diagonal: the warped-product formula on the leading block and
// tail_einstein * g_tail on the rest.

struct OraclePieces {
    MetricField base;
    ScalarField phi;
    MetricField fiber;
    double fiber_einstein = 0.0;
    std::optional<MetricField> tail;
    double tail_einstein = 0.0;
};

std::function<TensorValue(std::span<const double>)> make_oracle(OraclePieces p) {
    return [p = std::move(p)](std::span<const double> point) -> TensorValue {
        const int bd = p.base.dim(), fd = p.fiber.dim();
        const int td = p.tail ? p.tail->dim() : 0;
        const int n = bd + fd + td;
        if (static_cast<int>(point.size()) != n)
            throw ShapeError("oracle point dimension does not match the entry");
        const TensorValue w = warped_ricci_oracle(
            p.base, p.phi, p.fiber, p.fiber_einstein,
            point.first(static_cast<std::size_t>(bd + fd)));
        TensorValue out(n, {Variance::Co, Variance::Co},
                        std::vector<double>(point.begin(), point.end()));
        for (int i = 0; i < bd + fd; ++i)
            for (int j = 0; j < bd + fd; ++j) out.at(i, j) = w.at(i, j);
        if (td > 0) {
            const auto sub = point.subspan(static_cast<std::size_t>(bd + fd));
            const auto seeds = seed_point(*p.tail->chart, sub, 0);
            for (int a = 0; a < td; ++a)
                for (int b = 0; b < td; ++b)
                    out.at(bd + fd + a, bd + fd + b) =
                        p.tail_einstein * p.tail->comp(a, b)(seeds).value();
        }
        return out;
    };
}

const std::string kUnitScaleNote =
    "built at unit curvature scale; substitute sqrt(-k) t in the warp and the "
    "potential and rescale lambda by -k for other negative scales";

// ---- entry builders -------------------------------------------------------

CatalogEntry make_hemisphere(Params pool, double fs) {
    CatalogEntry e;
    e.id = "hemisphere";
    const int n = take_int(pool, e.params, e.id, "n", 3, 3);
    const double m = take_m(pool, e.params, e.id);
    no_leftovers(pool, e.id);

    const MetricField fiber = scaled_metric(sphere_metric(n - 1), fs);
    e.qe.g = warped_metric("r", {0.15, 1.45}, [](const Jet& t) { return sin(t); }, fiber);
    e.qe.u = radial_field(e.qe.g.chart, [](const Jet& t) { return cos(t); });
    e.qe.m = m;
    e.qe.lambda = m + n - 1;

    e.expected.mu = m - 1.0;
    e.expected.scalar_curvature = static_cast<double>(n) * (n - 1);
    e.expected.t_flat = true;
    e.expected.einstein = true;
    e.expected.case_label = "ThmB(i)";

    const MetricField base = line_metric("r", {0.15, 1.45});
    e.ricci_oracle = make_oracle({base,
                                  radial_field(base.chart, [](const Jet& t) { return sin(t); }),
                                  fiber, (n - 2) / fs, std::nullopt, 0.0});
    return e;
}

CatalogEntry make_cylinder(Params pool, double fs) {
    CatalogEntry e;
    e.id = "cylinder";
    const int n = take_int(pool, e.params, e.id, "n", 3, 3);
    const double m = take_m(pool, e.params, e.id);
    const double lambda = take(pool, e.params, "lambda", 1.0);
    require(lambda > 0.0, e.id, "lambda must be positive");
    no_leftovers(pool, e.id);

    const double omega = std::sqrt(lambda / m);
    const Interval dom{0.15 / omega, 2.99 / omega};
    const MetricField fiber = scaled_metric(einstein_model(n - 1, lambda, e.id), fs);
    e.qe.g = product_metric(line_metric("t", dom), fiber);
    e.qe.u = radial_field(e.qe.g.chart,
                          [omega](const Jet& t) { return sin(t * omega); });
    e.qe.m = m;
    e.qe.lambda = lambda;

    e.expected.mu = lambda * (m - 1.0) / m;
    e.expected.scalar_curvature = (n - 1) * lambda;
    e.expected.t_flat = true;
    e.expected.einstein = false;
    e.expected.case_label = "ThmB(ii)";

    const MetricField base = line_metric("t", dom);
    e.ricci_oracle =
        make_oracle({base, radial_field(base.chart, unit_warp()), fiber, lambda / fs,
                     std::nullopt, 0.0});
    return e;
}

CatalogEntry make_half_line_flat(Params pool, double fs) {
    CatalogEntry e;
    e.id = "half_line_flat";
    const int n = take_int(pool, e.params, e.id, "n", 3, 3);
    const double m = take_m(pool, e.params, e.id);
    no_leftovers(pool, e.id);

    const MetricField fiber = scaled_metric(flat_box("f", n - 1, {-1.0, 1.0}), fs);
    e.qe.g = product_metric(line_metric("t", {0.2, 2.0}), fiber);
    e.qe.u = radial_field(e.qe.g.chart, [](const Jet& t) { return t; });
    e.qe.m = m;
    e.qe.lambda = 0.0;

    e.expected.mu = m - 1.0;
    e.expected.scalar_curvature = 0.0;
    e.expected.t_flat = true;
    e.expected.einstein = true;
    e.expected.case_label = n == 3 ? "ThmA(vi)" : "ThmB(iii)";

    const MetricField base = line_metric("t", {0.2, 2.0});
    e.ricci_oracle = make_oracle(
        {base, radial_field(base.chart, unit_warp()), fiber, 0.0, std::nullopt, 0.0});
    return e;
}

// Shared shape of the four sinh/cosh/exp warped families over a single fiber.
struct WarpedSpec {
    std::string id;
    Interval dom;
    std::function<Jet(const Jet&)> warp;   // phi(r)
    std::function<Jet(const Jet&)> pot;    // u(r)
    double mu_of_m1;                       // mu = mu_of_m1 * (m - 1)
    std::string label3, labeln;
};

CatalogEntry make_unit_warped(const WarpedSpec& spec, Params pool, double fs,
                              MetricField fiber, double fiber_einstein) {
    CatalogEntry e;
    e.id = spec.id;
    const int n = take_int(pool, e.params, e.id, "n", 3, 3);
    const double m = take_m(pool, e.params, e.id);
    no_leftovers(pool, e.id);

    fiber = scaled_metric(fiber, fs);
    e.qe.g = warped_metric("t", spec.dom, spec.warp, fiber);
    e.qe.u = radial_field(e.qe.g.chart, spec.pot);
    e.qe.m = m;
    e.qe.lambda = -(m + n - 1);

    e.expected.mu = spec.mu_of_m1 * (m - 1.0);
    e.expected.scalar_curvature = -static_cast<double>(n) * (n - 1);
    e.expected.t_flat = true;
    e.expected.einstein = true;
    e.expected.case_label = n == 3 ? spec.label3 : spec.labeln;
    e.expected.kappa = 0;
    e.notes.push_back(kUnitScaleNote);

    const MetricField base = line_metric("t", spec.dom);
    e.ricci_oracle = make_oracle({base, radial_field(base.chart, spec.warp), fiber,
                                  fiber_einstein / fs, std::nullopt, 0.0});
    return e;
}

CatalogEntry make_hyperbolic(Params pool, double fs) {
    Params res;
    const int n = take_int(pool, res, "hyperbolic", "n", 3, 3);
    pool["n"] = n;
    WarpedSpec spec{"hyperbolic",
                    {0.2, 2.0},
                    [](const Jet& t) { return sinh(t); },
                    [](const Jet& t) { return cosh(t); },
                    -1.0,
                    "ThmA(i)",
                    "ThmB(iv)"};
    return make_unit_warped(spec, std::move(pool), fs, sphere_metric(n - 1),
                            static_cast<double>(n - 2));
}

CatalogEntry make_cosh_cylinder(Params pool, double fs) {
    Params res;
    const int n = take_int(pool, res, "cosh_cylinder", "n", 3, 3);
    pool["n"] = n;
    WarpedSpec spec{"cosh_cylinder",
                    {0.2, 2.0},
                    [](const Jet& t) { return cosh(t); },
                    [](const Jet& t) { return sinh(t); },
                    1.0,
                    "ThmA(ii)",
                    "ThmB(v)"};
    CatalogEntry e =
        make_unit_warped(spec, std::move(pool), fs,
                         einstein_model(n - 1, -(n - 2.0), "cosh_cylinder"),
                         -(n - 2.0));
    e.notes.push_back(
        "fiber is the unit-scale negatively curved Einstein space (constant -(n-2)); "
        "a round-sphere fiber does not satisfy the defining system");
    return e;
}

CatalogEntry make_exp_cigar(Params pool, double fs) {
    Params res;
    const int n = take_int(pool, res, "exp_cigar", "n", 3, 3);
    pool["n"] = n;
    WarpedSpec spec{"exp_cigar",
                    {-1.0, 1.5},
                    [](const Jet& t) { return exp(t); },
                    [](const Jet& t) { return exp(t); },
                    0.0,
                    "ThmA(iv)",
                    "ThmB(vi)"};
    CatalogEntry e = make_unit_warped(spec, std::move(pool), fs,
                                      flat_box("f", n - 1, {-1.0, 1.0}), 0.0);
    e.notes.push_back(
        "warp and potential grow at the same unit rate e^t; the metric block "
        "carries e^{2t}");
    return e;
}

// Unwarped products R x N with N negatively curved Einstein.
CatalogEntry make_product(const std::string& id, int pot_kind, Params pool, double fs) {
    CatalogEntry e;
    e.id = id;
    const int n = take_int(pool, e.params, e.id, "n", 3, 3);
    const double m = take_m(pool, e.params, e.id);
    const double lambda = take(pool, e.params, "lambda", -m);
    require(lambda < 0.0, e.id, "lambda must be negative");
    no_leftovers(pool, e.id);

    const double omega = std::sqrt(-lambda / m);
    const Interval dom = pot_kind > 0 ? Interval{0.2, 2.2} : Interval{-1.5, 1.5};
    const MetricField fiber = scaled_metric(einstein_model(n - 1, lambda, e.id), fs);
    e.qe.g = product_metric(line_metric("t", dom), fiber);
    switch (pot_kind) {
    case -1:  // cosh: mu < 0
        e.qe.u = radial_field(e.qe.g.chart, [omega](const Jet& t) { return cosh(t * omega); });
        e.expected.mu = lambda * (m - 1.0) / m;
        e.expected.case_label = n == 3 ? "ThmA(v)" : "ThmB(vii)";
        break;
    case 0:   // exp: mu = 0
        e.qe.u = radial_field(e.qe.g.chart, [omega](const Jet& t) { return exp(t * omega); });
        e.expected.mu = 0.0;
        e.expected.case_label = "ThmB(viii)";
        break;
    default:  // sinh: mu > 0
        e.qe.u = radial_field(e.qe.g.chart, [omega](const Jet& t) { return sinh(t * omega); });
        e.expected.mu = -lambda * (m - 1.0) / m;
        e.expected.case_label = n == 3 ? "ThmA(iii)" : "ThmB(ix)";
        break;
    }
    e.qe.m = m;
    e.qe.lambda = lambda;

    e.expected.scalar_curvature = (n - 1) * lambda;
    e.expected.t_flat = true;
    e.expected.einstein = false;
    e.expected.kappa = n - 1;

    const MetricField base = line_metric("t", dom);
    e.ricci_oracle =
        make_oracle({base, radial_field(base.chart, unit_warp()), fiber, lambda / fs,
                     std::nullopt, 0.0});
    return e;
}

// Rigid families: warped block over a 1-dimensional axis times an unwarped
// lambda-Einstein factor N^q.  Not flat for the coupling 3-tensor.
CatalogEntry make_rigid(const std::string& id, int pot_kind, Params pool, double fs) {
    CatalogEntry e;
    e.id = id;
    const int q = take_int(pool, e.params, e.id, "q", 2, 2);
    const int n = take_int(pool, e.params, e.id, "n", q + 2, q + 2);
    const double m = take_m(pool, e.params, e.id);
    no_leftovers(pool, e.id);

    const int p = n - q - 1;
    const double lambda = -(m + n - q - 1);
    MetricField axis_fiber;
    double axis_einstein = 0.0;
    std::function<Jet(const Jet&)> warp, pot;
    Interval dom{0.1, 2.0};
    switch (pot_kind) {
    case -1:  // (f): sinh warp over a sphere, cosh potential
        axis_fiber = sphere_metric(p);
        axis_einstein = p - 1.0;
        warp = [](const Jet& t) { return sinh(t); };
        pot = [](const Jet& t) { return cosh(t); };
        e.expected.mu = -(m - 1.0);
        e.expected.rigid_hint = "rigid(f)";
        e.notes.push_back(
            "lambda = -(m+n-q-1) < 0; the defining system has no solution of this "
            "shape with the opposite sign");
        break;
    case 0:   // (e): exponential warp over a flat factor
        axis_fiber = flat_box("f", p, {-1.0, 1.0});
        warp = [](const Jet& t) { return exp(t); };
        pot = [](const Jet& t) { return exp(t); };
        dom = {-1.0, 1.5};
        e.expected.mu = 0.0;
        e.expected.rigid_hint = "rigid(e)";
        break;
    default:  // (d): cosh warp over a negatively curved factor
        axis_fiber = einstein_model(p, -(p - 1.0), e.id);
        axis_einstein = -(p - 1.0);
        warp = [](const Jet& t) { return cosh(t); };
        pot = [](const Jet& t) { return sinh(t); };
        e.expected.mu = m - 1.0;
        e.expected.rigid_hint = "rigid(d)";
        break;
    }

    axis_fiber = scaled_metric(axis_fiber, fs);
    const MetricField tail = with_prefix(einstein_model(q, lambda, e.id), "n_");
    e.qe.g = product_metric(warped_metric("r", dom, warp, axis_fiber), tail);
    e.qe.u = radial_field(e.qe.g.chart, pot);
    e.qe.m = m;
    e.qe.lambda = lambda;

    e.expected.scalar_curvature =
        -static_cast<double>(n - q) * (n - q - 1) - q * (m + n - q - 1);
    e.expected.t_flat = false;
    e.expected.einstein = false;
    e.expected.case_label = "no match";
    e.expected.kappa = q;

    const MetricField base = line_metric("r", dom);
    e.ricci_oracle = make_oracle({base, radial_field(base.chart, warp), axis_fiber,
                                  axis_einstein / fs, tail, lambda});
    return e;
}

CatalogEntry make_exampleA(Params pool, double fs) {
    Params res;
    const int p = take_int(pool, res, "exampleA", "p", 1, 1);
    const int q = take_int(pool, res, "exampleA", "q", 2, 2);
    const double m = take_m(pool, res, "exampleA");
    no_leftovers(pool, "exampleA");

    Params mapped{{"n", static_cast<double>(p + q + 1)},
                  {"q", static_cast<double>(q)},
                  {"m", m}};
    CatalogEntry e = make_rigid("exampleA", -1, std::move(mapped), fs);
    e.id = "exampleA";
    e.params = res;
    return e;
}

// The constant-curvature surfaces with a one-dimensional fiber.  Always
// pointwise Einstein; the coupling 3-tensor is undefined below dimension 3.
CatalogEntry make_twod(const std::string& id, Params pool) {
    CatalogEntry e;
    e.id = id;
    const double m = take_m(pool, e.params, e.id);
    no_leftovers(pool, e.id);
    e.qe.m = m;

    const MetricField fiber = line_metric("x", {-1.5, 1.5});
    Interval dom{0.2, 2.0};
    std::function<Jet(const Jet&)> warp, pot;
    if (id == "twod_flat") {
        warp = unit_warp();
        pot = [](const Jet& t) { return t; };
        e.qe.lambda = 0.0;
        e.expected.mu = m - 1.0;
        e.expected.scalar_curvature = 0.0;
        e.expected.case_label = "2D(i)";
    } else if (id == "twod_cosh") {
        warp = [](const Jet& t) { return cosh(t); };
        pot = [](const Jet& t) { return sinh(t); };
        e.qe.lambda = -(m + 1.0);
        e.expected.mu = m - 1.0;
        e.expected.scalar_curvature = -2.0;
        e.expected.case_label = "2D(ii)";
        e.expected.kappa = 0;
    } else if (id == "twod_exp") {
        warp = [](const Jet& t) { return exp(t); };
        pot = [](const Jet& t) { return exp(t); };
        dom = {-1.0, 1.5};
        e.qe.lambda = -(m + 1.0);
        e.expected.mu = 0.0;
        e.expected.scalar_curvature = -2.0;
        e.expected.case_label = "2D(iii)";
        e.expected.kappa = 0;
    } else {  // twod_hyperbolic
        warp = [](const Jet& t) { return sinh(t); };
        pot = [](const Jet& t) { return cosh(t); };
        e.qe.lambda = -(m + 1.0);
        e.expected.mu = -(m - 1.0);
        e.expected.scalar_curvature = -2.0;
        e.expected.case_label = "2D(iv)";
        e.expected.kappa = 0;
    }
    e.qe.g = warped_metric("r", dom, warp, fiber);
    e.qe.u = radial_field(e.qe.g.chart, pot);
    e.expected.t_flat = std::nullopt;
    e.expected.einstein = true;

    const MetricField base = line_metric("r", dom);
    e.ricci_oracle = make_oracle(
        {base, radial_field(base.chart, warp), fiber, 0.0, std::nullopt, 0.0});
    return e;
}

} // namespace

const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids{
        "hemisphere",   "cylinder",     "half_line_flat", "hyperbolic",
        "cosh_cylinder", "exp_cigar",   "product_cosh",   "product_exp",
        "product_sinh", "product_R_H2", "prop_rigid_a",   "prop_rigid_b",
        "prop_rigid_c", "prop_rigid_d", "prop_rigid_e",   "prop_rigid_f",
        "exampleA",     "twod_flat",    "twod_cosh",      "twod_exp",
        "twod_hyperbolic"};
    return ids;
}

CatalogEntry build_entry(const std::string& id, const Params& params,
                         const Perturbation& pert) {
    if (!(pert.fiber_scale > 0.0)) throw ParamError("fiber_scale must be positive");
    Params pool = params;
    const double fs = pert.fiber_scale;

    CatalogEntry e;
    if (id == "hemisphere") {
        e = make_hemisphere(std::move(pool), fs);
    } else if (id == "cylinder") {
        e = make_cylinder(std::move(pool), fs);
    } else if (id == "half_line_flat") {
        e = make_half_line_flat(std::move(pool), fs);
    } else if (id == "hyperbolic") {
        e = make_hyperbolic(std::move(pool), fs);
    } else if (id == "cosh_cylinder") {
        e = make_cosh_cylinder(std::move(pool), fs);
    } else if (id == "exp_cigar") {
        e = make_exp_cigar(std::move(pool), fs);
    } else if (id == "product_cosh") {
        e = make_product(id, -1, std::move(pool), fs);
    } else if (id == "product_exp") {
        e = make_product(id, 0, std::move(pool), fs);
    } else if (id == "product_sinh") {
        e = make_product(id, 1, std::move(pool), fs);
    } else if (id == "product_R_H2") {
        Params res;
        const double m = take_m(pool, res, id);
        const double lambda = take(pool, res, "lambda", -1.0);
        no_leftovers(pool, id);
        Params mapped{{"n", 3.0}, {"m", m}, {"lambda", lambda}};
        e = make_product(id, -1, std::move(mapped), fs);
        e.params = res;
    } else if (id == "prop_rigid_a" || id == "prop_rigid_b" || id == "prop_rigid_c") {
        Params res;
        const int q = take_int(pool, res, id, "q", 2, 2);
        const double m = take_m(pool, res, id);
        no_leftovers(pool, id);
        Params mapped{{"n", static_cast<double>(q + 1)}, {"m", m}, {"lambda", -m}};
        const int kind = id == "prop_rigid_a" ? 1 : (id == "prop_rigid_b" ? 0 : -1);
        e = make_product(id, kind, std::move(mapped), fs);
        e.params = res;
        e.expected.kappa = q;
    } else if (id == "prop_rigid_d") {
        e = make_rigid(id, 1, std::move(pool), fs);
    } else if (id == "prop_rigid_e") {
        e = make_rigid(id, 0, std::move(pool), fs);
    } else if (id == "prop_rigid_f") {
        e = make_rigid(id, -1, std::move(pool), fs);
    } else if (id == "exampleA") {
        e = make_exampleA(std::move(pool), fs);
    } else if (id == "twod_flat" || id == "twod_cosh" || id == "twod_exp" ||
               id == "twod_hyperbolic") {
        e = make_twod(id, std::move(pool));
    } else {
        throw ParamError("unknown catalog entry " + id);
    }

    if (pert.lambda_delta != 0.0) e.qe.lambda += pert.lambda_delta;
    if (pert.u_shift != 0.0) e.qe.u = shifted_field(e.qe.u, pert.u_shift);
    return e;
}

double expected_scalar_curvature(const std::string& id, const Params& params) {
    return build_entry(id, params).expected.scalar_curvature;
}

QEStructure rescaled(const QEStructure& qe, double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw ParamError("rescaling factor must be positive and finite");
    QEStructure out = qe;
    out.g = scaled_metric(qe.g, c * c);
    out.lambda = qe.lambda / (c * c);
    return out;
}

} // namespace qemlab
