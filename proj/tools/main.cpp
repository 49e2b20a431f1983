// qemlab: verify, classify and report on the catalog of quasi-Einstein
// structures.
//
// Subcommands
//   verify    run the pointwise identity suite on one catalog entry
//   classify  measure invariants and match the entry against the case tables
//   spectrum  print the admissible scalar-curvature levels for (n, m, lambda)
//   suite     run every entry through verify + classify and compare against
//             the recorded expectations
//
// Exit codes: 0 pass, 1 identity/outcome failure, 2 usage error, 3 numeric
// or internal error.  JSON output is byte-stable for a fixed config and seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "qemlab/catalog.hpp"
#include "qemlab/chart.hpp"
#include "qemlab/classify.hpp"
#include "qemlab/errors.hpp"
#include "qemlab/qe_verify.hpp"

namespace {

using namespace qemlab;

// Failures with residuals beyond this are genuine identity violations; below
// it they are artifacts of a stricter-than-default tolerance request.
constexpr double kReferenceTolerance = 1e-7;

// UTF-8 for the middle dot and lambda used in rational rendering, kept as
// explicit escapes so the source survives any editor re-encoding.
constexpr const char* kDotLambda = "\xc2\xb7\xce\xbb";

// --------------------------------------------------------------- JSON tree

std::string json_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct JVal {
    enum Kind { Null, Bool, Int, UInt, Dbl, Str, Arr, Obj };
    Kind kind = Null;
    bool b = false;
    long long i = 0;
    unsigned long long u = 0;
    double d = 0.0;
    std::string s;
    std::vector<JVal> items;
    std::vector<std::pair<std::string, JVal>> fields;

    static JVal null() { return {}; }
    static JVal of(bool v) { JVal j; j.kind = Bool; j.b = v; return j; }
    static JVal of(int v) { JVal j; j.kind = Int; j.i = v; return j; }
    static JVal of(long long v) { JVal j; j.kind = Int; j.i = v; return j; }
    static JVal of(std::uint64_t v) { JVal j; j.kind = UInt; j.u = v; return j; }
    static JVal of(double v) { JVal j; j.kind = Dbl; j.d = v; return j; }
    static JVal of(std::string v) { JVal j; j.kind = Str; j.s = std::move(v); return j; }
    static JVal of(const char* v) { return of(std::string(v)); }
    static JVal array() { JVal j; j.kind = Arr; return j; }
    static JVal object() { JVal j; j.kind = Obj; return j; }

    JVal& add(const std::string& key, JVal v) {
        fields.emplace_back(key, std::move(v));
        return *this;
    }
    JVal& push(JVal v) {
        items.push_back(std::move(v));
        return *this;
    }

    void write(std::string& out, int depth) const;
};

void escape_to(const std::string& text, std::string& out) {
    out += '"';
    for (unsigned char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
}

void JVal::write(std::string& out, int depth) const {
    switch (kind) {
    case Null: out += "null"; return;
    case Bool: out += b ? "true" : "false"; return;
    case Int: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", i);
        out += buf;
        return;
    }
    case UInt: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%llu", u);
        out += buf;
        return;
    }
    case Dbl: out += json_double(d); return;
    case Str: escape_to(s, out); return;
    case Arr: {
        if (items.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < items.size(); ++k) {
            out.append(static_cast<std::size_t>(depth + 1) * 2, ' ');
            items[k].write(out, depth + 1);
            if (k + 1 < items.size()) out += ',';
            out += '\n';
        }
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
        out += ']';
        return;
    }
    case Obj: {
        if (fields.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        for (std::size_t k = 0; k < fields.size(); ++k) {
            out.append(static_cast<std::size_t>(depth + 1) * 2, ' ');
            escape_to(fields[k].first, out);
            out += ": ";
            fields[k].second.write(out, depth + 1);
            if (k + 1 < fields.size()) out += ',';
            out += '\n';
        }
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
        out += '}';
        return;
    }
    }
}

std::string render(const JVal& root) {
    std::string out;
    root.write(out, 0);
    out += '\n';
    return out;
}

// --------------------------------------------------------- text formatting

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_res(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string lpad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

std::string params_line(const Params& p) {
    std::string out;
    for (const auto& [k, v] : p) {
        if (!out.empty()) out += ' ';
        out += k + "=" + fmt(v);
    }
    return out.empty() ? std::string("(none)") : out;
}

std::string rational_lambda(long long num, long long den) {
    return std::to_string(num) + "/" + std::to_string(den) + kDotLambda;
}

// ------------------------------------------------------------------ config

struct RunConfig {
    std::string entry;
    Params params;
    Perturbation pert;
    int points = 50;
    std::uint64_t seed = 42;
    double tolerance = kReferenceTolerance;
    std::string format = "text";
    std::string output;
    std::string filter;  // suite only
};

std::uint64_t env_seed_or_default() {
    const char* e = std::getenv("QEMLAB_SEED");
    if (e == nullptr || *e == '\0') return 42;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(e, &end, 10);
    if (end == e || *end != '\0')
        throw ParamError("QEMLAB_SEED must be an unsigned integer, got '" + std::string(e) + "'");
    return v;
}

std::map<std::string, double> parse_kv(const std::string& text, const std::string& flag) {
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string tok = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (tok.empty()) {
            if (text.empty()) break;
            throw ParamError(flag + ": empty key=value item");
        }
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParamError(flag + ": expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(val.c_str(), &end);
        if (val.empty() || end != val.c_str() + val.size())
            throw ParamError(flag + ": value for '" + key + "' is not a number: '" + val + "'");
        if (!out.emplace(key, v).second)
            throw ParamError(flag + ": duplicate key '" + key + "'");
    }
    return out;
}

Perturbation parse_perturb(const std::string& text) {
    Perturbation p;
    for (const auto& [k, v] : parse_kv(text, "--perturb")) {
        if (k == "lambda")
            p.lambda_delta = v;
        else if (k == "u")
            p.u_shift = v;
        else if (k == "fiber")
            p.fiber_scale = v;
        else
            throw ParamError("--perturb keys are lambda, u, fiber; got '" + k + "'");
    }
    return p;
}

bool nontrivial(const Perturbation& p) {
    return p.lambda_delta != 0.0 || p.u_shift != 0.0 || p.fiber_scale != 1.0;
}

void write_out(const std::string& path, const std::string& doc) {
    if (path.empty()) {
        std::fwrite(doc.data(), 1, doc.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParamError("cannot open output file '" + path + "'");
    f.write(doc.data(), static_cast<std::streamsize>(doc.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

// ------------------------------------------------------------------ verify

JVal params_json(const Params& p) {
    JVal j = JVal::object();
    for (const auto& [k, v] : p) j.add(k, JVal::of(v));
    return j;
}

JVal perturbation_json(const Perturbation& p) {
    JVal j = JVal::object();
    j.add("lambda_delta", JVal::of(p.lambda_delta));
    j.add("u_shift", JVal::of(p.u_shift));
    j.add("fiber_scale", JVal::of(p.fiber_scale));
    return j;
}

JVal notes_json(const std::vector<std::string>& notes) {
    JVal j = JVal::array();
    for (const auto& n : notes) j.push(JVal::of(n));
    return j;
}

JVal checks_json(const std::vector<IdentityReport>& checks) {
    JVal arr = JVal::array();
    for (const auto& c : checks) {
        JVal j = JVal::object();
        j.add("identity", JVal::of(c.identity_id));
        j.add("status", JVal::of(c.status == CheckStatus::Checked ? "checked" : "not applicable"));
        j.add("points", JVal::of(c.points_checked));
        j.add("max_residual", JVal::of(c.max_residual));
        j.add("tolerance", JVal::of(c.tolerance));
        j.add("pass", JVal::of(c.pass));
        j.add("note", JVal::of(c.note));
        arr.push(std::move(j));
    }
    return arr;
}

bool all_checked_pass(const std::vector<IdentityReport>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityReport& c) {
        return c.status != CheckStatus::Checked || c.pass;
    });
}

std::string verify_json(const RunConfig& cfg, const CatalogEntry& e,
                        const std::vector<IdentityReport>& checks,
                        const MeasuredConstants& mc, bool pass) {
    JVal root = JVal::object();
    root.add("schema_version", JVal::of(1));
    root.add("command", JVal::of("verify"));
    root.add("entry", JVal::of(e.id));
    root.add("params", params_json(e.params));
    root.add("perturbation", perturbation_json(cfg.pert));
    root.add("points", JVal::of(cfg.points));
    root.add("seed", JVal::of(cfg.seed));
    root.add("tolerance", JVal::of(cfg.tolerance));

    JVal expected = JVal::object();
    expected.add("mu", JVal::of(e.expected.mu));
    expected.add("scalar_curvature", JVal::of(e.expected.scalar_curvature));
    root.add("expected", std::move(expected));

    JVal measured = JVal::object();
    measured.add("mu_mean", JVal::of(mc.mu_mean));
    measured.add("mu_spread", JVal::of(mc.mu_spread));
    measured.add("scalar_curvature_mean", JVal::of(mc.r_mean));
    measured.add("scalar_curvature_spread", JVal::of(mc.r_spread));
    root.add("measured", std::move(measured));

    root.add("notes", notes_json(e.notes));
    root.add("checks", checks_json(checks));
    root.add("pass", JVal::of(pass));
    return render(root);
}

std::string verify_text(const RunConfig& cfg, const CatalogEntry& e,
                        const std::vector<IdentityReport>& checks,
                        const MeasuredConstants& mc, bool pass) {
    std::string out;
    out += "qemlab verify  entry=" + e.id + "\n";
    out += "params: " + params_line(e.params) + "\n";
    if (nontrivial(cfg.pert)) {
        out += "perturbation: lambda_delta=" + fmt(cfg.pert.lambda_delta) +
               " u_shift=" + fmt(cfg.pert.u_shift) +
               " fiber_scale=" + fmt(cfg.pert.fiber_scale) + "\n";
    }
    out += "points=" + std::to_string(cfg.points) + " seed=" + std::to_string(cfg.seed) +
           " tolerance=" + fmt(cfg.tolerance) + "\n";
    out += "expected:  mu=" + fmt(e.expected.mu) +
           "  R=" + fmt(e.expected.scalar_curvature) + "\n";
    out += "measured:  mu=" + fmt(mc.mu_mean) + " (spread " + fmt_res(mc.mu_spread) + ")" +
           "  R=" + fmt(mc.r_mean) + " (spread " + fmt_res(mc.r_spread) + ")\n";
    for (const auto& n : e.notes) out += "note: " + n + "\n";
    out += "\n";
    out += pad("identity", 24) + lpad("points", 7) + lpad("max residual", 15) + "  outcome\n";
    for (const auto& c : checks) {
        out += pad(c.identity_id, 24);
        out += lpad(std::to_string(c.points_checked), 7);
        if (c.status == CheckStatus::Checked) {
            out += lpad(fmt_res(c.max_residual), 15);
            out += c.pass ? "  pass" : "  FAIL";
        } else {
            out += lpad("-", 15);
            out += "  n/a ";
        }
        if (!c.note.empty()) out += "  (" + c.note + ")";
        out += "\n";
    }
    int checked = 0, failed = 0;
    for (const auto& c : checks)
        if (c.status == CheckStatus::Checked) {
            ++checked;
            if (!c.pass) ++failed;
        }
    out += "\nresult: " + std::string(pass ? "PASS" : "FAIL") + " (" +
           std::to_string(checked - failed) + "/" + std::to_string(checked) +
           " checked identities pass)\n";
    return out;
}

int run_verify(const RunConfig& cfg) {
    const CatalogEntry e = build_entry(cfg.entry, cfg.params, cfg.pert);
    const PointList pts = sample_points(*e.qe.g.chart, cfg.points, cfg.seed);
    VerifyOptions opt;
    opt.tolerance = cfg.tolerance;
    const std::vector<IdentityReport> checks = verify_all(e.qe, pts, opt);
    const MeasuredConstants mc = measure_constants(e.qe, pts);
    const bool pass = all_checked_pass(checks);
    write_out(cfg.output, cfg.format == "json" ? verify_json(cfg, e, checks, mc, pass)
                                               : verify_text(cfg, e, checks, mc, pass));
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------- classify

JVal t_flat_json(const TFlatResult& t) {
    JVal j = JVal::object();
    j.add("is_t_flat", JVal::of(t.is_t_flat));
    j.add("branch", JVal::of(branch_name(t.which_branch)));
    j.add("t_norm_sq_max", JVal::of(t.t_norm_sq_max));
    j.add("einstein_branch_r", JVal::of(t.einstein_branch_r));
    j.add("product_branch_r", JVal::of(t.product_branch_r));
    j.add("r_measured", JVal::of(t.r_measured));
    j.add("distinct_ric_eigenvalues", JVal::of(t.distinct_ric_eigenvalues));
    j.add("dominant_multiplicity", JVal::of(t.dominant_multiplicity));
    j.add("eigen_structure_consistent", JVal::of(t.eigen_structure_consistent));
    j.add("note", JVal::of(t.note));
    return j;
}

JVal classification_json(const ClassificationReport& r) {
    JVal j = JVal::object();
    j.add("n", JVal::of(r.n));
    j.add("m", JVal::of(r.m));
    j.add("lambda", JVal::of(r.lambda));
    j.add("points_used", JVal::of(r.points_used));
    j.add("constant_r", JVal::of(r.constant_r));
    j.add("scalar_curvature_mean", JVal::of(r.r_mean));
    j.add("scalar_curvature_spread", JVal::of(r.r_spread));
    j.add("mu_mean", JVal::of(r.mu_mean));
    j.add("mu_spread", JVal::of(r.mu_spread));
    j.add("mu_sign", JVal::of(r.mu_sign));
    j.add("einstein_deviation", JVal::of(r.einstein_deviation));
    j.add("einstein", JVal::of(r.einstein));
    j.add("t_flat", r.t_flat ? t_flat_json(*r.t_flat) : JVal::null());
    j.add("radial_ric_eigenvalue", JVal::of(r.radial_ric_eigenvalue));
    JVal spec = JVal::array();
    for (const auto& ev : r.ric_spectrum) {
        JVal row = JVal::object();
        row.add("value", JVal::of(ev.value));
        row.add("multiplicity", JVal::of(ev.multiplicity));
        spec.push(std::move(row));
    }
    j.add("ric_spectrum", std::move(spec));
    j.add("kappa", r.kappa ? JVal::of(*r.kappa) : JVal::null());
    j.add("matched_case", JVal::of(r.matched_case));
    j.add("rigid_hint", JVal::of(r.rigid_hint));
    j.add("diagnostics", notes_json(r.diagnostics));
    j.add("assumptions", notes_json(r.assumptions));
    return j;
}

std::string classify_json(const RunConfig& cfg, const CatalogEntry& e,
                          const ClassificationReport& r) {
    JVal root = JVal::object();
    root.add("schema_version", JVal::of(1));
    root.add("command", JVal::of("classify"));
    root.add("entry", JVal::of(e.id));
    root.add("params", params_json(e.params));
    root.add("points", JVal::of(cfg.points));
    root.add("seed", JVal::of(cfg.seed));
    root.add("classification", classification_json(r));
    root.add("notes", notes_json(e.notes));
    return render(root);
}

std::string classify_text(const RunConfig& cfg, const CatalogEntry& e,
                          const ClassificationReport& r) {
    std::string out;
    out += "qemlab classify  entry=" + e.id + "\n";
    out += "params: " + params_line(e.params) + "\n";
    out += "points=" + std::to_string(cfg.points) + " seed=" + std::to_string(cfg.seed) + "\n";
    out += "n=" + std::to_string(r.n) + " m=" + fmt(r.m) + " lambda=" + fmt(r.lambda) + "\n";
    out += "scalar curvature: " + fmt(r.r_mean) + " (spread " + fmt_res(r.r_spread) + ", " +
           (r.constant_r ? "constant" : "NOT constant") + ")\n";
    const char* sign = r.mu_sign > 0 ? "+" : (r.mu_sign < 0 ? "-" : "0");
    out += "mu: " + fmt(r.mu_mean) + " (spread " + fmt_res(r.mu_spread) + ", sign " + sign +
           ")\n";
    out += "einstein deviation: " + fmt_res(r.einstein_deviation) +
           (r.einstein ? "  (einstein)" : "  (not einstein)") + "\n";
    std::string spec;
    for (const auto& ev : r.ric_spectrum) {
        if (!spec.empty()) spec += ", ";
        spec += fmt(ev.value) + " x" + std::to_string(ev.multiplicity);
    }
    out += "ricci spectrum: " + spec + "   radial eigenvalue " + fmt(r.radial_ric_eigenvalue) +
           "\n";
    if (r.t_flat) {
        const TFlatResult& t = *r.t_flat;
        out += std::string("T-flat: ") + (t.is_t_flat ? "yes" : "no") + "  branch: " +
               branch_name(t.which_branch) + "  |T|^2(normalized) " + fmt_res(t.t_norm_sq_max) +
               "\n";
        if (!t.note.empty()) out += "T-flat note: " + t.note + "\n";
    } else {
        out += "T-flat: not tested (needs dimension >= 3 and constant scalar curvature)\n";
    }
    out += "kappa: " + (r.kappa ? std::to_string(*r.kappa) : std::string("-")) + "\n";
    out += "case: " + r.matched_case + "\n";
    if (!r.rigid_hint.empty()) out += "rigid hint: " + r.rigid_hint + "\n";
    for (const auto& d : r.diagnostics) out += "diagnostic: " + d + "\n";
    for (const auto& a : r.assumptions) out += "assumption: " + a + "\n";
    for (const auto& n : e.notes) out += "note: " + n + "\n";
    return out;
}

int run_classify(const RunConfig& cfg) {
    const CatalogEntry e = build_entry(cfg.entry, cfg.params, cfg.pert);
    const PointList pts = sample_points(*e.qe.g.chart, cfg.points, cfg.seed);
    const ClassificationReport r = classify(e.qe, pts);
    write_out(cfg.output,
              cfg.format == "json" ? classify_json(cfg, e, r) : classify_text(cfg, e, r));
    return 0;
}

// ---------------------------------------------------------------- spectrum

std::string spectrum_json(const SpectrumTable& t) {
    JVal root = JVal::object();
    root.add("schema_version", JVal::of(1));
    root.add("command", JVal::of("spectrum"));
    root.add("n", JVal::of(t.n));
    JVal m = JVal::object();
    m.add("numerator", JVal::of(t.m.num));
    m.add("denominator", JVal::of(t.m.den));
    m.add("value", JVal::of(rational_value(t.m)));
    root.add("m", std::move(m));
    root.add("lambda", JVal::of(t.lambda));
    JVal rows = JVal::array();
    for (const auto& r : t.rows) {
        JVal row = JVal::object();
        row.add("kappa", JVal::of(r.kappa));
        row.add("numerator", JVal::of(r.num));
        row.add("denominator", JVal::of(r.den));
        row.add("rational", JVal::of(rational_lambda(r.num, r.den)));
        row.add("value", JVal::of(r.value));
        rows.push(std::move(row));
    }
    root.add("rows", std::move(rows));
    return render(root);
}

std::string spectrum_csv(const SpectrumTable& t) {
    std::string out = "kappa,numerator,denominator,value_decimal\n";
    for (const auto& r : t.rows) {
        out += std::to_string(r.kappa) + "," + std::to_string(r.num) + "," +
               std::to_string(r.den) + "," + json_double(r.value) + "\n";
    }
    return out;
}

std::string spectrum_text(const SpectrumTable& t) {
    std::string out = "admissible scalar curvatures  n=" + std::to_string(t.n) +
                      " m=" + std::to_string(t.m.num) + "/" + std::to_string(t.m.den) +
                      " lambda=" + fmt(t.lambda) + "\n";
    out += pad("kappa", 7) + pad("coefficient", 15) + "value\n";
    for (const auto& r : t.rows) {
        // the dot and lambda take 4 bytes but 2 display columns; pad 2 extra
        const std::string coeff =
            std::to_string(r.num) + "/" + std::to_string(r.den) + kDotLambda;
        out += pad(std::to_string(r.kappa), 7) + pad(coeff, 17) + fmt(r.value) + "\n";
    }
    return out;
}

int run_spectrum(int n, const std::string& m_text, double lambda, const std::string& format,
                 const std::string& output) {
    const Rational m = rational_from_string(m_text);
    const SpectrumTable t = admissible_spectrum(n, m, lambda);
    std::string doc;
    if (format == "json")
        doc = spectrum_json(t);
    else if (format == "csv")
        doc = spectrum_csv(t);
    else
        doc = spectrum_text(t);
    write_out(output, doc);
    return 0;
}

// ------------------------------------------------------------------- suite

struct CheckFailure {
    std::string identity;
    double residual = 0.0;
    std::string kind;  // IDENTITY or TOLERANCE
};

struct EntryResult {
    std::string id;
    Params params;
    ExpectedValues expected;
    std::vector<std::string> notes;
    std::vector<IdentityReport> checks;
    MeasuredConstants mc;
    ClassificationReport cls;

    int checked = 0;
    int not_applicable = 0;
    std::vector<CheckFailure> failures;
    std::string worst_identity;
    double worst_residual = 0.0;

    bool verify_ok = true;
    bool constants_ok = true;
    bool case_ok = true;
    bool t_flat_ok = true;
    bool ok = true;
};

EntryResult run_entry(const std::string& id, const RunConfig& cfg) {
    EntryResult r;
    r.id = id;
    const CatalogEntry e = build_entry(id);
    r.params = e.params;
    r.expected = e.expected;
    r.notes = e.notes;

    const PointList pts = sample_points(*e.qe.g.chart, cfg.points, cfg.seed);
    VerifyOptions opt;
    opt.tolerance = cfg.tolerance;
    r.checks = verify_all(e.qe, pts, opt);
    r.mc = measure_constants(e.qe, pts);
    r.cls = classify(e.qe, pts);

    for (const auto& c : r.checks) {
        if (c.status != CheckStatus::Checked) {
            ++r.not_applicable;
            continue;
        }
        ++r.checked;
        if (c.max_residual > r.worst_residual) {
            r.worst_residual = c.max_residual;
            r.worst_identity = c.identity_id;
        }
        if (!c.pass) {
            r.failures.push_back(
                {c.identity_id, c.max_residual,
                 c.max_residual > kReferenceTolerance ? "IDENTITY" : "TOLERANCE"});
        }
    }
    r.verify_ok = r.failures.empty();

    const double ctol = 1e-6;
    r.constants_ok =
        std::abs(r.mc.mu_mean - e.expected.mu) <= ctol * (1.0 + std::abs(e.expected.mu)) &&
        std::abs(r.mc.r_mean - e.expected.scalar_curvature) <=
            ctol * (1.0 + std::abs(e.expected.scalar_curvature));

    r.case_ok = r.cls.matched_case == e.expected.case_label &&
                r.cls.kappa == e.expected.kappa && r.cls.rigid_hint == e.expected.rigid_hint;

    if (e.expected.t_flat)
        r.t_flat_ok = r.cls.t_flat && r.cls.t_flat->is_t_flat == *e.expected.t_flat;
    else
        r.t_flat_ok = !r.cls.t_flat.has_value() || !r.cls.t_flat->is_t_flat;

    r.ok = r.verify_ok && r.constants_ok && r.case_ok && r.t_flat_ok;
    return r;
}

JVal entry_json(const EntryResult& r) {
    JVal j = JVal::object();
    j.add("id", JVal::of(r.id));
    j.add("params", params_json(r.params));

    JVal exp = JVal::object();
    exp.add("mu", JVal::of(r.expected.mu));
    exp.add("scalar_curvature", JVal::of(r.expected.scalar_curvature));
    exp.add("case", JVal::of(r.expected.case_label));
    exp.add("kappa", r.expected.kappa ? JVal::of(*r.expected.kappa) : JVal::null());
    exp.add("rigid_hint", JVal::of(r.expected.rigid_hint));
    exp.add("t_flat", r.expected.t_flat ? JVal::of(*r.expected.t_flat) : JVal::null());
    j.add("expected", std::move(exp));

    JVal meas = JVal::object();
    meas.add("mu_mean", JVal::of(r.mc.mu_mean));
    meas.add("mu_spread", JVal::of(r.mc.mu_spread));
    meas.add("scalar_curvature_mean", JVal::of(r.mc.r_mean));
    meas.add("scalar_curvature_spread", JVal::of(r.mc.r_spread));
    meas.add("case", JVal::of(r.cls.matched_case));
    meas.add("kappa", r.cls.kappa ? JVal::of(*r.cls.kappa) : JVal::null());
    meas.add("rigid_hint", JVal::of(r.cls.rigid_hint));
    meas.add("t_flat", r.cls.t_flat ? JVal::of(r.cls.t_flat->is_t_flat) : JVal::null());
    j.add("measured", std::move(meas));

    JVal ver = JVal::object();
    ver.add("checked", JVal::of(r.checked));
    ver.add("not_applicable", JVal::of(r.not_applicable));
    ver.add("failed", JVal::of(static_cast<int>(r.failures.size())));
    JVal worst = JVal::object();
    worst.add("identity", JVal::of(r.worst_identity));
    worst.add("max_residual", JVal::of(r.worst_residual));
    ver.add("worst", std::move(worst));
    JVal fails = JVal::array();
    for (const auto& f : r.failures) {
        JVal fj = JVal::object();
        fj.add("identity", JVal::of(f.identity));
        fj.add("max_residual", JVal::of(f.residual));
        fj.add("kind", JVal::of(f.kind));
        fails.push(std::move(fj));
    }
    ver.add("failures", std::move(fails));
    j.add("verify", std::move(ver));

    JVal outcomes = JVal::object();
    outcomes.add("verify_ok", JVal::of(r.verify_ok));
    outcomes.add("constants_ok", JVal::of(r.constants_ok));
    outcomes.add("case_ok", JVal::of(r.case_ok));
    outcomes.add("t_flat_ok", JVal::of(r.t_flat_ok));
    outcomes.add("ok", JVal::of(r.ok));
    j.add("outcomes", std::move(outcomes));

    j.add("notes", notes_json(r.notes));
    return j;
}

std::string suite_json(const RunConfig& cfg, const std::vector<EntryResult>& results,
                       int met, bool pass) {
    JVal root = JVal::object();
    root.add("schema_version", JVal::of(1));
    root.add("command", JVal::of("suite"));
    root.add("points", JVal::of(cfg.points));
    root.add("seed", JVal::of(cfg.seed));
    root.add("tolerance", JVal::of(cfg.tolerance));
    root.add("filter", JVal::of(cfg.filter));
    JVal entries = JVal::array();
    for (const auto& r : results) entries.push(entry_json(r));
    root.add("entries", std::move(entries));
    JVal summary = JVal::object();
    summary.add("entries", JVal::of(static_cast<int>(results.size())));
    summary.add("met", JVal::of(met));
    summary.add("missed", JVal::of(static_cast<int>(results.size()) - met));
    root.add("summary", std::move(summary));
    root.add("pass", JVal::of(pass));
    return render(root);
}

std::string suite_text(const RunConfig& cfg, const std::vector<EntryResult>& results,
                       int met, bool pass) {
    std::string out;
    out += "qemlab suite  points=" + std::to_string(cfg.points) + " seed=" +
           std::to_string(cfg.seed) + " tolerance=" + fmt(cfg.tolerance);
    if (!cfg.filter.empty()) out += " filter=" + cfg.filter;
    out += "\n\n";
    out += pad("entry", 18) + lpad("dim", 4) + lpad("checks", 8) + lpad("worst", 12) + "  " +
           pad("case", 14) + pad("expected", 14) + "outcome\n";
    for (const auto& r : results) {
        const std::string shown =
            r.cls.matched_case == "no match" && !r.cls.rigid_hint.empty() ? r.cls.rigid_hint
                                                                          : r.cls.matched_case;
        const std::string want =
            r.expected.case_label == "no match" && !r.expected.rigid_hint.empty()
                ? r.expected.rigid_hint
                : r.expected.case_label;
        out += pad(r.id, 18);
        out += lpad(std::to_string(r.cls.n), 4);
        out += lpad(std::to_string(r.checked - static_cast<int>(r.failures.size())) + "/" +
                        std::to_string(r.checked),
                    8);
        out += lpad(fmt_res(r.worst_residual), 12);
        out += "  " + pad(shown, 14) + pad(want, 14);
        out += r.ok ? "ok" : "MISS";
        out += "\n";
        for (const auto& f : r.failures)
            out += "    " + f.kind + ": " + f.identity + " residual " + fmt_res(f.residual) +
                   "\n";
        if (!r.constants_ok)
            out += "    CONSTANTS: mu " + fmt(r.mc.mu_mean) + " vs " + fmt(r.expected.mu) +
                   ", R " + fmt(r.mc.r_mean) + " vs " + fmt(r.expected.scalar_curvature) + "\n";
        if (!r.case_ok)
            out += "    CASE: classified '" + r.cls.matched_case + "' expected '" +
                   r.expected.case_label + "'\n";
    }
    out += "\n" + std::to_string(met) + "/" + std::to_string(results.size()) +
           " entries met their expected outcomes\n";
    out += "suite: " + std::string(pass ? "PASS" : "FAIL") + "\n";
    return out;
}

std::vector<std::string> filter_ids(const std::string& filter) {
    const std::vector<std::string>& all = catalog_ids();
    if (filter.empty()) return all;
    std::vector<std::string> pats;
    std::size_t pos = 0;
    while (pos <= filter.size()) {
        std::size_t comma = filter.find(',', pos);
        if (comma == std::string::npos) comma = filter.size();
        const std::string tok = filter.substr(pos, comma - pos);
        if (!tok.empty()) pats.push_back(tok);
        pos = comma + 1;
    }
    std::vector<std::string> out;
    for (const auto& id : all) {
        for (const auto& p : pats) {
            if (id.find(p) != std::string::npos) {
                out.push_back(id);
                break;
            }
        }
    }
    return out;
}

int run_suite(const RunConfig& cfg) {
    std::vector<std::string> ids = filter_ids(cfg.filter);
    if (ids.empty()) throw ParamError("entry filter '" + cfg.filter + "' matches no entry");
    std::sort(ids.begin(), ids.end());

    std::vector<EntryResult> results;
    results.reserve(ids.size());
    for (const auto& id : ids) results.push_back(run_entry(id, cfg));

    int met = 0;
    for (const auto& r : results)
        if (r.ok) ++met;
    const bool pass = met == static_cast<int>(results.size());

    write_out(cfg.output, cfg.format == "json" ? suite_json(cfg, results, met, pass)
                                               : suite_text(cfg, results, met, pass));
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical checks for quasi-Einstein structures"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string params_text, perturb_text;

    // spectrum has its own parameter block
    int sp_n = 0;
    std::string sp_m;
    double sp_lambda = 0.0;

    auto add_common = [&](CLI::App* sub, bool with_entry) {
        if (with_entry) {
            sub->add_option("--entry", cfg.entry, "catalog entry id")->required();
            sub->add_option("--params", params_text,
                            "entry parameters as key=value[,key=value...]");
        }
        sub->add_option("--points", cfg.points, "sample point count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "sampling seed (env QEMLAB_SEED, then 42)");
        sub->add_option("--tolerance", cfg.tolerance, "residual tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--output", cfg.output, "write the report to this file");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the identity suite on one entry");
    add_common(verify, true);
    verify->add_option("--perturb", perturb_text,
                       "inject a defect: lambda=<delta>, u=<shift>, fiber=<scale>");
    verify->add_option("--format", cfg.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* classify_cmd = app.add_subcommand("classify", "match one entry to a case label");
    add_common(classify_cmd, true);
    classify_cmd->add_option("--format", cfg.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* spectrum = app.add_subcommand("spectrum", "admissible scalar-curvature table");
    spectrum->add_option("--n", sp_n, "manifold dimension")->required();
    spectrum->add_option("--m", sp_m, "parameter m, integer or fraction like 5/2")->required();
    spectrum->add_option("--lambda", sp_lambda, "Einstein constant, negative")->required();
    spectrum->add_option("--format", cfg.format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    spectrum->add_option("--output", cfg.output, "write the table to this file");

    CLI::App* suite = app.add_subcommand("suite", "verify + classify every catalog entry");
    add_common(suite, false);
    suite->add_option("--filter", cfg.filter,
                      "comma-separated id substrings; default runs everything");
    suite->add_option("--format", cfg.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return 2;
    }

    try {
        const bool seed_given = (verify->parsed() && verify->count("--seed") > 0) ||
                                (classify_cmd->parsed() && classify_cmd->count("--seed") > 0) ||
                                (suite->parsed() && suite->count("--seed") > 0);
        if (!seed_given) cfg.seed = env_seed_or_default();
        cfg.params = parse_kv(params_text, "--params");
        cfg.pert = parse_perturb(perturb_text);

        if (verify->parsed()) return run_verify(cfg);
        if (classify_cmd->parsed()) return run_classify(cfg);
        if (spectrum->parsed())
            return run_spectrum(sp_n, sp_m, sp_lambda, cfg.format, cfg.output);
        if (suite->parsed()) return run_suite(cfg);
        return 2;
    } catch (const ParamError& ex) {
        std::cerr << "qemlab: " << ex.what() << "\n";
        return 2;
    } catch (const Error& ex) {
        std::cerr << "qemlab: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "qemlab: " << ex.what() << "\n";
        return 3;
    }
}
