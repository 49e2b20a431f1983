#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qemlab/conformal.hpp"

namespace qemlab {

using Params = std::map<std::string, double>;

// Closed-form facts about a catalog entry, used as test and report oracles.
struct ExpectedValues {
    double mu = 0.0;
    double scalar_curvature = 0.0;
    std::optional<bool> t_flat;  // empty below dimension 3
    bool einstein = false;
    std::string case_label;
    std::optional<int> kappa;    // admissible-spectrum slot, lambda < 0 only
    std::string rigid_hint;      // nonempty for rigid non-Einstein families
};

// Deliberate defect injected into a built entry, for negative controls.
// fiber_scale multiplies the warped-fiber block of the metric (a no-op for
// one-dimensional fibers, which just reparametrize).
struct Perturbation {
    double lambda_delta = 0.0;
    double u_shift = 0.0;
    double fiber_scale = 1.0;
};

struct CatalogEntry {
    std::string id;
    Params params;  // with defaults filled in
    QEStructure qe;
    ExpectedValues expected;
    // Ricci assembled independently from lower-dimensional factor data;
    // defined for every entry (a plain product is a trivially warped one).
    std::function<TensorValue(std::span<const double>)> ricci_oracle;
    // Normalization remarks repeated in reports.
    std::vector<std::string> notes;
};

// Registered entry ids, in a fixed order.
const std::vector<std::string>& catalog_ids();

// Build an entry by id.  Missing parameters take documented defaults;
// unknown ones or out-of-range values raise ParamError naming the
// constraint.  All families with a curvature scale are built at unit scale.
CatalogEntry build_entry(const std::string& id, const Params& params = {},
                         const Perturbation& pert = {});

double expected_scalar_curvature(const std::string& id, const Params& params = {});

// g -> c^2 g, lambda -> lambda / c^2, u unchanged.  Exact symmetry of the
// defining system; measured R and mu scale by 1/c^2.
QEStructure rescaled(const QEStructure& qe, double c);

} // namespace qemlab
