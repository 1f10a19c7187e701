#include "agmonlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace agml {

DecayProfile build_profile(const GroundStateField& gs, const DistanceField& rho, const DistanceField& rho_circ) {
    require(gs.grid.same_as(rho.rho.grid), Errc::grid_mismatch, "ground state and rho grids differ");
    require(gs.grid.same_as(rho_circ.rho.grid), Errc::grid_mismatch, "ground state and rho_circ grids differ");

    DecayProfile prof;
    prof.norm_scale = gs.max_fiber_norm();
    require(prof.norm_scale > 0.0, Errc::invalid_argument, "ground state field is identically zero");

    const GridSpec& g = gs.grid;
    prof.records.reserve(static_cast<size_t>(g.num_nodes()));
    for (int64_t i = 0; i < g.num_nodes(); ++i) {
        DecayProfile::Record r;
        r.x = g.node_coord(g.unflatten(i));
        r.radius = r.x.norm();
        r.norm = gs.fiber_norm(i) / prof.norm_scale;
        r.ell = gs.ell(i) / prof.norm_scale;
        r.rho = rho.rho.values[static_cast<size_t>(i)];
        r.rho_circ = rho_circ.rho.values[static_cast<size_t>(i)];
        require(r.ell <= r.norm + 1e-12 * r.norm, Errc::assertion_failure,
                "vacuum overlap exceeds the fiber norm (Cauchy-Schwarz violated)");
        if (r.rho > 0.0 && r.rho_circ > 0.0 && r.norm > kUnderflowFloor && r.ell > kUnderflowFloor) {
            r.ratio_upper = -std::log(r.norm) / r.rho;
            r.ratio_lower = -std::log(r.ell) / r.rho_circ;
            r.ratios_defined = true;
        }
        prof.records.push_back(r);
    }
    return prof;
}

namespace {

struct EnvelopeConsts {
    double c = std::numeric_limits<double>::infinity();
    double C = 0.0;
    int64_t used = 0;
};

EnvelopeConsts fit_envelope(const DecayProfile& prof, double eps, double lo, double hi) {
    EnvelopeConsts out;
    for (const auto& r : prof.records) {
        if (r.radius < lo || r.radius > hi || !r.ratios_defined) continue;
        out.C = std::max(out.C, r.norm * std::exp((1.0 - eps) * r.rho));
        out.c = std::min(out.c, r.ell * std::exp((1.0 + eps) * r.rho_circ));
        out.used += 1;
    }
    return out;
}

} // namespace

SandwichFit fit_sandwich(const DecayProfile& profile, double eps, double window_lo, double window_hi) {
    require(eps > 0.0, Errc::invalid_argument, "eps must be positive");
    require(window_hi > window_lo && window_lo >= 0.0, Errc::invalid_argument, "bad window");

    SandwichFit fit;
    fit.eps = eps;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;

    EnvelopeConsts full = fit_envelope(profile, eps, window_lo, window_hi);
    require(full.used > 0, Errc::empty_window, "no usable records in the fit window");
    fit.records_used = full.used;
    fit.c_eps = full.c;
    fit.C_eps = full.C;
    fit.finite_positive = std::isfinite(full.c) && std::isfinite(full.C) && full.c > 0.0 && full.C > 0.0;

    // Certification: constants from the inner radial half must bound every
    // window record.
    double mid = 0.5 * (window_lo + window_hi);
    EnvelopeConsts half = fit_envelope(profile, eps, window_lo, mid);
    fit.certified = half.used > 0 && std::isfinite(half.c) && half.c > 0.0 && half.C > 0.0;
    if (fit.certified) {
        for (const auto& r : profile.records) {
            if (r.radius < window_lo || r.radius > window_hi || !r.ratios_defined) continue;
            bool upper_ok = r.norm <= half.C * std::exp(-(1.0 - eps) * r.rho) * (1.0 + 1e-12);
            bool lower_ok = r.ell >= half.c * std::exp(-(1.0 + eps) * r.rho_circ) * (1.0 - 1e-12);
            if (!upper_ok || !lower_ok) {
                fit.certified = false;
                break;
            }
        }
    }
    fit.pass = fit.finite_positive && fit.certified;
    return fit;
}

std::vector<MatchingRow> asymptotic_matching(const DistanceField& rho, const DistanceField& rho_circ,
                                             const std::vector<double>& radii) {
    require(rho.rho.grid.same_as(rho_circ.rho.grid), Errc::grid_mismatch, "distance fields on different grids");
    const GridSpec& g = rho.rho.grid;
    double band = 0.75 * g.h * std::sqrt(static_cast<double>(g.dim));
    std::vector<MatchingRow> rows;
    rows.reserve(radii.size());
    for (double R : radii) {
        MatchingRow row;
        row.radius = R;
        for (int64_t i = 0; i < g.num_nodes(); ++i) {
            double r = g.node_coord(g.unflatten(i)).norm();
            if (std::fabs(r - R) > band) continue;
            double a = rho.rho.values[static_cast<size_t>(i)];
            double b = rho_circ.rho.values[static_cast<size_t>(i)];
            if (a <= 0.0) continue;
            row.max_ratio = std::max(row.max_ratio, b / a);
            row.nodes += 1;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace agml
