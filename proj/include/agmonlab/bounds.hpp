#ifndef AGMONLAB_BOUNDS_HPP
#define AGMONLAB_BOUNDS_HPP

#include <string>
#include <vector>

#include "agmonlab/agmon.hpp"
#include "agmonlab/spectral.hpp"

namespace agml {

/// Per-node join of ground-state decay data with the two distance fields.
/// Norm columns are globally rescaled by max_x ||Phi(x)|| before the log
/// ratios are taken, so ratio_upper -> 1 reads directly as rate agreement;
/// the envelope constants of SandwichFit absorb the same scale.
struct DecayProfile {
    struct Record {
        Vec3 x;
        double radius = 0.0;
        double norm = 0.0;  // ||Phi(x)|| / max ||Phi||
        double ell = 0.0;   // ell(x) / max ||Phi||
        double rho = 0.0;
        double rho_circ = 0.0;
        double ratio_upper = 0.0; // -ln(norm)/rho, where defined
        double ratio_lower = 0.0; // -ln(ell)/rho_circ, where defined
        bool ratios_defined = false;
    };
    std::vector<Record> records;
    double norm_scale = 1.0; // the max fiber norm divided out
};

/// Underflow guard: records with rescaled norms below this floor are kept in
/// the profile but excluded from ratios and fits.
constexpr double kUnderflowFloor = 1e-300;

DecayProfile build_profile(const GroundStateField& gs, const DistanceField& rho, const DistanceField& rho_circ);

/// Envelope-constant fit of the two-sided decay sandwich on a radial window.
///   C_eps = max ||Phi|| e^{(1-eps) rho},  c_eps = min ell e^{(1+eps) rho_circ}
/// over the window records. The pass flag additionally requires that the
/// constants refitted on the inner radial half certify every window record
/// (the extrapolation succeeds only when 1 -/+ eps brackets the local rates).
struct SandwichFit {
    double eps = 0.0;
    double c_eps = 0.0;
    double C_eps = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int64_t records_used = 0;
    bool finite_positive = false;
    bool certified = false; // inner-half constants bound the whole window
    bool pass = false;
};

SandwichFit fit_sandwich(const DecayProfile& profile, double eps, double window_lo, double window_hi);

struct MatchingRow {
    double radius = 0.0;
    double max_ratio = 0.0; // max over shell nodes of rho_circ / rho
    int64_t nodes = 0;
};

/// Per requested radius, the max over nearby nodes of rho_circ / rho.
std::vector<MatchingRow> asymptotic_matching(const DistanceField& rho, const DistanceField& rho_circ,
                                             const std::vector<double>& radii);

} // namespace agml

#endif
