#ifndef AGMONLAB_IO_HPP
#define AGMONLAB_IO_HPP

#include <string>
#include <vector>

#include "agmonlab/agmon.hpp"
#include "agmonlab/bounds.hpp"
#include "agmonlab/spectral.hpp"
#include "agmonlab/stochastic.hpp"

namespace agml {

/// Fixed float formatting (17 significant digits) used by every export so
/// identical runs produce byte-identical files.
std::string fmt17(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// CSV: node coordinates and rho, one node per line in grid order.
void export_distance_csv(const DistanceField& df, const std::string& path);

/// Single file: one JSON header line (dims, h, box, source, solver) followed
/// by the row-major array as little-endian doubles.
void export_distance_binary(const DistanceField& df, const std::string& path);
DistanceField load_distance_binary(const std::string& path);

/// CSV columns x, ||Phi_g(x)||, ell(x) plus a JSON metadata sidecar
/// (energy, basis, coupling, grid, n_max, residual).
void export_ground_state(const GroundStateField& gs, double coupling, const std::string& csv_path,
                         const std::string& json_path);
GroundStateField load_ground_state(const std::string& csv_path, const std::string& json_path);

void export_profile_csv(const DecayProfile& prof, const std::string& path);
std::string sandwich_json(const std::vector<SandwichFit>& fits);
std::string matching_csv(const std::vector<MatchingRow>& rows);
std::string estimates_json(const std::vector<McEstimate>& estimates, double dt);

} // namespace agml

#endif
