#ifndef AGMONLAB_CONFIG_HPP
#define AGMONLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agmonlab/fields.hpp"
#include "agmonlab/spectral.hpp"

namespace agml {

/// Parsed experiment configuration. The file format is an INI/TOML-style
/// key tree: [section] headers, `key = value` lines, values are numbers,
/// quoted strings, booleans or flat arrays. Unknown sections or keys are
/// rejected with a diagnostic naming the field.
struct ExperimentConfig {
    // [experiment]
    uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";

    // [potential]
    std::string potential_kind = "radial_poly";
    int dim = 1;
    double constant_value = 1.0;
    std::vector<double> radial_coeffs{1.0, 0.0, 0.5};
    std::vector<double> coord_terms; // flat (c, e1, e2, e3) quadruples
    std::vector<double> envelope;    // empty or (a, b, A, B, n, m)

    // [grid]
    std::vector<double> grid_lo{-10.0};
    std::vector<double> grid_hi{10.0};
    double grid_h = 0.01;

    // [agmon]
    int dijkstra_order = 3;
    double sup_radius = 1.0;
    int sup_samples = 512;
    int minimize_nodes = 128;
    int minimize_max_iter = 2000;
    double minimize_tol = 1e-10;
    std::vector<double> query_points; // flat triples
    double residual_exclude = 0.6;
    double travel_r0 = 0.0; // 0 disables the travel-time report
    double travel_r1 = 0.0;

    // [spectral]
    std::string model = "schrodinger";
    double spectral_tol = 1e-10;
    std::vector<double> mode_k{1.0};
    std::vector<double> mode_eta{1.0};
    double nu = 1.0;
    int n_max = 8;
    double coupling = 0.2;
    int64_t dim_cap = 5000000;
    std::vector<double> chi_radii{1.0};
    bool convergence_check = false;

    // [mc]
    double mc_dt = 1e-3;
    int64_t mc_paths = 100000;
    double mc_T = 1.0;
    std::vector<std::string> estimators{"dirichlet_tau", "ball_survival"};
    std::vector<double> fk_points{0.0, 1.0, 2.0};
    std::vector<double> cert_points{1.0, 2.0, 3.0};
    std::vector<double> cert_p{1.05, 1.5, 3.0};

    // [verify]
    std::vector<double> epsilons{0.3};
    std::vector<double> window{2.0, 6.0};
    std::vector<double> matching_radii{2.0, 4.0, 6.0};
    bool require_pass = true;
    std::string ground_state_json; // optional: reuse a spectral export

    Potential make_potential() const;
    GridSpec make_grid() const;
    FockBasis make_basis() const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Reference config with every key, its default and a short comment.
std::string schema_dump();

} // namespace agml

#endif
