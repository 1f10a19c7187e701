/* agmonlab C API: opaque handles over the C++ core, error codes, and the
 * experiment runner used by the command-line tool. All functions return an
 * agml_status; outputs go through pointers. Call agml_last_error() for the
 * message of the most recent failure on the calling thread. */

#ifndef AGMONLAB_H
#define AGMONLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum agml_status {
    AGML_OK = 0,
    AGML_E_CONFIG = 1,
    AGML_E_IO = 2,
    AGML_E_INVALID = 3,
    AGML_E_POTENTIAL_BELOW_ONE = 4,
    AGML_E_ENVELOPE = 5,
    AGML_E_GRID_TOO_COARSE = 6,
    AGML_E_NO_CONVERGENCE = 7,
    AGML_E_DIMENSION_OVERFLOW = 8,
    AGML_E_POSITIVITY = 9,
    AGML_E_QUADRATURE = 10,
    AGML_E_GRID_EXIT_RATE = 11,
    AGML_E_DOMAIN_TOO_SMALL = 12,
    AGML_E_GRID_MISMATCH = 13,
    AGML_E_EMPTY_WINDOW = 14,
    AGML_E_ASSERTION = 15,
    AGML_E_UNKNOWN = 16
} agml_status;

/* Process exit class of a status: 0 ok, 1 config/IO, 2 numerical, 3 assertion. */
int agml_exit_class(agml_status s);

/* Message of the last error on this thread; empty string when none. */
const char* agml_last_error(void);

/* ---- potentials ---- */

typedef struct agml_potential agml_potential;

agml_status agml_potential_constant(int dim, double value, agml_potential** out);
/* V = sum coeffs[k] |x|^k */
agml_status agml_potential_radial_poly(int dim, const double* coeffs, size_t n, agml_potential** out);
/* terms: flat (c, e1, e2, e3) quadruples, exponents over |x_i| */
agml_status agml_potential_coord_poly(int dim, const double* terms, size_t n_terms, agml_potential** out);
/* envelope (a, b, A, B, n, m): a^2/2 |x|^{2n} - b <= V <= A^2/2 |x|^{2m} + B */
agml_status agml_potential_set_envelope(agml_potential* p, const double env[6]);
agml_status agml_potential_eval(const agml_potential* p, const double x[3], double* out);
agml_status agml_potential_sup_ball(const agml_potential* p, const double x[3], double radius, double* out);
/* new potential whose eval is the ball supremum of the base */
agml_status agml_potential_ball_sup(const agml_potential* p, double radius, int samples, agml_potential** out);
void agml_potential_free(agml_potential* p);

/* ---- grids and distance fields ---- */

typedef struct agml_grid_spec {
    int dim;
    double lo[3];
    double hi[3];
    double h;
} agml_grid_spec;

typedef struct agml_distance_field agml_distance_field;

agml_status agml_solve_eikonal(const agml_potential* p, const agml_grid_spec* grid, const double source[3],
                               agml_distance_field** out);
agml_status agml_solve_dijkstra(const agml_potential* p, const agml_grid_spec* grid, const double source[3],
                                int neighbor_order, agml_distance_field** out);
agml_status agml_distance_at(const agml_distance_field* df, const double x[3], double* out);
agml_status agml_distance_max_rel_gap(const agml_distance_field* a, const agml_distance_field* b, double* out);
agml_status agml_distance_export_csv(const agml_distance_field* df, const char* path);
agml_status agml_distance_export_binary(const agml_distance_field* df, const char* path);
void agml_distance_free(agml_distance_field* df);

/* ---- action minimization ---- */

/* Minimizing timed path from x to the origin: reports the action value and
 * travel time. */
agml_status agml_minimize_action(const agml_potential* p, const double x[3], int interior_nodes, double tol,
                                 int max_iter, double* action_out, double* travel_time_out);

/* ---- spectral ---- */

typedef struct agml_ground_state agml_ground_state;

/* Schrodinger ground state on the grid (any dim <= 3). */
agml_status agml_schrodinger_ground(const agml_potential* p, const agml_grid_spec* grid, double tol, uint64_t seed,
                                    agml_ground_state** out);
/* Toy field-coupled model on a 1D grid: K modes (k[j], eta[j]), mass nu,
 * occupancy cap n_max, coupling g. */
agml_status agml_nelson_ground(const agml_potential* p, const agml_grid_spec* grid, const double* mode_k,
                               const double* mode_eta, int n_modes, double nu, int n_max, double g, double tol,
                               uint64_t seed, agml_ground_state** out);
agml_status agml_ground_energy(const agml_ground_state* gs, double* out);
agml_status agml_ground_fiber_norm(const agml_ground_state* gs, const double x[3], double* out);
agml_status agml_ground_ell(const agml_ground_state* gs, const double x[3], double* out);
agml_status agml_ground_chi(const agml_ground_state* gs, double radius, double* out);
agml_status agml_ground_number_weighted_norm(const agml_ground_state* gs, const double x[3], double r, double* out);
agml_status agml_ground_export(const agml_ground_state* gs, double coupling, const char* csv_path,
                               const char* json_path);
void agml_ground_free(agml_ground_state* gs);

/* Renormalization integral with eta == 1. */
agml_status agml_renormalization_energy(double lambda, double g, double nu, double* out);

/* ---- stochastic ---- */

typedef struct agml_mc_config {
    double dt;
    int64_t paths;
    uint64_t seed;
    int dim;
    int threads;
} agml_mc_config;

typedef struct agml_estimate {
    double value;
    double std_error;
    int64_t samples;
} agml_estimate;

agml_status agml_ball_survival(double T, const agml_mc_config* cfg, agml_estimate* out);
agml_status agml_dirichlet_tau(int dim, double* out);
/* Both sides of the tube bound for the straight path from x to the origin
 * over horizon T: tube >= 0.95 * kinetic_factor * survival is the caller's
 * check. */
agml_status agml_girsanov_straight(const double x[3], double T, const agml_mc_config* cfg, agml_estimate* tube,
                                   agml_estimate* survival, double* kinetic_factor);
/* Feynman-Kac reconstruction against the Schrodinger ground state computed
 * on the same grid; returns the estimate at x. */
agml_status agml_fk_ground_state(const agml_potential* p, const agml_grid_spec* grid, const double x[3], double T,
                                 double tol, const agml_mc_config* cfg, agml_estimate* out);

/* ---- experiment runner (the CLI surface) ---- */

/* kind: "agmon" | "spectral" | "mc" | "verify". seed_override < 0 and
 * threads_override <= 0 leave the config values in place; out_dir may be
 * NULL. */
agml_status agml_run(const char* kind, const char* config_path, const char* out_dir, int64_t seed_override,
                     int threads_override);

/* Reference config: writes up to buf_len - 1 bytes plus NUL; *needed gets the
 * full length. Pass buf = NULL to query the size. */
agml_status agml_schema_dump(char* buf, size_t buf_len, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
