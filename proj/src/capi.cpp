#include "agmonlab.h"

#include <cstring>
#include <string>

#include "agmonlab/bounds.hpp"
#include "agmonlab/config.hpp"
#include "agmonlab/io.hpp"
#include "agmonlab/runner.hpp"
#include "agmonlab/stochastic.hpp"

using namespace agml;

extern "C" {

struct agml_potential {
    Potential rep;
};

struct agml_distance_field {
    DistanceField rep;
};

struct agml_ground_state {
    GroundStateField rep;
};

} // extern "C"

namespace {

thread_local std::string g_last_error;

agml_status to_status(Errc c) {
    switch (c) {
        case Errc::ok: return AGML_OK;
        case Errc::config_error: return AGML_E_CONFIG;
        case Errc::io_error: return AGML_E_IO;
        case Errc::invalid_argument: return AGML_E_INVALID;
        case Errc::potential_below_one: return AGML_E_POTENTIAL_BELOW_ONE;
        case Errc::envelope_violation: return AGML_E_ENVELOPE;
        case Errc::grid_too_coarse: return AGML_E_GRID_TOO_COARSE;
        case Errc::no_convergence: return AGML_E_NO_CONVERGENCE;
        case Errc::dimension_overflow: return AGML_E_DIMENSION_OVERFLOW;
        case Errc::positivity_violation: return AGML_E_POSITIVITY;
        case Errc::quadrature_failure: return AGML_E_QUADRATURE;
        case Errc::grid_exit_rate_high: return AGML_E_GRID_EXIT_RATE;
        case Errc::domain_too_small: return AGML_E_DOMAIN_TOO_SMALL;
        case Errc::grid_mismatch: return AGML_E_GRID_MISMATCH;
        case Errc::empty_window: return AGML_E_EMPTY_WINDOW;
        case Errc::assertion_failure: return AGML_E_ASSERTION;
    }
    return AGML_E_UNKNOWN;
}

template <typename Fn>
agml_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return AGML_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AGML_E_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return AGML_E_UNKNOWN;
    }
}

Vec3 to_vec(const double x[3]) { return Vec3{x[0], x[1], x[2]}; }

GridSpec to_grid(const agml_grid_spec* g) {
    require(g != nullptr, Errc::invalid_argument, "null grid spec");
    return GridSpec(g->dim, Vec3{g->lo[0], g->lo[1], g->lo[2]}, Vec3{g->hi[0], g->hi[1], g->hi[2]}, g->h);
}

McConfig to_mc(const agml_mc_config* c) {
    require(c != nullptr, Errc::invalid_argument, "null Monte Carlo config");
    McConfig mc;
    mc.dt = c->dt;
    mc.paths = c->paths;
    mc.seed = c->seed;
    mc.dim = c->dim;
    mc.threads = c->threads > 0 ? c->threads : 1;
    return mc;
}

void to_estimate(const McEstimate& e, agml_estimate* out) {
    out->value = e.value;
    out->std_error = e.stderr_;
    out->samples = e.samples;
}

int64_t node_for(const GroundStateField& gs, const double x[3]) {
    return gs.grid.flat_index(gs.grid.snap(to_vec(x)));
}

} // namespace

extern "C" {

int agml_exit_class(agml_status s) {
    switch (s) {
        case AGML_OK: return 0;
        case AGML_E_CONFIG:
        case AGML_E_IO:
        case AGML_E_INVALID: return 1;
        case AGML_E_ASSERTION: return 3;
        default: return 2;
    }
}

const char* agml_last_error(void) { return g_last_error.c_str(); }

agml_status agml_potential_constant(int dim, double value, agml_potential** out) {
    return guarded([&] { *out = new agml_potential{Potential::constant(dim, value)}; });
}

agml_status agml_potential_radial_poly(int dim, const double* coeffs, size_t n, agml_potential** out) {
    return guarded([&] {
        *out = new agml_potential{Potential::radial_poly(dim, std::vector<double>(coeffs, coeffs + n))};
    });
}

agml_status agml_potential_coord_poly(int dim, const double* terms, size_t n_terms, agml_potential** out) {
    return guarded([&] {
        std::vector<Potential::CoordTerm> ts;
        for (size_t i = 0; i < n_terms; ++i) {
            Potential::CoordTerm t;
            t.c = terms[4 * i];
            for (int a = 0; a < 3; ++a) t.e[static_cast<size_t>(a)] = static_cast<int>(terms[4 * i + 1 + static_cast<size_t>(a)]);
            ts.push_back(t);
        }
        *out = new agml_potential{Potential::coord_poly(dim, ts)};
    });
}

agml_status agml_potential_set_envelope(agml_potential* p, const double env[6]) {
    return guarded([&] { p->rep.set_envelope(Envelope{env[0], env[1], env[2], env[3], env[4], env[5]}); });
}

agml_status agml_potential_eval(const agml_potential* p, const double x[3], double* out) {
    return guarded([&] { *out = p->rep.eval(to_vec(x)); });
}

agml_status agml_potential_sup_ball(const agml_potential* p, const double x[3], double radius, double* out) {
    return guarded([&] { *out = sup_ball(p->rep, to_vec(x), radius); });
}

agml_status agml_potential_ball_sup(const agml_potential* p, double radius, int samples, agml_potential** out) {
    return guarded([&] { *out = new agml_potential{ball_sup_potential(p->rep, radius, samples)}; });
}

void agml_potential_free(agml_potential* p) { delete p; }

agml_status agml_solve_eikonal(const agml_potential* p, const agml_grid_spec* grid, const double source[3],
                               agml_distance_field** out) {
    return guarded([&] {
        GridSpec g = to_grid(grid);
        ScalarField v = discretize(p->rep, g);
        auto df = solve_eikonal(v, to_vec(source));
        df.potential_id = p->rep.describe();
        *out = new agml_distance_field{std::move(df)};
    });
}

agml_status agml_solve_dijkstra(const agml_potential* p, const agml_grid_spec* grid, const double source[3],
                                int neighbor_order, agml_distance_field** out) {
    return guarded([&] {
        GridSpec g = to_grid(grid);
        ScalarField v = discretize(p->rep, g);
        auto df = dijkstra_oracle(v, to_vec(source), neighbor_order);
        df.potential_id = p->rep.describe();
        *out = new agml_distance_field{std::move(df)};
    });
}

agml_status agml_distance_at(const agml_distance_field* df, const double x[3], double* out) {
    return guarded([&] { *out = df->rep.interp(to_vec(x)); });
}

agml_status agml_distance_max_rel_gap(const agml_distance_field* a, const agml_distance_field* b, double* out) {
    return guarded([&] { *out = max_rel_gap(a->rep, b->rep); });
}

agml_status agml_distance_export_csv(const agml_distance_field* df, const char* path) {
    return guarded([&] { export_distance_csv(df->rep, path); });
}

agml_status agml_distance_export_binary(const agml_distance_field* df, const char* path) {
    return guarded([&] { export_distance_binary(df->rep, path); });
}

void agml_distance_free(agml_distance_field* df) { delete df; }

agml_status agml_minimize_action(const agml_potential* p, const double x[3], int interior_nodes, double tol,
                                 int max_iter, double* action_out, double* travel_time_out) {
    return guarded([&] {
        MinimizeOpts opts;
        if (interior_nodes > 0) opts.interior_nodes = interior_nodes;
        if (tol > 0) opts.tol = tol;
        if (max_iter > 0) opts.max_iter = max_iter;
        TimedPath q = minimize_action(p->rep, to_vec(x), opts);
        if (action_out) *action_out = q.action;
        if (travel_time_out) *travel_time_out = q.horizon;
    });
}

agml_status agml_schrodinger_ground(const agml_potential* p, const agml_grid_spec* grid, double tol, uint64_t seed,
                                    agml_ground_state** out) {
    return guarded([&] {
        GridSpec g = to_grid(grid);
        ScalarField v = discretize(p->rep, g);
        SparseOperator H = build_schrodinger(v);
        GroundStateOpts opts;
        opts.tol = tol;
        opts.seed = seed;
        EigenResult eig = ground_state(H, opts);
        FockBasis pure({{1.0, 0.0}}, 1.0, 0);
        *out = new agml_ground_state{extract_field(H, eig, g, pure)};
    });
}

agml_status agml_nelson_ground(const agml_potential* p, const agml_grid_spec* grid, const double* mode_k,
                               const double* mode_eta, int n_modes, double nu, int n_max, double g, double tol,
                               uint64_t seed, agml_ground_state** out) {
    return guarded([&] {
        GridSpec gs = to_grid(grid);
        std::vector<FockBasis::Mode> modes;
        for (int j = 0; j < n_modes; ++j) modes.push_back({mode_k[j], mode_eta[j]});
        FockBasis basis(modes, nu, n_max);
        SparseOperator H = build_nelson_toy(gs, p->rep, basis, g);
        GroundStateOpts opts;
        opts.tol = tol;
        opts.seed = seed;
        EigenResult eig = ground_state(H, opts);
        *out = new agml_ground_state{extract_field(H, eig, gs, basis)};
    });
}

agml_status agml_ground_energy(const agml_ground_state* gs, double* out) {
    return guarded([&] { *out = gs->rep.energy; });
}

agml_status agml_ground_fiber_norm(const agml_ground_state* gs, const double x[3], double* out) {
    return guarded([&] { *out = gs->rep.fiber_norm(node_for(gs->rep, x)); });
}

agml_status agml_ground_ell(const agml_ground_state* gs, const double x[3], double* out) {
    return guarded([&] { *out = gs->rep.ell(node_for(gs->rep, x)); });
}

agml_status agml_ground_chi(const agml_ground_state* gs, double radius, double* out) {
    return guarded([&] { *out = gs->rep.chi(radius); });
}

agml_status agml_ground_number_weighted_norm(const agml_ground_state* gs, const double x[3], double r, double* out) {
    return guarded([&] { *out = number_weighted_norm(gs->rep, node_for(gs->rep, x), r); });
}

agml_status agml_ground_export(const agml_ground_state* gs, double coupling, const char* csv_path,
                               const char* json_path) {
    return guarded([&] { export_ground_state(gs->rep, coupling, csv_path, json_path); });
}

void agml_ground_free(agml_ground_state* gs) { delete gs; }

agml_status agml_renormalization_energy(double lambda, double g, double nu, double* out) {
    return guarded([&] { *out = renormalization_energy(lambda, g, nu); });
}

agml_status agml_ball_survival(double T, const agml_mc_config* cfg, agml_estimate* out) {
    return guarded([&] { to_estimate(ball_survival(T, to_mc(cfg)), out); });
}

agml_status agml_dirichlet_tau(int dim, double* out) {
    return guarded([&] { *out = dirichlet_tau(dim); });
}

agml_status agml_girsanov_straight(const double x[3], double T, const agml_mc_config* cfg, agml_estimate* tube,
                                   agml_estimate* survival, double* kinetic_factor) {
    return guarded([&] {
        TimedPath q;
        Vec3 xv = to_vec(x);
        int n = 128;
        for (int i = 0; i <= n; ++i) {
            double t = T * static_cast<double>(i) / static_cast<double>(n);
            q.nodes.push_back(xv * (1.0 - t / T));
            q.times.push_back(t);
        }
        q.horizon = T;
        GirsanovCheck gc = girsanov_check(q, to_mc(cfg));
        to_estimate(gc.tube, tube);
        to_estimate(gc.survival, survival);
        if (kinetic_factor) *kinetic_factor = gc.kinetic_factor;
    });
}

agml_status agml_fk_ground_state(const agml_potential* p, const agml_grid_spec* grid, const double x[3], double T,
                                 double tol, const agml_mc_config* cfg, agml_estimate* out) {
    return guarded([&] {
        GridSpec g = to_grid(grid);
        ScalarField v = discretize(p->rep, g);
        SparseOperator H = build_schrodinger(v);
        GroundStateOpts opts;
        opts.tol = tol;
        EigenResult eig = ground_state(H, opts);
        FockBasis pure({{1.0, 0.0}}, 1.0, 0);
        GroundStateField gs = extract_field(H, eig, g, pure);
        ScalarField psi(gs.grid);
        for (int64_t i = 0; i < gs.grid.num_nodes(); ++i) psi.values[static_cast<size_t>(i)] = gs.ell(i);
        McConfig mc = to_mc(cfg);
        mc.dim = g.dim;
        to_estimate(fk_ground_state(p->rep, to_vec(x), T, gs.energy, psi, mc), out);
    });
}

agml_status agml_run(const char* kind, const char* config_path, const char* out_dir, int64_t seed_override,
                     int threads_override) {
    return guarded([&] {
        require(kind != nullptr && config_path != nullptr, Errc::invalid_argument, "null runner arguments");
        ExperimentConfig cfg = parse_config_file(config_path);
        RunOverrides ov;
        if (out_dir) ov.out_dir = std::string(out_dir);
        if (seed_override >= 0) ov.seed = static_cast<uint64_t>(seed_override);
        if (threads_override > 0) ov.threads = threads_override;
        std::string k = kind;
        if (k == "agmon")
            run_agmon(cfg, ov);
        else if (k == "spectral")
            run_spectral(cfg, ov);
        else if (k == "mc")
            run_mc(cfg, ov);
        else if (k == "verify")
            run_verify(cfg, ov);
        else
            fail(Errc::config_error, "unknown experiment kind '" + k + "'");
    });
}

agml_status agml_schema_dump(char* buf, size_t buf_len, size_t* needed) {
    return guarded([&] {
        std::string s = schema_dump();
        if (needed) *needed = s.size() + 1;
        if (buf && buf_len > 0) {
            size_t n = std::min(buf_len - 1, s.size());
            std::memcpy(buf, s.data(), n);
            buf[n] = '\0';
        }
    });
}

} // extern "C"
