// Exercises the shared-library surface: opaque handles, error codes, the
// experiment runner and the schema dump.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "agmonlab.h"

static int failures = 0;

#define REQUIRE_TRUE(cond)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);        \
            ++failures;                                                         \
        }                                                                       \
    } while (0)

#define REQUIRE_OK(call) REQUIRE_TRUE((call) == AGML_OK)

static void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
}

int main() {
    // exit-code classes
    REQUIRE_TRUE(agml_exit_class(AGML_OK) == 0);
    REQUIRE_TRUE(agml_exit_class(AGML_E_CONFIG) == 1);
    REQUIRE_TRUE(agml_exit_class(AGML_E_IO) == 1);
    REQUIRE_TRUE(agml_exit_class(AGML_E_NO_CONVERGENCE) == 2);
    REQUIRE_TRUE(agml_exit_class(AGML_E_ASSERTION) == 3);

    // potentials and the below-one error path
    agml_potential* quad = nullptr;
    double c_quad[3] = {1.0, 0.0, 1.0};
    REQUIRE_OK(agml_potential_radial_poly(3, c_quad, 3, &quad));
    double x2[3] = {2.0, 0.0, 0.0};
    double val = 0.0;
    REQUIRE_OK(agml_potential_eval(quad, x2, &val));
    REQUIRE_TRUE(std::fabs(val - 5.0) < 1e-12);
    REQUIRE_OK(agml_potential_sup_ball(quad, x2, 1.0, &val));
    REQUIRE_TRUE(std::fabs(val - 10.0) < 1e-12);

    agml_potential* bad = nullptr;
    double c_bad[1] = {0.25};
    REQUIRE_OK(agml_potential_radial_poly(1, c_bad, 1, &bad));
    double x0[3] = {0.0, 0.0, 0.0};
    REQUIRE_TRUE(agml_potential_eval(bad, x0, &val) == AGML_E_POTENTIAL_BELOW_ONE);
    REQUIRE_TRUE(std::strlen(agml_last_error()) > 0);
    agml_potential_free(bad);

    // distance solvers agree on a small grid
    agml_grid_spec grid{};
    grid.dim = 3;
    for (int a = 0; a < 3; ++a) {
        grid.lo[a] = -1.0;
        grid.hi[a] = 1.0;
    }
    grid.h = 0.1;
    double src[3] = {0.0, 0.0, 0.0};
    agml_distance_field *fmm = nullptr, *dij = nullptr;
    REQUIRE_OK(agml_solve_eikonal(quad, &grid, src, &fmm));
    REQUIRE_OK(agml_solve_dijkstra(quad, &grid, src, 3, &dij));
    double gap = 1.0;
    REQUIRE_OK(agml_distance_max_rel_gap(fmm, dij, &gap));
    REQUIRE_TRUE(gap <= 0.03);
    double x1[3] = {1.0, 0.0, 0.0};
    double rho = 0.0;
    REQUIRE_OK(agml_distance_at(fmm, x1, &rho));
    REQUIRE_TRUE(std::fabs(rho - 1.6232252) < 0.02);
    agml_distance_free(fmm);
    agml_distance_free(dij);

    // action minimization
    double act = 0.0, tt = 0.0;
    REQUIRE_OK(agml_minimize_action(quad, x1, 128, 1e-10, 2000, &act, &tt));
    REQUIRE_TRUE(std::fabs(act - 1.6232252) < 2e-3);
    agml_potential_free(quad);

    // Schrodinger ground state
    agml_potential* harm = nullptr;
    double c_harm[3] = {1.0, 0.0, 0.5};
    REQUIRE_OK(agml_potential_radial_poly(1, c_harm, 3, &harm));
    agml_grid_spec g1{};
    g1.dim = 1;
    g1.lo[0] = -10.0;
    g1.hi[0] = 10.0;
    g1.h = 0.01;
    agml_ground_state* gs = nullptr;
    REQUIRE_OK(agml_schrodinger_ground(harm, &g1, 1e-10, 1, &gs));
    double energy = 0.0;
    REQUIRE_OK(agml_ground_energy(gs, &energy));
    REQUIRE_TRUE(std::fabs(energy - 1.5) < 1e-3);
    double chi = 0.0;
    REQUIRE_OK(agml_ground_chi(gs, 1.0, &chi));
    REQUIRE_TRUE(chi > 0.0);
    double ell = 0.0, norm = 0.0;
    REQUIRE_OK(agml_ground_ell(gs, x1, &ell));
    REQUIRE_OK(agml_ground_fiber_norm(gs, x1, &norm));
    REQUIRE_TRUE(std::fabs(ell - norm) < 1e-14); // pure matter state
    agml_ground_free(gs);

    // toy model handle
    double mk[1] = {0.0}, me[1] = {1.0};
    agml_ground_state* toy = nullptr;
    agml_grid_spec g2 = g1;
    g2.h = 0.05;
    REQUIRE_OK(agml_nelson_ground(harm, &g2, mk, me, 1, 1.0, 8, 0.2, 1e-10, 1, &toy));
    REQUIRE_OK(agml_ground_energy(toy, &energy));
    REQUIRE_TRUE(std::fabs(energy - 1.46) < 1.5e-3);
    REQUIRE_OK(agml_ground_ell(toy, x0, &ell));
    REQUIRE_OK(agml_ground_fiber_norm(toy, x0, &norm));
    REQUIRE_TRUE(std::fabs(ell / norm - std::exp(-0.02)) < 1e-3);
    double nwn = 0.0;
    REQUIRE_OK(agml_ground_number_weighted_norm(toy, x0, 0.0, &nwn));
    REQUIRE_TRUE(std::fabs(nwn - norm) < 1e-12);
    agml_ground_free(toy);

    // renormalization quadrature
    double eren = 0.0;
    REQUIRE_OK(agml_renormalization_energy(10.0, 1.0, 0.0, &eren));
    REQUIRE_TRUE(std::fabs(eren - 8.0 * M_PI * std::log(6.0)) < 1e-5);

    // Monte Carlo handles
    double tau = 0.0;
    REQUIRE_OK(agml_dirichlet_tau(3, &tau));
    REQUIRE_TRUE(std::fabs(tau - M_PI * M_PI / 2.0) < 1e-4);
    agml_mc_config mc{};
    mc.dt = 1e-3;
    mc.paths = 20000;
    mc.seed = 5;
    mc.dim = 3;
    mc.threads = 1;
    agml_estimate surv{};
    REQUIRE_OK(agml_ball_survival(0.5, &mc, &surv));
    REQUIRE_TRUE(surv.value > 0.0 && surv.value < 1.0);
    agml_estimate tube{}, ball{};
    double kin = 0.0;
    REQUIRE_OK(agml_girsanov_straight(x1, 1.0, &mc, &tube, &ball, &kin));
    REQUIRE_TRUE(std::fabs(kin - std::exp(-0.5)) < 1e-12);
    REQUIRE_TRUE(tube.value >= 0.95 * kin * ball.value);

    agml_estimate fk{};
    agml_grid_spec gfk = g1;
    gfk.h = 0.02;
    agml_mc_config mcfk = mc;
    mcfk.dim = 1;
    mcfk.paths = 20000;
    REQUIRE_OK(agml_fk_ground_state(harm, &gfk, x0, 1.0, 1e-10, &mcfk, &fk));
    REQUIRE_TRUE(fk.std_error > 0.0);
    agml_potential_free(harm);

    // schema dump
    size_t needed = 0;
    REQUIRE_OK(agml_schema_dump(nullptr, 0, &needed));
    REQUIRE_TRUE(needed > 100);
    std::vector<char> buf(needed);
    REQUIRE_OK(agml_schema_dump(buf.data(), buf.size(), nullptr));
    REQUIRE_TRUE(std::strstr(buf.data(), "[grid]") != nullptr);

    // runner end-to-end on a small verify config
    auto tmp = std::filesystem::temp_directory_path() / "agml_capi_run";
    std::filesystem::create_directories(tmp);
    std::string cfg_path = (tmp / "exp.cfg").string();
    write_file(cfg_path, R"(
[experiment]
seed = 3
[potential]
kind = "radial_poly"
dim = 1
coeffs = [1.0, 0.0, 0.5]
[grid]
lo = [-8.0]
hi = [8.0]
h = 0.02
[spectral]
model = "schrodinger"
[verify]
epsilons = [0.3]
window = [2.0, 5.0]
matching_radii = [2.0, 4.0]
)");
    std::string out = (tmp / "out").string();
    REQUIRE_TRUE(agml_run("verify", cfg_path.c_str(), out.c_str(), -1, 0) == AGML_OK);
    REQUIRE_TRUE(std::filesystem::exists(out + "/decay_profile.csv"));
    REQUIRE_TRUE(std::filesystem::exists(out + "/sandwich_fits.json"));
    REQUIRE_TRUE(std::filesystem::exists(out + "/matching.csv"));
    REQUIRE_TRUE(std::filesystem::exists(out + "/verify_summary.json"));

    // unknown kind and missing config map to config/IO errors
    REQUIRE_TRUE(agml_exit_class(agml_run("bogus", cfg_path.c_str(), nullptr, -1, 0)) == 1);
    REQUIRE_TRUE(agml_exit_class(agml_run("verify", "/nonexistent.cfg", nullptr, -1, 0)) == 1);

    if (failures == 0) std::printf("test_capi: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
