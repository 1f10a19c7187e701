#include "agmonlab/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace agml {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), Errc::io_error, "cannot open " + path + " for writing");
    os << content;
    require(os.good(), Errc::io_error, "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), Errc::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void export_distance_csv(const DistanceField& df, const std::string& path) {
    const GridSpec& g = df.rho.grid;
    std::ostringstream os;
    os << "x,y,z,rho\n";
    for (int64_t i = 0; i < g.num_nodes(); ++i) {
        Vec3 p = g.node_coord(g.unflatten(i));
        os << fmt17(p[0]) << ',' << fmt17(p[1]) << ',' << fmt17(p[2]) << ','
           << fmt17(df.rho.values[static_cast<size_t>(i)]) << '\n';
    }
    write_text_file(path, os.str());
}

namespace {

json grid_json(const GridSpec& g) {
    json j;
    j["dim"] = g.dim;
    j["h"] = g.h;
    j["lo"] = {g.lo[0], g.lo[1], g.lo[2]};
    j["hi"] = {g.hi[0], g.hi[1], g.hi[2]};
    j["shape"] = {g.shape()[0], g.shape()[1], g.shape()[2]};
    return j;
}

GridSpec grid_from_json(const json& j) {
    Vec3 lo{j["lo"][0], j["lo"][1], j["lo"][2]};
    Vec3 hi{j["hi"][0], j["hi"][1], j["hi"][2]};
    return GridSpec(j["dim"].get<int>(), lo, hi, j["h"].get<double>());
}

} // namespace

void export_distance_binary(const DistanceField& df, const std::string& path) {
    json hdr = grid_json(df.rho.grid);
    hdr["source"] = {df.source[0], df.source[1], df.source[2]};
    hdr["solver"] = df.solver;
    hdr["potential"] = df.potential_id;
    hdr["thickened"] = df.thickened;
    std::string head = hdr.dump();
    std::ofstream os(path, std::ios::binary);
    require(os.good(), Errc::io_error, "cannot open " + path + " for writing");
    os << head << '\n';
    // Little-endian doubles; all supported targets are little-endian.
    os.write(reinterpret_cast<const char*>(df.rho.values.data()),
             static_cast<std::streamsize>(df.rho.values.size() * sizeof(double)));
    require(os.good(), Errc::io_error, "write failed for " + path);
}

DistanceField load_distance_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), Errc::io_error, "cannot open " + path);
    std::string head;
    std::getline(is, head);
    json hdr = json::parse(head, nullptr, false);
    require(!hdr.is_discarded(), Errc::io_error, "corrupt header in " + path);
    DistanceField df;
    df.rho.grid = grid_from_json(hdr);
    df.source = Vec3{hdr["source"][0], hdr["source"][1], hdr["source"][2]};
    df.solver = hdr["solver"].get<std::string>();
    df.potential_id = hdr.value("potential", "");
    df.thickened = hdr.value("thickened", false);
    df.rho.values.resize(static_cast<size_t>(df.rho.grid.num_nodes()));
    is.read(reinterpret_cast<char*>(df.rho.values.data()),
            static_cast<std::streamsize>(df.rho.values.size() * sizeof(double)));
    require(is.gcount() == static_cast<std::streamsize>(df.rho.values.size() * sizeof(double)), Errc::io_error,
            "truncated array in " + path);
    return df;
}

void export_ground_state(const GroundStateField& gs, double coupling, const std::string& csv_path,
                         const std::string& json_path) {
    std::ostringstream os;
    os << "x,fiber_norm,ell\n";
    for (int64_t i = 0; i < gs.grid.num_nodes(); ++i) {
        Vec3 p = gs.grid.node_coord(gs.grid.unflatten(i));
        os << fmt17(p[0]) << ',' << fmt17(gs.fiber_norm(i)) << ',' << fmt17(gs.ell(i)) << '\n';
    }
    write_text_file(csv_path, os.str());

    json j;
    j["energy"] = gs.energy;
    j["residual"] = gs.residual;
    j["coupling"] = coupling;
    j["grid"] = grid_json(gs.grid);
    j["n_max"] = gs.basis.n_max;
    j["nu"] = gs.basis.nu;
    j["fock_dim"] = gs.fock_dim;
    j["phase"] = gs.phase;
    json modes = json::array();
    for (const auto& m : gs.basis.modes) modes.push_back({{"k", m.k}, {"eta", m.eta}});
    j["modes"] = modes;
    json coeff = json::array();
    for (double c : gs.coeff) coeff.push_back(c);
    j["coeff"] = coeff;
    write_text_file(json_path, j.dump(2) + "\n");
}

GroundStateField load_ground_state(const std::string& csv_path, const std::string& json_path) {
    (void)csv_path; // the sidecar carries the full coefficient array
    json j = json::parse(read_text_file(json_path));
    GroundStateField gs;
    gs.grid = grid_from_json(j["grid"]);
    std::vector<FockBasis::Mode> modes;
    for (const auto& m : j["modes"]) modes.push_back({m["k"].get<double>(), m["eta"].get<double>()});
    gs.basis = FockBasis(modes, j["nu"].get<double>(), j["n_max"].get<int>());
    gs.fock_dim = j["fock_dim"].get<int64_t>();
    gs.energy = j["energy"].get<double>();
    gs.residual = j["residual"].get<double>();
    gs.phase = j.value("phase", "global-sign");
    gs.coeff.clear();
    for (const auto& c : j["coeff"]) gs.coeff.push_back(c.get<double>());
    require(static_cast<int64_t>(gs.coeff.size()) == gs.grid.num_nodes() * gs.fock_dim, Errc::io_error,
            "coefficient array does not match grid x Fock dimensions");
    return gs;
}

void export_profile_csv(const DecayProfile& prof, const std::string& path) {
    std::ostringstream os;
    os << "x,y,z,radius,norm,ell,rho,rho_circ,ratio_upper,ratio_lower,ratios_defined\n";
    for (const auto& r : prof.records) {
        os << fmt17(r.x[0]) << ',' << fmt17(r.x[1]) << ',' << fmt17(r.x[2]) << ',' << fmt17(r.radius) << ','
           << fmt17(r.norm) << ',' << fmt17(r.ell) << ',' << fmt17(r.rho) << ',' << fmt17(r.rho_circ) << ','
           << fmt17(r.ratio_upper) << ',' << fmt17(r.ratio_lower) << ',' << (r.ratios_defined ? 1 : 0) << '\n';
    }
    write_text_file(path, os.str());
}

std::string sandwich_json(const std::vector<SandwichFit>& fits) {
    json arr = json::array();
    for (const auto& f : fits) {
        json j;
        j["eps"] = f.eps;
        j["c_eps"] = f.c_eps;
        j["C_eps"] = f.C_eps;
        j["window"] = {f.window_lo, f.window_hi};
        j["records_used"] = f.records_used;
        j["finite_positive"] = f.finite_positive;
        j["certified"] = f.certified;
        j["pass"] = f.pass;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::string matching_csv(const std::vector<MatchingRow>& rows) {
    std::ostringstream os;
    os << "radius,max_ratio,nodes\n";
    for (const auto& r : rows) os << fmt17(r.radius) << ',' << fmt17(r.max_ratio) << ',' << r.nodes << '\n';
    return os.str();
}

std::string estimates_json(const std::vector<McEstimate>& estimates, double dt) {
    json arr = json::array();
    for (const auto& e : estimates) {
        json j;
        j["tag"] = e.tag;
        j["value"] = e.value;
        j["stderr"] = e.stderr_;
        j["M"] = e.samples;
        j["dt"] = dt;
        j["seed"] = e.seed;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

} // namespace agml
