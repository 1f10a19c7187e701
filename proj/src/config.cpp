#include "agmonlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "agmonlab/io.hpp"

namespace agml {

namespace {

struct Value {
    enum class Kind { number, string, boolean, num_array, str_array } kind = Kind::number;
    double num = 0.0;
    std::string str;
    bool b = false;
    std::vector<double> nums;
    std::vector<std::string> strs;
    int line = 0;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Value parse_scalar(const std::string& tok, int line, const std::string& where) {
    Value v;
    v.line = line;
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
        v.kind = Value::Kind::string;
        v.str = tok.substr(1, tok.size() - 2);
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = Value::Kind::boolean;
        v.b = (tok == "true");
        return v;
    }
    try {
        size_t pos = 0;
        v.num = std::stod(tok, &pos);
        require(pos == tok.size(), Errc::config_error, "bad numeric value '" + tok + "' for " + where);
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail(Errc::config_error, "bad value '" + tok + "' for " + where);
    }
    v.kind = Value::Kind::number;
    return v;
}

Value parse_value(const std::string& raw, int line, const std::string& where) {
    std::string s = trim(raw);
    require(!s.empty(), Errc::config_error, "empty value for " + where);
    if (s.front() == '[') {
        require(s.back() == ']', Errc::config_error, "unterminated array for " + where);
        Value v;
        v.line = line;
        std::string body = s.substr(1, s.size() - 2);
        std::vector<std::string> toks;
        std::string cur;
        bool instr = false;
        for (char c : body) {
            if (c == '"') instr = !instr;
            if (c == ',' && !instr) {
                toks.push_back(trim(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!trim(cur).empty()) toks.push_back(trim(cur));
        bool any_str = std::any_of(toks.begin(), toks.end(), [](const std::string& t) { return !t.empty() && t.front() == '"'; });
        if (any_str) {
            v.kind = Value::Kind::str_array;
            for (const auto& t : toks) {
                Value sv = parse_scalar(t, line, where);
                require(sv.kind == Value::Kind::string, Errc::config_error, "mixed array types for " + where);
                v.strs.push_back(sv.str);
            }
        } else {
            v.kind = Value::Kind::num_array;
            for (const auto& t : toks) {
                Value sv = parse_scalar(t, line, where);
                require(sv.kind == Value::Kind::number, Errc::config_error, "mixed array types for " + where);
                v.nums.push_back(sv.num);
            }
        }
        return v;
    }
    return parse_scalar(s, line, where);
}

using Tree = std::map<std::string, std::map<std::string, Value>>;

Tree parse_tree(const std::string& text) {
    Tree tree;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        // strip comments outside strings
        std::string stripped;
        bool instr = false;
        for (char c : line) {
            if (c == '"') instr = !instr;
            if (c == '#' && !instr) break;
            stripped.push_back(c);
        }
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            require(stripped.back() == ']', Errc::config_error,
                    "bad section header at line " + std::to_string(lineno));
            section = trim(stripped.substr(1, stripped.size() - 2));
            require(!section.empty(), Errc::config_error, "empty section name at line " + std::to_string(lineno));
            tree[section];
            continue;
        }
        size_t eq = stripped.find('=');
        require(eq != std::string::npos, Errc::config_error,
                "expected key = value at line " + std::to_string(lineno));
        std::string key = trim(stripped.substr(0, eq));
        require(!key.empty(), Errc::config_error, "empty key at line " + std::to_string(lineno));
        require(!section.empty(), Errc::config_error,
                "key '" + key + "' outside any [section] at line " + std::to_string(lineno));
        std::string where = section + "." + key;
        require(!tree[section].count(key), Errc::config_error, "duplicate key " + where);
        tree[section][key] = parse_value(stripped.substr(eq + 1), lineno, where);
    }
    return tree;
}

struct Schema {
    struct Key {
        const char* section;
        const char* key;
        Value::Kind kind;
        const char* doc;
        std::string default_repr;
    };
    std::vector<Key> keys;

    const Key* find(const std::string& section, const std::string& key) const {
        for (const auto& k : keys)
            if (section == k.section && key == k.key) return &k;
        return nullptr;
    }
};

std::string repr_nums(const std::vector<double>& v) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << fmt17(v[i]);
    os << "]";
    return os.str();
}

std::string repr_strs(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << '"' << v[i] << '"';
    os << "]";
    return os.str();
}

Schema make_schema(const ExperimentConfig& d) {
    using K = Value::Kind;
    Schema s;
    auto num = [](double x) { return fmt17(x); };
    s.keys = {
        {"experiment", "seed", K::number, "RNG seed shared by every stochastic component", num(static_cast<double>(d.seed))},
        {"experiment", "threads", K::number, "worker threads for Monte Carlo batches", num(d.threads)},
        {"experiment", "out_dir", K::string, "output directory", '"' + d.out_dir + '"'},

        {"potential", "kind", K::string, "constant | radial_poly | coord_poly", '"' + d.potential_kind + '"'},
        {"potential", "dim", K::number, "spatial dimension (1..3)", num(d.dim)},
        {"potential", "value", K::number, "constant potential value", num(d.constant_value)},
        {"potential", "coeffs", K::num_array, "radial polynomial: V = sum coeffs[k] |x|^k", repr_nums(d.radial_coeffs)},
        {"potential", "terms", K::num_array, "coord polynomial: flat (c, e1, e2, e3) quadruples over |x_i|", repr_nums(d.coord_terms)},
        {"potential", "envelope", K::num_array, "optional (a, b, A, B, n, m) growth envelope", repr_nums(d.envelope)},

        {"grid", "lo", K::num_array, "box lower corner, one entry per axis", repr_nums(d.grid_lo)},
        {"grid", "hi", K::num_array, "box upper corner, one entry per axis", repr_nums(d.grid_hi)},
        {"grid", "h", K::number, "grid spacing (must be positive)", num(d.grid_h)},

        {"agmon", "dijkstra_order", K::number, "neighbor template order for the shortest-path oracle", num(d.dijkstra_order)},
        {"agmon", "sup_radius", K::number, "ball radius of the thickened potential", num(d.sup_radius)},
        {"agmon", "sup_samples", K::number, "sample budget for the non-radial ball supremum", num(d.sup_samples)},
        {"agmon", "minimize_nodes", K::number, "movable interior nodes of the path minimizer", num(d.minimize_nodes)},
        {"agmon", "minimize_max_iter", K::number, "max gradient-descent sweeps", num(d.minimize_max_iter)},
        {"agmon", "minimize_tol", K::number, "relative stationarity tolerance", num(d.minimize_tol)},
        {"agmon", "query_points", K::num_array, "flat (x, y, z) triples for distance queries", repr_nums(d.query_points)},
        {"agmon", "residual_exclude", K::number, "radius around the source excluded from residual stats", num(d.residual_exclude)},
        {"agmon", "travel_r0", K::number, "R0 of the travel-time bound report (0 disables)", num(d.travel_r0)},
        {"agmon", "travel_r1", K::number, "R1 of the travel-time bound report", num(d.travel_r1)},

        {"spectral", "model", K::string, "schrodinger | nelson", '"' + d.model + '"'},
        {"spectral", "tol", K::number, "eigensolver residual tolerance", num(d.spectral_tol)},
        {"spectral", "mode_k", K::num_array, "mode wavenumbers (k >= 0)", repr_nums(d.mode_k)},
        {"spectral", "mode_eta", K::num_array, "mode weights in [0,1]", repr_nums(d.mode_eta)},
        {"spectral", "nu", K::number, "boson mass (k = 0 modes need nu > 0)", num(d.nu)},
        {"spectral", "n_max", K::number, "occupancy truncation per mode", num(d.n_max)},
        {"spectral", "g", K::number, "coupling constant", num(d.coupling)},
        {"spectral", "dim_cap", K::number, "cap on grid x Fock dimension", num(static_cast<double>(d.dim_cap))},
        {"spectral", "chi_radii", K::num_array, "radii R at which chi(R) is reported", repr_nums(d.chi_radii)},
        {"spectral", "convergence_check", K::boolean, "rerun with n_max + 2 and compare", d.convergence_check ? "true" : "false"},

        {"mc", "dt", K::number, "Euler-Maruyama time step", num(d.mc_dt)},
        {"mc", "paths", K::number, "Monte Carlo path count", num(static_cast<double>(d.mc_paths))},
        {"mc", "T", K::number, "time horizon", num(d.mc_T)},
        {"mc", "estimators", K::str_array,
         "subset of dirichlet_tau, ball_survival, girsanov, fk, certificate", repr_strs(d.estimators)},
        {"mc", "fk_points", K::num_array, "1D x values for the Feynman-Kac reconstruction", repr_nums(d.fk_points)},
        {"mc", "cert_points", K::num_array, "1D x values for the certificate report", repr_nums(d.cert_points)},
        {"mc", "cert_p", K::num_array, "Hoelder exponents for the certificate sweep", repr_nums(d.cert_p)},

        {"verify", "epsilons", K::num_array, "epsilon list for the sandwich fits", repr_nums(d.epsilons)},
        {"verify", "window", K::num_array, "radial fit window [lo, hi]", repr_nums(d.window)},
        {"verify", "matching_radii", K::num_array, "radii of the rho_circ/rho matching table", repr_nums(d.matching_radii)},
        {"verify", "require_pass", K::boolean, "exit 3 when a configured fit fails", d.require_pass ? "true" : "false"},
        {"verify", "ground_state_json", K::string, "optional: reuse a spectral run's JSON export", "\"\""},
    };
    return s;
}

int64_t as_int(const Value& v, const std::string& where) {
    require(v.kind == Value::Kind::number, Errc::config_error, where + " must be a number");
    require(std::fabs(v.num - std::round(v.num)) < 1e-9, Errc::config_error, where + " must be an integer");
    return static_cast<int64_t>(std::llround(v.num));
}

} // namespace

Potential ExperimentConfig::make_potential() const {
    Potential p = [&] {
        if (potential_kind == "constant") return Potential::constant(dim, constant_value);
        if (potential_kind == "radial_poly") return Potential::radial_poly(dim, radial_coeffs);
        if (potential_kind == "coord_poly") {
            require(!coord_terms.empty() && coord_terms.size() % 4 == 0, Errc::config_error,
                    "potential.terms must hold (c, e1, e2, e3) quadruples");
            std::vector<Potential::CoordTerm> terms;
            for (size_t i = 0; i < coord_terms.size(); i += 4) {
                Potential::CoordTerm t;
                t.c = coord_terms[i];
                for (int a = 0; a < 3; ++a) {
                    double e = coord_terms[i + 1 + static_cast<size_t>(a)];
                    require(e >= 0 && std::fabs(e - std::round(e)) < 1e-9, Errc::config_error,
                            "potential.terms exponents must be nonnegative integers");
                    t.e[static_cast<size_t>(a)] = static_cast<int>(std::llround(e));
                }
                terms.push_back(t);
            }
            return Potential::coord_poly(dim, terms);
        }
        fail(Errc::config_error, "potential.kind '" + potential_kind + "' is not one of constant, radial_poly, coord_poly");
    }();
    if (!envelope.empty()) {
        require(envelope.size() == 6, Errc::config_error, "potential.envelope needs exactly (a, b, A, B, n, m)");
        p.set_envelope(Envelope{envelope[0], envelope[1], envelope[2], envelope[3], envelope[4], envelope[5]});
    }
    return p;
}

GridSpec ExperimentConfig::make_grid() const {
    require(static_cast<int>(grid_lo.size()) == dim && static_cast<int>(grid_hi.size()) == dim, Errc::config_error,
            "grid.lo and grid.hi must have one entry per axis (potential.dim)");
    Vec3 lo, hi;
    for (int a = 0; a < dim; ++a) {
        lo[a] = grid_lo[static_cast<size_t>(a)];
        hi[a] = grid_hi[static_cast<size_t>(a)];
    }
    return GridSpec(dim, lo, hi, grid_h);
}

FockBasis ExperimentConfig::make_basis() const {
    require(mode_k.size() == mode_eta.size(), Errc::config_error,
            "spectral.mode_k and spectral.mode_eta must have equal length");
    std::vector<FockBasis::Mode> modes;
    for (size_t j = 0; j < mode_k.size(); ++j) modes.push_back({mode_k[j], mode_eta[j]});
    return FockBasis(modes, nu, n_max);
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    Schema schema = make_schema(cfg);
    Tree tree = parse_tree(text);

    for (const auto& [section, keys] : tree) {
        for (const auto& [key, value] : keys) {
            const Schema::Key* sk = schema.find(section, key);
            require(sk != nullptr, Errc::config_error, "unknown config key " + section + "." + key);
            std::string where = section + "." + key;
            // numeric arrays accept any length here; semantic checks are
            // done by the consumers so diagnostics can name the field
            switch (sk->kind) {
                case Value::Kind::number:
                    require(value.kind == Value::Kind::number, Errc::config_error, where + " must be a number");
                    break;
                case Value::Kind::string:
                    require(value.kind == Value::Kind::string, Errc::config_error, where + " must be a string");
                    break;
                case Value::Kind::boolean:
                    require(value.kind == Value::Kind::boolean, Errc::config_error, where + " must be true or false");
                    break;
                case Value::Kind::num_array:
                    require(value.kind == Value::Kind::num_array, Errc::config_error, where + " must be a numeric array");
                    break;
                case Value::Kind::str_array:
                    require(value.kind == Value::Kind::str_array, Errc::config_error, where + " must be a string array");
                    break;
            }
        }
    }

    auto get = [&](const char* sec, const char* key) -> const Value* {
        auto s = tree.find(sec);
        if (s == tree.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        return &k->second;
    };
    auto num = [&](const char* sec, const char* key, double& out) {
        if (const Value* v = get(sec, key)) out = v->num;
    };
    auto integer = [&](const char* sec, const char* key, auto& out) {
        if (const Value* v = get(sec, key)) out = static_cast<std::decay_t<decltype(out)>>(as_int(*v, std::string(sec) + "." + key));
    };
    auto str = [&](const char* sec, const char* key, std::string& out) {
        if (const Value* v = get(sec, key)) out = v->str;
    };
    auto boolean = [&](const char* sec, const char* key, bool& out) {
        if (const Value* v = get(sec, key)) out = v->b;
    };
    auto nums = [&](const char* sec, const char* key, std::vector<double>& out) {
        if (const Value* v = get(sec, key)) out = v->nums;
    };
    auto strs = [&](const char* sec, const char* key, std::vector<std::string>& out) {
        if (const Value* v = get(sec, key)) out = v->strs;
    };

    integer("experiment", "seed", cfg.seed);
    integer("experiment", "threads", cfg.threads);
    str("experiment", "out_dir", cfg.out_dir);

    str("potential", "kind", cfg.potential_kind);
    integer("potential", "dim", cfg.dim);
    num("potential", "value", cfg.constant_value);
    nums("potential", "coeffs", cfg.radial_coeffs);
    nums("potential", "terms", cfg.coord_terms);
    nums("potential", "envelope", cfg.envelope);

    nums("grid", "lo", cfg.grid_lo);
    nums("grid", "hi", cfg.grid_hi);
    num("grid", "h", cfg.grid_h);
    require(cfg.grid_h > 0.0, Errc::config_error, "grid.h must be positive");
    require(cfg.dim >= 1 && cfg.dim <= 3, Errc::config_error, "potential.dim must be 1..3");

    integer("agmon", "dijkstra_order", cfg.dijkstra_order);
    num("agmon", "sup_radius", cfg.sup_radius);
    integer("agmon", "sup_samples", cfg.sup_samples);
    integer("agmon", "minimize_nodes", cfg.minimize_nodes);
    integer("agmon", "minimize_max_iter", cfg.minimize_max_iter);
    num("agmon", "minimize_tol", cfg.minimize_tol);
    nums("agmon", "query_points", cfg.query_points);
    num("agmon", "residual_exclude", cfg.residual_exclude);
    num("agmon", "travel_r0", cfg.travel_r0);
    num("agmon", "travel_r1", cfg.travel_r1);
    require(cfg.query_points.size() % 3 == 0, Errc::config_error, "agmon.query_points must hold (x, y, z) triples");

    str("spectral", "model", cfg.model);
    num("spectral", "tol", cfg.spectral_tol);
    nums("spectral", "mode_k", cfg.mode_k);
    nums("spectral", "mode_eta", cfg.mode_eta);
    num("spectral", "nu", cfg.nu);
    integer("spectral", "n_max", cfg.n_max);
    num("spectral", "g", cfg.coupling);
    integer("spectral", "dim_cap", cfg.dim_cap);
    nums("spectral", "chi_radii", cfg.chi_radii);
    boolean("spectral", "convergence_check", cfg.convergence_check);

    num("mc", "dt", cfg.mc_dt);
    integer("mc", "paths", cfg.mc_paths);
    num("mc", "T", cfg.mc_T);
    strs("mc", "estimators", cfg.estimators);
    nums("mc", "fk_points", cfg.fk_points);
    nums("mc", "cert_points", cfg.cert_points);
    nums("mc", "cert_p", cfg.cert_p);
    require(cfg.mc_dt > 0.0, Errc::config_error, "mc.dt must be positive");
    require(cfg.mc_paths >= 1, Errc::config_error, "mc.paths must be at least 1");

    nums("verify", "epsilons", cfg.epsilons);
    nums("verify", "window", cfg.window);
    nums("verify", "matching_radii", cfg.matching_radii);
    boolean("verify", "require_pass", cfg.require_pass);
    str("verify", "ground_state_json", cfg.ground_state_json);
    require(cfg.window.size() == 2, Errc::config_error, "verify.window must be [lo, hi]");

    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), Errc::io_error, "cannot open config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::string schema_dump() {
    ExperimentConfig d;
    Schema schema = make_schema(d);
    std::ostringstream os;
    os << "# agmonlab reference configuration. Every key with its default.\n";
    std::string section;
    for (const auto& k : schema.keys) {
        if (section != k.section) {
            section = k.section;
            os << "\n[" << section << "]\n";
        }
        os << k.key << " = " << k.default_repr << "  # " << k.doc << "\n";
    }
    return os.str();
}

} // namespace agml
