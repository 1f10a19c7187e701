// Command-line front end over the agmonlab shared library. Subcommands map
// one-to-one onto the experiment runner; exit codes: 0 pass, 1 config/IO
// error, 2 numerical failure, 3 assertion failure.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agmonlab.h"

namespace {

int run_kind(const char* kind, const std::string& config, const std::string& out, int64_t seed, int threads) {
    agml_status st = agml_run(kind, config.c_str(), out.empty() ? nullptr : out.c_str(), seed, threads);
    if (st != AGML_OK) std::fprintf(stderr, "agmonlab %s: %s\n", kind, agml_last_error());
    return agml_exit_class(st);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"agmonlab: Agmon distances, ground-state decay and Monte Carlo checks"};
    app.require_subcommand(1);

    std::string config, out;
    int64_t seed = -1;
    int threads = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) sub->add_option("--config", config, "experiment config file")->required();
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (overrides the config)");
    };

    CLI::App* agmon = app.add_subcommand("agmon", "distance solvers and action minimization");
    add_common(agmon, true);
    CLI::App* spectral = app.add_subcommand("spectral", "ground-state field computation");
    add_common(spectral, true);
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimators");
    add_common(mc, true);
    CLI::App* verify = app.add_subcommand("verify", "decay-bound verification pipeline");
    add_common(verify, true);
    CLI::App* schema = app.add_subcommand("schema-dump", "print the reference config with defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (schema->parsed()) {
        size_t needed = 0;
        agml_schema_dump(nullptr, 0, &needed);
        std::vector<char> buf(needed);
        agml_schema_dump(buf.data(), buf.size(), nullptr);
        std::fputs(buf.data(), stdout);
        return 0;
    }
    if (agmon->parsed()) return run_kind("agmon", config, out, seed, threads);
    if (spectral->parsed()) return run_kind("spectral", config, out, seed, threads);
    if (mc->parsed()) return run_kind("mc", config, out, seed, threads);
    if (verify->parsed()) return run_kind("verify", config, out, seed, threads);
    return 1;
}
