#ifndef AGMONLAB_RUNNER_HPP
#define AGMONLAB_RUNNER_HPP

#include <optional>
#include <string>

#include "agmonlab/config.hpp"

namespace agml {

struct RunOverrides {
    std::optional<std::string> out_dir;
    std::optional<uint64_t> seed;
    std::optional<int> threads;
};

/// Distance pipeline: eikonal + shortest-path oracle + action minimization at
/// the configured query points; writes field exports and a comparison report.
void run_agmon(const ExperimentConfig& cfg, const RunOverrides& ov = {});

/// Ground-state pipeline: Schrodinger or toy field model; writes the field
/// export and, when configured, a truncation-convergence report.
void run_spectral(const ExperimentConfig& cfg, const RunOverrides& ov = {});

/// Monte Carlo pipeline: configured estimators to JSON records.
void run_mc(const ExperimentConfig& cfg, const RunOverrides& ov = {});

/// Verification pipeline: decay profile + sandwich fits + matching table.
/// Throws AssertionFailure when require_pass is set and a fit fails.
void run_verify(const ExperimentConfig& cfg, const RunOverrides& ov = {});

} // namespace agml

#endif
