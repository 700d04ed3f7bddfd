#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qrec/baselines.hpp"
#include "qrec/harness.hpp"
#include "qrec/score_matrix.hpp"
#include "qrec/solver.hpp"

namespace qrec {

/// Load a dataset. ".json" files use the long-form record format,
/// anything else the wide CSV grid (formats documented in the README).
/// Throws ParseError with line/field context, or InvariantViolation
/// when the parsed data is structurally unusable.
ScoreMatrix load_dataset(const std::filesystem::path& path);

/// Write a dataset in the format chosen by the extension. Missing labels
/// are generated ("v1"..., "s1"..., "c1"...) so every file round-trips.
/// Scores are written in shortest round-trip decimal form; reloading
/// reproduces values and mask exactly.
void save_dataset(const ScoreMatrix& m, const std::filesystem::path& path);

/// Estimate families only the MLE method produces.
struct MleDetails {
    std::vector<double> bias, bias_ci;
    std::vector<double> inconsistency, inconsistency_ci;
    std::vector<double> ambiguity, ambiguity_ci;
    std::size_t iterations = 0;
    bool converged = false;
    double final_delta_x = 0.0;
};

/// One recovery run, as written to and read back from a results file.
/// CI half-widths may be +infinity, serialized as the literal "inf".
struct RecoveryResult {
    MethodId method = MethodId::Mos;
    SolverConfig config;
    std::string units;  // "score" or "z-score"
    std::vector<double> scores;
    std::vector<double> ci_halfwidth;
    std::optional<MleDetails> mle;
    std::vector<std::string> video_labels, subject_labels, content_labels;
};

/// Run one recovery method and assemble the result document for it.
RecoveryResult run_recovery(const ScoreMatrix& m, MethodId method, const SolverConfig& cfg);

/// Deterministic byte output: stable key order, shortest round-trip
/// number formatting. write -> read is lossless.
void save_results(const RecoveryResult& result, const std::filesystem::path& path);
RecoveryResult load_results(const std::filesystem::path& path);

/// Rejected-subject report with the per-subject outlier tallies.
void save_rejection(const RejectionResult& rejection, const ScoreMatrix& m,
                    const std::filesystem::path& path);

/// Flat CSV, one row per (method, condition), sorted by (method,
/// condition) regardless of computation order:
/// method,condition,rmse_mean,rmse_std,repetitions,dropped
void export_plot_data(const std::vector<ExperimentReport>& reports,
                      const std::filesystem::path& path);

}  // namespace qrec
