#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrec/score_matrix.hpp"
#include "qrec/solver.hpp"

namespace qrec {

enum class MethodId { Mos, SrMos, ZsSrMos, Mle };

inline constexpr std::array<MethodId, 4> kAllMethods{MethodId::Mos, MethodId::SrMos,
                                                     MethodId::ZsSrMos, MethodId::Mle};

std::string_view method_name(MethodId id);
std::optional<MethodId> parse_method(std::string_view name);

/// sqrt(mean((a_i - b_i)^2)). Throws LengthMismatch.
double rmse(std::span<const double> a, std::span<const double> b);

/// The method's recovered per-video quality scores. ZsSrMos output is in
/// z-score units; everything else stays in score units.
std::vector<double> recover(const ScoreMatrix& m, MethodId method, const SolverConfig& cfg);

/// The method's own recovery on the unaltered full dataset -- the RMSE
/// reference every degraded-condition run is compared against.
std::vector<double> benchmark(const ScoreMatrix& m, MethodId method, const SolverConfig& cfg);

/// What degraded-condition recoveries are measured against.
enum class RmseTarget {
    MethodBenchmark,  // the method's own full-data recovery
    GroundTruth,      // known true x* from a synthetic generator
};

/// Per-method RMSE statistics over seeded repetitions along one
/// condition axis. completed[i] + dropped[i] == repetitions for every
/// cell; a repetition is dropped when the degradation or the recovery
/// errors out (for that method only). ZsSrMos reports in z-score units,
/// comparable across its own conditions but not across methods.
struct ExperimentReport {
    MethodId method = MethodId::Mos;
    RmseTarget target = RmseTarget::MethodBenchmark;
    std::string units;  // "score" or "z-score"
    std::vector<double> condition_axis;
    std::vector<double> rmse_mean;
    std::vector<double> rmse_std;
    std::vector<int> completed;
    std::vector<int> dropped;
    /// Raw per-repetition RMSE values per condition, in seed order.
    std::vector<std::vector<double>> rmse_values;
    int repetitions = 0;
    std::uint64_t base_seed = 0;
};

/// All four runners share the protocol: for each condition value and
/// repetition r, degrade the dataset with seed (base seed + r), recover
/// with every method, and report RMSE against the method's benchmark
/// (or against ground_truth when given; in that mode ZsSrMos is only
/// meaningful if the truth is in z-units). Every method sees the same
/// degraded matrix within a repetition. Deterministic by construction.

std::vector<ExperimentReport> run_convergence(
    const ScoreMatrix& m, const std::vector<MethodId>& methods,
    const std::vector<std::size_t>& subject_counts, int repetitions, std::uint64_t seed,
    const SolverConfig& cfg, const std::vector<double>* ground_truth = nullptr);

std::vector<ExperimentReport> run_subject_corruption(
    const ScoreMatrix& m, const std::vector<MethodId>& methods,
    const std::vector<std::size_t>& corrupt_counts, int repetitions, std::uint64_t seed,
    const SolverConfig& cfg, const std::vector<double>* ground_truth = nullptr);

std::vector<ExperimentReport> run_random_corruption(
    const ScoreMatrix& m, const std::vector<MethodId>& methods,
    const std::vector<double>& probs, int repetitions, std::uint64_t seed,
    const SolverConfig& cfg, const std::vector<double>* ground_truth = nullptr);

/// Condition axis is reported as the realized mean kept-score count per
/// keep probability.
std::vector<ExperimentReport> run_selective_sampling(
    const ScoreMatrix& m, const std::vector<MethodId>& methods,
    const std::vector<double>& keep_probs, int repetitions, std::uint64_t seed,
    const SolverConfig& cfg, const std::vector<double>* ground_truth = nullptr);

}  // namespace qrec
