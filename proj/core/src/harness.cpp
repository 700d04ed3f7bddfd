#include "qrec/harness.hpp"

#include <cmath>
#include <functional>

#include "qrec/baselines.hpp"
#include "qrec/errors.hpp"
#include "qrec/synth.hpp"

namespace qrec {

namespace {

/// Degrades the dataset for one (condition value, repetition seed) cell.
using Degrade = std::function<ScoreMatrix(const ScoreMatrix&, double, std::uint64_t)>;

std::vector<ExperimentReport> run_axis(const ScoreMatrix& m,
                                       const std::vector<MethodId>& methods,
                                       const std::vector<double>& conditions,
                                       bool axis_is_mean_kept_count, int repetitions,
                                       std::uint64_t seed, const SolverConfig& cfg,
                                       const std::vector<double>* ground_truth,
                                       const Degrade& degrade) {
    if (repetitions < 1) throw InvariantViolation("repetition count must be >= 1");

    std::vector<ExperimentReport> reports(methods.size());
    std::vector<std::vector<double>> targets(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
        reports[i].method = methods[i];
        reports[i].target =
            ground_truth ? RmseTarget::GroundTruth : RmseTarget::MethodBenchmark;
        reports[i].units = methods[i] == MethodId::ZsSrMos ? "z-score" : "score";
        reports[i].repetitions = repetitions;
        reports[i].base_seed = seed;
        targets[i] = ground_truth ? *ground_truth : benchmark(m, methods[i], cfg);
    }

    for (const double condition : conditions) {
        std::vector<std::vector<double>> values(methods.size());
        std::vector<int> dropped(methods.size(), 0);
        double kept_count_sum = 0.0;
        int kept_count_n = 0;

        for (int rep = 0; rep < repetitions; ++rep) {
            const std::uint64_t rep_seed = seed + static_cast<std::uint64_t>(rep);
            std::optional<ScoreMatrix> degraded;
            try {
                degraded.emplace(degrade(m, condition, rep_seed));
            } catch (const Error&) {
                for (auto& count : dropped) ++count;
                continue;
            }
            kept_count_sum += static_cast<double>(degraded->present_total());
            ++kept_count_n;
            for (std::size_t i = 0; i < methods.size(); ++i) {
                try {
                    const std::vector<double> recovered = recover(*degraded, methods[i], cfg);
                    values[i].push_back(rmse(recovered, targets[i]));
                } catch (const Error&) {
                    ++dropped[i];
                }
            }
        }

        const double axis_value = axis_is_mean_kept_count
                                      ? (kept_count_n > 0 ? kept_count_sum / kept_count_n : 0.0)
                                      : condition;
        for (std::size_t i = 0; i < methods.size(); ++i) {
            double mean = 0.0, sd = 0.0;
            if (!values[i].empty()) {
                for (const double value : values[i]) mean += value;
                mean /= static_cast<double>(values[i].size());
                for (const double value : values[i]) sd += (value - mean) * (value - mean);
                sd = std::sqrt(sd / static_cast<double>(values[i].size()));
            }
            reports[i].condition_axis.push_back(axis_value);
            reports[i].rmse_mean.push_back(mean);
            reports[i].rmse_std.push_back(sd);
            reports[i].completed.push_back(static_cast<int>(values[i].size()));
            reports[i].dropped.push_back(dropped[i]);
            reports[i].rmse_values.push_back(std::move(values[i]));
        }
    }
    return reports;
}

}  // namespace

std::string_view method_name(MethodId id) {
    switch (id) {
        case MethodId::Mos: return "mos";
        case MethodId::SrMos: return "sr-mos";
        case MethodId::ZsSrMos: return "zs-sr-mos";
        case MethodId::Mle: return "mle";
    }
    return "unknown";
}

std::optional<MethodId> parse_method(std::string_view name) {
    for (const MethodId id : kAllMethods) {
        if (method_name(id) == name) return id;
    }
    return std::nullopt;
}

double rmse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw LengthMismatch("rmse needs two equal-length non-empty vectors");
    }
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(a.size()));
}

std::vector<double> recover(const ScoreMatrix& m, MethodId method, const SolverConfig& cfg) {
    switch (method) {
        case MethodId::Mos: return mos(m).scores;
        case MethodId::SrMos: return sr_mos(m).scores;
        case MethodId::ZsSrMos: return zs_sr_mos(m).scores;
        case MethodId::Mle: return solve(m, cfg).params.x;
    }
    throw InvariantViolation("unknown recovery method");
}

std::vector<double> benchmark(const ScoreMatrix& m, MethodId method, const SolverConfig& cfg) {
    return recover(m, method, cfg);
}

std::vector<ExperimentReport> run_convergence(const ScoreMatrix& m,
                                              const std::vector<MethodId>& methods,
                                              const std::vector<std::size_t>& subject_counts,
                                              int repetitions, std::uint64_t seed,
                                              const SolverConfig& cfg,
                                              const std::vector<double>* ground_truth) {
    std::vector<double> conditions(subject_counts.begin(), subject_counts.end());
    return run_axis(m, methods, conditions, false, repetitions, seed, cfg, ground_truth,
                    [](const ScoreMatrix& full, double condition, std::uint64_t rep_seed) {
                        return subsample_subjects(
                            full, static_cast<std::size_t>(condition), rep_seed);
                    });
}

std::vector<ExperimentReport> run_subject_corruption(const ScoreMatrix& m,
                                                     const std::vector<MethodId>& methods,
                                                     const std::vector<std::size_t>& corrupt_counts,
                                                     int repetitions, std::uint64_t seed,
                                                     const SolverConfig& cfg,
                                                     const std::vector<double>* ground_truth) {
    std::vector<double> conditions(corrupt_counts.begin(), corrupt_counts.end());
    return run_axis(m, methods, conditions, false, repetitions, seed, cfg, ground_truth,
                    [](const ScoreMatrix& full, double condition, std::uint64_t rep_seed) {
                        return scramble_random_subjects(
                            full, static_cast<std::size_t>(condition), rep_seed);
                    });
}

std::vector<ExperimentReport> run_random_corruption(const ScoreMatrix& m,
                                                    const std::vector<MethodId>& methods,
                                                    const std::vector<double>& probs,
                                                    int repetitions, std::uint64_t seed,
                                                    const SolverConfig& cfg,
                                                    const std::vector<double>* ground_truth) {
    return run_axis(m, methods, probs, false, repetitions, seed, cfg, ground_truth,
                    [](const ScoreMatrix& full, double condition, std::uint64_t rep_seed) {
                        return corrupt_random(full, condition, rep_seed);
                    });
}

std::vector<ExperimentReport> run_selective_sampling(const ScoreMatrix& m,
                                                     const std::vector<MethodId>& methods,
                                                     const std::vector<double>& keep_probs,
                                                     int repetitions, std::uint64_t seed,
                                                     const SolverConfig& cfg,
                                                     const std::vector<double>* ground_truth) {
    return run_axis(m, methods, keep_probs, true, repetitions, seed, cfg, ground_truth,
                    [](const ScoreMatrix& full, double condition, std::uint64_t rep_seed) {
                        return subsample(full, condition, rep_seed);
                    });
}

}  // namespace qrec
