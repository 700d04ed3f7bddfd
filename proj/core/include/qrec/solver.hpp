#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "qrec/likelihood.hpp"
#include "qrec/model_params.hpp"
#include "qrec/score_matrix.hpp"

namespace qrec {

/// How the flat direction of the likelihood (x_e + delta, b_s - delta)
/// is pinned down.
enum class Gauge {
    ZeroMeanBias,        // shift so that mean(b) == 0 (the "average viewer" frame)
    FixFirstVideoToMos,  // shift so that x_1 equals the first video's mean score
    None,
};

std::string_view gauge_name(Gauge mode);
std::optional<Gauge> parse_gauge(std::string_view name);

struct SolverConfig {
    double alpha = 0.1;           // refresh rate of the damped updates
    double stop_threshold = 1e-9; // Euclidean threshold on the per-iteration change in x
    std::size_t max_iterations = 10000;
    Gauge gauge = Gauge::ZeroMeanBias;
    double variance_floor = 1e-8; // lower clamp for v and a, score units

    /// Throws InvariantViolation when out of range.
    void validate() const;
};

struct ParamEstimates {
    ModelParams params;
    /// 95% half-width per scalar parameter; +infinity marks an interval
    /// the observed information cannot bound.
    FamilyVectors ci_halfwidth;
    std::size_t iterations_used = 0;
    bool converged = false;
    double final_delta_x = std::numeric_limits<double>::infinity();
    /// v/a scalar updates that met non-concave local curvature and fell
    /// back to a gradient step scaled by the curvature magnitude.
    std::size_t fallback_updates = 0;
};

/// Starting point: x at the per-video means, b at zero, v at the
/// per-subject score stddev, a at the per-content stddev, with v and a
/// raised to the variance floor.
ModelParams initialize(const ScoreMatrix& m, const SolverConfig& cfg = {});

/// One full iteration: update all b_s, then all v_s, then all a_c, then
/// all x_e, each family from the parameter state current at that point
/// and blended as (1 - alpha) * old + alpha * new; v and a are clamped
/// to the variance floor, and the gauge projection is applied last.
/// A v/a scalar whose local second derivative is >= 0 steps along the
/// gradient scaled by the curvature magnitude instead of the Newton
/// quotient (counted in *fallback_updates when given); exactly-zero
/// curvature leaves the scalar unchanged for the iteration.
ModelParams newton_step(const ScoreMatrix& m, const ModelParams& p, const SolverConfig& cfg,
                        std::size_t* fallback_updates = nullptr);

/// Shift along the flat direction per the gauge mode; the likelihood is
/// exactly unchanged. video_means is only consulted by FixFirstVideoToMos.
ModelParams gauge_fix(ModelParams p, Gauge mode, const std::vector<double>& video_means);

/// Per-parameter 95% half-widths 1.96 / sqrt(-d2L/dtheta2) from the
/// observed information; +infinity where the curvature is not negative.
FamilyVectors confidence_intervals(const ScoreMatrix& m, const ModelParams& p);

/// Run newton_step from initialize(m) until the Euclidean change in x
/// falls below cfg.stop_threshold or the iteration cap is hit.
/// Deterministic: identical inputs produce bit-identical estimates.
/// Non-convergence is reported through the flags, not thrown.
ParamEstimates solve(const ScoreMatrix& m, const SolverConfig& cfg = {});

}  // namespace qrec
