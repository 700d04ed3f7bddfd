#pragma once

#include <cstddef>
#include <vector>

#include "qrec/score_matrix.hpp"

namespace qrec {

struct MosResult {
    std::vector<double> scores;        // per video
    std::vector<double> ci_halfwidth;  // 95%; +infinity when fewer than 2 scores
};

/// Per-video mean of present scores with a normal 95% interval
/// 1.96 * s_e / sqrt(n_e), where s_e is the sample (n-1) stddev.
MosResult mos(const ScoreMatrix& m);

/// Per-subject standardization (x - mu_s) / sigma_s over present
/// entries, population sigma. Mask and labels preserved.
/// Throws ZeroVariance for a subject with constant scores.
ScoreMatrix zscore(const ScoreMatrix& m);

struct RejectionResult {
    std::vector<std::size_t> rejected;  // ascending subject indices
    std::vector<int> p;                 // per-subject high-outlier counts
    std::vector<int> q;                 // per-subject low-outlier counts

    bool is_rejected(std::size_t s) const;
};

/// Outlier threshold multiplier: 2 for rows with kurtosis in [2, 4],
/// sqrt(20) otherwise.
double rejection_epsilon(double kurtosis);

/// Screen subjects whose scores deviate from the per-video mean by
/// epsilon_e * sigma_e too often on both sides: a subject is rejected
/// when (p+q)/n_s >= 0.05 and |p-q|/(p+q) < 0.3, where n_s is the
/// subject's present-score count. Videos with zero score variance
/// contribute no counts.
RejectionResult subject_rejection(const ScoreMatrix& m);

/// subject_rejection, drop the rejected columns, then mos.
/// Throws EmptyAfterRejection when a video would lose all its scores.
MosResult sr_mos(const ScoreMatrix& m);

/// zscore, subject_rejection on the standardized matrix, drop the
/// rejected columns, then mos. Output stays in z-score units.
MosResult zs_sr_mos(const ScoreMatrix& m);

}  // namespace qrec
