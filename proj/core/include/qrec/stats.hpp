#pragma once

#include <vector>

#include "qrec/score_matrix.hpp"

namespace qrec {

enum class Axis { Video, Subject };

struct Means {
    std::vector<double> video;    // mu_e
    std::vector<double> subject;  // mu_s
};

/// Per-video and per-subject means over present scores.
Means means(const ScoreMatrix& m);

std::vector<double> video_means(const ScoreMatrix& m);
std::vector<double> subject_means(const ScoreMatrix& m);

/// n-th central moment over present scores, population-normalized
/// (divide by the present count, not count - 1).
std::vector<double> central_moment(const ScoreMatrix& m, int order, Axis axis);

std::vector<double> video_stddev(const ScoreMatrix& m);    // sigma_e
std::vector<double> subject_stddev(const ScoreMatrix& m);  // sigma_s

/// Per-content RMS deviation of present scores from the subject means:
/// sigma_c = sqrt(sum over present (e,s) with c(e)=c of (x_es - mu_s)^2 / count).
std::vector<double> content_stddev(const ScoreMatrix& m,
                                   const std::vector<double>& subject_means);

/// The descriptive statistics most callers need together.
struct Moments {
    std::vector<double> mu_e, mu_s;
    std::vector<double> m2_e, m2_s;
    std::vector<double> sigma_e, sigma_s, sigma_c;
};

Moments compute_moments(const ScoreMatrix& m);

}  // namespace qrec
