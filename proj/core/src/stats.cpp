#include "qrec/stats.hpp"

#include <cmath>

#include "qrec/errors.hpp"

namespace qrec {

Means means(const ScoreMatrix& m) {
    const std::size_t E = m.video_count();
    const std::size_t S = m.subject_count();
    std::vector<double> mu_e(E, 0.0), mu_s(S, 0.0);
    std::vector<std::size_t> n_e(E, 0), n_s(S, 0);
    for (std::size_t e = 0; e < E; ++e) {
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            const double score = m.score(e, s);
            mu_e[e] += score;
            mu_s[s] += score;
            ++n_e[e];
            ++n_s[s];
        }
    }
    for (std::size_t e = 0; e < E; ++e) mu_e[e] /= static_cast<double>(n_e[e]);
    for (std::size_t s = 0; s < S; ++s) mu_s[s] /= static_cast<double>(n_s[s]);
    return {std::move(mu_e), std::move(mu_s)};
}

std::vector<double> video_means(const ScoreMatrix& m) { return means(m).video; }
std::vector<double> subject_means(const ScoreMatrix& m) { return means(m).subject; }

std::vector<double> central_moment(const ScoreMatrix& m, int order, Axis axis) {
    if (order < 1) throw InvariantViolation("central moment order must be >= 1");
    const std::size_t E = m.video_count();
    const std::size_t S = m.subject_count();
    const Means mu = means(m);
    const std::size_t n = axis == Axis::Video ? E : S;
    std::vector<double> moment(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t e = 0; e < E; ++e) {
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            const std::size_t i = axis == Axis::Video ? e : s;
            const double center = axis == Axis::Video ? mu.video[e] : mu.subject[s];
            moment[i] += std::pow(m.score(e, s) - center, order);
            ++count[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) moment[i] /= static_cast<double>(count[i]);
    return moment;
}

std::vector<double> video_stddev(const ScoreMatrix& m) {
    std::vector<double> sd = central_moment(m, 2, Axis::Video);
    for (double& value : sd) value = std::sqrt(value);
    return sd;
}

std::vector<double> subject_stddev(const ScoreMatrix& m) {
    std::vector<double> sd = central_moment(m, 2, Axis::Subject);
    for (double& value : sd) value = std::sqrt(value);
    return sd;
}

std::vector<double> content_stddev(const ScoreMatrix& m,
                                   const std::vector<double>& subject_means) {
    if (subject_means.size() != m.subject_count()) {
        throw LengthMismatch("subject means do not match the matrix");
    }
    const std::size_t C = m.content_count();
    std::vector<double> sum_sq(C, 0.0);
    std::vector<std::size_t> count(C, 0);
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        const std::size_t c = m.content_of(e);
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            if (!m.present(e, s)) continue;
            const double dev = m.score(e, s) - subject_means[s];
            sum_sq[c] += dev * dev;
            ++count[c];
        }
    }
    std::vector<double> sigma(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        sigma[c] = std::sqrt(sum_sq[c] / static_cast<double>(count[c]));
    }
    return sigma;
}

Moments compute_moments(const ScoreMatrix& m) {
    Moments out;
    Means mu = means(m);
    out.m2_e = central_moment(m, 2, Axis::Video);
    out.m2_s = central_moment(m, 2, Axis::Subject);
    out.sigma_e.resize(out.m2_e.size());
    out.sigma_s.resize(out.m2_s.size());
    for (std::size_t e = 0; e < out.m2_e.size(); ++e) out.sigma_e[e] = std::sqrt(out.m2_e[e]);
    for (std::size_t s = 0; s < out.m2_s.size(); ++s) out.sigma_s[s] = std::sqrt(out.m2_s[s]);
    out.sigma_c = content_stddev(m, mu.subject);
    out.mu_e = std::move(mu.video);
    out.mu_s = std::move(mu.subject);
    return out;
}

}  // namespace qrec
