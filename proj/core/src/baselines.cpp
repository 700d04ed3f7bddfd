#include "qrec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrec/errors.hpp"
#include "qrec/stats.hpp"

namespace qrec {

namespace {

MosResult mos_after_dropping(const ScoreMatrix& m, const RejectionResult& rejection) {
    std::vector<std::size_t> keep;
    keep.reserve(m.subject_count() - rejection.rejected.size());
    for (std::size_t s = 0; s < m.subject_count(); ++s) {
        if (!rejection.is_rejected(s)) keep.push_back(s);
    }
    if (keep.size() == m.subject_count()) return mos(m);

    if (keep.empty()) {
        throw EmptyAfterRejection("every subject was rejected");
    }
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        bool covered = false;
        for (const std::size_t s : keep) {
            if (m.present(e, s)) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            throw EmptyAfterRejection("video " + m.video_name(e) +
                                      " has no scores left after subject rejection");
        }
    }
    return mos(m.select_subjects(keep));
}

}  // namespace

MosResult mos(const ScoreMatrix& m) {
    const std::size_t E = m.video_count();
    const std::size_t S = m.subject_count();
    MosResult out;
    out.scores.assign(E, 0.0);
    out.ci_halfwidth.assign(E, 0.0);
    for (std::size_t e = 0; e < E; ++e) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            sum += m.score(e, s);
            ++n;
        }
        const double mean = sum / static_cast<double>(n);
        out.scores[e] = mean;
        if (n < 2) {
            out.ci_halfwidth[e] = std::numeric_limits<double>::infinity();
            continue;
        }
        double sum_sq = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            const double dev = m.score(e, s) - mean;
            sum_sq += dev * dev;
        }
        const double sample_sd = std::sqrt(sum_sq / static_cast<double>(n - 1));
        out.ci_halfwidth[e] = 1.96 * sample_sd / std::sqrt(static_cast<double>(n));
    }
    return out;
}

ScoreMatrix zscore(const ScoreMatrix& m) {
    const std::vector<double> mu_s = subject_means(m);
    const std::vector<double> sigma_s = subject_stddev(m);
    for (std::size_t s = 0; s < m.subject_count(); ++s) {
        if (sigma_s[s] == 0.0) throw ZeroVariance(s, m.subject_name(s));
    }
    std::vector<double> scores = m.scores();
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            if (!m.present(e, s)) continue;
            scores[e * m.subject_count() + s] =
                (m.score(e, s) - mu_s[s]) / sigma_s[s];
        }
    }
    return m.with_scores(std::move(scores));
}

bool RejectionResult::is_rejected(std::size_t s) const {
    return std::binary_search(rejected.begin(), rejected.end(), s);
}

double rejection_epsilon(double kurtosis) {
    return (kurtosis >= 2.0 && kurtosis <= 4.0) ? 2.0 : std::sqrt(20.0);
}

RejectionResult subject_rejection(const ScoreMatrix& m) {
    const std::size_t E = m.video_count();
    const std::size_t S = m.subject_count();
    const std::vector<double> mu_e = video_means(m);
    const std::vector<double> m2_e = central_moment(m, 2, Axis::Video);
    const std::vector<double> m4_e = central_moment(m, 4, Axis::Video);

    RejectionResult out;
    out.p.assign(S, 0);
    out.q.assign(S, 0);
    for (std::size_t e = 0; e < E; ++e) {
        // A flat row makes the thresholds degenerate; it carries no
        // outlier information either way.
        if (m2_e[e] == 0.0) continue;
        const double kurtosis = m4_e[e] / (m2_e[e] * m2_e[e]);
        const double epsilon = rejection_epsilon(kurtosis);
        const double sigma = std::sqrt(m2_e[e]);
        const double high = mu_e[e] + epsilon * sigma;
        const double low = mu_e[e] - epsilon * sigma;
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            const double score = m.score(e, s);
            if (score >= high) ++out.p[s];
            if (score <= low) ++out.q[s];
        }
    }

    for (std::size_t s = 0; s < S; ++s) {
        const double total = static_cast<double>(out.p[s] + out.q[s]);
        const double rated = static_cast<double>(m.present_in_subject(s));
        if (total / rated < 0.05) continue;  // also rules out the 0/0 ratio below
        if (std::abs(static_cast<double>(out.p[s] - out.q[s])) / total < 0.3) {
            out.rejected.push_back(s);
        }
    }
    return out;
}

MosResult sr_mos(const ScoreMatrix& m) {
    return mos_after_dropping(m, subject_rejection(m));
}

MosResult zs_sr_mos(const ScoreMatrix& m) {
    const ScoreMatrix standardized = zscore(m);
    return mos_after_dropping(standardized, subject_rejection(standardized));
}

}  // namespace qrec
