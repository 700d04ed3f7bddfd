#pragma once

// Shared test utilities: deterministic instance builders and the
// independent oracles the expected values are computed with. The
// oracles deliberately do not reuse the library's computation paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include "qrec/errors.hpp"
#include "qrec/likelihood.hpp"
#include "qrec/model_params.hpp"
#include "qrec/rng.hpp"
#include "qrec/score_matrix.hpp"
#include "qrec/synth.hpp"

namespace testutil {

inline qrec::ScoreMatrix full_matrix(std::size_t videos, std::size_t subjects,
                                     std::vector<double> scores, std::size_t contents = 1) {
    return qrec::ScoreMatrix::full(videos, subjects, std::move(scores),
                                   qrec::contiguous_content_blocks(videos, contents), contents);
}

struct RandomInstance {
    qrec::ScoreMatrix m;
    qrec::ModelParams p;
};

/// Random scores in [1, 5], random parameters with v, a in [0.1, 2],
/// optional random mask (coverage enforced by seeded retries).
inline RandomInstance random_instance(std::uint64_t seed, std::size_t videos,
                                      std::size_t subjects, std::size_t contents,
                                      double missing_prob = 0.0) {
    const auto content_of = qrec::contiguous_content_blocks(videos, contents);
    for (std::uint64_t attempt = 0;; ++attempt) {
        qrec::SplitMix64 rng(seed + 1000003 * attempt);
        std::vector<double> scores(videos * subjects);
        std::vector<std::uint8_t> present(videos * subjects);
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] = 1.0 + 4.0 * rng.next_unit();
            present[i] = rng.next_unit() > missing_prob ? 1 : 0;
        }
        qrec::ModelParams p;
        p.x.resize(videos);
        p.b.resize(subjects);
        p.v.resize(subjects);
        p.a.resize(contents);
        for (double& value : p.x) value = 1.0 + 4.0 * rng.next_unit();
        for (double& value : p.b) value = -0.5 + rng.next_unit();
        for (double& value : p.v) value = 0.1 + 1.9 * rng.next_unit();
        for (double& value : p.a) value = 0.1 + 1.9 * rng.next_unit();
        try {
            return RandomInstance{qrec::ScoreMatrix(videos, subjects, std::move(scores),
                                                    std::move(present), content_of, contents),
                                  std::move(p)};
        } catch (const qrec::Error&) {
            // row/column lost all entries; redraw
        }
    }
}

/// |value - reference| / max(1, |reference|).
inline double rel_err(double reference, double value) {
    return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

inline double max_rel_err(const std::vector<double>& reference,
                          const std::vector<double>& value) {
    double worst = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        worst = std::max(worst, rel_err(reference[i], value[i]));
    }
    return worst;
}

inline double max_rel_err(const qrec::FamilyVectors& reference, const qrec::FamilyVectors& value) {
    return std::max(std::max(max_rel_err(reference.x, value.x), max_rel_err(reference.b, value.b)),
                    std::max(max_rel_err(reference.v, value.v), max_rel_err(reference.a, value.a)));
}

/// Central finite differences of log_likelihood, per scalar parameter.
inline qrec::FamilyVectors fd_gradient(const qrec::ScoreMatrix& m, const qrec::ModelParams& p,
                                       double step = 1e-5) {
    auto central = [&](std::vector<double> qrec::ModelParams::* family, std::size_t i) {
        qrec::ModelParams hi = p, lo = p;
        (hi.*family)[i] += step;
        (lo.*family)[i] -= step;
        return (qrec::log_likelihood(m, hi) - qrec::log_likelihood(m, lo)) / (2.0 * step);
    };
    qrec::FamilyVectors g;
    g.x.resize(p.x.size());
    g.b.resize(p.b.size());
    g.v.resize(p.v.size());
    g.a.resize(p.a.size());
    for (std::size_t i = 0; i < p.x.size(); ++i) g.x[i] = central(&qrec::ModelParams::x, i);
    for (std::size_t i = 0; i < p.b.size(); ++i) g.b[i] = central(&qrec::ModelParams::b, i);
    for (std::size_t i = 0; i < p.v.size(); ++i) g.v[i] = central(&qrec::ModelParams::v, i);
    for (std::size_t i = 0; i < p.a.size(); ++i) g.a[i] = central(&qrec::ModelParams::a, i);
    return g;
}

/// Central finite differences of the analytic gradient, per scalar
/// parameter (diagonal second derivatives only).
inline qrec::FamilyVectors fd_curvature(const qrec::ScoreMatrix& m, const qrec::ModelParams& p,
                                        double step = 1e-5) {
    auto central = [&](std::vector<double> qrec::ModelParams::* family,
                       std::vector<double> qrec::FamilyVectors::* slot, std::size_t i) {
        qrec::ModelParams hi = p, lo = p;
        (hi.*family)[i] += step;
        (lo.*family)[i] -= step;
        return ((qrec::gradient(m, hi).*slot)[i] - (qrec::gradient(m, lo).*slot)[i]) /
               (2.0 * step);
    };
    qrec::FamilyVectors h;
    h.x.resize(p.x.size());
    h.b.resize(p.b.size());
    h.v.resize(p.v.size());
    h.a.resize(p.a.size());
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        h.x[i] = central(&qrec::ModelParams::x, &qrec::FamilyVectors::x, i);
    }
    for (std::size_t i = 0; i < p.b.size(); ++i) {
        h.b[i] = central(&qrec::ModelParams::b, &qrec::FamilyVectors::b, i);
    }
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        h.v[i] = central(&qrec::ModelParams::v, &qrec::FamilyVectors::v, i);
    }
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        h.a[i] = central(&qrec::ModelParams::a, &qrec::FamilyVectors::a, i);
    }
    return h;
}

inline double max_abs(const std::vector<double>& values) {
    double worst = 0.0;
    for (const double value : values) worst = std::max(worst, std::abs(value));
    return worst;
}

inline double max_abs(const qrec::FamilyVectors& g) {
    return std::max(std::max(max_abs(g.x), max_abs(g.b)), std::max(max_abs(g.v), max_abs(g.a)));
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (a[i] - mean_a) * (b[i] - mean_b);
        var_a += (a[i] - mean_a) * (a[i] - mean_a);
        var_b += (b[i] - mean_b) * (b[i] - mean_b);
    }
    return cov / std::sqrt(var_a * var_b);
}

struct Bt500Oracle {
    std::vector<std::size_t> rejected;
    std::vector<int> p, q;
};

/// Literal transliteration of the screening pseudocode, written
/// independently of the library path (own moment loops, own counters).
inline Bt500Oracle bt500_transcription(const qrec::ScoreMatrix& m) {
    const std::size_t E = m.video_count();
    const std::size_t S = m.subject_count();
    Bt500Oracle out;
    out.p.assign(S, 0);
    out.q.assign(S, 0);
    for (std::size_t e = 0; e < E; ++e) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            sum += m.score(e, s);
            ++n;
        }
        const double mu = sum / n;
        double m2 = 0.0, m4 = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            const double d = m.score(e, s) - mu;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m4 /= n;
        if (m2 == 0.0) continue;
        const double kurtosis = m4 / (m2 * m2);
        const double epsilon = (kurtosis >= 2.0 && kurtosis <= 4.0) ? 2.0 : std::sqrt(20.0);
        const double sigma = std::sqrt(m2);
        for (std::size_t s = 0; s < S; ++s) {
            if (!m.present(e, s)) continue;
            if (m.score(e, s) >= mu + epsilon * sigma) ++out.p[s];
            if (m.score(e, s) <= mu - epsilon * sigma) ++out.q[s];
        }
    }
    for (std::size_t s = 0; s < S; ++s) {
        int rated = 0;
        for (std::size_t e = 0; e < E; ++e) rated += m.present(e, s) ? 1 : 0;
        const int total = out.p[s] + out.q[s];
        if (static_cast<double>(total) / rated >= 0.05 && total > 0 &&
            std::abs(static_cast<double>(out.p[s] - out.q[s])) / total < 0.3) {
            out.rejected.push_back(s);
        }
    }
    return out;
}

/// Heterogeneous-subject generator spec: x* in [1,5], bias pairs +-d
/// (exactly zero-mean, within [-1,1]), v* in [0.2,1.0], a* in [0.1,0.8].
inline qrec::GeneratorSpec heterogeneous_spec(std::size_t videos, std::size_t subjects,
                                              std::size_t contents, std::uint64_t seed) {
    qrec::SplitMix64 rng(seed);
    qrec::GeneratorSpec spec;
    spec.videos = videos;
    spec.subjects = subjects;
    spec.contents = contents;
    spec.seed = seed + 1;
    spec.true_params.x.resize(videos);
    spec.true_params.b.assign(subjects, 0.0);
    spec.true_params.v.resize(subjects);
    spec.true_params.a.resize(contents);
    for (double& value : spec.true_params.x) value = 1.0 + 4.0 * rng.next_unit();
    for (std::size_t s = 0; s + 1 < subjects; s += 2) {
        const double d = rng.next_unit();
        spec.true_params.b[s] = d;
        spec.true_params.b[s + 1] = -d;
    }
    for (double& value : spec.true_params.v) value = 0.2 + 0.8 * rng.next_unit();
    for (double& value : spec.true_params.a) value = 0.1 + 0.7 * rng.next_unit();
    return spec;
}

}  // namespace testutil
