#include "qrec/likelihood.hpp"

#include <cmath>

#include "qrec/errors.hpp"

namespace qrec {

namespace {

void require_shapes(const ScoreMatrix& m, const ModelParams& p) {
    if (p.x.size() != m.video_count() || p.b.size() != m.subject_count() ||
        p.v.size() != m.subject_count() || p.a.size() != m.content_count()) {
        throw InvariantViolation("model parameter shapes do not match the score matrix");
    }
}

double observation_variance(const ModelParams& p, std::size_t s, std::size_t c) {
    const double variance = p.v[s] * p.v[s] + p.a[c] * p.a[c];
    if (variance == 0.0) {
        throw DegenerateVariance("v_s^2 + a_c^2 is zero for subject " + std::to_string(s + 1) +
                                 ", content " + std::to_string(c + 1));
    }
    return variance;
}

}  // namespace

double log_likelihood(const ScoreMatrix& m, const ModelParams& p) {
    require_shapes(m, p);
    double total = 0.0;
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        const std::size_t c = m.content_of(e);
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            if (!m.present(e, s)) continue;
            const double variance = observation_variance(p, s, c);
            const double residual = m.score(e, s) - p.x[e] - p.b[s];
            total += -0.5 * std::log(variance) - 0.5 * residual * residual / variance;
        }
    }
    return total;
}

FamilyVectors gradient(const ScoreMatrix& m, const ModelParams& p) {
    require_shapes(m, p);
    FamilyVectors g;
    g.x.assign(m.video_count(), 0.0);
    g.b.assign(m.subject_count(), 0.0);
    g.v.assign(m.subject_count(), 0.0);
    g.a.assign(m.content_count(), 0.0);
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        const std::size_t c = m.content_of(e);
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            if (!m.present(e, s)) continue;
            const double w = 1.0 / observation_variance(p, s, c);
            const double residual = m.score(e, s) - p.x[e] - p.b[s];
            const double weighted = residual * w;
            g.x[e] += weighted;
            g.b[s] += weighted;
            // d/dv of -1/2 log(var) - 1/2 r^2/var, var = v^2 + a^2
            const double spread = residual * residual * w - 1.0;
            g.v[s] += p.v[s] * w * spread;
            g.a[c] += p.a[c] * w * spread;
        }
    }
    return g;
}

FamilyVectors curvature(const ScoreMatrix& m, const ModelParams& p) {
    require_shapes(m, p);
    FamilyVectors h;
    h.x.assign(m.video_count(), 0.0);
    h.b.assign(m.subject_count(), 0.0);
    h.v.assign(m.subject_count(), 0.0);
    h.a.assign(m.content_count(), 0.0);
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        const std::size_t c = m.content_of(e);
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            if (!m.present(e, s)) continue;
            const double w = 1.0 / observation_variance(p, s, c);
            const double w2 = w * w;
            const double residual = m.score(e, s) - p.x[e] - p.b[s];
            const double r2 = residual * residual;
            const double v2 = p.v[s] * p.v[s];
            const double a2 = p.a[c] * p.a[c];
            h.x[e] -= w;
            h.b[s] -= w;
            h.v[s] += (v2 - a2) * w2 + r2 * (a2 * a2 - 2.0 * a2 * v2 - 3.0 * v2 * v2) * w2 * w2;
            h.a[c] += (a2 - v2) * w2 + r2 * (v2 * v2 - 2.0 * v2 * a2 - 3.0 * a2 * a2) * w2 * w2;
        }
    }
    return h;
}

}  // namespace qrec
