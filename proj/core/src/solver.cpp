#include "qrec/solver.hpp"

#include <algorithm>
#include <cmath>

#include "qrec/errors.hpp"
#include "qrec/stats.hpp"

namespace qrec {

namespace {

constexpr double kZ95 = 1.96;

double observation_variance(const ModelParams& p, std::size_t s, std::size_t c) {
    const double variance = p.v[s] * p.v[s] + p.a[c] * p.a[c];
    if (variance == 0.0) {
        throw DegenerateVariance("v_s^2 + a_c^2 is zero for subject " + std::to_string(s + 1) +
                                 ", content " + std::to_string(c + 1));
    }
    return variance;
}

/// One damped iteration in the fixed family order b, v, a, x. Each
/// family sees the families updated before it (the pseudocode's
/// overwrite-in-place reading); scalars within a family do not interact.
ModelParams step_impl(const ScoreMatrix& m, ModelParams p, const SolverConfig& cfg,
                      const std::vector<double>& mu_e, std::size_t* fallback_updates) {
    const std::size_t E = m.video_count();
    const std::size_t S = m.subject_count();
    const std::size_t C = m.content_count();
    const double alpha = cfg.alpha;

    // b_s^new = sum_e w (x_es - x_e) / sum_e w
    {
        std::vector<double> num(S, 0.0), den(S, 0.0);
        for (std::size_t e = 0; e < E; ++e) {
            const std::size_t c = m.content_of(e);
            for (std::size_t s = 0; s < S; ++s) {
                if (!m.present(e, s)) continue;
                const double w = 1.0 / observation_variance(p, s, c);
                num[s] += w * (m.score(e, s) - p.x[e]);
                den[s] += w;
            }
        }
        for (std::size_t s = 0; s < S; ++s) {
            p.b[s] = (1.0 - alpha) * p.b[s] + alpha * (num[s] / den[s]);
        }
    }

    // v_s^new = v_s - (-dL/dv) / (-d2L/dv2). Where the curvature is not
    // negative (v above the inflection point of its profile, e.g. right
    // after the deliberately overestimating sigma_s initialization) the
    // Newton quotient points away from the maximum; there the step uses
    // the curvature magnitude instead, which ascends the gradient and
    // hands back to plain Newton once inside the concave basin. A pure
    // skip deadlocks: the curvature stays convex once the other families
    // have converged around the stale value.
    {
        std::vector<double> num(S, 0.0), den(S, 0.0);
        for (std::size_t e = 0; e < E; ++e) {
            const std::size_t c = m.content_of(e);
            for (std::size_t s = 0; s < S; ++s) {
                if (!m.present(e, s)) continue;
                const double w = 1.0 / observation_variance(p, s, c);
                const double w2 = w * w;
                const double residual = m.score(e, s) - p.x[e] - p.b[s];
                const double r2 = residual * residual;
                const double v2 = p.v[s] * p.v[s];
                const double a2 = p.a[c] * p.a[c];
                num[s] += w * p.v[s] - w2 * p.v[s] * r2;
                den[s] += w2 * (a2 - v2) -
                          w2 * w2 * r2 * (a2 * a2 - 2.0 * a2 * v2 - 3.0 * v2 * v2);
            }
        }
        for (std::size_t s = 0; s < S; ++s) {
            if (den[s] <= 0.0 && fallback_updates) ++*fallback_updates;
            if (den[s] == 0.0) continue;
            const double proposed = p.v[s] - num[s] / std::abs(den[s]);
            if (!std::isfinite(proposed)) continue;
            p.v[s] = std::max(cfg.variance_floor, (1.0 - alpha) * p.v[s] + alpha * proposed);
        }
    }

    // a_c^new, same shape as the v step with the roles of v and a swapped.
    {
        std::vector<double> num(C, 0.0), den(C, 0.0);
        for (std::size_t e = 0; e < E; ++e) {
            const std::size_t c = m.content_of(e);
            for (std::size_t s = 0; s < S; ++s) {
                if (!m.present(e, s)) continue;
                const double w = 1.0 / observation_variance(p, s, c);
                const double w2 = w * w;
                const double residual = m.score(e, s) - p.x[e] - p.b[s];
                const double r2 = residual * residual;
                const double v2 = p.v[s] * p.v[s];
                const double a2 = p.a[c] * p.a[c];
                num[c] += w * p.a[c] - w2 * p.a[c] * r2;
                den[c] += w2 * (v2 - a2) -
                          w2 * w2 * r2 * (v2 * v2 - 2.0 * v2 * a2 - 3.0 * a2 * a2);
            }
        }
        for (std::size_t c = 0; c < C; ++c) {
            if (den[c] <= 0.0 && fallback_updates) ++*fallback_updates;
            if (den[c] == 0.0) continue;
            const double proposed = p.a[c] - num[c] / std::abs(den[c]);
            if (!std::isfinite(proposed)) continue;
            p.a[c] = std::max(cfg.variance_floor, (1.0 - alpha) * p.a[c] + alpha * proposed);
        }
    }

    // x_e^new = sum_s w (x_es - b_s) / sum_s w
    {
        std::vector<double> num(E, 0.0), den(E, 0.0);
        for (std::size_t e = 0; e < E; ++e) {
            const std::size_t c = m.content_of(e);
            for (std::size_t s = 0; s < S; ++s) {
                if (!m.present(e, s)) continue;
                const double w = 1.0 / observation_variance(p, s, c);
                num[e] += w * (m.score(e, s) - p.b[s]);
                den[e] += w;
            }
        }
        for (std::size_t e = 0; e < E; ++e) {
            p.x[e] = (1.0 - alpha) * p.x[e] + alpha * (num[e] / den[e]);
        }
    }

    return gauge_fix(std::move(p), cfg.gauge, mu_e);
}

}  // namespace

std::string_view gauge_name(Gauge mode) {
    switch (mode) {
        case Gauge::ZeroMeanBias: return "zero-mean-bias";
        case Gauge::FixFirstVideoToMos: return "fix-first-video";
        case Gauge::None: return "none";
    }
    return "unknown";
}

std::optional<Gauge> parse_gauge(std::string_view name) {
    for (const Gauge mode : {Gauge::ZeroMeanBias, Gauge::FixFirstVideoToMos, Gauge::None}) {
        if (gauge_name(mode) == name) return mode;
    }
    return std::nullopt;
}

void SolverConfig::validate() const {
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        throw InvariantViolation("refresh rate alpha must be in (0, 1]");
    }
    if (!(stop_threshold > 0.0)) {
        throw InvariantViolation("stop threshold must be positive");
    }
    if (max_iterations < 1) {
        throw InvariantViolation("iteration cap must be at least 1");
    }
    if (!(variance_floor > 0.0)) {
        throw InvariantViolation("variance floor must be positive");
    }
}

ModelParams initialize(const ScoreMatrix& m, const SolverConfig& cfg) {
    cfg.validate();
    const Moments moments = compute_moments(m);
    ModelParams p;
    p.x = moments.mu_e;
    p.b.assign(m.subject_count(), 0.0);
    p.v = moments.sigma_s;
    p.a = moments.sigma_c;
    for (double& value : p.v) value = std::max(cfg.variance_floor, value);
    for (double& value : p.a) value = std::max(cfg.variance_floor, value);
    return p;
}

ModelParams newton_step(const ScoreMatrix& m, const ModelParams& p, const SolverConfig& cfg,
                        std::size_t* fallback_updates) {
    cfg.validate();
    p.validate(m);
    const std::vector<double> mu_e =
        cfg.gauge == Gauge::FixFirstVideoToMos ? video_means(m) : std::vector<double>{};
    return step_impl(m, p, cfg, mu_e, fallback_updates);
}

ModelParams gauge_fix(ModelParams p, Gauge mode, const std::vector<double>& video_means) {
    switch (mode) {
        case Gauge::ZeroMeanBias: {
            double shift = 0.0;
            for (const double bias : p.b) shift += bias;
            shift /= static_cast<double>(p.b.size());
            for (double& bias : p.b) bias -= shift;
            for (double& quality : p.x) quality += shift;
            break;
        }
        case Gauge::FixFirstVideoToMos: {
            if (video_means.empty()) {
                throw InvariantViolation("FixFirstVideoToMos gauge needs the video means");
            }
            const double shift = video_means.front() - p.x.front();
            for (double& quality : p.x) quality += shift;
            for (double& bias : p.b) bias -= shift;
            break;
        }
        case Gauge::None:
            break;
    }
    return p;
}

FamilyVectors confidence_intervals(const ScoreMatrix& m, const ModelParams& p) {
    const FamilyVectors h = curvature(m, p);
    FamilyVectors ci;
    auto halfwidths = [](const std::vector<double>& second) {
        std::vector<double> out(second.size());
        for (std::size_t i = 0; i < second.size(); ++i) {
            const double information = -second[i];
            out[i] = information > 0.0 ? kZ95 / std::sqrt(information)
                                       : std::numeric_limits<double>::infinity();
        }
        return out;
    };
    ci.x = halfwidths(h.x);
    ci.b = halfwidths(h.b);
    ci.v = halfwidths(h.v);
    ci.a = halfwidths(h.a);
    return ci;
}

ParamEstimates solve(const ScoreMatrix& m, const SolverConfig& cfg) {
    cfg.validate();
    const std::vector<double> mu_e = video_means(m);

    ParamEstimates out;
    out.params = initialize(m, cfg);

    std::vector<double> x_prev(m.video_count());
    for (std::size_t iteration = 0; iteration < cfg.max_iterations; ++iteration) {
        x_prev = out.params.x;
        out.params = step_impl(m, std::move(out.params), cfg, mu_e, &out.fallback_updates);
        ++out.iterations_used;

        double delta_sq = 0.0;
        for (std::size_t e = 0; e < m.video_count(); ++e) {
            const double d = out.params.x[e] - x_prev[e];
            delta_sq += d * d;
        }
        out.final_delta_x = std::sqrt(delta_sq);
        if (out.final_delta_x < cfg.stop_threshold) {
            out.converged = true;
            break;
        }
    }

    out.ci_halfwidth = confidence_intervals(m, out.params);
    return out;
}

}  // namespace qrec
