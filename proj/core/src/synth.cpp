#include "qrec/synth.hpp"

#include <algorithm>
#include <cmath>

#include "qrec/errors.hpp"
#include "qrec/rng.hpp"

namespace qrec {

namespace {

ScoreMatrix scramble_columns(const ScoreMatrix& m, const std::vector<std::size_t>& subjects,
                             SplitMix64& rng) {
    for (const std::size_t s : subjects) {
        if (s >= m.subject_count()) {
            throw InvariantViolation("subject index " + std::to_string(s + 1) + " out of range");
        }
    }
    std::vector<double> scores = m.scores();
    std::vector<std::size_t> sorted = subjects;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const std::size_t s : sorted) {
        std::vector<std::size_t> positions;
        std::vector<double> values;
        for (std::size_t e = 0; e < m.video_count(); ++e) {
            if (!m.present(e, s)) continue;
            positions.push_back(e);
            values.push_back(m.score(e, s));
        }
        rng.shuffle(values);
        for (std::size_t i = 0; i < positions.size(); ++i) {
            scores[positions[i] * m.subject_count() + s] = values[i];
        }
    }
    return m.with_scores(std::move(scores));
}

}  // namespace

std::vector<std::size_t> contiguous_content_blocks(std::size_t videos, std::size_t contents) {
    if (contents == 0 || videos < contents) {
        throw InvariantViolation("need at least one video per content");
    }
    std::vector<std::size_t> map(videos);
    const std::size_t base = videos / contents;
    const std::size_t extra = videos % contents;
    std::size_t e = 0;
    for (std::size_t c = 0; c < contents; ++c) {
        const std::size_t block = base + (c < extra ? 1 : 0);
        for (std::size_t i = 0; i < block; ++i) map[e++] = c;
    }
    return map;
}

ScoreMatrix generate(const GeneratorSpec& spec) {
    const std::size_t E = spec.videos;
    const std::size_t S = spec.subjects;
    const std::size_t C = spec.contents;
    if (E == 0 || S == 0 || C == 0) {
        throw InvariantViolation("generator needs at least one video, subject and content");
    }
    if (spec.true_params.x.size() != E || spec.true_params.b.size() != S ||
        spec.true_params.v.size() != S || spec.true_params.a.size() != C) {
        throw InvariantViolation("true parameter shapes do not match the generator spec");
    }
    const std::vector<std::size_t> content_of =
        spec.content_of.empty() ? contiguous_content_blocks(E, C) : spec.content_of;

    SplitMix64 rng(spec.seed);
    std::vector<double> scores(E * S);
    for (std::size_t e = 0; e < E; ++e) {
        const std::size_t c = content_of[e];
        for (std::size_t s = 0; s < S; ++s) {
            const double subject_part = spec.true_params.b[s] +
                                        spec.true_params.v[s] * rng.next_normal();
            const double content_part = spec.true_params.a[c] * rng.next_normal();
            scores[e * S + s] = spec.true_params.x[e] + subject_part + content_part;
        }
    }
    return ScoreMatrix::full(E, S, std::move(scores), content_of, C);
}

ScoreMatrix corrupt_subjects(const ScoreMatrix& m, const std::vector<std::size_t>& subjects,
                             std::uint64_t seed) {
    SplitMix64 rng(seed);
    return scramble_columns(m, subjects, rng);
}

ScoreMatrix scramble_random_subjects(const ScoreMatrix& m, std::size_t count,
                                     std::uint64_t seed) {
    if (count > m.subject_count()) {
        throw InvariantViolation("cannot scramble more subjects than the matrix has");
    }
    SplitMix64 rng(seed);
    const std::vector<std::size_t> chosen = rng.sample_indices(m.subject_count(), count);
    return scramble_columns(m, chosen, rng);
}

ScoreMatrix corrupt_random(const ScoreMatrix& m, double prob, std::uint64_t seed) {
    if (!(prob >= 0.0) || !(prob <= 1.0)) {
        throw InvariantViolation("replacement probability must be in [0, 1]");
    }
    SplitMix64 rng(seed);
    std::vector<double> scores = m.scores();
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            if (!m.present(e, s)) continue;
            if (rng.next_unit() <= prob) {
                scores[e * m.subject_count() + s] =
                    static_cast<double>(1 + rng.next_below(5));
            }
        }
    }
    return m.with_scores(std::move(scores));
}

ScoreMatrix subsample(const ScoreMatrix& m, double keep_prob, std::uint64_t seed) {
    if (!(keep_prob > 0.0) || !(keep_prob <= 1.0)) {
        throw InvariantViolation("keep probability must be in (0, 1]");
    }
    constexpr int kMaxAttempts = 100;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        SplitMix64 rng(seed + static_cast<std::uint64_t>(attempt));
        std::vector<std::uint8_t> mask = m.mask();
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask[i]) continue;
            if (rng.next_unit() > keep_prob) mask[i] = 0;
        }
        // Coverage check before constructing, to retry instead of throwing.
        std::vector<bool> video_ok(m.video_count(), false), subject_ok(m.subject_count(), false);
        for (std::size_t e = 0; e < m.video_count(); ++e) {
            for (std::size_t s = 0; s < m.subject_count(); ++s) {
                if (mask[e * m.subject_count() + s]) {
                    video_ok[e] = true;
                    subject_ok[s] = true;
                }
            }
        }
        const bool covered =
            std::all_of(video_ok.begin(), video_ok.end(), [](bool ok) { return ok; }) &&
            std::all_of(subject_ok.begin(), subject_ok.end(), [](bool ok) { return ok; });
        if (covered) return m.with_mask(std::move(mask));
    }
    throw CoverageUnattainable("no subsample kept every video and subject covered after " +
                               std::to_string(kMaxAttempts) + " attempts");
}

ScoreMatrix subsample_subjects(const ScoreMatrix& m, std::size_t n_keep, std::uint64_t seed) {
    if (n_keep < 1 || n_keep > m.subject_count()) {
        throw InvariantViolation("subject subset size out of range");
    }
    SplitMix64 rng(seed);
    return m.select_subjects(rng.sample_indices(m.subject_count(), n_keep));
}

}  // namespace qrec
