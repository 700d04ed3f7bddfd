#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qrec {

/// Optional display names for videos, subjects and contents.
/// Each vector is either empty or sized to match the matrix.
struct Labels {
    std::vector<std::string> videos;
    std::vector<std::string> subjects;
    std::vector<std::string> contents;
};

/// An E x S grid of raw opinion scores with a presence mask and a
/// video -> content map. A false mask entry means the subject did not
/// rate the video; every statistic downstream sums over present entries
/// only.
///
/// Construction enforces the invariants the rest of the library relies
/// on: at least one present score per video row and per subject column,
/// finite score values, and a total content map whose every content is
/// used by at least one video. Instances are immutable and safe to share
/// across threads.
class ScoreMatrix {
public:
    ScoreMatrix(std::size_t video_count, std::size_t subject_count,
                std::vector<double> scores, std::vector<std::uint8_t> present,
                std::vector<std::size_t> content_of, std::size_t content_count,
                Labels labels = {});

    /// Fully-present matrix.
    static ScoreMatrix full(std::size_t video_count, std::size_t subject_count,
                            std::vector<double> scores,
                            std::vector<std::size_t> content_of,
                            std::size_t content_count, Labels labels = {});

    std::size_t video_count() const noexcept { return videos_; }
    std::size_t subject_count() const noexcept { return subjects_; }
    std::size_t content_count() const noexcept { return contents_; }

    double score(std::size_t e, std::size_t s) const { return scores_[e * subjects_ + s]; }
    bool present(std::size_t e, std::size_t s) const { return present_[e * subjects_ + s] != 0; }
    std::size_t content_of(std::size_t e) const { return content_of_[e]; }

    /// Row-major E*S backing stores.
    const std::vector<double>& scores() const noexcept { return scores_; }
    const std::vector<std::uint8_t>& mask() const noexcept { return present_; }
    const std::vector<std::size_t>& content_map() const noexcept { return content_of_; }
    const Labels& labels() const noexcept { return labels_; }

    std::size_t present_in_video(std::size_t e) const;
    std::size_t present_in_subject(std::size_t s) const;
    std::size_t present_total() const;

    /// Same shape, mask and labels; new score values.
    ScoreMatrix with_scores(std::vector<double> scores) const;
    /// Same shape, scores and labels; new mask.
    ScoreMatrix with_mask(std::vector<std::uint8_t> present) const;
    /// Keep only the given subject columns, in the given order.
    ScoreMatrix select_subjects(const std::vector<std::size_t>& keep) const;

    /// Display name for diagnostics: the label when present, "#k" (1-based)
    /// otherwise.
    std::string video_name(std::size_t e) const;
    std::string subject_name(std::size_t s) const;
    std::string content_name(std::size_t c) const;

private:
    std::size_t videos_;
    std::size_t subjects_;
    std::size_t contents_;
    std::vector<double> scores_;
    std::vector<std::uint8_t> present_;
    std::vector<std::size_t> content_of_;
    Labels labels_;
};

}  // namespace qrec
