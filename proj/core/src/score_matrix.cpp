#include "qrec/score_matrix.hpp"

#include <cmath>
#include <utility>

#include "qrec/errors.hpp"

namespace qrec {

namespace {

std::string index_name(const std::vector<std::string>& labels, std::size_t i) {
    if (i < labels.size() && !labels[i].empty()) return labels[i];
    return "#" + std::to_string(i + 1);
}

}  // namespace

ScoreMatrix::ScoreMatrix(std::size_t video_count, std::size_t subject_count,
                         std::vector<double> scores, std::vector<std::uint8_t> present,
                         std::vector<std::size_t> content_of, std::size_t content_count,
                         Labels labels)
    : videos_(video_count),
      subjects_(subject_count),
      contents_(content_count),
      scores_(std::move(scores)),
      present_(std::move(present)),
      content_of_(std::move(content_of)),
      labels_(std::move(labels)) {
    if (videos_ == 0 || subjects_ == 0 || contents_ == 0) {
        throw InvariantViolation("matrix needs at least one video, subject and content");
    }
    if (scores_.size() != videos_ * subjects_ || present_.size() != videos_ * subjects_) {
        throw InvariantViolation("score/mask storage does not match matrix shape");
    }
    if (content_of_.size() != videos_) {
        throw InvariantViolation("content map must assign every video to a content");
    }

    std::vector<std::size_t> per_content(contents_, 0);
    for (std::size_t e = 0; e < videos_; ++e) {
        if (content_of_[e] >= contents_) {
            throw InvariantViolation("video " + video_name(e) + " maps to content index " +
                                     std::to_string(content_of_[e] + 1) + " out of " +
                                     std::to_string(contents_));
        }
        ++per_content[content_of_[e]];
    }
    for (std::size_t c = 0; c < contents_; ++c) {
        if (per_content[c] == 0) {
            throw InvariantViolation("content " + content_name(c) + " has no videos");
        }
    }

    std::vector<std::size_t> per_subject(subjects_, 0);
    for (std::size_t e = 0; e < videos_; ++e) {
        std::size_t per_video = 0;
        for (std::size_t s = 0; s < subjects_; ++s) {
            const std::size_t i = e * subjects_ + s;
            if (!present_[i]) continue;
            if (!std::isfinite(scores_[i])) {
                throw InvariantViolation("score of video " + video_name(e) + " by subject " +
                                         subject_name(s) + " is not finite");
            }
            ++per_video;
            ++per_subject[s];
        }
        if (per_video == 0) {
            throw InvariantViolation("video " + video_name(e) + " has no present scores");
        }
    }
    for (std::size_t s = 0; s < subjects_; ++s) {
        if (per_subject[s] == 0) {
            throw InvariantViolation("subject " + subject_name(s) + " has no present scores");
        }
    }

    auto check_labels = [](const std::vector<std::string>& names, std::size_t n,
                           const char* what) {
        if (!names.empty() && names.size() != n) {
            throw InvariantViolation(std::string(what) + " labels do not match count");
        }
    };
    check_labels(labels_.videos, videos_, "video");
    check_labels(labels_.subjects, subjects_, "subject");
    check_labels(labels_.contents, contents_, "content");
}

ScoreMatrix ScoreMatrix::full(std::size_t video_count, std::size_t subject_count,
                              std::vector<double> scores,
                              std::vector<std::size_t> content_of,
                              std::size_t content_count, Labels labels) {
    std::vector<std::uint8_t> present(video_count * subject_count, 1);
    return ScoreMatrix(video_count, subject_count, std::move(scores), std::move(present),
                       std::move(content_of), content_count, std::move(labels));
}

std::size_t ScoreMatrix::present_in_video(std::size_t e) const {
    std::size_t n = 0;
    for (std::size_t s = 0; s < subjects_; ++s) n += present_[e * subjects_ + s] ? 1 : 0;
    return n;
}

std::size_t ScoreMatrix::present_in_subject(std::size_t s) const {
    std::size_t n = 0;
    for (std::size_t e = 0; e < videos_; ++e) n += present_[e * subjects_ + s] ? 1 : 0;
    return n;
}

std::size_t ScoreMatrix::present_total() const {
    std::size_t n = 0;
    for (const auto flag : present_) n += flag ? 1 : 0;
    return n;
}

ScoreMatrix ScoreMatrix::with_scores(std::vector<double> scores) const {
    return ScoreMatrix(videos_, subjects_, std::move(scores), present_, content_of_, contents_,
                       labels_);
}

ScoreMatrix ScoreMatrix::with_mask(std::vector<std::uint8_t> present) const {
    return ScoreMatrix(videos_, subjects_, scores_, std::move(present), content_of_, contents_,
                       labels_);
}

ScoreMatrix ScoreMatrix::select_subjects(const std::vector<std::size_t>& keep) const {
    for (const auto s : keep) {
        if (s >= subjects_) {
            throw InvariantViolation("subject index " + std::to_string(s + 1) + " out of range");
        }
    }
    const std::size_t kept = keep.size();
    std::vector<double> scores(videos_ * kept);
    std::vector<std::uint8_t> present(videos_ * kept);
    for (std::size_t e = 0; e < videos_; ++e) {
        for (std::size_t j = 0; j < kept; ++j) {
            scores[e * kept + j] = scores_[e * subjects_ + keep[j]];
            present[e * kept + j] = present_[e * subjects_ + keep[j]];
        }
    }
    Labels labels = labels_;
    if (!labels.subjects.empty()) {
        std::vector<std::string> sub(kept);
        for (std::size_t j = 0; j < kept; ++j) sub[j] = labels.subjects[keep[j]];
        labels.subjects = std::move(sub);
    }
    return ScoreMatrix(videos_, kept, std::move(scores), std::move(present), content_of_,
                       contents_, std::move(labels));
}

std::string ScoreMatrix::video_name(std::size_t e) const { return index_name(labels_.videos, e); }
std::string ScoreMatrix::subject_name(std::size_t s) const {
    return index_name(labels_.subjects, s);
}
std::string ScoreMatrix::content_name(std::size_t c) const {
    return index_name(labels_.contents, c);
}

}  // namespace qrec
