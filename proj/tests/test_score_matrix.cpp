#include <doctest.h>

#include <limits>

#include "helpers.hpp"
#include "qrec/errors.hpp"
#include "qrec/score_matrix.hpp"

using qrec::InvariantViolation;
using qrec::ScoreMatrix;

TEST_CASE("construction and accessors") {
    const ScoreMatrix m(2, 2, {1.0, 2.0, 3.0, 5.0}, {1, 0, 1, 1}, {0, 0}, 1);
    CHECK(m.video_count() == 2);
    CHECK(m.subject_count() == 2);
    CHECK(m.content_count() == 1);
    CHECK(m.score(1, 1) == 5.0);
    CHECK(m.present(0, 0));
    CHECK_FALSE(m.present(0, 1));
    CHECK(m.present_in_video(0) == 1);
    CHECK(m.present_in_subject(0) == 2);
    CHECK(m.present_in_subject(1) == 1);
    CHECK(m.present_total() == 3);
}

TEST_CASE("construction rejects structural violations") {
    CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3, 4}, {0, 0, 1, 1}, {0, 0}, 1),
                    InvariantViolation);  // empty video row
    CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3, 4}, {1, 0, 1, 0}, {0, 0}, 1),
                    InvariantViolation);  // empty subject column
    CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3, 4}, {1, 1, 1, 1}, {0, 2}, 2),
                    InvariantViolation);  // content index out of range
    CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3, 4}, {1, 1, 1, 1}, {0, 0}, 2),
                    InvariantViolation);  // unused content
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, nan, 3, 4}, {1, 1, 1, 1}, {0, 0}, 1),
                    InvariantViolation);  // non-finite present score
    CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3}, {1, 1, 1, 1}, {0, 0}, 1),
                    InvariantViolation);  // storage shape mismatch
}

TEST_CASE("masked cells may hold any value") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const ScoreMatrix m(2, 2, {1, nan, 3, 4}, {1, 0, 1, 1}, {0, 0}, 1);
    CHECK_FALSE(m.present(0, 1));
}

TEST_CASE("select_subjects keeps order and labels") {
    qrec::Labels labels;
    labels.subjects = {"a", "b", "c"};
    const ScoreMatrix m(2, 3, {1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1}, {0, 1}, 2, labels);
    const ScoreMatrix kept = m.select_subjects({0, 2});
    CHECK(kept.subject_count() == 2);
    CHECK(kept.score(0, 1) == 3);
    CHECK(kept.score(1, 0) == 4);
    CHECK(kept.labels().subjects == std::vector<std::string>{"a", "c"});
    CHECK(kept.content_map() == m.content_map());
}

TEST_CASE("with_scores and with_mask replace one plane only") {
    const ScoreMatrix m = testutil::full_matrix(2, 2, {1, 2, 3, 4});
    const ScoreMatrix rescored = m.with_scores({5, 6, 7, 8});
    CHECK(rescored.score(0, 0) == 5);
    CHECK(rescored.mask() == m.mask());
    const ScoreMatrix remasked = m.with_mask({1, 0, 1, 1});
    CHECK(remasked.scores() == m.scores());
    CHECK_FALSE(remasked.present(0, 1));
}
