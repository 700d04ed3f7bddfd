#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qrec/stats.hpp"

using namespace qrec;

TEST_CASE("means on a constant matrix") {
    const ScoreMatrix m = testutil::full_matrix(4, 5, std::vector<double>(20, 3.0));
    const Means mu = means(m);
    for (const double value : mu.video) CHECK(value == 3.0);
    for (const double value : mu.subject) CHECK(value == 3.0);
}

TEST_CASE("means by hand") {
    const ScoreMatrix m = testutil::full_matrix(2, 2, {1, 2, 3, 5});
    const Means mu = means(m);
    CHECK(mu.video == std::vector<double>{1.5, 4.0});
    CHECK(mu.subject == std::vector<double>{2.0, 3.5});
}

TEST_CASE("means exclude missing entries") {
    const ScoreMatrix m(2, 2, {1, 0, 3, 5}, {1, 0, 1, 1}, {0, 0}, 1);
    const Means mu = means(m);
    CHECK(mu.video == std::vector<double>{1.0, 4.0});
    CHECK(mu.subject == std::vector<double>{2.0, 5.0});
}

TEST_CASE("first central moment vanishes") {
    const auto [m, p] = testutil::random_instance(7, 6, 5, 2, 0.2);
    for (const double value : central_moment(m, 1, Axis::Video)) {
        CHECK(std::abs(value) < 1e-12);
    }
    for (const double value : central_moment(m, 1, Axis::Subject)) {
        CHECK(std::abs(value) < 1e-12);
    }
}

TEST_CASE("population second and fourth moments by hand") {
    const ScoreMatrix row3 = testutil::full_matrix(1, 3, {1, 2, 3});
    CHECK(central_moment(row3, 2, Axis::Video)[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    const ScoreMatrix row4 = testutil::full_matrix(1, 4, {1, 1, 5, 5});
    CHECK(central_moment(row4, 4, Axis::Video)[0] == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("content stddev: zero residuals") {
    // every score equals its subject mean
    const ScoreMatrix m = testutil::full_matrix(2, 2, {1, 2, 1, 2});
    const std::vector<double> sigma = content_stddev(m, subject_means(m));
    CHECK(sigma == std::vector<double>{0.0});
}

TEST_CASE("content stddev by hand") {
    const ScoreMatrix m = testutil::full_matrix(2, 2, {1, 2, 3, 4});
    const std::vector<double> mu_s = subject_means(m);
    CHECK(mu_s == std::vector<double>{2.0, 3.0});
    CHECK(content_stddev(m, mu_s)[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("content stddev matches a brute-force summation") {
    const auto [m, p] = testutil::random_instance(11, 10, 8, 3, 0.15);
    const std::vector<double> mu_s = subject_means(m);
    const std::vector<double> sigma = content_stddev(m, mu_s);

    for (std::size_t c = 0; c < m.content_count(); ++c) {
        double sum = 0.0;
        double count = 0.0;
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            for (std::size_t e = 0; e < m.video_count(); ++e) {
                if (m.content_of(e) != c || !m.present(e, s)) continue;
                sum += (m.score(e, s) - mu_s[s]) * (m.score(e, s) - mu_s[s]);
                count += 1.0;
            }
        }
        CHECK(std::abs(sigma[c] - std::sqrt(sum / count)) < 1e-12);
    }
}

TEST_CASE("masking and unmasking restores bit-identical statistics") {
    const auto [m, p] = testutil::random_instance(13, 8, 6, 2);
    const Means before = means(m);
    const auto m2_before = central_moment(m, 2, Axis::Subject);

    std::vector<std::uint8_t> masked = m.mask();
    masked[3] = 0;
    masked[10] = 0;
    const ScoreMatrix hidden = m.with_mask(std::move(masked));
    const ScoreMatrix restored = hidden.with_mask(m.mask());

    CHECK(means(restored).video == before.video);
    CHECK(means(restored).subject == before.subject);
    CHECK(central_moment(restored, 2, Axis::Subject) == m2_before);
}

TEST_CASE("compute_moments is consistent with the individual statistics") {
    const auto [m, p] = testutil::random_instance(17, 7, 5, 3, 0.1);
    const Moments moments = compute_moments(m);
    CHECK(moments.mu_e == video_means(m));
    CHECK(moments.mu_s == subject_means(m));
    CHECK(moments.sigma_e == video_stddev(m));
    CHECK(moments.sigma_s == subject_stddev(m));
    CHECK(moments.sigma_c == content_stddev(m, moments.mu_s));
}
