#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qrec/errors.hpp"
#include "qrec/likelihood.hpp"

using namespace qrec;

namespace {

const double kTwoPi = 2.0 * 3.14159265358979323846;

ModelParams single_obs_params(double x, double b, double v, double a) {
    return ModelParams{{x}, {b}, {v}, {a}};
}

}  // namespace

TEST_CASE("single observation with zero residual") {
    const ScoreMatrix m = testutil::full_matrix(1, 1, {3.5});
    CHECK(log_likelihood(m, single_obs_params(3.0, 0.5, 1.0, 0.0)) == 0.0);
}

TEST_CASE("single observation with residual 0.5") {
    const ScoreMatrix m = testutil::full_matrix(1, 1, {4.0});
    CHECK(log_likelihood(m, single_obs_params(3.0, 0.5, 1.0, 0.0)) ==
          doctest::Approx(-0.125).epsilon(1e-15));
}

TEST_CASE("equals the Gaussian log-pdf sum up to the dropped constant") {
    const auto [m, p] = testutil::random_instance(3, 10, 8, 3, 0.2);
    double pdf_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t e = 0; e < m.video_count(); ++e) {
        for (std::size_t s = 0; s < m.subject_count(); ++s) {
            if (!m.present(e, s)) continue;
            const double variance =
                p.v[s] * p.v[s] + p.a[m.content_of(e)] * p.a[m.content_of(e)];
            const double residual = m.score(e, s) - p.x[e] - p.b[s];
            pdf_sum += -0.5 * std::log(kTwoPi * variance) -
                       residual * residual / (2.0 * variance);
            ++count;
        }
    }
    const double expected = pdf_sum + static_cast<double>(count) * 0.5 * std::log(kTwoPi);
    CHECK(std::abs(log_likelihood(m, p) - expected) < 1e-10);
}

TEST_CASE("degenerate variance is an error, not an infinity") {
    const ScoreMatrix m = testutil::full_matrix(1, 1, {3.0});
    const ModelParams p = single_obs_params(3.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS(log_likelihood(m, p), DegenerateVariance);
    CHECK_THROWS_AS(gradient(m, p), DegenerateVariance);
    CHECK_THROWS_AS(curvature(m, p), DegenerateVariance);
}

TEST_CASE("gauge flatness: x + delta, b - delta leaves the likelihood unchanged") {
    // Quarter-multiples make every shifted sum exact in binary, so the
    // equality here is bit-level.
    const ScoreMatrix m = testutil::full_matrix(2, 2, {1.25, 2.5, 3.75, 5.0});
    const ModelParams p{{2.0, 3.25}, {-0.5, 0.75}, {0.5, 1.0}, {0.25}};
    ModelParams shifted = p;
    for (double& value : shifted.x) value += 0.5;
    for (double& value : shifted.b) value -= 0.5;
    CHECK(log_likelihood(m, shifted) == log_likelihood(m, p));

    const auto [rm, rp] = testutil::random_instance(19, 9, 7, 2, 0.1);
    ModelParams rshift = rp;
    for (double& value : rshift.x) value += 0.3183098861;
    for (double& value : rshift.b) value -= 0.3183098861;
    CHECK(std::abs(log_likelihood(rm, rshift) - log_likelihood(rm, rp)) <
          1e-10 * std::max(1.0, std::abs(log_likelihood(rm, rp))));
}

TEST_CASE("gradient of a unit-variance single observation") {
    const ScoreMatrix m = testutil::full_matrix(1, 1, {4.0});
    const FamilyVectors g = gradient(m, single_obs_params(3.0, 0.0, 1.0, 0.0));
    CHECK(g.x[0] == 1.0);
    CHECK(g.b[0] == 1.0);
}

TEST_CASE("gradient matches central finite differences") {
    for (const std::uint64_t seed : {101u, 102u, 103u}) {
        const auto [m, p] = testutil::random_instance(seed, 10, 8, 3, seed == 103u ? 0.2 : 0.0);
        const FamilyVectors analytic = gradient(m, p);
        const FamilyVectors numeric = testutil::fd_gradient(m, p);
        CHECK(testutil::max_rel_err(analytic, numeric) < 1e-6);
    }
}

TEST_CASE("curvature closed forms under homogeneous variances") {
    const std::size_t E = 6, S = 5;
    const auto [m, p0] = testutil::random_instance(23, E, S, 1);
    const double v = 0.8, a = 0.3;
    ModelParams p = p0;
    p.v.assign(S, v);
    p.a.assign(1, a);
    const FamilyVectors h = curvature(m, p);
    for (std::size_t e = 0; e < E; ++e) {
        CHECK(h.x[e] == doctest::Approx(-static_cast<double>(S) / (v * v + a * a)).epsilon(1e-12));
    }
    for (std::size_t s = 0; s < S; ++s) {
        CHECK(h.b[s] == doctest::Approx(-static_cast<double>(E) / (v * v + a * a)).epsilon(1e-12));
    }

    // with a == 0 the x curvature is exactly -S/v^2
    ModelParams pv = p;
    pv.a.assign(1, 0.0);
    const FamilyVectors hv = curvature(m, pv);
    for (std::size_t e = 0; e < E; ++e) {
        CHECK(hv.x[e] == doctest::Approx(-static_cast<double>(S) / (v * v)).epsilon(1e-12));
    }
}

TEST_CASE("curvature matches finite differences of the analytic gradient") {
    for (const std::uint64_t seed : {31u, 32u}) {
        const auto [m, p] = testutil::random_instance(seed, 10, 8, 3, seed == 32u ? 0.15 : 0.0);
        const FamilyVectors analytic = curvature(m, p);
        const FamilyVectors numeric = testutil::fd_curvature(m, p);
        CHECK(testutil::max_rel_err(analytic, numeric) < 1e-5);
    }
}

TEST_CASE("translation equivariance of the gradient") {
    const ScoreMatrix m = testutil::full_matrix(2, 2, {1.25, 2.5, 3.75, 5.0});
    const ModelParams p{{2.0, 3.25}, {-0.5, 0.75}, {0.5, 1.0}, {0.25}};

    std::vector<double> shifted_scores = m.scores();
    for (double& value : shifted_scores) value += 2.0;
    const ScoreMatrix shifted_m = m.with_scores(std::move(shifted_scores));
    ModelParams shifted_p = p;
    for (double& value : shifted_p.x) value += 2.0;

    const FamilyVectors g = gradient(m, p);
    const FamilyVectors gs = gradient(shifted_m, shifted_p);
    CHECK(gs.x == g.x);
    CHECK(gs.b == g.b);
    CHECK(gs.v == g.v);
    CHECK(gs.a == g.a);
}
