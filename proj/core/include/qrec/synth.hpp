#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qrec/model_params.hpp"
#include "qrec/score_matrix.hpp"

namespace qrec {

/// Forward sampling setup for the generative model. Every generator and
/// corruptor in this module is a pure function of (input, seed): repeated
/// calls are bit-identical, and distinct seeds give independent streams.
struct GeneratorSpec {
    std::size_t videos = 0;
    std::size_t subjects = 0;
    std::size_t contents = 0;
    ModelParams true_params;
    /// Video -> content map; empty means contiguous near-equal blocks.
    std::vector<std::size_t> content_of;
    std::uint64_t seed = 0;
};

/// Contiguous near-equal content blocks covering all videos.
std::vector<std::size_t> contiguous_content_blocks(std::size_t videos, std::size_t contents);

/// Draw x_es = x_e + (b_s + v_s n1) + a_{c(e)} n2 with fresh standard
/// normals n1, n2 per cell, fully present, unclamped.
ScoreMatrix generate(const GeneratorSpec& spec);

/// Permute each listed subject's present scores uniformly at random
/// across its present positions (mask unchanged, other columns untouched).
ScoreMatrix corrupt_subjects(const ScoreMatrix& m, const std::vector<std::size_t>& subjects,
                             std::uint64_t seed);

/// Pick `count` subjects uniformly at random, then scramble them as
/// corrupt_subjects does, all from one stream.
ScoreMatrix scramble_random_subjects(const ScoreMatrix& m, std::size_t count,
                                     std::uint64_t seed);

/// Replace each present score, independently with probability prob, by a
/// uniform draw from the integer categories {1, 2, 3, 4, 5}.
ScoreMatrix corrupt_random(const ScoreMatrix& m, double prob, std::uint64_t seed);

/// Keep each present entry independently with probability keep_prob.
/// When a draw leaves some video or subject without scores, the draw is
/// repeated with the seed incremented, up to 100 attempts; after that
/// CoverageUnattainable is thrown.
ScoreMatrix subsample(const ScoreMatrix& m, double keep_prob, std::uint64_t seed);

/// Keep a uniformly random subset of n_keep subject columns, preserving
/// their original order.
ScoreMatrix subsample_subjects(const ScoreMatrix& m, std::size_t n_keep, std::uint64_t seed);

}  // namespace qrec
