#pragma once

#include <vector>

namespace qrec {

class ScoreMatrix;

/// The unknowns of the generative model: per-video quality x (score
/// units), per-subject bias b and inconsistency v (standard deviation,
/// >= 0), per-content ambiguity a (standard deviation, >= 0).
struct ModelParams {
    std::vector<double> x;
    std::vector<double> b;
    std::vector<double> v;
    std::vector<double> a;

    /// Throws InvariantViolation unless shapes match the matrix and all
    /// entries are finite with v, a >= 0.
    void validate(const ScoreMatrix& m) const;
};

}  // namespace qrec
