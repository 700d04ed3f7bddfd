#include "qrec/model_params.hpp"

#include <cmath>

#include "qrec/errors.hpp"
#include "qrec/score_matrix.hpp"

namespace qrec {

void ModelParams::validate(const ScoreMatrix& m) const {
    if (x.size() != m.video_count() || b.size() != m.subject_count() ||
        v.size() != m.subject_count() || a.size() != m.content_count()) {
        throw InvariantViolation("model parameter shapes do not match the score matrix");
    }
    auto all_finite = [](const std::vector<double>& values) {
        for (const double value : values) {
            if (!std::isfinite(value)) return false;
        }
        return true;
    };
    if (!all_finite(x) || !all_finite(b) || !all_finite(v) || !all_finite(a)) {
        throw InvariantViolation("model parameters must be finite");
    }
    for (const double value : v) {
        if (value < 0.0) throw InvariantViolation("subject inconsistency v must be >= 0");
    }
    for (const double value : a) {
        if (value < 0.0) throw InvariantViolation("content ambiguity a must be >= 0");
    }
}

}  // namespace qrec
