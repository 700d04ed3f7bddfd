#pragma once

#include <vector>

#include "qrec/model_params.hpp"
#include "qrec/score_matrix.hpp"

namespace qrec {

/// One value per scalar model parameter, in the same shape as
/// ModelParams. Used for gradients, diagonal curvatures and confidence
/// half-widths.
struct FamilyVectors {
    std::vector<double> x;
    std::vector<double> b;
    std::vector<double> v;
    std::vector<double> a;
};

/// Log-likelihood of the present scores under
/// X_es ~ N(x_e + b_s, v_s^2 + a_{c(e)}^2), with the constant
/// -1/2 log(2 pi) per observation omitted:
///
///   sum over present (e,s) of
///     -1/2 log(v_s^2 + a_{c(e)}^2) - 1/2 (x_es - x_e - b_s)^2 / (v_s^2 + a_{c(e)}^2)
///
/// Throws DegenerateVariance when v_s^2 + a_{c(e)}^2 == 0 for a present pair.
double log_likelihood(const ScoreMatrix& m, const ModelParams& p);

/// Analytic first-order partials of log_likelihood per parameter family.
FamilyVectors gradient(const ScoreMatrix& m, const ModelParams& p);

/// Analytic diagonal second-order partials. Only the diagonal is ever
/// consumed (per-parameter Newton steps and confidence intervals), so the
/// off-diagonal Hessian is never formed.
FamilyVectors curvature(const ScoreMatrix& m, const ModelParams& p);

}  // namespace qrec
