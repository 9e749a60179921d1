#pragma once

#include "landau/core.hpp"

namespace landau {

CMat hermitian_part(const CMat& m);

// max |M − M†| relative to max |M|.
double hermitian_defect(const CMat& m);

// Ascending eigenvalues of the Hermitian part.
Vec hermitian_eigenvalues(const CMat& m);

// M^t for Hermitian M by eigendecomposition. The Hermitian defect must not
// exceed max_defect; non-integer t needs a positive spectrum.
CMat hermitian_power(const CMat& m, double t, double max_defect = 1e-6);

double spectral_norm(const CMat& m);
double sigma_min(const CMat& m);

// Largest λ with A u = λ B u, A Hermitian, B Hermitian positive definite.
double generalized_lambda_max(const CMat& A, const CMat& B);

CMat expm(const CMat& m);

}  // namespace landau
