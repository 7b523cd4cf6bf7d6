#pragma once

// Exact computer algebra for the C*-algebras Q^lambda: arithmetic in the ring
// Gamma_lambda, symbolic crossed-product calculus with KMS-state evaluation,
// Smith-Normal-Form / Pimsner-Voiculescu K-theory, and exact modular spectral
// flow.

#include "qlambda/abelian.hpp"
#include "qlambda/algebra.hpp"
#include "qlambda/error.hpp"
#include "qlambda/expr.hpp"
#include "qlambda/gamma.hpp"
#include "qlambda/int_matrix.hpp"
#include "qlambda/ktheory.hpp"
#include "qlambda/lambda_spec.hpp"
#include "qlambda/matrix_element.hpp"
#include "qlambda/numeric.hpp"
#include "qlambda/polynomial.hpp"
#include "qlambda/step_function.hpp"
#include "qlambda/verify.hpp"
