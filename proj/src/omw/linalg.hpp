#pragma once

#include <optional>
#include <vector>

#include "omw/exactq.hpp"

namespace omw {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;  // row-major

// Rank over the rationals.
int q_rank(QMat a);

// One solution of A x = b (free variables set to 0), or nullopt when the
// system is inconsistent.
std::optional<QVec> q_solve(QMat a, QVec b);

// Basis of the right null space of A.
std::vector<QVec> q_kernel(QMat a);

// Determinant of a square matrix.
mpq_class q_det(QMat a);

}  // namespace omw
