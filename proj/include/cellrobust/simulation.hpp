#pragma once

#include <cstdint>
#include <string>

#include "cellrobust/data.hpp"
#include "cellrobust/matrix.hpp"

namespace cellrobust {

enum class SchemeKind { Banded, Sparse, Dense, Diagonal };

std::string scheme_name(SchemeKind kind);
SchemeKind scheme_from_name(const std::string& name);

struct PrecisionScheme {
  SchemeKind kind = SchemeKind::Diagonal;
  std::size_t p = 1;
  std::uint64_t seed = 0;  // Sparse only
};

// Ground-truth precision matrices:
//   Banded   omega_ij = 0.6^|i-j|
//   Sparse   symmetric 0/0.5 draws (P = 0.1) plus a diagonal shift tuned by
//            bisection until the condition number equals p, then rescaled to
//            unit diagonal
//   Dense    1 on the diagonal, 0.5 off
//   Diagonal identity
// The result is verified positive definite by Cholesky.
SymMatrix make_precision(const PrecisionScheme& scheme);

// Rows i.i.d. N(0, omega^{-1}) via the Cholesky factor of the covariance.
DataMatrix sample_mvn(const SymMatrix& omega, std::size_t n, std::uint64_t seed);

// Applies cellwise / rowwise / missing contamination in place of clean cells;
// the returned matrix's mask records every replacement. Mechanisms None
// through Missing only; the heavy-tail mechanisms replace sampling instead.
DataMatrix contaminate(const DataMatrix& clean, const ContaminationSpec& spec,
                       std::uint64_t seed);

// Multivariate t (one chi-square style divisor per row) or alternative t
// (independent divisors per coordinate), both via gamma(dof/2, dof/2) draws.
DataMatrix sample_heavy_tail(const SymMatrix& omega, std::size_t n, Mechanism kind,
                             double dof, std::uint64_t seed);

}  // namespace cellrobust
