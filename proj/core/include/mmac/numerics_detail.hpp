#pragma once

// Branch-level entry points of the Bessel evaluation, exposed so the two
// branches can be cross-checked on their overlap.

namespace mmac::numerics::detail {

/// I0(x) - 1 by the power series. Accurate for x <= 50.
double i0_series_minus_one(double x);

/// e^{-x} I0(x) by the large-argument expansion. Accurate for x >= 20.
double i0e_asymptotic(double x);

} // namespace mmac::numerics::detail
