#pragma once

#include <complex>

namespace qgal {

using cplx = std::complex<double>;

inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

} // namespace qgal
