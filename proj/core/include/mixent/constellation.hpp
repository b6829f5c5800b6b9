#pragma once

#include <complex>
#include <string>
#include <vector>

namespace mixent {

enum class ConstellationKind { Binary, Pam, Qam };

/// Finite complex symbol set with unit average energy and a uniform prior.
/// Points are ordered lexicographically by (real, imag) so symbol indices are
/// stable across platforms.
struct Constellation {
  ConstellationKind kind;
  int size;  // number of points M_c
  std::vector<std::complex<double>> points;
};

/// Builds a unit-average-energy constellation.
/// binary: size == 2 ({-1, +1}); PAM: size a power of two; QAM: size = 4^k
/// (square grid). Throws std::invalid_argument on unsupported combinations.
Constellation make_constellation(ConstellationKind kind, int size);

const char* to_string(ConstellationKind kind);
ConstellationKind constellation_kind_from_string(const std::string& name);

}  // namespace mixent
