#include "mixent/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixent {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

std::vector<double> pam_levels(int size) {
  // odd integer grid -(size-1), ..., -1, +1, ..., +(size-1)
  std::vector<double> levels(size);
  for (int i = 0; i < size; ++i) levels[i] = static_cast<double>(2 * i - size + 1);
  return levels;
}

void normalize_energy(std::vector<std::complex<double>>& points) {
  double power = 0.0;
  for (const auto& p : points) power += std::norm(p);
  power /= static_cast<double>(points.size());
  const double scale = 1.0 / std::sqrt(power);
  for (auto& p : points) p *= scale;
}

}  // namespace

Constellation make_constellation(ConstellationKind kind, int size) {
  if (size < 2) throw std::invalid_argument("constellation size must be >= 2");
  std::vector<std::complex<double>> points;

  switch (kind) {
    case ConstellationKind::Binary: {
      if (size != 2) throw std::invalid_argument("binary constellation requires size 2");
      points = {{-1.0, 0.0}, {1.0, 0.0}};
      break;
    }
    case ConstellationKind::Pam: {
      if (!is_power_of_two(size))
        throw std::invalid_argument("PAM size must be a power of two");
      for (double level : pam_levels(size)) points.emplace_back(level, 0.0);
      normalize_energy(points);
      break;
    }
    case ConstellationKind::Qam: {
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size))));
      if (side * side != size || !is_power_of_two(side))
        throw std::invalid_argument("QAM size must be 4^k (square power-of-two grid)");
      const auto levels = pam_levels(side);
      for (double re : levels)
        for (double im : levels) points.emplace_back(re, im);
      normalize_energy(points);
      break;
    }
  }

  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return Constellation{kind, size, std::move(points)};
}

const char* to_string(ConstellationKind kind) {
  switch (kind) {
    case ConstellationKind::Binary: return "binary";
    case ConstellationKind::Pam: return "pam";
    case ConstellationKind::Qam: return "qam";
  }
  return "?";
}

ConstellationKind constellation_kind_from_string(const std::string& name) {
  if (name == "binary") return ConstellationKind::Binary;
  if (name == "pam") return ConstellationKind::Pam;
  if (name == "qam") return ConstellationKind::Qam;
  throw std::invalid_argument("unknown constellation kind: " + name);
}

}  // namespace mixent
