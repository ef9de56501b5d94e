#pragma once

// Excursion-set functionals of a lattice realization. The excursion set at
// level u is the set of sites with X >= u.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "exset/simulate.hpp"

namespace exset {

struct ExcursionMeasurement {
  double level = 0.0;
  /// h^d * #{sites with X >= u}.
  double volume = 0.0;
  /// Length of the level-u isocontour (H^1 of the boundary); d = 2 only.
  std::optional<double> perimeter;
  /// Strict sign changes of X - u between neighbours; d = 1 only.
  std::optional<std::int64_t> crossings;
  double window_volume = 0.0;
};

/// Levels must be strictly increasing and non-empty.
std::vector<ExcursionMeasurement> excursion_volumes(const FieldRealization& field,
                                                    std::span<const double> levels);

/// Marching-squares contour length with linear edge interpolation. Saddle
/// cells are resolved by the sign of the cell mean. Throws
/// UnsupportedDimension unless d = 2.
double excursion_perimeter(const FieldRealization& field, double u);

/// Throws UnsupportedDimension unless d = 1.
std::int64_t crossing_count(const FieldRealization& field, double u);

/// Volumes plus crossings (d = 1) and, when requested, perimeters (d = 2).
std::vector<ExcursionMeasurement> measure_excursions(const FieldRealization& field,
                                                     std::span<const double> levels,
                                                     bool with_perimeter);

/// Site counts #{X >= u_l} for strictly increasing levels over a sub-range
/// of values; used by block estimators.
void count_exceedances(std::span<const double> values, std::span<const double> levels,
                       std::span<std::uint64_t> counts);

}  // namespace exset
