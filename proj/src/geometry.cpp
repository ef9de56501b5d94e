#include "exset/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "exset/error.hpp"

namespace exset {

namespace {

void require_levels(std::span<const double> levels) {
  if (levels.empty()) throw Error("level vector is empty");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] > levels[i - 1])) throw Error("levels must be strictly increasing");
}

struct Point {
  double x, y;
};

double distance(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

}  // namespace

void count_exceedances(std::span<const double> values, std::span<const double> levels,
                       std::span<std::uint64_t> counts) {
  const std::size_t r = levels.size();
  std::vector<std::uint64_t> hist(r + 1, 0);
  for (double v : values) {
    const auto k = static_cast<std::size_t>(std::upper_bound(levels.begin(), levels.end(), v) -
                                            levels.begin());
    ++hist[k];
  }
  // counts[l] = #{v >= levels[l]} = sum_{k > l} hist[k]
  std::uint64_t acc = 0;
  for (std::size_t l = r; l-- > 0;) {
    acc += hist[l + 1];
    counts[l] = acc;
  }
}

std::vector<ExcursionMeasurement> excursion_volumes(const FieldRealization& field,
                                                    std::span<const double> levels) {
  require_levels(levels);
  std::vector<std::uint64_t> counts(levels.size());
  count_exceedances(field.values(), levels, counts);
  const auto& w = field.window();
  const double cell = std::pow(w.spacing, w.dim());
  std::vector<ExcursionMeasurement> out;
  out.reserve(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    ExcursionMeasurement m;
    m.level = levels[l];
    m.volume = cell * static_cast<double>(counts[l]);
    m.window_volume = w.volume();
    out.push_back(m);
  }
  return out;
}

double excursion_perimeter(const FieldRealization& field, double u) {
  const auto& w = field.window();
  if (w.dim() != 2) throw UnsupportedDimension("perimeter requires a 2-dimensional field");
  const std::size_t rows = w.dims[0], cols = w.dims[1];
  const auto& f = field.values();
  double total = 0.0;

  for (std::size_t i = 0; i + 1 < rows; ++i) {
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      // Corners counter-clockwise: a(i,j) b(i,j+1) c(i+1,j+1) d(i+1,j).
      const double v[4] = {f[i * cols + j], f[i * cols + j + 1], f[(i + 1) * cols + j + 1],
                           f[(i + 1) * cols + j]};
      const Point p[4] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
      const bool in[4] = {v[0] >= u, v[1] >= u, v[2] >= u, v[3] >= u};
      if (in[0] == in[1] && in[1] == in[2] && in[2] == in[3]) continue;

      // Edge e joins corner e and corner e+1.
      Point cut[4];
      bool crossed[4];
      for (int e = 0; e < 4; ++e) {
        const int q = (e + 1) % 4;
        crossed[e] = in[e] != in[q];
        if (crossed[e]) {
          const double t = (u - v[e]) / (v[q] - v[e]);
          cut[e] = {p[e].x + t * (p[q].x - p[e].x), p[e].y + t * (p[q].y - p[e].y)};
        }
      }
      const int n_crossed = crossed[0] + crossed[1] + crossed[2] + crossed[3];
      if (n_crossed == 2) {
        int e1 = -1, e2 = -1;
        for (int e = 0; e < 4; ++e) {
          if (!crossed[e]) continue;
          (e1 < 0 ? e1 : e2) = e;
        }
        total += distance(cut[e1], cut[e2]);
        continue;
      }
      // Saddle: opposite corners share a state. If the cell mean matches
      // corner a's state, a and c are joined and the segments cut off b and
      // d; otherwise they cut off a and c.
      const bool centre_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= u;
      if (centre_in == in[0]) {
        total += distance(cut[0], cut[1]) + distance(cut[2], cut[3]);
      } else {
        total += distance(cut[3], cut[0]) + distance(cut[1], cut[2]);
      }
    }
  }
  return total * w.spacing;
}

std::int64_t crossing_count(const FieldRealization& field, double u) {
  if (field.dim() != 1) throw UnsupportedDimension("crossing count requires a 1-dimensional field");
  const auto& f = field.values();
  std::int64_t count = 0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double a = f[i] - u, b = f[i + 1] - u;
    if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) ++count;
  }
  return count;
}

std::vector<ExcursionMeasurement> measure_excursions(const FieldRealization& field,
                                                     std::span<const double> levels,
                                                     bool with_perimeter) {
  auto out = excursion_volumes(field, levels);
  for (auto& m : out) {
    if (field.dim() == 1) m.crossings = crossing_count(field, m.level);
    if (with_perimeter && field.dim() == 2) m.perimeter = excursion_perimeter(field, m.level);
  }
  return out;
}

}  // namespace exset
