#include "maslov/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "maslov/errors.hpp"

namespace maslov {

namespace {

double map_value(double x, const std::vector<MeshFocus>& foci) {
  double g = x;
  for (const auto& f : foci) g += f.amplitude * f.width * std::tanh((x - f.center) / f.width);
  return g;
}

double map_density(double x, const std::vector<MeshFocus>& foci) {
  double rho = 1.0;
  for (const auto& f : foci) {
    const double c = std::cosh((x - f.center) / f.width);
    rho += f.amplitude / (c * c);
  }
  return rho;
}

}  // namespace

std::vector<double> mapped_mesh(double a, double b, int n, const std::vector<MeshFocus>& foci) {
  if (!(b > a) || n < 2) throw Error(Errc::domain_error, "mapped_mesh needs b > a and n >= 2");
  const double ga = map_value(a, foci);
  const double gb = map_value(b, foci);
  std::vector<double> nodes(static_cast<std::size_t>(n));
  nodes.front() = a;
  nodes.back() = b;
  double lo = a;
  for (int j = 1; j < n - 1; ++j) {
    const double target = ga + (gb - ga) * static_cast<double>(j) / (n - 1);
    // safeguarded Newton on the monotone map, bracket [lo, b]
    double left = lo, right = b;
    double x = std::clamp(lo + (target - map_value(lo, foci)), left, right);
    for (int it = 0; it < 100; ++it) {
      const double r = map_value(x, foci) - target;
      if (r > 0.0) right = x; else left = x;
      double next = x - r / map_density(x, foci);
      if (!(next > left && next < right)) next = 0.5 * (left + right);
      if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
        x = next;
        break;
      }
      x = next;
    }
    nodes[static_cast<std::size_t>(j)] = x;
    lo = x;
  }
  return nodes;
}

double mapped_spacing(double x, double a, double b, int n, const std::vector<MeshFocus>& foci) {
  const double dg = (map_value(b, foci) - map_value(a, foci)) / (n - 1);
  return dg / map_density(x, foci);
}

std::size_t locate_interval(const std::vector<double>& nodes, double x) {
  if (nodes.size() < 2) return 0;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  std::size_t i = (it == nodes.begin()) ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  return std::min(i, nodes.size() - 2);
}

}  // namespace maslov
