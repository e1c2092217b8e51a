#pragma once

#include <vector>

namespace maslov {

/// One refinement bump of a mapped mesh: node density is raised by `amplitude`
/// times sech^2((x - center) / width).
struct MeshFocus {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 0.0;
};

/// Nodes x_j = G^{-1}(G(a) + j (G(b) - G(a)) / (n - 1)) for the analytic map
/// G(x) = x + sum_k A_k w_k tanh((x - c_k) / w_k). Because G is smooth, the
/// spacing varies smoothly and three-point difference formulas keep their order.
std::vector<double> mapped_mesh(double a, double b, int n, const std::vector<MeshFocus>& foci);

/// Inverse of the density: local spacing the map would produce at x for
/// `n` nodes on [a, b]. Used to size meshes before building them.
double mapped_spacing(double x, double a, double b, int n, const std::vector<MeshFocus>& foci);

/// Index i with nodes[i] <= x < nodes[i+1] (clamped to a valid interval).
std::size_t locate_interval(const std::vector<double>& nodes, double x);

}  // namespace maslov
