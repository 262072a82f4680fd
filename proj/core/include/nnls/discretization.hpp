#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nnls/grid.hpp"

namespace nnls {

/// Flat indices of the nodes strictly inside the box (the unknowns).
std::vector<std::size_t> interior_indices(const GridSpec& grid);

/// Second-order central Laplacian with zero ghost values beyond the box.
Field laplacian_apply(const Field& f);

/// (-eps^2 Lap + V) f on interior nodes; zero on the box surface.
Field apply_schrodinger(const Field& f, const Field& V, double eps);

/// Discrete <f, w>_eps: trapezoid-weighted V f w plus eps^2 times the edge
/// sum of forward-difference products. For fields vanishing on the box
/// surface this equals l2_pairing(apply_schrodinger(f), w).
double inner_eps(const Field& f, const Field& w, const Field& V, double eps);

/// ||(u, v)||_eps^2 = <u, u>_eps + <v, v>_eps
double norm_eps(const PairField& pair, const Field& V, double eps);

/// Trapezoid quadrature of f.
double integrate(const Field& f);

/// cell_volume * sum over interior nodes of a*b; the duality pairing used
/// for strong-form residuals.
double l2_pairing(const Field& a, const Field& b);
double l2_norm(const Field& a);
double l2_norm(const PairField& a);

/// sum over nodes with mask[j] != 0 of trapezoid-weighted f^2
double masked_mass(const Field& f, const std::vector<std::uint8_t>& mask);

/// eps^2 times the forward-difference edge sum of |grad f|^2 over edges
/// whose endpoints both satisfy mask.
double masked_gradient_energy(const Field& f, const std::vector<std::uint8_t>& mask, double eps);

}  // namespace nnls

namespace nnls {

/// Multilinear interpolation of f at x; 0 outside the box.
double sample_linear(const Field& f, const Point& x);

}  // namespace nnls
