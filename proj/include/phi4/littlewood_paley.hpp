#pragma once

// Sharp dyadic Littlewood-Paley blocks on the retained band: k = 0 alone in
// block -1, and k != 0 in block j >= 0 iff 2^(j-1) <= |k|_2 < 2^j. Block 0 is
// therefore empty on the integer lattice; it is kept so indices match the
// usual convention.

#include <vector>

#include "phi4/torus.hpp"

namespace phi4 {

/// Block index of a mode with integer |k|^2 = norm_sq.
int block_of(int norm_sq) noexcept;

/// Largest block index J occupied on the grid (smallest j with 2^j > sqrt(d) N).
int max_block(const TorusGrid& grid) noexcept;

/// Delta_j f; throws invalid_argument for j outside [-1, J].
SpectralField block(const SpectralField& f, int j);

/// sup_x |Delta_j f(x)| for j = -1..J, stored at position j + 1.
std::vector<double> block_sup_norms(const SpectralField& f);

/// max_j 2^(beta j) ||Delta_j f||_inf
double besov_norm(const SpectralField& f, double beta);

/// u < v = sum_j (Delta_{<=j-2} u)(Delta_j v)
SpectralField paraproduct_less(const SpectralField& u, const SpectralField& v);
/// u (.) v = sum_{|i-j|<=1} (Delta_i u)(Delta_j v)
SpectralField resonant(const SpectralField& u, const SpectralField& v);
/// u <= v = u < v + u (.) v
SpectralField para_or_res(const SpectralField& u, const SpectralField& v);

/// Delta_{<=n} f and Delta_{>n} f; n >= -1.
SpectralField project_low(const SpectralField& f, int n);
SpectralField project_high(const SpectralField& f, int n);

}  // namespace phi4
