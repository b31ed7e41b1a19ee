#pragma once

#include "affdim/carpets.hpp"
#include "affdim/ifs.hpp"

#include <string>
#include <vector>

namespace affdim {

/// Built-in systems used by the tests and by `affdim verify`.
///
///   similarity3     three maps of ratio 1/3 (Sierpinski-type, SSC)
///   sierpinski      three maps of ratio 1/2 (touching)
///   full_square     four maps of ratio 1/2 tiling the unit square
///   cantor_segment  middle-thirds Cantor set on the x-axis
///   carpet          the (4, 5) carpet with column counts (3, 0, 1, 1)
///   example_eps     carpet plus one small extra map (eps = 0.01)
///   positive_pair   two positive matrices, SSC
///   cone            three symmetric maps sharing an invariant cone, SSC
///   overlap         cone maps 1, 2 and their composition 1∘2
///   irreducible3    three positive-cone maps, SSC, affinity dimension > 1
///   irreducible4    four rotated thin maps, SSC, strongly irreducible
///   rotation        a similarity with an irrational rotation
std::vector<std::string> fixture_names();
Ifs fixture(const std::string& name);

/// R(θ) diag(a, b) R(θ)ᵀ with θ in degrees.
Matrix2 symmetric_matrix(double degrees, double a, double b);

} // namespace affdim
