// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_RULES_HPP
#define TDFSI_RULES_HPP

#include <array>
#include <vector>

namespace tdfsi
{

// Gauss-Legendre rule on [0,1].
struct Rule1D
{
  std::vector<double> x;
  std::vector<double> w;
};

// Rule on the reference triangle {(s,t): s,t >= 0, s+t <= 1}; weights sum to 1/2.
struct TriangleRule
{
  std::vector<std::array<double, 2>> x;
  std::vector<double> w;
};

// Rule on the reference tet; weights sum to 1/6.
struct TetRule
{
  std::vector<std::array<double, 3>> x;
  std::vector<double> w;
};

const Rule1D &gauss_legendre(int npts);
// Collapsed (Duffy) tensor Gauss rule with npts^2 points, exact to degree 2 npts - 1.
TriangleRule triangle_gauss(int npts);
// Symmetric 7-point rule, exact to degree 5.
const TriangleRule &triangle_7pt();
TetRule tet_gauss(int npts);

}  // namespace tdfsi

#endif  // TDFSI_RULES_HPP
