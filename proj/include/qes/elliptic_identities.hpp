#ifndef QES_ELLIPTIC_IDENTITIES_HPP
#define QES_ELLIPTIC_IDENTITIES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qes/elliptic.hpp"

namespace qes::elliptic {

struct IdentityResidual {
  std::string name;
  double residual = 0.0;  // largest scaled residual over the sample
};

/// Seeded generic points x with |Im x| <= 0.35 Im tau, kept 0.1 away from
/// the lattice.
std::vector<cplx> sample_points(const EllipticParams& params, std::size_t count, std::uint64_t seed);

/// Weierstrass and theta identities evaluated at `count` seeded points (pairs
/// (x, y) for two-point identities). Residuals are |lhs - rhs| / max(1, |lhs|, |rhs|).
std::vector<IdentityResidual> identity_suite(const EllipticParams& params, std::size_t count, std::uint64_t seed);

}  // namespace qes::elliptic

#endif
