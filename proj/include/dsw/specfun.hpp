#ifndef DSW_SPECFUN_HPP
#define DSW_SPECFUN_HPP

namespace dsw::specfun {

// Complete elliptic integrals and Jacobi elliptic functions in the
// PARAMETER convention: the argument m is the parameter (m = k^2, k the
// modulus).  K and E are evaluated by the arithmetic-geometric mean,
// sn/cn/dn by the AGM phase recursion (descending Landen); both are
// accurate to a few ulps away from m = 1.  Above m = 1 - 1e-10 the
// logarithmic asymptotics take over.

// K(m), 0 <= m < 1.  Throws DomainError for m < 0 or m >= 1.
double ellip_K(double m);

// E(m), 0 <= m <= 1.  Throws DomainError outside [0, 1].
double ellip_E(double m);

// dK/dm = (E - (1-m)K) / (2m(1-m)),   0 < m < 1.
double dK_dm(double m);

// dE/dm = (E - K) / (2m),             0 < m < 1.
double dE_dm(double m);

struct JacobiSCD {
  double sn, cn, dn;
};

// sn, cn, dn of (u, m) for m in [0, 1].  The triple satisfies
// sn^2 + cn^2 = 1 and dn^2 + m sn^2 = 1 to round-off.
JacobiSCD jacobi_sn_cn_dn(double u, double m);

}  // namespace dsw::specfun

#endif
