"""Calibrated sign and orientation constants.

The bracket normalization, the embedding of su(2) into degree-1 sphere
polynomials, and the orientation of the Toeplitz commutator are only fixed
up to sign by the geometry; this package pins all of them through one
anchor: the quantization square

    d_phi(k, iota(xi)) == spin_rep(k, xi)   exactly, for every k and xi.

``derive_conventions`` recomputes every constant from scratch (it solves for
iota from the diagram, reads off the bracket sign from the homomorphism
property, and measures the commutator orientation and equivariance scale);
a test asserts the result matches the committed values below.

Committed values (derived 2025, chart x + i*y = 2w/(1+|w|^2),
z = (1-|w|^2)/(1+|w|^2) on the standard affine chart w):

* OMEGA_SIGN = +1: the volume-2*pi bracket is +2 times the KKS bracket.
* IOTA_COEFFS: xi1 = [[0,1],[-1,0]] -> -y, xi2 = [[0,i],[i,0]] -> x,
  h = [[i,0],[0,-i]] -> z.
* TOEPLITZ_BRACKET_SIGN = -1: k*[T_k(f), T_k(g)] converges to
  i*T_k(TOEPLITZ_BRACKET_SIGN * {f,g}) at rate O(1/k).
* EQUIVARIANCE_SCALE = 1: [spin_rep(k, xi), T_k(f)] = T_k({iota(xi), f})
  exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

OMEGA_SIGN = 1

# coefficients of iota(xi_a) on (x, y, z) for the su(2) basis below
IOTA_COEFFS = {
    1: (Fraction(0), Fraction(-1), Fraction(0)),
    2: (Fraction(1), Fraction(0), Fraction(0)),
    3: (Fraction(0), Fraction(0), Fraction(1)),
}

TOEPLITZ_BRACKET_SIGN = -1

EQUIVARIANCE_SCALE = Fraction(1)


@dataclass(frozen=True)
class ConventionSet:
    omega_sign: int
    iota_coeffs: dict
    toeplitz_bracket_sign: int
    equivariance_scale: Fraction


def committed() -> ConventionSet:
    return ConventionSet(
        OMEGA_SIGN, dict(IOTA_COEFFS), TOEPLITZ_BRACKET_SIGN, EQUIVARIANCE_SCALE
    )


def derive_conventions(kmax: int = 6) -> ConventionSet:
    """Recompute all calibration constants from first principles.

    Raises if no consistent assignment exists or if the diagram fails at any
    level k <= kmax.
    """
    import numpy as np

    from . import harmonics as H
    from . import quantize as Q

    su2_basis = {1: Q.XI1, 2: Q.XI2, 3: Q.XI3}
    coords = [H.X, H.Y, H.Z]

    # 1. solve d_phi(k, c_x x + c_y y + c_z z) == spin_rep(k, xi) for each
    #    basis element at k = 2; linear in (c_x, c_y, c_z).
    k0 = 2
    dphi_coord = [Q.d_phi(k0, c, lmax=1).entries for c in coords]
    iota_coeffs = {}
    for a, xi in su2_basis.items():
        target = Q.spin_rep(k0, xi).entries
        sol = _solve_three(dphi_coord, target)
        iota_coeffs[a] = sol

    # 2. verify the diagram exactly at every level up to kmax
    for k in range(1, kmax + 1):
        for a, xi in su2_basis.items():
            p = sum(
                (c * coord for c, coord in zip(iota_coeffs[a], coords)),
                H.SpherePoly.zero(),
            )
            if Q.d_phi(k, p, lmax=1) != Q.spin_rep(k, xi):
                raise AssertionError(f"diagram fails at k={k}, basis {a}")

    # 3. bracket sign: iota must be a homomorphism onto (polys, omega bracket)
    def iota_of(a):
        return sum(
            (c * coord for c, coord in zip(iota_coeffs[a], coords)),
            H.SpherePoly.zero(),
        )

    sign = None
    for s in (1, -1):
        ok = True
        for (a, b, comm) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
            # [xi_a, xi_b] = 2 xi_comm for this basis
            lhs = 2 * iota_of(comm)
            rhs = (2 * s) * H.kks_bracket(iota_of(a), iota_of(b))
            if lhs != rhs:
                ok = False
                break
        if ok:
            sign = s
            break
    if sign is None:
        raise AssertionError("no bracket sign makes iota a homomorphism")

    def omega_br(p, q):
        return (2 * sign) * H.kks_bracket(p, q)

    # 4. equivariance scale, exact at k = 3 over basis xi and f in degree <= 2
    scale = None
    for a, xi in su2_basis.items():
        for f in coords + H.solid_harmonic_basis(2):
            lhs = Q.spin_rep(3, xi) @ Q.toeplitz(3, f) - Q.toeplitz(3, f) @ Q.spin_rep(3, xi)
            br = omega_br(iota_of(a), f)
            rhs = Q.toeplitz(3, br)
            if rhs.is_zero():
                if not lhs.is_zero():
                    raise AssertionError("equivariance defect on a zero bracket")
                continue
            c = _exact_ratio(lhs.entries, rhs.entries)
            if scale is None:
                scale = c
            elif scale != c:
                raise AssertionError("equivariance scale is not uniform")
    if scale is None:
        raise AssertionError("equivariance scale undetermined")

    # 5. Toeplitz commutator orientation, float at a moderate level
    k1 = 24
    tf = Q.toeplitz(k1, H.X, mode="float").entries
    tg = Q.toeplitz(k1, H.Y, mode="float").entries
    br = omega_br(H.X, H.Y)
    tb = Q.toeplitz(k1, br, mode="float").entries
    comm = k1 * (tf @ tg - tg @ tf)
    res_plus = np.linalg.norm(comm - 1j * tb, 2)
    res_minus = np.linalg.norm(comm + 1j * tb, 2)
    bt_sign = 1 if res_plus < res_minus else -1

    return ConventionSet(sign, iota_coeffs, bt_sign, scale)


def _solve_three(mats, target):
    """Exact solve of c0*M0 + c1*M1 + c2*M2 == T entrywise (overdetermined)."""
    from .exact import im_part, re_part

    n = len(target)
    rows = []
    rhs = []
    for i in range(n):
        for j in range(n):
            row = [mats[t][i][j] for t in range(3)]
            if any(row) or target[i][j]:
                rows.append(row)
                rhs.append(target[i][j])
    # Gaussian elimination over the Gaussian rationals, then realness check
    sol = _solve_exact(rows, rhs)
    out = []
    for v in sol:
        if im_part(v):
            raise AssertionError("iota coefficient is not real")
        out.append(Fraction(re_part(v)))
    return tuple(out)


def _q(v):
    # avoid int/int float division in the exact eliminations
    return Fraction(v) if isinstance(v, int) else v


def _solve_exact(rows, rhs):
    m = [[_q(v) for v in r] + [_q(b)] for r, b in zip(rows, rhs)]
    ncols = 3
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [v / lead for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if len(pivots) != ncols:
        raise AssertionError("underdetermined solve in calibration")
    for i in range(r, len(m)):
        if m[i][ncols]:
            raise AssertionError("inconsistent solve in calibration")
    sol = [0] * ncols
    for row_idx, c in enumerate(pivots):
        sol[c] = m[row_idx][ncols]
    return sol


def _exact_ratio(num_entries, den_entries):
    """The unique scalar c with num == c*den entrywise, both exact."""
    c = None
    n = len(num_entries)
    for i in range(n):
        for j in range(n):
            d = _q(den_entries[i][j])
            u = _q(num_entries[i][j])
            if not d:
                if u:
                    raise AssertionError("entries are not proportional")
                continue
            r = u / d
            if c is None:
                c = r
            elif c != r:
                raise AssertionError("entries are not proportional")
    if c is None:
        raise AssertionError("zero denominator matrix")
    from .exact import im_part, re_part

    if im_part(c):
        raise AssertionError("non-real proportionality constant")
    return Fraction(re_part(c))
