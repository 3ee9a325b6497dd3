"""Exact Poisson algebra of the 2-sphere.

Polynomials live in R[x,y,z]/(x^2+y^2+z^2-1) with Gaussian-rational
coefficients, kept in a canonical form with z-degree <= 1.  The module
provides the KKS bracket {p,q} = <r, grad p x grad q>, its rescaling to the
bracket of the volume-2*pi symplectic form, exact sphere integration via the
classical monomial moment formula, the invariant bilinear forms kappa,
kappa_infty and B, an integer-coefficient solid-harmonic basis with exact
harmonic decomposition, and sparse Poisson structure constants on that basis.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Tuple

from . import conventions
from .errors import DegreeOverflowError, PiPowerMismatchError
from .exact import (
    GaussianRational,
    SymbolicScalar,
    conj_scalar,
    gauss,
    im_part,
    re_part,
    scalar_to_complex,
)

DEFAULT_LMAX = 8

Mono = Tuple[int, int, int]
Terms = Dict[Mono, object]

BasisKey = Tuple[int, int]  # (l, m)


# ---------------------------------------------------------------------------
# raw term-dict helpers (representatives in R[x,y,z], no ideal reduction)
# ---------------------------------------------------------------------------

def _acc(d: Terms, mono: Mono, val) -> None:
    cur = d.get(mono)
    new = val if cur is None else cur + val
    if new:
        d[mono] = new
    elif cur is not None:
        del d[mono]


def _raw_mul(d1: Terms, d2: Terms) -> Terms:
    out: Terms = {}
    for (a1, b1, c1), v1 in d1.items():
        for (a2, b2, c2), v2 in d2.items():
            _acc(out, (a1 + a2, b1 + b2, c1 + c2), v1 * v2)
    return out


def _raw_scale(d: Terms, s) -> Terms:
    if not s:
        return {}
    return {m: v * s for m, v in d.items()}


def _raw_add(d1: Terms, d2: Terms) -> Terms:
    out = dict(d1)
    for m, v in d2.items():
        _acc(out, m, v)
    return out


def _raw_diff(d: Terms, axis: int) -> Terms:
    out: Terms = {}
    for mono, v in d.items():
        e = mono[axis]
        if e:
            m = list(mono)
            m[axis] = e - 1
            _acc(out, tuple(m), v * e)
    return out


def _raw_kks(d1: Terms, d2: Terms) -> Terms:
    """<r, grad p x grad q> on representatives, unreduced."""
    px, py, pz = (_raw_diff(d1, i) for i in range(3))
    qx, qy, qz = (_raw_diff(d2, i) for i in range(3))
    out: Terms = {}
    for axis, (u1, v1, u2, v2) in enumerate(
        ((py, qz, pz, qy), (pz, qx, px, qz), (px, qy, py, qx))
    ):
        comp = _raw_add(_raw_mul(u1, v1), _raw_scale(_raw_mul(u2, v2), -1))
        unit = [0, 0, 0]
        unit[axis] = 1
        for m, v in _raw_mul({tuple(unit): 1}, comp).items():
            _acc(out, m, v)
    return out


def _raw_laplace3(d: Terms) -> Terms:
    out: Terms = {}
    for axis in range(3):
        for m, v in _raw_diff(_raw_diff(d, axis), axis).items():
            _acc(out, m, v)
    return out


def _reduce_terms(raw: Terms) -> Terms:
    """Canonical representative: eliminate z powers >= 2 via z^2 -> 1-x^2-y^2."""
    out: Terms = {}
    stack = [(m, v) for m, v in raw.items() if v]
    while stack:
        (a, b, c), v = stack.pop()
        if c <= 1:
            _acc(out, (a, b, c), v)
            continue
        # z^c = z^(c-2) * (1 - x^2 - y^2)
        stack.append(((a, b, c - 2), v))
        stack.append(((a + 2, b, c - 2), -v))
        stack.append(((a, b + 2, c - 2), -v))
    return out


# ---------------------------------------------------------------------------
# SpherePoly
# ---------------------------------------------------------------------------

class SpherePoly:
    """Immutable polynomial function on the unit sphere, canonical mod the ideal.

    Terms map monomials (a, b, c) with c in {0, 1} to exact scalars.  Equality
    is coefficient-map equality of the canonical form.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Mono, object] | None = None):
        reduced = _reduce_terms(dict(terms or {}))
        object.__setattr__(self, "_terms", reduced)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SpherePoly is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls) -> "SpherePoly":
        return cls({})

    @classmethod
    def one(cls) -> "SpherePoly":
        return cls({(0, 0, 0): 1})

    @classmethod
    def constant(cls, s) -> "SpherePoly":
        return cls({(0, 0, 0): s})

    @classmethod
    def coordinate(cls, axis: int) -> "SpherePoly":
        unit = [0, 0, 0]
        unit[axis] = 1
        return cls({tuple(unit): 1})

    # -- views ------------------------------------------------------------
    @property
    def terms(self) -> Dict[Mono, object]:
        return dict(self._terms)

    def coefficient(self, mono: Mono):
        return self._terms.get(tuple(mono), Fraction(0))

    def degree(self) -> int:
        """Total degree of the canonical representative; -1 for the zero poly."""
        if not self._terms:
            return -1
        return max(a + b + c for (a, b, c) in self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_real(self) -> bool:
        return all(not im_part(v) for v in self._terms.values())

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, SpherePoly):
            return SpherePoly(_raw_add(self._terms, other._terms))
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SpherePoly):
            return SpherePoly(_raw_add(self._terms, _raw_scale(other._terms, -1)))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, SpherePoly):
            return SpherePoly(_raw_mul(self._terms, other._terms))
        return SpherePoly(_raw_scale(self._terms, other))

    def __rmul__(self, other):
        return SpherePoly(_raw_scale(self._terms, other))

    def __neg__(self):
        return SpherePoly(_raw_scale(self._terms, -1))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = SpherePoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def conjugate(self) -> "SpherePoly":
        return SpherePoly({m: conj_scalar(v) for m, v in self._terms.items()})

    def eval(self, x: float, y: float, z: float) -> complex:
        total = 0j
        for (a, b, c), v in self._terms.items():
            total += scalar_to_complex(v) * (x ** a) * (y ** b) * (z ** c)
        return total

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, SpherePoly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(frozenset(self._terms.items()))
            )
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "SpherePoly(0)"
        parts = []
        for mono in sorted(self._terms, key=lambda m: (sum(m), m)):
            v = self._terms[mono]
            names = "".join(
                f"{n}^{e}" if e > 1 else n
                for n, e in zip("xyz", mono)
                if e
            )
            parts.append(f"({v}){names}" if names else f"({v})")
        return "SpherePoly(" + " + ".join(parts) + ")"


X = SpherePoly.coordinate(0)
Y = SpherePoly.coordinate(1)
Z = SpherePoly.coordinate(2)
ONE = SpherePoly.one()


def reduce(raw) -> SpherePoly:
    """Canonical representative of a raw term map (or poly) mod the sphere ideal."""
    if isinstance(raw, SpherePoly):
        return raw
    return SpherePoly(raw)


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------

def kks_bracket(p: SpherePoly, q: SpherePoly) -> SpherePoly:
    """{p, q} = <r, grad p x grad q>, reduced to canonical form.

    The value mod the ideal does not depend on the representatives used for
    the partial derivatives; this is covered by a property test.
    """
    return SpherePoly(_raw_kks(p._terms, q._terms))


def omega_bracket(p: SpherePoly, q: SpherePoly) -> SpherePoly:
    """Poisson bracket of the volume-2*pi symplectic form: a calibrated
    multiple (2 * OMEGA_SIGN) of the KKS bracket."""
    return (2 * conventions.OMEGA_SIGN) * kks_bracket(p, q)


# ---------------------------------------------------------------------------
# integration and invariant forms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _double_factorial(n: int) -> int:
    # (-1)!! = 1 by convention
    if n <= 0:
        return 1
    return n * _double_factorial(n - 2)


@lru_cache(maxsize=None)
def _moment(mono: Mono) -> Fraction:
    """integral of x^a y^b z^c over the unit sphere w.r.t. the round area
    measure, divided by pi.  Odd exponents integrate to zero."""
    a, b, c = mono
    if a % 2 or b % 2 or c % 2:
        return Fraction(0)
    num = (
        _double_factorial(a - 1)
        * _double_factorial(b - 1)
        * _double_factorial(c - 1)
    )
    return Fraction(4 * num, _double_factorial(a + b + c + 1))


def integrate_sphere(p: SpherePoly) -> SymbolicScalar:
    """Integral of p against the volume-2*pi form (half the round area form)."""
    total = Fraction(0)
    total_i = Fraction(0)
    for mono, v in p._terms.items():
        w = _moment(mono)
        if w:
            total += re_part(v) * w
            total_i += im_part(v) * w
    return SymbolicScalar(gauss(total / 2, total_i / 2), 1)


def kappa(f: SpherePoly, g: SpherePoly) -> SymbolicScalar:
    """Invariant inner product: integral of f*g over the sphere."""
    return integrate_sphere(f * g)


def kappa_infty(f: SpherePoly, g: SpherePoly) -> SymbolicScalar:
    """kappa normalized by 12*pi / Vol^3 with Vol = 2*pi, i.e. 3/(2*pi^2)."""
    k = kappa(f, g)
    return SymbolicScalar(k.coeff * Fraction(3, 2), k.pi_power - 2)


def b_form(f: SpherePoly, g: SpherePoly) -> SymbolicScalar:
    """Product of the two sphere integrals; kills the zero-mean ideal."""
    return integrate_sphere(f) * integrate_sphere(g)


# ---------------------------------------------------------------------------
# solid harmonic basis
# ---------------------------------------------------------------------------

def _azimuthal_factor(mu: int, imaginary: bool) -> Terms:
    """Re[(x+iy)^mu] or Im[(x+iy)^mu] as an integer-coefficient term map."""
    out: Terms = {}
    from math import comb

    for j in range(mu + 1):
        # i^j contributes to Re for j % 4 in {0, 2}, Im for {1, 3}
        r = j % 4
        if imaginary and r in (1, 3):
            sign = 1 if r == 1 else -1
        elif not imaginary and r in (0, 2):
            sign = 1 if r == 0 else -1
        else:
            continue
        _acc(out, (mu - j, j, 0), sign * comb(mu, j))
    return out


def _solve_nullvector(rows: List[List[Fraction]]) -> List[Fraction]:
    """One-dimensional nullspace vector of a small exact matrix."""
    ncols = len(rows[0]) if rows else 0
    mat = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [vi - f * vr for vi, vr in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        raise RuntimeError(f"expected 1-dim nullspace, got {len(free)} free columns")
    x = [Fraction(0)] * ncols
    x[free[0]] = Fraction(1)
    for row_idx, c in enumerate(pivots):
        x[c] = -mat[row_idx][free[0]]
    return x


@lru_cache(maxsize=None)
def solid_harmonic_raw(l: int, m: int) -> Tuple[Tuple[Mono, int], ...]:
    """Homogeneous degree-l harmonic polynomial on R^3 with primitive integer
    coefficients, tesseral azimuthal structure indexed by m in [-l, l]."""
    if not (-l <= m <= l):
        raise ValueError(f"m={m} out of range for l={l}")
    if l == 0:
        return (((0, 0, 0), 1),)
    mu = abs(m)
    w = _azimuthal_factor(mu, imaginary=(m < 0))
    kmax = (l - mu) // 2
    # ansatz sum_k c_k (x^2+y^2)^k z^(l-mu-2k) * w ; impose Laplace = 0
    u = {(2, 0, 0): 1, (0, 2, 0): 1}
    basis_terms: List[Terms] = []
    for kk in range(kmax + 1):
        t: Terms = dict(w)
        for _ in range(kk):
            t = _raw_mul(t, u)
        t = _raw_mul(t, {(0, 0, l - mu - 2 * kk): 1})
        basis_terms.append(t)
    if kmax == 0:
        sol = [Fraction(1)]
    else:
        laps = [_raw_laplace3(t) for t in basis_terms]
        monos = sorted({mm for lt in laps for mm in lt})
        rows = [
            [Fraction(lt.get(mm, 0)) for lt in laps]
            for mm in monos
        ]
        sol = _solve_nullvector(rows)
    combined: Terms = {}
    for ck, t in zip(sol, basis_terms):
        for mm, v in t.items():
            _acc(combined, mm, ck * v)
    # primitive integer scaling, sign fixed by the highest z-power term
    denlcm = 1
    for v in combined.values():
        denlcm = denlcm * Fraction(v).denominator // _gcd(denlcm, Fraction(v).denominator)
    ints = {mm: int(Fraction(v) * denlcm) for mm, v in combined.items()}
    g = 0
    for v in ints.values():
        g = _gcd(g, abs(v))
    ints = {mm: v // g for mm, v in ints.items()}
    lead = max(ints, key=lambda mm: (mm[2], mm[0]))
    if ints[lead] < 0:
        ints = {mm: -v for mm, v in ints.items()}
    return tuple(sorted(ints.items()))


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


@lru_cache(maxsize=None)
def solid_harmonic(l: int, m: int) -> SpherePoly:
    """The basis harmonic restricted to the sphere, in canonical form."""
    return SpherePoly(dict(solid_harmonic_raw(l, m)))


def solid_harmonic_basis(l: int) -> List[SpherePoly]:
    """All 2l+1 basis harmonics of degree l, ordered m = -l..l."""
    return [solid_harmonic(l, m) for m in range(-l, l + 1)]


def basis_keys(lmax: int) -> List[BasisKey]:
    return [(l, m) for l in range(lmax + 1) for m in range(-l, l + 1)]


@lru_cache(maxsize=None)
def gram_value(l: int, m: int) -> SymbolicScalar:
    """kappa(Y_lm, Y_lm); the basis is kappa-orthogonal so this is the whole
    Gram matrix."""
    p = solid_harmonic(l, m)
    return kappa(p, p)


# ---------------------------------------------------------------------------
# harmonic decomposition
# ---------------------------------------------------------------------------

class HarmonicCoeffs:
    """Exact expansion of a sphere polynomial over the solid-harmonic basis."""

    __slots__ = ("lmax", "_coeffs")

    def __init__(self, lmax: int, coeffs: Mapping[BasisKey, object] | None = None):
        self.lmax = int(lmax)
        clean: Dict[BasisKey, object] = {}
        for (l, m), v in (coeffs or {}).items():
            if l > self.lmax or abs(m) > l:
                raise DegreeOverflowError(f"(l={l}, m={m}) outside lmax={lmax}")
            if v:
                clean[(l, m)] = v
        self._coeffs = clean

    @property
    def coeffs(self) -> Dict[BasisKey, object]:
        return dict(self._coeffs)

    def get(self, l: int, m: int):
        return self._coeffs.get((l, m), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def l_support(self) -> List[int]:
        return sorted({l for (l, _m) in self._coeffs})

    def component(self, l: int) -> "HarmonicCoeffs":
        return HarmonicCoeffs(
            self.lmax, {k: v for k, v in self._coeffs.items() if k[0] == l}
        )

    def map_l(self, fn: Callable[[int], object]) -> "HarmonicCoeffs":
        """Multiply each degree-l component by fn(l)."""
        return HarmonicCoeffs(
            self.lmax, {(l, m): fn(l) * v for (l, m), v in self._coeffs.items()}
        )

    def conjugate(self) -> "HarmonicCoeffs":
        return HarmonicCoeffs(
            self.lmax, {k: conj_scalar(v) for k, v in self._coeffs.items()}
        )

    def scale(self, s) -> "HarmonicCoeffs":
        return HarmonicCoeffs(self.lmax, {k: s * v for k, v in self._coeffs.items()})

    def __add__(self, other):
        if isinstance(other, HarmonicCoeffs):
            out = dict(self._coeffs)
            for k, v in other._coeffs.items():
                _acc(out, k, v)
            return HarmonicCoeffs(max(self.lmax, other.lmax), out)
        return NotImplemented

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if isinstance(other, HarmonicCoeffs):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def to_poly(self) -> SpherePoly:
        out = SpherePoly.zero()
        for (l, m), v in self._coeffs.items():
            out = out + v * solid_harmonic(l, m)
        return out

    def __repr__(self):
        inner = ", ".join(
            f"({l},{m}): {v}" for (l, m), v in sorted(self._coeffs.items())
        )
        return f"HarmonicCoeffs(lmax={self.lmax}, {{{inner}}})"


def harmonic_decompose(p: SpherePoly, lmax: int = DEFAULT_LMAX) -> HarmonicCoeffs:
    """Exact, unique expansion of p over the basis harmonics with l <= lmax.

    Coefficients come from the diagonal Gram solve c = kappa(p, Y)/kappa(Y, Y);
    the round trip is verified exactly and DegreeOverflowError is raised if p
    has harmonic content above the truncation.
    """
    if p.degree() > lmax:
        raise DegreeOverflowError(
            f"degree {p.degree()} exceeds truncation lmax={lmax}"
        )
    coeffs: Dict[BasisKey, object] = {}
    for l in range(lmax + 1):
        for m in range(-l, l + 1):
            num = kappa(p, solid_harmonic(l, m))
            if num.is_zero:
                continue
            coeffs[(l, m)] = (num / gram_value(l, m)).coeff
    out = HarmonicCoeffs(lmax, coeffs)
    if out.to_poly() != p:
        raise DegreeOverflowError(
            f"harmonic content above lmax={lmax} (round trip failed)"
        )
    return out


def laplacian(f: SpherePoly, lmax: int = DEFAULT_LMAX) -> SpherePoly:
    """Laplace operator of the metric underlying the volume-2*pi form:
    multiplies the degree-l component by 2*l*(l+1)."""
    return harmonic_decompose(f, lmax).map_l(lambda l: 2 * l * (l + 1)).to_poly()


def antipodal(f: SpherePoly) -> SpherePoly:
    """The involution -f(-x,-y,-z); acts as (-1)**(l+1) on degree-l harmonics."""
    return SpherePoly(
        {
            mono: (-v if (sum(mono) % 2 == 0) else v)
            for mono, v in f._terms.items()
        }
    )


# ---------------------------------------------------------------------------
# Poisson structure constants
# ---------------------------------------------------------------------------

class PoissonTable:
    """Sparse exact structure constants of the omega bracket on the basis.

    Entries are stored for ordered pairs key1 < key2 that fit in the
    truncation (l1 + l2 - 1 <= lmax); the antisymmetric completion is
    derived on lookup.
    """

    SCHEMA = "sphere-poisson-table/1"

    def __init__(self, lmax: int, entries: Dict[Tuple[BasisKey, BasisKey], Dict[BasisKey, Fraction]]):
        self.lmax = int(lmax)
        self._entries = entries

    @classmethod
    def build(cls, lmax: int) -> "PoissonTable":
        entries: Dict[Tuple[BasisKey, BasisKey], Dict[BasisKey, Fraction]] = {}
        keys = basis_keys(lmax)
        for i, k1 in enumerate(keys):
            for k2 in keys[i + 1 :]:
                l1, l2 = k1[0], k2[0]
                if l1 == 0 or l2 == 0 or l1 + l2 - 1 > lmax:
                    continue
                br = omega_bracket(solid_harmonic(*k1), solid_harmonic(*k2))
                if br.is_zero:
                    continue
                hc = harmonic_decompose(br, min(l1 + l2 - 1, lmax))
                row = {
                    key: Fraction(re_part(v))
                    for key, v in hc.coeffs.items()
                }
                if row:
                    entries[(k1, k2)] = row
        return cls(lmax, entries)

    def bracket_on_basis(self, k1: BasisKey, k2: BasisKey) -> Dict[BasisKey, Fraction]:
        l1, l2 = k1[0], k2[0]
        if l1 > self.lmax or l2 > self.lmax:
            raise DegreeOverflowError(f"basis key outside lmax={self.lmax}")
        if l1 + l2 - 1 > self.lmax:
            raise DegreeOverflowError(
                f"bracket degree {l1 + l2 - 1} exceeds table lmax={self.lmax}"
            )
        if k1 == k2:
            return {}
        if k1 < k2:
            return dict(self._entries.get((k1, k2), {}))
        return {k: -v for k, v in self._entries.get((k2, k1), {}).items()}

    def bracket_coeffs(self, f: HarmonicCoeffs, g: HarmonicCoeffs) -> HarmonicCoeffs:
        """Bilinear extension of the basis bracket to coefficient vectors."""
        out: Dict[BasisKey, object] = {}
        for k1, v1 in f.coeffs.items():
            if not v1:
                continue
            for k2, v2 in g.coeffs.items():
                if not v2:
                    continue
                for k3, c in self.bracket_on_basis(k1, k2).items():
                    _acc(out, k3, v1 * v2 * c)
        return HarmonicCoeffs(self.lmax, out)

    # -- validation ------------------------------------------------------
    def validate(self) -> None:
        """Selection rule, antipodal parity rule, and the Jacobi identity on
        every basis triple that stays within the truncation."""
        for (k1, k2), row in self._entries.items():
            l1, l2 = k1[0], k2[0]
            for (l3, _m3), v in row.items():
                if not v:
                    continue
                if not (abs(l1 - l2) <= l3 <= l1 + l2 - 1):
                    raise AssertionError(f"selection rule violated at {k1},{k2}->{l3}")
                if (l1 + l2 + l3) % 2 == 0:
                    raise AssertionError(f"parity rule violated at {k1},{k2}->{l3}")
        keys = [k for k in basis_keys(self.lmax) if k[0] >= 1]
        for i, a in enumerate(keys):
            for j in range(i + 1, len(keys)):
                b = keys[j]
                for c in keys[j + 1 :]:
                    if a[0] + b[0] + c[0] - 2 > self.lmax:
                        continue
                    acc: Dict[BasisKey, Fraction] = {}
                    for x, y, zz in ((a, b, c), (b, c, a), (c, a, b)):
                        inner = self.bracket_on_basis(x, y)
                        for e, ce in inner.items():
                            for d, cd in self.bracket_on_basis(e, zz).items():
                                _acc(acc, d, ce * cd)
                    if acc:
                        raise AssertionError(f"Jacobi fails on triple {a},{b},{c}")

    # -- serialization -----------------------------------------------------
    def to_payload(self) -> dict:
        rows = []
        for (k1, k2), row in sorted(self._entries.items()):
            for k3, v in sorted(row.items()):
                rows.append(
                    {
                        "l1": k1[0],
                        "m1": k1[1],
                        "l2": k2[0],
                        "m2": k2[1],
                        "l3": k3[0],
                        "m3": k3[1],
                        "num": v.numerator,
                        "den": v.denominator,
                    }
                )
        return {"schema": self.SCHEMA, "lmax": self.lmax, "entries": rows}

    @classmethod
    def from_payload(cls, payload: dict) -> "PoissonTable":
        if payload.get("schema") != cls.SCHEMA:
            raise ValueError(f"unexpected schema {payload.get('schema')!r}")
        entries: Dict[Tuple[BasisKey, BasisKey], Dict[BasisKey, Fraction]] = {}
        for row in payload["entries"]:
            k1 = (row["l1"], row["m1"])
            k2 = (row["l2"], row["m2"])
            k3 = (row["l3"], row["m3"])
            entries.setdefault((k1, k2), {})[k3] = Fraction(row["num"], row["den"])
        return cls(payload["lmax"], entries)


@lru_cache(maxsize=None)
def poisson_table(lmax: int) -> PoissonTable:
    return PoissonTable.build(lmax)


# ---------------------------------------------------------------------------
# invariance checking
# ---------------------------------------------------------------------------

GramMap = Dict[Tuple[BasisKey, BasisKey], SymbolicScalar]


def kappa_gram(lmax: int) -> GramMap:
    """kappa as a Gram map on the basis (diagonal by orthogonality)."""
    return {
        ((l, m), (l, m)): gram_value(l, m)
        for l in range(lmax + 1)
        for m in range(-l, l + 1)
    }


def b_gram(lmax: int) -> GramMap:
    """B as a Gram map on the basis: supported on the constant only."""
    vol = integrate_sphere(ONE)
    return {(((0, 0), (0, 0))): vol * vol}


def check_invariance(S: GramMap, lmax: int, table: PoissonTable | None = None) -> SymbolicScalar:
    """Maximum of |S({h,f},g) + S(f,{h,g})| over basis triples whose brackets
    stay within the truncation.  Exactly zero for invariant forms.

    All nonzero entries of S must share one pi power.
    """
    powers = {v.pi_power for v in S.values() if not v.is_zero}
    if len(powers) > 1:
        raise PiPowerMismatchError(f"mixed pi powers in Gram map: {powers}")
    power = powers.pop() if powers else 0

    if table is None:
        table = poisson_table(lmax)

    def s_val(k1: BasisKey, k2: BasisKey) -> SymbolicScalar:
        v = S.get((k1, k2))
        if v is None:
            v = S.get((k2, k1))
        return v if v is not None else SymbolicScalar(0, power)

    keys = basis_keys(lmax)
    worst = SymbolicScalar(0, power)
    for h in keys:
        if h[0] == 0:
            continue
        for f in keys:
            if h[0] + max(f[0], 1) - 1 > lmax:
                continue
            bhf = table.bracket_on_basis(h, f) if f[0] >= 1 else {}
            for g in keys:
                if h[0] + max(g[0], 1) - 1 > lmax:
                    continue
                bhg = table.bracket_on_basis(h, g) if g[0] >= 1 else {}
                total = SymbolicScalar(0, power)
                for k3, c in bhf.items():
                    total = total + c * s_val(k3, g)
                for k3, c in bhg.items():
                    total = total + c * s_val(f, k3)
                if not total.is_zero:
                    mag = abs(total)
                    if worst < mag:
                        worst = mag
    return worst
