"""Berezin-Toeplitz and geometric quantization on the sphere at level k.

Operators act on the k+1 dimensional space of holomorphic sections of the
k-th power of the degree-one line bundle, written in the unnormalized
monomial basis e_0..e_k of the affine chart.  That basis has the diagonal
rational Gram matrix G_j = j!(k-j)!/(k+1)!, which keeps every Toeplitz
matrix entry Gaussian-rational: each entry is a finite sum of Beta integrals
B(a,b) = (a-1)!(b-1)!/(a+b-1)! produced by the chart substitutions

    x + i*y = 2w/(1+|w|^2),      z = (1-|w|^2)/(1+|w|^2).

The float path evaluates the same closed forms in doubles (via lgamma).
Norms and spectra are computed after symmetrizing with G^(1/2).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import conventions
from . import harmonics
from .errors import (
    DegreeOverflowError,
    LevelMismatchError,
    NotNormalizableError,
)
from .exact import (
    GaussianRational,
    I,
    SymbolicScalar,
    conj_scalar,
    gauss,
    im_part,
    re_part,
    scalar_to_complex,
)
from .harmonics import HarmonicCoeffs, SpherePoly

TOEPLITZ_DEGREE_CAP = 16

FLOAT_MODE = "float"
EXACT_MODE = "exact"


class FuzzyLevel:
    """A quantization level k >= 1 with dim = k + 1."""

    __slots__ = ("k",)

    def __init__(self, k: int):
        k = int(k)
        if k < 1:
            raise ValueError(f"level must be >= 1, got {k}")
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("FuzzyLevel is immutable")

    @property
    def dim(self) -> int:
        return self.k + 1

    def __eq__(self, other):
        return isinstance(other, FuzzyLevel) and other.k == self.k

    def __hash__(self):
        return hash(("FuzzyLevel", self.k))

    def __repr__(self):
        return f"FuzzyLevel({self.k})"


@lru_cache(maxsize=None)
def gram_vector(k: int) -> Tuple[Fraction, ...]:
    """Squared norms of the monomial sections: G_j = j!(k-j)!/(k+1)!."""
    FuzzyLevel(k)
    kf = factorial(k + 1)
    return tuple(Fraction(factorial(j) * factorial(k - j), kf) for j in range(k + 1))


@lru_cache(maxsize=None)
def _log_gram(k: int) -> np.ndarray:
    return np.array(
        [
            math.lgamma(j + 1) + math.lgamma(k - j + 1) - math.lgamma(k + 2)
            for j in range(k + 1)
        ]
    )


class FuzzyOperator:
    """Operator on the level-k section space, exact or float entries.

    Exact entries are a nested tuple of int/Fraction/GaussianRational in the
    monomial basis; float entries are a complex ndarray.  The plain matrix
    trace is the operator trace in every basis.
    """

    __slots__ = ("k", "entries")

    def __init__(self, k: int, entries):
        FuzzyLevel(k)
        if isinstance(entries, np.ndarray):
            arr = np.asarray(entries, dtype=complex)
            if arr.shape != (k + 1, k + 1):
                raise ValueError(f"shape {arr.shape} does not match level {k}")
            arr.setflags(write=False)
            object.__setattr__(self, "entries", arr)
        else:
            rows = tuple(tuple(row) for row in entries)
            if len(rows) != k + 1 or any(len(r) != k + 1 for r in rows):
                raise ValueError("entry matrix does not match level")
            object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("FuzzyOperator is immutable")

    # -- constructors ----------------------------------------------------
    @classmethod
    def zeros(cls, k: int) -> "FuzzyOperator":
        n = k + 1
        return cls(k, tuple(tuple(0 for _ in range(n)) for _ in range(n)))

    @classmethod
    def identity(cls, k: int) -> "FuzzyOperator":
        n = k + 1
        return cls(k, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    # -- basic views -------------------------------------------------------
    @property
    def mode(self) -> str:
        return FLOAT_MODE if isinstance(self.entries, np.ndarray) else EXACT_MODE

    @property
    def dim(self) -> int:
        return self.k + 1

    def is_zero(self) -> bool:
        if self.mode == FLOAT_MODE:
            return not np.any(self.entries)
        return all(not v for row in self.entries for v in row)

    def to_float(self) -> "FuzzyOperator":
        if self.mode == FLOAT_MODE:
            return self
        arr = np.array(
            [[scalar_to_complex(v) for v in row] for row in self.entries],
            dtype=complex,
        )
        return FuzzyOperator(self.k, arr)

    def trace(self):
        if self.mode == FLOAT_MODE:
            return complex(np.trace(self.entries))
        t = 0
        for i in range(self.dim):
            t = t + self.entries[i][i]
        return t

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other: "FuzzyOperator"):
        if self.k != other.k:
            raise LevelMismatchError(f"levels {self.k} != {other.k}")
        if self.mode == other.mode:
            return self, other
        return self.to_float(), other.to_float()

    def __add__(self, other):
        if not isinstance(other, FuzzyOperator):
            return NotImplemented
        a, b = self._coerce(other)
        if a.mode == FLOAT_MODE:
            return FuzzyOperator(a.k, a.entries + b.entries)
        return FuzzyOperator(
            a.k,
            tuple(
                tuple(x + y for x, y in zip(ra, rb))
                for ra, rb in zip(a.entries, b.entries)
            ),
        )

    def __sub__(self, other):
        if not isinstance(other, FuzzyOperator):
            return NotImplemented
        return self + (-1) * other

    def __mul__(self, s):
        if isinstance(s, FuzzyOperator):
            return NotImplemented
        if self.mode == FLOAT_MODE:
            return FuzzyOperator(self.k, self.entries * complex(s))
        if isinstance(s, (float, complex)):
            return self.to_float() * s
        return FuzzyOperator(
            self.k, tuple(tuple(v * s for v in row) for row in self.entries)
        )

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def __matmul__(self, other):
        if not isinstance(other, FuzzyOperator):
            return NotImplemented
        a, b = self._coerce(other)
        if a.mode == FLOAT_MODE:
            return FuzzyOperator(a.k, a.entries @ b.entries)
        n = a.dim
        bcols = b.entries
        rows = []
        for i in range(n):
            ra = a.entries[i]
            out_row = []
            for j in range(n):
                t = 0
                for l in range(n):
                    v = ra[l]
                    if v:
                        w = bcols[l][j]
                        if w:
                            t = t + v * w
                out_row.append(t)
            rows.append(tuple(out_row))
        return FuzzyOperator(a.k, tuple(rows))

    def commutator(self, other: "FuzzyOperator") -> "FuzzyOperator":
        return self @ other - other @ self

    # -- Gram structure ----------------------------------------------------
    def conj_entries(self) -> "FuzzyOperator":
        if self.mode == FLOAT_MODE:
            return FuzzyOperator(self.k, np.conj(self.entries))
        return FuzzyOperator(
            self.k, tuple(tuple(conj_scalar(v) for v in row) for row in self.entries)
        )

    def gram_adjoint(self) -> "FuzzyOperator":
        """Adjoint for the weighted inner product: (A*)_ij = conj(A_ji) G_j/G_i."""
        if self.mode == FLOAT_MODE:
            lg = _log_gram(self.k)
            w = np.exp(lg[None, :] - lg[:, None])
            return FuzzyOperator(self.k, np.conj(self.entries.T) * w)
        G = gram_vector(self.k)
        n = self.dim
        return FuzzyOperator(
            self.k,
            tuple(
                tuple(conj_scalar(self.entries[j][i]) * G[j] / G[i] for j in range(n))
                for i in range(n)
            ),
        )

    def transpose_gram(self) -> "FuzzyOperator":
        """G^(-1) A^T G, the conjugate of the Gram adjoint (no conjugation)."""
        if self.mode == FLOAT_MODE:
            lg = _log_gram(self.k)
            w = np.exp(lg[None, :] - lg[:, None])
            return FuzzyOperator(self.k, self.entries.T * w)
        G = gram_vector(self.k)
        n = self.dim
        return FuzzyOperator(
            self.k,
            tuple(
                tuple(self.entries[j][i] * G[j] / G[i] for j in range(n))
                for i in range(n)
            ),
        )

    def is_gram_hermitian(self) -> bool:
        if self.mode == FLOAT_MODE:
            d = self.gram_adjoint().entries - self.entries
            scale = max(1.0, float(np.abs(self.entries).max()))
            return float(np.abs(d).max()) <= 1e-10 * scale
        return self.gram_adjoint() == self

    def is_gram_antihermitian(self) -> bool:
        if self.mode == FLOAT_MODE:
            d = self.gram_adjoint().entries + self.entries
            scale = max(1.0, float(np.abs(self.entries).max()))
            return float(np.abs(d).max()) <= 1e-10 * scale
        return self.gram_adjoint() == (-1) * self

    def symmetrized(self) -> np.ndarray:
        """G^(1/2) A G^(-1/2) as a float matrix (equivalent orthonormal-basis
        matrix; Hermitian when A is Gram-Hermitian)."""
        a = self.to_float().entries
        lg = _log_gram(self.k)
        w = np.exp(0.5 * (lg[:, None] - lg[None, :]))
        return a * w

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FuzzyOperator):
            if self.k != other.k:
                return False
            if self.mode == EXACT_MODE and other.mode == EXACT_MODE:
                return self.entries == other.entries
            return bool(
                np.array_equal(self.to_float().entries, other.to_float().entries)
            )
        return NotImplemented

    def __hash__(self):
        if self.mode == FLOAT_MODE:
            return hash((self.k, self.entries.tobytes()))
        return hash((self.k, self.entries))

    def __repr__(self):
        return f"FuzzyOperator(k={self.k}, mode={self.mode})"


# ---------------------------------------------------------------------------
# su(2)
# ---------------------------------------------------------------------------

class Su2Element:
    """2x2 anti-Hermitian traceless matrix with exact entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(v for v in r) for r in rows)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("expected a 2x2 matrix")
        a, b = rows[0]
        c, d = rows[1]
        if a + d != 0:
            raise ValueError("not traceless")
        if conj_scalar(a) != -a or conj_scalar(d) != -d or conj_scalar(b) != -c:
            raise ValueError("not anti-Hermitian")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Su2Element is immutable")

    def __eq__(self, other):
        return isinstance(other, Su2Element) and other.rows == self.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Su2Element({self.rows})"


XI1 = Su2Element(((0, 1), (-1, 0)))
XI2 = Su2Element(((0, I), (I, 0)))
XI3 = Su2Element(((I, 0), (0, -I)))
COROOT_H = XI3


def _rows_of(xi) -> Tuple[Tuple[object, object], Tuple[object, object]]:
    if isinstance(xi, Su2Element):
        return xi.rows
    rows = tuple(tuple(v for v in r) for r in xi)
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("expected a 2x2 matrix")
    return rows


def su2_killing(xi, eta):
    """tr(xi @ eta), normalized to -2 on the coroot diag(i, -i)."""
    (a1, b1), (c1, d1) = _rows_of(xi)
    (a2, b2), (c2, d2) = _rows_of(eta)
    return a1 * a2 + b1 * c2 + c1 * b2 + d1 * d2


def su2_commutator(xi, eta):
    (a1, b1), (c1, d1) = _rows_of(xi)
    (a2, b2), (c2, d2) = _rows_of(eta)
    return (
        (
            a1 * a2 + b1 * c2 - (a2 * a1 + b2 * c1),
            a1 * b2 + b1 * d2 - (a2 * b1 + b2 * d1),
        ),
        (
            c1 * a2 + d1 * c2 - (c2 * a1 + d2 * c1),
            c1 * b2 + d1 * d2 - (c2 * b1 + d2 * d1),
        ),
    )


@lru_cache(maxsize=None)
def _spin_rep_cached(k: int, rows) -> FuzzyOperator:
    (a, b), (c, d) = rows
    n = k + 1
    mat = [[0] * n for _ in range(n)]
    for j in range(n):
        mat[j][j] = (k - j) * a + j * d
        if j + 1 < n:
            mat[j + 1][j] = (k - j) * c
        if j - 1 >= 0:
            mat[j - 1][j] = j * b
    return FuzzyOperator(k, tuple(tuple(row) for row in mat))


def spin_rep(k: int, xi) -> FuzzyOperator:
    """Derivation action of xi on degree-k monomials in two variables: the
    k-th symmetric power of the defining representation."""
    return _spin_rep_cached(k, _rows_of(xi))


def iota(xi) -> SpherePoly:
    """The calibrated embedding of su(2) into degree-1 sphere polynomials.

    It is the unique linear map into span{x, y, z} that is a Lie algebra
    homomorphism for the omega bracket and satisfies
    d_phi(k, iota(xi)) == spin_rep(k, xi) for all k.
    """
    (a, b), (c, d) = _rows_of(xi)
    # decompose on the basis XI1, XI2, XI3
    alpha1 = (b - c) * Fraction(1, 2)
    alpha2 = (b + c) * (-I) * Fraction(1, 2)
    alpha3 = a * (-I)
    coords = (harmonics.X, harmonics.Y, harmonics.Z)
    out = SpherePoly.zero()
    for alpha, idx in ((alpha1, 1), (alpha2, 2), (alpha3, 3)):
        if alpha:
            cs = conventions.IOTA_COEFFS[idx]
            for coeff, coord in zip(cs, coords):
                if coeff:
                    out = out + (alpha * coeff) * coord
    return out


# ---------------------------------------------------------------------------
# Toeplitz quantization via exact Beta integrals
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _beta_frac(a: int, b: int) -> Fraction:
    return Fraction(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))


def _ipow_neg(b: int):
    """(-i)**b as an exact scalar."""
    r = b % 4
    return (1, -I, -1, I)[r]


def _sigma_terms(a: int, b: int):
    """Expansion of x^a y^b into ladder words sigma_+^p sigma_-^q."""
    scale = Fraction(1, 2 ** (a + b))
    ib = _ipow_neg(b)
    for p1 in range(a + 1):
        for q1 in range(b + 1):
            coef = comb(a, p1) * comb(b, q1) * ((-1) ** (b - q1)) * ib * scale
            p = p1 + q1
            q = (a - p1) + (b - q1)
            yield p, q, coef


@lru_cache(maxsize=None)
def _monomial_symbol_exact(k: int, mono: Tuple[int, int, int]):
    """Exact Toeplitz matrix of the monomial x^a y^b z^c at level k."""
    a, b, c = mono
    n = k + 1
    G = gram_vector(k)
    mat = [[Fraction(0)] * n for _ in range(n)]
    for p, q, coef in _sigma_terms(a, b):
        two = 2 ** (p + q)
        for j in range(n):
            i = j + p - q
            if not (0 <= i < n):
                continue
            M = j + p
            N = k + p + q + c + 2
            s_total = Fraction(0)
            for s in range(c + 1):
                s_total += comb(c, s) * ((-1) ** s) * _beta_frac(M + s + 1, N - M - s - 1)
            mat[i][j] = mat[i][j] + coef * (two * s_total / G[i])
    return tuple(tuple(row) for row in mat)


@lru_cache(maxsize=None)
def _monomial_symbol_float(k: int, mono: Tuple[int, int, int]) -> np.ndarray:
    """The same closed forms evaluated in doubles via lgamma."""
    a, b, c = mono
    n = k + 1
    lg = _log_gram(k)
    mat = np.zeros((n, n), dtype=complex)
    for p, q, coef in _sigma_terms(a, b):
        cf = scalar_to_complex(coef)
        lg2 = (p + q) * math.log(2.0)
        for j in range(n):
            i = j + p - q
            if not (0 <= i < n):
                continue
            M = j + p
            N = k + p + q + c + 2
            s_total = 0.0
            for s in range(c + 1):
                lnb = (
                    math.lgamma(M + s + 1)
                    + math.lgamma(N - M - s - 1)
                    - math.lgamma(N)
                )
                s_total += comb(c, s) * ((-1) ** s) * math.exp(lnb + lg2 - lg[i])
            mat[i, j] += cf * s_total
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=512)
def toeplitz(k: int, f: SpherePoly, mode: str = EXACT_MODE) -> FuzzyOperator:
    """Compression of multiplication by f to the holomorphic sections.

    Exact mode returns Gaussian-rational entries; float mode evaluates the
    same Beta-integral closed forms in doubles.
    """
    FuzzyLevel(k)
    if f.degree() > TOEPLITZ_DEGREE_CAP:
        raise DegreeOverflowError(
            f"symbol degree {f.degree()} exceeds cap {TOEPLITZ_DEGREE_CAP}"
        )
    n = k + 1
    if mode == EXACT_MODE:
        acc = [[0] * n for _ in range(n)]
        for mono, v in f.terms.items():
            cached = _monomial_symbol_exact(k, mono)
            for i in range(n):
                row = cached[i]
                ai = acc[i]
                for j in range(max(0, i - f.degree()), min(n, i + f.degree() + 1)):
                    w = row[j]
                    if w:
                        ai[j] = ai[j] + v * w
        return FuzzyOperator(k, tuple(tuple(r) for r in acc))
    if mode == FLOAT_MODE:
        acc_f = np.zeros((n, n), dtype=complex)
        for mono, v in f.terms.items():
            acc_f += scalar_to_complex(v) * _monomial_symbol_float(k, mono)
        return FuzzyOperator(k, acc_f)
    raise ValueError(f"unknown mode {mode!r}")


def _as_harmonic(f, lmax: int) -> HarmonicCoeffs:
    if isinstance(f, HarmonicCoeffs):
        return f
    return harmonics.harmonic_decompose(f, lmax)


def d_phi(k: int, f, mode: str = EXACT_MODE, lmax: int = harmonics.DEFAULT_LMAX) -> FuzzyOperator:
    """Geometric quantization through the Laplace-corrected Toeplitz formula:
    i * sum_l (k + l(l+1)) * T_k(f_l) over harmonic components f_l.

    Equals i*k*T_k(f + laplacian(f)/(2k)); accepts a SpherePoly or its
    harmonic expansion.
    """
    hc = _as_harmonic(f, lmax)
    out = FuzzyOperator.zeros(k) if mode == EXACT_MODE else FuzzyOperator(k, np.zeros((k + 1, k + 1), dtype=complex))
    for (l, m), v in hc.coeffs.items():
        t = toeplitz(k, harmonics.solid_harmonic(l, m), mode)
        w = k + l * (l + 1)
        if mode == EXACT_MODE:
            out = out + (I * (v * w)) * t
        else:
            out = out + (1j * scalar_to_complex(v) * w) * t
    return out


def d_phi_bar(k: int, f, mode: str = EXACT_MODE, lmax: int = harmonics.DEFAULT_LMAX) -> FuzzyOperator:
    """Trace-centered quantization, landing in traceless matrices."""
    op = d_phi(k, f, mode, lmax)
    tr = op.trace()
    if mode == EXACT_MODE:
        if tr:
            op = op + (-1 * Fraction(1, k + 1) * tr) * FuzzyOperator.identity(k)
    else:
        op = op + FuzzyOperator(k, (-tr / (k + 1)) * np.eye(k + 1, dtype=complex))
    return op


# ---------------------------------------------------------------------------
# antipodal twist on operators
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def twist_matrix(k: int) -> FuzzyOperator:
    """Group-level image of [[0,-1],[1,0]] on the symmetric power: the signed
    flip e_j -> (-1)^j e_(k-j)."""
    n = k + 1
    mat = [[0] * n for _ in range(n)]
    for j in range(n):
        mat[k - j][j] = (-1) ** j
    return FuzzyOperator(k, tuple(tuple(row) for row in mat))


def _twist_inverse(k: int) -> FuzzyOperator:
    # U^2 = (-1)^k, so U^{-1} = (-1)^k U
    u = twist_matrix(k)
    return u if k % 2 == 0 else (-1) * u


def theta(A: FuzzyOperator) -> FuzzyOperator:
    """Involutive real-linear automorphism U conj(A) U^(-1); fixes the image
    of spin_rep pointwise and intertwines quantization with the antipodal
    map of the sphere."""
    u = twist_matrix(A.k)
    if A.mode == FLOAT_MODE:
        u = u.to_float()
    return u @ A.conj_entries() @ _twist_inverse(A.k)


def theta_linear(A: FuzzyOperator) -> FuzzyOperator:
    """Complex-linear extension of theta: -U (G^-1 A^T G) U^(-1).

    Agrees with theta on Gram-anti-Hermitian matrices and extends it
    complex-linearly, so it commutes with complexified Fourier coefficients.
    """
    u = twist_matrix(A.k)
    if A.mode == FLOAT_MODE:
        u = u.to_float()
    return (-1) * (u @ A.transpose_gram() @ _twist_inverse(A.k))


# ---------------------------------------------------------------------------
# norms, traces, commutator asymptotics
# ---------------------------------------------------------------------------

def op_norm(A: FuzzyOperator) -> float:
    """Spectral norm after G^(1/2) symmetrization.

    Accepts Gram-Hermitian operators and i times Gram-Hermitian ones
    (anti-Hermitian); anything else is rejected.
    """
    sym = A.symmetrized()
    scale = max(1.0, float(np.abs(sym).max()))
    herm = float(np.abs(sym - sym.conj().T).max())
    anti = float(np.abs(sym + sym.conj().T).max())
    tol = 1e-9 * scale
    if herm <= tol:
        return float(np.abs(np.linalg.eigvalsh(sym)).max())
    if anti <= tol:
        return float(np.abs(np.linalg.eigvalsh(1j * sym)).max())
    raise NotNormalizableError(
        "operator is neither Gram-Hermitian nor i * Gram-Hermitian"
    )


def defect_norm(A: FuzzyOperator) -> float:
    """Spectral norm of the symmetrized matrix (no normality requirement)."""
    return float(np.linalg.norm(A.symmetrized(), 2))


def trace_product(k: int, fs: Sequence[SpherePoly], mode: str = EXACT_MODE):
    """tr(T_k(f_1) ... T_k(f_n)); SymbolicScalar in exact mode, complex in
    float mode."""
    if not fs:
        raise ValueError("need at least one symbol")
    prod = toeplitz(k, fs[0], mode)
    for f in fs[1:]:
        prod = prod @ toeplitz(k, f, mode)
    tr = prod.trace()
    if mode == EXACT_MODE:
        return SymbolicScalar(gauss(re_part(tr), im_part(tr)), 0)
    return tr


def toeplitz_bracket(f: SpherePoly, g: SpherePoly) -> SpherePoly:
    """The bracket orientation matched by the Toeplitz commutator:
    k*[T_k(f), T_k(g)] - i*T_k(toeplitz_bracket(f,g)) -> 0 at rate O(1/k)."""
    return conventions.TOEPLITZ_BRACKET_SIGN * harmonics.omega_bracket(f, g)


def commutator_defect(k: int, f: SpherePoly, g: SpherePoly, mode: str = FLOAT_MODE) -> float:
    """Norm of k*[T_k(f), T_k(g)] - i*T_k({f,g}) with the calibrated bracket
    orientation."""
    tf = toeplitz(k, f, mode)
    tg = toeplitz(k, g, mode)
    tb = toeplitz(k, toeplitz_bracket(f, g), mode)
    if mode == EXACT_MODE:
        resid = k * tf.commutator(tg) + (-I) * tb
        return defect_norm(resid)
    resid = k * tf.commutator(tg) + (-1j) * tb
    return defect_norm(resid)


# ---------------------------------------------------------------------------
# symbol cache serialization
# ---------------------------------------------------------------------------

SYMBOL_SCHEMA = "toeplitz-symbols/1"


def symbol_cache_payload(k: int, lmax: int) -> dict:
    """Exact Toeplitz matrices of every basis harmonic with l <= lmax."""
    from .exact import scalar_to_json

    entries = []
    for l in range(lmax + 1):
        for m in range(-l, l + 1):
            op = toeplitz(k, harmonics.solid_harmonic(l, m), EXACT_MODE)
            for i, row in enumerate(op.entries):
                for j, v in enumerate(row):
                    if v:
                        entries.append(
                            {"l": l, "m": m, "i": i, "j": j, "q": scalar_to_json(v)}
                        )
    return {"schema": SYMBOL_SCHEMA, "level": k, "lmax": lmax, "entries": entries}


def load_symbol_cache(payload: dict):
    """Rebuild {(l, m): FuzzyOperator} from a payload produced above."""
    from .exact import scalar_from_json

    if payload.get("schema") != SYMBOL_SCHEMA:
        raise ValueError(f"unexpected schema {payload.get('schema')!r}")
    k = payload["level"]
    n = k + 1
    mats = {}
    for e in payload["entries"]:
        key = (e["l"], e["m"])
        if key not in mats:
            mats[key] = [[0] * n for _ in range(n)]
        mats[key][e["i"]][e["j"]] = scalar_from_json(e["q"])
    return {
        key: FuzzyOperator(k, tuple(tuple(r) for r in rows))
        for key, rows in mats.items()
    }


def operator_to_csv_rows(A: FuzzyOperator) -> List[List[str]]:
    """Float matrix as CSV rows (re, im columns interleaved are avoided:
    entries serialized as 're+imj' complex literals with 17 significant
    digits)."""
    arr = A.to_float().entries
    return [
        [format(v.real, ".17g") + ("+" if v.imag >= 0 else "-") + format(abs(v.imag), ".17g") + "j" for v in row]
        for row in arr
    ]
