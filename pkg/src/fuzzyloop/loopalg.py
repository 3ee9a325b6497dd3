"""Finite Fourier-series loops valued in su(2), in sphere polynomials, or in
level-k operators.

A loop is a finite sum F(t) = sum_n e^(int) c_n over n in [-N, N].  Function
coefficients are harmonic expansions with complexified entries and zero mean;
operator coefficients are complexified level-k matrices.  Reality of a loop
means the pointwise values lie in the real form (real functions,
anti-Hermitian matrices).  The antipodal twist is realized inside ordinary
period-2*pi loops as a parity constraint: function coefficients supported on
n + l odd, operator coefficients satisfying theta_linear(c_n) = (-1)^n c_n.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Tuple

import numpy as np

from . import harmonics, quantize
from .errors import (
    DegreeOverflowError,
    KindMismatchError,
    LevelMismatchError,
    RealityViolationError,
    SpanOverflowError,
    TwistViolationError,
)
from .exact import I, conj_scalar, gauss, scalar_to_complex
from .harmonics import HarmonicCoeffs, PoissonTable
from .quantize import FuzzyOperator

DEFAULT_SPAN_CAP = 8

FUNCTION = "function"
OPERATOR = "operator"
SU2 = "su2"


def _conj_rows(rows):
    return tuple(tuple(conj_scalar(v) for v in r) for r in rows)


def _rows_gram_adjoint(rows):
    # 2x2 identity Gram: plain conjugate transpose
    return (
        (conj_scalar(rows[0][0]), conj_scalar(rows[1][0])),
        (conj_scalar(rows[0][1]), conj_scalar(rows[1][1])),
    )


class LoopElement:
    """Finite Fourier loop with coefficients in one of the three carriers."""

    __slots__ = ("kind", "k", "coeffs", "twisted")

    def __init__(
        self,
        kind: str,
        coeffs: Mapping[int, object],
        *,
        k: int | None = None,
        twisted: bool = False,
        span_cap: int = DEFAULT_SPAN_CAP,
    ):
        if kind not in (FUNCTION, OPERATOR, SU2):
            raise KindMismatchError(f"unknown loop kind {kind!r}")
        clean: Dict[int, object] = {}
        for n, c in coeffs.items():
            if _is_zero_coeff(kind, c):
                continue
            clean[int(n)] = c
        span = max((abs(n) for n in clean), default=0)
        if span > span_cap:
            raise SpanOverflowError(f"Fourier span {span} exceeds cap {span_cap}")
        if kind == OPERATOR:
            levels = {c.k for c in clean.values()}
            if k is None and levels:
                k = levels.pop() if len(levels) == 1 else None
            if k is None or any(c.k != k for c in clean.values()):
                raise LevelMismatchError("operator loop with mixed or missing level")
        elif k is not None:
            raise LevelMismatchError(f"{kind} loop does not carry a level")
        if kind == FUNCTION:
            for n, c in clean.items():
                if c.get(0, 0):
                    raise RealityViolationError(
                        f"function coefficient at n={n} has a nonzero mean"
                    )
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "coeffs", dict(clean))
        object.__setattr__(self, "twisted", bool(twisted))
        if twisted:
            self.check_twist()

    def __setattr__(self, name, value):
        raise AttributeError("LoopElement is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def function(cls, coeffs, *, lmax=harmonics.DEFAULT_LMAX, twisted=False, span_cap=DEFAULT_SPAN_CAP):
        """Function-valued loop; coefficients may be HarmonicCoeffs or SpherePoly."""
        conv = {}
        for n, c in coeffs.items():
            if isinstance(c, harmonics.SpherePoly):
                c = harmonics.harmonic_decompose(c, lmax)
            conv[n] = c
        return cls(FUNCTION, conv, twisted=twisted, span_cap=span_cap)

    @classmethod
    def su2(cls, coeffs, *, span_cap=DEFAULT_SPAN_CAP):
        conv = {n: quantize._rows_of(c) for n, c in coeffs.items()}
        return cls(SU2, conv, span_cap=span_cap)

    @classmethod
    def operator(cls, coeffs, *, k=None, twisted=False, span_cap=DEFAULT_SPAN_CAP):
        return cls(OPERATOR, coeffs, k=k, twisted=twisted, span_cap=span_cap)

    @classmethod
    def zero(cls, kind: str = FUNCTION, *, k: int | None = None):
        if kind == OPERATOR:
            if k is None:
                raise LevelMismatchError("zero operator loop needs a level")
            return cls(OPERATOR, {0: FuzzyOperator.zeros(k)}, k=k)
        return cls(kind, {})

    # -- views ----------------------------------------------------------------
    @property
    def span(self) -> int:
        return max((abs(n) for n in self.coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, n: int):
        c = self.coeffs.get(n)
        if c is not None:
            return c
        if self.kind == FUNCTION:
            return HarmonicCoeffs(harmonics.DEFAULT_LMAX, {})
        if self.kind == SU2:
            return ((0, 0), (0, 0))
        return FuzzyOperator.zeros(self.k)

    def modes(self):
        return sorted(self.coeffs)

    # -- validators -------------------------------------------------------------
    def is_real(self) -> bool:
        """Pointwise reality: c_(-n) is the conjugated-carrier image of c_n."""
        for n, c in self.coeffs.items():
            other = self.coeffs.get(-n)
            if self.kind == FUNCTION:
                expect = c.conjugate()
                if other is None or other != expect:
                    return False
            elif self.kind == SU2:
                adj = _rows_gram_adjoint(c)
                expect = tuple(tuple(-v for v in r) for r in adj)
                if other is None or tuple(tuple(x for x in r) for r in other) != expect:
                    return False
            else:
                expect = (-1) * c.gram_adjoint()
                if other is None or other != expect:
                    return False
        return True

    def check_real(self) -> None:
        if not self.is_real():
            raise RealityViolationError("loop is not real")

    def check_twist(self) -> None:
        """Antipodal parity: function support on n + l odd; operator
        coefficients with theta_linear(c_n) = (-1)^n c_n."""
        if self.kind == SU2:
            return  # su(2) is fixed by the twist involution
        for n, c in self.coeffs.items():
            if self.kind == FUNCTION:
                for (l, _m), v in c.coeffs.items():
                    if v and (n + l) % 2 == 0:
                        raise TwistViolationError(
                            f"mode n={n} carries degree l={l}: n+l must be odd"
                        )
            else:
                lhs = quantize.theta_linear(c)
                rhs = ((-1) ** n) * c
                if lhs.mode == "float" or rhs.mode == "float":
                    d = np.abs(lhs.to_float().entries - rhs.to_float().entries).max()
                    ok = d <= 1e-10 * max(1.0, np.abs(rhs.to_float().entries).max())
                else:
                    ok = lhs == rhs
                if not ok:
                    raise TwistViolationError(f"operator mode n={n} is not twist-compatible")

    # -- algebra ------------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        if other.kind != self.kind:
            raise KindMismatchError(f"{self.kind} + {other.kind}")
        if self.kind == OPERATOR and self.k != other.k:
            raise LevelMismatchError(f"levels {self.k} != {other.k}")
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            cur = out.get(n)
            out[n] = c if cur is None else _coeff_add(self.kind, cur, c)
        return LoopElement(
            self.kind,
            out,
            k=self.k,
            twisted=self.twisted and other.twisted,
            span_cap=max(self.span, other.span, DEFAULT_SPAN_CAP),
        )

    def scale(self, s) -> "LoopElement":
        return LoopElement(
            self.kind,
            {n: _coeff_scale(self.kind, c, s) for n, c in self.coeffs.items()},
            k=self.k,
            twisted=self.twisted,
            span_cap=max(self.span, DEFAULT_SPAN_CAP),
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def d_dt(self) -> "LoopElement":
        """Derivative in the loop parameter: the Fourier multiplier i*n.

        This is the action of the rotation generator of the circle on loops.
        """
        return LoopElement(
            self.kind,
            {n: _coeff_scale(self.kind, c, I * n) for n, c in self.coeffs.items() if n},
            k=self.k,
            twisted=self.twisted,
            span_cap=max(self.span, DEFAULT_SPAN_CAP),
        )

    def value_at(self, t: float):
        """Float evaluation of the loop at parameter t (oracle use)."""
        if self.kind == FUNCTION:
            total: Dict[tuple, complex] = {}
            for n, c in self.coeffs.items():
                phase = complex(np.exp(1j * n * t))
                for key, v in c.coeffs.items():
                    total[key] = total.get(key, 0j) + phase * scalar_to_complex(v)
            return total
        if self.kind == SU2:
            acc = np.zeros((2, 2), dtype=complex)
            for n, c in self.coeffs.items():
                acc += np.exp(1j * n * t) * np.array(
                    [[scalar_to_complex(v) for v in r] for r in c]
                )
            return acc
        acc = np.zeros((self.k + 1, self.k + 1), dtype=complex)
        for n, c in self.coeffs.items():
            acc += np.exp(1j * n * t) * c.to_float().entries
        return acc

    def __eq__(self, other):
        if isinstance(other, LoopElement):
            return (
                self.kind == other.kind
                and self.k == other.k
                and self.coeffs == other.coeffs
            )
        return NotImplemented

    def __repr__(self):
        lvl = f", k={self.k}" if self.k is not None else ""
        tw = ", twisted" if self.twisted else ""
        return f"LoopElement({self.kind}{lvl}{tw}, modes={self.modes()})"


def _is_zero_coeff(kind: str, c) -> bool:
    if kind == FUNCTION:
        return c.is_zero
    if kind == SU2:
        return all(not v for r in c for v in r)
    return c.is_zero()


def _coeff_add(kind: str, c1, c2):
    if kind == SU2:
        return tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(c1, c2))
    return c1 + c2


def _coeff_scale(kind: str, c, s):
    if kind == FUNCTION:
        return c.scale(s)
    if kind == SU2:
        return tuple(tuple(s * v for v in r) for r in c)
    return s * c


# ---------------------------------------------------------------------------
# loop operations
# ---------------------------------------------------------------------------

def loop_bracket(
    F: LoopElement,
    G: LoopElement,
    table: PoissonTable | None = None,
    span_cap: int = DEFAULT_SPAN_CAP,
) -> LoopElement:
    """Pointwise bracket [F,G](t) = {F(t), G(t)} as Fourier convolution.

    Function loops use the Poisson structure constants; su(2) and operator
    loops use the matrix commutator.  Preserves reality and the twist
    constraint.
    """
    if F.kind != G.kind:
        raise KindMismatchError(f"bracket of {F.kind} with {G.kind}")
    if F.kind == OPERATOR and F.k != G.k:
        raise LevelMismatchError(f"levels {F.k} != {G.k}")
    out: Dict[int, object] = {}
    if F.kind == FUNCTION:
        ambient = max(
            [c.lmax for c in F.coeffs.values()]
            + [c.lmax for c in G.coeffs.values()]
            + [1]
        )
        sup_f = {l for c in F.coeffs.values() for l in c.l_support()}
        sup_g = {l for c in G.coeffs.values() for l in c.l_support()}
        needed = max(
            (l1 + l2 - 1 for l1 in sup_f for l2 in sup_g), default=1
        )
        if needed > ambient:
            raise DegreeOverflowError(
                f"bracket degree {needed} exceeds truncation lmax={ambient}"
            )
        if table is None:
            table = harmonics.poisson_table(needed)
    for n1, c1 in F.coeffs.items():
        for n2, c2 in G.coeffs.items():
            n = n1 + n2
            if F.kind == FUNCTION:
                term = table.bracket_coeffs(c1, c2)
                if term.is_zero:
                    continue
            elif F.kind == SU2:
                term = quantize.su2_commutator(c1, c2)
            else:
                term = c1.commutator(c2)
            cur = out.get(n)
            out[n] = term if cur is None else _coeff_add(F.kind, cur, term)
    return LoopElement(
        F.kind,
        out,
        k=F.k,
        twisted=F.twisted and G.twisted,
        span_cap=span_cap,
    )


def loop_quantize(k: int, F: LoopElement, mode: str = quantize.EXACT_MODE) -> LoopElement:
    """Coefficientwise trace-centered quantization of a function loop.

    Complex-linear in the coefficients; maps the antipodal parity constraint
    to the operator twist constraint.
    """
    if F.kind != FUNCTION:
        raise KindMismatchError("loop_quantize expects a function loop")
    coeffs = {
        n: quantize.d_phi_bar(k, c, mode=mode, lmax=c.lmax) for n, c in F.coeffs.items()
    }
    return LoopElement.operator(
        coeffs, k=k, twisted=F.twisted, span_cap=max(F.span, DEFAULT_SPAN_CAP)
    )


def loop_iota(target, Xi: LoopElement) -> LoopElement:
    """Coefficientwise embedding of an su(2) loop.

    ``target='function'`` applies the calibrated degree-1 embedding;
    an integer target applies the symmetric-power representation at that
    level.  Both are Lie algebra homomorphisms.
    """
    if Xi.kind != SU2:
        raise KindMismatchError("loop_iota expects an su(2) loop")
    if target == FUNCTION:
        coeffs = {
            n: harmonics.harmonic_decompose(quantize.iota(c), 1)
            for n, c in Xi.coeffs.items()
        }
        return LoopElement.function(coeffs, span_cap=max(Xi.span, DEFAULT_SPAN_CAP))
    k = int(target)
    coeffs = {n: quantize.spin_rep(k, c) for n, c in Xi.coeffs.items()}
    return LoopElement.operator(coeffs, k=k, span_cap=max(Xi.span, DEFAULT_SPAN_CAP))


# ---------------------------------------------------------------------------
# common loop constructors
# ---------------------------------------------------------------------------

def cos_loop(n: int, payload, kind: str = FUNCTION, **kw) -> LoopElement:
    """cos(n t) * payload as a real loop."""
    half = Fraction(1, 2)
    return _two_mode(n, payload, half, half, kind, **kw)


def sin_loop(n: int, payload, kind: str = FUNCTION, **kw) -> LoopElement:
    """sin(n t) * payload as a real loop."""
    return _two_mode(n, payload, -I * Fraction(1, 2), I * Fraction(1, 2), kind, **kw)


def _two_mode(n, payload, c_plus, c_minus, kind, *, lmax=harmonics.DEFAULT_LMAX, twisted=False):
    if kind == FUNCTION:
        if isinstance(payload, harmonics.SpherePoly):
            payload = harmonics.harmonic_decompose(payload, lmax)
        return LoopElement.function(
            {n: payload.scale(c_plus), -n: payload.scale(c_minus)}, twisted=twisted
        )
    if kind == SU2:
        rows = quantize._rows_of(payload)
        return LoopElement.su2(
            {
                n: tuple(tuple(c_plus * v for v in r) for r in rows),
                -n: tuple(tuple(c_minus * v for v in r) for r in rows),
            }
        )
    return LoopElement.operator(
        {n: c_plus * payload, -n: c_minus * payload}, twisted=twisted
    )


def fourier_mode(n: int, payload, kind: str = FUNCTION, *, lmax=harmonics.DEFAULT_LMAX, twisted=False) -> LoopElement:
    """The single complex mode e^(int) * payload."""
    if kind == FUNCTION:
        if isinstance(payload, harmonics.SpherePoly):
            payload = harmonics.harmonic_decompose(payload, lmax)
        return LoopElement.function({n: payload}, twisted=twisted)
    if kind == SU2:
        return LoopElement.su2({n: payload})
    return LoopElement.operator({n: payload}, twisted=twisted)


def loop_from_literals(
    literals,
    *,
    lmax: int = harmonics.DEFAULT_LMAX,
    twisted: bool = False,
    require_real: bool = True,
) -> LoopElement:
    """Function loop from literal entries {n, l, m, re, im}.

    ``re``/``im`` accept integers or exact "p/q" strings.  The loop must be
    real unless ``require_real`` is disabled.
    """
    by_mode: Dict[int, Dict[tuple, object]] = {}
    for entry in literals:
        n = int(entry["n"])
        key = (int(entry["l"]), int(entry["m"]))
        v = gauss(Fraction(str(entry.get("re", 0))), Fraction(str(entry.get("im", 0))))
        if not v:
            continue
        slot = by_mode.setdefault(n, {})
        slot[key] = slot.get(key, 0) + v
    coeffs = {n: HarmonicCoeffs(lmax, c) for n, c in by_mode.items()}
    loop = LoopElement.function(coeffs, twisted=twisted)
    if require_real:
        loop.check_real()
    return loop
