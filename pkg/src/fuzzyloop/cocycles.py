"""Closed-form 2-cocycles on the loop algebras and their scaling identities.

Every cocycle here is of the shape  prefactor * int <F, G'> dt  over one
period; on finite Fourier series the t-integral collapses to the diagonal
pairing, so each evaluation is the finite sum

    value = prefactor_2pi * sum_n (-i n) <F_n, G_(-n)>

with the pairing given by the su(2) trace form, the level-k trace form, or
the sphere integral of the product.  The prefactor_2pi column:

    psi1     su(2) loops        1
    psik     level-k loops      1
    psiinf   function loops     3/pi  (so values are pi-free rationals)
    psikP    level-k, twisted   1/2
    psiinfP  function, twisted  3/(2 pi)

The twisted prefactors are half the untwisted ones, matching the halved
current on the quotient circle.  Pullback factors across the quantization
square:  embedding su(2) loops into function loops flips the sign,
eval(psiinf, .) = -eval(psi1, .); embedding through the level-k
representation multiplies by k(k+1)(k+2)/6 (half that with the twisted
prefactor); and  -6/(k(k+1)(k+2)) * psik  pulled back through trace-centered
quantization converges to psiinf, with the  -6/k^3  normalization giving the
same limit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import harmonics, loopalg, quantize
from .errors import KindMismatchError, LevelMismatchError, TwistViolationError
from .exact import (
    GaussianRational,
    I,
    SymbolicScalar,
    gauss,
    im_part,
    re_part,
)
from .harmonics import HarmonicCoeffs
from .loopalg import FUNCTION, OPERATOR, SU2, LoopElement


@dataclass(frozen=True)
class CocycleKind:
    """Tag plus (for the level cocycles) the level k."""

    tag: str
    k: int | None = None

    def __post_init__(self):
        if self.tag in ("psik", "psikP"):
            if self.k is None or self.k < 1:
                raise ValueError(f"{self.tag} requires a level k >= 1")
        elif self.k is not None:
            raise ValueError(f"{self.tag} does not carry a level")

    @property
    def twisted(self) -> bool:
        return self.tag.endswith("P")

    @property
    def loop_kind(self) -> str:
        return {"psi1": SU2, "psik": OPERATOR, "psikP": OPERATOR,
                "psiinf": FUNCTION, "psiinfP": FUNCTION}[self.tag]


def psi1() -> CocycleKind:
    return CocycleKind("psi1")


def psik(k: int) -> CocycleKind:
    return CocycleKind("psik", k)


def psiinf() -> CocycleKind:
    return CocycleKind("psiinf")


def psikP(k: int) -> CocycleKind:
    return CocycleKind("psikP", k)


def psiinfP() -> CocycleKind:
    return CocycleKind("psiinfP")


# ---------------------------------------------------------------------------
# pairings and the closed form
# ---------------------------------------------------------------------------

def _pair_su2(c1, c2):
    return quantize.su2_killing(c1, c2)


def _pair_operator(c1: quantize.FuzzyOperator, c2: quantize.FuzzyOperator):
    return (c1 @ c2).trace()


def _pair_function(c1: HarmonicCoeffs, c2: HarmonicCoeffs) -> SymbolicScalar:
    """Bilinear (not sesquilinear) sphere-integral pairing via the diagonal
    basis Gram matrix."""
    total = SymbolicScalar(0, 1)
    for (l, m), v1 in c1.coeffs.items():
        v2 = c2.get(l, m)
        if v2:
            total = total + (v1 * v2) * harmonics.gram_value(l, m)
    return total


def _closed_form(kind_tag: str, F: LoopElement, G: LoopElement):
    """sum_n (-i n) <F_n, G_(-n)> with the tag's pairing, times the tag's
    2*pi-normalized prefactor.  Exact unless operator coefficients are float.
    """
    loop_kind = {"psi1": SU2, "psik": OPERATOR, "psikP": OPERATOR,
                 "psiinf": FUNCTION, "psiinfP": FUNCTION}[kind_tag]
    if F.kind != loop_kind or G.kind != loop_kind:
        raise KindMismatchError(
            f"{kind_tag} expects {loop_kind} loops, got {F.kind}/{G.kind}"
        )
    float_mode = loop_kind == OPERATOR and any(
        c.mode == quantize.FLOAT_MODE for c in list(F.coeffs.values()) + list(G.coeffs.values())
    )
    if float_mode:
        total_f = 0j
        for n, c1 in F.coeffs.items():
            if n == 0:
                continue
            c2 = G.coeffs.get(-n)
            if c2 is None:
                continue
            total_f += (-1j * n) * complex(np.trace(c1.to_float().entries @ c2.to_float().entries))
        half = 0.5 if kind_tag.endswith("P") else 1.0
        return half * total_f

    total = None
    for n, c1 in F.coeffs.items():
        if n == 0:
            continue
        c2 = G.coeffs.get(-n)
        if c2 is None:
            continue
        if loop_kind == SU2:
            term = SymbolicScalar((-I * n) * _pair_su2(c1, c2), 0)
        elif loop_kind == OPERATOR:
            term = SymbolicScalar((-I * n) * _pair_operator(c1, c2), 0)
        else:
            p = _pair_function(c1, c2)
            term = SymbolicScalar((-I * n) * p.coeff, p.pi_power)
        total = term if total is None else total + term
    if total is None:
        total = SymbolicScalar.zero()
    if loop_kind == FUNCTION:
        pref = SymbolicScalar(3, -1) if kind_tag == "psiinf" else SymbolicScalar(Fraction(3, 2), -1)
        total = pref * total
    elif kind_tag == "psikP":
        total = total * Fraction(1, 2)
    return total


def eval_cocycle(kind: CocycleKind, F: LoopElement, G: LoopElement):
    """Value of the 2-cocycle; SymbolicScalar with pi power 0 when exact,
    complex in the float operator path.

    Twisted kinds require twist-flagged loops.
    """
    if kind.twisted and not (F.twisted and G.twisted):
        raise TwistViolationError(f"{kind.tag} requires twist-flagged loops")
    if kind.tag in ("psik", "psikP") and (F.k != kind.k or G.k != kind.k):
        raise LevelMismatchError(
            f"{kind.tag} at level {kind.k} applied to loops at {F.k}/{G.k}"
        )
    return _closed_form(kind.tag, F, G)


# ---------------------------------------------------------------------------
# spanning-set pullback identities
# ---------------------------------------------------------------------------

def _su2_spanning_pairs(nmax: int = 2):
    """Complex Fourier pairs (e^(int) xi_a, e^(-int) xi_b); by bilinearity
    these span all pairs of su(2) loops of span <= nmax."""
    basis = (quantize.XI1, quantize.XI2, quantize.XI3)
    for n in range(1, nmax + 1):
        for xa in basis:
            for xb in basis:
                yield (
                    loopalg.fourier_mode(n, xa, SU2),
                    loopalg.fourier_mode(-n, xb, SU2),
                    (n, xa, xb),
                )


def pullback_check_a(nmax: int = 2) -> bool:
    """Exact identity eval(psiinf, L-iota F, L-iota G) = -eval(psi1, F, G)
    on a spanning set of su(2) Fourier loops."""
    for Xi, Eta, _tag in _su2_spanning_pairs(nmax):
        lhs = _closed_form("psiinf", loopalg.loop_iota(FUNCTION, Xi), loopalg.loop_iota(FUNCTION, Eta))
        rhs = _closed_form("psi1", Xi, Eta)
        if lhs != -rhs:
            return False
    return True


def _ratio_on_spanning(tag_num: str, k: int, nmax: int = 2) -> Fraction:
    """Exact r with eval(tag_num at level k, L-pi_k .) = r * eval(psi1, .)."""
    ratio = None
    for Xi, Eta, tag in _su2_spanning_pairs(nmax):
        num = _closed_form(tag_num, loopalg.loop_iota(k, Xi), loopalg.loop_iota(k, Eta))
        den = _closed_form("psi1", Xi, Eta)
        if den.is_zero:
            if not num.is_zero:
                raise AssertionError(f"pullback not proportional at {tag}")
            continue
        r = num / den
        if not r.is_real or r.pi_power != 0:
            raise AssertionError(f"non-rational pullback ratio at {tag}")
        rv = r.rational()
        if ratio is None:
            ratio = rv
        elif ratio != rv:
            raise AssertionError(f"pullback ratio not uniform at {tag}")
    if ratio is None:
        raise AssertionError("spanning set produced no nonzero pairing")
    return ratio


def pullback_check_b(k: int, nmax: int = 2) -> Fraction:
    """The exact factor r with (L pi_k)* psik = r * psi1; equals
    k(k+1)(k+2)/6."""
    return _ratio_on_spanning("psik", k, nmax)


def twisted_check_a(nmax: int = 2) -> bool:
    """Twisted pullback: eval(psiinfP, L-iota .) = -(1/2) eval(psi1, .) on
    the su(2) spanning set (su(2) loops are fixed by the twist involution,
    evaluated here with the twisted prefactor)."""
    for Xi, Eta, _tag in _su2_spanning_pairs(nmax):
        lhs = _closed_form("psiinfP", loopalg.loop_iota(FUNCTION, Xi), loopalg.loop_iota(FUNCTION, Eta))
        rhs = _closed_form("psi1", Xi, Eta)
        if lhs * 2 != -rhs:
            return False
    return True


def twisted_check_b(k: int, nmax: int = 2) -> Fraction:
    """The exact factor with the twisted level-k prefactor; equals
    k(k+1)(k+2)/12."""
    return _ratio_on_spanning("psikP", k, nmax)


# ---------------------------------------------------------------------------
# the scaling-limit sweep
# ---------------------------------------------------------------------------

@dataclass
class ConvergenceRecord:
    """One level of a convergence sweep toward the function-loop cocycle.

    ``value`` uses the -6/k^3 normalization, ``alt_value`` the exact
    -6/(k(k+1)(k+2)) one.
    """

    k: int
    value: float
    alt_value: float
    limit: float
    deviation: float
    alt_deviation: float
    seconds: float = 0.0
    fitted_rate: float | None = None

    @staticmethod
    def csv_header() -> List[str]:
        return ["k", "normalization", "value", "limit", "deviation", "seconds"]

    def csv_rows(self, fmt) -> List[List[str]]:
        return [
            [str(self.k), "6_over_k3", fmt(self.value), fmt(self.limit), fmt(self.deviation), fmt(self.seconds)],
            [str(self.k), "6_over_k_k1_k2", fmt(self.alt_value), fmt(self.limit), fmt(self.alt_deviation), fmt(self.seconds)],
        ]


def fit_loglog_slope(ks: Sequence[int], devs: Sequence[float], floor: float = 1e-14) -> float | None:
    """Least-squares slope of log(dev) against log(k), ignoring exact zeros."""
    xs, ys = [], []
    for k, d in zip(ks, devs):
        if d > floor:
            xs.append(np.log(float(k)))
            ys.append(np.log(float(d)))
    if len(xs) < 2:
        return None
    slope = np.polyfit(np.array(xs), np.array(ys), 1)[0]
    return float(slope)


def limit_sweep(
    F: LoopElement,
    G: LoopElement,
    k_list: Sequence[int],
    *,
    twisted: bool | None = None,
    exact_k_max: int = 12,
    cross_check_tol: float = 1e-10,
    timing: bool = False,
) -> List[ConvergenceRecord]:
    """Pull the level-k cocycle back through loop quantization and compare
    with the function-loop cocycle.

    For each k the value is -(6/k^3) * psik(quantized F, quantized G) (float
    path above ``exact_k_max``, exact below, with an exact/float cross-check
    at the boundary), the alternative normalization -6/(k(k+1)(k+2)) is
    recorded alongside, and the deviations from the exact limit are fitted
    with a log-log slope shared across the sweep.
    """
    if F.kind != FUNCTION or G.kind != FUNCTION:
        raise KindMismatchError("limit_sweep expects function loops")
    if twisted is None:
        twisted = F.twisted and G.twisted
    if twisted and not (F.twisted and G.twisted):
        raise TwistViolationError("twisted sweep requires twist-flagged loops")
    inf_tag = "psiinfP" if twisted else "psiinf"
    k_tag = "psikP" if twisted else "psik"
    limit_exact = _closed_form(inf_tag, F, G)
    limit = limit_exact.to_float()
    records: List[ConvergenceRecord] = []
    for k in k_list:
        t0 = time.perf_counter()
        use_exact = k <= exact_k_max
        mode = quantize.EXACT_MODE if use_exact else quantize.FLOAT_MODE
        Xq = loopalg.loop_quantize(k, F, mode=mode)
        Yq = loopalg.loop_quantize(k, G, mode=mode)
        raw = _closed_form(k_tag, Xq, Yq)
        if use_exact:
            raw_val = raw.to_complex()
            # cross-check the float path against the exact one
            Xf = loopalg.loop_quantize(k, F, mode=quantize.FLOAT_MODE)
            Yf = loopalg.loop_quantize(k, G, mode=quantize.FLOAT_MODE)
            raw_float = complex(_closed_form(k_tag, Xf, Yf))
            if abs(raw_float - raw_val) > cross_check_tol * max(1.0, abs(raw_val)):
                raise AssertionError(
                    f"exact/float cocycle mismatch at k={k}: {raw_val} vs {raw_float}"
                )
        else:
            raw_val = complex(raw)
        if abs(raw_val.imag) > 1e-9 * max(1.0, abs(raw_val)):
            raise AssertionError(f"cocycle value not real at k={k}: {raw_val}")
        value = -6.0 / k**3 * raw_val.real
        alt_value = -6.0 / (k * (k + 1) * (k + 2)) * raw_val.real
        dt = time.perf_counter() - t0
        records.append(
            ConvergenceRecord(
                k=k,
                value=value,
                alt_value=alt_value,
                limit=limit,
                deviation=abs(value - limit),
                alt_deviation=abs(alt_value - limit),
                seconds=dt if timing else 0.0,
            )
        )
    slope = fit_loglog_slope([r.k for r in records], [r.deviation for r in records])
    for r in records:
        r.fitted_rate = slope
    return records


def sweep_limit_exact(F: LoopElement, G: LoopElement, twisted: bool | None = None) -> SymbolicScalar:
    """The exact limit value eval(psiinf or psiinfP, F, G)."""
    if twisted is None:
        twisted = F.twisted and G.twisted
    return _closed_form("psiinfP" if twisted else "psiinf", F, G)
