"""Operator quantization: Toeplitz matrices, the quantization diagram,
symmetric powers, the twist involution, norms and asymptotics."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from fuzzyloop import harmonics as H
from fuzzyloop import quantize as Q
from fuzzyloop.errors import (
    DegreeOverflowError,
    LevelMismatchError,
    NotNormalizableError,
)
from fuzzyloop.exact import I, SymbolicScalar, gauss, scalar_to_complex
from fuzzyloop.harmonics import ONE, X, Y, Z

from oracles import poly_eval_grid, toeplitz_entry_quad


def rand_harmonic(rng, lmax=3, terms=4):
    out = H.SpherePoly.zero()
    for _ in range(terms):
        l = rng.randint(1, lmax)
        m = rng.randint(-l, l)
        out = out + Fraction(rng.randint(-3, 3), rng.randint(1, 2)) * H.solid_harmonic(l, m)
    return out


# ---------------------------------------------------------------------------
# Gram structure and Toeplitz anchors
# ---------------------------------------------------------------------------

def test_gram_vector_values():
    for k in range(1, 13):
        g = Q.gram_vector(k)
        assert g[0] == Fraction(1, k + 1)
        assert g == tuple(reversed(g))


def test_toeplitz_of_one_is_identity():
    for k in (1, 2, 5, 12):
        assert Q.toeplitz(k, ONE) == Q.FuzzyOperator.identity(k)


def test_toeplitz_z_diagonal():
    t = Q.toeplitz(2, Z)
    assert [t.entries[j][j] for j in range(3)] == [Fraction(1, 2), 0, Fraction(-1, 2)]
    for k in (3, 7):
        t = Q.toeplitz(k, Z)
        for j in range(k + 1):
            assert t.entries[j][j] == Fraction(k - 2 * j, k + 2)


def test_toeplitz_entries_against_chart_quadrature():
    # the Beta-integral closed forms against direct numerical chart integrals
    for k in (2, 3):
        G = Q.gram_vector(k)
        for f in (Z, X, X + I * Y, H.solid_harmonic(2, 1)):
            t = Q.toeplitz(k, f)
            for i in range(k + 1):
                for j in range(k + 1):
                    want = toeplitz_entry_quad(k, f, i, j) / float(G[i])
                    got = scalar_to_complex(t.entries[i][j])
                    assert abs(got - want) < 1e-9, (k, i, j)


def test_toeplitz_selection_rule():
    f = H.solid_harmonic(2, 1)
    t = Q.toeplitz(6, f)
    for i in range(7):
        for j in range(7):
            if abs(i - j) > 2:
                assert not t.entries[i][j]


def test_toeplitz_gram_hermitian_for_real_symbols():
    rng = random.Random(2)
    for k in (2, 5):
        f = rand_harmonic(rng)
        assert Q.toeplitz(k, f).is_gram_hermitian()


def test_toeplitz_degree_cap():
    big = (X + I * Y) ** (Q.TOEPLITZ_DEGREE_CAP + 1)
    with pytest.raises(DegreeOverflowError):
        Q.toeplitz(4, big)


def test_exact_float_agreement():
    rng = random.Random(4)
    for k in (5, 20, 40):
        f = rand_harmonic(rng, lmax=4)
        ex = Q.toeplitz(k, f).to_float().entries
        fl = Q.toeplitz(k, f, mode=Q.FLOAT_MODE).entries
        scale = max(1.0, np.abs(ex).max())
        assert np.abs(ex - fl).max() <= 1e-12 * scale


def test_toeplitz_positivity():
    # compressions of nonnegative multipliers stay nonnegative
    for f in (ONE + Z, X * X, (ONE + X) * (ONE + X)):
        for k in (4, 16):
            sym = Q.toeplitz(k, f, mode=Q.FLOAT_MODE).symmetrized()
            eigs = np.linalg.eigvalsh(sym)
            assert eigs.min() >= -1e-10


# ---------------------------------------------------------------------------
# symmetric powers
# ---------------------------------------------------------------------------

def test_spin_rep_defining():
    for xi in (Q.XI1, Q.XI2, Q.XI3):
        assert Q.spin_rep(1, xi).entries == tuple(tuple(r) for r in xi.rows)


def test_spin_rep_coroot_diagonal():
    for k in (2, 5, 9):
        sr = Q.spin_rep(k, Q.COROOT_H)
        for j in range(k + 1):
            assert sr.entries[j][j] == I * (k - 2 * j)


def test_spin_rep_coroot_trace_square():
    for k in range(1, 13):
        sr = Q.spin_rep(k, Q.COROOT_H)
        assert (sr @ sr).trace() == -Fraction(k * (k + 1) * (k + 2), 3)


def test_spin_rep_is_homomorphism():
    pairs = [(Q.XI1, Q.XI2), (Q.XI2, Q.XI3), (Q.XI3, Q.XI1)]
    for k in (2, 4, 7):
        for a, b in pairs:
            lhs = Q.spin_rep(k, a).commutator(Q.spin_rep(k, b))
            rhs = Q.spin_rep(k, Q.su2_commutator(a, b))
            assert lhs == rhs


def test_spin_rep_lands_in_gram_antihermitian():
    for k in (2, 5):
        for xi in (Q.XI1, Q.XI2, Q.XI3):
            assert Q.spin_rep(k, xi).is_gram_antihermitian()
            assert Q.spin_rep(k, xi).trace() == 0


def test_su2_element_validation():
    with pytest.raises(ValueError):
        Q.Su2Element(((1, 0), (0, -1)))  # Hermitian, not anti
    with pytest.raises(ValueError):
        Q.Su2Element(((I, 0), (0, I)))  # not traceless


# ---------------------------------------------------------------------------
# the quantization square
# ---------------------------------------------------------------------------

def test_diagram_exact_all_levels():
    for k in range(1, 13):
        for xi in (Q.XI1, Q.XI2, Q.XI3):
            assert Q.d_phi(k, Q.iota(xi), lmax=1) == Q.spin_rep(k, xi)


def test_iota_values():
    assert Q.iota(Q.COROOT_H) == Z
    assert Q.iota(Q.XI2) == X
    assert Q.iota(Q.XI1) == -1 * Y


def test_iota_is_homomorphism():
    pairs = [(Q.XI1, Q.XI2), (Q.XI2, Q.XI3), (Q.XI3, Q.XI1), (Q.XI1, Q.XI3)]
    for a, b in pairs:
        lhs = H.omega_bracket(Q.iota(a), Q.iota(b))
        rows = Q.su2_commutator(a, b)
        assert lhs == Q.iota(rows)


def test_iota_killing_pullback():
    v = H.kappa_infty(Q.iota(Q.COROOT_H), Q.iota(Q.COROOT_H))
    assert v == SymbolicScalar(1, -1)


def test_d_phi_of_constant():
    for k in (1, 4):
        assert Q.d_phi(k, ONE, lmax=0) == (I * k) * Q.FuzzyOperator.identity(k)


def test_d_phi_spectrum_generator():
    op = Q.d_phi(2, Z, lmax=1)
    assert [op.entries[j][j] for j in range(3)] == [2 * I, 0, -2 * I]


def test_d_phi_matches_laplace_corrected_toeplitz():
    rng = random.Random(6)
    for k in (2, 5):
        f = rand_harmonic(rng)
        lhs = Q.d_phi(k, f, lmax=3)
        corrected = f + Fraction(1, 2 * k) * H.laplacian(f, 3)
        rhs = (I * k) * Q.toeplitz(k, corrected)
        assert lhs == rhs


def test_d_phi_bar_traceless_and_su2_fixed():
    rng = random.Random(7)
    for k in (2, 6):
        f = rand_harmonic(rng)
        op = Q.d_phi_bar(k, f, lmax=3)
        assert op.trace() == 0
        assert op.is_gram_antihermitian()
    for k in (2, 6):
        for xi in (Q.XI1, Q.XI3):
            assert Q.d_phi_bar(k, Q.iota(xi), lmax=1) == Q.spin_rep(k, xi)
    assert Q.d_phi_bar(3, ONE, lmax=0).is_zero()


def test_equivariance_exact():
    rng = random.Random(8)
    for k in (2, 4):
        for xi in (Q.XI1, Q.XI2, Q.XI3):
            f = rand_harmonic(rng, lmax=2)
            lhs = Q.spin_rep(k, xi).commutator(Q.toeplitz(k, f))
            rhs = Q.toeplitz(k, H.omega_bracket(Q.iota(xi), f))
            assert lhs == rhs


# ---------------------------------------------------------------------------
# ladder-operator cross validation of the Beta-integral path
# ---------------------------------------------------------------------------

def _weight_vector(l, m):
    """The harmonic with {z, u} = -2im u, found by exactly diagonalizing the
    axial rotation on the (m, -m) tesseral pair (the primitive integer
    scalings of the two tesserals differ, so the naive A + iB combination is
    not an eigenvector in general)."""
    if m == 0:
        return H.solid_harmonic(l, 0)
    mu = abs(m)
    A = H.solid_harmonic(l, mu)
    B = H.solid_harmonic(l, -mu)
    beta = H.harmonic_decompose(H.omega_bracket(Z, A), l).get(l, -mu)
    gamma = H.harmonic_decompose(H.omega_bracket(Z, B), l).get(l, mu)
    assert beta * gamma == -4 * mu * mu
    lam = -2 * m * I
    u = gamma * A + lam * B
    assert H.omega_bracket(Z, u) == lam * u
    return u


def _proportional(A, B) -> bool:
    ratio = None
    for ra, rb in zip(A.entries, B.entries):
        for va, vb in zip(ra, rb):
            za, zb = complex(va), complex(vb)
            if abs(zb) < 1e-13:
                if abs(za) > 1e-13:
                    return False
                continue
            r = za / zb
            if ratio is None:
                ratio = r
            elif abs(r - ratio) > 1e-9 * max(1.0, abs(ratio)):
                return False
    return ratio is not None and abs(ratio) > 1e-13


def test_toeplitz_matches_ladder_construction():
    """Polarization operators built purely from commutator recursion must be
    proportional to the Toeplitz matrices of the matching harmonics.

    The (x+iy)^l harmonic pairs with the l-th power of the subdiagonal ladder
    matrix; commutating with the opposite ladder element walks the weight
    string down to (x-iy)^l.
    """
    E = ((0, 1), (0, 0))
    F = ((0, 0), (1, 0))
    for k in (4, 6):
        up_weight = Q.spin_rep(k, E)
        seed = Q.spin_rep(k, F)
        for l in (1, 2, 3):
            P = Q.FuzzyOperator.identity(k)
            for _ in range(l):
                P = P @ seed
            for m in range(l, -l - 1, -1):
                T = Q.toeplitz(k, _weight_vector(l, m))
                assert _proportional(P.to_float(), T.to_float()), (k, l, m)
                if m > -l:
                    P = up_weight.commutator(P)


# ---------------------------------------------------------------------------
# the antipodal twist
# ---------------------------------------------------------------------------

def test_twist_matrix_level_one():
    assert Q.twist_matrix(1).entries == ((0, -1), (1, 0))


def test_twist_matrix_squares_to_sign():
    for k in (1, 2, 3, 4):
        u = Q.twist_matrix(k)
        sq = u @ u
        want = ((-1) ** k) * Q.FuzzyOperator.identity(k)
        assert sq == want


def test_theta_fixes_su2_image():
    for k in (1, 3, 6):
        for xi in (Q.XI1, Q.XI2, Q.XI3):
            assert Q.theta(Q.spin_rep(k, xi)) == Q.spin_rep(k, xi)


def test_theta_intertwines_quantization_with_antipode():
    rng = random.Random(10)
    for k in range(1, 9):
        f = rand_harmonic(rng)
        lhs = Q.theta(Q.d_phi_bar(k, f, lmax=3))
        rhs = Q.d_phi_bar(k, H.antipodal(f), lmax=3)
        assert lhs == rhs


def test_theta_is_involution_and_bracket_automorphism():
    rng = random.Random(12)
    k = 4
    A = Q.d_phi_bar(k, rand_harmonic(rng), lmax=3)
    B = Q.d_phi_bar(k, rand_harmonic(rng), lmax=3)
    assert Q.theta(Q.theta(A)) == A
    assert Q.theta(A.commutator(B)) == Q.theta(A).commutator(Q.theta(B))


def test_theta_linear_extension():
    rng = random.Random(14)
    A = Q.d_phi_bar(3, rand_harmonic(rng), lmax=3)
    assert Q.theta_linear(A) == Q.theta(A)
    assert Q.theta_linear(I * A) == I * Q.theta_linear(A)


def test_level_mismatch_rejected():
    with pytest.raises(LevelMismatchError):
        Q.toeplitz(2, Z) @ Q.toeplitz(3, Z)


# ---------------------------------------------------------------------------
# norms, traces, commutator asymptotics
# ---------------------------------------------------------------------------

def test_op_norm_identity_and_z():
    assert Q.op_norm(Q.toeplitz(5, ONE)) == pytest.approx(1.0, abs=1e-12)
    for k in (2, 6, 12):
        assert Q.op_norm(Q.toeplitz(k, Z)) == pytest.approx(k / (k + 2), abs=1e-12)


def test_op_norm_matches_svd():
    rng = random.Random(15)
    f = rand_harmonic(rng)
    A = Q.toeplitz(9, f, mode=Q.FLOAT_MODE)
    assert Q.op_norm(A) == pytest.approx(np.linalg.norm(A.symmetrized(), 2), rel=1e-10)


def test_op_norm_rejects_non_normalizable():
    # a generic non-Hermitian combination
    A = Q.toeplitz(3, Z) + (I * Fraction(1, 3)) * Q.toeplitz(3, X)
    bad = A + Q.toeplitz(3, X) @ Q.toeplitz(3, Z)
    with pytest.raises(NotNormalizableError):
        Q.op_norm(bad + (I * Fraction(1, 7)) * bad @ bad)


def test_trace_product_semiclassics():
    # (1/(k+1)) tr(T_z T_z) approaches the mean of z^2 at rate 1/k
    limit = H.integrate_sphere(Z * Z).to_float() / (2 * math.pi)
    assert limit == pytest.approx(1 / 3)
    prev = None
    for k in (4, 8, 16, 32):
        tr = Q.trace_product(k, [Z, Z])
        val = float(tr.rational()) / (k + 1)
        dev = abs(val - limit)
        # the exact deviation here is 2/(3(k+2)), a clean 1/k law
        assert dev == pytest.approx(2 / (3 * (k + 2)), rel=1e-12)
        if prev is not None:
            assert dev < prev
        prev = dev


def test_trace_product_exact_value():
    # diagonal sums are exact rationals
    tr = Q.trace_product(2, [Z, Z])
    assert tr == SymbolicScalar(Fraction(1, 2), 0)


def test_commutator_defect_scaling():
    devs = {k: Q.commutator_defect(k, X, Y) for k in (8, 16, 32, 64)}
    for k in (8, 16, 32):
        assert devs[2 * k] < devs[k]
    # k * defect stays bounded (the 1/k law)
    assert 64 * devs[64] < 8.0


def test_commutator_defect_preasymptotic_pairs_still_1_over_k():
    # degree (1,3) pairs fit shallow slopes over the small-k window, but
    # k * defect still converges: it increases toward a finite plateau
    f, g = H.solid_harmonic(1, -1), H.solid_harmonic(3, -2)
    scaled = [k * Q.commutator_defect(k, f, g) for k in (16, 32, 64, 128, 256)]
    assert all(a < b for a, b in zip(scaled, scaled[1:]))
    assert scaled[-1] < scaled[-2] * 1.1


def test_exact_commutator_matches_float_defect():
    val_exact = Q.commutator_defect(6, X, Y, mode=Q.EXACT_MODE)
    val_float = Q.commutator_defect(6, X, Y, mode=Q.FLOAT_MODE)
    assert val_exact == pytest.approx(val_float, rel=1e-10)


# ---------------------------------------------------------------------------
# symbol cache serialization
# ---------------------------------------------------------------------------

def test_symbol_cache_round_trip():
    payload = Q.symbol_cache_payload(3, 2)
    ops = Q.load_symbol_cache(payload)
    for l in range(3):
        for m in range(-l, l + 1):
            assert ops[(l, m)] == Q.toeplitz(3, H.solid_harmonic(l, m))
