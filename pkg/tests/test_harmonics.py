"""Exact sphere Poisson algebra: brackets, integration, harmonics, tables."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fuzzyloop import harmonics as H
from fuzzyloop.errors import DegreeOverflowError
from fuzzyloop.exact import I, SymbolicScalar, gauss
from fuzzyloop.harmonics import ONE, SpherePoly, X, Y, Z

from oracles import sphere_integral_quad, sphere_laplacian_fd


# ---------------------------------------------------------------------------
# canonical reduction
# ---------------------------------------------------------------------------

def test_reduce_ideal_generator():
    assert H.reduce({(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}) == ONE


def test_reduce_z_powers():
    assert H.reduce({(0, 0, 2): 1}) == ONE - X * X - Y * Y
    assert H.reduce({(0, 0, 3): 1}) == Z - X * X * Z - Y * Y * Z


def test_reduce_is_idempotent_on_canonical():
    p = X * Y * Z + 3 * X
    assert H.reduce(p.terms) == p


def test_canonical_z_degree():
    p = (Z ** 5) * X + Z * Z
    assert all(c <= 1 for (_a, _b, c) in p.terms)


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------

def test_kks_coordinate_relations():
    assert H.kks_bracket(Z, X) == Y
    assert H.kks_bracket(X, Y) == Z
    assert H.kks_bracket(Y, Z) == X


def test_kks_self_bracket_vanishes():
    p = X * Y + 2 * Z
    assert H.kks_bracket(p, p).is_zero


def test_highest_weight_bracket_lemma():
    sig = X + I * Y
    for l in range(1, 9):
        lhs = H.kks_bracket(Z * Z, sig ** l)
        assert lhs == (-2 * l * I) * (Z * (sig ** l))


def test_omega_bracket_is_calibrated_double():
    # the calibrated sign is +1, so {z, x} doubles to 2y
    assert H.omega_bracket(Z, X) == 2 * Y


def test_omega_bracket_constants_central():
    q = X * Y + Z
    assert H.omega_bracket(ONE, q).is_zero


def test_omega_bracket_bilinear():
    assert H.omega_bracket(Z, X + X) == 2 * H.omega_bracket(Z, X)


def _random_raw(rng, deg=3, terms=5):
    out = {}
    for _ in range(terms):
        a, b, c = rng.randint(0, deg), rng.randint(0, deg), rng.randint(0, 2)
        if a + b + c > deg + 1:
            continue
        out[(a, b, c)] = Fraction(rng.randint(-3, 3))
    return out


def test_kks_representative_independent():
    # adding multiples of the sphere relation to an argument does not change
    # the reduced bracket
    from fuzzyloop.harmonics import _raw_add, _raw_kks, _raw_mul

    rng = random.Random(3)
    gen = {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -1}
    for _ in range(10):
        p = _random_raw(rng)
        q = _random_raw(rng)
        s = _random_raw(rng, deg=2, terms=3)
        p_shift = _raw_add(p, _raw_mul(s, gen))
        b1 = SpherePoly(_raw_kks(p, q))
        b2 = SpherePoly(_raw_kks(p_shift, q))
        assert b1 == b2


coeff_st = st.integers(min_value=-3, max_value=3)
mono_st = st.tuples(
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=1),
)
poly_st = st.dictionaries(mono_st, coeff_st, min_size=1, max_size=4).map(SpherePoly)


@settings(max_examples=25, deadline=None)
@given(poly_st, poly_st)
def test_bracket_antisymmetry(p, q):
    assert H.kks_bracket(p, q) == -1 * H.kks_bracket(q, p)


@settings(max_examples=25, deadline=None)
@given(poly_st, poly_st, poly_st)
def test_bracket_jacobi(p, q, r):
    total = (
        H.kks_bracket(p, H.kks_bracket(q, r))
        + H.kks_bracket(q, H.kks_bracket(r, p))
        + H.kks_bracket(r, H.kks_bracket(p, q))
    )
    assert total.is_zero


@settings(max_examples=25, deadline=None)
@given(poly_st, poly_st, poly_st)
def test_bracket_leibniz(p, q, r):
    lhs = H.kks_bracket(p, q * r)
    rhs = H.kks_bracket(p, q) * r + q * H.kks_bracket(p, r)
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(poly_st, poly_st)
def test_brackets_integrate_to_zero(p, q):
    assert H.integrate_sphere(H.omega_bracket(p, q)).is_zero


# ---------------------------------------------------------------------------
# integration and the invariant forms
# ---------------------------------------------------------------------------

def test_integrate_constants():
    assert H.integrate_sphere(ONE) == SymbolicScalar(2, 1)
    assert H.integrate_sphere(X * X) == SymbolicScalar(Fraction(2, 3), 1)
    assert H.integrate_sphere(X * Y * Z).is_zero


def test_integrate_against_quadrature():
    rng = random.Random(11)
    for _ in range(6):
        p = SpherePoly(_random_raw(rng, deg=4, terms=6))
        exact = H.integrate_sphere(p).to_complex()
        quad = sphere_integral_quad(p)
        assert abs(exact - quad) < 1e-10 * max(1.0, abs(exact))


def test_squared_deviation_of_z2():
    # integral of (z^2 - 1/3)^2 against the volume-2*pi form
    p = Z * Z - Fraction(1, 3) * ONE
    assert H.integrate_sphere(p * p) == SymbolicScalar(Fraction(8, 45), 1)


def test_kappa_infty_values():
    assert H.kappa_infty(Z, Z) == SymbolicScalar(1, -1)
    total = (
        H.kappa_infty(X, X) + H.kappa_infty(Y, Y) + H.kappa_infty(Z, Z)
    )
    assert total == SymbolicScalar(3, -1)


def test_b_form_on_constants():
    assert H.b_form(ONE, ONE) == SymbolicScalar(4, 2)
    assert H.b_form(X, ONE).is_zero


# ---------------------------------------------------------------------------
# solid harmonics
# ---------------------------------------------------------------------------

def test_low_degree_bases():
    assert H.solid_harmonic_basis(0) == [ONE]
    assert set(H.solid_harmonic_basis(1)) == {X, Y, Z}


def test_solid_harmonics_are_integer_and_harmonic():
    from fuzzyloop.harmonics import _raw_laplace3, solid_harmonic_raw

    for l in range(0, 7):
        for m in range(-l, l + 1):
            raw = dict(solid_harmonic_raw(l, m))
            assert all(isinstance(v, int) for v in raw.values())
            assert all(sum(mono) == l for mono in raw)
            assert not _raw_laplace3(raw)


def test_kappa_orthogonality_across_basis():
    keys = H.basis_keys(5)
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1 :]:
            v = H.kappa(H.solid_harmonic(*k1), H.solid_harmonic(*k2))
            assert v.is_zero, (k1, k2)


def test_gram_values_positive():
    for l in range(5):
        for m in range(-l, l + 1):
            g = H.gram_value(l, m)
            assert g.pi_power == 1 and g.rational() > 0


# ---------------------------------------------------------------------------
# harmonic decomposition
# ---------------------------------------------------------------------------

def test_decompose_z_squared():
    hc = H.harmonic_decompose(Z * Z, 4)
    assert hc.coeffs == {(0, 0): Fraction(1, 3), (2, 0): Fraction(1, 3)}
    assert hc.to_poly() == Z * Z


def test_decompose_basis_round_trip():
    for l in range(5):
        for m in range(-l, l + 1):
            hc = H.harmonic_decompose(H.solid_harmonic(l, m), 5)
            assert hc.coeffs == {(l, m): Fraction(1)}


def test_decompose_random_round_trip():
    rng = random.Random(5)
    for _ in range(8):
        p = SpherePoly(_random_raw(rng, deg=4, terms=6))
        hc = H.harmonic_decompose(p, 6)
        assert hc.to_poly() == p


def test_decompose_degree_overflow():
    with pytest.raises(DegreeOverflowError):
        H.harmonic_decompose(H.solid_harmonic(5, 2), 4)


def test_laplacian_eigenvalues():
    assert H.laplacian(Z, 2) == 4 * Z
    assert H.laplacian(ONE, 2).is_zero
    for m in range(-2, 3):
        p = H.solid_harmonic(2, m)
        assert H.laplacian(p, 3) == 12 * p


def test_laplacian_against_finite_differences():
    # the operator is twice the round-sphere Laplacian with the positive
    # eigenvalue convention: compare -2 * (angular second derivatives)
    for (l, m) in ((1, 0), (2, 1), (3, -2)):
        p = H.solid_harmonic(l, m)
        lp = H.laplacian(p, l)
        for theta, phi in ((0.7, 1.1), (1.9, 4.0)):
            fd = sphere_laplacian_fd(p, theta, phi)
            x = math.sin(theta) * math.cos(phi)
            y = math.sin(theta) * math.sin(phi)
            z = math.cos(theta)
            assert lp.eval(x, y, z).real == pytest.approx(-2 * fd, abs=2e-4, rel=1e-4)


def test_laplacian_degree_overflow():
    with pytest.raises(DegreeOverflowError):
        H.laplacian(H.solid_harmonic(3, 0), 2)


# ---------------------------------------------------------------------------
# the antipodal involution
# ---------------------------------------------------------------------------

def test_antipodal_examples():
    assert H.antipodal(X) == X
    xy = X * Y
    assert H.antipodal(xy) == -1 * xy


def test_antipodal_is_involution():
    rng = random.Random(9)
    for _ in range(6):
        p = SpherePoly(_random_raw(rng))
        assert H.antipodal(H.antipodal(p)) == p


def test_antipodal_harmonic_grading():
    for l in range(1, 6):
        p = H.solid_harmonic(l, min(l, 2) - 1)
        assert H.antipodal(p) == ((-1) ** (l + 1)) * p


def test_antipodal_is_bracket_automorphism():
    rng = random.Random(13)
    for _ in range(6):
        p = SpherePoly(_random_raw(rng))
        q = SpherePoly(_random_raw(rng))
        lhs = H.antipodal(H.omega_bracket(p, q))
        rhs = H.omega_bracket(H.antipodal(p), H.antipodal(q))
        assert lhs == rhs


# ---------------------------------------------------------------------------
# Poisson structure constants
# ---------------------------------------------------------------------------

def test_table_so3_sector():
    table = H.poisson_table(2)
    # {y, x} carries the omega-scaled so(3) relation: {y, x} = -2z
    row = table.bracket_on_basis((1, -1), (1, 1))
    assert row == {(1, 0): Fraction(-2)}
    assert table.bracket_on_basis((1, 1), (1, -1)) == {(1, 0): Fraction(2)}


def test_table_matches_direct_bracket():
    table = H.poisson_table(4)
    rng = random.Random(17)
    keys = [(l, m) for l in range(1, 3) for m in range(-l, l + 1)]
    for _ in range(10):
        k1, k2 = rng.sample(keys, 2)
        row = table.bracket_on_basis(k1, k2)
        direct = H.omega_bracket(H.solid_harmonic(*k1), H.solid_harmonic(*k2))
        rebuilt = SpherePoly.zero()
        for k3, c in row.items():
            rebuilt = rebuilt + c * H.solid_harmonic(*k3)
        assert rebuilt == direct


def test_table_selection_and_parity():
    table = H.poisson_table(4)
    table.validate()
    for (k1, k2), row in table._entries.items():
        for (l3, _m3) in row:
            assert abs(k1[0] - k2[0]) <= l3 <= k1[0] + k2[0] - 1
            assert (k1[0] + k2[0] + l3) % 2 == 1


def test_table_truncation_error():
    table = H.poisson_table(3)
    with pytest.raises(DegreeOverflowError):
        table.bracket_on_basis((2, 0), (3, 1))


def test_table_serialization_round_trip():
    table = H.poisson_table(3)
    payload = table.to_payload()
    back = H.PoissonTable.from_payload(payload)
    assert back.to_payload() == payload
    assert back._entries == table._entries


# ---------------------------------------------------------------------------
# invariance checking
# ---------------------------------------------------------------------------

def test_invariance_of_kappa_and_b():
    table = H.poisson_table(4)
    assert H.check_invariance(H.kappa_gram(4), 4, table).is_zero
    assert H.check_invariance(H.b_gram(4), 4, table).is_zero


def test_perturbed_form_detected():
    table = H.poisson_table(4)
    S = H.kappa_gram(4)
    S[((1, 0), (2, 0))] = SymbolicScalar(Fraction(1, 7), 1)
    res = H.check_invariance(S, 4, table)
    assert not res.is_zero and res.rational() > 0
