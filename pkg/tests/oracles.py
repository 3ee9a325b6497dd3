"""Independent numerical oracles used to pin expected values.

Everything here deliberately avoids the code paths it checks: sphere
integrals by Gauss-Legendre quadrature, chart integrals for the operator
matrix elements, finite-difference Laplacians, and trapezoid loop integrals.
"""

from __future__ import annotations

import numpy as np

from fuzzyloop.exact import scalar_to_complex


def poly_eval_grid(f, x, y, z):
    total = np.zeros(np.broadcast(x, y, z).shape, dtype=complex)
    for (a, b, c), v in f.terms.items():
        total += scalar_to_complex(v) * x**a * y**b * z**c
    return total


def sphere_integral_quad(f, n_ct: int = 120, n_phi: int = 256) -> complex:
    """integral of f over the sphere against the volume-2*pi form, by
    Gauss-Legendre in cos(theta) and trapezoid in phi (exact for polynomials
    at this order, up to rounding)."""
    ct, wt = np.polynomial.legendre.leggauss(n_ct)
    st = np.sqrt(1 - ct**2)
    phi = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    x = st[:, None] * np.cos(phi)[None, :]
    y = st[:, None] * np.sin(phi)[None, :]
    z = np.broadcast_to(ct[:, None], x.shape)
    vals = poly_eval_grid(f, x, y, z)
    # round measure then halved for the volume-2*pi normalization
    full = (vals * wt[:, None]).sum() * (2 * np.pi / n_phi)
    return complex(0.5 * full)


def toeplitz_entry_quad(k: int, f, i: int, j: int, n_u: int = 240, n_phi: int = 512) -> complex:
    """<e_i, f e_j> over the affine chart, by quadrature.

    Uses the substitution u = t/(1-t) to map (0,1) onto (0,inf).
    """
    t, wt = np.polynomial.legendre.leggauss(n_u)
    t = 0.5 * (t + 1.0)
    wt = 0.5 * wt
    u = t / (1 - t)
    du = wt / (1 - t) ** 2
    phi = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    r = np.sqrt(u)
    w = r[:, None] * np.exp(1j * phi)[None, :]
    uu = u[:, None]
    x = 2 * np.real(w) / (1 + uu)
    y = 2 * np.imag(w) / (1 + uu)
    z = (1 - uu) / (1 + uu)
    vals = poly_eval_grid(f, x, y, z)
    integrand = np.conj(w) ** i * w**j * vals * (1 + uu) ** (-(k + 2))
    total = (integrand * du[:, None]).sum() * (2 * np.pi / n_phi)
    return complex(total / (2 * np.pi))


def sphere_laplacian_fd(f, theta: float, phi: float, h: float = 1e-4) -> float:
    """Round-sphere Laplace operator of f at (theta, phi) by central
    differences in the angles."""

    def at(th, ph):
        st, ct = np.sin(th), np.cos(th)
        return poly_eval_grid(
            f, np.array(st * np.cos(ph)), np.array(st * np.sin(ph)), np.array(ct)
        ).real.item()

    d2phi = (at(theta, phi + h) - 2 * at(theta, phi) + at(theta, phi - h)) / h**2
    dtheta = (at(theta + h, phi) - at(theta - h, phi)) / (2 * h)
    d2theta = (at(theta + h, phi) - 2 * at(theta, phi) + at(theta - h, phi)) / h**2
    st = np.sin(theta)
    return d2theta + (np.cos(theta) / st) * dtheta + d2phi / st**2


def loop_pairing_quad(F, G, pairing, n_t: int = 4096) -> complex:
    """(1/2pi) * integral over one period of pairing(F(t), G'(t)) by the
    trapezoid rule (spectrally exact for trigonometric polynomials)."""
    ts = np.linspace(0, 2 * np.pi, n_t, endpoint=False)
    Gd = G.d_dt()
    total = 0j
    for t in ts:
        total += pairing(F.value_at(t), Gd.value_at(t))
    return complex(total / n_t)
