"""One-particle data: truncated lowest-weight modules and circle geometry.

Energies carry the factor 2*pi, so the lowest-weight-``n`` module has rotation
eigenvalues ``2*pi*(n + k)`` and ``beta`` is a dimensionless inverse
temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def _check_beta(beta):
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")


@dataclass(frozen=True)
class LowestWeightIrrep:
    """Positive-energy irrep of lowest weight ``n`` cut to ``d`` basis vectors."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"lowest weight must be >= 1, got {self.n}")
        if self.d < 1:
            raise ValueError(f"truncation must be >= 1, got {self.d}")

    @property
    def generator(self):
        """Rotation generator ``l`` as a diagonal matrix."""
        return np.diag(rotation_spectrum(self))


def rotation_spectrum(irrep):
    """Eigenvalues ``2*pi*(n + k)``, ``k = 0..d-1``, in increasing order."""
    return TWO_PI * (irrep.n + np.arange(irrep.d, dtype=float))


def ladder_operators(irrep):
    """Return ``(L_plus, L_minus, L_zero)`` for the truncated module.

    ``L_plus e_k = sqrt((k+1)(k+2n)) e_{k+1}``, with the image of the top basis
    vector dropped. ``[L_minus, L_plus] = 2 L_zero`` therefore fails only in the
    last row and column.
    """
    if irrep.d < 2:
        raise ValueError("ladder operators need d >= 2")
    k = np.arange(irrep.d - 1, dtype=float)
    l_plus = np.diag(np.sqrt((k + 1.0) * (k + 2.0 * irrep.n)), -1)
    l_zero = np.diag(irrep.n + np.arange(irrep.d, dtype=float))
    return l_plus, l_plus.T.copy(), l_zero


def one_particle_gibbs_trace(n, beta):
    """``Tr exp(-beta l)`` on the untruncated module: ``x**n / (1 - x)``."""
    _check_beta(beta)
    # -expm1 keeps 1 - x accurate for small beta
    return math.exp(-TWO_PI * beta * n) / -math.expm1(-TWO_PI * beta)


# --------------------------------------------------------------------------
# Circle geometry
# --------------------------------------------------------------------------


def cayley(x):
    """Map the extended real line onto the unit circle.

    ``x -> (1 + i x) / (1 - i x)``: the positive half-line goes onto the upper
    semicircle, ``0 -> 1``, ``1 -> i`` and ``inf -> -1``.
    """
    if np.isscalar(x) and math.isinf(x):
        return complex(-1.0, 0.0)
    x = np.asarray(x, dtype=float)
    z = (1.0 + 1j * x) / (1.0 - 1j * x)
    z = np.where(np.isinf(x), -1.0 + 0j, z)
    return complex(z) if z.ndim == 0 else z


def inverse_cayley(z):
    """Inverse of :func:`cayley`; ``-1`` goes to ``inf``."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (-1j * (z - 1.0) / (z + 1.0)).real
    x = np.where(np.abs(z + 1.0) == 0.0, np.inf, x)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class MoebiusElement:
    """``x -> (a x + b) / (c x + d)`` with ``ad - bc = 1``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise ValueError(f"determinant must be 1, got {det!r}")

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other):
        if not isinstance(other, MoebiusElement):
            return NotImplemented
        m = self.matrix @ other.matrix
        # renormalize the determinant drift of long products
        m /= math.sqrt(np.linalg.det(m))
        return MoebiusElement.from_matrix(m)

    def inverse(self):
        return MoebiusElement(self.d, -self.b, -self.c, self.a)

    def on_line(self, x):
        """Action on the extended real line."""
        if math.isinf(x):
            return math.inf if self.c == 0 else self.a / self.c
        den = self.c * x + self.d
        if den == 0:
            return math.inf
        return (self.a * x + self.b) / den

    def on_circle(self, z):
        """Action on the unit circle, conjugated through :func:`cayley`."""
        z = np.asarray(z, dtype=complex)
        # The Cayley map is the complex Moebius matrix C = [[i, 1], [-i, 1]].
        c = np.array([[1j, 1.0], [-1j, 1.0]])
        g = c @ self.matrix @ np.linalg.inv(c)
        w = (g[0, 0] * z + g[0, 1]) / (g[1, 0] * z + g[1, 1])
        return complex(w) if w.ndim == 0 else w

    def allclose(self, other, atol=1e-12):
        # PSL(2, R): g and -g are the same element
        return bool(
            np.allclose(self.matrix, other.matrix, atol=atol, rtol=0)
            or np.allclose(self.matrix, -other.matrix, atol=atol, rtol=0)
        )


IDENTITY = MoebiusElement(1.0, 0.0, 0.0, 1.0)


def dilation(t):
    """``Lambda(t)``: conjugate of ``x -> e^t x``; fixes ``cayley(0)`` and ``cayley(inf)``."""
    h = math.exp(t / 2.0)
    return MoebiusElement(h, 0.0, 0.0, 1.0 / h)


def translation(t):
    """``T(t)``: conjugate of ``x -> x + t``."""
    return MoebiusElement(1.0, float(t), 0.0, 1.0)


def interval_flows(t):
    """Return ``(dilation(t), translation(t))`` for the upper semicircle."""
    return dilation(t), translation(t)


def reflect(z):
    """Reflection of the upper semicircle: complex conjugation on the circle."""
    return np.conj(z)


def reflection_matrix():
    """The reflection on the real line, ``x -> -x`` (determinant -1, not in PSL)."""
    return np.array([[-1.0, 0.0], [0.0, 1.0]])


def conjugate_by_reflection(g):
    """``r g r`` as a Moebius element (``r`` is an involution)."""
    r = reflection_matrix()
    return MoebiusElement.from_matrix(r @ g.matrix @ r)


def twist_unitary(u_2pi):
    """``(1 + i U) / (1 + i)`` for a self-adjoint unitary ``U`` (the rotation by 2 pi)."""
    u = np.asarray(u_2pi, dtype=complex)
    eye = np.eye(u.shape[0])
    if not np.allclose(u @ u, eye, atol=1e-10):
        raise ValueError("the 2*pi rotation must square to the identity")
    return (eye + 1j * u) / (1.0 + 1j)
