"""Real subspaces of C^d and their modular data.

Real-linear algebra is done on ``R^{2d}`` through ``v -> (Re v, Im v)``.
Multiplication by ``i`` becomes a fixed real matrix, the real inner product is
``Re<h, k>`` and the symplectic form is ``Im<h, k>``. Every rank decision uses
singular values against ``RANK_TOL``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import fock

RANK_TOL = 1e-10
# conditioning of the basis {H, iH} beyond which Tomita data is refused
MAX_CONDITION = 1e10


class NotStandardError(ValueError):
    pass


def realify(v):
    """Stack real and imaginary parts; works on vectors or on columns."""
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag], axis=0)


def complexify(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[0] // 2
    return x[:d] + 1j * x[d:]


def mult_i(d):
    """Real ``2d x 2d`` matrix of multiplication by ``i``."""
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, -eye], [eye, zero]])


def symplectic_form(d):
    """``W`` with ``realify(h) @ W @ realify(k) == Im<h, k>``."""
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, eye], [-eye, zero]])


def _real_rank(m):
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > RANK_TOL * max(1.0, s[0])))


def _orth(m):
    """Orthonormal columns spanning the column space of a real matrix."""
    if m.size == 0:
        return np.zeros((m.shape[0], 0))
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > RANK_TOL * max(1.0, s[0]))) if s.size else 0
    return u[:, :r]


@dataclass(frozen=True, eq=False)
class RealSubspace:
    """Real span of complex generators in ``C^d``.

    ``basis`` holds an orthonormal real basis of the span as columns of a
    ``2d x m`` matrix.
    """

    d: int
    basis: np.ndarray

    @classmethod
    def span(cls, generators, d=None):
        gens = np.asarray(generators, dtype=complex)
        if gens.ndim == 1:
            gens = gens[None, :]
        if d is None:
            d = gens.shape[1]
        gens = gens.reshape(-1, d)
        return cls(d, _orth(realify(gens.T)))

    @classmethod
    def from_real_basis(cls, d, real_columns):
        return cls(d, _orth(np.asarray(real_columns, dtype=float).reshape(2 * d, -1)))

    @property
    def real_dim(self):
        return self.basis.shape[1]

    def vectors(self):
        """Orthonormal real basis as complex vectors (rows)."""
        return complexify(self.basis).T

    def projector(self):
        return self.basis @ self.basis.T

    def sample(self, rng, count=1):
        """Random elements ``sum c_j b_j`` with standard normal real ``c``."""
        coeffs = rng.standard_normal((self.real_dim, count))
        return complexify(self.basis @ coeffs).T

    def to_dict(self):
        return {
            "d": self.d,
            "generators": [[[float(z.real), float(z.imag)] for z in v] for v in self.vectors()],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        d = int(data["d"])
        gens = np.asarray(data["generators"], dtype=float).reshape(-1, d, 2)
        return cls.span(gens[..., 0] + 1j * gens[..., 1], d=d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def subspace_distance(a, b):
    """Largest principal angle between two real subspaces (radians).

    Subspaces of different dimension are at distance ``pi/2``.
    """
    if a.real_dim != b.real_dim:
        return float(np.pi / 2)
    if a.real_dim == 0:
        return 0.0
    return float(np.max(sla.subspace_angles(a.basis, b.basis)))


def symplectic_complement(H):
    """``H' = {k : Im<h, k> = 0 for all h in H}``."""
    if H.real_dim == 0:
        return RealSubspace(H.d, np.eye(2 * H.d))
    constraints = H.basis.T @ symplectic_form(H.d)
    return RealSubspace(H.d, sla.null_space(constraints, rcond=RANK_TOL))


@dataclass(frozen=True)
class StandardnessReport:
    standard: bool
    rank_sum: int  # real rank of H + iH
    dim_intersection: int  # real dimension of H cap iH
    d: int

    def __bool__(self):
        return self.standard


def is_standard(H):
    """``H + iH = C^d`` and ``H cap iH = {0}``, decided by real ranks."""
    both = np.hstack([H.basis, mult_i(H.d) @ H.basis])
    rank_sum = _real_rank(both)
    inter = 2 * H.real_dim - rank_sum
    return StandardnessReport(rank_sum == 2 * H.d and inter == 0, rank_sum, inter, H.d)


@dataclass(frozen=True, eq=False)
class TomitaData:
    """Modular objects of a standard subspace.

    Antilinear maps are stored as ``X`` with action ``v -> X @ conj(v)``.
    ``S = J Delta^{1/2}`` with ``S = s_matrix K`` and ``J = j_matrix K``.
    """

    s_matrix: np.ndarray
    delta: np.ndarray
    delta_inv: np.ndarray
    j_matrix: np.ndarray
    condition: float

    def S(self, v):
        return self.s_matrix @ np.conj(v)

    def J(self, v):
        return self.j_matrix @ np.conj(v)

    def delta_power(self, z):
        """``Delta**z`` for complex ``z`` through the eigendecomposition."""
        w, v = np.linalg.eigh(self.delta)
        return (v * np.power(w.astype(complex), z)) @ v.conj().T

    def delta_it(self, t):
        return self.delta_power(1j * t)

    def spectrum(self):
        return np.linalg.eigvalsh(self.delta)


def tomita(H):
    """Polar decomposition of ``S : h + ik -> h - ik``.

    A real basis ``v_j`` of a standard ``H`` is a complex basis of ``C^d``;
    ``S`` conjugates coordinates in it, so ``S = V conj(V^{-1}) K``. Then
    ``Delta = S* S = A^T conj(A)`` and ``J`` is the unitary polar factor of
    ``A`` composed with ``K``. Since
    ``S`` is an involution, ``Delta^{-1} = S S* = A A^H`` needs no inversion.
    """
    report = is_standard(H)
    if not report:
        raise NotStandardError("Tomita data requires a standard subspace")
    V = H.vectors().T
    cond = float(np.linalg.cond(V))
    if cond > MAX_CONDITION:
        raise NotStandardError(f"standard subspace is too close to degenerate (cond {cond:.3e})")
    A = V @ np.conj(np.linalg.inv(V))
    delta = A.T @ np.conj(A)
    delta = 0.5 * (delta + delta.conj().T)
    delta_inv = A @ A.conj().T
    delta_inv = 0.5 * (delta_inv + delta_inv.conj().T)
    # A = U P (polar) gives S = A K = (U K) conj(P): J = U K, Delta^{1/2} = conj(P).
    # The SVD route never divides by the small singular values of A.
    j_matrix, _ = sla.polar(A)
    return TomitaData(A, delta, delta_inv, j_matrix, cond)


def _image(H, linear):
    """Image of ``H`` under a complex-linear matrix."""
    vecs = linear @ H.vectors().T
    return RealSubspace(H.d, _orth(realify(vecs)))


def _anti_image(H, x):
    """Image of ``H`` under the antilinear map ``v -> x @ conj(v)``."""
    vecs = x @ np.conj(H.vectors().T)
    return RealSubspace(H.d, _orth(realify(vecs)))


def modular_flow_check(H, t_values, data=None):
    """Largest principal angle between ``Delta^{it} H`` and ``H`` over ``t_values``."""
    data = tomita(H) if data is None else data
    defect = 0.0
    for t in t_values:
        defect = max(defect, subspace_distance(_image(H, data.delta_it(t)), H))
    return defect


def conjugation_check(H, data=None):
    """Principal-angle distance between ``J H`` and ``H'``."""
    data = tomita(H) if data is None else data
    return subspace_distance(_anti_image(H, data.j_matrix), symplectic_complement(H))


def modular_defects(H, t_values=(0.1, 1.0, 10.0)):
    """All finite-dimensional modular identities as a dict of max defects."""
    data = tomita(H)
    eye = np.eye(H.d)
    vecs = H.vectors()
    s_fix = max(np.max(np.abs(data.S(v) - v)) for v in vecs)
    s_sq = np.max(np.abs(data.s_matrix @ np.conj(data.s_matrix) - eye))
    j_sq = np.max(np.abs(data.j_matrix @ np.conj(data.j_matrix) - eye))
    # J Delta J as a linear map: X K Delta X K = X conj(Delta) conj(X)
    jdj = data.j_matrix @ np.conj(data.delta) @ np.conj(data.j_matrix)
    jdj_def = np.max(np.abs(jdj - data.delta_inv))
    # lambda <-> 1/lambda pairing: Delta and Delta^{-1} have the same spectrum
    pairing = np.max(np.abs(data.spectrum() - np.linalg.eigvalsh(data.delta_inv)))
    return {
        "S_fixes_H": float(s_fix),
        "S_squared": float(s_sq),
        "J_squared": float(j_sq),
        "J_Delta_J": float(jdj_def),
        "spectrum_pairing": float(pairing),
        "modular_flow": modular_flow_check(H, t_values, data),
        "J_H_equals_H_prime": conjugation_check(H, data),
        "condition": data.condition,
    }


def twisted_duality_generators(space, H, samples=50, rng=None):
    """Max band norm of ``[s(h), d(k)]`` over random ``h in H``, ``k in H'``."""
    if space.d != H.d:
        raise ValueError(f"subspace lives in C^{H.d} but the space has d={space.d}")
    if not is_standard(H):
        raise NotStandardError("twisted duality is stated for standard subspaces")
    if space.N < 2:
        raise fock.TruncationError("commutator needs N >= 2")
    rng = np.random.default_rng() if rng is None else rng
    Hp = symplectic_complement(H)
    hs = H.sample(rng, samples)
    ks = Hp.sample(rng, samples)
    return max(fock.commutator_band_norm(space, h, k) for h, k in zip(hs, ks))


def random_standard_subspace(d, rng):
    """Real span of ``d`` Gaussian complex vectors: standard with probability one."""
    while True:
        gens = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        H = RealSubspace.span(gens, d=d)
        if is_standard(H) and np.linalg.cond(H.vectors()) < 1e6:
            return H
