"""Truncated full Fock space with Boltzmann statistics.

The space keeps every tensor power of a ``d``-dimensional one-particle space up
to ``N`` particles, without symmetrization. Operators are scipy sparse
matrices; each one records the largest particle number on which it agrees with
the untruncated operator (its *exact band*) together with the range of
particle-number shifts it can produce, so that products and commutators carry a
correct band automatically.

Inner products are conjugate-linear in the first slot: ``<h, k> = vdot(h, k)``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .oneparticle import LowestWeightIrrep, rotation_spectrum

DEFAULT_MAX_DIM = 2**20


class FockDimensionError(ValueError):
    """The requested truncation exceeds the dimension guard."""


class TruncationError(ValueError):
    """The truncation is too small for the requested quantity."""


def max_dim():
    value = os.environ.get("FOCKFORGE_MAX_DIM")
    return int(value) if value else DEFAULT_MAX_DIM


def inner(h, k):
    """``<h, k>``, conjugate-linear in ``h``."""
    return complex(np.vdot(np.asarray(h), np.asarray(k)))


@dataclass(frozen=True)
class TruncatedFockSpace:
    """``C Omega + H + H^{(x)2} + ... + H^{(x)N}`` with ``dim H = d``."""

    d: int
    N: int
    offsets: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.d < 1 or self.N < 0:
            raise ValueError(f"need d >= 1 and N >= 0, got d={self.d}, N={self.N}")
        dim = sum(self.d**k for k in range(self.N + 1))
        if dim > max_dim():
            raise FockDimensionError(
                f"dimension {dim} exceeds the limit {max_dim()} (set FOCKFORGE_MAX_DIM to override)"
            )
        object.__setattr__(self, "offsets", _kernels.sector_offsets(self.d, self.N))

    @property
    def dim(self):
        return int(self.offsets[-1])

    def sector(self, k):
        """Index slice of the ``k``-particle sector."""
        return slice(int(self.offsets[k]), int(self.offsets[k + 1]))

    def band_size(self, band):
        """Number of basis vectors with at most ``band`` particles."""
        if band < 0:
            return 0
        return int(self.offsets[min(band, self.N) + 1])

    def particle_numbers(self):
        return _kernels.particle_numbers(self.d, self.N)

    def rank(self, tup):
        tup = tuple(tup)
        k = len(tup)
        if k > self.N:
            raise IndexError(f"tuple of length {k} exceeds N={self.N}")
        local = 0
        for a in tup:
            if not 0 <= a < self.d:
                raise IndexError(f"one-particle index {a} out of range for d={self.d}")
            local = local * self.d + int(a)
        return int(self.offsets[k]) + local

    def unrank(self, index):
        if not 0 <= index < self.dim:
            raise IndexError(f"basis index {index} out of range")
        k = int(np.searchsorted(self.offsets, index, side="right")) - 1
        local = index - int(self.offsets[k])
        digits = []
        for _ in range(k):
            local, a = divmod(local, self.d)
            digits.append(a)
        return tuple(reversed(digits))

    def basis_tuples(self):
        return [self.unrank(i) for i in range(self.dim)]


@dataclass(frozen=True)
class FockVector:
    space: TruncatedFockSpace
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.space.dim,):
            raise ValueError(f"expected {self.space.dim} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def vacuum(cls, space):
        return cls.basis(space, ())

    @classmethod
    def basis(cls, space, tup):
        c = np.zeros(space.dim, dtype=complex)
        c[space.rank(tup)] = 1.0
        return cls(space, c)

    @classmethod
    def product(cls, space, *factors):
        """Elementary tensor ``f_1 (x) ... (x) f_k``."""
        k = len(factors)
        if k > space.N:
            raise TruncationError(f"{k} factors exceed N={space.N}")
        block = np.ones(1, dtype=complex)
        for f in factors:
            f = np.asarray(f, dtype=complex)
            if f.shape != (space.d,):
                raise ValueError(f"factor has shape {f.shape}, expected ({space.d},)")
            block = np.kron(block, f)
        c = np.zeros(space.dim, dtype=complex)
        c[space.sector(k)] = block
        return cls(space, c)

    def inner(self, other):
        return inner(self.coeffs, other.coeffs)

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other):
        return FockVector(self.space, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return FockVector(self.space, self.coeffs - other.coeffs)

    def __rmul__(self, scalar):
        return FockVector(self.space, scalar * self.coeffs)

    def to_dict(self):
        nz = np.flatnonzero(self.coeffs)
        entries = [[int(i), 0, float(self.coeffs[i].real), float(self.coeffs[i].imag)] for i in nz]
        return {"d": self.space.d, "N": self.space.N, "entries": entries}


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Sparse operator on a truncated Fock space.

    ``exact_band`` is the largest source particle number on which the matrix
    agrees with the untruncated operator. ``shifts`` is the closed range
    ``(lo, hi)`` of particle-number changes the operator can produce.
    """

    space: TruncatedFockSpace
    matrix: sp.csr_matrix
    exact_band: int
    shifts: tuple = (0, 0)

    def __post_init__(self):
        m = sp.csr_matrix(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError(f"matrix shape {m.shape} does not match dim {self.space.dim}")
        m.sum_duplicates()
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "exact_band", min(int(self.exact_band), self.space.N))

    # -- algebra -----------------------------------------------------------

    def _check(self, other):
        if other.space != self.space:
            raise ValueError("operators live on different Fock spaces")

    def __add__(self, other):
        self._check(other)
        lo = min(self.shifts[0], other.shifts[0])
        hi = max(self.shifts[1], other.shifts[1])
        return FockOperator(
            self.space, self.matrix + other.matrix, min(self.exact_band, other.exact_band), (lo, hi)
        )

    def __neg__(self):
        return FockOperator(self.space, -self.matrix, self.exact_band, self.shifts)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return FockOperator(self.space, scalar * self.matrix, self.exact_band, self.shifts)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, FockVector):
            return FockVector(self.space, self.matrix @ other.coeffs)
        if not isinstance(other, FockOperator):
            return NotImplemented
        self._check(other)
        band = min(other.exact_band, self.exact_band - max(other.shifts[1], 0))
        shifts = (self.shifts[0] + other.shifts[0], self.shifts[1] + other.shifts[1])
        return FockOperator(self.space, self.matrix @ other.matrix, band, shifts)

    def adjoint(self):
        # rows of sectors <= band are exact; shift them back through the lowering range
        band = self.exact_band - max(-self.shifts[0], 0)
        return FockOperator(
            self.space,
            self.matrix.conj().T.tocsr(),
            band,
            (-self.shifts[1], -self.shifts[0]),
        )

    @property
    def H(self):
        return self.adjoint()

    # -- inspection --------------------------------------------------------

    def toarray(self):
        return self.matrix.toarray()

    def flagged(self):
        """Boolean mask of source basis vectors outside the exact band."""
        return self.space.particle_numbers() > self.exact_band

    def band_block(self, band=None):
        """Dense block with source and target particle numbers ``<= band``."""
        band = self.exact_band if band is None else band
        m = self.space.band_size(band)
        return self.matrix[:m, :m].toarray()

    def band_norm(self, band=None):
        """Spectral norm of :meth:`band_block`."""
        block = self.band_block(band)
        if block.size == 0:
            return 0.0
        return float(np.linalg.norm(block, 2))

    def to_dict(self):
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        entries = [
            [int(coo.row[i]), int(coo.col[i]), float(coo.data[i].real), float(coo.data[i].imag)]
            for i in order
        ]
        return {
            "d": self.space.d,
            "N": self.space.N,
            "exact_band": self.exact_band,
            "entries": entries,
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        space = TruncatedFockSpace(int(data["d"]), int(data["N"]))
        entries = np.asarray(data["entries"], dtype=float).reshape(-1, 4)
        m = sp.coo_matrix(
            (entries[:, 2] + 1j * entries[:, 3], (entries[:, 0].astype(int), entries[:, 1].astype(int))),
            shape=(space.dim, space.dim),
        )
        return cls(space, m.tocsr(), data.get("exact_band", space.N), (-space.N, space.N))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# --------------------------------------------------------------------------
# Constructors
# --------------------------------------------------------------------------


def _one_particle(space, h):
    h = np.asarray(h, dtype=complex)
    if h.shape != (space.d,):
        raise ValueError(f"one-particle vector has shape {h.shape}, expected ({space.d},)")
    return h


def _creation(space, h, left):
    h = _one_particle(space, h)
    rows, cols, vals = _kernels.creation_coo(space.d, space.N, h, left)
    m = sp.csr_matrix((vals, (rows, cols)), shape=(space.dim, space.dim))
    return FockOperator(space, m, space.N - 1, (1, 1))


def left_creation(space, h):
    """``l(h)``: prepend ``h``. The top sector is sent to zero."""
    return _creation(space, h, left=True)


def right_creation(space, h):
    """``r(h)``: append ``h``. The top sector is sent to zero."""
    return _creation(space, h, left=False)


def left_annihilation(space, h):
    a = left_creation(space, h).adjoint()
    # compression of a lowering operator is exact on every sector
    return FockOperator(space, a.matrix, space.N, (-1, -1))


def right_annihilation(space, h):
    a = right_creation(space, h).adjoint()
    return FockOperator(space, a.matrix, space.N, (-1, -1))


def field_s(space, h):
    """Left field ``s(h) = l(h) + l(h)*``."""
    return left_creation(space, h) + left_annihilation(space, h)


def field_d(space, h):
    """Right field ``d(h) = r(h) + r(h)*``."""
    return right_creation(space, h) + right_annihilation(space, h)


def identity(space):
    return FockOperator(space, sp.identity(space.dim, dtype=complex, format="csr"), space.N)


def vacuum_projection(space):
    m = sp.csr_matrix(([1.0 + 0j], ([0], [0])), shape=(space.dim, space.dim))
    return FockOperator(space, m, space.N)


def flip(space):
    """The involution ``Z`` reversing the order of tensor factors."""
    perm = _kernels.flip_permutation(space.d, space.N)
    m = sp.csr_matrix(
        (np.ones(space.dim, dtype=complex), (perm, np.arange(space.dim))),
        shape=(space.dim, space.dim),
    )
    return FockOperator(space, m, space.N)


def second_quantize(space, u):
    """``Gamma(u)``: ``u (x) ... (x) u`` on each sector, 1 on the vacuum."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (space.d, space.d):
        raise ValueError(f"one-particle map has shape {u.shape}, expected ({space.d}, {space.d})")
    blocks = [sp.identity(1, dtype=complex, format="csr")]
    current = blocks[0]
    u_sparse = sp.csr_matrix(u)
    for _ in range(space.N):
        current = sp.kron(current, u_sparse, format="csr")
        blocks.append(current)
    return FockOperator(space, sp.block_diag(blocks, format="csr"), space.N)


def conformal_hamiltonian_gibbs(space, irrep, beta):
    """``exp(-beta L)`` with ``L`` the second quantization of the rotation generator.

    Built directly as a diagonal; entry at ``(a_1..a_k)`` is
    ``exp(-2 pi beta sum(n + a_i))``.
    """
    if irrep.d != space.d:
        raise ValueError(f"irrep has d={irrep.d} but the space has d={space.d}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    weights = np.exp(-beta * rotation_spectrum(irrep))
    diag = _kernels.product_diagonal(space.d, space.N, weights)
    return FockOperator(space, sp.diags(diag.astype(complex), format="csr"), space.N)


def gibbs_trace(space, irrep, beta):
    """Trace of :func:`conformal_hamiltonian_gibbs`, summed sector by sector."""
    op = conformal_hamiltonian_gibbs(space, irrep, beta)
    diag = op.matrix.diagonal().real
    return math.fsum(diag)


# --------------------------------------------------------------------------
# Checks built on the fields
# --------------------------------------------------------------------------


def commutator(a, b):
    return a @ b - b @ a


def commutator_defect(space, h, k):
    """Band norm of ``[s(h), d(k)] - 2i Im<h,k> P_Omega`` on sectors ``<= N-2``."""
    if space.N < 2:
        raise TruncationError("commutator_defect needs N >= 2")
    c = commutator(field_s(space, h), field_d(space, k))
    c = c - (2j * inner(h, k).imag) * vacuum_projection(space)
    return c.band_norm(space.N - 2)


def commutator_band_norm(space, h, k):
    """Band norm of ``[s(h), d(k)]`` on sectors ``<= N-2``."""
    if space.N < 2:
        raise TruncationError("commutator needs N >= 2")
    return commutator(field_s(space, h), field_d(space, k)).band_norm(space.N - 2)


def vacuum_moment(space, h, p, cyclic=True):
    """``<s(h)^p Omega, Omega>``.

    With ``cyclic=True`` the power is taken on the Fock space over the line
    spanned by ``h`` (an ``(N+1)``-dimensional Jacobi matrix), which gives the
    same moment; otherwise the full truncated space is used.
    """
    p = int(p)
    if p < 0:
        raise ValueError("moment order must be nonnegative")
    h = _one_particle(space, h)
    if space.N < math.ceil(p / 2):
        raise TruncationError(f"N={space.N} is too small for moment order {p}")
    if cyclic:
        line = TruncatedFockSpace(1, space.N)
        s = field_s(line, np.array([np.linalg.norm(h)]))
    else:
        s = field_s(space, h)
    v = FockVector.vacuum(s.space).coeffs
    for _ in range(p):
        v = s.matrix @ v
    return complex(v[0])
