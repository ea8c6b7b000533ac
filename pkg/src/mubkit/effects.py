"""Effects, states, and the sequential product A o B = sqrt(A) B sqrt(A)."""
from __future__ import annotations

import numpy as np

from . import linalg
from .errors import DimMismatch, NotPositive, SpectrumOutOfRange


class Effect:
    """A Hermitian operator with spectrum inside [0, 1] (within tolerance).

    Validation happens once, at construction, and computes the spectral
    decomposition; it is kept on the instance so later predicate and square
    root calls never re-diagonalize. Instances are immutable.
    """

    __slots__ = ("matrix", "_spectral", "_sqrt", "_complement")

    def __init__(self, matrix, tol: float | None = None):
        m = linalg.as_matrix(matrix)
        herm_tol = linalg.default_tol(m.shape[0]) if tol is None else tol
        eig_tol = linalg.EIGENVALUE_TOL if tol is None else tol
        spectral = linalg.hermitian_eig(m, herm_tol)
        w = spectral.eigenvalues
        if w[0] < -eig_tol or w[-1] > 1.0 + eig_tol:
            bad = w[0] if w[0] < -eig_tol else w[-1]
            raise SpectrumOutOfRange(f"eigenvalue {bad!r} outside [0, 1] by more than {eig_tol:.3e}")
        self.matrix = m
        self._spectral = spectral
        self._sqrt = None
        self._complement = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectral(self) -> linalg.SpectralDecomposition:
        return self._spectral

    def sqrt(self) -> np.ndarray:
        """The positive square root, computed once from the cached spectrum.

        Eigenvalues inside the zero-classification band are snapped to zero
        first; otherwise sqrt() amplifies 1e-17 solver noise on projections
        to 3e-9 and sequential products lose six digits.
        """
        if self._sqrt is None:
            w, v = self._spectral
            w = np.where(w < linalg.EIGENVALUE_TOL, 0.0, w)
            r = (v * np.sqrt(w)) @ v.conj().T
            self._sqrt = linalg.freeze((r + r.conj().T) / 2.0)
        return self._sqrt

    def complement(self) -> "Effect":
        """I - A. Complementing twice returns the original object exactly."""
        if self._complement is None:
            comp = Effect(np.eye(self.dim, dtype=complex) - self.matrix)
            comp._complement = self
            self._complement = comp
        return self._complement

    def is_sharp(self, tol: float | None = None) -> bool:
        """True when every eigenvalue sits at 0 or 1 within ``tol``."""
        if tol is None:
            tol = linalg.EIGENVALUE_TOL
        w = self._spectral.eigenvalues
        return bool(np.all((np.abs(w) <= tol) | (np.abs(w - 1.0) <= tol)))

    def is_atomic(self, tol: float | None = None) -> bool:
        """True for rank-one projections: sharp with exactly one unit eigenvalue."""
        if tol is None:
            tol = linalg.EIGENVALUE_TOL
        w = self._spectral.eigenvalues
        return self.is_sharp(tol) and int(np.sum(np.abs(w - 1.0) <= tol)) == 1

    def is_invertible(self, tol: float | None = None) -> bool:
        """True when every eigenvalue is at least ``tol``."""
        if tol is None:
            tol = linalg.EIGENVALUE_TOL
        return bool(self._spectral.eigenvalues[0] >= tol)

    def unit_eigenspace(self, tol: float | None = None) -> np.ndarray:
        """Orthonormal basis (d x k, possibly k = 0) of the eigenvalue-1 eigenspace."""
        if tol is None:
            tol = linalg.EIGENVALUE_TOL
        w, v = self._spectral
        return v[:, np.abs(w - 1.0) <= tol]

    def __repr__(self) -> str:
        return f"Effect(dim={self.dim})"


def effect_new(matrix, tol: float | None = None) -> Effect:
    """Validate a matrix as an effect. Alias for the Effect constructor."""
    return Effect(matrix, tol)


def complement(a: Effect) -> Effect:
    return a.complement()


def seq_product(a: Effect, b: Effect, tol: float | None = None) -> Effect:
    """Sequential product sqrt(A) B sqrt(A), validated as an effect.

    Not commutative and not associative in general; the result is
    symmetrized before validation to shed roundoff asymmetry.
    """
    if a.dim != b.dim:
        raise DimMismatch(f"dims {a.dim} and {b.dim} differ")
    r = a.sqrt() @ b.matrix @ a.sqrt()
    return Effect((r + r.conj().T) / 2.0, tol)


def commutes(a: Effect, b: Effect, tol: float | None = None) -> bool:
    """Whether AB = BA within ``tol`` (entrywise)."""
    if a.dim != b.dim:
        raise DimMismatch(f"dims {a.dim} and {b.dim} differ")
    if tol is None:
        tol = linalg.default_tol(a.dim)
    return linalg.max_abs(a.matrix @ b.matrix - b.matrix @ a.matrix) <= tol


class State:
    """Density operator: positive semidefinite with unit trace."""

    __slots__ = ("matrix", "_spectral")

    def __init__(self, matrix, tol: float | None = None):
        m = linalg.as_matrix(matrix)
        herm_tol = linalg.default_tol(m.shape[0]) if tol is None else tol
        eig_tol = linalg.EIGENVALUE_TOL if tol is None else tol
        spectral = linalg.hermitian_eig(m, herm_tol)
        if spectral.eigenvalues[0] < -eig_tol:
            raise NotPositive(f"state eigenvalue {spectral.eigenvalues[0]:.3e} below -{eig_tol:.3e}")
        tr = linalg.trace(m)
        if abs(tr - 1.0) > herm_tol:
            raise ValueError(f"state trace {tr} is not 1 within {herm_tol:.3e}")
        self.matrix = m
        self._spectral = spectral

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector) -> "State":
        """Rank-one state |v><v| from a (not necessarily normalized) vector."""
        v = np.asarray(vector, dtype=complex)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("zero vector cannot define a state")
        v = v / n
        return cls(np.outer(v, v.conj()))

    def __repr__(self) -> str:
        return f"State(dim={self.dim})"


def occurrence_probability(rho: State, a: Effect, tol: float | None = None) -> float:
    """tr(rho A): probability of the effect in the state, clamped to [0, 1]."""
    if rho.dim != a.dim:
        raise DimMismatch(f"dims {rho.dim} and {a.dim} differ")
    if tol is None:
        tol = linalg.default_tol(a.dim)
    raw = linalg.trace(rho.matrix @ a.matrix)
    if abs(raw.imag) > tol:
        raise ValueError(f"probability has imaginary part {raw.imag:.3e}")
    p = raw.real
    if p < -tol or p > 1.0 + tol:
        raise ValueError(f"probability {p!r} outside [0, 1] by more than {tol:.3e}")
    return float(min(max(p, 0.0), 1.0))
