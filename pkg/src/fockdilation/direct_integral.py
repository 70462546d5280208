"""Sections of ``int (H1 (x) E_alpha (x) H2) d alpha`` as weighted grid families.

Component ``j`` is a coefficient array of shape ``(left_dim, dim E_{alpha_j}, right_dim)``
and enters every integral with the weight ``h``.  Bases differ across ``j``, so
components are stored separately rather than padded.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Section",
    "section_inner",
    "apply_id_tensor_adjoint",
    "tensor_left",
    "corollary_composite",
]


@dataclass(frozen=True, eq=False)
class Section:
    components: tuple[np.ndarray, ...] = field(repr=False)
    weight: float

    def __post_init__(self):
        comps = []
        for c in self.components:
            c = np.asarray(c, dtype=np.complex128)
            if c.ndim == 1:
                c = c[None, :, None]
            if c.ndim != 3:
                raise ValueError("section components must have shape (left_dim, dim, right_dim)")
            comps.append(c)
        if not comps:
            raise ValueError("empty section")
        left, right = comps[0].shape[0], comps[0].shape[2]
        if any(c.shape[0] != left or c.shape[2] != right for c in comps):
            raise ValueError("inconsistent H1/H2 dimensions across components")
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def zeros(cls, dims, weight: float, left_dim: int = 1, right_dim: int = 1) -> Section:
        return cls(tuple(np.zeros((left_dim, d, right_dim), dtype=np.complex128) for d in dims), weight)

    @classmethod
    def from_flat(cls, flat: np.ndarray, dims, weight: float, left_dim: int = 1, right_dim: int = 1) -> Section:
        """Inverse of :meth:`flat`."""
        flat = np.asarray(flat)
        comps, pos = [], 0
        for d in dims:
            size = left_dim * d * right_dim
            comps.append(flat[pos : pos + size].reshape(left_dim, d, right_dim) / np.sqrt(weight))
            pos += size
        if pos != flat.size:
            raise ValueError("flat vector has wrong length")
        return cls(tuple(comps), weight)

    @property
    def left_dim(self) -> int:
        return self.components[0].shape[0]

    @property
    def right_dim(self) -> int:
        return self.components[0].shape[2]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(c.shape[1] for c in self.components)

    def flat(self) -> np.ndarray:
        """Orthonormal coordinates: components scaled by ``sqrt(weight)`` and concatenated."""
        return np.sqrt(self.weight) * np.concatenate([c.ravel() for c in self.components])

    def norm(self) -> float:
        return float(np.sqrt(section_inner(self, self).real))

    def _check(self, other: Section):
        if self.dims != other.dims or self.weight != other.weight:
            raise ValueError("sections live on different grids")
        if self.left_dim != other.left_dim or self.right_dim != other.right_dim:
            raise ValueError("section shape mismatch")

    def __add__(self, other: Section) -> Section:
        self._check(other)
        return Section(tuple(a + b for a, b in zip(self.components, other.components)), self.weight)

    def __sub__(self, other: Section) -> Section:
        self._check(other)
        return Section(tuple(a - b for a, b in zip(self.components, other.components)), self.weight)

    def __mul__(self, scalar) -> Section:
        return Section(tuple(scalar * a for a in self.components), self.weight)

    __rmul__ = __mul__


def section_inner(X: Section, Y: Section) -> complex:
    """``sum_j h <x_j, y_j>``."""
    X._check(Y)
    return complex(X.weight * sum(np.vdot(x, y) for x, y in zip(X.components, Y.components)))


def _check_pair(X: Section, Y: Section):
    if X.left_dim != 1 or X.right_dim != 1:
        raise ValueError("X must be a section of int E_alpha d alpha")
    if X.dims != Y.dims or X.weight != Y.weight:
        raise ValueError("X and Y live on different grids")
    if Y.right_dim != 1:
        raise ValueError("Y must be a section of int (H1 (x) E_alpha) d alpha")


def apply_id_tensor_adjoint(X: Section, Y: Section) -> np.ndarray:
    """``(id_1 (x) X*) Y = sum_j h (id_1 (x) x_j*) y_j``, a vector of ``H1``."""
    _check_pair(X, Y)
    out = np.zeros(Y.left_dim, dtype=np.complex128)
    for x, y in zip(X.components, Y.components):
        out += y[:, :, 0] @ np.conj(x[0, :, 0])
    return X.weight * out


def tensor_left(z: np.ndarray, X: Section) -> Section:
    """The section ``(z (x) x_alpha)_alpha`` of ``int (H1 (x) E_alpha) d alpha``."""
    z = np.asarray(z, dtype=np.complex128)
    return Section(tuple(z[:, None, None] * x[0][None, :, :] for x in X.components), X.weight)


def corollary_composite(X: Section, X_prime: Section, Y: Section) -> Section:
    """``(id_1 (x) X' X*) Y``: contract ``Y`` against ``X`` then tensor with ``X'``."""
    _check_pair(X, Y)
    _check_pair(X_prime, Y)
    return tensor_left(apply_id_tensor_adjoint(X, Y), X_prime)
