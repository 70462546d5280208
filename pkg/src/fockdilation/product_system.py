"""The type I product system on the grid: spaces ``E_t``, units, ONB and f-sections.

Grid representatives of ``[0, 1)`` are the right endpoints ``alpha_j = (j + 1) h``
for ``j = 0 .. m - 1``, each carrying weight ``h``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid_fock import (
    FockVector,
    GridSpec,
    IntervalSpec,
    OccupationBasis,
    basis_dimension,
    basis_vector,
    exponential_vector,
    partial_inner_right,
    translate,
    vacuum,
)

__all__ = [
    "ProductSystem",
    "Unit",
    "OnbSection",
    "FSection",
    "truncated_exp",
    "unit_vector",
    "onb_section",
    "f_section",
    "m_integral",
]


def truncated_exp(x: float, cutoff: int) -> float:
    """``S(x) = sum_{k<=cutoff} x**k / k!``."""
    term, total = 1.0, 1.0
    for k in range(1, cutoff + 1):
        term *= x / k
        total += term
    return total


@dataclass(frozen=True)
class ProductSystem:
    grid: GridSpec

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def m(self) -> int:
        return self.grid.cells_per_unit

    def space(self, t, start_cell: int = 0) -> OccupationBasis:
        """``E_t`` realized on ``[start_cell, start_cell + t/h)``."""
        n = self.grid.cells(t)
        return OccupationBasis(IntervalSpec(start_cell, start_cell + n), self.grid.cutoff)

    def alphas(self) -> np.ndarray:
        """Right-endpoint representatives of the cells of ``[0, 1)``."""
        return (np.arange(self.m) + 1) * self.h

    def alpha_cells(self) -> list[int]:
        return list(range(1, self.m + 1))

    def section_bases(self) -> list[OccupationBasis]:
        """Bases of ``E_{alpha_j}`` on ``[0, alpha_j)``."""
        return [OccupationBasis(IntervalSpec(0, a), self.grid.cutoff) for a in self.alpha_cells()]


@dataclass(frozen=True)
class Unit:
    """Normalized truncated exponential unit ``omega_t = e(c 1_[0,t)) / ||.||``; ``c = 0`` is the vacuum."""

    system: ProductSystem
    c: complex = 0.0

    def vector(self, t, start_cell: int = 0) -> FockVector:
        return unit_vector(self.system, self.c, t, start_cell)

    def vector_cells(self, ncells: int, start_cell: int = 0) -> FockVector:
        return unit_vector(self.system, self.c, ncells * self.system.h, start_cell)

    @property
    def is_vacuum(self) -> bool:
        return self.c == 0


def unit_vector(system: ProductSystem, c: complex, t, start_cell: int = 0) -> FockVector:
    basis = system.space(t, start_cell)
    if c == 0:
        return vacuum(basis.interval, basis.cutoff)
    e = exponential_vector(np.full(basis.ncells, c), basis, system.h)
    return e * (1.0 / e.norm())


@dataclass(frozen=True, eq=False)
class OnbSection:
    """The ``k``-th graded-lex basis vector of ``E_alpha`` for every grid ``alpha`` (``k`` 1-based)."""

    system: ProductSystem
    k: int
    vectors: tuple[FockVector, ...] = field(repr=False)


@dataclass(frozen=True, eq=False)
class FSection:
    """``f^k_{1-alpha} = (id (x) e^k_alpha*) omega_1`` for each grid ``alpha``, on ``[0, 1 - alpha)``."""

    system: ProductSystem
    k: int
    vectors: tuple[FockVector, ...] = field(repr=False)

    def norms_squared(self) -> np.ndarray:
        return np.array([v.norm() ** 2 for v in self.vectors])


def _check_k(system: ProductSystem, k: int):
    kmax = basis_dimension(1, system.grid.cutoff)
    if not 1 <= k <= kmax:
        raise ValueError(f"ONB index k={k} must lie in [1, {kmax}] to exist for every alpha")


def onb_section(system: ProductSystem, k: int) -> OnbSection:
    _check_k(system, k)
    vectors = tuple(basis_vector(IntervalSpec(0, a), system.grid.cutoff, k - 1) for a in system.alpha_cells())
    return OnbSection(system, k, vectors)


def f_section(k: int, omega1: FockVector, system: ProductSystem) -> FSection:
    """Pair ``omega_1`` on ``[0, 1)`` against ``e^k_alpha`` translated to ``[1 - alpha, 1)``."""
    _check_k(system, k)
    m = system.m
    if omega1.interval != IntervalSpec(0, m):
        raise ValueError("omega_1 must live on [0, 1)")
    vectors = []
    for a in system.alpha_cells():
        e = translate(basis_vector(IntervalSpec(0, a), system.grid.cutoff, k - 1), m - a)
        vectors.append(partial_inner_right(omega1, e))
    return FSection(system, k, tuple(vectors))


def m_integral(F: FSection) -> float:
    """``M^2 = sum_j h ||f^k_{1-alpha_j}||^2``."""
    return float(F.system.h * F.norms_squared().sum())
