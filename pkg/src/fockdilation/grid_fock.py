"""Truncated symmetric Fock spaces over grid intervals.

A Fock space over an interval of ``ncells`` grid cells is truncated at a total
particle number ``cutoff``.  Basis states are multisets of occupied cells, kept
as sorted cell tuples and enumerated in graded-lex order (total occupation
first, then lexicographic on the sorted cell tuple), so the vacuum is index 0
and index 1 is one particle in the leftmost cell.

Coordinates are orthonormal: the one-particle coordinate of a step function
``f`` on cell ``j`` is ``sqrt(h) * f(j)``.  All inner products are plain dot
products of coefficient arrays.

Tensor factorizations ``E_[a,c) = E_[a,b) (x) E_[b,c)`` are pure reindexings.
Since the cutoff is on the total particle number, a split of ``E_[a,c)`` lands
in the filtered set of pairs whose totals add up to at most ``cutoff``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial

import numpy as np

__all__ = [
    "GridSpec",
    "IntervalSpec",
    "OccupationBasis",
    "FockVector",
    "FilteredTensorBasis",
    "SplitVector",
    "TruncationOverflow",
    "basis_dimension",
    "basis_table",
    "split_table",
    "concat_indices",
    "restrict_indices",
    "exponential_vector",
    "vacuum",
    "basis_vector",
    "factorize",
    "multiply",
    "multiply_with_defect",
    "translate",
    "partial_inner_right",
]


class TruncationOverflow(RuntimeError):
    """Raised when a vector occupies cells outside the finite window."""


@dataclass(frozen=True)
class GridSpec:
    """Cell width ``h = 1 / cells_per_unit`` and total-occupation cutoff."""

    cells_per_unit: int
    cutoff: int

    def __post_init__(self):
        if int(self.cells_per_unit) != self.cells_per_unit or self.cells_per_unit < 1:
            raise ValueError(f"cells_per_unit must be a positive integer, got {self.cells_per_unit!r}")
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ValueError(f"cutoff must be an integer >= 1, got {self.cutoff!r}")

    @property
    def h(self) -> float:
        return 1.0 / self.cells_per_unit

    def cells(self, t) -> int:
        """Number of cells in a time span ``t``; ``t`` must lie on the grid."""
        ncells = t * self.cells_per_unit
        rounded = int(round(ncells))
        if abs(ncells - rounded) > 1e-9 or rounded < 0:
            raise ValueError(f"time {t!r} is not a nonnegative grid time for h = 1/{self.cells_per_unit}")
        return rounded


@dataclass(frozen=True)
class IntervalSpec:
    """Cells ``[start_cell, end_cell)``; the empty interval carries the vacuum only."""

    start_cell: int
    end_cell: int

    def __post_init__(self):
        if self.start_cell < 0 or self.end_cell < self.start_cell:
            raise ValueError(f"invalid interval [{self.start_cell}, {self.end_cell})")

    @property
    def ncells(self) -> int:
        return self.end_cell - self.start_cell

    def shifted(self, c: int) -> IntervalSpec:
        return IntervalSpec(self.start_cell + c, self.end_cell + c)


def basis_dimension(ncells: int, cutoff: int) -> int:
    """``sum_{k<=cutoff} C(ncells + k - 1, k)``."""
    if ncells == 0:
        return 1
    return sum(comb(ncells + k - 1, k) for k in range(cutoff + 1))


class _BasisTable:
    """Translation-invariant enumeration of the basis of ``ncells`` cells.

    ``cells`` has shape ``(dim, cutoff)``; row ``i`` holds the sorted occupied
    cells of state ``i`` padded with ``ncells``.  States are looked up through
    an integer key (base ``ncells + 1`` digits) and a sorted key array.
    """

    def __init__(self, ncells: int, cutoff: int):
        self.ncells = ncells
        self.cutoff = cutoff
        base = ncells + 1
        if cutoff * np.log2(max(base, 2)) > 62:
            raise ValueError(f"basis of {ncells} cells with cutoff {cutoff} is too large to index")
        rows = []
        for k in range(cutoff + 1):
            if ncells == 0 and k > 0:
                break
            for tup in combinations_with_replacement(range(ncells), k):
                rows.append(tup + (ncells,) * (cutoff - k))
        self.cells = np.array(rows, dtype=np.int64).reshape(len(rows), cutoff)
        self.totals = (self.cells < ncells).sum(axis=1)
        self.dim = len(rows)
        self._powers = base ** np.arange(cutoff - 1, -1, -1, dtype=np.int64)
        keys = self.keys(self.cells)
        self._order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._order]
        self.cells.setflags(write=False)
        self.totals.setflags(write=False)

    def keys(self, cells: np.ndarray) -> np.ndarray:
        # pad value ncells maps to digit 0, cell c maps to digit c + 1
        digits = np.where(cells >= self.ncells, 0, cells + 1)
        return digits @ self._powers

    def lookup(self, cells: np.ndarray) -> np.ndarray:
        """Indices of the states given as padded sorted cell rows."""
        keys = self.keys(cells)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.dim - 1)
        if not np.array_equal(self._sorted_keys[pos], keys):
            raise KeyError("state not in basis")
        return self._order[pos]

    def occupations(self) -> np.ndarray:
        """Occupation-number vectors, shape ``(dim, ncells)``."""
        occ = np.zeros((self.dim, self.ncells + 1), dtype=np.int64)
        rows = np.repeat(np.arange(self.dim), self.cutoff)
        np.add.at(occ, (rows, self.cells.ravel()), 1)
        return occ[:, : self.ncells]


@lru_cache(maxsize=None)
def basis_table(ncells: int, cutoff: int) -> _BasisTable:
    return _BasisTable(ncells, cutoff)


def _relabel(cells: np.ndarray, lo: int, hi: int, out_pad: int) -> np.ndarray:
    """Keep cells in ``[lo, hi)``, shift them by ``-lo`` and re-sort the padding to the end."""
    inside = (cells >= lo) & (cells < hi)
    moved = np.where(inside, cells - lo, out_pad)
    return np.sort(moved, axis=1)


@lru_cache(maxsize=None)
def restrict_indices(ncells: int, lo: int, hi: int, cutoff: int) -> np.ndarray:
    """For each state of ``ncells`` cells, the index of its restriction to cells ``[lo, hi)``."""
    src = basis_table(ncells, cutoff)
    dst = basis_table(hi - lo, cutoff)
    out = dst.lookup(_relabel(src.cells, lo, hi, hi - lo))
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def split_table(ncells: int, at: int, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Left and right factor indices of every state when split after ``at`` cells."""
    if not 0 <= at <= ncells:
        raise ValueError(f"split point {at} outside [0, {ncells}]")
    return restrict_indices(ncells, 0, at, cutoff), restrict_indices(ncells, at, ncells, cutoff)


def concat_indices(nleft: int, left_idx, nright: int, right_idx, cutoff: int, ntotal: int | None = None) -> np.ndarray:
    """Index of the concatenated state for each (left, right) index pair; ``-1`` past the cutoff.

    ``ntotal`` lets the result live in a larger basis (extra empty cells on the right).
    """
    ntotal = nleft + nright if ntotal is None else ntotal
    left = basis_table(nleft, cutoff)
    right = basis_table(nright, cutoff)
    dst = basis_table(ntotal, cutoff)
    left_idx = np.asarray(left_idx, dtype=np.int64)
    right_idx = np.asarray(right_idx, dtype=np.int64)
    lc = left.cells[left_idx]
    rc = right.cells[right_idx]
    lc = np.where(lc >= nleft, ntotal, lc)
    rc = np.where(rc >= nright, ntotal, rc + nleft)
    ok = left.totals[left_idx] + right.totals[right_idx] <= cutoff
    merged = np.sort(np.concatenate([lc, rc], axis=1), axis=1)[:, :cutoff]
    out = np.full(len(left_idx), -1, dtype=np.int64)
    if ok.any():
        out[ok] = dst.lookup(merged[ok])
    return out


@dataclass(frozen=True)
class OccupationBasis:
    """Truncated occupation basis of an interval."""

    interval: IntervalSpec
    cutoff: int

    @property
    def table(self) -> _BasisTable:
        return basis_table(self.interval.ncells, self.cutoff)

    @property
    def dim(self) -> int:
        return self.table.dim

    @property
    def ncells(self) -> int:
        return self.interval.ncells

    def occupations(self) -> np.ndarray:
        return self.table.occupations()

    def totals(self) -> np.ndarray:
        return self.table.totals

    def index_of(self, occupation) -> int:
        """Index of an occupation-number vector (one entry per cell)."""
        occupation = np.asarray(occupation, dtype=np.int64)
        if occupation.shape != (self.ncells,):
            raise ValueError("occupation vector has wrong length")
        cells = np.repeat(np.arange(self.ncells), occupation)
        if len(cells) > self.cutoff:
            raise KeyError("total occupation above cutoff")
        row = np.full((1, self.cutoff), self.ncells, dtype=np.int64)
        row[0, : len(cells)] = cells
        return int(self.table.lookup(row)[0])


@dataclass(frozen=True, eq=False)
class FockVector:
    """Coefficients over an :class:`OccupationBasis`."""

    basis: OccupationBasis
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=np.complex128)
        if coeffs.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} coefficients, got shape {coeffs.shape}")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def interval(self) -> IntervalSpec:
        return self.basis.interval

    def inner(self, other: FockVector) -> complex:
        """``<self, other>``, conjugate-linear in ``self``."""
        if self.basis.dim != other.basis.dim:
            raise ValueError("vectors live on different bases")
        return complex(np.vdot(self.coefficients, other.coefficients))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def __add__(self, other: FockVector) -> FockVector:
        if self.basis != other.basis:
            raise ValueError("vectors live on different bases")
        return FockVector(self.basis, self.coefficients + other.coefficients)

    def __sub__(self, other: FockVector) -> FockVector:
        if self.basis != other.basis:
            raise ValueError("vectors live on different bases")
        return FockVector(self.basis, self.coefficients - other.coefficients)

    def __mul__(self, scalar) -> FockVector:
        return FockVector(self.basis, self.coefficients * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class FilteredTensorBasis:
    """Pairs ``(left index, right index)`` with total occupation within the cutoff.

    Pairs are ordered by the index of the concatenated state, so position ``i``
    is the image of basis state ``i`` of the joined interval.
    """

    left: OccupationBasis
    right: OccupationBasis

    def __post_init__(self):
        if self.left.interval.end_cell != self.right.interval.start_cell:
            raise ValueError("intervals are not adjacent")
        if self.left.cutoff != self.right.cutoff:
            raise ValueError("cutoff mismatch")

    @property
    def joined(self) -> OccupationBasis:
        return OccupationBasis(IntervalSpec(self.left.interval.start_cell, self.right.interval.end_cell), self.left.cutoff)

    @property
    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        return split_table(self.joined.ncells, self.left.ncells, self.left.cutoff)

    def __len__(self) -> int:
        return self.joined.dim


@dataclass(frozen=True, eq=False)
class SplitVector:
    """A vector of ``E_left (x) E_right`` supported on the filtered pairs."""

    tensor_basis: FilteredTensorBasis
    coefficients: np.ndarray = field(repr=False)

    def to_dense(self) -> np.ndarray:
        li, ri = self.tensor_basis.pairs
        out = np.zeros((self.tensor_basis.left.dim, self.tensor_basis.right.dim), dtype=np.complex128)
        out[li, ri] = self.coefficients
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def contract_right(self, x: np.ndarray) -> np.ndarray:
        """``(id (x) x*)`` applied to this vector."""
        li, ri = self.tensor_basis.pairs
        return _bincount_complex(li, self.coefficients * np.conj(x)[ri], self.tensor_basis.left.dim)

    def contract_left(self, x: np.ndarray) -> np.ndarray:
        """``(x* (x) id)`` applied to this vector."""
        li, ri = self.tensor_basis.pairs
        return _bincount_complex(ri, self.coefficients * np.conj(x)[li], self.tensor_basis.right.dim)


def _bincount_complex(idx: np.ndarray, values: np.ndarray, size: int) -> np.ndarray:
    return np.bincount(idx, values.real, size) + 1j * np.bincount(idx, values.imag, size)


def vacuum(interval: IntervalSpec, cutoff: int) -> FockVector:
    basis = OccupationBasis(interval, cutoff)
    coeffs = np.zeros(basis.dim, dtype=np.complex128)
    coeffs[0] = 1.0
    return FockVector(basis, coeffs)


def basis_vector(interval: IntervalSpec, cutoff: int, index: int) -> FockVector:
    basis = OccupationBasis(interval, cutoff)
    if not 0 <= index < basis.dim:
        raise IndexError(f"basis index {index} out of range for dimension {basis.dim}")
    coeffs = np.zeros(basis.dim, dtype=np.complex128)
    coeffs[index] = 1.0
    return FockVector(basis, coeffs)


def exponential_vector(f, basis: OccupationBasis, h: float) -> FockVector:
    """Truncated exponential vector of the step function with cell values ``f``.

    The coefficient of occupation ``n`` is ``prod_j phi_j**n_j / sqrt(n_j!)``
    with ``phi_j = sqrt(h) * f[j]``.
    """
    f = np.atleast_1d(np.asarray(f, dtype=np.complex128))
    if f.shape != (basis.ncells,):
        raise ValueError(f"step function has {f.size} values for {basis.ncells} cells")
    phi = np.sqrt(h) * f
    occ = basis.occupations()
    inv_sqrt_fact = np.array([1.0 / np.sqrt(factorial(k)) for k in range(basis.cutoff + 1)])
    coeffs = np.ones(basis.dim, dtype=np.complex128)
    for j in range(basis.ncells):
        coeffs *= phi[j] ** occ[:, j] * inv_sqrt_fact[occ[:, j]]
    return FockVector(basis, coeffs)


def factorize(x: FockVector, at_cell: int) -> SplitVector:
    """Split ``x`` on ``[a, c)`` at the absolute cell ``at_cell`` into ``[a, b) (x) [b, c)``."""
    iv = x.interval
    if not iv.start_cell <= at_cell <= iv.end_cell:
        raise ValueError(f"split point {at_cell} outside [{iv.start_cell}, {iv.end_cell}]")
    cutoff = x.basis.cutoff
    tb = FilteredTensorBasis(
        OccupationBasis(IntervalSpec(iv.start_cell, at_cell), cutoff),
        OccupationBasis(IntervalSpec(at_cell, iv.end_cell), cutoff),
    )
    return SplitVector(tb, x.coefficients)


def multiply_with_defect(x: FockVector, y: FockVector) -> tuple[FockVector, float]:
    """Product ``x y`` of adjacent-interval vectors and the norm of the dropped part."""
    if x.interval.end_cell != y.interval.start_cell:
        raise ValueError("intervals are not adjacent")
    if x.basis.cutoff != y.basis.cutoff:
        raise ValueError("cutoff mismatch")
    tb = FilteredTensorBasis(x.basis, y.basis)
    li, ri = tb.pairs
    coeffs = x.coefficients[li] * y.coefficients[ri]
    kept = float(np.vdot(coeffs, coeffs).real)
    full = float(np.vdot(x.coefficients, x.coefficients).real * np.vdot(y.coefficients, y.coefficients).real)
    return FockVector(tb.joined, coeffs), float(np.sqrt(max(full - kept, 0.0)))


def multiply(x: FockVector, y: FockVector) -> FockVector:
    """Product ``x y``; components above the cutoff are dropped."""
    return multiply_with_defect(x, y)[0]


def translate(x: FockVector, shift: int) -> FockVector:
    iv = x.interval
    if iv.start_cell + shift < 0:
        raise ValueError(f"translation by {shift} cells leaves the half-line")
    return FockVector(OccupationBasis(iv.shifted(shift), x.basis.cutoff), x.coefficients)


def partial_inner_right(y: FockVector, x: FockVector) -> FockVector:
    """``(id (x) x*) y`` for ``y`` on ``[a, c)`` and ``x`` on a suffix ``[b, c)``."""
    iv, sub = y.interval, x.interval
    if sub.end_cell != iv.end_cell or not iv.start_cell <= sub.start_cell <= iv.end_cell:
        raise ValueError(f"[{sub.start_cell}, {sub.end_cell}) is not a suffix of [{iv.start_cell}, {iv.end_cell})")
    if x.basis.cutoff != y.basis.cutoff:
        raise ValueError("cutoff mismatch")
    split = factorize(y, sub.start_cell)
    return FockVector(split.tensor_basis.left, split.contract_right(x.coefficients))
