"""Right dilations at integer times.

``K_breve`` is the truncated Fock space of the window ``[0, N_max)`` with
``omega_breve`` its vacuum; ``w_breve_n`` writes ``x in E_n`` onto the first
``n`` time units and pushes the old content right.  The big space is
``K = L (x) K_breve`` with ``L = int_0^1 E_alpha d alpha``; a vector of ``K`` is a
:class:`~fockdilation.direct_integral.Section` with ``right_dim = dim K_breve``.
A leading (``left_dim``) axis is used as a batch axis, so ``w_n*`` of a batch of
``B`` vectors is a section with ``left_dim = B * dim E_n`` (batch-major).

The window realizes the inductive limit of the vacuum unit.  Over-cutoff
components are dropped; content pushed past the window edge raises
:class:`TruncationOverflow`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .direct_integral import Section
from .grid_fock import (
    FockVector,
    IntervalSpec,
    OccupationBasis,
    TruncationOverflow,
    basis_table,
    concat_indices,
    factorize,
    multiply,
    restrict_indices,
    translate,
)
from .product_system import ProductSystem, Unit

__all__ = [
    "DiscreteDilation",
    "BigSpace",
    "TruncationOverflow",
    "embed_indices",
    "w_n_adjoint_on_Qrange",
    "stinespring_block",
]


def embed_indices(nsmall: int, nbig: int, cutoff: int) -> np.ndarray:
    """Index in the ``nbig``-cell basis of every state of the ``nsmall``-cell basis (zero tail)."""
    small = basis_table(nsmall, cutoff)
    return concat_indices(nsmall, np.arange(small.dim), nbig - nsmall, np.zeros(small.dim, dtype=np.int64), cutoff)


@dataclass(frozen=True)
class DiscreteDilation:
    system: ProductSystem
    window: int = 3

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be a positive number of time units")

    @property
    def ncells(self) -> int:
        return self.window * self.system.m

    @property
    def cutoff(self) -> int:
        return self.system.grid.cutoff

    @property
    def basis(self) -> OccupationBasis:
        return OccupationBasis(IntervalSpec(0, self.ncells), self.cutoff)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def omega(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.complex128)
        v[0] = 1.0
        return v

    def _check_n(self, n: int):
        if not 0 <= n <= self.window:
            raise TruncationOverflow(f"time {n} exceeds the window of {self.window} units; increase --window")

    def split_map(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """For each window state ``z'``: index of its head in ``E_n`` and of its shifted tail in the window."""
        self._check_n(n)
        return _wbreve_split(self.ncells, n * self.system.m, self.cutoff)

    def clean_mask(self, n: int) -> np.ndarray:
        """Window states with no occupation in the last ``n`` time units."""
        self._check_n(n)
        cells = basis_table(self.ncells, self.cutoff).cells
        limit = self.ncells - n * self.system.m
        return np.all((cells < limit) | (cells == self.ncells), axis=1)

    def w_breve(self, n: int, x: FockVector, y: np.ndarray) -> np.ndarray:
        """``w_breve_n (x (x) y)``: ``x`` on ``[0, n)`` followed by ``y`` shifted right by ``n``."""
        if x.basis.ncells != n * self.system.m:
            raise ValueError("x must live in E_n")
        T = np.multiply.outer(x.coefficients, np.asarray(y, dtype=np.complex128))
        return self.apply(n, T)

    def apply(self, n: int, T: np.ndarray, strict: bool = True) -> np.ndarray:
        """``w_breve_n`` on a tensor of shape ``(..., dim E_n, dim K_breve)``."""
        head, tail = self.split_map(n)
        T = np.asarray(T)
        if strict:
            dirty = ~self.clean_mask(n)
            if np.any(np.abs(T[..., dirty]) > 0):
                raise TruncationOverflow(
                    f"input occupies the last {n} time units of the {self.window}-unit window; increase --window"
                )
        return T[..., head, tail]

    def adjoint(self, n: int, v: np.ndarray) -> np.ndarray:
        """``w_breve_n*``: shape ``(..., dim K_breve)`` to ``(..., dim E_n, dim K_breve)``."""
        head, tail = self.split_map(n)
        v = np.asarray(v, dtype=np.complex128)
        out = np.zeros(v.shape[:-1] + (basis_table(n * self.system.m, self.cutoff).dim, self.dim), dtype=np.complex128)
        out[..., head, tail] = v
        return out

    def vacuum_projection(self, n: int) -> np.ndarray:
        """Projection onto window vectors with no occupation beyond time ``n``."""
        return np.diag(self.clean_mask(self.window - n).astype(float))

    def theta_breve_vacuum_projection(self, n: int) -> np.ndarray:
        """``theta_breve_n(omega omega*) = sum_e w(e (x) omega) w(e (x) omega)*`` by conjugation."""
        self._check_n(n)
        dn = basis_table(n * self.system.m, self.cutoff).dim
        T = np.zeros((dn, dn, self.dim), dtype=np.complex128)
        T[np.arange(dn), np.arange(dn), 0] = 1.0
        V = self.apply(n, T)
        return V.T @ V.conj()


_SPLIT_CACHE: dict = {}


def _wbreve_split(ncells: int, ncut: int, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    key = (ncells, ncut, cutoff)
    if key not in _SPLIT_CACHE:
        head = restrict_indices(ncells, 0, ncut, cutoff)
        tail_short = restrict_indices(ncells, ncut, ncells, cutoff)
        tail = embed_indices(ncells - ncut, ncells, cutoff)[tail_short]
        _SPLIT_CACHE[key] = (head, tail)
    return _SPLIT_CACHE[key]


class BigSpace:
    """``K = L (x) K_breve`` with the integer-time right dilation ``w_n``."""

    def __init__(self, system: ProductSystem, window: int = 3):
        self.system = system
        self.kbreve = DiscreteDilation(system, window)
        self._maps: dict[int, list] = {}

    @property
    def h(self) -> float:
        return self.system.h

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.dim for b in self.system.section_bases())

    @property
    def dim(self) -> int:
        return sum(self.dims) * self.kbreve.dim

    def dim_E(self, n: int) -> int:
        return basis_table(n * self.system.m, self.system.grid.cutoff).dim

    def embed(self, Y: Section) -> Section:
        """``Y (x) omega_breve`` for a batch section ``Y`` of ``L``."""
        comps = []
        for y in Y.components:
            z = np.zeros(y.shape[:2] + (self.kbreve.dim,), dtype=np.complex128)
            z[:, :, 0] = y[:, :, 0]
            comps.append(z)
        return Section(tuple(comps), Y.weight)

    def extract(self, Xi: Section) -> Section:
        """``(id_L (x) omega_breve*) Xi``."""
        return Section(tuple(x[:, :, :1] for x in Xi.components), Xi.weight)

    def Q(self, Xi: Section) -> Section:
        """``Q = id_L (x) omega_breve omega_breve*``."""
        return self.embed(self.extract(Xi))

    def random(self, rng, batch: int = 1) -> Section:
        comps = tuple(
            rng.normal(size=(batch, d, self.kbreve.dim)) + 1j * rng.normal(size=(batch, d, self.kbreve.dim))
            for d in self.dims
        )
        X = Section(comps, self.h)
        return X * (1.0 / X.norm()) if batch == 1 else X

    def _block_maps(self, n: int):
        """Per component: flat output positions in ``E_a (x) K_breve`` and the source ``(x, y, z)``."""
        if n in self._maps:
            return self._maps[n]
        m, cutoff = self.system.m, self.system.grid.cutoff
        nm = n * m
        head, tail = self.kbreve.split_map(n)
        kd = self.kbreve.dim
        maps = []
        for a in self.system.alpha_cells():
            da = basis_table(a, cutoff).dim
            yp = np.repeat(np.arange(da), kd)
            zp = np.tile(np.arange(kd), da)
            s = concat_indices(a, yp, nm, head[zp], cutoff)
            ok = s >= 0
            s = s[ok]
            x_idx = restrict_indices(a + nm, 0, nm, cutoff)[s]
            y_idx = restrict_indices(a + nm, nm, a + nm, cutoff)[s]
            out_flat = (yp * kd + zp)[ok]
            maps.append((out_flat, x_idx, y_idx, tail[zp[ok]]))
        self._maps[n] = maps
        return maps

    def apply_w(self, n: int, T: Section, strict: bool = True) -> Section:
        """``w_n`` on a batch section of ``E_n (x) K`` (``left_dim = B * dim E_n``)."""
        dn = self.dim_E(n)
        if T.left_dim % dn:
            raise ValueError("left dimension is not a multiple of dim E_n")
        B = T.left_dim // dn
        clean = self.kbreve.clean_mask(n) if strict else None
        comps = []
        for (out_flat, xi, yi, zi), t, da in zip(self._block_maps(n), T.components, self.dims):
            t = t.reshape(B, dn, da, self.kbreve.dim)
            if strict and np.any(np.abs(t[..., ~clean]) > 0):
                raise TruncationOverflow(
                    f"K_breve content would be pushed past the {self.kbreve.window}-unit window; increase --window"
                )
            out = np.zeros((B, da * self.kbreve.dim), dtype=np.complex128)
            out[:, out_flat] = t[:, xi, yi, zi]
            comps.append(out.reshape(B, da, self.kbreve.dim))
        return Section(tuple(comps), T.weight)

    def apply_w_adjoint(self, n: int, Xi: Section) -> Section:
        """``w_n*``: batch section of ``K`` to batch section of ``E_n (x) K``."""
        dn = self.dim_E(n)
        B = Xi.left_dim
        comps = []
        for (out_flat, xi, yi, zi), v, da in zip(self._block_maps(n), Xi.components, self.dims):
            t = np.zeros((B, dn, da, self.kbreve.dim), dtype=np.complex128)
            t[:, xi, yi, zi] = v.reshape(B, -1)[:, out_flat]
            comps.append(t.reshape(B * dn, da, self.kbreve.dim))
        return Section(tuple(comps), Xi.weight)

    def w_n(self, n: int, x: FockVector, Xi: Section) -> Section:
        """``w_n (x (x) Xi)`` for a single ``K`` vector ``Xi``."""
        if x.basis.ncells != n * self.system.m:
            raise ValueError("x must live in E_n")
        T = Section(tuple(x.coefficients[:, None, None] * c[0][None] for c in Xi.components), Xi.weight)
        return self.apply_w(n, T)

    def theta(self, n: int, op, Xi: Section) -> Section:
        """``theta_n(A) Xi = w_n (id_n (x) A) w_n* Xi`` for ``A`` given as a batch map on ``K``."""
        return self.apply_w(n, op(self.apply_w_adjoint(n, Xi)))

    def Q_n(self, n: int, Xi: Section) -> Section:
        """``Q_n = theta_n(Q)``."""
        return self.theta(n, self.Q, Xi)


def w_n_adjoint_on_Qrange(n: int, Y: Section, unit: Unit) -> Section:
    """``w_n*(Y (x) omega_breve)`` with the ``omega_breve`` factor dropped.

    Component ``alpha`` is ``u_{n,alpha}*(y_alpha omega_n)``, returned as a section
    of ``E_n (x) L`` (``left_dim = dim E_n``).
    """
    system = unit.system
    m, cutoff = system.m, system.grid.cutoff
    if Y.left_dim != 1 or Y.right_dim != 1:
        raise ValueError("Y must be a section of L")
    comps = []
    for a, y in zip(system.alpha_cells(), Y.components):
        ya = FockVector(OccupationBasis(IntervalSpec(0, a), cutoff), y[0, :, 0])
        omega = translate(unit.vector_cells(n * m), a)
        comps.append(factorize(multiply(ya, omega), n * m).to_dense()[:, :, None])
    return Section(tuple(comps), Y.weight)


def stinespring_block(n: int, a: int, omega_n: np.ndarray, cutoff: int, m: int) -> np.ndarray:
    """Dense ``G[e, y_out, y_in]`` of ``y -> u_{n,alpha}*(y omega_n)`` on ``E_alpha`` (``a`` cells).

    Every state ``s`` of ``E_{alpha+n}`` contributes ``omega_n[s|_[alpha, alpha+n)]`` at
    ``(s|_[0,n), s|_[n, n+alpha), s|_[0,alpha))``.
    """
    nm = n * m
    ntot = a + nm
    dn = basis_table(nm, cutoff).dim
    da = basis_table(a, cutoff).dim
    y_in = restrict_indices(ntot, 0, a, cutoff)
    w_idx = restrict_indices(ntot, a, ntot, cutoff)
    e = restrict_indices(ntot, 0, nm, cutoff)
    y_out = restrict_indices(ntot, nm, ntot, cutoff)
    G = np.zeros((dn, da, da), dtype=np.complex128)
    G[e, y_out, y_in] = omega_n[w_idx]
    return G
