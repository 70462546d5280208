"""Closed-form and brute-force oracles.

Nothing here imports the modules it checks: values come from truncated
exponential series, explicit tensor powers, or definition-level matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import exp, factorial

import numpy as np

__all__ = [
    "CoherentOracle",
    "S",
    "closed_form_m2",
    "continuum_m2",
    "limit_m2",
    "f_norm_squared",
    "isometry_defect_bound",
    "tensor_power_exponential_inner",
    "dense_adjoint_oracle",
    "spatial_dagger_value",
    "same_unit_dagger_tail",
    "section_overlap",
    "occupation_dimension",
]


def S(x: complex, cutoff: int) -> complex:
    """Truncated exponential series ``sum_{k<=cutoff} x**k / k!``."""
    return sum(x**k / factorial(k) for k in range(cutoff + 1))


@dataclass(frozen=True)
class CoherentOracle:
    c: complex
    cutoff: int

    def norm_squared(self, t: float) -> float:
        """Truncated ``||e(c 1_[0,t))||^2``."""
        return float(S(abs(self.c) ** 2 * t, self.cutoff).real)

    def inner(self, other_c: complex, t: float) -> complex:
        """Truncated ``<e(c 1_[0,t)), e(c' 1_[0,t))>``."""
        return S(np.conj(self.c) * other_c * t, self.cutoff)

    def tail(self, x: float) -> float:
        """``e^x - S(x) >= 0``."""
        return exp(x) - float(S(x, self.cutoff).real)


def occupation_dimension(ncells: int, cutoff: int) -> int:
    """Dimension by direct enumeration of occupation vectors."""
    if ncells == 0:
        return 1
    return sum(1 for occ in product(range(cutoff + 1), repeat=ncells) if sum(occ) <= cutoff)


def f_norm_squared(c: complex, gamma: float, cutoff: int) -> float:
    """``||f^1_{1-gamma}||^2 = S(|c|^2 (1 - gamma)) / S(|c|^2)``."""
    x = abs(c) ** 2
    return float((S(x * (1 - gamma), cutoff) / S(x, cutoff)).real)


def closed_form_m2(c: complex, cells_per_unit: int, cutoff: int) -> float:
    """Right-endpoint grid sum ``sum_j h S(|c|^2 (1 - gamma_j)) / S(|c|^2)``."""
    h = 1.0 / cells_per_unit
    return h * sum(f_norm_squared(c, (j + 1) * h, cutoff) for j in range(cells_per_unit))


def continuum_m2(c: complex, cutoff: int) -> float:
    """``int_0^1 S(|c|^2 (1 - gamma)) / S(|c|^2) d gamma`` at fixed cutoff (``h -> 0``)."""
    x = abs(c) ** 2
    num = sum(x**k / factorial(k + 1) for k in range(cutoff + 1))
    return float(num / S(x, cutoff).real)


def limit_m2(c: complex) -> float:
    """``(1 - e^{-|c|^2}) / |c|^2``, the limit ``h -> 0``, cutoff ``-> infinity``."""
    x = abs(c) ** 2
    return 1.0 if x == 0 else (1 - exp(-x)) / x


def isometry_defect_bound(c: complex, n: int, cutoff: int) -> float:
    """``max_k (1 - S_{cutoff-k}(|c|^2 n) / S_cutoff(|c|^2 n))`` = ``1 - 1 / S(|c|^2 n)``.

    A ``k``-particle vector times ``omega_n`` keeps the weight of the
    ``omega_n`` components with at most ``cutoff - k`` particles.
    """
    x = abs(c) ** 2 * n
    return float(1 - 1 / S(x, cutoff).real)


def tensor_power_exponential_inner(phi: np.ndarray, psi: np.ndarray, cutoff: int) -> complex:
    """``sum_k <phi^{(x)k}, psi^{(x)k}> / k!`` with explicit Kronecker powers."""
    total = 0.0 + 0.0j
    a = np.ones(1, dtype=np.complex128)
    b = np.ones(1, dtype=np.complex128)
    for k in range(cutoff + 1):
        total += np.vdot(a, b) / factorial(k)
        a = np.kron(a, phi)
        b = np.kron(b, psi)
    return complex(total)


def dense_adjoint_oracle(x_components, weight: float, left_dim: int, max_size: int = 5000) -> np.ndarray:
    """Matrix of ``(id_1 (x) X)*`` acting on raw coefficients of ``int (H1 (x) E_alpha) d alpha``.

    Built entry by entry from ``(id (x) x*)(y1 (x) y2) = y1 <x, y2>``, with the
    integral weight: entry ``(a, (j, a', i)) = weight * delta_{a a'} * conj(x_j[i])``.
    Columns are ordered component by component, row-major in ``(a', i)``.
    """
    dims = [np.asarray(x).size for x in x_components]
    ncols = left_dim * sum(dims)
    if ncols > max_size:
        raise ValueError(f"product basis of size {ncols} exceeds the oracle limit {max_size}")
    M = np.zeros((left_dim, ncols), dtype=np.complex128)
    col = 0
    for x, d in zip(x_components, dims):
        x = np.asarray(x).ravel()
        for a_prime in range(left_dim):
            for i in range(d):
                for a in range(left_dim):
                    if a == a_prime:
                        M[a, col] = weight * np.conj(x[i])
                col += 1
    return M


def section_overlap(c_x: complex, c_y: complex, cells_per_unit: int, cutoff: int) -> complex:
    """``<X, Y>`` for unit sections ``x_alpha = omega^{c_x}_alpha``, ``y_alpha = omega^{c_y}_alpha``."""
    h = 1.0 / cells_per_unit
    total = 0.0 + 0.0j
    for j in range(cells_per_unit):
        a = (j + 1) * h
        total += h * S(np.conj(c_x) * c_y * a, cutoff) / np.sqrt(
            S(abs(c_x) ** 2 * a, cutoff).real * S(abs(c_y) ** 2 * a, cutoff).real
        )
    return complex(total)


def spatial_dagger_value(c1: complex, c2: complex, n: int, cells_per_unit: int, cutoff: int) -> float:
    """The compressed matrix element for ``x_alpha = omega_alpha`` (unit ``c1``, also the
    dilation unit) and ``y_alpha`` from the unit ``c2``, from truncated series only.

    ``V(Y) = sum_j h D_j sum_p S_{N-p}(|c1|^2 alpha_j) P_p e(g_j)`` where ``g_j`` is
    ``c2`` on ``[0, alpha_j)`` and ``c1`` on ``[alpha_j, n)``, ``P_p`` the
    ``p``-particle projection and ``D_j`` the product of the three truncated
    normalizations.
    """
    h = 1.0 / cells_per_unit
    N = cutoff
    x1, x2 = abs(c1) ** 2, abs(c2) ** 2
    alphas = [(j + 1) * h for j in range(cells_per_unit)]
    D = [1.0 / np.sqrt(S(x2 * a, N).real * S(x1 * n, N).real * S(x1 * a, N).real) for a in alphas]
    r = [[S(x1 * a, N - p).real for p in range(N + 1)] for a in alphas]

    def overlap(a, b):
        lo, hi = min(a, b), max(a, b)
        cross = np.conj(c1) * c2 if a <= b else np.conj(c2) * c1
        return x2 * lo + cross * (hi - lo) + x1 * (n - hi)

    total = 0.0 + 0.0j
    for j, a in enumerate(alphas):
        for k, b in enumerate(alphas):
            g = overlap(a, b)
            inner = sum(r[j][p] * r[k][p] * g**p / factorial(p) for p in range(N + 1))
            total += h * h * D[j] * D[k] * inner
    return float(total.real)


def same_unit_dagger_tail(c: complex, n: int, cells_per_unit: int, cutoff: int) -> float:
    """Bound on ``1 - value`` when ``c1 = c2 = c``.

    Each contracted vector is ``sum_p r_{p,j} P_p u`` with ``u`` the normalized
    truncated ``e(c 1_[0,n))`` and ``0 < r_{p,j} <= 1``; hence
    ``(1 - delta)^2 <= value <= 1`` with
    ``delta = max_j sum_p (1 - r_{p,j}) ||P_p u||^2``.
    """
    h = 1.0 / cells_per_unit
    x = abs(c) ** 2
    N = cutoff
    weights = [(x * n) ** p / factorial(p) / S(x * n, N).real for p in range(N + 1)]
    delta = 0.0
    for j in range(cells_per_unit):
        a = (j + 1) * h
        d = sum((1 - S(x * a, N - p).real / S(x * a, N).real) * weights[p] for p in range(N + 1))
        delta = max(delta, d)
    return 1 - (1 - delta) ** 2
