"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one PASS/FAIL line (see ``conftest.record``) before asserting.
"""
import time
from math import exp

import numpy as np

from fockdilation import reference_oracles as oracles
from fockdilation.dilation import BigSpace, DiscreteDilation
from fockdilation.direct_integral import Section, apply_id_tensor_adjoint, corollary_composite, section_inner
from fockdilation.grid_fock import FockVector, GridSpec, IntervalSpec, OccupationBasis, multiply, translate
from fockdilation.markov_compression import (
    choi_matrix,
    contracted_map,
    observation_crosscheck,
    random_section,
    semigroup_check,
    shifted_compression_check,
    stinespring,
    theorem_witness,
    verify_theorem,
)
from fockdilation.product_system import ProductSystem, Unit


def system(m, cutoff):
    return ProductSystem(GridSpec(m, cutoff))


def theta_rank_one(space: BigSpace, n: int, XK: Section, Xi: Section) -> Section:
    """``theta_n(a) Xi`` for ``a = XK XK*`` on ``K``, through ``w_n`` and ``w_n*``."""
    T = space.apply_w_adjoint(n, Xi)
    coeff = XK.weight * sum(np.einsum("ak,rak->r", x[0].conj(), t) for x, t in zip(XK.components, T.components))
    aT = Section(tuple(coeff[:, None, None] * x[0][None] for x in XK.components), T.weight)
    return space.apply_w(n, aT)


def test_criterion_1_exact_branch(record):
    t0 = time.perf_counter()
    S = system(8, 2)
    u = Unit(S, 0.0)
    rep = verify_theorem(S, u, 2, samples=20, rng=np.random.default_rng(1))
    # the same quantity seen through the window-3 dilation
    space = BigSpace(S, 3)
    X = theorem_witness(S, 2)
    XK = space.embed(X)
    rng = np.random.default_rng(2)
    dil = max(abs(section_inner(space.embed(Y), space.Q(theta_rank_one(space, 1, XK, space.embed(Y)))))
              for Y in (random_section(S, rng) for _ in range(5)))
    elapsed = time.perf_counter() - t0
    a_norm = X.norm() ** 2
    norm = rep.info["norm_T1a"]
    ok = rep.passed and abs(a_norm - 1) <= 1e-12 and norm <= 1e-10 and dil <= 1e-10 and elapsed < 10
    record(1, ok, f"||a||={a_norm:.3g} ||T_1(a)||={norm:.3g} (<=1e-10) dilation max={dil:.3g} runtime={elapsed:.2f}s (<10s)")
    assert ok, [c.line() for c in rep.failures()]


def test_criterion_2_quantitative_branch(record):
    t0 = time.perf_counter()
    c, N, k = 1.0, 3, 1
    grids = (8, 16, 32, 64)
    m2, norms = [], []
    for m in grids:
        S = system(m, N)
        rep = verify_theorem(S, Unit(S, c), k, samples=5, rng=np.random.default_rng(m))
        assert rep.passed, [x.line() for x in rep.failures()]
        m2.append(rep.info["M2"])
        norms.append(rep.info["norm_T1a"])
    elapsed = time.perf_counter() - t0
    closed = oracles.closed_form_m2(c, 64, N)
    # at fixed cutoff the h -> 0 limit of the grid sum is the truncated-series integral
    limit_N = oracles.continuum_m2(c, N)
    errs = [abs(v - limit_N) for v in m2]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    target = 1 - exp(-1)
    literal = [abs(v - target) for v in m2]
    # the same ratio test against 1 - e^{-1} itself holds once the cutoff is large (series oracle)
    big = [abs(oracles.closed_form_m2(c, m, 25) - target) for m in grids]
    big_ratios = [a / b for a, b in zip(big, big[1:])]
    ok = (
        abs(m2[-1] - closed) <= 0.005
        and norms[-1] <= m2[-1] + 1e-6
        and all(1.7 <= r <= 2.3 for r in ratios)
        and all(1.7 <= r <= 2.3 for r in big_ratios)
        and abs(m2[-1] - target) <= 0.02
        and all(a < b for a, b in zip(m2, m2[1:]))
        and elapsed < 300
    )
    record(2, ok, (
        f"M2(64)={m2[-1]:.6f} closed={closed:.6f} ||T_1(a)||={norms[-1]:.6f} "
        f"ratios vs cutoff-{N} limit {limit_N:.6f}: {[round(r, 3) for r in ratios]} "
        f"cutoff-25 ratios vs 1-1/e: {[round(r, 3) for r in big_ratios]} "
        f"|M2(64)-(1-1/e)|={literal[-1]:.4f} runtime={elapsed:.1f}s (<300s)"
    ))
    assert ok


def test_criterion_3_dagger_identity(record):
    S = system(8, 2)
    u = Unit(S, 0.0)
    space = BigSpace(S, 3)
    rng = np.random.default_rng(3)
    worst, scale = 0.0, 0.0
    for X in (random_section(S, rng), theorem_witness(S, 1), theorem_witness(S, 2)):
        XK = space.embed(X)
        W = contracted_map(1, u, X)
        for _ in range(100):
            Y = random_section(S, rng)
            Xi = space.embed(Y)
            lhs = section_inner(Xi, space.Q(theta_rank_one(space, 1, XK, Xi))).real
            VY = W @ Y.flat()
            rhs = float(np.vdot(VY, VY).real)
            worst = max(worst, abs(lhs - rhs))
            scale = max(scale, rhs)
    # coherent unit: Stinespring compression against the contracted map
    rep = verify_theorem(S, Unit(S, 1.0), 1, samples=100, rng=np.random.default_rng(4))
    coh = next(c for c in rep.checks if "dagger" in c.invariant).value
    ok = worst <= 1e-9 and coh <= 1e-9 and scale > 1e-3
    record(3, ok, f"vacuum dilation worst={worst:.3g} (max ||VY||^2={scale:.3g}); coherent worst={coh:.3g} (<=1e-9)")
    assert ok


def test_criterion_4_markov_property(record):
    worst_vac = max(stinespring(n, Unit(system(8, 2), 0.0)).isometry_defect() for n in (1, 2))
    coh = []
    for n in (1, 2):
        G = stinespring(n, Unit(system(4, 3), 1.0))
        coh.append((float(G.isometry_defect()), oracles.isometry_defect_bound(1.0, n, 3)))
    rng = np.random.default_rng(5)
    min_eigs = []
    for c in (0.0, 1.0):
        G = stinespring(1, Unit(system(8, 2), c))
        A = rng.normal(size=(G.dim_L, 12)) + 1j * rng.normal(size=(G.dim_L, 12))
        V = np.linalg.qr(A)[0]
        min_eigs.append(float(np.linalg.eigvalsh(choi_matrix(G, V)).min()))
    ok = worst_vac <= 1e-10 and all(d <= b + 1e-12 for d, b in coh) and min(min_eigs) >= -1e-9
    record(4, ok, f"vacuum defect={worst_vac:.3g} (<=1e-10); c=1 defects/bounds={[(round(d, 6), round(b, 6)) for d, b in coh]}; "
                  f"Choi min eig={min(min_eigs):.3g} (>=-1e-9)")
    assert ok


def test_criterion_5_dilation_axioms(record):
    rng = np.random.default_rng(6)
    # u-associativity on the grid, Gaussian-integer data so the comparison is exact
    assoc = True
    for _ in range(20):
        parts = []
        start = 0
        for n in rng.integers(1, 9, 3):
            b = OccupationBasis(IntervalSpec(start, start + int(n)), 2)
            parts.append(FockVector(b, rng.integers(-9, 10, b.dim) + 1j * rng.integers(-9, 10, b.dim)))
            start += int(n)
        x, y, z = parts
        assoc &= np.array_equal(multiply(multiply(x, y), z).coefficients, multiply(x, multiply(y, z)).coefficients)

    # isometry of w_n and the w_{n+m} law on admissible inputs (total occupation within the cutoff)
    S = system(4, 2)
    space = BigSpace(S, 3)
    kt = space.kbreve.basis.totals()

    def admissible(n_clean, pmax):
        clean = space.kbreve.clean_mask(n_clean)
        comps = []
        for b in S.section_bases():
            tot = b.totals()[:, None] + kt[None, :]
            v = rng.normal(size=tot.shape) + 1j * rng.normal(size=tot.shape)
            comps.append(np.where((tot <= pmax) & clean[None, :], v, 0)[None])
        return Section(tuple(comps), S.h)

    def low(ncells, pmax, start=0):
        b = OccupationBasis(IntervalSpec(start, start + ncells), 2)
        v = rng.normal(size=b.dim) + 1j * rng.normal(size=b.dim)
        return FockVector(b, np.where(b.totals() <= pmax, v, 0))

    iso = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 3))
        px = int(rng.integers(0, 3))
        x, Xi = low(4 * n, px), admissible(n, 2 - px)
        out = space.w_n(n, x, Xi)
        iso = max(iso, abs(out.norm() - x.norm() * Xi.norm()) / max(1.0, x.norm() * Xi.norm()))
    law = 0.0
    for _ in range(10):
        px, pxp = rng.integers(0, 2, 2)
        x, xp, Xi = low(4, px), low(4, pxp, start=4), admissible(2, 2 - px - pxp)
        law = max(law, (space.w_n(2, multiply(x, xp), Xi) - space.w_n(1, x, space.w_n(1, translate(xp, -4), Xi))).norm())

    # theta_breve_n(omega omega*) on the window of 3 units at m = 8
    D = DiscreteDilation(system(8, 2), 3)
    proj_ok, prev = True, None
    for n in range(D.window + 1):
        P = D.theta_breve_vacuum_projection(n)
        proj_ok &= np.array_equal(P, D.vacuum_projection(n))
        if prev is not None:
            proj_ok &= bool(np.linalg.eigvalsh(P - prev).min() >= -1e-12)
        prev = P
    proj_ok &= np.array_equal(prev, np.eye(D.dim))

    ok = bool(assoc) and iso <= 1e-10 and law <= 1e-10 and bool(proj_ok)
    record(5, ok, f"associativity bit-exact={bool(assoc)}; isometry rel. err={iso:.3g}; w_(n+m) law={law:.3g} (<=1e-10); "
                  f"theta_breve monotone = support projection, identity at edge={bool(proj_ok)}")
    assert ok


def test_criterion_6_semigroup(record):
    rep = semigroup_check(Unit(system(8, 2), 0.0), samples=20, rng=np.random.default_rng(7))
    d = rep.info["semigroup_defect"]
    ok = rep.passed and d <= 1e-8
    record(6, ok, f"max ||T_2(b) - T_1(T_1(b))|| = {d:.3g} over 20 hermitian b (<=1e-8), window 3")
    assert ok


def test_criterion_7_intertwining(record):
    S = system(8, 2)
    rep = shifted_compression_check(BigSpace(S, 3), Unit(S, 0.0), 1, 1, samples=10, rng=np.random.default_rng(8))
    worst, scale = rep.info["worst"], rep.info["lhs_norm"]
    ok = rep.passed and worst <= 1e-8 and scale > 0
    record(7, ok, f"theta_1 T_1 = T^1_1 theta_1: worst={worst:.3g} (<=1e-8) on 10 rank-one b, lhs norm up to {scale:.3g}")
    assert ok


def test_criterion_8_oracle_equivalence(record):
    S = system(8, 2)
    rng = np.random.default_rng(9)
    dims = [b.dim for b in S.section_bases()]

    def rand(left=1):
        return Section(tuple(rng.normal(size=(left, d, 1)) + 1j * rng.normal(size=(left, d, 1)) for d in dims), S.h)

    def raw(Y):
        return np.concatenate([y[:, :, 0].ravel() for y in Y.components])

    worst_adj = worst_cor = 0.0
    max_size = 0
    for _ in range(50):
        left = int(rng.integers(1, 6))
        X, Xp, Y = rand(), rand(), rand(left)
        M = oracles.dense_adjoint_oracle([x[0, :, 0] for x in X.components], S.h, left)
        max_size = max(max_size, M.shape[1])
        z = M @ raw(Y)
        worst_adj = max(worst_adj, float(np.abs(z - apply_id_tensor_adjoint(X, Y)).max()))
        # dense (id (x) X') assembled from the same oracle convention: column a is e_a (x) X'
        E = np.zeros((M.shape[1], left), dtype=complex)
        for a in range(left):
            ea = np.zeros(left)
            ea[a] = 1
            E[:, a] = raw(Section(tuple(ea[:, None, None] * x[0][None] for x in Xp.components), S.h))
        worst_cor = max(worst_cor, float(np.abs(E @ z - raw(corollary_composite(X, Xp, Y))).max()))
    ok = worst_adj <= 1e-10 and worst_cor <= 1e-10 and max_size <= 5000
    record(8, ok, f"adjoint worst={worst_adj:.3g}, composite worst={worst_cor:.3g} (<=1e-10), 50 instances, product dim <= {max_size}")
    assert ok


def test_criterion_9_observation(record):
    S = system(8, 2)
    vac = observation_crosscheck(S, 0.0, 1.0)
    coh = observation_crosscheck(S, 1.0, 0.0)
    same = observation_crosscheck(S, 1.0, 1.0)
    ok = vac.passed and coh.passed and same.passed
    record(9, ok, (
        f"vacuum vs c=1: dagger={vac.info['dagger']:.12f} closed={vac.info['dagger_expected']:.12f} "
        f"u* dev={vac.info['u_star_deviation']:.3g}; c=1 vs vacuum: |diff|={abs(coh.info['dagger'] - coh.info['dagger_expected']):.3g}; "
        f"same unit: {same.info['same_unit']:.6f} within tail {same.info['same_unit_tail']:.4f}"
    ))
    assert ok, [c.line() for r in (vac, coh, same) for c in r.failures()]
