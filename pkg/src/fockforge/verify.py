"""Invariant suites behind ``fockforge verify``.

Each suite draws from its own ``numpy.random.default_rng(seed)`` so a suite
gives the same numbers whether it runs alone or with the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from . import fock, oneparticle, standard_subspace as ss, thermo

CATALAN = (1, 1, 2, 5, 14, 42)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_defect: float
    detail: str = ""
    dumps: dict = field(default_factory=dict)


def random_vector(rng, d):
    return rng.standard_normal(d) + 1j * rng.standard_normal(d)


def suite_oneparticle(rng, d=6, **_):
    defects = []
    for n in (1, 2, 3):
        lp, lm, l0 = oneparticle.ladder_operators(oneparticle.LowestWeightIrrep(n, d))
        defects.append(np.max(np.abs(l0 @ lp - lp @ l0 - lp)))
        defects.append(np.max(np.abs(l0 @ lm - lm @ l0 + lm)))
        c = lm @ lp - lp @ lm - 2 * l0
        defects.append(np.max(np.abs(c[: d - 1, : d - 1])))
    for t in rng.uniform(-5, 5, size=(1000, 2)):
        s, u = t
        lhs = oneparticle.dilation(s) @ oneparticle.dilation(u)
        defects.append(np.max(np.abs(lhs.matrix - oneparticle.dilation(s + u).matrix)))
        lhs = oneparticle.translation(s) @ oneparticle.translation(u)
        defects.append(np.max(np.abs(lhs.matrix - oneparticle.translation(s + u).matrix)))
    z = np.exp(1j * rng.uniform(-np.pi, np.pi, 100))
    defects.append(np.max(np.abs(oneparticle.cayley(oneparticle.inverse_cayley(z)) - z)))
    worst = float(max(defects))
    return SuiteResult("oneparticle", worst <= 1e-12, worst, "ladder, Moebius group law, Cayley")


def suite_commutation(rng, d=3, N=4, pairs=200, **_):
    space = fock.TruncatedFockSpace(d, N)
    e0 = np.eye(d)[0]
    worst, worst_pair = 0.0, None
    cases = [(e0, e0), (e0, 1j * e0)] + [
        (random_vector(rng, d), random_vector(rng, d)) for _ in range(pairs)
    ]
    for h, k in cases:
        defect = fock.commutator_defect(space, h, k)
        if defect > worst:
            worst, worst_pair = defect, (h, k)
    result = SuiteResult("commutation", worst <= 1e-12, worst, f"{len(cases)} pairs, d={d}, N={N}")
    if not result.passed:
        h, k = worst_pair
        result.dumps = {
            "s(h)": fock.field_s(space, h),
            "d(k)": fock.field_d(space, k),
            "[s(h),d(k)]": fock.commutator(fock.field_s(space, h), fock.field_d(space, k)),
        }
    return result


def suite_flip(rng, d=3, N=4, samples=50, **_):
    space = fock.TruncatedFockSpace(d, N)
    Z = fock.flip(space)
    worst = float(np.max(np.abs((Z @ Z).toarray() - np.eye(space.dim))))
    dumps = {}
    for _ in range(samples):
        h = random_vector(rng, d)
        for left, right in (
            (fock.field_s(space, h), fock.field_d(space, h)),
            (fock.left_creation(space, h), fock.right_creation(space, h)),
        ):
            defect = float(np.max(np.abs((Z @ left @ Z).toarray() - right.toarray())))
            if defect > worst:
                worst = defect
                dumps = {"Z": Z, "left": left, "right": right}
    passed = worst <= 1e-14
    return SuiteResult("flip", passed, worst, f"{samples} vectors, d={d}, N={N}", {} if passed else dumps)


def suite_functoriality(rng, d=3, N=3, samples=10, **_):
    space = fock.TruncatedFockSpace(d, N)
    worst = 0.0
    for _ in range(samples):
        u = unitary_group.rvs(d, random_state=rng)
        v = unitary_group.rvs(d, random_state=rng)
        gu, gv = fock.second_quantize(space, u), fock.second_quantize(space, v)
        worst = max(worst, float(np.max(np.abs((gu @ gv).toarray() - fock.second_quantize(space, u @ v).toarray()))))
        worst = max(worst, float(np.max(np.abs((gu @ gu.adjoint()).toarray() - np.eye(space.dim)))))
        h = random_vector(rng, d)
        a = fock.left_creation(space, h)
        worst = max(worst, float(np.max(np.abs(fock.left_annihilation(space, h).toarray() - a.toarray().conj().T))))
    return SuiteResult("functoriality", worst <= 1e-12, worst, f"{samples} unitary pairs, d={d}, N={N}")


def suite_moments(rng, N=6, **_):
    d = 2
    space = fock.TruncatedFockSpace(d, N)
    h = random_vector(rng, d)
    norm2 = float(np.vdot(h, h).real)
    values, worst = [], 0.0
    for m, cat in enumerate(CATALAN):
        mom = fock.vacuum_moment(space, h, 2 * m)
        values.append(mom.real / norm2**m)
        worst = max(worst, abs(values[-1] - cat), abs(mom.imag))
        worst = max(worst, abs(fock.vacuum_moment(space, h, 2 * m + 1)))
    shown = ", ".join(f"{v:.12g}" for v in values[1:])
    return SuiteResult("moments", worst <= 1e-9, worst, f"catalan: {shown}")


MODULAR_TOLERANCES = {
    "S_fixes_H": 1e-10,
    "S_squared": 1e-10,
    "J_squared": 1e-10,
    "J_Delta_J": 1e-10,
    "spectrum_pairing": 1e-8,
    "modular_flow": 1e-9,
    "J_H_equals_H_prime": 1e-9,
}


def suite_modular(rng, subspaces=100, **_):
    worst = dict.fromkeys(MODULAR_TOLERANCES, 0.0)
    for i in range(subspaces):
        H = ss.random_standard_subspace(1 + i % 3, rng)
        defects = ss.modular_defects(H)
        for key in worst:
            worst[key] = max(worst[key], defects[key])
    failed = [key for key, tol in MODULAR_TOLERANCES.items() if worst[key] > tol]
    detail = f"{subspaces} subspaces, d in 1..3" + (f"; failed: {', '.join(failed)}" if failed else "")
    return SuiteResult("modular", not failed, max(worst.values()), detail)


def suite_duality(rng, N=3, subspaces=5, samples=50, **_):
    worst = 0.0
    control = 0.0
    for i in range(subspaces):
        d = 1 + i % 3
        space = fock.TruncatedFockSpace(d, N)
        H = ss.random_standard_subspace(d, rng)
        worst = max(worst, ss.twisted_duality_generators(space, H, samples, rng))
        h = H.sample(rng)[0]
        k = random_vector(rng, d)
        expected = 2 * abs(fock.inner(h, k).imag)
        control = max(control, abs(fock.commutator_band_norm(space, h, k) - expected))
    passed = worst <= 1e-12 and control <= 1e-10
    return SuiteResult("duality", passed, max(worst, control), f"{subspaces} subspaces x {samples} pairs + controls")


def suite_thermo(rng, **_):
    defects = [abs(thermo.beta_max(1) - math.log(2) / (2 * math.pi))]
    b1 = thermo.beta_max(1)
    wrong = 0
    for k in range(1, 7):
        wrong += not thermo.partition_closed(1, b1 * (1 + 10.0**-k)).finite
        wrong += thermo.partition_closed(1, b1 * (1 - 10.0**-k)).finite
    wrong += thermo.partition_closed(1, b1).finite
    nu = thermo.multiplicities(1, 20).nu
    wrong += any(nu[m] != 2 ** (m - 1) for m in range(1, 21))
    for n in (1, 2, 3, 4, 5):
        beta = thermo.beta_max(n) * rng.uniform(1.05, 3.0)
        t = thermo.partition_truncated(n, beta, 60)
        c = thermo.partition_closed(n, beta)
        wrong += abs(c.value - t.value) > t.tail_bound
    betas = [thermo.beta_max(n) for n in range(1, 51)]
    wrong += not all(b < a for a, b in zip(betas, betas[1:]))
    worst = float(max(defects))
    return SuiteResult("thermo", wrong == 0 and worst <= 1e-12, worst, f"{wrong} failed checks")


def suite_crossval(rng, N=5, **_):
    beta = 0.25
    closed = thermo.partition_closed(1, beta).value
    traces = []
    for size in range(2, N + 1):
        space = fock.TruncatedFockSpace(size, size)
        traces.append(fock.gibbs_trace(space, oneparticle.LowestWeightIrrep(1, size), beta))
    monotone = all(b > a for a, b in zip(traces, traces[1:]))
    gap = closed - traces[-1]
    return SuiteResult(
        "crossval", monotone and 0 < gap, gap, f"traces {traces[0]:.12g} .. {traces[-1]:.12g} < {closed:.12g}"
    )


SUITES = {
    "oneparticle": suite_oneparticle,
    "commutation": suite_commutation,
    "flip": suite_flip,
    "functoriality": suite_functoriality,
    "moments": suite_moments,
    "modular": suite_modular,
    "duality": suite_duality,
    "thermo": suite_thermo,
    "crossval": suite_crossval,
}


def run_suites(names=None, seed=0, d=None, N=None):
    names = list(SUITES) if not names else names
    results = []
    for name in names:
        kwargs = {}
        if d is not None and name in ("commutation", "flip", "functoriality"):
            kwargs["d"] = d
        if N is not None and name in ("commutation", "flip", "functoriality", "moments", "duality", "crossval"):
            kwargs["N"] = N
        results.append(SUITES[name](np.random.default_rng(seed), **kwargs))
    return results
