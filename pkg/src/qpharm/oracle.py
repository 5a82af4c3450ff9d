"""Independent ground truth: exact weighted path counting and asymptotics.

The dynamic program runs in two modes: an exact big-integer mode (counts
scaled by the common weight denominator, full history kept) for the
exactness checks, and a float64 mode (probability weights, target-cell
trajectories) for the large-n asymptotic fits, where the stated
tolerances are percent-level and the float error is ~1e-13.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from . import errors
from .algebra import ZERO, Rat, rat
from .model import Grid, StepModel, discrete_laplacian


@dataclass
class WalkCounts:
    model: StepModel
    n_max: int
    window: int
    scale_denominator: int          # weights are num_s / D
    exact: bool
    table: object                   # exact: list over n of {(i,j): int}; float: final layer array
    trajectories: dict              # (i,j) -> list of float q(0,(i,j);n), n = 0..n_max

    def q(self, i: int, j: int, n: int) -> Fraction:
        """Exact q(0,(i,j);n) (exact mode only)."""
        if not self.exact:
            raise ValueError("exact values require exact mode")
        c = self.table[n].get((i, j), 0)
        return Fraction(c, self.scale_denominator**n)

    def q_float(self, i: int, j: int, n: int) -> float:
        if self.exact:
            return float(self.q(i, j, n))
        return self.trajectories[(i, j)][n]

    def layer_mass(self, n: int) -> Fraction:
        if not self.exact:
            raise ValueError("exact mass requires exact mode")
        return Fraction(sum(self.table[n].values()), self.scale_denominator**n)


def _int_weights(m: StepModel):
    D = 1
    for c in m.weights.values():
        D = D * c.denominator // np.gcd(D, c.denominator)
    D = int(D)
    return D, {s: int(c * D) for s, c in m.weights.items()}


def count_walks(
    m: StepModel,
    n_max: int,
    window: int | None = None,
    exact: bool = True,
    targets: tuple = (),
) -> WalkCounts:
    """Excursion counts q(0, (i,j); n) by dynamic programming.

    The window defaults to n_max + 1 so no admissible path is truncated;
    a smaller window raises WindowTooSmall if mass could reach the edge.
    """
    if window is None:
        window = n_max + 1
    if window < n_max + 1 and exact:
        raise errors.WindowTooSmall(
            f"window {window} truncates paths of length {n_max}"
        )
    D, iw = _int_weights(m)
    if exact:
        layer = {(0, 0): 1}
        history = [layer]
        for n in range(n_max):
            nxt = {}
            for (i, j), c in layer.items():
                for (di, dj), w in iw.items():
                    ii, jj = i + di, j + dj
                    if ii < 0 or jj < 0 or ii >= window or jj >= window:
                        continue
                    key = (ii, jj)
                    nxt[key] = nxt.get(key, 0) + c * w
            layer = nxt
            history.append(layer)
        trajectories = {
            t: [float(Fraction(history[n].get(t, 0), D**n)) for n in range(n_max + 1)]
            for t in targets
        }
        return WalkCounts(
            model=m, n_max=n_max, window=window, scale_denominator=D,
            exact=True, table=history, trajectories=trajectories,
        )
    # float64 mode: probability weights, trajectories for the targets
    q = np.zeros((window, window))
    q[0, 0] = 1.0
    fw = {s: float(c) for s, c in m.weights.items()}
    traj = {t: [0.0] * (n_max + 1) for t in targets}
    for t in targets:
        traj[t][0] = float(q[t])
    for n in range(1, n_max + 1):
        nxt = np.zeros_like(q)
        for (di, dj), w in fw.items():
            src = q[
                max(0, -di) : window - max(0, di),
                max(0, -dj) : window - max(0, dj),
            ]
            nxt[
                max(0, di) : window - max(0, -di),
                max(0, dj) : window - max(0, -dj),
            ] += w * src
        q = nxt
        for t in targets:
            traj[t][n] = float(q[t])
    return WalkCounts(
        model=m, n_max=n_max, window=window, scale_denominator=D,
        exact=False, table=q, trajectories=traj,
    )


def count_walks_unconstrained_mass(m: StepModel, n: int) -> Fraction:
    """Control run on the full plane: the total mass must be exactly 1."""
    D, iw = _int_weights(m)
    layer = {(0, 0): 1}
    for _ in range(n):
        nxt = {}
        for (i, j), c in layer.items():
            for (di, dj), w in iw.items():
                key = (i + di, j + dj)
                nxt[key] = nxt.get(key, 0) + c * w
        layer = nxt
    return Fraction(sum(layer.values()), D**n)


def simple_walk_exact(i: int, j: int, n: int) -> Fraction:
    """Closed-form excursion count for the simple walk."""
    if (n - i - j) % 2 != 0:
        return ZERO
    m = (n - i - j) // 2
    if m < 0:
        return ZERO
    num = (i + 1) * (j + 1) * factorial(n) * factorial(n + 2)
    den = (
        factorial(m)
        * factorial(m + i + 1)
        * factorial(m + j + 1)
        * factorial(m + i + j + 2)
    )
    return Fraction(num, den * 4**n)


@dataclass
class AsymptoticFit:
    exponents: tuple
    estimates: dict        # (i,j) -> list of v_p estimates
    residuals: dict        # (i,j) -> rms residual of the fit
    sample_ns: tuple


def extract_asymptotics(
    counts: WalkCounts,
    targets,
    exponents,
    sample_ns=None,
) -> AsymptoticFit:
    """Fit q(n) ~ sum_p v_p / n^{alpha_p} at the target cells.

    Exponents are taken as known (alpha_p strictly increasing); sampling
    uses same-parity n values near n_max (step 2) by default.
    """
    exponents = tuple(exponents)
    if any(b <= a for a, b in zip(exponents, exponents[1:])):
        raise errors.SingularFit("exponents must be strictly increasing")
    out_est, out_res = {}, {}
    for t in targets:
        i, j = t
        if sample_ns is None:
            parity = (i + j) % 2
            hi = counts.n_max
            if hi % 2 != parity:
                hi -= 1
            ns = list(range(hi, max(hi - 8 * len(exponents) * 2, 3), -2))
        else:
            ns = list(sample_ns)
        if len(ns) < len(exponents):
            raise errors.SingularFit("not enough samples for the requested terms")
        ys = []
        rows = []
        for n in ns:
            qv = counts.q_float(i, j, n)
            ys.append(qv * n ** exponents[0])
            rows.append([n ** (exponents[0] - a) for a in exponents])
        A = np.array(rows)
        y = np.array(ys)
        sol, res, rank, _ = np.linalg.lstsq(A, y, rcond=None)
        if rank < len(exponents):
            raise errors.SingularFit(f"singular fit at {t}")
        fit_res = float(np.sqrt(np.mean((A @ sol - y) ** 2)))
        out_est[t] = [float(v) for v in sol]
        out_res[t] = fit_res
    return AsymptoticFit(
        exponents=exponents, estimates=out_est, residuals=out_res,
        sample_ns=tuple(ns),
    )


@dataclass
class LaplacianPowerReport:
    k: int
    window: int
    max_abs: object
    zero: bool


def laplacian_power_check(grid: Grid, m: StepModel, k: int) -> LaplacianPowerReport:
    """Delta^k applied to the grid; reports the maximum |entry| left."""
    g = grid
    for _ in range(k):
        g = discrete_laplacian(g, m)
    mx = g.max_abs()
    return LaplacianPowerReport(k=k, window=g.ni, max_abs=mx, zero=(mx == 0))
