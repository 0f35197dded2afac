"""Multi-start projected gradient ascent on the unit sphere of R^n."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np


def thread_cap() -> int:
    """Worker count, capped by SUBKOBA_THREADS when set."""
    env = os.environ.get("SUBKOBA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class RunResult:
    x: np.ndarray
    value: float
    iterations: int
    grad_norm: float
    converged: bool


@dataclass(frozen=True)
class MultiStartResult:
    best: RunResult
    runs: tuple

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.runs])

    @property
    def spread(self) -> float:
        v = self.values
        return float(v.max() - v.min())


def _ascend(f: Callable, grad: Callable, x: np.ndarray, max_iter: int, tol: float) -> RunResult:
    x = x / np.linalg.norm(x)
    fx = f(x)
    step = 1.0
    gn = np.inf
    for it in range(1, max_iter + 1):
        g = grad(x)
        g = g - (g @ x) * x          # tangent component
        gn = float(np.linalg.norm(g))
        # near a nondegenerate max the value error is O(gn^2)
        if gn < tol or gn * gn < 1e-4 * tol:
            return RunResult(x, fx, it, gn, True)
        step = min(step * 2.0, 1e6)
        while True:
            y = x + step * g
            y /= np.linalg.norm(y)
            fy = f(y)
            if fy >= fx + 0.25 * step * gn * gn:
                break
            step *= 0.5
            if step < 1e-16:
                return RunResult(x, fx, it, gn, abs(fy - fx) <= tol)
        x, fx = y, fy
    return RunResult(x, fx, max_iter, gn, False)


def sphere_maximize(f: Callable, grad: Callable, n: int, restarts: int = 32,
                    max_iter: int = 5000, tol: float = 1e-10, seed: int = 0,
                    threads: int | None = None) -> MultiStartResult:
    """Maximize ``f`` on the unit sphere of R^n from ``restarts`` random starts.

    Start points come from independent child streams of one seed so the result
    does not depend on scheduling.  Ties are broken by the lexicographically
    smallest maximizer.
    """
    children = np.random.SeedSequence(seed).spawn(restarts)
    starts = [np.random.default_rng(c).standard_normal(n) for c in children]
    workers = threads or thread_cap()
    if workers > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda s: _ascend(f, grad, s, max_iter, tol), starts))
    else:
        runs = [_ascend(f, grad, s, max_iter, tol) for s in starts]
    best = runs[0]
    for r in runs[1:]:
        if r.value > best.value or (r.value == best.value and tuple(r.x) < tuple(best.x)):
            best = r
    return MultiStartResult(best=best, runs=tuple(runs))
