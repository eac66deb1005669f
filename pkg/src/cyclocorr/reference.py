"""Slow reference computations used to check the streaming estimator.

``cyclic_xcorr_direct`` is a literal scalar loop with no shared code paths
with :mod:`cyclocorr.estimator`.  ``gmsk_mc_oracle`` stands in for closed-form
cyclic statistics of CPM: it averages direct time-domain estimates over many
independently seeded records.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UsageError
from .siggen import CpmParams, gmsk_record


def cyclic_xcorr_direct(x, y, alpha: float, m: int, conj: bool, k0: int, n: int) -> complex:
    """``exp(-2j*pi*alpha*k0)/N * sum_n x[k0+n+m] * y'[k0+n] * exp(-2j*pi*alpha*n)``.

    ``y'`` is ``conj(y)`` unless ``conj`` is set (conjugate correlation).
    """
    lo, hi = k0 + m, k0 + n - 1 + m
    if n < 1 or k0 < 0 or lo < 0 or hi >= len(x) or k0 + n - 1 >= len(y):
        raise UsageError(
            f"records of length {len(x)}/{len(y)} do not cover window k0={k0}, N={n}, lag={m}")
    acc = 0j
    for i in range(n):
        xv = complex(x[k0 + i + m])
        yv = complex(y[k0 + i])
        if not conj:
            yv = yv.conjugate()
        acc += xv * yv * cmath.exp(-2j * math.pi * alpha * i)
    return cmath.exp(-2j * math.pi * alpha * k0) * acc / n


def window_starts(record_len: int, n: int, lags: Sequence[int]) -> np.ndarray:
    """Anchors ``k0`` of every complete non-overlapping window in a record."""
    m_minus = max([0, *(-m for m in lags)])
    m_plus = max([0, *lags])
    count = (record_len - m_minus - m_plus) // n
    return m_minus + n * np.arange(max(count, 0))


def windowed_estimates(x, y, alphas, lags, n: int, conj: bool) -> np.ndarray:
    """Per-window direct estimates, shape ``(windows, alphas, lags)``.

    Vectorized over windows and samples but otherwise the plain time-domain
    sum; no DFT or correlation shortcuts.
    """
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    starts = window_starts(min(x.size, y.size), n, lags)
    if starts.size == 0:
        raise UsageError(f"record of {x.size} samples holds no complete window of {n}")
    w = starts.size
    k0 = int(starts[0])
    span = slice(k0, k0 + w * n)
    ycj = y[span] if conj else np.conj(y[span])
    absolute = np.arange(k0, k0 + w * n)
    out = np.empty((w, len(alphas), len(lags)), dtype=np.complex128)
    for i, a in enumerate(alphas):
        z = ycj * np.exp(-2j * np.pi * a * absolute)
        for j, m in enumerate(lags):
            prod = x[k0 + m:k0 + m + w * n] * z
            out[:, i, j] = prod.reshape(w, n).mean(axis=1)
    return out


@dataclass(frozen=True, eq=False)
class OracleTable:
    """Trial-averaged ``|R|`` over a grid of cycle frequencies and lags.

    ``stderr`` is the standard error of each cell across trials.
    """

    alphas: tuple[float, ...]
    lags: tuple[int, ...]
    mean_magnitude: np.ndarray
    stderr: np.ndarray
    trials: int
    record_len: int
    seed: int
    win_len: int
    conj: bool

    def profile(self, alpha: float) -> np.ndarray:
        return self.mean_magnitude[self.alphas.index(alpha)]

    def to_csv(self, path) -> int:
        from .io import export_oracle_csv

        return export_oracle_csv(path, self)


def gmsk_mc_oracle(params: CpmParams, alphas: Sequence[float], lags: Sequence[int],
                   trials: int, record_len: int, seed: int, *, win_len: int = 4096,
                   conj: bool = False) -> OracleTable:
    """Monte-Carlo mean of ``|R|`` for random-symbol CPM records.

    Trial ``t`` draws its symbols with seed ``seed + t``, so a table can be
    extended with more trials without recomputing the earlier ones.
    """
    if trials < 1:
        raise UsageError(f"trials must be >= 1 (got {trials})")
    if record_len < 16 * win_len:
        raise UsageError(f"record_len {record_len} is below 16 windows of {win_len}")
    alphas = tuple(float(a) for a in alphas)
    lags = tuple(int(m) for m in lags)
    if not alphas or not lags:
        raise UsageError("need at least one cycle frequency and one lag")

    num_symbols = -(-record_len // params.sps)
    per_trial = np.empty((trials, len(alphas), len(lags)))
    for t in range(trials):
        x = gmsk_record(params, num_symbols, seed + t)[:record_len]
        est = windowed_estimates(x, x, alphas, lags, win_len, conj)
        per_trial[t] = np.abs(est).mean(axis=0)

    mean = per_trial.mean(axis=0)
    if trials > 1:
        stderr = per_trial.std(axis=0, ddof=1) / math.sqrt(trials)
    else:
        stderr = np.full_like(mean, np.nan)
    return OracleTable(alphas, lags, mean, stderr, trials, record_len, seed, win_len, conj)
