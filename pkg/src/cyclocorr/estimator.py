"""Streaming cyclic (conjugate) cross-correlation estimator.

The estimator consumes two synchronized complex streams ``x`` and ``y`` in
chunks of any size and emits one :class:`~cyclocorr.core.CyclicFrame` every
``N`` samples (non-overlapping windows).  For window ``f`` anchored at
``k0 = M_minus + f*N`` the value at cycle frequency ``a`` and lag ``m`` is::

    (1/N) * sum_{n=0}^{N-1} x[k0+n+m] * y'[k0+n] * exp(-2j*pi*a*(k0+n))

where ``y'`` is ``conj(y)`` for the cyclic correlation and ``y`` itself for the
conjugate one (``conj=True``).  Phase is referenced to absolute sample
indices, so consecutive frames can be averaged coherently.

Set mode evaluates a list of cycle frequencies over lags ``-M..M``; Full mode
evaluates every DFT cycle frequency ``k/N`` at a list of lags.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import signal

from .core import (
    CyclicFrame,
    EstimatorConfig,
    FullLayout,
    Mode,
    SetLayout,
    validate_config,
)
from .errors import ConfigError, DataError, UsageError

SET_METHODS = ("auto", "direct", "fft")


def dft(v) -> np.ndarray:
    """Unnormalized DFT, ``V[k] = sum_n v[n] exp(-2j*pi*k*n/N)``."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise UsageError("dft needs a non-empty 1-D vector")
    return np.fft.fft(v)


def _lead_phasors(alphas, k0):
    alphas = np.asarray(alphas, dtype=np.float64)
    return np.exp(-2j * np.pi * alphas * k0)


def compute_set_window(xw, yw, alphas: Sequence[float], max_lag: int, conj: bool,
                       k0: int = 0, *, phasors=None, method: str = "auto") -> np.ndarray:
    """Set-mode values for one window, alpha-major with lags ``-M..M``.

    ``xw`` holds ``N + 2M`` samples starting at absolute index ``k0 - M``;
    ``yw`` holds the ``N`` samples starting at ``k0``.  ``phasors`` (one per
    alpha) replaces the ``exp(-2j*pi*a*k0)`` factor when given; the streaming
    estimator passes its running accumulator here.
    """
    xw = np.asarray(xw, dtype=np.complex128)
    yw = np.asarray(yw, dtype=np.complex128)
    n = yw.size
    if xw.size != n + 2 * max_lag:
        raise UsageError(f"x window has {xw.size} samples, expected {n + 2 * max_lag}")
    if method not in SET_METHODS:
        raise UsageError(f"unknown correlation method {method!r}")
    if phasors is None:
        phasors = _lead_phasors(alphas, k0)

    ycj = yw if conj else np.conj(yw)
    idx = np.arange(n)
    out = np.empty((len(alphas), 2 * max_lag + 1), dtype=np.complex128)
    for i, a in enumerate(alphas):
        z = ycj * np.exp(-2j * np.pi * a * idx)
        # correlate(xw, v)[j] = sum_n xw[n + j] * conj(v[n]), j = m + M
        out[i] = signal.correlate(xw, np.conj(z), mode="valid", method=method)
        out[i] *= phasors[i] / n
    return out.ravel()


def full_compensation(n: int, k0: int) -> np.ndarray:
    """``exp(-2j*pi*k*k0/N)`` for every bin, with the phase reduced exactly."""
    k = np.arange(n, dtype=np.int64)
    return np.exp(-2j * np.pi * ((k * (k0 % n)) % n) / n)


def compute_full_window(xw, yw, lags: Sequence[int], n: int, conj: bool,
                        k0: int = 0, *, compensation=None) -> np.ndarray:
    """Full-mode values for one window, lag-major with bins ``0..N-1``.

    ``xw[i]`` holds absolute sample ``k0 - M_minus + i`` where ``M_minus`` is
    the largest negative lag magnitude; it must reach ``k0 + N - 1 + M_plus``.
    """
    xw = np.asarray(xw, dtype=np.complex128)
    yw = np.asarray(yw, dtype=np.complex128)
    if yw.size != n:
        raise UsageError(f"y window has {yw.size} samples, expected {n}")
    m_minus = max([0, *(-m for m in lags)])
    m_plus = max([0, *lags])
    if xw.size < n + m_minus + m_plus:
        raise UsageError(
            f"x window has {xw.size} samples, lags {min(lags)}..{max(lags)} need "
            f"{n + m_minus + m_plus}")
    if compensation is None:
        compensation = full_compensation(n, k0)

    ycj = yw if conj else np.conj(yw)
    out = np.empty((len(lags), n), dtype=np.complex128)
    for i, m in enumerate(lags):
        start = m_minus + m
        out[i] = dft(xw[start:start + n] * ycj)
    out *= compensation / n
    return out.ravel()


class CyclicCorrelator:
    """Streaming estimator state.

    Samples are staged in a linear buffer of ``buffer_need`` slots.  Each time
    it fills up a frame is computed, and the buffer is shifted left by ``N``
    so the lag margin carries over to the next window.

    Parameters
    ----------
    config : EstimatorConfig
        Must pass :func:`~cyclocorr.core.validate_config`.
    method : {"auto", "direct", "fft"}
        Set-mode correlation strategy, forwarded to
        :func:`scipy.signal.correlate`.  All three compute the same sum.
    """

    def __init__(self, config: EstimatorConfig, method: str = "auto"):
        problems = validate_config(config)
        if problems:
            raise ConfigError(problems)
        if method not in SET_METHODS:
            raise UsageError(f"unknown correlation method {method!r}")
        self.config = config
        self.method = method
        self.layout = config.layout

        n = config.win_len
        spec = config.lag_spec
        self.m_minus = spec.m_minus
        if config.mode is Mode.SET:
            self.buffer_need = n + 2 * spec.max_lag
            alphas = np.asarray(config.alphas, dtype=np.float64)
            self._hop_phasor = np.exp(-2j * np.pi * alphas * n)
            self._anchor_phasor = np.exp(-2j * np.pi * alphas * self.m_minus)
            self.phase_acc = np.ones(alphas.size, dtype=np.complex128)
        else:
            # both lag margins have to be resident at once
            self.buffer_need = n + spec.m_minus + spec.m_plus
            # k0 = M_minus + f*N, so the per-bin phase is the same every frame
            self._compensation = full_compensation(n, self.m_minus)

        self._xbuf = np.zeros(self.buffer_need, dtype=np.complex128)
        self._ybuf = np.zeros(self.buffer_need, dtype=np.complex128)
        self._fill = 0
        self.consumed = 0
        self.frames_emitted = 0

    def __repr__(self):
        return (f"CyclicCorrelator(mode={self.config.mode.value}, N={self.config.win_len}, "
                f"consumed={self.consumed}, frames={self.frames_emitted})")

    def push(self, x_chunk, y_chunk=None) -> list[CyclicFrame]:
        """Feed a chunk of each stream; return the frames completed by it.

        ``y_chunk`` defaults to ``x_chunk`` (auto-correlation).
        """
        x = np.asarray(x_chunk, dtype=np.complex128).ravel()
        y = x if y_chunk is None else np.asarray(y_chunk, dtype=np.complex128).ravel()
        if x.size != y.size:
            raise UsageError(f"chunk lengths differ: x has {x.size}, y has {y.size}")
        for name, s in (("x", x), ("y", y)):
            bad = np.flatnonzero(~np.isfinite(s))
            if bad.size:
                raise DataError(
                    f"non-finite sample in {name} at absolute index {self.consumed + bad[0]}",
                    index=int(self.consumed + bad[0]))

        frames = []
        pos, total = 0, x.size
        need = self.buffer_need
        while pos < total:
            take = min(need - self._fill, total - pos)
            self._xbuf[self._fill:self._fill + take] = x[pos:pos + take]
            self._ybuf[self._fill:self._fill + take] = y[pos:pos + take]
            self._fill += take
            pos += take
            if self._fill == need:
                frames.append(self._emit())
                keep = need - self.config.win_len
                self._xbuf[:keep] = self._xbuf[need - keep:need]
                self._ybuf[:keep] = self._ybuf[need - keep:need]
                self._fill = keep
        self.consumed += total
        return frames

    def _emit(self) -> CyclicFrame:
        cfg = self.config
        n = cfg.win_len
        k0 = self.m_minus + self.frames_emitted * n
        if cfg.mode is Mode.SET:
            m = cfg.lag_spec.max_lag
            values = compute_set_window(
                self._xbuf, self._ybuf[m:m + n], cfg.alphas, m, cfg.conj,
                phasors=self.phase_acc * self._anchor_phasor, method=self.method)
            self.phase_acc = self.phase_acc * self._hop_phasor
            self.phase_acc /= np.abs(self.phase_acc)
        else:
            values = compute_full_window(
                self._xbuf, self._ybuf[self.m_minus:self.m_minus + n],
                cfg.lag_spec.lags, n, cfg.conj, compensation=self._compensation)
        frame = CyclicFrame(self.frames_emitted, k0, values, self.layout)
        self.frames_emitted += 1
        return frame


def create(config: EstimatorConfig, method: str = "auto") -> CyclicCorrelator:
    return CyclicCorrelator(config, method=method)


def run(config: EstimatorConfig, x, y=None, chunk_size: int | None = None,
        method: str = "auto") -> list[CyclicFrame]:
    """Estimate over whole records, optionally pushing them in fixed chunks."""
    est = CyclicCorrelator(config, method=method)
    x = np.asarray(x)
    y = x if y is None else np.asarray(y)
    if chunk_size is None:
        return est.push(x, y)
    frames = []
    for start in range(0, x.size, chunk_size):
        frames.extend(est.push(x[start:start + chunk_size], y[start:start + chunk_size]))
    return frames


def expected_frames(config: EstimatorConfig, consumed: int) -> int:
    """Number of frames a stream of ``consumed`` samples produces."""
    need = CyclicCorrelator(config).buffer_need
    if consumed < need:
        return 0
    return (consumed - need) // config.win_len + 1


def average_frames(frames: Sequence[CyclicFrame], mode: str = "magnitude") -> np.ndarray:
    """Element-wise mean of frame values.

    ``coherent`` averages the complex values; ``magnitude`` averages ``|value|``.
    """
    if not frames:
        raise UsageError("no frames to average")
    layout = frames[0].layout
    if any(f.layout != layout for f in frames):
        raise UsageError("frames have mixed layouts")
    stack = np.stack([f.values for f in frames])
    if mode == "coherent":
        return stack.mean(axis=0)
    if mode == "magnitude":
        return np.abs(stack).mean(axis=0)
    raise UsageError(f"unknown averaging mode {mode!r}")


def frame_grid(frame: CyclicFrame) -> np.ndarray:
    """``(num_alphas, 2M+1)`` or ``(num_lags, N)`` view of a frame's values."""
    values = frame.values
    layout = frame.layout
    if isinstance(layout, SetLayout):
        return values.reshape(layout.num_alphas, 2 * layout.max_lag + 1)
    if isinstance(layout, FullLayout):
        return values.reshape(layout.num_lags, layout.win_len)
    raise UsageError(f"unknown layout {layout!r}")


__all__ = [
    "CyclicCorrelator",
    "average_frames",
    "compute_full_window",
    "compute_set_window",
    "create",
    "dft",
    "expected_frames",
    "frame_grid",
    "full_compensation",
    "run",
]
