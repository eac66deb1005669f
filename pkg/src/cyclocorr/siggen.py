"""Seedable test-signal generators: CPM/GMSK envelopes, tones and complex AWGN.

Randomness comes from :class:`numpy.random.Generator` backed by PCG64 and
seeded explicitly; the same seed always reproduces the same stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import erfc

from .errors import DataError, UsageError

GAUSSIAN = "gaussian"
RECTANGULAR = "rect"
PULSE_KINDS = (GAUSSIAN, RECTANGULAR)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class CpmParams:
    """CPM modulation parameters; defaults are the binary GMSK reference setup.

    ``sps`` samples make up one symbol period, so the baud-rate cycle
    frequency is ``1/sps`` cycles/sample.
    """

    h: float = 0.5
    alphabet_size: int = 2
    pulse_len: int = 4
    bt: float = 0.25
    sps: int = 8
    pulse_kind: str = GAUSSIAN

    def __post_init__(self):
        if not (np.isfinite(self.h) and self.h > 0):
            raise UsageError(f"modulation index must be > 0 (got {self.h})")
        if self.alphabet_size < 2 or self.alphabet_size % 2:
            raise UsageError(f"alphabet size must be even and >= 2 (got {self.alphabet_size})")
        if self.pulse_len < 1:
            raise UsageError(f"pulse length must be >= 1 symbol (got {self.pulse_len})")
        if self.sps < 1:
            raise UsageError(f"samples per symbol must be >= 1 (got {self.sps})")
        if self.pulse_kind not in PULSE_KINDS:
            raise UsageError(f"pulse kind must be one of {PULSE_KINDS} (got {self.pulse_kind!r})")
        if self.pulse_kind == GAUSSIAN and not self.bt > 0:
            raise UsageError(f"BT must be > 0 (got {self.bt})")

    @property
    def alphabet(self) -> np.ndarray:
        return np.arange(-(self.alphabet_size - 1), self.alphabet_size, 2)


@dataclass(frozen=True, eq=False)
class PulseTable:
    """Frequency pulse ``f`` sampled at the sample midpoints of ``[0, L*T)``
    and its running sum ``g`` (the phase response, ending at exactly 1/2)."""

    f: np.ndarray
    g: np.ndarray


def _table(f: np.ndarray) -> PulseTable:
    f = 0.5 * f / f.sum()
    # mirror-average removes any rounding asymmetry left by the evaluation
    f = 0.5 * (f + f[::-1])
    g = np.minimum(np.cumsum(f), 0.5)
    g[-1] = 0.5
    return PulseTable(f, g)


def gaussian_freq_pulse(bt: float, pulse_len: int, sps: int) -> PulseTable:
    """Truncated GMSK frequency pulse.

    The usual continuous pulse, in symbol-time units and centered on the
    truncation interval, is::

        f(t) = Q(c*(t - 1/2)) - Q(c*(t + 1/2)),   c = 2*pi*BT / sqrt(ln 2)

    sampled at ``t = (i + 1/2)/sps - L/2`` and rescaled so the samples sum
    to 1/2.
    """
    if not bt > 0:
        raise UsageError(f"BT must be > 0 (got {bt})")
    if pulse_len < 1 or sps < 1:
        raise UsageError("pulse length and samples/symbol must be >= 1")
    t = (np.arange(pulse_len * sps) + 0.5) / sps - pulse_len / 2
    c = 2 * np.pi * bt / np.sqrt(np.log(2))

    def q(v):
        return 0.5 * erfc(v / np.sqrt(2))

    return _table(q(c * (t - 0.5)) - q(c * (t + 0.5)))


def rect_freq_pulse(pulse_len: int, sps: int) -> PulseTable:
    if pulse_len < 1 or sps < 1:
        raise UsageError("pulse length and samples/symbol must be >= 1")
    return _table(np.ones(pulse_len * sps))


def pulse_table(params: CpmParams) -> PulseTable:
    if params.pulse_kind == RECTANGULAR:
        return rect_freq_pulse(params.pulse_len, params.sps)
    return gaussian_freq_pulse(params.bt, params.pulse_len, params.sps)


def cpm_modulate(params: CpmParams, symbols: Sequence[int]) -> np.ndarray:
    """Sampled complex envelope ``exp(j*phi[n])`` of a CPM signal.

    ``phi[n] = 2*pi*h * sum_k a_k * g[n - k*sps]`` with ``g`` held at 1/2 once
    a symbol's pulse has fully elapsed and zero before it starts.  The phase
    is 0 before the first symbol; the output has ``len(symbols)*sps`` samples.
    """
    a = np.asarray(symbols)
    if a.ndim != 1 or a.size == 0:
        raise UsageError("need a non-empty 1-D symbol sequence")
    valid = np.isin(a, params.alphabet)
    if not valid.all():
        i = int(np.flatnonzero(~valid)[0])
        raise DataError(f"symbol {a[i]!r} at index {i} is not in the "
                        f"{params.alphabet_size}-ary alphabet", index=i)

    f = pulse_table(params).f
    impulses = np.zeros(a.size * params.sps)
    impulses[::params.sps] = a
    # cumsum of the frequency trajectory == sum_k a_k g[n - k*sps]
    freq = np.convolve(impulses, f)[:impulses.size]
    phase = 2 * np.pi * params.h * np.cumsum(freq)
    return np.exp(1j * phase)


def random_symbols(alphabet_size: int, count: int, seed: int) -> np.ndarray:
    """I.i.d. uniform symbols from ``{+-1, +-3, ..., +-(M-1)}``."""
    if alphabet_size < 2 or alphabet_size % 2:
        raise UsageError(f"alphabet size must be even and >= 2 (got {alphabet_size})")
    if count < 0:
        raise UsageError(f"count must be >= 0 (got {count})")
    idx = make_rng(seed).integers(0, alphabet_size, size=count)
    return 2 * idx - (alphabet_size - 1)


def tone(f0: float, phi0: float, count: int) -> np.ndarray:
    if count < 0:
        raise UsageError(f"count must be >= 0 (got {count})")
    return np.exp(1j * (2 * np.pi * f0 * np.arange(count) + phi0))


def awgn(count: int, sigma: float, seed: int) -> np.ndarray:
    """Circular complex Gaussian noise with total variance ``sigma**2``.

    Box-Muller on pairs of uniforms: with ``u1`` in (0, 1] and ``u2`` in
    [0, 1), ``sigma*sqrt(-ln u1)*exp(2j*pi*u2)`` has independent real and
    imaginary parts of standard deviation ``sigma/sqrt(2)``.
    """
    if sigma < 0:
        raise UsageError(f"sigma must be >= 0 (got {sigma})")
    if count < 0:
        raise UsageError(f"count must be >= 0 (got {count})")
    rng = make_rng(seed)
    u1 = 1.0 - rng.random(count)
    u2 = rng.random(count)
    return sigma * np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)


def gmsk_record(params: CpmParams, num_symbols: int, seed: int) -> np.ndarray:
    """Random-symbol CPM record, ``num_symbols * sps`` samples long."""
    return cpm_modulate(params, random_symbols(params.alphabet_size, num_symbols, seed))
