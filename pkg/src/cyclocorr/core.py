"""Shared domain types, configuration checks and output layout conventions.

Conventions
-----------
* Cycle frequencies are normalized (cycles/sample) and live in [-1/2, 1/2).
* A Set-mode frame is alpha-major with lags ascending ``-M..M``.
* A Full-mode frame is lag-major with DFT bins in natural order ``0..N-1``;
  :func:`full_bin_to_alpha` maps a bin to its centered cycle frequency.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import UsageError


class Mode(enum.Enum):
    SET = "set"
    FULL = "full"


def is_cycle_frequency(value: float) -> bool:
    return bool(np.isfinite(value)) and -0.5 <= value < 0.5


@dataclass(frozen=True)
class LagSpec:
    """Lags at which the correlation is evaluated.

    Use :meth:`symmetric` for the Set-mode ``-M..M`` range and
    :meth:`explicit` for an arbitrary strictly increasing list (Full mode).
    Construction never fails; :func:`validate_config` reports problems.
    """

    lags: tuple[int, ...]
    is_symmetric: bool = False

    @classmethod
    def symmetric(cls, max_lag: int) -> "LagSpec":
        max_lag = int(max_lag)
        return cls(tuple(range(-max_lag, max_lag + 1)), True)

    @classmethod
    def explicit(cls, lags: Sequence[int]) -> "LagSpec":
        return cls(tuple(int(m) for m in lags), False)

    @property
    def max_lag(self) -> int:
        return max(self.m_plus, self.m_minus)

    @property
    def m_plus(self) -> int:
        return max([0, *self.lags])

    @property
    def m_minus(self) -> int:
        return max([0, *(-m for m in self.lags)])


@dataclass(frozen=True)
class EstimatorConfig:
    mode: Mode
    win_len: int
    lag_spec: LagSpec
    alphas: tuple[float, ...] = ()
    conj: bool = False

    @classmethod
    def set_mode(cls, win_len: int, max_lag: int, alphas: Sequence[float],
                 conj: bool = False) -> "EstimatorConfig":
        return cls(Mode.SET, int(win_len), LagSpec.symmetric(max_lag),
                   tuple(float(a) for a in alphas), bool(conj))

    @classmethod
    def full_mode(cls, win_len: int, lags: Sequence[int],
                  conj: bool = False) -> "EstimatorConfig":
        return cls(Mode.FULL, int(win_len), LagSpec.explicit(lags), (), bool(conj))

    @property
    def layout(self) -> "Layout":
        if self.mode is Mode.SET:
            return SetLayout(len(self.alphas), self.lag_spec.max_lag)
        return FullLayout(len(self.lag_spec.lags), self.win_len)


def validate_config(config: EstimatorConfig) -> list[str]:
    """Return every violated configuration constraint (empty list means ok)."""
    problems = []
    lags = config.lag_spec.lags
    if not isinstance(config.mode, Mode):
        problems.append(f"unknown mode {config.mode!r}")
    if config.win_len < 2:
        problems.append(f"win_len must be >= 2 (got {config.win_len})")
    if not lags:
        problems.append("empty lag list")
    elif any(b <= a for a, b in zip(lags, lags[1:])):
        problems.append("lags must be strictly increasing without duplicates")

    if config.mode is Mode.SET:
        if not config.alphas:
            problems.append("empty alpha list")
        if not config.lag_spec.is_symmetric:
            problems.append("Set mode requires a symmetric lag spec (max_lag)")
    elif config.mode is Mode.FULL:
        if config.alphas:
            problems.append("Full mode does not take an alpha list")
        if config.lag_spec.is_symmetric:
            problems.append("Full mode requires an explicit lag list")

    bad = [a for a in config.alphas if not is_cycle_frequency(a)]
    if bad:
        problems.append(f"cycle frequencies outside [-0.5, 0.5): {bad}")
    if lags and config.win_len <= 2 * config.lag_spec.max_lag:
        problems.append(
            f"win_len too small vs max_lag ({config.win_len} <= 2*{config.lag_spec.max_lag})")
    return problems


@dataclass(frozen=True)
class SetLayout:
    num_alphas: int
    max_lag: int

    @property
    def length(self) -> int:
        return self.num_alphas * (2 * self.max_lag + 1)


@dataclass(frozen=True)
class FullLayout:
    num_lags: int
    win_len: int

    @property
    def length(self) -> int:
        return self.num_lags * self.win_len


Layout = Union[SetLayout, FullLayout]


def flat_index(layout: Layout, major: int, minor: int) -> int:
    """Position of ``(major, minor)`` inside a flat frame vector.

    For :class:`SetLayout`, ``major`` is the alpha index and ``minor`` the lag
    ``m`` in ``[-M, M]``.  For :class:`FullLayout`, ``major`` is the lag index
    and ``minor`` the DFT bin.
    """
    if isinstance(layout, SetLayout):
        width = 2 * layout.max_lag + 1
        if not 0 <= major < layout.num_alphas:
            raise UsageError(f"alpha index {major} out of range [0, {layout.num_alphas})")
        if not -layout.max_lag <= minor <= layout.max_lag:
            raise UsageError(f"lag {minor} out of range [-{layout.max_lag}, {layout.max_lag}]")
        return major * width + (minor + layout.max_lag)
    if isinstance(layout, FullLayout):
        if not 0 <= major < layout.num_lags:
            raise UsageError(f"lag index {major} out of range [0, {layout.num_lags})")
        if not 0 <= minor < layout.win_len:
            raise UsageError(f"bin {minor} out of range [0, {layout.win_len})")
        return major * layout.win_len + minor
    raise UsageError(f"unknown layout {layout!r}")


def full_bin_to_alpha(k: int, n: int) -> float:
    if not 0 <= k < n:
        raise UsageError(f"bin {k} out of range [0, {n})")
    return k / n if 2 * k < n else k / n - 1.0


def full_alpha_grid(n: int) -> np.ndarray:
    """Cycle frequency of every bin in natural DFT order."""
    k = np.arange(n)
    return np.where(2 * k < n, k / n, k / n - 1.0)


@dataclass(frozen=True, eq=False)
class CyclicFrame:
    """One estimator output vector.

    ``start_abs`` is the absolute index of the sample the window's ``n = 0``
    term is anchored to (the ``y`` stream index).
    """

    frame_index: int
    start_abs: int
    values: np.ndarray = field(repr=False)
    layout: Layout

    def __post_init__(self):
        if self.values.shape != (self.layout.length,):
            raise UsageError(
                f"frame has {self.values.shape} values, layout needs {self.layout.length}")
        self.values.flags.writeable = False
