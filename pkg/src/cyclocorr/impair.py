"""Carrier frequency offset and additive-noise impairments, plus a CFO
estimator built on the conjugate cyclic correlation.

A CFO of ``eps`` cycles/sample multiplies a record by ``exp(2j*pi*eps*n)``.
The ordinary cyclic correlation only picks up a lag-dependent phase
``exp(2j*pi*eps*m)``, but the conjugate one sees the rotation twice, so a
conjugate feature at ``beta`` moves to ``beta + 2*eps``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EstimatorConfig
from .errors import NoFeatureError, UsageError
from .estimator import CyclicCorrelator, average_frames
from .siggen import awgn


@dataclass(frozen=True)
class CfoSpec:
    eps: float
    phi0: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.eps) and abs(self.eps) < 0.5):
            raise UsageError(f"CFO must satisfy |eps| < 1/2 (got {self.eps})")

    def inverse(self) -> "CfoSpec":
        return CfoSpec(-self.eps, -self.phi0)


def apply_cfo(x, cfo: CfoSpec) -> np.ndarray:
    """``x[n] * exp(j*(2*pi*eps*n + phi0))``, ``n`` counted from the record start."""
    x = np.asarray(x, dtype=np.complex128)
    n = np.arange(x.size)
    return x * np.exp(1j * (2 * np.pi * cfo.eps * n + cfo.phi0))


def mean_power(x) -> float:
    x = np.asarray(x)
    return float(np.mean(np.abs(x) ** 2)) if x.size else 0.0


def add_noise_snr(x, snr_db: float, seed: int) -> np.ndarray:
    """Add circular white Gaussian noise at ``snr_db`` relative to the mean power of ``x``."""
    x = np.asarray(x, dtype=np.complex128)
    if x.size == 0:
        raise UsageError("cannot set an SNR on an empty record")
    power = mean_power(x)
    if power == 0:
        raise UsageError("record has zero power; SNR is undefined")
    sigma = np.sqrt(power * 10.0 ** (-snr_db / 10.0))
    return x + awgn(x.size, sigma, seed)


def ccf_scan(x, n: int, num_frames: int, lag: int = 0) -> np.ndarray:
    """Magnitude-averaged conjugate Full-mode scan over all ``n`` bins."""
    if num_frames < 1:
        raise UsageError(f"need at least one frame (got {num_frames})")
    cfg = EstimatorConfig.full_mode(n, [lag], conj=True)
    est = CyclicCorrelator(cfg)
    x = np.asarray(x, dtype=np.complex128)
    needed = est.buffer_need + (num_frames - 1) * n
    if x.size < needed:
        raise UsageError(f"{num_frames} frames of {n} need {needed} samples, record has {x.size}")
    frames = est.push(x[:needed])
    return average_frames(frames, "magnitude")


def _parabolic_offset(left: float, mid: float, right: float) -> float:
    denom = left - 2 * mid + right
    if denom >= 0:
        return 0.0
    return 0.5 * (left - right) / denom


def _search_bins(n: int, expected_beta: float) -> tuple[int, np.ndarray]:
    # conjugate features come in +-beta pairs; stay clear of the mirror image
    center = int(round(expected_beta * n))
    half = n // 8
    if abs(center) >= 1:
        half = min(half, abs(center))
    return center, np.arange(-half + 1, half)


def peak_bin(scan: np.ndarray, expected_beta: float) -> int:
    """Bin of the largest scan value near ``expected_beta``.

    The search spans ``N/8`` bins either side, narrowed to ``|beta|*N`` so the
    mirror feature at ``-beta`` is never picked.
    """
    center, offsets = _search_bins(scan.size, expected_beta)
    bins = (center + offsets) % scan.size
    return int(bins[np.argmax(scan[bins])])


def estimate_cfo_ccf(x, expected_beta: float, n: int, num_frames: int,
                     detect_ratio: float = 3.0) -> float:
    """Estimate a CFO from the displacement of a conjugate cyclic feature.

    The conjugate scan at lag 0 is searched near ``expected_beta`` (see
    :func:`peak_bin` for the window); the peak is refined by a 3-point parabola on
    log-magnitude and ``eps = (beta_peak - expected_beta) / 2``.

    Raises
    ------
    NoFeatureError
        If the peak is not ``detect_ratio`` times the median magnitude of
        the searched bins (e.g. a proper signal with no conjugate feature).
    """
    scan = ccf_scan(x, n, num_frames)
    center, offsets = _search_bins(n, expected_beta)
    local = scan[(center + offsets) % n]
    i = int(np.argmax(local))
    floor = float(np.median(local))
    if not local[i] > detect_ratio * floor:
        raise NoFeatureError(
            f"no conjugate feature near beta={expected_beta}: peak {local[i]:.3g} "
            f"is not {detect_ratio}x the median {floor:.3g}")

    k = center + int(offsets[i])
    tiny = np.finfo(float).tiny
    left, mid, right = (np.log(max(scan[(k + d) % n], tiny)) for d in (-1, 0, 1))
    beta_peak = (k + _parabolic_offset(left, mid, right)) / n
    return (beta_peak - expected_beta) / 2
