"""Sample files and CSV export.

Sample files (``*.cf32``) are headerless interleaved little-endian float32
pairs, I then Q.  Metadata lives in a JSON sidecar next to the sample file,
``<name>.cf32.meta.json``, with one required key ``sample_rate_hz``.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Union

import numpy as np

from .core import CyclicFrame, EstimatorConfig, FullLayout, SetLayout, full_alpha_grid
from .errors import DataError, FormatError, UsageError

CF32 = np.dtype("<c8")
META_SUFFIX = ".meta.json"


def write_cf32(path, samples) -> int:
    """Write samples as interleaved LE float32; returns the byte count."""
    s = np.asarray(samples)
    if s.ndim != 1:
        raise UsageError("samples must be a 1-D array")
    bad = np.flatnonzero(~np.isfinite(s))
    if bad.size:
        raise DataError(f"non-finite sample at index {bad[0]}", index=int(bad[0]))
    data = s.astype(CF32)
    with open(path, "wb") as fh:
        fh.write(data.tobytes())
    return data.nbytes


def read_cf32(path) -> np.ndarray:
    """Read a cf32 file into complex128."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) % CF32.itemsize:
        raise FormatError(f"{path}: {len(raw)} bytes is not a whole number of I/Q pairs")
    return np.frombuffer(raw, dtype=CF32).astype(np.complex128)


@dataclass
class RecordingMeta:
    sample_rate_hz: float
    description: str = ""
    seed: Optional[int] = None
    center_freq_hz: Optional[float] = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        doc = dict(self.extra)
        doc["sample_rate_hz"] = self.sample_rate_hz
        doc["description"] = self.description
        if self.seed is not None:
            doc["seed"] = self.seed
        if self.center_freq_hz is not None:
            doc["center_freq_hz"] = self.center_freq_hz
        return doc

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "RecordingMeta":
        if not isinstance(doc, dict):
            raise FormatError("metadata must be a JSON object")
        doc = dict(doc)
        if "sample_rate_hz" not in doc:
            raise FormatError("metadata is missing required key 'sample_rate_hz'")
        rate = doc.pop("sample_rate_hz")
        if isinstance(rate, bool) or not isinstance(rate, (int, float)) or not rate > 0:
            raise FormatError(f"key 'sample_rate_hz' must be a positive number (got {rate!r})")
        description = doc.pop("description", "")
        if not isinstance(description, str):
            raise FormatError(f"key 'description' must be a string (got {description!r})")
        seed = doc.pop("seed", None)
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
            raise FormatError(f"key 'seed' must be an integer (got {seed!r})")
        fc = doc.pop("center_freq_hz", None)
        if fc is not None and (isinstance(fc, bool) or not isinstance(fc, (int, float))):
            raise FormatError(f"key 'center_freq_hz' must be a number (got {fc!r})")
        return cls(float(rate), description, seed, None if fc is None else float(fc), doc)


def meta_path(path) -> str:
    return os.fspath(path) + META_SUFFIX


def write_meta(path, meta: RecordingMeta) -> str:
    """Write the sidecar for sample file ``path``; returns the sidecar path."""
    if not meta.sample_rate_hz > 0:
        raise UsageError(f"sample rate must be > 0 (got {meta.sample_rate_hz})")
    target = meta_path(path)
    with open(target, "w", encoding="utf-8") as fh:
        json.dump(meta.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return target


def read_meta(path) -> RecordingMeta:
    with open(meta_path(path), encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{meta_path(path)}: not valid JSON ({exc})") from exc
    return RecordingMeta.from_dict(doc)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _coordinates(config: EstimatorConfig, layout) -> tuple[np.ndarray, np.ndarray]:
    """Per-element (alpha, lag) columns in layout order."""
    if isinstance(layout, SetLayout):
        lags = np.arange(-layout.max_lag, layout.max_lag + 1)
        alphas = np.repeat(np.asarray(config.alphas, dtype=float), lags.size)
        return alphas, np.tile(lags, layout.num_alphas)
    if isinstance(layout, FullLayout):
        alphas = np.tile(full_alpha_grid(layout.win_len), layout.num_lags)
        lags = np.repeat(np.asarray(config.lag_spec.lags), layout.win_len)
        return alphas, lags
    raise UsageError(f"unknown layout {layout!r}")


def export_csv(path, frames_or_average: Union[Sequence[CyclicFrame], np.ndarray],
               config: EstimatorConfig) -> int:
    """Write frames or a frame average as CSV; returns the number of data rows.

    Frames give one row per (frame, alpha, lag) with columns
    ``frame_index, alpha, lag, re, im, mag``.  A real-valued average (magnitude
    averaging) gives ``alpha, lag, mean_mag``; a complex one (coherent
    averaging) adds ``mean_re, mean_im``.
    """
    layout = config.layout
    alphas, lags = _coordinates(config, layout)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        if isinstance(frames_or_average, np.ndarray):
            values = frames_or_average
            if values.shape != (layout.length,):
                raise UsageError(
                    f"average has shape {values.shape}, layout needs ({layout.length},)")
            coherent = np.iscomplexobj(values)
            out.writerow(["alpha", "lag", "mean_mag"] + (["mean_re", "mean_im"] if coherent else []))
            for a, m, v in zip(alphas, lags, values):
                row = [_fmt(a), int(m), _fmt(abs(v))]
                if coherent:
                    row += [_fmt(v.real), _fmt(v.imag)]
                out.writerow(row)
            return int(values.size)

        frames = list(frames_or_average)
        if not frames:
            raise UsageError("nothing to export")
        out.writerow(["frame_index", "alpha", "lag", "re", "im", "mag"])
        rows = 0
        for fr in frames:
            if fr.layout != layout:
                raise UsageError(f"frame {fr.frame_index} layout {fr.layout} != {layout}")
            for a, m, v in zip(alphas, lags, fr.values):
                out.writerow([fr.frame_index, _fmt(a), int(m), _fmt(v.real), _fmt(v.imag),
                              _fmt(abs(v))])
            rows += fr.values.size
        return rows


def export_oracle_csv(path, table) -> int:
    """Write an oracle table as ``alpha, lag, mean_mag, trials`` rows."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["alpha", "lag", "mean_mag", "trials"])
        for i, a in enumerate(table.alphas):
            for j, m in enumerate(table.lags):
                out.writerow([_fmt(a), m, _fmt(table.mean_magnitude[i, j]), table.trials])
    return len(table.alphas) * len(table.lags)


def read_csv_rows(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
