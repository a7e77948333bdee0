"""Seeded synthetic sources.

Random numbers come from Philox4x64-10 (Salmon et al., Random123), a
counter-based generator, keyed with ``key = seed + 2**64 * stream`` and
counter starting at zero. Raw 64-bit outputs ``r`` become uniforms
``(r >> 11) * 2**-53 + 2**-54`` in the open interval (0, 1), and normal
pairs come from Box-Muller on consecutive uniforms ``(u1, u2)``:
``sqrt(-2 log u1) * (cos(2 pi u2), sin(2 pi u2))``. Nothing here depends
on NumPy's distribution code, so the same seed gives the same samples on
any platform (up to libm rounding of log/cos/sin).
"""
from dataclasses import dataclass
import math

import numpy as np

from .signals import mix

KINDS = ("sinusoid", "noise", "harmonic")

# stream ids
STREAM_NOISE = 1
STREAM_FREQ = 2
STREAM_PHASE = 3
STREAM_AMP = 4
STREAM_INIT = 5
STREAM_BENCH = 6

_MASK64 = (1 << 64) - 1


def philox_raw(seed, stream, count):
    key = (int(seed) & _MASK64) + (int(stream) << 64)
    bits = np.random.Philox(key=key)
    return bits.random_raw(int(count))


def uniforms(seed, stream, count):
    raw = philox_raw(seed, stream, count)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54


def normals(seed, stream, shape):
    count = int(np.prod(shape))
    pairs = (count + 1) // 2
    u = uniforms(seed, stream, 2 * pairs).reshape(pairs, 2)
    radius = np.sqrt(-2.0 * np.log(u[:, 0]))
    angle = 2.0 * math.pi * u[:, 1]
    z = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1).ravel()
    return z[:count].reshape(shape)


@dataclass(frozen=True)
class SynthSpec:
    """What to generate.

    ``frequencies`` (cycles per frame, one per source) overrides the seeded
    draw for the sinusoid kind; overrides closer than ``2 / l`` are rejected.
    """

    n: int
    l: int
    kind: str = "sinusoid"
    seed: int = 0
    sample_rate: int = 8000
    frequencies: tuple = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.l < 16:
            raise ValueError(f"l must be >= 16, got {self.l}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown source kind {self.kind!r}; expected one of {KINDS}")
        if self.frequencies is not None:
            _check_override(self)


def _check_override(spec):
    if spec.kind != "sinusoid":
        raise ValueError("a frequency override only applies to the sinusoid kind")
    freqs = np.asarray(spec.frequencies, dtype=np.float64)
    if freqs.shape != (spec.n,):
        raise ValueError(f"need {spec.n} frequencies, got {freqs.shape}")
    if np.any(freqs <= 0) or np.any(freqs >= 0.5):
        raise ValueError("frequencies must lie in (0, 0.5) cycles per frame")
    gaps = np.diff(np.sort(freqs))
    if gaps.size and gaps.min() < 2.0 / spec.l:
        raise ValueError(
            f"frequencies must be at least 2/l = {2.0 / spec.l:g} cycles per frame apart"
        )


def _grid(l, top):
    # candidate bins 1, 4, 7, ... spaced 3 apart; +-0.5 bin jitter keeps
    # neighbouring sources at least 2 bins (2 / l cycles per frame) apart
    return np.arange(1, int(math.floor(top)) + 1, 3)


def _pick_bins(spec, top):
    grid = _grid(spec.l, top)
    if spec.n > grid.size:
        raise ValueError(
            f"cannot place {spec.n} separated {spec.kind} sources in l={spec.l} "
            f"(max {grid.size})"
        )
    u = uniforms(spec.seed, STREAM_FREQ, grid.size + spec.n)
    order = np.argsort(u[: grid.size], kind="stable")
    jitter = u[grid.size:] - 0.5
    return (grid[order[: spec.n]] + jitter) / spec.l


def source_frequencies(spec):
    """Frequencies (cycles per frame) used by the sinusoid/harmonic kinds."""
    if spec.kind == "sinusoid" and spec.frequencies is not None:
        return np.asarray(spec.frequencies, dtype=np.float64)
    if spec.kind == "sinusoid":
        return _pick_bins(spec, spec.l / 2 - 1.5)
    if spec.kind == "harmonic":
        return _pick_bins(spec, (spec.l / 2 - 1) / 3 - 0.5)
    raise ValueError(f"{spec.kind} sources have no frequencies")


def gen_sources(spec):
    """``(n, l)`` array of sources for ``spec``; deterministic in ``spec``."""
    n, l = spec.n, spec.l
    t = np.arange(l, dtype=np.float64)
    if spec.kind == "noise":
        return normals(spec.seed, STREAM_NOISE, (n, l))
    freqs = source_frequencies(spec)
    if spec.kind == "sinusoid":
        phase = 2.0 * math.pi * uniforms(spec.seed, STREAM_PHASE, n)
        return np.sin(2.0 * math.pi * freqs[:, None] * t[None, :] + phase[:, None])
    # harmonic: fundamental plus partials at 2x and 3x
    phase = 2.0 * math.pi * uniforms(spec.seed, STREAM_PHASE, 3 * n).reshape(n, 3)
    amp = 0.3 + 0.7 * uniforms(spec.seed, STREAM_AMP, 3 * n).reshape(n, 3)
    out = np.zeros((n, l))
    for k in range(3):
        out += amp[:, k, None] * np.sin(
            2.0 * math.pi * (k + 1) * freqs[:, None] * t[None, :] + phase[:, k, None]
        )
    return out


def gen_scene(spec):
    sources = gen_sources(spec)
    return sources, mix(sources)
