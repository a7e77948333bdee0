"""Mono RIFF/WAVE reading and writing (PCM16 and IEEE float32).

Only the two codecs the evaluation path needs are accepted; anything else
is rejected with a specific exception so callers can report it.
"""
from dataclasses import dataclass
import os
import struct

import numpy as np

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


class WavError(ValueError):
    pass


class MalformedWavError(WavError):
    pass


class UnsupportedCodecError(WavError):
    pass


class ChannelCountError(WavError):
    pass


@dataclass
class WavAsset:
    samples: np.ndarray
    sample_rate: int
    source_path: str

    @property
    def duration(self):
        return self.samples.size / self.sample_rate


def _chunks(data):
    pos = 12
    while pos + 8 <= len(data):
        cid, size = struct.unpack_from("<4sI", data, pos)
        body = data[pos + 8: pos + 8 + size]
        if len(body) < size:
            raise MalformedWavError(f"chunk {cid!r} truncated ({len(body)} of {size} bytes)")
        yield cid, body
        pos += 8 + size + (size & 1)


def parse_wav(data, source_path="<bytes>"):
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedWavError(f"{source_path}: not a RIFF/WAVE file")
    fmt = None
    payload = None
    for cid, body in _chunks(data):
        if cid == b"fmt ":
            if len(body) < 16:
                raise MalformedWavError(f"{source_path}: fmt chunk too short")
            fmt = body
        elif cid == b"data":
            payload = body
    if fmt is None:
        raise MalformedWavError(f"{source_path}: missing fmt chunk")
    if payload is None:
        raise MalformedWavError(f"{source_path}: missing data chunk")

    tag, channels, rate, _, block_align, bits = struct.unpack_from("<HHIIHH", fmt, 0)
    if tag == WAVE_FORMAT_EXTENSIBLE:
        if len(fmt) < 26:
            raise MalformedWavError(f"{source_path}: extensible fmt chunk too short")
        tag = struct.unpack_from("<H", fmt, 24)[0]
    if channels != 1:
        raise ChannelCountError(f"{source_path}: expected mono, got {channels} channels")
    if tag == WAVE_FORMAT_PCM and bits == 16:
        dtype, scale = "<i2", 1.0 / 32768.0
    elif tag == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        dtype, scale = "<f4", 1.0
    else:
        raise UnsupportedCodecError(
            f"{source_path}: unsupported codec (format tag {tag:#06x}, {bits} bits); "
            "need PCM16 or float32"
        )
    if rate == 0:
        raise MalformedWavError(f"{source_path}: zero sample rate")
    width = bits // 8
    if block_align != width:
        raise MalformedWavError(f"{source_path}: block align {block_align} != {width}")
    if len(payload) % width:
        raise MalformedWavError(f"{source_path}: data size not a multiple of {width}")
    samples = np.frombuffer(payload, dtype=dtype).astype(np.float64) * scale
    return WavAsset(samples, int(rate), str(source_path))


def load_wav(path):
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_wav(data, os.fspath(path))


def encode_wav(samples, sample_rate, codec="pcm16"):
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 1:
        raise ChannelCountError("only mono signals can be written")
    if codec == "pcm16":
        q = np.clip(np.round(samples * 32768.0), -32768, 32767).astype("<i2")
        tag, bits = WAVE_FORMAT_PCM, 16
    elif codec == "float32":
        q = samples.astype("<f4")
        tag, bits = WAVE_FORMAT_IEEE_FLOAT, 32
    else:
        raise UnsupportedCodecError(f"unknown codec {codec!r}")
    payload = q.tobytes()
    width = bits // 8
    fmt = struct.pack("<HHIIHH", tag, 1, int(sample_rate), int(sample_rate) * width, width, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


def write_wav(path, samples, sample_rate, codec="pcm16"):
    """Write a mono WAV. PCM16 rounds to the nearest step of 2**-15 and clips."""
    with open(path, "wb") as fh:
        fh.write(encode_wav(samples, sample_rate, codec))
