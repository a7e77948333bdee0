import numpy as np
import pytest

from sepmatch.signals import mix, pairwise_terms
from sepmatch.synth import (KINDS, SynthSpec, gen_scene, gen_sources, normals, philox_raw,
                            source_frequencies, uniforms)


def test_philox_is_the_documented_generator():
    # independent construction straight from numpy's Philox4x64-10 bit generator
    ref = np.random.Philox(key=7 + (3 << 64)).random_raw(5)
    assert np.array_equal(philox_raw(7, 3, 5), ref)
    u = uniforms(7, 3, 5)
    assert np.array_equal(u, (ref >> np.uint64(11)) * 2.0**-53 + 2.0**-54)
    assert np.all((u > 0) & (u < 1))


def test_streams_are_independent():
    assert not np.array_equal(uniforms(0, 1, 8), uniforms(0, 2, 8))
    assert not np.array_equal(uniforms(0, 1, 8), uniforms(1, 1, 8))


def test_normals_moments():
    z = normals(11, 4, (200_000,))
    assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01


@pytest.mark.parametrize("kind", KINDS)
def test_determinism(kind):
    spec = SynthSpec(4, 512, kind, seed=9)
    a, b = gen_sources(spec), gen_sources(spec)
    assert a.tobytes() == b.tobytes()
    assert a.shape == (4, 512) and np.all(np.isfinite(a))


def test_frequencies_separated():
    for seed in range(50):
        spec = SynthSpec(8, 256, seed=seed)
        f = np.sort(source_frequencies(spec))
        assert np.all(np.diff(f) >= 2 / 256 - 1e-12)
        assert f[0] > 0 and f[-1] < 0.5


def test_sinusoids_mutually_dissimilar():
    for seed in range(20):
        S = gen_sources(SynthSpec(4, 1024, seed=seed))
        sdr = pairwise_terms(S, S)[0]
        off = sdr[~np.eye(4, dtype=bool)]
        assert np.all(off < 0.0)
    for seed in range(5):
        S = gen_sources(SynthSpec(128, 1024, seed=seed))
        sdr = pairwise_terms(S, S)[0]
        assert np.all(sdr[~np.eye(128, dtype=bool)] < 0.0)


def test_noise_low_correlation():
    S = gen_sources(SynthSpec(2, 4096, "noise", seed=0))
    r = np.dot(S[0], S[1]) / (np.linalg.norm(S[0]) * np.linalg.norm(S[1]))
    assert abs(r) < 0.1


def test_scene():
    S, m = gen_scene(SynthSpec(1, 64))
    assert np.array_equal(m, S[0])
    S, m = gen_scene(SynthSpec(4, 1024, seed=7))
    assert m.shape == (1024,) and np.all(np.isfinite(m))
    assert np.array_equal(m, mix(S))


def test_spec_validation():
    with pytest.raises(ValueError):
        SynthSpec(2, 1024, frequencies=(0.1, 0.1))
    with pytest.raises(ValueError):
        SynthSpec(0, 1024)
    with pytest.raises(ValueError):
        SynthSpec(2, 8)
    with pytest.raises(ValueError):
        SynthSpec(2, 1024, "speech")
    S = gen_sources(SynthSpec(2, 1024, frequencies=(0.1, 0.2)))
    spec = np.abs(np.fft.rfft(S[0]))
    assert int(np.argmax(spec)) == round(0.1 * 1024)
