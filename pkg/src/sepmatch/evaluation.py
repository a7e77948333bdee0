"""Score a directory of estimated sources against a directory of references.

Layout: either each directory holds one scene's WAV files directly, or it
holds one subdirectory per scene. Scenes pair up by sorted name; files
inside a scene are matched to each other by the optimal permutation, so
their names do not need to correspond.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import auc_from_scores, matched_scores
from .wav import load_wav

LENGTH_TOLERANCE = 0.01


@dataclass(frozen=True)
class SceneScore:
    scene: str
    n: int
    length: int
    si_sdr: float
    auc_sdr: float
    permutation: tuple


@dataclass(frozen=True)
class EvalReport:
    scenes: list
    mean_si_sdr: float
    mean_auc_sdr: float


def _wavs(directory):
    return sorted(p for p in Path(directory).iterdir() if p.is_file() and p.suffix.lower() == ".wav")


def _scenes(directory):
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    subdirs = sorted(p for p in directory.iterdir() if p.is_dir())
    if subdirs:
        return [(p.name, _wavs(p)) for p in subdirs]
    return [(directory.name, _wavs(directory))]


def _truncate(signals, scene):
    lengths = [s.size for s in signals]
    shortest, longest = min(lengths), max(lengths)
    if shortest == 0:
        raise ValueError(f"scene {scene}: empty WAV file")
    if (longest - shortest) > LENGTH_TOLERANCE * longest:
        raise ValueError(
            f"scene {scene}: lengths differ by more than {LENGTH_TOLERANCE:.0%} "
            f"({shortest} vs {longest} samples)"
        )
    return np.stack([s[:shortest] for s in signals])


def load_scene(directory):
    """Stack every WAV in ``directory`` (sorted by name) into an ``(n, l)`` array."""
    paths = _wavs(directory)
    if not paths:
        raise ValueError(f"no WAV files in {directory}")
    return _truncate([load_wav(p).samples for p in paths], Path(directory).name)


def _score_scene(name, ref_paths, est_paths, zero_mean):
    if len(ref_paths) != len(est_paths):
        raise ValueError(
            f"scene {name}: {len(ref_paths)} reference files vs {len(est_paths)} estimates"
        )
    if not ref_paths:
        raise ValueError(f"scene {name}: no WAV files")
    both = _truncate([load_wav(p).samples for p in ref_paths + est_paths], name)
    n = len(ref_paths)
    refs, ests = both[:n], both[n:]
    scores, sigma = matched_scores(refs, ests, zero_mean)
    return SceneScore(name, n, refs.shape[1], float(np.mean(scores)),
                      auc_from_scores(scores).auc, tuple(sigma))


def eval_directories(ref_dir, est_dir, zero_mean=False, workers=1):
    ref_scenes = _scenes(ref_dir)
    est_scenes = _scenes(est_dir)
    if len(ref_scenes) != len(est_scenes):
        raise ValueError(f"{len(ref_scenes)} reference scenes vs {len(est_scenes)} estimate scenes")
    jobs = [(r[0], r[1], e[1], zero_mean) for r, e in zip(ref_scenes, est_scenes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            scenes = list(pool.map(lambda job: _score_scene(*job), jobs))
    else:
        scenes = [_score_scene(*job) for job in jobs]
    return EvalReport(
        scenes,
        float(np.mean([s.si_sdr for s in scenes])),
        float(np.mean([s.auc_sdr for s in scenes])),
    )
