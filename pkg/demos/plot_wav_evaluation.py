"""
Scoring WAV folders
===================

Write a small corpus of reference and estimate WAVs, then score it the way
the ``sepmatch eval`` command does.
"""
import tempfile
from pathlib import Path

import numpy as np

from sepmatch import SynthSpec, gen_sources
from sepmatch.evaluation import eval_directories
from sepmatch.wav import write_wav

root = Path(tempfile.mkdtemp())
rng = np.random.default_rng(0)
for k in range(3):
    sources = 0.4 * gen_sources(SynthSpec(3, 8000, seed=k))
    for j, s in enumerate(sources):
        (root / "ref" / f"mix{k}").mkdir(parents=True, exist_ok=True)
        (root / "est" / f"mix{k}").mkdir(parents=True, exist_ok=True)
        write_wav(root / "ref" / f"mix{k}" / f"spk{j}.wav", s, 8000)
        # estimates come back in another order and with some leakage
        noisy = sources[(j + 1) % 3] + (0.05 + 0.1 * k) * rng.standard_normal(s.size)
        write_wav(root / "est" / f"mix{k}" / f"out{j}.wav", np.clip(noisy, -1, 1), 8000)

report = eval_directories(root / "ref", root / "est")
for s in report.scenes:
    print(f"{s.scene}: SI-SDR {s.si_sdr:6.2f} dB  AUC {s.auc_sdr:.3f}  matching {s.permutation}")
print(f"mean SI-SDR {report.mean_si_sdr:.2f} dB, mean AUC {report.mean_auc_sdr:.3f}")
