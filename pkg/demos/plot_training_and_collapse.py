"""
Training free predictions
=========================

With no network in the way, predictions are optimized directly against each
loss. At two sources all methods land on the same answer. At four sources
MCL keeps whatever collisions its first winner map had.
"""
from sepmatch import SynthSpec, TrainConfig, compare_methods, gen_sources, train_direct

for n in (2, 4):
    targets = gen_sources(SynthSpec(n, 1024, seed=1))
    print(f"n = {n}")
    for row in compare_methods(targets, TrainConfig(seed=1, steps=1000)):
        print(f"  {row.method.value:<14} SI-SDR {row.si_sdr:6.2f} dB  AUC {row.auc_sdr:.3f}  "
              f"collapse {row.collapse_rate:.2f}  {row.wall_time:.2f} s")

# Identical starting predictions are the textbook collapse trigger: every
# target picks prediction 0.
traj = train_direct(gen_sources(SynthSpec(3, 1024)), TrainConfig("MCL", init_scale=0.0, steps=500))
print("collapse rate by step:", [(r.step, round(r.collapse_rate, 2)) for r in traj.records[::2]])
print("persistent collapse:", traj.persistent_collapse)
