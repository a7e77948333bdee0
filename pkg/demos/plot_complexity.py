"""
Assignment cost against the number of sources
=============================================

Timing only the matching step, the Hungarian algorithm grows roughly
cubically and winner-takes-all quadratically. Writes ``complexity.svg``.
"""
from sepmatch.bench import bench_losses, fit_loglog_slope
from sepmatch.losses import LossKind
from sepmatch.output import write_svg

ns = [8, 16, 32, 64, 128]
methods = (LossKind.PIT_HUNGARIAN, LossKind.SINKPIT, LossKind.MCL)
rows = bench_losses(ns, l=256, trials=3, methods=methods, phases=("assignment",))

for m in methods:
    print(f"{m.value:<14} slope {fit_loglog_slope(rows, m):.2f}")

series = {m.value: ([r.n for r in rows if r.method is m], [r.mean_time for r in rows if r.method is m])
          for m in methods}
write_svg("complexity.svg", series, "number of sources n", "seconds per sample", loglog=True)
