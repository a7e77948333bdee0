"""
SI-SDR and the cost matrix
==========================

Every loss in the package starts from one matrix: the negative SI-SDR of
each target against each prediction.
"""
import numpy as np

from sepmatch import CAP, cost_matrix, gen_sources, neg_si_sdr_grad, si_sdr, SynthSpec

# A reference and a noisy estimate. Rescaling the estimate changes nothing.
rng = np.random.default_rng(0)
y = rng.standard_normal(256)
y_hat = y + 0.5 * rng.standard_normal(256)
print("SI-SDR            %.3f dB" % si_sdr(y, y_hat))
print("SI-SDR of 10*est  %.3f dB" % si_sdr(y, 10 * y_hat))

# Values are clamped to +-CAP so perfect or orthogonal estimates stay finite.
print("identical:", si_sdr(y, y), " orthogonal:", si_sdr([1.0, 0.0], [0.0, 1.0]), " cap:", CAP)

# The gradient of the negative SI-SDR is orthogonal to the estimate itself,
# another face of scale invariance.
g = neg_si_sdr_grad(y, y_hat)
print("<grad, estimate> = %.2e" % np.dot(g, y_hat))

# Four sinusoids, predicted in a shuffled order. The cost matrix shows the
# shuffle as a pattern of -CAP entries.
sources = gen_sources(SynthSpec(4, 1024, seed=7))
predictions = sources[[2, 0, 3, 1]]
np.set_printoptions(precision=1, suppress=True)
print(cost_matrix(sources, predictions))
