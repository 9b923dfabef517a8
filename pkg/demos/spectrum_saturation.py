"""Energy levels of the oscillator and how they pile up below 1/|gamma|."""
import numpy as np

from kgoscillator import Branch, ModelConfig, asymptote, spectrum

# gamma = 0 is the ordinary oscillator: E_n = sqrt(2n + 1)
for lv in spectrum(ModelConfig(0.0), 4):
    print(f"n={lv.n}  E={lv.E:.10f}  sqrt(2n+1)={np.sqrt(2 * lv.n + 1):.10f}")

# a negative coupling bends the spectrum over; levels approach 1/|gamma| from below
for g in (-0.16, -0.32, -0.5):
    E = np.array([lv.E for lv in spectrum(ModelConfig(g), 500)])
    print(f"gamma={g:+.2f}  E_10={E[10]:.6f}  E_500={E[500]:.6f}  "
          f"limit={asymptote(g):.6f}  gap={asymptote(g) - E[500]:.3e}")

# the antiparticle branch mirrors the particle branch with gamma flipped
part = [lv.E for lv in spectrum(ModelConfig(0.5), 3)]
anti = [lv.E for lv in spectrum(ModelConfig(-0.5, Branch.ANTIPARTICLE), 3)]
print("particle (+0.5):    ", np.round(part, 8))
print("antiparticle (-0.5):", np.round(anti, 8))
