"""Modified densities, their Fisher and Shannon densities, and where they break down."""
import numpy as np

from kgoscillator import InvalidDensity, ModelConfig, energy_level, make_state
from kgoscillator.measures import fisher_direct, moment2, shannon

g, n = -0.32, 1
level = energy_level(ModelConfig(g), n)
x = make_state(level, g, "coordinate")
print(f"E={level.E:.6f}  lambda={level.lambda_:.6f}  integral of rho={x.norm_integral:.12f}")

# Fisher density stays finite at the node x=0; the Shannon density is 0 there
grid = np.linspace(-3, 3, 7)
print("x        rho          rho*score^2   rho*ln(rho)")
for a, r, f, s in zip(grid, x.rho(grid), x.fisher_density(grid), x.shannon_density(grid)):
    print(f"{a:+.1f}  {r:.6e}  {f:.6e}  {s:+.6e}")

print(f"<x^2>={moment2(x):.6f}  Fx={fisher_direct(x):.6f}  Sx={shannon(x):.6f}")

# in momentum space the weight E + gamma p^2/(2 lambda^4) turns negative for gamma < 0
p = make_state(level, g, "momentum")
print(f"momentum weight changes sign at |p|={p.weight_zero:.4f}, inside R={p.radius:.2f}")
print(f"rho at 1.5x that point: {p.rho(1.5 * p.weight_zero):.3e}")
try:
    shannon(p)
except InvalidDensity as exc:
    print("shannon refused:", exc)
