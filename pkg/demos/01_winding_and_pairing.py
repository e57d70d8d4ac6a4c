"""Winding chains on a genus-g surface and their U(1) phase pairing.

Walks through the algebra layer: the cycle basis of a genus-g surface,
integer winding chains, the pairing that turns a chain plus per-cycle phases
into a single gauge-invariant phase factor, a numeric loop holonomy, and the
depth-limited incommensurability certificate that underpins everything
downstream.
"""

import math

import numpy as np

from windingphase import (
    CycleAssignment,
    SurfaceSpec,
    WindingChain,
    certify_incommensurable,
    chain_compose,
    holonomy_loop,
    pairing,
)

TWO_PI = 2.0 * math.pi

# --- a genus-2 surface has a rank-4 cycle basis ------------------------------
surface = SurfaceSpec(genus=2)
print(f"genus {surface.genus} surface, basis size {surface.basis_size}")

# Winding chains are integer vectors over that basis and form a group.
a = WindingChain(surface, (1, 0, -2, 3))
b = WindingChain(surface, (0, 2, 2, -3))
print(f"chain a = {a.coefficients}")
print(f"chain b = {b.coefficients}")
print(f"a + b   = {chain_compose(a, b).coefficients}")
print(f"-a      = {(-a).coefficients}")

# --- pairing a chain with per-cycle phases -----------------------------------
assign = CycleAssignment(
    surface,
    betas=(math.pi / 3, math.pi / 5, 1.0, 2.5),
    periods=(1.0, math.sqrt(2), math.sqrt(3), (1 + math.sqrt(5)) / 2),
)
pa, pb = pairing(a, assign), pairing(b, assign)
pab = pairing(chain_compose(a, b), assign)
print(f"\npairing(a)      angle = {pa.angle:.12f}")
print(f"pairing(b)      angle = {pb.angle:.12f}")
print(f"pairing(a + b)  angle = {pab.angle:.12f}")
print(f"product of phases     = {(pa * pb).angle:.12f}   (homomorphism)")

# --- loop holonomy of a sampled connection -----------------------------------
# A(sigma) = 1/2 + sin(sigma): the sine integrates away over a full turn,
# leaving exactly pi.
sigma = TWO_PI * np.arange(512) / 512
samples = list(zip(sigma, 0.5 + np.sin(sigma)))
print(f"\nholonomy of 1/2 + sin: {holonomy_loop(samples).angle:.12f}  (expect pi = {math.pi:.12f})")

# --- incommensurability certificates ------------------------------------------
# Almost-periodicity of the superposed phase train needs pairwise
# incommensurable periods; the certificate is depth-limited (denominators up
# to Q), never a proof of irrationality.
report = certify_incommensurable(assign, max_denominator=64, tolerance=1e-9)
print(f"\nperiods: {tuple(round(p, 6) for p in report.periods)}")
for v in report.verdicts:
    if v.commensurable:
        print(f"  pair ({v.i},{v.j}): {v.verdict}, witness {v.witness}")
    else:
        print(f"  pair ({v.i},{v.j}): {v.verdict}")

rational = CycleAssignment(SurfaceSpec(1), (0.0, 0.0), (2.0, 5.0))
v = certify_incommensurable(rational, 64, 1e-9).verdicts[0]
print(f"planted ratio 2/5: {v.verdict}, witness {v.witness}")
