#!/usr/bin/env python3
"""The classical story has no compatibility problem, but confounding bites.

Coarse observables X (proxy for A) and Y (downstream of B) always admit an
effective conditional table P(Y|X): the law of total probability closes
the diagram for ANY chain model, in sharp contrast to the quantum case
where the analogous closure demands a matching condition.  What the
classical picture does distinguish is seeing X versus setting X.
"""

import numpy as np

from coarsekit import classical as cl

# a chain A -> B -> Y with proxy A -> X
model = cl.ChainModel(
    pA=[0.5, 0.5],
    pB_given_A=cl.CondTable([[0.9, 0.2], [0.1, 0.8]]),
    pX_given_A=cl.CondTable([[0.8, 0.3], [0.2, 0.7]]),
    pY_given_B=cl.CondTable(np.eye(2)),
)

table = cl.emergent_channel(model)
print("effective table P(Y|X):")
for row in table.p:
    print("   " + "  ".join(f"{v:.6f}" for v in row))
residual = cl.verify_total_probability(model)
print(f"law of total probability holds to {residual:.1e} "
      "(it always does, for every chain model)")

rng = np.random.default_rng(3)
worst = 0.0
for _ in range(200):
    dims = rng.integers(2, 5, size=4)

    def table_rnd(rows, cols):
        t = rng.uniform(0.05, 1.0, size=(rows, cols))
        return cl.CondTable(t / t.sum(axis=0))

    pa = rng.uniform(0.05, 1.0, size=dims[0])
    m = cl.ChainModel(pa / pa.sum(), table_rnd(dims[1], dims[0]),
                      table_rnd(dims[2], dims[0]), table_rnd(dims[3], dims[1]))
    worst = max(worst, cl.verify_total_probability(m))
print(f"worst residual over 200 random models: {worst:.1e}")

# interventions: A drives both X and B, B ignores X
confounded = cl.DoModel(
    pA=[0.5, 0.5],
    pX_given_A=cl.CondTable([[0.95, 0.05], [0.05, 0.95]]),
    pB_given_AX=cl.CondTable([[0.95, 0.95, 0.05, 0.05],
                              [0.05, 0.05, 0.95, 0.95]]),
    pY_given_B=cl.CondTable(np.eye(2)),
)
obs, do = cl.observational_vs_do(confounded, 0)
print(f"\nconfounded model, outcome X=0:")
print(f"  P(Y|X=0)      = {np.round(obs, 4)}   (seeing X=0)")
print(f"  P(Y|do(X=0))  = {np.round(do, 4)}   (setting X=0)")
print(f"  L1 gap {np.abs(obs - do).sum():.3f}: X predicts Y through the common")
print("  cause A, yet forcing X does nothing: correlation without control.")
