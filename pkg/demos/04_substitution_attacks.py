"""Robustness under token substitution, with the analytic decay overlay.

A scored position keeps its maximized secret number only if neither its
token nor its context token was replaced, so the expected z after replacing
a fraction t of tokens is (1-t)^(k+1) times the clean z.  The demo measures
the decay, compares it to the model, and renders the detection-rate curve
as a self-contained SVG.
"""

import math
from pathlib import Path

import numpy as np

import tokenmark as tm
from tokenmark.harness import svg_detection_chart

VOCAB = 1000
N = 40

lm = tm.SyntheticLm(VOCAB, order=1, concentration=8.0, model_seed=7)
stream = tm.SplitMix64(999)
texts = [
    tm.generate(lm, [int(stream.random() * VOCAB) for _ in range(100)], 200,
                tm.WatermarkParams(), 5000 + i)
    for i in range(N)
]

clean_z = (5 / 6 - 0.5) * math.sqrt(12 * 199)
rates = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
curve = []
print(f"{'t':>4} {'mean z':>8} {'model':>8} {'%WM':>7}")
for t in rates:
    zs = []
    for i, text in enumerate(texts):
        params = tm.AttackParams(rate_t=t, attack_seed=9000 + i)
        attacked = tm.substitution_attack(text, params, VOCAB)
        zs.append(tm.detect(attacked, 1, 4.0).z)
    zs = np.array(zs)
    detected = float((zs > 4.0).mean())
    model = (1 - t) ** 2 * clean_z
    curve.append((t, detected))
    print(f"{t:>4.1f} {zs.mean():>8.2f} {model:>8.2f} {detected:>6.1%}")

out = Path(__file__).with_name("attack_decay.svg")
out.write_text(svg_detection_chart({"swor": curve}), encoding="utf-8")
print(f"\nwrote detection-rate curve to {out.name}")
print("even at 40% replacement the watermark usually survives;")
print("by 50% the expected z crosses the u = 4 threshold and detection collapses.")
