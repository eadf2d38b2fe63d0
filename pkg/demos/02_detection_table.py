"""Detectability grid: every text set against every detector, desk scale.

Reproduces the shape of the headline experiment: watermarked and plain text
sets are scored by both the secret-number detector and the greenlist
detector, reporting mean z and the fraction declared watermarked at u = 4.
"""

import numpy as np

import tokenmark as tm

VOCAB = 1000
N = 40
MAX_NEW = 200

lm = tm.SyntheticLm(VOCAB, order=1, concentration=8.0, model_seed=7)
prompt_stream = tm.SplitMix64(999)


def prompts(n):
    return [[int(prompt_stream.random() * VOCAB) for _ in range(100)] for _ in range(n)]


text_sets = {}
text_sets["swor"] = [
    tm.generate(lm, p, MAX_NEW, tm.WatermarkParams(), 1000 + i)
    for i, p in enumerate(prompts(N))
]
text_sets["swr"] = [
    tm.generate(lm, p, MAX_NEW, tm.WatermarkParams(mode=tm.WITH_REPLACEMENT), 2000 + i)
    for i, p in enumerate(prompts(N))
]
text_sets["mwm"] = [
    tm.mwm_generate(lm, p, MAX_NEW, tm.MwmParams(), 3000 + i)
    for i, p in enumerate(prompts(N))
]
text_sets["no-wm"] = [
    tm.generate_unwatermarked(lm, p, MAX_NEW, 40, 1.0, 4000 + i)
    for i, p in enumerate(prompts(N))
]


def secret_row(texts):
    reports = [tm.detect(t, 1, 4.0) for t in texts]
    return reports


def mwm_row(texts):
    return [tm.mwm_detect(t, tm.MwmParams(), VOCAB) for t in texts]


print(f"{'text set':<8} {'detector':<15} {'mean z':>8} {'%WM':>7}")
for name, texts in text_sets.items():
    for detector, reports in [("secret-number", secret_row(texts)), ("mwm", mwm_row(texts))]:
        zs = np.array([r.z for r in reports])
        rate = np.mean([r.verdict == tm.WATERMARKED for r in reports])
        print(f"{name:<8} {detector:<15} {zs.mean():>8.2f} {rate:>6.1%}")

print("\nwatermarked sets light up only under their own detector;")
print("plain text stays near z = 0 under both.")
