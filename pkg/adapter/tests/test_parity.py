"""Boundary parity: adapter outputs must equal core outputs bit-for-bit."""

import numpy as np

import tokenmark as tm
from tokenmark_adapter import StepState, detect_ids, step

PARAMS = tm.WatermarkParams()


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"[acceptance] {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{criterion}: {detail}"


def core_step(context, logits, rng):
    dist = tm.transform_distribution(tm.softmax(logits), PARAMS.top_k, PARAMS.temperature)
    return tm.select_next_token(dist, context, PARAMS, rng)


def test_criterion_12_adapter_parity():
    data_stream = tm.SplitMix64(2025)
    step_matches = 0
    trials = 1000
    for trial in range(trials):
        ctx_len = 1 + int(data_stream.random() * 30)
        context = [int(data_stream.random() * 2**20) for _ in range(ctx_len)]
        logits = np.array([(data_stream.random() - 0.5) * 8.0 for _ in range(120)])
        seed = trial * 7 + 1
        state = StepState(PARAMS, rng_seed=seed, prompt=context)
        adapter_token = step(state, logits)
        core_token = core_step(context, logits, tm.SplitMix64(seed))
        step_matches += adapter_token == core_token

    detect_matches = 0
    for trial in range(100):
        length = 50 + int(data_stream.random() * 200)
        ids = [int(data_stream.random() * 1000) for _ in range(length)]
        a = detect_ids(ids, 1, 4.0)
        b = tm.detect(ids, 1, 4.0)
        detect_matches += (a.z == b.z and a.sna == b.sna and a.verdict == b.verdict
                           and a.n_scored == b.n_scored)

    ok = step_matches == trials and detect_matches == 100
    report("criterion 12 (adapter parity)", ok,
           f"step matches {step_matches}/{trials}, detection matches {detect_matches}/100")


def test_multistep_sequence_parity():
    # whole sequences, one shared rng stream each side
    data_stream = tm.SplitMix64(77)
    vectors = [np.array([(data_stream.random() - 0.5) * 6.0 for _ in range(80)])
               for _ in range(40)]
    prompt = [3, 1, 4, 1, 5]
    state = StepState(PARAMS, rng_seed=99, prompt=prompt)
    adapter_tokens = [step(state, v) for v in vectors]
    rng = tm.SplitMix64(99)
    context = list(prompt)
    core_tokens = []
    for v in vectors:
        token = core_step(context, v, rng)
        context.append(token)
        core_tokens.append(token)
    assert adapter_tokens == core_tokens
