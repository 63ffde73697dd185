"""End-to-end acceptance checks, one test per criterion.

Each test prints a ``criterion N [PASS|FAIL]`` line; the terminal summary
repeats them in order.
"""

import functools
import itertools
import json
import math
import statistics
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from scipy import sparse

from scriptswitch.adaptation import Provenance
from scriptswitch.config import load_config
from scriptswitch.corpus import LABEL_ORDER, Label, LabeledExample, LanguageCondition as L
from scriptswitch.corpus import class_distribution, corpus_summary, load_dataset
from scriptswitch.evaluation import Scope, SelectionGrid, macro_f1_many, select_best, weighted_macro_f1_many
from scriptswitch.fixtures import ENG_PUBLISHED_COUNTS, PUBLISHED_OBSERVATIONS, build_lexicon, _sentence, langid_fixture
from scriptswitch.langid import build_profile, detect_language
from scriptswitch.model import AdamWState, TrainConfig, adamw_step, cross_entropy
from scriptswitch.pipeline import run_experiment
from scriptswitch.script import BRAHMIC_SCRIPTS, latin_proportion
from scriptswitch.seeds import rng_for
from scriptswitch.translit import transliterate

FIXTURE_CONFIG = Path(__file__).resolve().parents[1] / "fixtures" / "config.json"


# -- 1 ---------------------------------------------------------------------

def _per_label_f1(tp, predicted, support):
    precision = tp / predicted if predicted else 0.0
    recall = tp / support if support else 0.0
    return 2 * precision * recall / (precision + recall) if precision + recall else 0.0


def _oracle(flat, k):
    """Macro and weighted F1 for rows of flattened k x k matrices.

    Per-label F1 comes from plain-float precision and recall, tabulated over
    every reachable (tp, predicted, support) triple and gathered per matrix.
    """
    top = 6 * k
    table = np.zeros((7, top + 1, top + 1))
    for tp in range(7):
        for pred in range(tp, top + 1):
            for sup in range(tp, top + 1):
                table[tp, pred, sup] = _per_label_f1(tp, pred, sup)
    f1 = np.zeros(flat.shape[1])
    weighted = np.zeros(flat.shape[1])
    total = np.zeros(flat.shape[1], dtype=np.int64)
    for lab in range(k):
        tp = flat[lab * k + lab]
        pred = sum((flat[i * k + lab] for i in range(k)), np.zeros(flat.shape[1], dtype=np.int16))
        sup = sum((flat[lab * k + j] for j in range(k)), np.zeros(flat.shape[1], dtype=np.int16))
        score = table[tp, pred, sup]
        f1 += score
        weighted += score * sup
        total += sup
    return f1 / k, weighted / total


@functools.lru_cache(maxsize=None)
def _free_cells(free):
    # column j holds the base-7 digits of j, so column 0 is the all-zero block
    return np.indices((7,) * free, dtype=np.int8).reshape(free, -1)


def _all_matrices(k, fixed):
    """Every k x k matrix with entries 0..6 whose leading cells equal ``fixed``, as (k*k, n) columns."""
    grid = _free_cells(k * k - len(fixed))
    flat = np.empty((k * k, grid.shape[1]), dtype=np.int8)
    flat[len(fixed):] = grid
    flat[: len(fixed)] = np.asarray(fixed, dtype=np.int8).reshape(-1, 1)
    # the empty matrix is outside the metric's domain
    return flat[:, 1:] if not any(fixed) else flat


def test_metric_oracle_equivalence(acceptance):
    start = time.perf_counter()
    worst = 0.0
    n = 0
    chunks = [(k, fixed) for k in (2,) for fixed in [()]]
    chunks += [(3, fixed) for fixed in itertools.product(range(7), repeat=2)]
    for k, fixed in chunks:
        flat = _all_matrices(k, fixed)
        macro, weighted = _oracle(flat, k)
        stack = flat.T.reshape(-1, k, k)
        worst = max(worst, np.abs(macro_f1_many(stack) - macro).max(),
                    np.abs(weighted_macro_f1_many(stack) - weighted).max())
        n += stack.shape[0]
    elapsed = time.perf_counter() - start
    assert n == (7**4 - 1) + (7**9 - 1)
    acceptance(1, "metric oracle equivalence", worst <= 1e-12 and elapsed < 10,
               f"{n} matrices, max |diff| = {worst:.1e} (tol 1e-12), {elapsed:.1f}s (limit 10s)")


# -- 2 ---------------------------------------------------------------------

PUBLISHED_GRID = {
    "ENG": [0.32, 0.35, 0.32, 0.32, 0.32, 0.32],
    "ESP": [0.80, 0.82, 0.87, 0.84, 0.76, 0.82],
    "GUJ": [0.94, 0.94, 0.95, 0.95, 0.95, 0.95],
    "HIN": [0.32, 0.32, 0.32, 0.32, 0.32, 0.32],
    "KAN": [0.92, 0.93, 0.94, 0.94, 0.94, 0.94],
    "MAL": [0.51, 0.53, 0.73, 0.58, 0.78, 0.61],
    "MAR": [0.44, 0.45, 0.44, 0.41, 0.42, 0.46],
    "TAM": [0.48, 0.42, 0.54, 0.49, 0.48, 0.56],
    "TCY": [0.72, 0.43, 0.43, 0.43, 0.43, 0.43],
    "TEL": [0.98, 0.97, 0.98, 0.97, 0.97, 0.98],
}

_B, _S, _O = Provenance.BASELINE, Provenance.SYNTHETIC, Provenance.ORGANIC
_MO, _MU = Scope.MONO, Scope.MULTI
_TOP4 = {(_S, _MO), (_S, _MU), (_O, _MO), (_O, _MU)}
PUBLISHED_WINNERS = {
    "ENG": {(_B, _MU)},
    "ESP": {(_S, _MO)},
    "GUJ": _TOP4,
    "HIN": {(v, s) for v in (_B, _S, _O) for s in (_MO, _MU)},
    "KAN": _TOP4,
    "MAL": {(_O, _MO)},
    "MAR": {(_O, _MU)},
    "TAM": {(_O, _MU)},
    "TCY": {(_B, _MO)},
    "TEL": {(_B, _MO), (_S, _MO), (_O, _MU)},
}


def test_published_grid_selection_replay(acceptance):
    selection = select_best(SelectionGrid.from_table(PUBLISHED_GRID))
    mismatched = [lang for lang in PUBLISHED_GRID if selection.winners[L.parse(lang)] != PUBLISHED_WINNERS[lang]]
    ok = not mismatched and selection.nominated == (_S, _MO)
    nominated = f"{selection.nominated[0].value}-{selection.nominated[1].value}"
    acceptance(2, "published grid selection replay", ok,
               f"winner sets matched {10 - len(mismatched)}/10 {mismatched or ''}, nominated {nominated}")


# -- 3 ---------------------------------------------------------------------

def _adam_reference(theta, grads, lr, b1, b2, eps):
    m = v = 0.0
    out = []
    for t, g in enumerate(grads, 1):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        theta = theta - lr * m_hat / (math.sqrt(v_hat) + eps)
        out.append(theta)
    return out


def test_optimizer_correctness(acceptance):
    start = time.perf_counter()
    rng = rng_for(0, "acceptance:adam")
    worst_adam = 0.0
    for _ in range(1000):
        length = int(rng.integers(1, 30))
        grads = rng.normal(scale=rng.uniform(0.01, 10), size=length)
        theta0 = float(rng.normal())
        cfg = TrainConfig(learning_rate=float(rng.uniform(1e-4, 0.5)), beta1=float(rng.uniform(0.5, 0.99)),
                          beta2=float(rng.uniform(0.9, 0.9999)), epsilon=1e-8, weight_decay=0.0)
        expected = _adam_reference(theta0, grads, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon)
        params, state = [np.array(theta0)], AdamWState()
        for g, want in zip(grads, expected):
            params, state = adamw_step(params, [np.array(g)], state, cfg)
            worst_adam = max(worst_adam, abs(float(params[0]) - want))

    worst_grad = 0.0
    h = 1e-6
    for _ in range(100):
        n, v, k = (int(x) for x in rng.integers(2, 6, size=3))
        W, b = rng.normal(size=(k, v)), rng.normal(size=k)
        X = sparse.csr_matrix(rng.normal(size=(n, v)) * (rng.random((n, v)) < 0.7))
        y = rng.integers(0, k, size=n)
        _, gw, gb = cross_entropy(W, b, X, y)
        analytic = np.concatenate([gw.ravel(), gb])
        numeric = []
        for idx in np.ndindex(W.shape):
            Wp, Wm = W.copy(), W.copy()
            Wp[idx] += h
            Wm[idx] -= h
            numeric.append((cross_entropy(Wp, b, X, y)[0] - cross_entropy(Wm, b, X, y)[0]) / (2 * h))
        for i in range(k):
            bp, bm = b.copy(), b.copy()
            bp[i] += h
            bm[i] -= h
            numeric.append((cross_entropy(W, bp, X, y)[0] - cross_entropy(W, bm, X, y)[0]) / (2 * h))
        numeric = np.array(numeric)
        rel = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
        worst_grad = max(worst_grad, rel)
    elapsed = time.perf_counter() - start
    ok = worst_adam <= 1e-12 and worst_grad <= 1e-5 and elapsed < 30
    acceptance(3, "optimizer correctness", ok,
               f"AdamW(λ=0) vs Adam max |diff| {worst_adam:.1e} (tol 1e-12), "
               f"gradient check max rel err {worst_grad:.1e} (tol 1e-5), {elapsed:.1f}s (limit 30s)")


# -- 4 ---------------------------------------------------------------------

_SCRIPT_LANGUAGE = {lang.native_script: lang for lang in (L.HIN, L.GUJ, L.KAN, L.MAL, L.TAM, L.TEL)}


def test_script_transliteration_invariants(acceptance):
    start = time.perf_counter()
    failures = Counter()
    for script in BRAHMIC_SCRIPTS:
        language = _SCRIPT_LANGUAGE[script]
        lex = build_lexicon(language, seed=0)
        rng = rng_for(0, f"acceptance:translit:{script.value}")
        for _ in range(1000):
            text = " ".join(_sentence(lex, rng, int(rng.integers(4, 14)), None))
            out = transliterate(text, script)
            if latin_proportion(text) != 0:
                failures[f"{script.value}:before"] += 1
            if latin_proportion(out) != 1:
                failures[f"{script.value}:after"] += 1
            if transliterate(out, script) != out:
                failures[f"{script.value}:idempotence"] += 1
            if transliterate(text, script) != out:
                failures[f"{script.value}:determinism"] += 1
    elapsed = time.perf_counter() - start
    acceptance(4, "script/transliteration invariants", not failures and elapsed < 10,
               f"6 scripts x 1000 sentences, violations {dict(failures) or 0}, {elapsed:.1f}s (limit 10s)")


# -- 5 ---------------------------------------------------------------------

def test_language_profile_fidelity(acceptance):
    start = time.perf_counter()
    train, heldout = langid_fixture(seed=0, n_train=300, n_heldout=500, min_chars=40)
    profiles = [build_profile(texts, lang) for lang, texts in train.items()]
    correct = total = cross_script = 0
    for lang, texts in heldout.items():
        assert len(texts) == 500 and min(map(len, texts)) >= 40
        for text in texts:
            top = detect_language(text, profiles).top
            total += 1
            correct += top is lang
            cross_script += top.native_script is not lang.native_script
    accuracy = correct / total
    elapsed = time.perf_counter() - start
    ok = accuracy >= 0.95 and cross_script == 0 and elapsed < 60
    acceptance(5, "language-profile fidelity", ok,
               f"top-1 accuracy {accuracy:.4f} (min 0.95), cross-script errors {cross_script} (max 0), "
               f"{elapsed:.1f}s (limit 60s)")


# -- 6 and 7 -----------------------------------------------------------------

EFFECT_SEEDS = (7, 8, 9, 10, 11)


@pytest.fixture(scope="module")
def fixture_runs(tmp_path_factory):
    base = load_config(FIXTURE_CONFIG)
    root = tmp_path_factory.mktemp("acceptance")
    runs = {}
    for seed in EFFECT_SEEDS:
        cfg = base.with_overrides(seed=seed, output_dir=root / f"seed{seed}")
        start = time.perf_counter()
        run_experiment(cfg)
        runs[seed] = (cfg.output_dir, time.perf_counter() - start)
    return root, base, runs


def _mean_f1(out: Path, variant: str, scope: str) -> float:
    cells = json.loads((out / "reports" / "grid.json").read_text())["cells"]
    return statistics.mean(c["macro_f1"] for c in cells if c["variant"] == variant and c["scope"] == scope)


def test_directional_augmentation_effect(acceptance, fixture_runs):
    _, _, runs = fixture_runs
    effects = [_mean_f1(out, "SYNTHETIC", "MONO") - _mean_f1(out, "BASELINE", "MONO") for out, _ in runs.values()]
    median = statistics.median(effects)
    slowest = max(t for _, t in runs.values())
    ok = median >= 0 and slowest < 300
    acceptance(6, "directional augmentation effect", ok,
               f"median synthetic-baseline mono macro F1 over seeds {list(EFFECT_SEEDS)} = {median:+.4f} (min 0), "
               f"per seed {[round(e, 4) for e in effects]}, slowest full run {slowest:.0f}s (limit 300s)")


def _tree(out: Path) -> dict:
    paths = [p for p in sorted(out.rglob("*")) if p.is_file()]
    return {p.relative_to(out).as_posix(): p.read_bytes() for p in paths
            if p.parts[len(out.parts)] == "reports" or p.name == "manifest.json"}


def test_determinism(acceptance, fixture_runs):
    root, base, runs = fixture_runs
    first_out, _ = runs[EFFECT_SEEDS[0]]
    again = base.with_overrides(seed=EFFECT_SEEDS[0], output_dir=root / "again")
    run_experiment(again)
    a, b = _tree(first_out), _tree(again.output_dir)
    differing = sorted(k for k in a.keys() | b.keys() if a.get(k) != b.get(k))
    acceptance(7, "determinism", bool(a) and not differing,
               f"{len(a)} report/manifest files compared, {len(differing)} differ {differing[:5] or ''}")


# -- 8 ---------------------------------------------------------------------

def test_statistics_replication(acceptance):
    eng = [LabeledExample(f"e{i}", "x", L.ENG, label)
           for i, label in enumerate(lab for lab in LABEL_ORDER for _ in range(ENG_PUBLISHED_COUNTS[lab]))]
    dist = class_distribution(eng)
    row = tuple(round(dist[lab], 2) for lab in LABEL_ORDER)

    cfg = load_config(FIXTURE_CONFIG)
    shipped = corpus_summary({lang: load_dataset(cfg.data[lang], lang) for lang in cfg.languages})
    expected = sorted(PUBLISHED_OBSERVATIONS, key=lambda k: -PUBLISHED_OBSERVATIONS[k])
    full = corpus_summary({lang: [LabeledExample(f"{lang.value}{i}", "x", lang, Label.NONE) for i in range(n)]
                           for lang, n in PUBLISHED_OBSERVATIONS.items()})
    order = [r.language for r in shipped]
    ok = row == (0.94, 0.06, 0.0) and order == expected and [r.language for r in full] == expected
    acceptance(8, "statistics replication", ok,
               f"ENG row {row} (want (0.94, 0.06, 0.0)), shipped fixture order "
               f"{' > '.join(x.value for x in order)}")
