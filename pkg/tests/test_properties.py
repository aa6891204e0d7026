"""Property-based tests for the fusion and scoring invariants."""

from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TB_HC, tb_bm
from platefuse import (
    DatasetReport,
    ModelProfile,
    Prediction,
    apply_strategy,
    hc_fuse,
    macro_average,
    mv_fuse,
    mvcp_fuse,
    parse_strategy,
    rank_models,
)

CONFS = st.sampled_from([i / 20 for i in range(1, 21)])
TEXTS = st.text(alphabet="AB01", min_size=1, max_size=8)
MODEL_IDS = st.text(alphabet="abcdefgh", min_size=1, max_size=3)


def predictions_maps(min_size=1, max_size=9, texts=TEXTS):
    return st.dictionaries(
        MODEL_IDS, st.builds(Prediction, texts, CONFS),
        min_size=min_size, max_size=max_size,
    )


def _all_strategies(predictions):
    ranking = tuple(sorted(predictions))
    return [parse_strategy(n, ranking)
            for n in ("hc", "mv-bm", "mv-hc", "mvcp-bm", "mvcp-hc")]


@given(predictions_maps(), st.text(alphabet="AB01", min_size=1, max_size=8))
@settings(max_examples=200)
def test_unanimity(base, text):
    predictions = {m: Prediction(text, p.confidence) for m, p in base.items()}
    for strategy in _all_strategies(predictions):
        assert apply_strategy(predictions, strategy).text == text


@given(MODEL_IDS, TEXTS, CONFS)
@settings(max_examples=200)
def test_singleton_identity(model_id, text, conf):
    predictions = {model_id: Prediction(text, conf)}
    for strategy in _all_strategies(predictions):
        result = apply_strategy(predictions, strategy)
        assert result.text == text
        assert result.contributors == frozenset({model_id})


@given(predictions_maps(max_size=4), TEXTS, CONFS)
@settings(max_examples=200)
def test_strict_majority_dominates(minority, text, conf)  :
    majority = {
        f"M{i}": Prediction(text, conf) for i in range(len(minority) + 1)
    }
    predictions = {**minority, **majority}
    ranking = tuple(sorted(predictions))
    for tiebreak in (TB_HC, tb_bm(ranking)):
        result = mv_fuse(predictions, tiebreak)
        assert result.text == text
        assert result.winning_votes >= len(majority)


@given(predictions_maps())
@settings(max_examples=200)
def test_vote_count_soundness(predictions):
    for tiebreak in (TB_HC, tb_bm(tuple(sorted(predictions)))):
        result = mv_fuse(predictions, tiebreak)
        counts = Counter(p.text for p in predictions.values())
        assert result.winning_votes == counts[result.text] == max(counts.values())
        assert result.contributors == frozenset(
            m for m, p in predictions.items() if p.text == result.text
        )


@given(predictions_maps())
@settings(max_examples=200)
def test_hc_argmax_invariance_under_monotone_transforms(predictions):
    ranking = tuple(sorted(predictions))
    baseline = hc_fuse(predictions, ranking).text
    for transform in (lambda c: c / 2, lambda c: 0.25 + c / 2, lambda c: c * c):
        rescaled = {
            m: Prediction(p.text, transform(p.confidence))
            for m, p in predictions.items()
        }
        assert hc_fuse(rescaled, ranking).text == baseline


@given(predictions_maps(min_size=2), st.randoms(use_true_random=False))
@settings(max_examples=200)
def test_permutation_invariance(predictions, shuffler)   :
    items = list(predictions.items())
    shuffler.shuffle(items)
    reordered = dict(items)
    ranking = tuple(sorted(predictions))
    for tiebreak in (TB_HC, tb_bm(ranking)):
        assert mv_fuse(predictions, tiebreak) == mv_fuse(reordered, tiebreak)
        assert mvcp_fuse(predictions, tiebreak) == mvcp_fuse(reordered, tiebreak)
    assert hc_fuse(predictions, ranking) == hc_fuse(reordered, ranking)


@given(predictions_maps())
@settings(max_examples=200)
def test_determinism_on_reconstructed_inputs(predictions):
    clone = {m: Prediction(p.text, p.confidence) for m, p in predictions.items()}
    for strategy in _all_strategies(predictions):
        assert apply_strategy(predictions, strategy) == \
            apply_strategy(clone, strategy)


@given(predictions_maps(min_size=1, texts=st.text(alphabet="AB01", min_size=5,
                                                  max_size=5)))
@settings(max_examples=200)
def test_mvcp_equal_length_reduction(predictions):
    # With equal lengths and strict per-position modes, mvcp equals the
    # position-wise mode string from an independent histogram.
    modes = []
    for pos in range(5):
        counts = Counter(p.text[pos] for p in predictions.values())
        ranked = counts.most_common()
        if len(ranked) > 1 and ranked[0][1] == ranked[1][1]:
            return  # tie at this position: reduction does not apply
        modes.append(ranked[0][0])
    expected = "".join(modes)
    for tiebreak in (TB_HC, tb_bm(tuple(sorted(predictions)))):
        assert mvcp_fuse(predictions, tiebreak).text == expected


@given(predictions_maps())
@settings(max_examples=200)
def test_result_invariants(predictions):
    n = len(predictions)
    for strategy in _all_strategies(predictions):
        result = apply_strategy(predictions, strategy)
        assert 0 <= result.winning_votes <= n
        assert result.contributors <= set(predictions)
        if strategy.name == "hc":
            assert result.winning_votes == 0


@given(st.lists(st.tuples(st.integers(1, 500), st.integers(0, 500)),
                min_size=1, max_size=12))
@settings(max_examples=200)
def test_macro_average_bounds(pairs):
    reports = [
        DatasetReport(f"d{i}", total, min(correct, total))
        for i, (total, correct) in enumerate(pairs)
    ]
    value = macro_average(reports)
    rates = [r.rate for r in reports]
    # The exact mean lies in [min, max]; the float one can overshoot by an ulp
    # (sum and division each round once), so allow that much.
    assert min(rates) - 1e-12 <= value <= max(rates) + 1e-12
    assert all(0.0 <= r <= 1.0 for r in rates)


@given(st.lists(st.tuples(st.floats(0.5, 50.0), st.booleans()),
                min_size=1, max_size=12, unique_by=lambda t: t[0]))
@settings(max_examples=200)
def test_ranking_totality(rows):
    profiles = [
        ModelProfile(f"m{i:02d}", latency, i + 1)
        for i, (latency, _) in enumerate(rows)
    ]
    for mode in ("accuracy", "speed"):
        order = rank_models(profiles, mode)
        assert sorted(order) == sorted(p.model_id for p in profiles)
