import json

import pytest

from nervekit import GuardExceeded, ParseError, SchemaError, UnknownAtom, load_session, new_state, save_session
from nervekit.nerve import facets, nerve_batch
from nervekit.session import dumps, loads, serialize

SIX_WORKED = {
    "version": 1,
    "worlds": ["1", "2", "3"],
    "atoms": {"p": ["1", "2"], "q": ["2", "3"]},
    "measure": {"1": 0.2, "2": 0.5, "3": 0.3},
    "utterances": ["p", "q", "!p"],
}


class TestAssert:
    def test_simplex_counts(self):
        state = new_state(["1", "2", "3"], {"p": ["1", "2"], "q": ["2", "3"]})
        counts = [state.assert_utterance(t).simplex_count for t in ("p", "q", "!p")]
        assert counts == [2, 4, 6]
        assert set(state.nerve) == {(), (1,), (2,), (3,), (1, 2), (2, 3)}

    def test_report(self, dialogue):
        report = dialogue.assert_utterance("p & q")
        assert report.index == 4
        assert report.consistent
        # facets before: {1,2} and {2,3}; world 2 survives only with the first
        assert report.broken_groups == [(2, 3)]
        assert report.warnings == []

    def test_breaks_reported_on_third_step(self):
        state = new_state(["1", "2", "3"], {"p": ["1", "2"], "q": ["2", "3"]})
        state.assert_utterance("p")
        state.assert_utterance("q")
        assert state.assert_utterance("!p").broken_groups == [(1, 2)]

    def test_contradiction(self, dialogue):
        report = dialogue.assert_utterance("p & !p")
        assert report.index == 4
        assert not report.consistent
        assert any("contradictory" in w for w in report.warnings)
        assert (4,) not in dialogue.nerve
        assert report.simplex_count == 6

    @pytest.mark.parametrize("text, error", [("p &", ParseError), ("r", UnknownAtom)])
    def test_atomic_on_error(self, dialogue, text, error):
        before = (serialize(dialogue), dialogue.nerve)
        with pytest.raises(error):
            dialogue.assert_utterance(text)
        assert (serialize(dialogue), dialogue.nerve) == before

    def test_guard_leaves_state(self):
        state = new_state(["a"], {"p": ["a"]}, cap=4)
        state.assert_utterance("p")
        state.assert_utterance("p")
        with pytest.raises(GuardExceeded):
            state.assert_utterance("p")
        assert state.n == 2 and len(state.nerve) == 4

    def test_nerve_tracks_batch(self, dialogue):
        for text in ["q", "p | q", "!q", "p & !p", "q"]:
            dialogue.assert_utterance(text)
            assert dialogue.nerve == nerve_batch([u.extension for u in dialogue.utterances])

    def test_duplicates_get_distinct_indices(self, dialogue):
        assert dialogue.assert_utterance("p").index == 4
        assert (1, 4) in dialogue.nerve

    def test_all_consistent(self, dialogue):
        assert not dialogue.all_consistent()
        fresh = new_state(["1"], {"p": ["1"]})
        assert fresh.all_consistent()


class TestPersistence:
    def test_round_trip_byte_identical(self, dialogue, tmp_path):
        path = tmp_path / "s.json"
        save_session(dialogue, path)
        first = path.read_bytes()
        again = load_session(path)
        save_session(again, path)
        assert path.read_bytes() == first
        assert facets(again.nerve) == facets(dialogue.nerve) == [(1, 2), (2, 3)]
        assert again.nerve == dialogue.nerve
        assert [u.extension for u in again.utterances] == [u.extension for u in dialogue.utterances]
        assert again.measure == dialogue.measure

    def test_canonical_layout(self, dialogue):
        text = serialize(dialogue)
        assert text.endswith("\n")
        doc = json.loads(text)
        assert list(doc) == ["version", "worlds", "atoms", "measure", "utterances"]
        assert '"1": 0.20000000000000001' in text
        assert doc["measure"]["1"] == 0.2

    def test_empty_session(self):
        state = loads(dumps({**SIX_WORKED, "utterances": []}))
        assert set(state.nerve) == {()}
        assert state.n == 0

    def test_without_measure(self):
        state = loads(dumps({**SIX_WORKED, "measure": None}))
        assert state.measure is None
        assert loads(serialize(state)).measure is None

    def test_unicode_labels(self, tmp_path):
        state = new_state(["sol", "pluja", "núvol"], {"wet": ["pluja"]})
        state.assert_utterance("¬wet")
        path = tmp_path / "u.json"
        save_session(state, path)
        assert "núvol" in path.read_text(encoding="utf-8")
        assert load_session(path).utterances[0].extension.labels() == ["sol", "núvol"]

    @pytest.mark.parametrize(
        "patch, path",
        [
            ({"measure": {"1": 0.2, "2": 0.5, "3": 0.2}}, "measure"),
            ({"version": 2}, "version"),
            ({"worlds": []}, "worlds"),
            ({"worlds": ["1", "1"]}, "worlds"),
            ({"worlds": ["1", 2]}, "worlds[1]"),
            ({"atoms": {"p": ["9"]}}, "atoms.p[0]"),
            ({"atoms": {"p q": ["1"]}}, "atoms.p q"),
            ({"atoms": []}, "atoms"),
            ({"measure": {"9": 1.0}}, "measure.9"),
            ({"measure": {"1": "half"}}, "measure.1"),
            ({"utterances": "p"}, "utterances"),
            ({"utterances": ["p", 3]}, "utterances[1]"),
            ({"extra": 1}, "extra"),
        ],
    )
    def test_schema_errors(self, patch, path):
        with pytest.raises(SchemaError) as exc:
            loads(json.dumps({**SIX_WORKED, **patch}))
        assert exc.value.path == path

    def test_measure_message(self):
        with pytest.raises(SchemaError, match="measure not normalized"):
            loads(json.dumps({**SIX_WORKED, "measure": {"1": 0.2, "2": 0.5, "3": 0.2}}))

    def test_not_json(self):
        with pytest.raises(SchemaError):
            loads("{nope")

    def test_corrupted_utterance(self):
        with pytest.raises(ParseError):
            loads(json.dumps({**SIX_WORKED, "utterances": ["p", "q &"]}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_session(tmp_path / "absent.json")

    def test_dumps_floats(self):
        assert dumps(1.0) == "1.0"
        assert dumps(1e-20) == "9.9999999999999995e-21"
        assert json.loads(dumps({"a": [0.1, 2, "x"], "b": None, "c": True})) == {"a": [0.1, 2, "x"], "b": None, "c": True}
        with pytest.raises(ValueError):
            dumps(float("nan"))
