import json

import pytest

from pnopacity import (
    Marking,
    ParseError,
    SemanticError,
    parse_net_document,
    serialize_net_document,
    to_system,
)

from helpers import DEMO_PATH, chain_marking


@pytest.fixture(scope="module")
def demo_text():
    return DEMO_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="module")
def demo_doc(demo_text):
    return parse_net_document(demo_text)


def patched(demo_text, mutate):
    """Parse the demo document as raw JSON, mutate it, and re-serialize."""
    raw = json.loads(demo_text)
    mutate(raw)
    return json.dumps(raw)


class TestParse:
    def test_demo_document(self, demo_doc):
        assert len(demo_doc.places) == 7
        assert len(demo_doc.transitions) == 8
        labels = {t.id: t.label for t in demo_doc.transitions}
        assert labels == {"t1": None, "t2": "a", "t3": "a", "t4": None,
                          "t5": None, "t6": "a", "t7": "b", "t8": "a"}
        assert len(demo_doc.secret) == 2

    def test_invalid_json_reports_position(self):
        with pytest.raises(ParseError) as exc:
            parse_net_document("{ not json")
        assert "line" in str(exc.value)

    def test_unknown_top_level_field(self, demo_text):
        bad = patched(demo_text, lambda raw: raw.update(color="red"))
        with pytest.raises(ParseError) as exc:
            parse_net_document(bad)
        assert "color" in str(exc.value)

    def test_unknown_transition_field(self, demo_text):
        bad = patched(demo_text, lambda raw: raw["transitions"][0].update(guard="x"))
        with pytest.raises(ParseError):
            parse_net_document(bad)

    def test_empty_label_rejected(self, demo_text):
        bad = patched(demo_text, lambda raw: raw["transitions"][0].update(label=""))
        with pytest.raises(ParseError) as exc:
            parse_net_document(bad)
        assert "label" in str(exc.value)

    def test_wrong_schema_version(self, demo_text):
        bad = patched(demo_text, lambda raw: raw.update(schema_version="99"))
        with pytest.raises(ParseError):
            parse_net_document(bad)

    def test_negative_weight_rejected(self, demo_text):
        bad = patched(demo_text, lambda raw: raw["transitions"][0]["pre"].update(p1=-1))
        with pytest.raises(ParseError):
            parse_net_document(bad)

    def test_boolean_weight_rejected(self, demo_text):
        bad = patched(demo_text, lambda raw: raw["transitions"][0]["pre"].update(p1=True))
        with pytest.raises(ParseError):
            parse_net_document(bad)

    def test_missing_places_rejected(self, demo_text):
        bad = patched(demo_text, lambda raw: raw.pop("places"))
        with pytest.raises(ParseError):
            parse_net_document(bad)

    def test_dangling_place_in_arc(self, demo_text):
        bad = patched(demo_text, lambda raw: raw["transitions"][0]["pre"].update(p99=1))
        with pytest.raises(SemanticError) as exc:
            parse_net_document(bad)
        assert "p99" in str(exc.value)

    def test_dangling_place_in_secret(self, demo_text):
        bad = patched(demo_text, lambda raw: raw["secret"][0].update(p42=1))
        with pytest.raises(SemanticError):
            parse_net_document(bad)

    def test_duplicate_place_id(self, demo_text):
        bad = patched(demo_text,
                      lambda raw: raw["places"].append({"id": "p1", "initial_tokens": 0}))
        with pytest.raises(SemanticError):
            parse_net_document(bad)

    def test_duplicate_transition_id(self, demo_text):
        bad = patched(
            demo_text,
            lambda raw: raw["transitions"].append(
                {"id": "t1", "label": "a", "pre": {}, "post": {}}))
        with pytest.raises(SemanticError):
            parse_net_document(bad)

    def test_secret_and_options_are_optional(self, demo_text):
        def strip(raw):
            raw.pop("secret")
            raw.pop("options")

        doc = parse_net_document(patched(demo_text, strip))
        assert doc.secret == ()
        assert doc.options.max_states is None


def test_roundtrip(demo_doc):
    assert parse_net_document(serialize_net_document(demo_doc)) == demo_doc


class TestToSystem:
    def test_system_shape(self, demo_doc):
        lpn, secret, cfg, depth = to_system(demo_doc)
        assert lpn.net.places == tuple(f"p{i}" for i in range(1, 8))
        assert lpn.initial == chain_marking(0)
        assert lpn.alphabet == ("a", "b")  # first-appearance order
        assert lpn.observable == ("t2", "t3", "t6", "t7", "t8")
        assert secret.members == {chain_marking(2), chain_marking(4)}
        assert cfg.max_states == 10_000
        assert cfg.max_token is None
        assert depth is None

    def test_secret_markings_default_missing_places_to_zero(self, demo_doc):
        _, secret, _, _ = to_system(demo_doc)
        for m in secret.members:
            assert isinstance(m, Marking)
            assert len(m.counts) == 7

    def test_options_flow_through(self, demo_text):
        def tweak(raw):
            raw["options"] = {"max_states": 77, "max_token": 3, "depth": 5}

        _, _, cfg, depth = to_system(parse_net_document(patched(demo_text, tweak)))
        assert (cfg.max_states, cfg.max_token, depth) == (77, 3, 5)
