"""Feature grid files, mean pooling, and corpus JSONL round trips."""

import numpy as np
import pytest

from artdesc.corpus import (
    FeatureGrid,
    load_corpus,
    load_feature_grid,
    mean_pool,
    record_from_dict,
    record_to_dict,
    save_corpus,
    save_feature_grid,
)
from artdesc.corpus.types import TopicLabel
from artdesc.errors import DataError, FormatError


class TestFeatureFiles:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(24)
        values = rng.normal(size=(4, 8)).astype(np.float32).astype(np.float64)
        path = tmp_path / "p1.fgrd"
        save_feature_grid(path, values)
        grid = load_feature_grid(path)
        assert grid.n_locations == 4 and grid.feature_dim == 8
        assert np.array_equal(grid.values, values)

    def test_paper_scale_accepted(self, tmp_path):
        path = tmp_path / "big.fgrd"
        save_feature_grid(path, np.zeros((196, 2048)))
        grid = load_feature_grid(path)
        assert grid.n_locations == 14 * 14
        assert grid.feature_dim == 2048

    def test_bad_magic_offset(self, tmp_path):
        path = tmp_path / "bad.fgrd"
        path.write_bytes(b"NOPE" + b"\x00" * 20)
        with pytest.raises(FormatError) as exc:
            load_feature_grid(path)
        assert exc.value.offset == 0

    def test_size_mismatch_reports_offset(self, tmp_path):
        path = tmp_path / "short.fgrd"
        save_feature_grid(path, np.ones((3, 3)))
        path.write_bytes(path.read_bytes()[:-5])
        with pytest.raises(FormatError):
            load_feature_grid(path)


class TestMeanPool:
    def test_all_ones(self):
        assert np.array_equal(mean_pool(FeatureGrid(np.ones((5, 3)))), np.ones(3))

    def test_matches_scalar_loop(self):
        rng = np.random.default_rng(25)
        grid = FeatureGrid(rng.normal(size=(4, 8)))
        pooled = mean_pool(grid)
        for j in range(8):
            acc = 0.0
            for i in range(4):
                acc += grid.values[i, j]
            assert abs(pooled[j] - acc / 4) < 1e-12


RECORD = {
    "id": "p1",
    "sentences": [
        {
            "text": "Painted by Vermeer in 1665.",
            "topic": "context",
            "entities": [
                {"value": "Vermeer", "type": "person"},
                {"value": "1665", "type": "date"},
            ],
        },
        {"text": "A quiet interior scene.", "topic": "content", "entities": []},
        {"text": "Loose brushwork throughout.", "topic": None, "entities": []},
    ],
    "attributes": {"artist": "vermeer", "type": "genre", "timeframe": "1651-1700", "school": "dutch"},
    "objects": ["window", "table"],
    "reference": "Painted by Vermeer in 1665. A quiet interior scene.",
}


class TestCorpusIO:
    def test_record_parsing(self):
        rec = record_from_dict(RECORD)
        assert rec.id == "p1"
        assert rec.total_slots() == 2 and rec.total_values() == 2
        assert rec.sentences[0].values == ["Vermeer", "1665"]
        assert rec.sentences[0].masked.topic == TopicLabel.CONTEXT
        assert rec.sentences[1].masked.topic == TopicLabel.CONTENT
        # unlabeled sentence kept with context topic, flagged
        assert rec.sentences[2].topic_labeled is False
        assert rec.sentences[2].masked.topic == TopicLabel.CONTEXT

    def test_round_trip(self, tmp_path):
        rec = record_from_dict(RECORD)
        path = tmp_path / "corpus.jsonl"
        save_corpus(path, [rec])
        loaded = load_corpus(path)
        assert len(loaded) == 1
        assert record_to_dict(loaded[0]) == record_to_dict(rec)

    def test_missing_entity_value_rejected(self):
        bad = {
            "id": "x",
            "sentences": [
                {"text": "no names here", "topic": "content",
                 "entities": [{"value": "Rubens", "type": "person"}]}
            ],
        }
        with pytest.raises(DataError, match="Rubens"):
            record_from_dict(bad)

    def test_unknown_attribute_key_rejected(self):
        bad = dict(RECORD, id="y", attributes={"artist": "x", "era": "old"})
        with pytest.raises(DataError, match="era"):
            record_from_dict(bad)

    def test_duplicate_ids_rejected(self, tmp_path):
        rec = record_from_dict(RECORD)
        path = tmp_path / "corpus.jsonl"
        save_corpus(path, [rec])
        blob = path.read_text()
        path.write_text(blob + blob)
        with pytest.raises(DataError, match="duplicate"):
            load_corpus(path)

    def test_features_loaded_by_id(self, tmp_path):
        fdir = tmp_path / "features"
        fdir.mkdir()
        save_feature_grid(fdir / "p1.fgrd", np.ones((2, 3)))
        path = tmp_path / "corpus.jsonl"
        save_corpus(path, [record_from_dict(RECORD)])
        loaded = load_corpus(path, features_dir=fdir)
        assert loaded[0].features is not None
        assert loaded[0].features.feature_dim == 3

    def test_slot_value_bookkeeping(self):
        rec = record_from_dict(RECORD)
        assert rec.total_slots() == rec.total_values()
