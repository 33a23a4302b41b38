import dataclasses
import importlib.resources

import numpy as np
import pytest

from hatetriage._serialize import ArtifactFormatError
from hatetriage.lexfeat import (
    ReadabilityScores,
    SentimentLexicon,
    SentimentScores,
    SurfaceFeatures,
)
from hatetriage.pipeline import (
    FeatureSettings,
    Ingredients,
    ModelConfig,
    PipelineModel,
    build_grid,
    count_matrix,
    extract_ingredients,
    feature_matrix,
    fit_config_model,
    fit_features,
    load_pipeline,
    pipeline_predict,
    save_pipeline,
)
from hatetriage.postag import load_model


@pytest.fixture(scope="module")
def tagger():
    data = importlib.resources.files("hatetriage.data").joinpath("pos_model.txt")
    return load_model(data.read_bytes())


LEX = SentimentLexicon(valences={"good": 2.0, "love": 3.0, "bad": -2.5, "hate": -2.7})


def neutral_ingredients(word_docs):
    n = len(word_docs)
    return Ingredients(
        word_docs=tuple(tuple(d) for d in word_docs),
        pos_docs=tuple(("NN", "VBP") for _ in range(n)),
        sentiment=tuple(SentimentScores(0.0, 0.0, 1.0, 0.0) for _ in range(n)),
        readability=tuple(ReadabilityScores(1.0, 100.0) for _ in range(n)),
        surface=tuple(SurfaceFeatures(0, 0, 0, 0, 10, 2, 3) for _ in range(n)),
    )


class TestModelConfig:
    def test_valid_combinations(self):
        ModelConfig("logreg", "l1", 0.5)
        ModelConfig("logreg", "l2", 2.0, class_weight="balanced")
        ModelConfig("svm", "l2", 1.0)
        ModelConfig("nb", "none", 1.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            ModelConfig("tree", "l2", 1.0)

    def test_penalty_kind_mismatch_rejected(self):
        with pytest.raises(ValueError, match="penalty"):
            ModelConfig("svm", "l1", 1.0)
        with pytest.raises(ValueError, match="penalty"):
            ModelConfig("nb", "l2", 1.0)

    def test_nonpositive_c_rejected(self):
        with pytest.raises(ValueError):
            ModelConfig("logreg", "l2", 0.0)

    def test_bad_class_weight_rejected(self):
        with pytest.raises(ValueError, match="class_weight"):
            ModelConfig("logreg", "l2", 1.0, class_weight="none")

    def test_describe_mentions_everything(self):
        text = ModelConfig("svm", "l2", 0.25).describe()
        assert "svm" in text and "l2" in text and "0.25" in text


class TestFeatureSettings:
    def test_defaults(self):
        fs = FeatureSettings()
        assert fs.word_ngram_lo == 1 and fs.word_ngram_hi == 3
        assert fs.min_df == 5 and fs.max_df_ratio == 0.75
        assert fs.standardize and fs.select

    def test_bad_ngram_order_rejected(self):
        with pytest.raises(ValueError):
            FeatureSettings(word_ngram_lo=3, word_ngram_hi=1)

    def test_bad_bounds_rejected(self):
        with pytest.raises(ValueError):
            FeatureSettings(min_df=0)
        with pytest.raises(ValueError):
            FeatureSettings(max_df_ratio=0.0)
        with pytest.raises(ValueError):
            FeatureSettings(select_c=-1.0)


class TestBuildGrid:
    def test_penalty_normalized_per_kind(self):
        grid = build_grid(["logreg", "svm", "nb"], ["l1", "l2"], [1.0], ["uniform"])
        kinds = [(c.kind, c.penalty) for c in grid]
        assert ("logreg", "l1") in kinds and ("logreg", "l2") in kinds
        assert ("svm", "l2") in kinds and ("svm", "l1") not in kinds
        assert ("nb", "none") in kinds

    def test_duplicates_dropped(self):
        grid = build_grid(["svm"], ["l1", "l2"], [1.0], ["uniform"])
        assert len(grid) == 1

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            build_grid([], ["l2"], [1.0], ["uniform"])

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="kind"):
            build_grid(["forest"], ["l2"], [1.0], ["uniform"])


class TestIngredients:
    def test_block_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="document count"):
            Ingredients(
                word_docs=(("a",),),
                pos_docs=(),
                sentiment=(SentimentScores(0, 0, 1, 0),),
                readability=(ReadabilityScores(1.0, 100.0),),
                surface=(SurfaceFeatures(0, 0, 0, 0, 1, 1, 1),),
            )

    def test_extract_on_real_texts(self, tagger):
        texts = [
            "RT @user: I love this so much!",
            "the weather is bad today http://x.co/y",
            "#blessed good vibes only",
        ]
        ing = extract_ingredients(texts, tagger, LEX)
        assert len(ing) == 3
        assert ing.word_docs[0][0] != "rt"  # marker dropped
        assert "URLHERE" in ing.word_docs[1]
        assert len(ing.pos_docs[0]) > 0
        assert ing.sentiment[0].compound > 0
        assert ing.surface[1].count_urls == 1

    def test_wordless_text_still_scores(self, tagger):
        # readability is clamped to one empty word instead of erroring
        ing = extract_ingredients(["@someone !!"], tagger, LEX)
        assert ing.readability[0].reading_ease == pytest.approx(121.22, abs=1e-2)
        assert ing.surface[0].num_words == 0

    def test_empty_text_ok(self, tagger):
        ing = extract_ingredients([""], tagger, LEX)
        assert ing.word_docs[0] == ()
        assert ing.pos_docs[0] == ()


class TestFitFeatures:
    def test_subset_rows_only_shape_vocab(self):
        docs = [["common", "common"], ["common", "rare"], ["other", "other"]]
        ing = neutral_ingredients(docs)
        fs = FeatureSettings(
            word_ngram_hi=1, pos_ngram_hi=1, min_df=1, max_df_ratio=1.0, select=False
        )
        fitted = fit_features(ing, [0, 1, 0], fs, indices=[0, 1])
        assert "other" not in fitted.word_vocab.index
        assert "common" in fitted.word_vocab.index

    def test_transform_width_constant_across_subsets(self):
        docs = [["a", "b"], ["b", "c"], ["a", "c"], ["a", "b"]]
        ing = neutral_ingredients(docs)
        fs = FeatureSettings(
            word_ngram_hi=1, pos_ngram_hi=1, min_df=1, max_df_ratio=1.0, select=False
        )
        fitted = fit_features(ing, [0, 1, 0, 1], fs)
        full = feature_matrix(fitted, ing)
        part = feature_matrix(fitted, ing, indices=[2])
        assert part.n_cols == full.n_cols
        assert part.n_rows == 1

    def test_registry_covers_all_blocks(self):
        docs = [["a", "b"], ["b", "c"], ["a", "c"]]
        ing = neutral_ingredients(docs)
        fs = FeatureSettings(
            word_ngram_hi=1, pos_ngram_hi=1, min_df=1, max_df_ratio=1.0, select=False
        )
        fitted = fit_features(ing, [0, 1, 2], fs)
        blocks = {b for b, _ in fitted.registry}
        assert blocks == {"word-ngram", "pos-ngram", "sentiment", "readability", "surface"}

    def test_count_matrix_intersects_selection_with_ngram_span(self):
        rng = np.random.default_rng(0)
        vocab = {0: ["alpha", "beta"], 1: ["delta", "epsilon"]}
        docs, y = [], []
        for cls in (0, 1):
            for _ in range(15):
                docs.append([str(rng.choice(vocab[cls])) for _ in range(4)])
                y.append(cls)
        ing = neutral_ingredients(docs)
        fs = FeatureSettings(
            word_ngram_hi=1,
            pos_ngram_hi=1,
            min_df=1,
            max_df_ratio=1.0,
            select=True,
            select_c=10.0,
        )
        fitted = fit_features(ing, y, fs)
        cm = count_matrix(fitted, ing)
        assert all(block in ("word-ngram", "pos-ngram") for block, _ in cm.registry)
        assert cm.n_cols <= fitted.n_ngram_columns
        dense = cm.matrix.toarray()
        assert (dense >= 0).all()
        assert (dense == dense.astype(int)).all()


class TestPipelineArtifact:
    def build(self, tagger, kind="logreg"):
        rng = np.random.default_rng(1)
        words = {0: ["awful", "trash"], 1: ["mediocre", "meh"], 2: ["lovely", "sunny"]}
        texts, y = [], []
        for cls in (0, 1, 2):
            for _ in range(12):
                texts.append(" ".join(str(rng.choice(words[cls])) for _ in range(4)))
                y.append(cls)
        ing = extract_ingredients(texts, tagger, LEX)
        fs = FeatureSettings(
            word_ngram_hi=2, pos_ngram_hi=1, min_df=2, max_df_ratio=1.0, select=False
        )
        fitted = fit_features(ing, y, fs)
        config = (
            ModelConfig(kind, "none" if kind == "nb" else "l2", 1.0)
        )
        fm = (
            count_matrix(fitted, ing) if kind == "nb" else feature_matrix(fitted, ing)
        )
        model = fit_config_model(config, fm, y)
        pm = PipelineModel(
            tagger=tagger, lexicon=LEX, fitted=fitted, model=model, config=config
        )
        return pm, texts, y

    def test_roundtrip_reproduces_predictions(self, tagger):
        pm, texts, y = self.build(tagger)
        restored = load_pipeline(save_pipeline(pm))
        l1, s1 = pipeline_predict(pm, texts)
        l2, s2 = pipeline_predict(restored, texts)
        assert (l1 == l2).all()
        assert (s1 == s2).all()

    def test_serialization_byte_stable(self, tagger):
        pm, _, _ = self.build(tagger)
        blob = save_pipeline(pm)
        assert blob == save_pipeline(load_pipeline(blob))

    def test_nb_pipeline_roundtrip(self, tagger):
        pm, texts, y = self.build(tagger, kind="nb")
        restored = load_pipeline(save_pipeline(pm))
        labels, scores = pipeline_predict(restored, texts)
        assert (labels == np.asarray(y)).mean() > 0.9
        assert (scores <= 0).all()

    def test_version_mismatch_rejected(self, tagger):
        pm, _, _ = self.build(tagger)
        blob = save_pipeline(pm).replace(b"pipeline 1 ", b"pipeline 3 ", 1)
        with pytest.raises(ArtifactFormatError, match="version"):
            load_pipeline(blob)

    def test_truncation_rejected(self, tagger):
        pm, _, _ = self.build(tagger)
        with pytest.raises(ArtifactFormatError):
            load_pipeline(save_pipeline(pm)[:-7])

    def test_empty_input_empty_output(self, tagger):
        pm, _, _ = self.build(tagger)
        labels, scores = pipeline_predict(pm, [])
        assert labels.shape == (0,)
        assert scores.shape == (0, 3)

    def test_predict_one_at_a_time_matches_batch(self, tagger):
        pm, texts, _ = self.build(tagger)
        batch_labels, batch_scores = pipeline_predict(pm, texts[:5])
        for i, text in enumerate(texts[:5]):
            one_label, one_score = pipeline_predict(pm, [text])
            assert one_label[0] == batch_labels[i]
            assert one_score[0] == pytest.approx(batch_scores[i], abs=1e-12)
