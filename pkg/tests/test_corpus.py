import pytest

from commentclf import (
    ColumnMapping,
    Label,
    ViewMode,
    corpus_stats,
    extract_view,
    load_csv,
    parse_label,
    read_predictions,
    save_csv,
    write_predictions,
)
from commentclf.errors import (
    EmptyCorpus,
    MalformedCsv,
    MissingColumn,
    UnlabeledCorpus,
    UnparsableLabel,
)


class TestLoadCsv:
    def test_header_only_is_empty_corpus(self, write_corpus):
        path = write_corpus([])
        with pytest.raises(EmptyCorpus):
            load_csv(path)

    def test_labels_parse_case_insensitively(self, write_corpus):
        path = write_corpus(
            [
                ("frees the buffer", "free(p);", "Useful"),
                ("todo", "x = 1;", "Not Useful"),
                ("checks bounds", "", "useful"),
            ]
        )
        corpus = load_csv(path)
        assert len(corpus) == 3
        assert [ex.label for ex in corpus.examples] == [
            Label.USEFUL,
            Label.NOT_USEFUL,
            Label.USEFUL,
        ]
        assert [ex.id for ex in corpus.examples] == [0, 1, 2]

    def test_unparsable_label_reports_row(self, write_corpus):
        path = write_corpus(
            [
                ("fine", "", "useful"),
                ("bad", "", "maybe"),
            ]
        )
        with pytest.raises(UnparsableLabel) as exc:
            load_csv(path)
        assert exc.value.row == 1

    def test_numeric_and_underscore_surfaces(self, write_corpus):
        path = write_corpus(
            [("a b", "", "1"), ("c d", "", "0"), ("e f", "", "not_useful")]
        )
        labels = [ex.label for ex in load_csv(path).examples]
        assert labels == [Label.USEFUL, Label.NOT_USEFUL, Label.NOT_USEFUL]

    def test_missing_comment_column(self, write_corpus):
        path = write_corpus([("x", "", "useful")], header=("text", "code", "label"))
        with pytest.raises(MissingColumn):
            load_csv(path)

    def test_missing_label_column_when_expected(self, write_corpus):
        path = write_corpus([("x", "")], header=("comment", "code"))
        with pytest.raises(MissingColumn):
            load_csv(path, expect_labels=True)
        corpus = load_csv(path, expect_labels=False)
        assert not corpus.labeled

    def test_custom_column_mapping(self, write_corpus):
        path = write_corpus(
            [("snippet", "the comment", "useful")],
            header=("src", "text", "class"),
        )
        mapping = ColumnMapping(comment="text", code="src", label="class")
        corpus = load_csv(path, schema=mapping)
        assert corpus.examples[0].comment_text == "the comment"
        assert corpus.examples[0].code_text == "snippet"

    def test_row_length_violation(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("comment,code,label\nonly one cell\n", encoding="utf-8")
        with pytest.raises(MalformedCsv):
            load_csv(path)

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_bytes(b"comment,code,label\n\xff\xfe,x,useful\n")
        with pytest.raises(MalformedCsv):
            load_csv(path)

    def test_empty_comment_rejected(self, write_corpus):
        path = write_corpus([("   ", "code", "useful")])
        with pytest.raises(MalformedCsv):
            load_csv(path)

    def test_quoted_fields_with_newlines(self, tmp_path):
        path = tmp_path / "quoted.csv"
        path.write_text(
            'comment,code,label\n"multi\nline comment","if (a) {\n  b();\n}",useful\n',
            encoding="utf-8",
        )
        corpus = load_csv(path)
        assert corpus.examples[0].comment_text == "multi\nline comment"
        assert "\n" in corpus.examples[0].code_text

    def test_roundtrip_preserves_order_and_labels(self, write_corpus, tmp_path):
        path = write_corpus(
            [
                ("first comment", "a();", "useful"),
                ("second comment", "b();", "not useful"),
                ("third comment", "", "useful"),
            ]
        )
        corpus = load_csv(path)
        out = tmp_path / "resaved.csv"
        save_csv(corpus, out)
        again = load_csv(out)
        assert len(again) == len(corpus)
        assert [ex.comment_text for ex in again.examples] == [
            ex.comment_text for ex in corpus.examples
        ]
        assert [ex.label for ex in again.examples] == [ex.label for ex in corpus.examples]


class TestParseLabel:
    def test_whitespace_collapsed(self):
        assert parse_label("  Not   Useful ") is Label.NOT_USEFUL

    def test_unknown_raises(self):
        with pytest.raises(UnparsableLabel):
            parse_label("perhaps", row=7)


class TestViews:
    def _corpus(self, write_corpus):
        path = write_corpus(
            [("frees buffer", "free(p);", "useful"), ("todo", "x;", "not useful")]
        )
        return load_csv(path)

    def test_comments_only_projection(self, write_corpus):
        corpus = self._corpus(write_corpus)
        view = extract_view(corpus, ViewMode.COMMENTS_ONLY)
        assert view.documents == ("frees buffer", "todo")

    def test_code_and_comments_concatenation(self, write_corpus):
        corpus = self._corpus(write_corpus)
        view = extract_view(corpus, ViewMode.CODE_AND_COMMENTS)
        assert view.documents[0] == "frees buffer\nfree(p);"

    def test_views_have_equal_length(self, write_corpus):
        corpus = self._corpus(write_corpus)
        a = extract_view(corpus, ViewMode.COMMENTS_ONLY)
        b = extract_view(corpus, ViewMode.CODE_AND_COMMENTS)
        assert len(a) == len(b) == len(corpus)

    def test_extract_view_is_pure(self, write_corpus):
        corpus = self._corpus(write_corpus)
        assert extract_view(corpus, ViewMode.COMMENTS_ONLY) == extract_view(
            corpus, ViewMode.COMMENTS_ONLY
        )


class TestStats:
    def test_class_counts(self, write_corpus):
        path = write_corpus(
            [
                ("aa bb", "", "useful"),
                ("cc dd", "", "useful"),
                ("ee ff", "", "useful"),
                ("gg hh", "", "not useful"),
            ]
        )
        stats = corpus_stats(load_csv(path))
        assert stats.example_count == 4
        assert stats.class_counts[Label.USEFUL] == 3
        assert stats.class_counts[Label.NOT_USEFUL] == 1
        assert stats.mean_comment_tokens == 2.0

    def test_single_example(self, write_corpus):
        path = write_corpus([("only comment", "", "useful")])
        assert corpus_stats(load_csv(path)).example_count == 1

    def test_unlabeled_corpus_rejected(self, write_corpus):
        path = write_corpus([("x y", ""), ("z w", "")], header=("comment", "code"))
        corpus = load_csv(path, expect_labels=False)
        with pytest.raises(UnlabeledCorpus):
            corpus_stats(corpus)


class TestPredictionFiles:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_predictions(path, [0, 1, 2], [Label.USEFUL, Label.NOT_USEFUL, Label.USEFUL])
        header = path.read_text(encoding="utf-8").splitlines()[0]
        assert header == "id,predicted_label"
        rows = read_predictions(path)
        assert rows == [(0, Label.USEFUL), (1, Label.NOT_USEFUL), (2, Label.USEFUL)]

    def test_surface_forms(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_predictions(path, [0, 1], [Label.NOT_USEFUL, Label.USEFUL])
        body = path.read_text(encoding="utf-8")
        assert "Not Useful" in body and "Useful" in body
