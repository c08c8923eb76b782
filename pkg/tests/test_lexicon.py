import pytest
from hypothesis import given, strategies as st

from comention.corpus import Corpus
from comention.errors import DataError
from comention.lexicon import (
    CandidateSurname, Lexicon, LexiconEntry, build_lexicon, count_corpus_frequency,
    expand_variants, lemmatize, load_candidates,
)
from oracles import grep_count


def corpus_of(*texts):
    return Corpus.from_texts((f"d{i}", 1960, t) for i, t in enumerate(texts))


def cands(*names, count=10):
    return [CandidateSurname(n, count) for n in names]


def test_expand_variants_freud():
    assert expand_variants("Freud") == {
        "Freud", "Freuds", "Freudsche", "Freudschen", "Freudschem", "Freudscher", "Freudsches",
    }


def test_expand_variants_marx():
    v = expand_variants("Marx")
    assert len(v) == 7 and all(x.startswith("Marx") for x in v)


def test_expand_variants_empty():
    with pytest.raises(ValueError):
        expand_variants("")


def test_load_candidates(tmp_path):
    f = tmp_path / "c.tsv"
    f.write_text("surname\tcount\nWeber\t900\nVogel\t120\n")
    assert load_candidates(f) == [CandidateSurname("Weber", 900), CandidateSurname("Vogel", 120)]
    f.write_text("surname\tcount\nWeber\t500\nWeber\t400\n")
    assert load_candidates(f) == [CandidateSurname("Weber", 900)]


@pytest.mark.parametrize("body, line", [
    ("Weber\t-3\n", 2),
    ("Vogel\t1\nWeber,-3\n", 3),
    ("Vogel\t1\nMarx\tmany\n", 3),
])
def test_load_candidates_errors(tmp_path, body, line):
    f = tmp_path / "c.tsv"
    f.write_text("surname\tcount\n" + body)
    with pytest.raises(DataError, match=f":{line}:"):
        load_candidates(f)


def test_count_corpus_frequency():
    c = corpus_of("Freud Freud Freudschen", "Freud und Freudschen Freude")
    assert count_corpus_frequency("Freud", c) == 5
    assert count_corpus_frequency("Jung", c) == 0


def test_count_mini_weber(mini_corpus, mini):
    # grep oracle over the fixture files gives 11
    assert grep_count(mini / "texts", "Weber") == 11
    assert count_corpus_frequency("Weber", mini_corpus) == 11


@pytest.mark.parametrize("surface, known, lemma", [
    ("Freuds", {"Freud"}, "Freud"),
    ("Freudschen", {"Freud"}, "Freud"),
    ("Freudsches", {"Freud"}, "Freud"),
    ("Parsons", {"Parsons"}, "Parsons"),
    ("Parsons", {"Parson"}, "Parson"),
    ("Elias", set(), "Elias"),
    ("Fischer", {"Fischer"}, "Fischer"),
])
def test_lemmatize(surface, known, lemma):
    assert lemmatize(surface, known) == lemma


def test_pruning_steps():
    text = " ".join(["weber", "Weber", "Ob", "Freud", "Freuds"] * 30)
    lex = build_lexicon(cands("weber", "Ob", "Freud", "Freuds", "Weber"), corpus_of(text))
    assert lex.lemmas == ["Freud", "Weber"]
    freud = lex.entries[0]
    assert freud.corpus_count == 60 and "Freuds" in freud.variants


def test_frequency_threshold_boundary():
    c = corpus_of("Marx " * 25 + "Simmel " * 24)
    assert build_lexicon(cands("Marx", "Simmel"), c).lemmas == ["Marx"]
    assert build_lexicon(cands("Marx", "Simmel"), c, min_candidate_freq=24).lemmas == ["Marx", "Simmel"]


def test_curation_files(tmp_path):
    c = corpus_of("Marx " * 30 + "Vogel " * 30 + "Mead")
    exclude = tmp_path / "ex.txt"
    exclude.write_text("# concept words\nVogel  \n\n")
    include = tmp_path / "in.txt"
    include.write_text("Mead\n")
    lex = build_lexicon(cands("Marx", "Vogel"), c, include_file=include, exclude_file=exclude)
    assert lex.lemmas == ["Marx", "Mead"]
    assert [e.corpus_count for e in lex.entries] == [30, 1]


@pytest.mark.parametrize("entry", ["vogel", "Xy", "Marxs", "Two Words"])
def test_curation_rejects_invalid(tmp_path, entry):
    c = corpus_of("Marx " * 30)
    f = tmp_path / "in.txt"
    f.write_text(entry + "\n")
    with pytest.raises(DataError, match=entry):
        build_lexicon(cands("Marx"), c, include_file=f)


def test_collision_is_an_error(tmp_path):
    # Hans = Han + genitive s; forcing both lemmas in makes variants overlap
    c = corpus_of("Han " * 30 + "Hans " * 30)
    f = tmp_path / "in.txt"
    f.write_text("Han\n")
    with pytest.raises(DataError, match="'Han'.*'Hans'|'Hans'.*'Han'"):
        build_lexicon(cands("Hans"), c, include_file=f, min_candidate_freq=0)
    with pytest.raises(DataError, match="collision"):
        Lexicon((LexiconEntry("Freud", 1), LexiconEntry("Freudsche", 1)))


def test_mini_lexicon(mini, mini_corpus):
    lex = build_lexicon(load_candidates(mini / "candidates.tsv"), mini_corpus,
                        min_candidate_freq=5, exclude_file=mini / "exclude.txt")
    assert lex.lemmas == ["Adorno", "Durkheim", "Freud", "Goffman", "Habermas", "Luhmann",
                          "Marx", "Mead", "Parsons", "Simmel", "Weber"]
    for e in lex.entries:
        assert count_corpus_frequency(e.lemma, mini_corpus) == e.corpus_count
        assert grep_count(mini / "texts", e.lemma) == e.corpus_count
    # without curation the frequent concept words get in
    raw = build_lexicon(load_candidates(mini / "candidates.tsv"), mini_corpus, min_candidate_freq=5)
    assert {"Vogel", "Kritik"} <= set(raw.lemmas)


names = st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyzäöü", min_size=1, max_size=8)


@given(st.lists(names, min_size=1, max_size=12), st.lists(names, max_size=80),
       st.integers(0, 6), st.integers(0, 6))
def test_lexicon_properties(candidate_names, words, f1, f2):
    corpus = corpus_of(" ".join(words))
    candidates = cands(*candidate_names)
    lo, hi = sorted((f1, f2))
    try:
        a = build_lexicon(candidates, corpus, min_candidate_freq=lo)
    except DataError:
        return  # generated names collided; covered by test_collision_is_an_error
    b = build_lexicon(candidates, corpus, min_candidate_freq=hi)
    assert set(b.lemmas) <= set(a.lemmas)  # raising the threshold never adds
    assert a == build_lexicon(candidates, corpus, min_candidate_freq=lo)
    for e in a.entries:
        assert e.lemma in e.variants and e.variants == expand_variants(e.lemma)
        assert e.lemma[0].isupper() and len(e.lemma) >= 3
        assert e.corpus_count == count_corpus_frequency(e.lemma, corpus) >= lo
    seen = set()
    for e in a.entries:
        assert not (seen & e.variants)
        seen |= e.variants
