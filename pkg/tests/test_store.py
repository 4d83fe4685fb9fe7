"""Cache keys, record serialization, revalidation on load, and the
load/save round trip."""

import itertools

import pytest

from glq.classcalc import multiply_class_sums, stable_product
from glq.field import field_make
from glq.gltype import empty_type, enumerate_plain_types, parse_gltype
from glq.store import (ExpansionCache, default_cache_path, make_key,
                       parse_expansion, parse_key, serialize_expansion)

F2 = field_make(2)
F3 = field_make(3)


def T(field, text):
    return parse_gltype(field, text)


# ---------------------------------------------------------------------------
# keys
# ---------------------------------------------------------------------------

def test_make_key_frozen():
    key = make_key(T(F3, "1@t-1"), T(F3, "1@t-2"), 2)
    assert key == "q=3;n=2;lambda=1@t-1;mu=1@t-2"
    key = make_key(T(F3, "1@t-1;1@t-2"), empty_type(F3), None)
    assert key == "q=3;n=stable;lambda=1@t-1;1@t-2;mu=∅"


def test_parse_key_inverts_make_key():
    lam, mu = T(F3, "1@t-1;2,1@t^2+1"), T(F3, "1,1@t-2")
    for n in (4, None):
        field, back_n, back_lam, back_mu = parse_key(make_key(lam, mu, n))
        assert (field.q, back_n, back_lam, back_mu) == (3, n, lam, mu)


def test_parse_key_rejects_garbage():
    for bad in ("", "q=3", "junk;q=3;n=2;lambda=∅;mu=∅"):
        with pytest.raises(ValueError, match="malformed cache key"):
            parse_key(bad)


def test_keys_are_injective_on_generated_pairs():
    types = enumerate_plain_types(F2, 1) + enumerate_plain_types(F2, 2) \
        + enumerate_plain_types(F3, 1) + enumerate_plain_types(F3, 2)
    keys = {make_key(lam, mu, n)
            for lam, mu in itertools.product(types, repeat=2)
            if lam.field is mu.field
            for n in (4, None)}
    same_field = sum(1 for lam, mu in itertools.product(types, repeat=2)
                     if lam.field is mu.field)
    assert len(keys) == 2 * same_field


# ---------------------------------------------------------------------------
# record text
# ---------------------------------------------------------------------------

def test_expansion_round_trips_through_text():
    expansion = multiply_class_sums(T(F3, "1@t-2"), T(F3, "1@t-2"), 2, F3)
    text = serialize_expansion(expansion)
    assert text == "∅,12|1@t-1,6|1,1@t-2,12|2@t-2,6|1@t^2+1,4"
    back = parse_expansion(F3, 2, expansion.lam, expansion.mu, text)
    assert back.terms == expansion.terms


def test_parse_expansion_rejects_bad_terms():
    with pytest.raises(ValueError, match="malformed expansion term"):
        parse_expansion(F3, 2, empty_type(F3), empty_type(F3), "no-comma")


# ---------------------------------------------------------------------------
# the cache proper
# ---------------------------------------------------------------------------

def test_get_on_empty_cache_is_none():
    cache = ExpansionCache()
    assert cache.get("q=2;n=2;lambda=∅;mu=∅") is None
    assert len(cache) == 0


def test_put_then_get_returns_identical_expansion():
    cache = ExpansionCache()
    expansion = multiply_class_sums(T(F2, "1@t-1"), T(F2, "1@t-1"), 2, F2)
    key = make_key(expansion.lam, expansion.mu, 2)
    cache.put(key, expansion)
    assert key in cache
    assert cache.get(key).terms == expansion.terms


def test_save_load_round_trip(tmp_path):
    path = tmp_path / "nested" / "cache.tsv"
    cache = ExpansionCache(path)
    for lam_txt, mu_txt in (("1@t-1", "1@t-2"), ("1@t-2", "1@t-2")):
        expansion = multiply_class_sums(T(F3, lam_txt), T(F3, mu_txt), 2, F3)
        cache.put(make_key(expansion.lam, expansion.mu, 2), expansion, seed=7)
    saved = cache.save()
    assert saved == path and path.exists()

    fresh = ExpansionCache(path)
    assert fresh.load() == 2
    key = make_key(T(F3, "1@t-1"), T(F3, "1@t-2"), 2)
    assert fresh.get(key).terms == cache.get(key).terms


def test_stable_records_round_trip(tmp_path):
    expansion = stable_product(T(F3, "1@t-2"), T(F3, "1@t-2"), F3)
    key = make_key(expansion.lam, expansion.mu, None)
    cache = ExpansionCache(tmp_path / "cache.tsv")
    cache.put(key, expansion)
    cache.save()
    fresh = ExpansionCache(tmp_path / "cache.tsv")
    assert fresh.load() == 1
    assert fresh.get(key).n is None
    assert fresh.get(key).terms == expansion.terms


def test_load_skips_corrupt_records(tmp_path):
    path = tmp_path / "cache.tsv"
    cache = ExpansionCache(path)
    expansion = multiply_class_sums(T(F2, "1@t-1"), T(F2, "1@t-1"), 2, F2)
    cache.put(make_key(expansion.lam, expansion.mu, 2), expansion)
    cache.save()
    good_line = path.read_text().strip()
    meta = good_line.split("\t")[2]
    with open(path, "w") as handle:
        handle.write("# comment lines are fine\n")
        handle.write(good_line + "\n")
        handle.write("no tabs at all\n")
        handle.write(f"q=2;n=2;lambda=1@t-1;mu=1@t-1\tbad,coeff,x\t{meta}\n")
    fresh = ExpansionCache(path)
    with pytest.warns(UserWarning, match="skipping cache record"):
        assert fresh.load() == 1
    assert len(fresh) == 1


def test_load_skips_version_mismatch(tmp_path):
    path = tmp_path / "cache.tsv"
    cache = ExpansionCache(path)
    expansion = multiply_class_sums(T(F2, "1@t-1"), T(F2, "1@t-1"), 2, F2)
    cache.put(make_key(expansion.lam, expansion.mu, 2), expansion)
    cache.save()
    path.write_text(path.read_text().replace("v=", "v=999."))
    fresh = ExpansionCache(path)
    with pytest.warns(UserWarning, match="version"):
        assert fresh.load() == 0


def test_load_revalidates_counting_identity(tmp_path):
    path = tmp_path / "cache.tsv"
    cache = ExpansionCache(path)
    expansion = multiply_class_sums(T(F3, "1@t-2"), T(F3, "1@t-2"), 2, F3)
    cache.put(make_key(expansion.lam, expansion.mu, 2), expansion)
    cache.save()
    path.write_text(path.read_text().replace("∅,12|", "∅,13|"))
    fresh = ExpansionCache(path)
    with pytest.warns(UserWarning, match="counting identity"):
        assert fresh.load() == 0


def test_load_rejects_non_top_degree_stable_terms(tmp_path):
    path = tmp_path / "cache.tsv"
    expansion = stable_product(T(F3, "1@t-2"), T(F3, "1@t-2"), F3)
    cache = ExpansionCache(path)
    cache.put(make_key(expansion.lam, expansion.mu, None), expansion)
    cache.save()
    text = path.read_text()
    first_term = text.split("\t")[1].split("|")[0]
    path.write_text(text.replace(first_term, "1@t-2,1"))
    fresh = ExpansionCache(path)
    with pytest.warns(UserWarning, match="top-degree"):
        assert fresh.load() == 0


def test_load_missing_file_is_empty(tmp_path):
    cache = ExpansionCache(tmp_path / "absent.tsv")
    assert cache.load() == 0


def test_default_path_honors_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("GLQ_CACHE", str(tmp_path / "override.tsv"))
    assert default_cache_path() == tmp_path / "override.tsv"
    monkeypatch.delenv("GLQ_CACHE")
    assert default_cache_path().name == "expansions.tsv"
