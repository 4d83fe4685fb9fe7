"""File-backed cache of class-sum expansions.

One tab-separated record per line — canonical key, machine-format terms,
metadata — so cache files are human-inspectable and diff-friendly.  The
cache is advisory: loads revalidate each record's counting identity and
skip (with a warning) anything corrupt or written by another version.
"""

from __future__ import annotations

import os
import time
import warnings
from pathlib import Path

from . import __version__
from .classcalc import ClassSumExpansion
from .field import field_of_order
from .gltype import GLType, class_size, format_gltype, norm, parse_gltype

__all__ = [
    "ExpansionCache", "make_key", "parse_key",
    "serialize_expansion", "parse_expansion", "default_cache_path",
    "cache_get", "cache_put", "cache_load", "cache_save",
]

_STABLE = "stable"  # the n field of records holding top-degree products


# ---------------------------------------------------------------------------
# keys and record text
# ---------------------------------------------------------------------------

def make_key(lam: GLType, mu: GLType, n: int | None) -> str:
    """Canonical record key; identical inputs always serialize identically."""
    return (f"q={lam.field.q};n={_STABLE if n is None else n};"
            f"lambda={format_gltype(lam)};mu={format_gltype(mu)}")


def parse_key(key: str):
    """Invert make_key.  Type texts may contain ';', so chunks after
    'lambda='/'mu=' accumulate until the next field marker."""
    q = n = lam_txt = mu_txt = None
    target = None
    for chunk in key.split(";"):
        if chunk.startswith("q=") and q is None:
            q, target = int(chunk[2:]), None
        elif chunk.startswith("n=") and n is None:
            n, target = chunk[2:], None
        elif chunk.startswith("lambda=") and lam_txt is None:
            lam_txt, target = chunk[len("lambda="):], "lam"
        elif chunk.startswith("mu=") and mu_txt is None:
            mu_txt, target = chunk[len("mu="):], "mu"
        elif target == "lam":
            lam_txt += ";" + chunk
        elif target == "mu":
            mu_txt += ";" + chunk
        else:
            raise ValueError(f"malformed cache key {key!r}")
    if None in (q, n, lam_txt, mu_txt):
        raise ValueError(f"malformed cache key {key!r}")
    field = field_of_order(q)
    n_val = None if n == _STABLE else int(n)
    return field, n_val, parse_gltype(field, lam_txt), parse_gltype(field, mu_txt)


def serialize_expansion(expansion: ClassSumExpansion) -> str:
    """'type,coeff' terms joined by '|', in canonical term order."""
    return "|".join(f"{format_gltype(nu)},{coeff}"
                    for nu, coeff in expansion.items_sorted())


def parse_expansion(field, n, lam: GLType, mu: GLType,
                    text: str) -> ClassSumExpansion:
    terms = {}
    for item in text.split("|") if text else []:
        nu_txt, sep, coeff_txt = item.rpartition(",")
        if not sep:
            raise ValueError(f"malformed expansion term {item!r}")
        terms[parse_gltype(field, nu_txt)] = int(coeff_txt)
    return ClassSumExpansion(field=field, n=n, lam=lam, mu=mu, terms=terms)


def _validate(expansion: ClassSumExpansion) -> None:
    """The counting identity at finite n; the top-degree grading for stable
    records (which have no single n to count in)."""
    lam, mu, n = expansion.lam, expansion.mu, expansion.n
    if n is None:
        top = norm(lam) + norm(mu)
        if any(norm(nu) != top for nu in expansion.terms):
            raise ValueError("stable record holds a non-top-degree term")
        return
    total = sum(coeff * class_size(nu, n) for nu, coeff in expansion.terms.items())
    if total != class_size(lam, n) * class_size(mu, n):
        raise ValueError("counting identity failed "
                         f"({total} pairs for key n={n})")


def _make_meta(seed) -> str:
    return f"v={__version__};ts={int(time.time())};seed={'-' if seed is None else seed}"


def _check_meta(meta: str) -> None:
    fields = dict(item.split("=", 1) for item in meta.split(";") if "=" in item)
    if fields.get("v") != __version__:
        raise ValueError(f"version {fields.get('v')!r} != {__version__!r}")


# ---------------------------------------------------------------------------
# the cache
# ---------------------------------------------------------------------------

def default_cache_path() -> Path:
    """$GLQ_CACHE when set, else a per-user cache file."""
    env = os.environ.get("GLQ_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "glq" / "expansions.tsv"


class ExpansionCache:
    """In-memory key → expansion map with load/save to a record file."""

    def __init__(self, path=None):
        self.path = Path(path) if path is not None else None
        self._records: dict = {}  # key -> (ClassSumExpansion, meta text)

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: str) -> bool:
        return key in self._records

    def get(self, key: str) -> ClassSumExpansion | None:
        record = self._records.get(key)
        return record[0] if record else None

    def put(self, key: str, expansion: ClassSumExpansion, seed=None) -> None:
        self._records[key] = (expansion, _make_meta(seed))

    def load(self, path=None) -> int:
        """Merge records from a file; returns how many were accepted.
        Corrupt or foreign-version records are skipped with a warning."""
        target = Path(path) if path is not None else (self.path or
                                                      default_cache_path())
        if not target.exists():
            return 0
        accepted = 0
        with open(target, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                try:
                    key, value, meta = line.split("\t")
                    _check_meta(meta)
                    field, n, lam, mu = parse_key(key)
                    expansion = parse_expansion(field, n, lam, mu, value)
                    _validate(expansion)
                except (ValueError, KeyError) as exc:
                    warnings.warn(f"skipping cache record at {target}:{lineno}:"
                                  f" {exc}", stacklevel=2)
                    continue
                self._records[key] = (expansion, meta)
                accepted += 1
        return accepted

    def save(self, path=None) -> Path:
        """Write a complete snapshot atomically (temp file, then rename)."""
        target = Path(path) if path is not None else (self.path or
                                                      default_cache_path())
        target.parent.mkdir(parents=True, exist_ok=True)
        temp = target.with_name(target.name + f".tmp{os.getpid()}")
        with open(temp, "w", encoding="utf-8") as handle:
            for key in sorted(self._records):
                expansion, meta = self._records[key]
                handle.write(f"{key}\t{serialize_expansion(expansion)}"
                             f"\t{meta}\n")
        os.replace(temp, target)
        return target


# ---------------------------------------------------------------------------
# module-level convenience on one shared cache
# ---------------------------------------------------------------------------

_shared = ExpansionCache()


def cache_get(key: str) -> ClassSumExpansion | None:
    return _shared.get(key)


def cache_put(key: str, expansion: ClassSumExpansion, seed=None) -> None:
    _shared.put(key, expansion, seed)


def cache_load(path=None) -> int:
    return _shared.load(path)


def cache_save(path=None) -> Path:
    return _shared.save(path)
