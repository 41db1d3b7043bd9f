"""Persistent cache of canonical J_m expansions.

One JSON file per m holds the longest expansion computed so far; any request
at a lower order is served by truncation.  Writes go to a temporary file in
the same directory and are moved into place with :func:`os.replace`, so a
reader never sees a partial entry.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from typing import Optional

from . import hecke
from .exactnum import format_rational, parse_rational
from .hecke import CanonicalExpansion, HeckeParameters
from .series import LaurentSeries

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
ENV_CACHE_DIR = "HECKECONST_CACHE_DIR"


def default_cache_dir() -> str:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "heckeconst")


def _entry_path(cache_dir: str, m: int) -> str:
    return os.path.join(cache_dir, f"J_m{m}.json")


def _checksum(payload) -> str:
    blob = json.dumps(payload, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def encode_entry(exp: CanonicalExpansion) -> dict:
    payload = {
        "m": exp.m,
        "order": exp.order,
        "lower": exp.J.lower,
        "coefficients": [format_rational(c) for c in exp.J.coeffs],
    }
    return {"formatVersion": FORMAT_VERSION, "payload": payload, "sha256": _checksum(payload)}


def decode_entry(doc: dict, m: int) -> CanonicalExpansion:
    if doc.get("formatVersion") != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {doc.get('formatVersion')!r}")
    payload = doc["payload"]
    if _checksum(payload) != doc.get("sha256"):
        raise ValueError("checksum mismatch")
    if payload["m"] != m:
        raise ValueError("entry belongs to another m")
    coeffs = [parse_rational(s) for s in payload["coefficients"]]
    J = LaurentSeries.from_coeffs(coeffs, lower=payload["lower"], order=payload["order"])
    if J.lower != -1 or J.leading != 1:
        raise ValueError("not a canonical expansion")
    return CanonicalExpansion(m, J, hecke.bar_transform(J, HeckeParameters.for_m(m)))


def read_entry(cache_dir: str, m: int) -> Optional[CanonicalExpansion]:
    path = _entry_path(cache_dir, m)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        return None
    except (OSError, json.JSONDecodeError) as exc:
        log.warning("unreadable cache entry %s (%s); recomputing", path, exc)
        return None
    try:
        return decode_entry(doc, m)
    except (KeyError, TypeError, ValueError) as exc:
        log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
        return None


def write_entry(cache_dir: str, exp: CanonicalExpansion) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".J_", suffix=".tmp", dir=cache_dir)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(encode_entry(exp), fh, separators=(",", ":"))
        os.replace(tmp, _entry_path(cache_dir, exp.m))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_get_or_compute(m: int, order: int, cache_dir: str) -> CanonicalExpansion:
    """Serve from a covering cache entry, else compute and persist."""
    HeckeParameters.for_m(m)
    hit = read_entry(cache_dir, m)
    if hit is not None and hit.order >= order:
        return hit.truncated(order)
    exp = hecke._compute_expansion(m, order)
    try:
        write_entry(cache_dir, exp)
    except OSError as exc:
        log.warning("could not write cache entry for m=%d: %s", m, exc)
    return exp


@dataclass(frozen=True)
class CachedSource:
    """Picklable expansion source backed by the on-disk cache plus the in-process memo."""

    cache_dir: str

    def __call__(self, m: int, order: int) -> CanonicalExpansion:
        memo = hecke._memo.get(m)
        if memo is not None and memo.order >= order:
            return memo.truncated(order)
        exp = cache_get_or_compute(m, order, self.cache_dir)
        with hecke._memo_lock:
            cur = hecke._memo.get(m)
            if cur is None or cur.order < exp.order:
                hecke._memo[m] = exp
        return exp
