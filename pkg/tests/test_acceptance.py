"""Acceptance gate: one test per criterion, verdicts summarized at the end of the run."""
import json
import random
import time
from fractions import Fraction

import pytest

from heckeconst import conjectures as C
from heckeconst import hecke
from heckeconst import series as S
from heckeconst.cli import run
from heckeconst.conjectures import ConjectureId
from heckeconst.exactnum import digit_sum, ord_p
from heckeconst.hecke import K, KBAR, HeckeParameters
from heckeconst.polyfit import evaluate, stabilized_fit
from heckeconst.series import LaurentSeries


def _fresh():
    hecke.clear_memo()
    C._fit_cache.clear()


def _summary(records):
    bad = [r for r in records if not r.passed]
    return f"{len(records) - len(bad)}/{len(records)} records pass" + (
        "; failing " + ", ".join(f"{r.id}@k={r.point.k},m={r.point.m}" for r in bad[:6]) if bad else ""
    )


def test_criterion_01_golden_m3(cache_dir, capsys, criterion):
    _fresh()
    t0 = time.perf_counter()
    code = run(["expand", "--m", "3", "--terms", "4", "--family", "bar", "--format", "json"])
    elapsed = time.perf_counter() - t0
    out = json.loads(capsys.readouterr().out)
    ok = (
        code == 0
        and out["indices"] == [-1, 0, 1, 2]
        and out["coefficients"] == ["1", "744", "196884", "21493760"]
        and elapsed < 1
    )
    criterion("1 golden m=3 expansion", ok, f"{out['coefficients']} in {elapsed:.3f}s")
    assert ok


def _e1_oracle(m):
    # first log-solution coefficient: e_1 = c_1 * (1/(2u_0) - 2) with c_1 = u_0 = ab
    ab = Fraction(1, 16) - Fraction(1, 4 * m * m)
    return Fraction(1, 2) - 2 * ab


def test_criterion_02_canonical_constant(criterion):
    _fresh()
    t0 = time.perf_counter()
    bad = []
    for m in range(3, 41):
        got = S.coefficient(hecke.canonical_expansion(m, 2).J, 0)
        if not (got == _e1_oracle(m) == Fraction(3, 8) + Fraction(1, 2 * m * m)):
            bad.append(m)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 10
    criterion("2 canonical constant", ok, f"m=3..40, mismatches {bad}, {elapsed:.2f}s")
    assert ok


def test_criterion_03_interpolation_anchor(criterion):
    _fresh()
    t0 = time.perf_counter()
    fit = stabilized_fit(lambda m: hecke.constant_term(KBAR, 1, m))
    elapsed = time.perf_counter() - t0
    ok = str(fit.polynomial) == "24*x^3 + 32*x" and evaluate(fit.polynomial, 3) == 744 and elapsed < 10
    criterion("3 interpolation anchor", ok, f"{fit.polynomial}, stabilized at M={fit.m_max}, {elapsed:.2f}s")
    assert ok


def test_criterion_04_conjecture_2_suite(criterion):
    _fresh()
    snap = C.load_snapshot()
    records = []
    for cid in (ConjectureId.C2_1, ConjectureId.C2_2, ConjectureId.C2_3, ConjectureId.C2_4):
        records += C.check_grid(cid, C.default_grid(cid), bfile=snap)
    listed = [snap[k] for k in range(1, 5)]
    nus = [C._cached_fit(k, hecke.canonical_expansion).nu for k in range(1, 5)]
    ok = all(r.passed for r in records) and listed == [1, 47, 2488, 138799] and nus == [24 * a for a in listed]
    criterion("4 C2 suite k=1..12", ok, _summary(records))
    assert ok


def test_criterion_05_corollary_m3(criterion):
    _fresh()
    t0 = time.perf_counter()
    bad = []
    for k in range(1, 25):
        A = S.coefficient(S.power(hecke.canonical_expansion(3, k + 1).jbar, k), 0)
        if ord_p(A, 2) != 3 * digit_sum(k, 2) or ord_p(A, 3) != digit_sum(k, 3):
            bad.append(k)
    records = C.check_grid(ConjectureId.COR1, C.default_grid(ConjectureId.COR1))
    elapsed = time.perf_counter() - t0
    ok = not bad and all(r.passed for r in records) and elapsed < 120
    criterion("5 COR1 at m=3", ok, f"k=1..24, mismatches {bad}, {_summary(records)}, {elapsed:.2f}s")
    assert ok


def test_criterion_06_nsz(criterion):
    _fresh()
    records = C.nsz_check(12)
    ok = len(records) == 12 and all(r.passed for r in records)
    criterion("6 NSZ ord_3(a_k)=0", ok, _summary(records))
    assert ok


GRID_IDS = ["C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"]


@pytest.mark.parametrize("cid", GRID_IDS)
def test_criterion_07_conjecture_grids(cid, criterion):
    records = C.check_grid(ConjectureId(cid), C.default_grid(ConjectureId(cid)), jobs=1)
    ok = all(r.passed for r in records)
    detail = _summary(records)
    if cid == "C8" and not ok:
        detail += " (computed t matches Catalan subscripts, see record notes)"
    criterion(f"7 {cid} grid", ok, detail)
    assert ok, "\n".join(f"{r.point}: computed {r.computed} predicted {r.predicted} {r.note}"
                         for r in records if not r.passed)


def test_criterion_08_conjecture_11(criterion):
    _fresh()
    pts = C.default_grid(ConjectureId.C11_1)
    hard = C.check_grid(ConjectureId.C11_1, pts)
    hard += [C.scaling_consistency(pt.k, pt.m, pt.p) for pt in pts]
    formula = all(r.computed == -2 - 2 * r.point.p for r in hard if r.id == "C11.1")
    soft = []
    for cid in (ConjectureId.C11_2, ConjectureId.C11_3):
        soft += C.check_grid(cid, C.default_grid(cid))
    soft_ok = bool(soft) and all(r.report_only and r.computed is not None for r in soft)
    ok = all(r.passed for r in hard) and formula and soft_ok
    n_soft = sum(r.passed for r in soft)
    criterion("8 C11.1 + scaling", ok, f"{_summary(hard)}; report-only {n_soft}/{len(soft)} pass")
    assert ok


def _random_series(rng, lower, n, lead=None):
    cs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
    cs[0] = Fraction(lead if lead is not None else rng.choice([1, -1, 2, Fraction(1, 3)]))
    return LaurentSeries.from_coeffs(cs, lower=lower)


def _naive_product(f, g):
    out = {}
    for i, a in f.items():
        for j, b in g.items():
            out[i + j] = out.get(i + j, 0) + a * b
    order = min(f.order + g.lower, g.order + f.lower)
    lower = f.lower + g.lower
    return LaurentSeries.from_coeffs([out.get(n, 0) for n in range(lower, order + 1)], lower=lower, order=order)


def test_criterion_09_series_engine(criterion):
    _fresh()
    checks = {}
    # reversion round trip on the nome relation and random series to order 40
    q = hecke.nome_relation(HeckeParameters.for_m(5), 40)
    ident = LaurentSeries.from_coeffs([1], lower=1, order=40)
    rng = random.Random(20240)
    rts = [q] + [_random_series(rng, 1, 40, lead=1) for _ in range(3)]
    checks["reversion"] = all(
        S.compose(f, S.revert(f)) == ident and S.revert(S.revert(f)) == f for f in rts
    )
    # power against repeated multiplication
    ok_pow = True
    for lower in (-1, 0, 1):
        f = _random_series(rng, lower, 9)
        acc = f
        for k in range(1, 7):
            ok_pow &= S.power(f, k) == acc
            acc = _naive_product(acc, f)
    checks["power"] = ok_pow
    # multinomial brute force, (k, m) = (3, 5)
    J = hecke.canonical_expansion(5, 4).J
    brute = Fraction(0)
    for a in range(-1, 3):
        for b in range(-1, 3):
            c = -a - b
            if -1 <= c <= 2:
                brute += S.coefficient(J, a) * S.coefficient(J, b) * S.coefficient(J, c)
    checks["multinomial"] = brute == hecke.constant_term(K, 3, 5)
    # bar / canonical scaling identity
    ok_scale = True
    for k in range(1, 5):
        for m in (3, 5, 8):
            s = 64 * m**3
            A = hecke.power_expansion(K, k, m, 6)
            B = hecke.power_expansion(KBAR, k, m, 6)
            ok_scale &= all(S.coefficient(B, n) == s ** (n + k) * S.coefficient(A, n) for n in range(-k, 7))
    checks["scaling"] = ok_scale
    ok = all(checks.values())
    criterion("9 series engine", ok, ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items()))
    assert ok


def test_criterion_10_held_out(criterion):
    _fresh()
    bad = []
    for k in range(1, 5):
        for n in (-1, 0, 1):
            def sample(m, k=k, n=n):
                return S.coefficient(hecke.power_expansion(KBAR, k, m, max(n, 0)), n)

            fit = stabilized_fit(sample)
            M = fit.m_max
            if any(evaluate(fit.polynomial, m) != sample(m) for m in range(M + 1, M + 5)):
                bad.append((k, n))
    ok = not bad
    criterion("10 held-out interpolation", ok, f"k<=4, n in -1,0,1; mismatches {bad}")
    assert ok


def _strip_timestamp(text):
    doc = json.loads(text)
    doc.pop("generatedAt")
    return json.dumps(doc, indent=2)


def test_criterion_11_determinism(tmp_path, monkeypatch, criterion):
    cache = tmp_path / "cache"
    monkeypatch.setenv("HECKECONST_CACHE_DIR", str(cache))
    texts, codes = [], []
    for label in ("cold", "warm"):
        _fresh()
        out = tmp_path / f"{label}.json"
        codes.append(run(["check", "--all", "--report", str(out)]))
        texts.append(out.read_text())
        if label == "cold":
            assert any(cache.iterdir())
    a, b = (_strip_timestamp(t) for t in texts)
    ok = a == b and codes[0] == codes[1]
    n = json.loads(texts[0])["summary"]["total"]
    criterion("11 determinism", ok, f"{n} records, cold/warm identical={a == b}, exit codes {codes}")
    assert ok
