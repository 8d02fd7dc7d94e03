"""Grid sweeps that certify the lemmas and theorems at desk scale.

Every suite returns a :class:`~binomtail.report.VerificationReport`.  All
"for every n" statements are certified only for the swept range, which is
recorded in the report's ``grid``.  A cell is never classified ``holds``
through an enclosure that straddles the target; such cells are refined up
to ``MAX_PRECISION`` and otherwise reported ``indeterminate``.

Suites split their grid by ``n`` and can fan the pieces out to worker
processes; cells are sorted before serialization, so reports do not depend
on the number of workers.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable

from gmpy2 import mpq

from . import bounds as B
from .enclosure import DEFAULT_PRECISION, MAX_PRECISION, Enclosure, refine
from .errors import DomainError, IndeterminateError
from .estimates import (
    MonoKind,
    binom_coeff_enclosure,
    binomial_correction_exponents,
    binomial_correction_floor,
    mono_expr,
    pmf_upper_bound,
    robbins_correction,
    robbins_factorial_bounds,
)
from .exact import (
    BinomialSpec,
    check_domination,
    Domination,
    median_info,
    mode,
    pmf,
    prob_exceeds_mean,
    tail_ge,
    upper_tails,
)
from .formatting import certified_truncation, truncate_decimal
from .report import Cell, VerificationReport, Verdict, rational_str

SUITES = ("lemma6", "theorem3", "theorem5", "eq2", "foundations", "soundness", "all")

# (event, n, p) triples where equality with a strict claim is expected.
EQUALITY_REGISTRY = frozenset({(B.Event.GT_MEAN, 2, Fraction(1, 2))})

QUARTER_ANCHORS = {(9, 4): "0.3655", (10, 4): "0.3668", (11, 4): "0.3678", (10, 5): "0.3769"}
H_ANCHORS = {(6, 1): "0.0391", (9, 2): "0.0392", (9, 3): "0.0392", (10, 4): "0.0442", (10, 5): "0.0394"}
Q_ANCHORS = {(7, 2): "0.1082", (8, 2): "0.1138", (8, 3): "0.1374", (9, 4): "0.1573"}
CLOSED_FORM_MINIMA = {2: (3, "0.0370"), 3: (4, "0.0507"), 4: (5, "0.0579")}

FOUNDATION_CAPS = {"robbins": 500, "binom": 150, "pmf-bound": 200, "median-mode": 200, "domination": 60}
DOMINATION_GRID = tuple(Fraction(s) for s in ("0", "1/10", "2/7", "1/3", "1/2", "7/10", "9/10", "1"))
LEMMA3_ALPHAS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))
LEMMA3_X_FROM_ONE = tuple(1 + Fraction(j, 20) for j in range(201))
LEMMA3_X_POSITIVE = tuple(Fraction(j, 20) for j in range(1, 221))
SMALL_P_MULTIPLIERS = (288, 300, 500, 750, 999)


def offlattice_points(n: int, k: int) -> list[Fraction]:
    """Five deterministic p with floor(np) = k strictly inside the bin."""
    return [Fraction(6 * k + j, 6 * n) for j in range(1, 6)]


# -- cell helpers --------------------------------------------------------------


class _Bits:
    """Running maximum of the precision needed by a worker."""

    def __init__(self, start: int):
        self.max = start

    def see(self, bits: int):
        self.max = max(self.max, bits)


def _lower_bound_verdict(
    compute: Callable[[int], Enclosure],
    exact: Fraction,
    strict: bool,
    equality_expected: bool,
    bits: int,
    tracker: _Bits,
) -> tuple[Verdict, Enclosure]:
    """Classify ``bound <= exact`` (``<`` when strict) for an enclosed bound."""

    def decide(enc: Enclosure):
        if enc.lo > exact:
            return Verdict.VIOLATED
        if enc.hi < exact:
            return Verdict.HOLDS
        if enc.is_exact:  # equal to exact
            if strict and not equality_expected:
                return Verdict.VIOLATED
            return Verdict.HOLDS_WITH_EQUALITY
        if enc.hi == exact and not strict:
            return Verdict.HOLDS
        return None

    try:
        verdict, enc, used = refine(compute, decide, bits)
    except IndeterminateError as err:
        tracker.see(MAX_PRECISION)
        return Verdict.INDETERMINATE, err.enclosure
    tracker.see(used)
    return verdict, enc


def _sign_verdict(
    compute: Callable[[int], Enclosure], want: int, bits: int, tracker: _Bits, allow_zero: bool = False
) -> tuple[Verdict, Enclosure]:
    """Certify that the enclosed value has sign ``want`` (+1 or -1)."""

    def decide(enc: Enclosure):
        sign = enc.compare(0)
        if sign is None:
            return None
        if sign == want:
            return Verdict.HOLDS
        if sign == 0 and allow_zero:
            return Verdict.HOLDS_WITH_EQUALITY
        return Verdict.VIOLATED

    try:
        verdict, enc, used = refine(compute, decide, bits)
    except IndeterminateError as err:
        tracker.see(MAX_PRECISION)
        return Verdict.INDETERMINATE, err.enclosure
    tracker.see(used)
    return verdict, enc


def _truncation_places(compute: Callable[[int], Enclosure], places: int, bits: int,
                       tracker: _Bits) -> tuple[str | None, Enclosure]:
    try:
        text, enc, used = refine(compute, lambda e: certified_truncation(e, places), bits)
    except IndeterminateError as err:
        tracker.see(MAX_PRECISION)
        return None, err.enclosure
    tracker.see(used)
    return text, enc


def _truncation(compute: Callable[[int], Enclosure], bits: int, tracker: _Bits) -> tuple[str | None, Enclosure]:
    return _truncation_places(compute, 4, bits, tracker)


def _exact_verdict(ok: bool) -> Verdict:
    return Verdict.HOLDS if ok else Verdict.VIOLATED


def _anchor_cell(check: str, n: int, k: int, got: str | None, expected: str, extra: dict) -> Cell:
    witness = {"expected": expected, "truncated": got if got is not None else "undecided", **extra}
    if got is None:
        verdict = Verdict.INDETERMINATE
    else:
        verdict = _exact_verdict(got == expected)
    return Cell(check, {"n": n, "k": k}, verdict, witness)


# -- parallel driver -----------------------------------------------------------


def _call(task):
    fn, args = task
    return fn(*args)


def _run(tasks: list, jobs: int) -> tuple[list[Cell], int]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_call, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_call(t) for t in tasks]
    cells: list[Cell] = []
    bits = 0
    for chunk, used in results:
        cells.extend(chunk)
        bits = max(bits, used)
    return cells, bits


def _report(suite: str, grid: dict, tasks: list, jobs: int, bits: int, started: float, timing: bool):
    cells, used = _run(tasks, jobs)
    duration = round(time.perf_counter() - started, 3) if timing else None
    return VerificationReport(suite, grid, cells, max(bits, used), duration)


def _require(n_max: int, least: int):
    if isinstance(n_max, bool) or not isinstance(n_max, int) or n_max < least:
        raise DomainError(f"n_max must be an integer >= {least}, got {n_max!r}")


def _scope(n_max: int) -> str:
    return f"claims for all n are certified for n <= {n_max} only"


# -- g below the exceedance probability ----------------------------------------


def _lemma6_worker(n: int, bits: int):
    tracker = _Bits(bits)
    cells = []
    for k in range(1, n):
        points = [("lemma6/lattice", Fraction(k, n))] + [("lemma6/offlattice", p) for p in offlattice_points(n, k)]
        for check, p in points:
            exact = prob_exceeds_mean(BinomialSpec(n, p))
            verdict, enc = _lower_bound_verdict(
                lambda b: B.bound_g(n, k, b).value, exact, True, False, bits, tracker
            )
            witness = {"exact": rational_str(exact), "bound": enc.to_json()}
            cells.append(Cell(check, {"n": n, "k": k, "p": rational_str(p)}, verdict, witness))
    return cells, tracker.max


def verify_lemma6(n_max: int, bits: int = DEFAULT_PRECISION, jobs: int = 1, timing: bool = False):
    """g(n, k) < Pr[X > np] for k = floor(np), on lattice and off-lattice p."""
    _require(n_max, 2)
    started = time.perf_counter()
    grid = {
        "n": [2, n_max],
        "k": "1..n-1",
        "p": "k/n and (6k+j)/(6n) for j=1..5",
        "scope": _scope(n_max),
    }
    tasks = [(_lemma6_worker, (n, bits)) for n in range(2, n_max + 1)]
    return _report("lemma6", grid, tasks, jobs, bits, started, timing)


# -- the 1/4 bound -------------------------------------------------------------


def proof_branch(n: int, k: int) -> str:
    """Which step of the quarter-bound case analysis covers the lattice cell (n, k)."""
    if k == n - 1 and n >= 2:
        return "k=n-1"
    if k == 1 and n >= 3:
        return "k=1"
    if k == n - 2 and n >= 4:
        return "k=n-2"
    if k == 2 and n >= 5:
        return "k=2"
    if k == n - 3 and n >= 6:
        return "k=n-3"
    if n >= 20 and 3 <= k <= n - 3:
        return "g(n,k)>1/4 via g(20,3)"
    if k == 3 and n >= 7:
        return "k=3"
    if k == n - 4 and n >= 8:
        return "k=n-4"
    for n0, k0 in ((12, 4), (11, 5), (11, 6), (12, 8)):
        j = k - k0
        if j >= 0 and n - n0 - j >= 0:
            return f"g-monotone from ({n0},{k0})"
    if (n, k) in QUARTER_ANCHORS:
        return "direct evaluation"
    return "uncovered"


def _g(n: int, k: int, b: int) -> Enclosure:
    return B.bound_g(n, k, b).value


def _theorem3_worker(n: int, bits: int):
    tracker = _Bits(bits)
    cells = []
    quarter = B.QUARTER
    for k in range(1, n):
        exact = tail_ge(BinomialSpec(n, Fraction(k, n)), k + 1)
        if exact > quarter:
            verdict = Verdict.HOLDS
        elif exact == quarter and (B.Event.GT_MEAN, n, Fraction(k, n)) in EQUALITY_REGISTRY:
            verdict = Verdict.HOLDS_WITH_EQUALITY
        else:
            verdict = Verdict.VIOLATED
        cells.append(Cell("theorem3/lattice", {"n": n, "k": k}, verdict,
                          {"exact": rational_str(exact), "branch": proof_branch(n, k)}))

    # p in [ln(4/3)/n, 1/n): Pr[X > np] = 1 - (1-p)^n
    for m in SMALL_P_MULTIPLIERS:
        p = Fraction(m, 1000 * n)
        exact = prob_exceeds_mean(BinomialSpec(n, p))
        identity = exact == 1 - (1 - p) ** n
        valid = B.bound_quarter(n, p, bits).valid
        ok = identity and valid and exact > quarter
        cells.append(Cell("theorem3/small-p", {"n": n, "p": rational_str(p)}, _exact_verdict(ok),
                          {"exact": rational_str(exact), "in_domain": valid, "identity": identity}))
    below = B.bound_quarter(n, Fraction(287, 1000 * n), bits).valid
    cells.append(Cell("theorem3/threshold", {"n": n, "p": rational_str(Fraction(287, 1000 * n))},
                      _exact_verdict(not below), {"in_domain": below}))

    # shape of k -> g(n, k) used to lift g(20,3) > 1/4 to all larger cells
    for k in range(2, n - 1):
        verdict, enc = _sign_verdict(
            lambda b: _g(n, k - 1, b) + _g(n, k + 1, b) - 2 * _g(n, k, b), -1, bits, tracker, allow_zero=True
        )
        cells.append(Cell("theorem3/g-concave", {"n": n, "k": k}, verdict, {"second_difference": enc.to_json()}))
    if n >= 2:
        for k in range(1, n):
            v1, e1 = _sign_verdict(lambda b: _g(n + 1, k, b) - _g(n, k, b), 1, bits, tracker)
            v2, e2 = _sign_verdict(lambda b: _g(n + 1, k + 1, b) - _g(n, k, b), 1, bits, tracker)
            verdict = v1 if v1 is not Verdict.HOLDS else v2
            cells.append(Cell("theorem3/g-monotone", {"n": n, "k": k}, verdict,
                              {"g(n+1,k)-g(n,k)": e1.to_json(), "g(n+1,k+1)-g(n,k)": e2.to_json()}))
    return cells, tracker.max


def _theorem3_fixed(bits: int):
    tracker = _Bits(bits)
    cells = []
    for (n, k), expected in QUARTER_ANCHORS.items():
        exact = tail_ge(BinomialSpec(n, Fraction(k, n)), k + 1)
        cells.append(_anchor_cell("theorem3/anchor", n, k, truncate_decimal(exact), expected,
                                  {"exact": rational_str(exact)}))
    for (n, k), threshold in (((20, 3), B.QUARTER), ((20, 17), B.QUARTER), ((12, 4), B.QUARTER),
                              ((12, 8), B.QUARTER), ((11, 5), B.QUARTER), ((11, 6), B.QUARTER),
                              ((3, 1), Fraction(113, 10000))):
        verdict, enc = _sign_verdict(lambda b: _g(n, k, b) - threshold, 1, bits, tracker)
        cells.append(Cell("theorem3/g-anchor", {"n": n, "k": k}, verdict,
                          {"threshold": rational_str(threshold), "g": _g(n, k, bits).to_json()}))
    text, enc = _truncation(lambda b: _g(20, 3, b), bits, tracker)
    cells.append(_anchor_cell("theorem3/g-truncation", 20, 3, text, "0.2501", {"g": enc.to_json()}))
    return cells, tracker.max


def verify_theorem3(n_max: int, bits: int = DEFAULT_PRECISION, jobs: int = 1, timing: bool = False):
    """Pr[Bin(n, k/n) >= k+1] >= 1/4 with equality only at (2, 1), plus proof replay."""
    _require(n_max, 2)
    started = time.perf_counter()
    grid = {
        "n": [1, n_max],
        "lattice": "k in 1..n-1, p = k/n",
        "small_p": "p = m/(1000 n), m in " + ",".join(map(str, SMALL_P_MULTIPLIERS)),
        "anchors": sorted(f"{n},{k}" for n, k in QUARTER_ANCHORS),
        "scope": _scope(n_max),
    }
    tasks = [(_theorem3_fixed, (bits,))] + [(_theorem3_worker, (n, bits)) for n in range(1, n_max + 1)]
    return _report("theorem3", grid, tasks, jobs, bits, started, timing)


# -- the +1 bound --------------------------------------------------------------


def closed_form_q(n: int, gap: int) -> Fraction:
    """Closed forms of Pr[Bin(n, k/n) >= k+2] for k = n - gap, gap in {2, 3, 4}."""
    r = 1 - Fraction(gap, n)
    if gap == 2:
        return r**n
    if gap == 3:
        return r**n + 3 * r ** (n - 1)
    if gap == 4:
        return r**n + 4 * r ** (n - 1) + 8 * (1 - Fraction(1, n)) * r ** (n - 2)
    raise ValueError(gap)


def _theorem5_worker(n: int, bits: int):
    tracker = _Bits(bits)
    cells = []
    for k in range(1, n - 1):
        exact = tail_ge(BinomialSpec(n, Fraction(k, n)), k + 2)
        if exact > B.PLUSONE_CONSTANT:
            verdict = Verdict.HOLDS
        elif exact == B.PLUSONE_CONSTANT:
            verdict = Verdict.HOLDS_WITH_EQUALITY
        else:
            verdict = Verdict.VIOLATED
        cells.append(Cell("theorem5/lattice", {"n": n, "k": k}, verdict, {"exact": rational_str(exact)}))
        for variant in ("a", "b"):
            v, enc = _lower_bound_verdict(
                lambda b: B.bound_plusone(n, k, variant, b).value, exact, False, False, bits, tracker
            )
            cells.append(Cell(f"theorem5/variant-{variant}", {"n": n, "k": k}, v, {"bound": enc.to_json()}))
        if n + 1 >= k + 3:
            v, enc = _sign_verdict(lambda b: B.h_value(n + 1, k, b) - B.h_value(n, k, b), 1, bits, tracker)
            cells.append(Cell("theorem5/h-increasing-in-n", {"n": n, "k": k}, v, {"difference": enc.to_json()}))
    if n >= 10:
        v, enc = _sign_verdict(lambda b: B.h_value(n + 1, n - 4, b) - B.h_value(n, n - 5, b), 1, bits, tracker)
        cells.append(Cell("theorem5/h-diagonal", {"n": n, "k": n - 5}, v, {"difference": enc.to_json()}))
    for gap in (2, 3, 4):
        if n >= gap + 1:
            k = n - gap
            exact = tail_ge(BinomialSpec(n, Fraction(k, n)), k + 2)
            form = closed_form_q(n, gap)
            ok = exact == form and closed_form_q(n + 1, gap) > form
            cells.append(Cell(f"theorem5/closed-form-n-{gap}", {"n": n, "k": k}, _exact_verdict(ok),
                              {"exact": rational_str(exact)}))
    return cells, tracker.max


def _theorem5_fixed(bits: int):
    tracker = _Bits(bits)
    cells = []
    for (n, k), expected in H_ANCHORS.items():
        text, enc = _truncation(lambda b: B.h_value(n, k, b), bits, tracker)
        above, _ = _sign_verdict(lambda b: B.h_value(n, k, b) - B.PLUSONE_CONSTANT, 1, bits, tracker)
        cell = _anchor_cell("theorem5/h-anchor", n, k, text, expected, {"h": enc.to_json()})
        if above is not Verdict.HOLDS and cell.verdict is Verdict.HOLDS:
            cell = Cell(cell.check, cell.params, above, cell.witness)
        cells.append(cell)
    for (n, k), expected in Q_ANCHORS.items():
        exact = tail_ge(BinomialSpec(n, Fraction(k, n)), k + 2)
        cells.append(_anchor_cell("theorem5/q-anchor", n, k, truncate_decimal(exact), expected,
                                  {"exact": rational_str(exact)}))
    for gap, (n, expected) in CLOSED_FORM_MINIMA.items():
        value = closed_form_q(n, gap)
        cells.append(_anchor_cell(f"theorem5/closed-form-min-{gap}", n, n - gap, truncate_decimal(value),
                                  expected, {"exact": rational_str(value)}))
    return cells, tracker.max


def verify_theorem5(n_max: int, bits: int = DEFAULT_PRECISION, jobs: int = 1, timing: bool = False):
    """Pr[Bin(n, k/n) >= k+2] >= 37/1000 and the a/b variants, plus proof replay."""
    _require(n_max, 3)
    started = time.perf_counter()
    grid = {
        "n": [3, n_max],
        "lattice": "k in 1..n-2, p = k/n",
        "h_anchors": sorted(f"{n},{k}" for n, k in H_ANCHORS),
        "q_anchors": sorted(f"{n},{k}" for n, k in Q_ANCHORS),
        "scope": _scope(n_max),
    }
    tasks = [(_theorem5_fixed, (bits,))] + [(_theorem5_worker, (n, bits)) for n in range(3, n_max + 1)]
    return _report("theorem5", grid, tasks, jobs, bits, started, timing)


# -- shift inequality ----------------------------------------------------------


def _shift_sides(n: int, k: int) -> tuple[Fraction, Fraction]:
    left = tail_ge(BinomialSpec(n, Fraction(k, n)), k + 1)
    right = tail_ge(BinomialSpec(n, Fraction(k - 1, n)), k)
    return left, right


def _eq2_worker(n: int):
    cells = []
    for k in range(2, n // 2 + 1):
        left, right = _shift_sides(n, k)
        cells.append(Cell("eq2/lower-range", {"n": n, "k": k}, B.rigollet_shift_check(n, k),
                          {"left": rational_str(left), "right": rational_str(right)}))
    return cells, 0


def find_shift_witnesses(search_limit: int = 60) -> dict[str, tuple[int, int] | None]:
    """First (n, k), k > n/2, where the shift inequality fails, and where its reverse fails."""
    found: dict[str, tuple[int, int] | None] = {"violation": None, "reverse_violation": None}
    for n in range(4, search_limit + 1):
        for k in range(n // 2 + 1, n):
            left, right = _shift_sides(n, k)
            if left < right and found["violation"] is None:
                found["violation"] = (n, k)
            if left > right and found["reverse_violation"] is None:
                found["reverse_violation"] = (n, k)
        if all(found.values()):
            break
    return found


def _eq2_search(search_limit: int):
    cells = []
    for kind, where in find_shift_witnesses(search_limit).items():
        check = f"eq2/witness-{kind.replace('_', '-')}"
        if where is None:
            cells.append(Cell(check, {"search_limit": search_limit}, Verdict.VIOLATED, {"found": "none"}))
            continue
        n, k = where
        left, right = _shift_sides(n, k)
        cells.append(Cell(check, {"n": n, "k": k}, Verdict.HOLDS,
                          {"left": rational_str(left), "right": rational_str(right)}))
    return cells, 0


def verify_eq2(n_max: int, bits: int = DEFAULT_PRECISION, jobs: int = 1, timing: bool = False,
               search_limit: int = 60):
    """The shift inequality for k in [2..n/2] and witnesses that it fails both ways above n/2."""
    _require(n_max, 4)
    started = time.perf_counter()
    grid = {
        "n": [4, n_max],
        "k": "2..floor(n/2)",
        "witness_search": f"n in 4..{search_limit}, k in floor(n/2)+1..n-1, first witness of each kind",
        "scope": _scope(n_max),
    }
    tasks = [(_eq2_search, (search_limit,))] + [(_eq2_worker, (n,)) for n in range(4, n_max + 1)]
    return _report("eq2", grid, tasks, jobs, bits, started, timing)


# -- foundations ---------------------------------------------------------------


def _robbins_worker(n: int, bits: int):
    tracker = _Bits(bits)
    try:
        fb = robbins_factorial_bounds(n, bits)
    except IndeterminateError as err:
        tracker.see(MAX_PRECISION)
        return [Cell("foundations/robbins", {"n": n}, Verdict.INDETERMINATE,
                     {"lower": err.enclosure.lower.to_json(), "upper": err.enclosure.upper.to_json()})], tracker.max
    tracker.see(fb.lower.precision_bits)
    r_lo, r_hi = robbins_correction(n, bits)
    ok = fb.separates(math.factorial(n)) and 1 < r_lo.lo and r_lo.hi < r_hi.lo
    return [Cell("foundations/robbins", {"n": n}, _exact_verdict(ok),
                 {"lower": fb.lower.to_json(), "upper": fb.upper.to_json()})], tracker.max


def _binom_worker(n: int, bits: int):
    tracker = _Bits(bits)
    floor_exp = mpq(-1, 6) + mpq(1, 25)
    cells = []
    for k in range(1, n):
        lo_exp, hi_exp = binomial_correction_exponents(n, k)
        try:
            lower, upper = binom_coeff_enclosure(n, k, bits)
        except IndeterminateError:
            tracker.see(MAX_PRECISION)
            cells.append(Cell("foundations/binom", {"n": n, "k": k}, Verdict.INDETERMINATE, {}))
            continue
        tracker.see(lower.precision_bits)
        # lower correction never drops below exp(-1/6 + 1/25); equality only at (2, 1)
        floor_ok = lo_exp > floor_exp or (lo_exp == floor_exp and (n, k) == (2, 1))
        ok = lower.hi < math.comb(n, k) < upper.lo and floor_ok and hi_exp < 0 and lo_exp < hi_exp
        cells.append(Cell("foundations/binom", {"n": n, "k": k}, _exact_verdict(ok),
                          {"lower": lower.to_json(), "upper": upper.to_json()}))
    return cells, tracker.max


def _pmf_bound_worker(n: int, bits: int):
    tracker = _Bits(bits)
    cells = []
    for k in range(1, n):
        points = [Fraction(k, n), Fraction(3 * k - 1, 3 * n), Fraction(3 * k + 1, 3 * n)]
        worst = max(pmf(BinomialSpec(n, p), k) for p in points)
        lattice = pmf(BinomialSpec(n, points[0]), k)
        verdict, enc = _lower_bound_verdict(lambda b: -pmf_upper_bound(n, k, b), -worst, True, False, bits, tracker)
        if verdict is Verdict.HOLDS and worst != lattice:
            verdict = Verdict.VIOLATED  # mass at k should peak at p = k/n
        cells.append(Cell("foundations/pmf-bound", {"n": n, "k": k}, verdict,
                          {"pmf": rational_str(lattice), "bound": (-enc).to_json()}))
    return cells, tracker.max


def _median_mode_worker(n: int):
    cells = []
    for k in range(1, n):
        spec = BinomialSpec(n, Fraction(k, n))
        m, unique = median_info(spec)
        at_least_half = tail_ge(spec, k) >= Fraction(1, 2)
        ok = m == k and unique and at_least_half and mode(spec) == k
        cells.append(Cell("foundations/median-mode", {"n": n, "k": k}, _exact_verdict(ok),
                          {"median": m, "unique": unique, "mode": mode(spec)}))
    return cells, 0


def _domination_worker(n: int):
    cells = []
    grid = DOMINATION_GRID
    for i, p in enumerate(grid):
        for q in grid[i + 1:]:
            params = {"n": n, "p": rational_str(p), "q": rational_str(q)}
            bad = [t for t in range(1, n + 1) if check_domination(n, p, q, t) is not Domination.STRICT]
            witness = {"t_range": f"1..{n}"}
            if bad:
                witness["first_failure_t"] = bad[0]
            cells.append(Cell("foundations/domination", params, _exact_verdict(not bad), witness))
            at_zero = check_domination(n, p, q, 0)
            verdict = Verdict.HOLDS_WITH_EQUALITY if at_zero is Domination.EQUAL else Verdict.VIOLATED
            cells.append(Cell("foundations/domination-t0", params, verdict, {"t": 0, "tails": "1 and 1"}))
    return cells, 0


def _lemma3_worker(kind: str, alpha: Fraction, bits: int):
    tracker = _Bits(bits)
    kind = MonoKind(kind)
    xs = LEMMA3_X_POSITIVE if kind is MonoKind.POW_DEC else LEMMA3_X_FROM_ONE
    want = 1 if kind is MonoKind.POW_INC else -1
    cells = []
    for x0, x1 in zip(xs, xs[1:]):

        def compute(b, x0=x0, x1=x1):
            return mono_expr(kind, x1, alpha, b) - mono_expr(kind, x0, alpha, b)

        verdict, enc = _sign_verdict(compute, want, bits, tracker, allow_zero=True)
        params = {"kind": kind.value, "alpha": rational_str(alpha), "x0": rational_str(x0), "x1": rational_str(x1)}
        cells.append(Cell("foundations/lemma3", params, verdict, {"difference": enc.to_json()}))
    return cells, tracker.max


def _foundation_constants(bits: int):
    tracker = _Bits(bits)
    text, enc = _truncation_places(binomial_correction_floor, 8, bits, tracker)
    cells = [_anchor_cell("foundations/binom-floor-constant", 2, 1, text, "0.88102729", {"value": enc.to_json()})]
    strict = check_domination(2, Fraction(3, 10), Fraction(1, 2), 1) is Domination.STRICT
    cells.append(Cell("foundations/domination-example", {"n": 2, "p": "3/10", "q": "1/2", "t": 1},
                      _exact_verdict(strict)))
    return cells, tracker.max


def foundation_limits(n_max: int) -> dict[str, int]:
    return {name: min(cap, n_max) for name, cap in FOUNDATION_CAPS.items()}


def verify_foundations(n_max: int, bits: int = DEFAULT_PRECISION, jobs: int = 1, timing: bool = False):
    """Domination, median/mode facts, Stirling-type estimates and monotone expressions.

    Each family is swept up to ``min(n_max, cap)``; caps are in ``FOUNDATION_CAPS``.
    """
    _require(n_max, 2)
    started = time.perf_counter()
    lim = foundation_limits(n_max)
    grid = {
        "limits": lim,
        "domination_p_grid": [rational_str(p) for p in DOMINATION_GRID],
        "lemma3": {"alpha": [rational_str(a) for a in LEMMA3_ALPHAS],
                   "x_from_one": "1 + j/20, j=0..200", "x_positive": "j/20, j=1..220"},
        "scope": _scope(n_max),
    }
    tasks: list = [(_foundation_constants, (bits,))]
    tasks += [(_robbins_worker, (n, bits)) for n in range(1, lim["robbins"] + 1)]
    tasks += [(_binom_worker, (n, bits)) for n in range(2, lim["binom"] + 1)]
    tasks += [(_pmf_bound_worker, (n, bits)) for n in range(2, lim["pmf-bound"] + 1)]
    tasks += [(_median_mode_worker, (n,)) for n in range(2, lim["median-mode"] + 1)]
    tasks += [(_domination_worker, (n,)) for n in range(1, lim["domination"] + 1)]
    tasks += [(_lemma3_worker, (kind.value, a, bits)) for kind in (MonoKind.POW_INC, MonoKind.POW_DEC)
              for a in LEMMA3_ALPHAS]
    tasks += [(_lemma3_worker, (MonoKind.PAIR_SUM.value, Fraction(0), bits))]
    return _report("foundations", grid, tasks, jobs, bits, started, timing)


# -- bound soundness -----------------------------------------------------------


def _soundness_bounds(n: int, p: Fraction, bits: int) -> list[B.BoundValue]:
    out = []
    k = BinomialSpec(n, p).floor_mean
    attempts = [
        lambda: B.bound_rigollet_tong(n, p, bits),
        lambda: B.bound_greenberg_mohri(n, p, bits),
        lambda: B.bound_pelekis_ramon(n, p, bits),
        lambda: B.bound_quarter(n, p, bits),
        lambda: B.bound_small_p(n, p, bits),
    ]
    if 1 <= k <= n - 1 and p < 1:
        attempts.append(lambda: B.bound_g(n, k, bits))
    if n >= 3 and 1 <= k <= n - 2:
        attempts += [lambda v=v: B.bound_plusone(n, k, v, bits) for v in "abc"]
    if 0 < p < Fraction(1, n):
        attempts.append(lambda: B.bound_plusone_small_p(n, n * p, bits))
    for attempt in attempts:
        try:
            bv = attempt()
        except DomainError:
            continue
        if bv.valid:
            out.append(bv)
    return out


# bounds on X >= E[X] that are also checked against the stronger event X > E[X]
_CROSS_EVENT = ("rt11", "pr16")


def _soundness_worker(n: int, bits: int):
    tracker = _Bits(bits)
    cells = []
    for a in range(0, 6 * n + 1):
        p = Fraction(a, 6 * n)
        spec = BinomialSpec(n, p)
        tails = upper_tails(spec)
        targets = {
            B.Event.GE_MEAN: tails[spec.ceil_mean],
            B.Event.GT_MEAN: tails[spec.floor_mean + 1],
            B.Event.GT_MEAN_PLUS_ONE: tails[min(spec.floor_mean + 2, n + 1)],
        }
        checks = []
        for bv in _soundness_bounds(n, p, bits):
            events = [bv.event] + ([B.Event.GT_MEAN] if bv.bound_id in _CROSS_EVENT else [])
            for event in events:
                checks.append((bv, event, targets[event], None))
        if 0 < p < 1:
            ts = range(spec.floor_mean + 1, n)
            if a % 6:
                ts = ts[:3]
            for t in ts:
                checks.append((B.bound_pelekis_k(n, p, t, bits), B.Event.GE_T, tails[t], t))
        failures = {}
        worst = Verdict.HOLDS
        checked = []
        for bv, event, exact, t in checks:
            expected = (event, n, p) in EQUALITY_REGISTRY
            verdict, enc = _lower_bound_verdict(
                lambda b, bv=bv, t=t: _recompute(bv, n, p, t, b), exact, bv.strict, expected, bits, tracker
            )
            label = bv.bound_id if t is None else f"{bv.bound_id}@t={t}"
            if event is not bv.event:
                label += f"/{event.value}"
            checked.append(label)
            if verdict in (Verdict.VIOLATED, Verdict.INDETERMINATE):
                failures[label] = {"verdict": verdict.value, "bound": enc.to_json(), "exact": rational_str(exact)}
            worst = _worse(worst, verdict)
        witness = {"checked": len(checked)}
        if failures:
            witness["failures"] = failures
        cells.append(Cell("soundness/grid", {"n": n, "p": rational_str(p)}, worst, witness))
    return cells, tracker.max


_SEVERITY = {Verdict.HOLDS: 0, Verdict.HOLDS_WITH_EQUALITY: 1, Verdict.INDETERMINATE: 2, Verdict.VIOLATED: 3}


def _worse(a: Verdict, b: Verdict) -> Verdict:
    return a if _SEVERITY[a] >= _SEVERITY[b] else b


def _recompute(bv: B.BoundValue, n: int, p: Fraction, t: int | None, bits: int) -> Enclosure:
    if bv.value.is_exact or bits == bv.value.precision_bits:
        return bv.value
    bid = bv.bound_id
    if bid == "pelekis-k":
        return B.bound_pelekis_k(n, p, t, bits).value
    if bid == "plusone-small-p":
        return B.bound_plusone_small_p(n, n * p, bits).value
    k = BinomialSpec(n, p).floor_mean
    return B.evaluate_bound(bid, n, p=p, k=k if bid != "small-p" else None, bits=bits).value


def verify_soundness(n_max: int, bits: int = DEFAULT_PRECISION, jobs: int = 1, timing: bool = False):
    """Every valid bound lies below the exact probability of its event."""
    _require(n_max, 1)
    started = time.perf_counter()
    grid = {
        "n": [1, n_max],
        "p": "a/(6n), a=0..6n",
        "pelekis_t": "all t in (np, n-1] at lattice p; first three otherwise",
        "cross_event": list(_CROSS_EVENT),
        "scope": _scope(n_max),
    }
    tasks = [(_soundness_worker, (n, bits)) for n in range(1, n_max + 1)]
    return _report("soundness", grid, tasks, jobs, bits, started, timing)


# -- everything ----------------------------------------------------------------


def verify_all(n_max: int, bits: int = DEFAULT_PRECISION, jobs: int = 1, timing: bool = False):
    _require(n_max, 3)
    started = time.perf_counter()
    parts = [
        verify_lemma6(n_max, bits, jobs),
        verify_theorem3(n_max, bits, jobs),
        verify_theorem5(n_max, bits, jobs),
        verify_eq2(max(n_max, 4), bits, jobs),
        verify_foundations(n_max, bits, jobs),
        verify_soundness(n_max, bits, jobs),
    ]
    cells = [c for r in parts for c in r.cells]
    grid = {r.suite: r.grid for r in parts}
    duration = round(time.perf_counter() - started, 3) if timing else None
    return VerificationReport("all", grid, cells, max(r.precision for r in parts), duration)


RUNNERS = {
    "lemma6": verify_lemma6,
    "theorem3": verify_theorem3,
    "theorem5": verify_theorem5,
    "eq2": verify_eq2,
    "foundations": verify_foundations,
    "soundness": verify_soundness,
    "all": verify_all,
}
