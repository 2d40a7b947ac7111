"""Closed forms and recursions for the Nurikabe counts, plus oracle comparison.

Every formula here is evaluated in exact integer arithmetic.  ``verify``
lines each formula up against exhaustive enumeration and records, rather
than hides, any disagreement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .enumeration import Constraint, count_valid, refined_rectangle_counts
from .rules import Rule
from .surface import BUILDERS, SquareTiledSurface


class FormulaId(enum.Enum):
    N_closed = "N_closed"
    J_closed = "J_closed"
    Nk1_closed = "Nk1_closed"
    Nk2_closed = "Nk2_closed"
    a_rec3 = "a_rec3"
    a_rec2 = "a_rec2"
    b_rec = "b_rec"
    square_thm = "square_thm"
    loop_mobius_thm = "loop_mobius_thm"
    loop_klein_thm = "loop_klein_thm"
    loop_klein_lemma_chain = "loop_klein_lemma_chain"
    A213387_form = "A213387_form"
    A123203_form = "A123203_form"

    @classmethod
    def parse(cls, value: Union[str, "FormulaId"]) -> "FormulaId":
        if isinstance(value, FormulaId):
            return value
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown formula {value!r}; choose from {names}") from None


class DomainError(ValueError):
    """Index outside the range where a formula is defined."""


def _need(cond: bool, formula: str, n: int, what: str) -> None:
    if not cond:
        raise DomainError(f"{formula} undefined at n={n}: requires {what}")


def rectangle_count(k: int) -> int:
    """Number of ``2 x k`` Nurikabe rectangles, ``6*2^k - 3k - 5``."""
    return 6 * 2**k - 3 * k - 5


def jacobsthal(k: int) -> int:
    _need(k >= 0, "J_closed", k, "k >= 0")
    return (2**k - (-1) ** k) // 3


@lru_cache(maxsize=None)
def a_rec3(k: int) -> int:
    """Third-order homogeneous recursion for the one-water-last-column count."""
    _need(k >= 1, "a_rec3", k, "k >= 1")
    if k <= 3:
        return (2, 6, 14)[k - 1]
    return 2 * a_rec3(k - 1) + a_rec3(k - 2) - 2 * a_rec3(k - 3)


@lru_cache(maxsize=None)
def a_rec2(k: int) -> int:
    _need(k >= 1, "a_rec2", k, "k >= 1")
    if k <= 2:
        return (2, 6)[k - 1]
    return a_rec2(k - 1) + 2 * a_rec2(k - 2) + 4


@lru_cache(maxsize=None)
def b_rec(k: int) -> int:
    """Bicolumn recursion ``b_k = b_{k-1} + 2 b_{k-2}`` seeded with ``b_2 = b_3 = 2``."""
    _need(k >= 2, "b_rec", k, "k >= 2")
    if k <= 3:
        return 2
    return b_rec(k - 1) + 2 * b_rec(k - 2)


def square_count(n: int) -> int:
    _need(n >= 1, "square_thm", n, "n >= 1")
    k, odd = divmod(n, 2)
    if odd:
        return rectangle_count(k) + 3 * 2**k - 2
    return rectangle_count(k)


def loop_mobius_count(n: int) -> int:
    _need(n >= 1, "loop_mobius_thm", n, "n >= 1")
    k, odd = divmod(n, 2)
    if odd:
        return rectangle_count(k) + 2 ** (k + 1) - 1
    return rectangle_count(k) - 2**k + 1


def loop_klein_count(n: int) -> int:
    """Closed-form loop-rule Klein/projective count, small cases tabulated."""
    _need(n >= 1, "loop_klein_thm", n, "n >= 1")
    if n <= 4:
        return (1, 3, 6, 7)[n - 1]
    k, odd = divmod(n, 2)
    if odd:
        return rectangle_count(k) - 2 * jacobsthal(k) + 2**k
    return rectangle_count(k) + 2 * jacobsthal(k - 1) - 2 ** (k + 1) + 2


def a213387_form(n: int) -> int:
    _need(n >= 2 and n % 2 == 0, "A213387_form", n, "even n = 2k >= 2")
    k = n // 2
    return 5 * 2**k - 3 * k - 4


def a123203_form(n: int) -> int:
    _need(n >= 1 and n % 2 == 1, "A123203_form", n, "odd n = 2k+1 >= 1")
    k = n // 2
    return 2 ** (k + 3) - 3 * (k + 2)


def loop_klein_lemma_chain(n: int, *, workers: int = 1) -> int:
    """Loop Klein count as Mobius count minus Mobius strips with both ends water."""
    _need(n >= 2, "loop_klein_lemma_chain", n, "n >= 2")
    from .surface import build_mobius

    strip = build_mobius(n)
    total = count_valid(strip, Rule.LOOP, workers=workers).count
    ends = count_valid(strip, Rule.LOOP, Constraint.of((1, n)), workers=workers).count
    return total - ends


_EVALUATORS: Dict[FormulaId, Callable[[int], int]] = {
    FormulaId.N_closed: rectangle_count,
    FormulaId.J_closed: jacobsthal,
    FormulaId.Nk1_closed: lambda k: 2 ** (k + 1) - 2,
    FormulaId.Nk2_closed: lambda k: 2**k - 1,
    FormulaId.a_rec3: a_rec3,
    FormulaId.a_rec2: a_rec2,
    FormulaId.b_rec: b_rec,
    FormulaId.square_thm: square_count,
    FormulaId.loop_mobius_thm: loop_mobius_count,
    FormulaId.loop_klein_thm: loop_klein_count,
    FormulaId.loop_klein_lemma_chain: loop_klein_lemma_chain,
    FormulaId.A213387_form: a213387_form,
    FormulaId.A123203_form: a123203_form,
}

_MIN_INDEX = {FormulaId.N_closed: 1, FormulaId.Nk1_closed: 1, FormulaId.Nk2_closed: 1}


def eval_formula(formula: Union[str, FormulaId], n: int) -> int:
    formula = FormulaId.parse(formula)
    if n < _MIN_INDEX.get(formula, 0):
        raise DomainError(f"{formula.value} undefined at n={n}: requires n >= 1")
    return _EVALUATORS[formula](n)


# -- oracle comparison --------------------------------------------------------

FAMILIES = ("rectangle", "annulus", "torus", "mobius", "klein", "projective")

# Formulas applicable to each (family, rule).  Rectangle-like families are
# indexed by the column count k.
_APPLICABLE: Dict[Tuple[str, Rule], Tuple[FormulaId, ...]] = {}
for _fam in ("rectangle", "annulus"):
    for _rule in Rule:
        _APPLICABLE[(_fam, _rule)] = (FormulaId.N_closed,)
for _fam in ("mobius", "klein", "projective"):
    _APPLICABLE[(_fam, Rule.SQUARE)] = (FormulaId.square_thm,)
_APPLICABLE[("mobius", Rule.LOOP)] = (
    FormulaId.loop_mobius_thm,
    FormulaId.A213387_form,
    FormulaId.A123203_form,
)
for _fam in ("klein", "projective"):
    _APPLICABLE[(_fam, Rule.LOOP)] = (FormulaId.loop_klein_thm, FormulaId.loop_klein_lemma_chain)


def family_surface(family: str, n: int) -> SquareTiledSurface:
    if family in ("rectangle", "torus"):
        return BUILDERS[family](2, n)
    if family not in BUILDERS:
        raise ValueError(f"unknown family {family!r}")
    return BUILDERS[family](n)


@dataclass
class CountRow:
    family: str
    rule: Rule
    n: int
    oracle: int
    formulas: Dict[FormulaId, int] = field(default_factory=dict)

    @property
    def agreement(self) -> Dict[FormulaId, bool]:
        return {f: v == self.oracle for f, v in self.formulas.items()}

    @property
    def all_agree(self) -> bool:
        return all(self.agreement.values())


@dataclass
class CountReport:
    rows: List[CountRow]

    @property
    def all_agree(self) -> bool:
        return all(r.all_agree for r in self.rows)

    def disagreements(self) -> List[Tuple[CountRow, FormulaId]]:
        return [(r, f) for r in self.rows for f, ok in r.agreement.items() if not ok]

    def to_text(self) -> str:
        lines = []
        groups: Dict[Tuple[str, Rule], List[CountRow]] = {}
        for r in self.rows:
            groups.setdefault((r.family, r.rule), []).append(r)
        for (family, rule), rows in groups.items():
            formulas = sorted({f for r in rows for f in r.formulas}, key=lambda f: f.value)
            lines.append(f"# family={family} rule={rule}")
            header = ["n", "oracle"] + [f.value for f in formulas] + ["status"]
            table = [header]
            for r in rows:
                cells = [str(r.n), str(r.oracle)]
                for f in formulas:
                    if f in r.formulas:
                        mark = "" if r.agreement[f] else "*"
                        cells.append(f"{r.formulas[f]}{mark}")
                    else:
                        cells.append("-")
                cells.append("ok" if r.all_agree else "DIFF")
                table.append(cells)
            widths = [max(len(row[i]) for row in table) for i in range(len(header))]
            for row in table:
                lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
            lines.append("")
        n_diff = len(self.disagreements())
        lines.append(f"# {n_diff} disagreement(s); '*' marks a formula value differing from the oracle")
        return "\n".join(lines) + "\n"

    def to_records(self) -> List[dict]:
        return [
            {
                "family": r.family,
                "rule": str(r.rule),
                "n": r.n,
                "oracle": r.oracle,
                "formulas": {f.value: v for f, v in sorted(r.formulas.items(), key=lambda kv: kv[0].value)},
                "agree": r.all_agree,
            }
            for r in self.rows
        ]


def verify(
    ns: Iterable[int],
    rules: Sequence[Union[str, Rule]] = (Rule.SQUARE, Rule.LOOP),
    families: Sequence[str] = ("mobius",),
    *,
    workers: int = 1,
    cap: int = 26,
) -> CountReport:
    rows = []
    ns = sorted(set(ns))
    for family in families:
        for rule in map(Rule.parse, rules):
            for n in ns:
                surface = family_surface(family, n)
                if surface.n_squares > cap:
                    from .enumeration import CapExceeded

                    raise CapExceeded(f"{surface.name} exceeds the cap of {cap} squares")
                oracle = count_valid(surface, rule, workers=workers, cap=cap).count
                row = CountRow(family, rule, n, oracle)
                for f in _APPLICABLE.get((family, rule), ()):
                    try:
                        if f is FormulaId.loop_klein_lemma_chain:
                            row.formulas[f] = loop_klein_lemma_chain(n, workers=workers)
                        else:
                            row.formulas[f] = eval_formula(f, n)
                    except DomainError:
                        pass
                rows.append(row)
    return CountReport(rows)


def bfile(values: Iterable[Tuple[int, int]]) -> str:
    """OEIS b-file text: one ``n a(n)`` line per term, ascending ``n``."""
    return "".join(f"{n} {v}\n" for n, v in sorted(values))


def formula_bfile(formula: Union[str, FormulaId], ns: Iterable[int]) -> str:
    return bfile((n, eval_formula(formula, n)) for n in ns)


def oracle_bfile(family: str, rule: Union[str, Rule], ns: Iterable[int], *, workers: int = 1) -> str:
    rule = Rule.parse(rule)
    return bfile(
        (n, count_valid(family_surface(family, n), rule, workers=workers).count) for n in ns
    )
