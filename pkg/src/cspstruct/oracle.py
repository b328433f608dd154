"""Exhaustive reference checks for the structural CSP properties.

Every check here enumerates the search space directly.  Nothing is pruned
or propagated, so the answers are trustworthy (if exponential) and every
faster detector in this package is validated against them.  Checks stop at
the first counterexample; since enumeration follows declaration order, a
reported counterexample is always the lexicographically least one.

Value quantifiers ("some other value b", "every value a") range over the
variable's *active* values by default.  Pass ``values_from_domain=True`` to
quantify over the whole domain instead; on the full search space the two
conventions coincide.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import lru_cache

from .model import AssignmentTuple, CspInstance, Row, SearchSpace, iter_rows

KINDS = (
    "fixable",
    "substitutable",
    "interchangeable",
    "removable",
    "inconsistent",
    "implied",
    "determined",
    "dependent",
    "irrelevant",
)

_VALUE_COUNTS = {
    "fixable": 1,
    "substitutable": 2,
    "interchangeable": 2,
    "removable": 1,
    "inconsistent": 1,
    "implied": 1,
    "determined": 0,
    "dependent": 0,
    "irrelevant": 0,
}


@dataclass(frozen=True)
class PropertyQuery:
    """One property question: a kind plus its variable/value arguments.

    ``variable`` is the queried variable (the target y for dependence) and
    ``over`` is the conditioning variable set, used by dependence only.
    """

    kind: str
    variable: str
    values: tuple[str, ...] = ()
    over: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown property kind {self.kind!r}")
        expected = _VALUE_COUNTS[self.kind]
        if len(self.values) != expected:
            raise ValueError(
                f"{self.kind} takes {expected} value argument(s), got {len(self.values)}"
            )
        if self.over and self.kind != "dependent":
            raise ValueError(f"{self.kind} does not take a variable set")
        if self.kind == "dependent" and self.variable in self.over:
            raise ValueError("dependence target must not occur in the variable set")

    @classmethod
    def fixable(cls, x: str, a: str) -> "PropertyQuery":
        return cls("fixable", x, (a,))

    @classmethod
    def substitutable(cls, x: str, a: str, b: str) -> "PropertyQuery":
        return cls("substitutable", x, (a, b))

    @classmethod
    def interchangeable(cls, x: str, a: str, b: str) -> "PropertyQuery":
        return cls("interchangeable", x, (a, b))

    @classmethod
    def removable(cls, x: str, a: str) -> "PropertyQuery":
        return cls("removable", x, (a,))

    @classmethod
    def inconsistent(cls, x: str, a: str) -> "PropertyQuery":
        return cls("inconsistent", x, (a,))

    @classmethod
    def implied(cls, x: str, a: str) -> "PropertyQuery":
        return cls("implied", x, (a,))

    @classmethod
    def determined(cls, x: str) -> "PropertyQuery":
        return cls("determined", x)

    @classmethod
    def dependent(cls, over: Iterable[str], y: str) -> "PropertyQuery":
        return cls("dependent", y, (), tuple(over))

    @classmethod
    def irrelevant(cls, x: str) -> "PropertyQuery":
        return cls("irrelevant", x)

    def describe(self) -> str:
        bits = [self.kind, self.variable, *self.values]
        if self.kind == "dependent":
            bits.append("on(" + ",".join(self.over) + ")")
        return " ".join(bits)


class SolutionTable:
    """Cached exhaustive enumeration of Sol(C) within a search space."""

    __slots__ = ("order", "index", "actives", "domain", "rows", "members", "checks")

    def __init__(
        self,
        order: tuple[str, ...],
        actives: tuple[tuple[str, ...], ...],
        domain: tuple[str, ...],
        rows: tuple[Row, ...],
        checks: tuple[tuple[tuple[int, ...], frozenset[Row]], ...],
    ):
        self.order = order
        self.index = {v: i for i, v in enumerate(order)}
        self.actives = actives
        self.domain = domain
        self.rows = rows
        self.members = frozenset(rows)
        self.checks = checks

    def wrap(self, row: Row) -> AssignmentTuple:
        return AssignmentTuple(zip(self.order, row))


def _require_cover(instance: CspInstance, space: SearchSpace) -> None:
    if space.variables != instance.variables:
        raise ValueError("search space must cover exactly the instance variables")


@lru_cache(maxsize=512)
def solution_table(instance: CspInstance, space: SearchSpace) -> SolutionTable:
    """Enumerate all solutions inside the space once and cache the result."""
    _require_cover(instance, space)
    checks = tuple(
        (pos, c.relation.rows)
        for c, pos in zip(instance.constraints, instance.scope_positions)
    )
    rows = []
    for raw in iter_rows(space):
        ok = True
        for pos, members in checks:
            if tuple([raw[p] for p in pos]) not in members:
                ok = False
                break
        if ok:
            rows.append(raw)
    actives = tuple(space.values(v) for v in instance.variables)
    return SolutionTable(instance.variables, actives, instance.domain, tuple(rows), checks)


def enumerate_solutions(
    instance: CspInstance, space: SearchSpace
) -> Iterator[AssignmentTuple]:
    """Stream the solutions inside the space, in enumeration order."""
    _require_cover(instance, space)
    checks = tuple(
        (pos, c.relation.rows)
        for c, pos in zip(instance.constraints, instance.scope_positions)
    )
    names = instance.variables
    for raw in iter_rows(space):
        ok = True
        for pos, members in checks:
            if tuple([raw[p] for p in pos]) not in members:
                ok = False
                break
        if ok:
            yield AssignmentTuple(zip(names, raw))


def satisfiable(instance: CspInstance, space: SearchSpace) -> bool:
    """Brute-force satisfiability inside the space (early exit on success)."""
    _require_cover(instance, space)
    checks = tuple(
        (pos, c.relation.rows)
        for c, pos in zip(instance.constraints, instance.scope_positions)
    )
    for raw in iter_rows(space):
        ok = True
        for pos, members in checks:
            if tuple([raw[p] for p in pos]) not in members:
                ok = False
                break
        if ok:
            return True
    return False


def count_solutions(instance: CspInstance, space: SearchSpace) -> int:
    return len(solution_table(instance, space).rows)


def _is_solution_row(tbl: SolutionTable, row: Row) -> bool:
    # Membership in Sol(C) regardless of the space; rows inside the space
    # resolve via the cached set, others via direct constraint evaluation.
    if row in tbl.members:
        return True
    for i, value in enumerate(row):
        if value not in tbl.actives[i]:
            for pos, members in tbl.checks:
                if tuple([row[p] for p in pos]) not in members:
                    return False
            return True
    return False


def _rewrite(row: Row, i: int, value: str) -> Row:
    return row[:i] + (value,) + row[i + 1 :]


def _candidates(tbl: SolutionTable, i: int, from_domain: bool) -> tuple[str, ...]:
    return tbl.domain if from_domain else tbl.actives[i]


# Each _check_* returns (holds, witness_rows); a witness is the first
# solution row (pair, for dependence) falsifying the property.


def _check_fixable(tbl: SolutionTable, x: str, a: str) -> tuple[bool, tuple[Row, ...]]:
    i = tbl.index[x]
    for row in tbl.rows:
        if row[i] == a:
            continue
        if not _is_solution_row(tbl, _rewrite(row, i, a)):
            return False, (row,)
    return True, ()


def _check_substitutable(
    tbl: SolutionTable, x: str, a: str, b: str
) -> tuple[bool, tuple[Row, ...]]:
    i = tbl.index[x]
    for row in tbl.rows:
        if row[i] == a and not _is_solution_row(tbl, _rewrite(row, i, b)):
            return False, (row,)
    return True, ()


def _check_removable(
    tbl: SolutionTable, x: str, a: str, from_domain: bool
) -> tuple[bool, tuple[Row, ...]]:
    i = tbl.index[x]
    alternatives = tuple(v for v in _candidates(tbl, i, from_domain) if v != a)
    for row in tbl.rows:
        if row[i] != a:
            continue
        if not any(_is_solution_row(tbl, _rewrite(row, i, b)) for b in alternatives):
            return False, (row,)
    return True, ()


def _check_inconsistent(
    tbl: SolutionTable, x: str, a: str
) -> tuple[bool, tuple[Row, ...]]:
    i = tbl.index[x]
    for row in tbl.rows:
        if row[i] == a:
            return False, (row,)
    return True, ()


def _check_implied(tbl: SolutionTable, x: str, a: str) -> tuple[bool, tuple[Row, ...]]:
    i = tbl.index[x]
    for row in tbl.rows:
        if row[i] != a:
            return False, (row,)
    return True, ()


def _check_determined(
    tbl: SolutionTable, x: str, from_domain: bool
) -> tuple[bool, tuple[Row, ...]]:
    i = tbl.index[x]
    for row in tbl.rows:
        for b in _candidates(tbl, i, from_domain):
            if b != row[i] and _is_solution_row(tbl, _rewrite(row, i, b)):
                return False, (row,)
    return True, ()


def _check_dependent(
    tbl: SolutionTable, over: tuple[str, ...], y: str
) -> tuple[bool, tuple[Row, ...]]:
    iy = tbl.index[y]
    positions = tuple(tbl.index[v] for v in over)
    seen: dict[Row, Row] = {}
    for row in tbl.rows:
        key = tuple(row[p] for p in positions)
        first = seen.get(key)
        if first is None:
            seen[key] = row
        elif first[iy] != row[iy]:
            return False, (first, row)
    return True, ()


def _check_irrelevant(
    tbl: SolutionTable, x: str, from_domain: bool
) -> tuple[bool, tuple[Row, ...]]:
    i = tbl.index[x]
    for row in tbl.rows:
        for a in _candidates(tbl, i, from_domain):
            if a != row[i] and not _is_solution_row(tbl, _rewrite(row, i, a)):
                return False, (row,)
    return True, ()


def _validate_variable(instance: CspInstance, variable: str) -> None:
    instance.var_index(variable)


def _validate_value(space: SearchSpace, variable: str, value: str) -> None:
    if value not in space.values(variable):
        raise ValueError(f"value {value!r} is not active for {variable!r}")


@dataclass(frozen=True)
class OracleVerdict:
    query: PropertyQuery
    holds: bool
    counterexamples: tuple[AssignmentTuple, ...] = ()


def evaluate(
    instance: CspInstance,
    space: SearchSpace,
    query: PropertyQuery,
    values_from_domain: bool = False,
) -> OracleVerdict:
    """Decide one property query exhaustively, with counterexample evidence."""
    _require_cover(instance, space)
    _validate_variable(instance, query.variable)
    for v in query.over:
        _validate_variable(instance, v)
    for value in query.values:
        _validate_value(space, query.variable, value)
    tbl = solution_table(instance, space)
    kind = query.kind
    x = query.variable
    if kind == "fixable":
        holds, witness = _check_fixable(tbl, x, query.values[0])
    elif kind == "substitutable":
        holds, witness = _check_substitutable(tbl, x, *query.values)
    elif kind == "interchangeable":
        a, b = query.values
        holds, witness = _check_substitutable(tbl, x, a, b)
        if holds:
            holds, witness = _check_substitutable(tbl, x, b, a)
    elif kind == "removable":
        holds, witness = _check_removable(tbl, x, query.values[0], values_from_domain)
    elif kind == "inconsistent":
        holds, witness = _check_inconsistent(tbl, x, query.values[0])
    elif kind == "implied":
        holds, witness = _check_implied(tbl, x, query.values[0])
    elif kind == "determined":
        holds, witness = _check_determined(tbl, x, values_from_domain)
    elif kind == "dependent":
        holds, witness = _check_dependent(tbl, query.over, x)
    else:
        holds, witness = _check_irrelevant(tbl, x, values_from_domain)
    return OracleVerdict(query, holds, tuple(tbl.wrap(r) for r in witness))


def check_fixable(
    instance: CspInstance, space: SearchSpace, x: str, a: str
) -> bool:
    return evaluate(instance, space, PropertyQuery.fixable(x, a)).holds


def check_substitutable(
    instance: CspInstance, space: SearchSpace, x: str, a: str, b: str
) -> bool:
    return evaluate(instance, space, PropertyQuery.substitutable(x, a, b)).holds


def check_interchangeable(
    instance: CspInstance, space: SearchSpace, x: str, a: str, b: str
) -> bool:
    return evaluate(instance, space, PropertyQuery.interchangeable(x, a, b)).holds


def check_removable(
    instance: CspInstance,
    space: SearchSpace,
    x: str,
    a: str,
    values_from_domain: bool = False,
) -> bool:
    return evaluate(
        instance, space, PropertyQuery.removable(x, a), values_from_domain
    ).holds


def check_inconsistent(
    instance: CspInstance, space: SearchSpace, x: str, a: str
) -> bool:
    return evaluate(instance, space, PropertyQuery.inconsistent(x, a)).holds


def check_implied(instance: CspInstance, space: SearchSpace, x: str, a: str) -> bool:
    return evaluate(instance, space, PropertyQuery.implied(x, a)).holds


def check_determined(
    instance: CspInstance,
    space: SearchSpace,
    x: str,
    values_from_domain: bool = False,
) -> bool:
    return evaluate(
        instance, space, PropertyQuery.determined(x), values_from_domain
    ).holds


def check_dependent(
    instance: CspInstance, space: SearchSpace, over: Iterable[str], y: str
) -> bool:
    return evaluate(instance, space, PropertyQuery.dependent(over, y)).holds


def check_irrelevant(
    instance: CspInstance,
    space: SearchSpace,
    x: str,
    values_from_domain: bool = False,
) -> bool:
    return evaluate(
        instance, space, PropertyQuery.irrelevant(x), values_from_domain
    ).holds


class Transformation:
    """A total self-map of the search space.

    Canonical forms: pin a variable to one value, replace one value by
    another, or swap two values; arbitrary maps are given as tables.
    """

    ASSIGN = "assign"
    REPLACE = "replace"
    SWAP = "swap"
    IDENTITY = "identity"
    TABLE = "table"

    __slots__ = ("kind", "variable", "values", "table")

    def __init__(self, kind, variable=None, values=(), table=None):
        self.kind = kind
        self.variable = variable
        self.values = tuple(values)
        self.table = table

    @classmethod
    def assign_value(cls, x: str, a: str) -> "Transformation":
        """t -> t[x := a]."""
        return cls(cls.ASSIGN, x, (a,))

    @classmethod
    def replace_value(cls, x: str, a: str, b: str) -> "Transformation":
        """t -> t[x := b] when t binds x to a, else t."""
        return cls(cls.REPLACE, x, (a, b))

    @classmethod
    def swap_values(cls, x: str, a: str, b: str) -> "Transformation":
        """t -> t with a and b exchanged on x, else t."""
        return cls(cls.SWAP, x, (a, b))

    @classmethod
    def identity(cls) -> "Transformation":
        return cls(cls.IDENTITY)

    @classmethod
    def from_table(
        cls, table: Mapping[AssignmentTuple, AssignmentTuple]
    ) -> "Transformation":
        return cls(cls.TABLE, table=dict(table))

    def apply(self, t: AssignmentTuple) -> AssignmentTuple:
        if self.kind == self.IDENTITY:
            return t
        if self.kind == self.ASSIGN:
            return t.assign(self.variable, self.values[0])
        if self.kind == self.REPLACE:
            a, b = self.values
            return t.assign(self.variable, b) if t[self.variable] == a else t
        if self.kind == self.SWAP:
            a, b = self.values
            if t[self.variable] == a:
                return t.assign(self.variable, b)
            if t[self.variable] == b:
                return t.assign(self.variable, a)
            return t
        image = self.table.get(t)
        if image is None:
            raise ValueError(f"transformation table is partial: no image for {t!r}")
        return image

    def _apply_row(self, row: Row, i: int) -> Row:
        if self.kind == self.ASSIGN:
            return _rewrite(row, i, self.values[0])
        if self.kind == self.REPLACE:
            a, b = self.values
            return _rewrite(row, i, b) if row[i] == a else row
        a, b = self.values
        if row[i] == a:
            return _rewrite(row, i, b)
        if row[i] == b:
            return _rewrite(row, i, a)
        return row


def is_solution_preserving(
    instance: CspInstance, space: SearchSpace, transform: Transformation
) -> bool:
    """True iff the transformation maps every solution in the space to a
    solution."""
    _require_cover(instance, space)
    if transform.kind == Transformation.IDENTITY:
        return True
    tbl = solution_table(instance, space)
    if transform.kind == Transformation.TABLE:
        space_vars = set(space.variables)
        for row in tbl.rows:
            image = transform.apply(tbl.wrap(row))
            if set(image.variables) != space_vars or not space.contains(image):
                raise ValueError("transformation image leaves the search space")
            if image.values_over(tbl.order) not in tbl.members:
                return False
        return True
    x = transform.variable
    _validate_variable(instance, x)
    for value in transform.values:
        _validate_value(space, x, value)
    i = tbl.index[x]
    for row in tbl.rows:
        if transform._apply_row(row, i) not in tbl.members:
            return False
    return True


def all_queries(
    instance: CspInstance,
    space: SearchSpace,
    kinds: Iterable[str] = KINDS,
    dep_max: int = 2,
) -> list[PropertyQuery]:
    """Every admissible query in canonical order: kind, then variable
    declaration order, then active value order.

    Substitutability queries cover ordered pairs of distinct active values,
    interchangeability unordered pairs; dependence ranges over nonempty
    conditioning sets of up to ``dep_max`` other variables.
    """
    queries: list[PropertyQuery] = []
    names = instance.variables
    for kind in kinds:
        if kind not in KINDS:
            raise ValueError(f"unknown property kind {kind!r}")
        for x in names:
            active = space.values(x)
            if kind in ("fixable", "removable", "inconsistent", "implied"):
                queries.extend(PropertyQuery(kind, x, (a,)) for a in active)
            elif kind == "substitutable":
                queries.extend(
                    PropertyQuery(kind, x, (a, b))
                    for a in active
                    for b in active
                    if a != b
                )
            elif kind == "interchangeable":
                queries.extend(
                    PropertyQuery(kind, x, (a, b))
                    for pos, a in enumerate(active)
                    for b in active[pos + 1 :]
                )
            elif kind in ("determined", "irrelevant"):
                queries.append(PropertyQuery(kind, x))
            else:
                others = tuple(v for v in names if v != x)
                for size in range(1, dep_max + 1):
                    queries.extend(
                        PropertyQuery.dependent(combo, x)
                        for combo in itertools.combinations(others, size)
                    )
    return queries


def clear_caches() -> None:
    """Drop the memoized solution tables (mostly useful in long test runs)."""
    solution_table.cache_clear()
