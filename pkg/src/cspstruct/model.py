"""Core data model for finite-domain CSPs with extensional constraints.

An instance is a triple <variables, domain, constraints>: a shared ordered
value domain plus constraints stored as explicit row sets over ordered
scopes.  A :class:`SearchSpace` narrows each variable to a nonempty subset
of the domain (its "active" values); the full space keeps every domain
value active for every variable.

Everything here is an immutable value and every operation is a pure
function, so instances, spaces and assignment tuples can be shared freely
between threads.  Iteration always follows declaration order (variables as
declared, values in domain order), which keeps enumeration, counterexamples
and emitted files reproducible from run to run.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

Row = tuple[str, ...]


class AssignmentTuple(Mapping[str, str]):
    """A total assignment of domain values to a fixed set of variables.

    Behaves as an immutable mapping; ``assign`` and ``restrict`` return new
    tuples and never mutate the receiver.
    """

    __slots__ = ("_bindings", "_hash")

    def __init__(self, bindings: Mapping[str, str] | Iterable[tuple[str, str]]):
        self._bindings = dict(bindings)
        self._hash: int | None = None

    def __getitem__(self, variable: str) -> str:
        return self._bindings[variable]

    def __iter__(self) -> Iterator[str]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(self._bindings)

    def assign(self, variable: str, value: str) -> "AssignmentTuple":
        """Rebind one variable, leaving every other binding untouched."""
        if variable not in self._bindings:
            raise ValueError(f"cannot assign unknown variable {variable!r}")
        if self._bindings[variable] == value:
            return self
        fresh = dict(self._bindings)
        fresh[variable] = value
        return AssignmentTuple(fresh)

    def restrict(self, variables: Iterable[str]) -> "AssignmentTuple":
        """Project onto a subset of the bound variables."""
        wanted = tuple(variables)
        missing = [v for v in wanted if v not in self._bindings]
        if missing:
            raise ValueError(f"restriction to unbound variable(s) {missing}")
        return AssignmentTuple((v, self._bindings[v]) for v in wanted)

    def values_over(self, order: Iterable[str]) -> Row:
        """Raw value row in the given variable order."""
        return tuple(self._bindings[v] for v in order)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AssignmentTuple):
            return self._bindings == other._bindings
        if isinstance(other, Mapping):
            return self._bindings == dict(other)
        return NotImplemented

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._bindings.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}={a}" for v, a in self._bindings.items())
        return "{" + inner + "}"


@dataclass(frozen=True)
class Relation:
    """A finite set of fixed-length value rows."""

    arity: int
    rows: frozenset[Row]

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError("relation arity cannot be negative")
        if not isinstance(self.rows, frozenset):
            object.__setattr__(self, "rows", frozenset(self.rows))
        for row in self.rows:
            if len(row) != self.arity:
                raise ValueError(f"row {row!r} does not match arity {self.arity}")

    @classmethod
    def of(cls, arity: int, rows: Iterable[Iterable[str]]) -> "Relation":
        return cls(arity, frozenset(tuple(row) for row in rows))

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Constraint:
    """A relation attached to an ordered list of scope variables.

    The scope may not repeat variables.  Empty scopes are legal for values
    produced by the relational algebra (projection to nothing); instances
    only ever hold constraints with at least one scope variable.
    """

    name: str
    scope: tuple[str, ...]
    relation: Relation

    def __post_init__(self) -> None:
        if not isinstance(self.scope, tuple):
            object.__setattr__(self, "scope", tuple(self.scope))
        if len(set(self.scope)) != len(self.scope):
            raise ValueError(f"constraint {self.name!r} repeats a scope variable")
        if self.relation.arity != len(self.scope):
            raise ValueError(
                f"constraint {self.name!r}: relation arity {self.relation.arity} "
                f"does not match scope size {len(self.scope)}"
            )

    def column(self, variable: str) -> int:
        try:
            return self.scope.index(variable)
        except ValueError:
            raise ValueError(
                f"variable {variable!r} is not in the scope of {self.name!r}"
            ) from None

    def satisfied_by(self, t: AssignmentTuple) -> bool:
        """True iff the scope-ordered projection of ``t`` is a relation row."""
        try:
            projected = tuple(t[v] for v in self.scope)
        except KeyError as exc:
            raise ValueError(
                f"tuple does not bind scope variable {exc.args[0]!r} of {self.name!r}"
            ) from None
        return projected in self.relation.rows

    def select(self, variable: str, value: str, mode: str = "eq") -> "Constraint":
        """Keep rows whose column for ``variable`` equals (``eq``) or differs
        from (``neq``) the given value."""
        if mode not in ("eq", "neq"):
            raise ValueError(f"selection mode must be 'eq' or 'neq', got {mode!r}")
        i = self.column(variable)
        if mode == "eq":
            rows = frozenset(r for r in self.relation.rows if r[i] == value)
        else:
            rows = frozenset(r for r in self.relation.rows if r[i] != value)
        return Constraint(self.name, self.scope, Relation(self.relation.arity, rows))

    def project(self, variables: Iterable[str]) -> "Constraint":
        """Restrict every row to the given scope subset (duplicates collapse)."""
        wanted = tuple(variables)
        extra = [v for v in wanted if v not in self.scope]
        if extra:
            raise ValueError(f"cannot project onto non-scope variable(s) {extra}")
        positions = tuple(self.scope.index(v) for v in wanted)
        rows = frozenset(tuple(r[p] for p in positions) for r in self.relation.rows)
        return Constraint(self.name, wanted, Relation(len(wanted), rows))

    def complement(self, domain: Iterable[str]) -> "Constraint":
        """All rows over the domain that are not in this relation."""
        dom = tuple(domain)
        everything = set(itertools.product(dom, repeat=self.relation.arity))
        rows = frozenset(everything - self.relation.rows)
        return Constraint(self.name, self.scope, Relation(self.relation.arity, rows))


@dataclass(frozen=True)
class CspInstance:
    """A finite-domain CSP: variables, one shared domain, constraints."""

    variables: tuple[str, ...]
    domain: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        for attr in ("variables", "domain", "constraints"):
            value = getattr(self, attr)
            if not isinstance(value, tuple):
                object.__setattr__(self, attr, tuple(value))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        if not self.domain:
            raise ValueError("domain must contain at least one value")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("domain values must be unique")
        known = set(self.variables)
        dom = set(self.domain)
        for c in self.constraints:
            if not c.scope:
                raise ValueError(f"constraint {c.name!r} has an empty scope")
            for v in c.scope:
                if v not in known:
                    raise ValueError(
                        f"constraint {c.name!r} mentions unknown variable {v!r}"
                    )
            for row in c.relation.rows:
                for a in row:
                    if a not in dom:
                        raise ValueError(
                            f"constraint {c.name!r} uses value {a!r} outside the domain"
                        )
        object.__setattr__(self, "_vindex", {v: i for i, v in enumerate(self.variables)})
        object.__setattr__(
            self,
            "_positions",
            tuple(
                tuple(self._vindex[v] for v in c.scope) for c in self.constraints
            ),
        )

    @property
    def scope_positions(self) -> tuple[tuple[int, ...], ...]:
        """Per-constraint positions of scope variables in declaration order."""
        return self._positions  # type: ignore[attr-defined]

    def var_index(self, variable: str) -> int:
        try:
            return self._vindex[variable]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown variable {variable!r}") from None

    def is_solution(self, t: AssignmentTuple) -> bool:
        return all(c.satisfied_by(t) for c in self.constraints)

    def with_constraints(self, constraints: Iterable[Constraint]) -> "CspInstance":
        return CspInstance(self.variables, self.domain, tuple(constraints))


@dataclass(frozen=True)
class SearchSpace:
    """Active value sets per variable, kept in declaration order."""

    entries: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(self.entries))
        names = [name for name, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("search space repeats a variable")
        for name, values in self.entries:
            if not values:
                raise ValueError(f"active set for {name!r} is empty")
            if len(set(values)) != len(values):
                raise ValueError(f"active set for {name!r} repeats a value")
        object.__setattr__(self, "_active", dict(self.entries))

    @classmethod
    def full(cls, instance: CspInstance) -> "SearchSpace":
        return cls(tuple((v, instance.domain) for v in instance.variables))

    @classmethod
    def over(
        cls, instance: CspInstance, active: Mapping[str, Iterable[str]]
    ) -> "SearchSpace":
        """Build a space for an instance from per-variable restrictions.

        Omitted variables keep the full domain; given values are reordered
        into domain order and checked against it.
        """
        unknown = [v for v in active if v not in set(instance.variables)]
        if unknown:
            raise ValueError(f"active set for unknown variable(s) {unknown}")
        entries = []
        for v in instance.variables:
            if v in active:
                chosen = set(active[v])
                outside = chosen - set(instance.domain)
                if outside:
                    raise ValueError(
                        f"active values {sorted(outside)} for {v!r} are outside the domain"
                    )
                values = tuple(a for a in instance.domain if a in chosen)
            else:
                values = instance.domain
            entries.append((v, values))
        return cls(tuple(entries))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def values(self, variable: str) -> tuple[str, ...]:
        try:
            return self._active[variable]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown variable {variable!r}") from None

    def assign(self, variable: str, value: str) -> "SearchSpace":
        """The space with this variable pinned to a single active value."""
        if value not in self.values(variable):
            raise ValueError(f"value {value!r} is not active for {variable!r}")
        return SearchSpace(
            tuple(
                (name, (value,) if name == variable else vals)
                for name, vals in self.entries
            )
        )

    def remove(self, variable: str, value: str) -> "SearchSpace":
        """The space with one active value dropped; never empties a variable."""
        values = self.values(variable)
        if value not in values:
            raise ValueError(f"value {value!r} is not active for {variable!r}")
        if len(values) == 1:
            raise ValueError(
                f"removing {value!r} would leave {variable!r} with no active values"
            )
        return SearchSpace(
            tuple(
                (name, tuple(a for a in vals if a != value) if name == variable else vals)
                for name, vals in self.entries
            )
        )

    def size(self) -> int:
        total = 1
        for _, values in self.entries:
            total *= len(values)
        return total

    def as_dict(self) -> dict[str, tuple[str, ...]]:
        return dict(self.entries)

    def contains(self, t: AssignmentTuple) -> bool:
        if set(t.variables) != set(self.variables):
            return False
        return all(t[name] in values for name, values in self.entries)

    def is_full(self, domain: tuple[str, ...]) -> bool:
        return all(values == domain for _, values in self.entries)


def iter_rows(space: SearchSpace) -> Iterator[Row]:
    """Raw value rows of the space, in (variable order, value order)."""
    return itertools.product(*(values for _, values in space.entries))


def enumerate_space(space: SearchSpace) -> Iterator[AssignmentTuple]:
    """Yield every tuple of the space exactly once, lexicographically by
    variable declaration order and active value order."""
    names = space.variables
    for row in iter_rows(space):
        yield AssignmentTuple(zip(names, row))
