"""Satisfiability-preserving reduction of search spaces.

Fixing a fixable value and removing a removable value both leave an
instance equi-satisfiable, so a loop of soundly justified fixes and
removals shrinks the space without losing the answer.  Only sound
detectors may justify steps: the local combinators, the pure-value rule,
the tractable reductions, and (in test mode) the exhaustive oracle.  Local
removability is never a justification.

The loop scans variables in declaration order and values in domain order,
applies the first justified fix, then the first justified removal, and
re-runs the detectors after every change; it stops at a fixpoint or when
an inconsistency proof would empty a domain, which is reported as a proof
of unsatisfiability instead of an invalid space.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import boolean, local, oracle
from .boolean import BOOL_VALUES, BooleanFormula, SchaeferClass, classify_schaefer
from .local import Covering, default_covering
from .model import CspInstance, SearchSpace
from .oracle import PropertyQuery

DETECTOR_FAMILIES = ("pure-value", "local", "tractable", "oracle")


class ProvedUnsatisfiable(Exception):
    """An inconsistency proof removed the last value of some variable."""

    def __init__(self, variable: str, value: str):
        super().__init__(
            f"removing {value!r} from {variable!r} empties its domain: "
            "the instance is unsatisfiable"
        )
        self.variable = variable
        self.value = value


@dataclass(frozen=True)
class SimplificationStep:
    action: str  # "fix" | "remove"
    variable: str
    value: str
    detector: str
    witness: str | None
    space_before: int
    space_after: int

    def render(self) -> str:
        if self.action == "fix":
            return f"FIX {self.variable}={self.value} BY {self.detector}"
        return f"REMOVE {self.variable}!={self.value} BY {self.detector}"


@dataclass(frozen=True)
class SimplificationResult:
    final_space: SearchSpace
    steps: tuple[SimplificationStep, ...]
    fixpoint: bool
    proved_unsatisfiable: bool
    conflict: tuple[str, str, str] | None = None  # (variable, value, detector)

    def log(self) -> str:
        return "\n".join(step.render() for step in self.steps)


def apply_fix(space: SearchSpace, variable: str, value: str) -> SearchSpace:
    """Pin a variable to one value (no-op when already pinned to it)."""
    if value not in space.values(variable):
        raise ValueError(f"value {value!r} is not active for {variable!r}")
    if space.values(variable) == (value,):
        return space
    return space.assign(variable, value)


def apply_remove(
    space: SearchSpace,
    variable: str,
    value: str,
    proved_inconsistent: bool = False,
) -> SearchSpace:
    """Drop one active value (no-op when already absent).

    Removing the last value is refused unless the caller holds an
    inconsistency proof, in which case the instance is unsatisfiable and
    :class:`ProvedUnsatisfiable` is raised.
    """
    values = space.values(variable)
    if value not in values:
        return space
    if len(values) == 1:
        if proved_inconsistent:
            raise ProvedUnsatisfiable(variable, value)
        raise ValueError(
            f"refusing to remove the last value {value!r} of {variable!r} "
            "without an inconsistency proof"
        )
    return space.remove(variable, value)


def replay(
    space: SearchSpace, steps: tuple[SimplificationStep, ...]
) -> SearchSpace:
    """Re-apply a step log to a space; used to audit logs."""
    for step in steps:
        if step.action == "fix":
            space = apply_fix(space, step.variable, step.value)
        else:
            space = apply_remove(space, step.variable, step.value)
    return space


class _DetectorSet:
    """The sound detector families, each answering: does anything justify
    fixing (x, a) or removing (x, a) in the current space?"""

    def __init__(
        self,
        instance: CspInstance,
        families: tuple[str, ...],
        formula: BooleanFormula | None,
        covering: Covering,
    ):
        self.instance = instance
        self.families = families
        self.formula = formula
        self.covering = covering

    def effective_formula(self, space: SearchSpace) -> BooleanFormula | None:
        if self.formula is None:
            return None
        pinned = {
            v: boolean.name_bool(space.values(v)[0])
            for v in self.instance.variables
            if len(space.values(v)) == 1
        }
        return boolean.assume(self.formula, pinned)

    def justify_fix(self, space, effective, x, a):
        for family in self.families:
            if family == "pure-value":
                if (
                    effective is not None
                    and effective.is_clausal
                    and x in effective.variables
                ):
                    value = local.pure_value_fixable(effective, x)
                    if value is not None and boolean.bool_name(value) == a:
                        return "pure-value", "opposite polarity never occurs"
            elif family == "local":
                # A vacuous AND over zero subsets establishes nothing worth
                # acting on; steps need evidence from at least one subset.
                if not self.covering.groups:
                    continue
                if local.local_check(
                    self.instance, space, self.covering, PropertyQuery.fixable(x, a)
                ).established:
                    return "local-fixable", "established on every covering subset"
                if local.local_check(
                    self.instance, space, self.covering, PropertyQuery.implied(x, a)
                ).established:
                    return "local-implied", "established on some covering subset"
            elif family == "tractable":
                cls = self._tractable_class(effective)
                if cls is not None and x in effective.variables:
                    if boolean.tract_check(effective, cls, PropertyQuery.implied(x, a)):
                        return "tractable-implied", f"{cls.value} reduction"
            elif family == "oracle":
                if oracle.check_fixable(self.instance, space, x, a):
                    return "oracle-fixable", "exhaustive check"
        return None

    def justify_removal(self, space, effective, x, a):
        # Returns (detector, evidence, witness, is_inconsistency_proof).
        active = space.values(x)
        for family in self.families:
            if family == "local":
                if not self.covering.groups:
                    continue
                if local.local_check(
                    self.instance, space, self.covering, PropertyQuery.inconsistent(x, a)
                ).established:
                    return "local-inconsistent", "established on some subset", None, True
                if len(active) >= 2:
                    for b in active:
                        if b != a and local.local_check(
                            self.instance,
                            space,
                            self.covering,
                            PropertyQuery.substitutable(x, a, b),
                        ).established:
                            return (
                                "local-substitutable",
                                "established on every covering subset",
                                b,
                                False,
                            )
            elif family == "tractable":
                cls = self._tractable_class(effective)
                if cls is not None and x in effective.variables:
                    if boolean.tract_check(
                        effective, cls, PropertyQuery.inconsistent(x, a)
                    ):
                        return (
                            "tractable-inconsistent",
                            f"{cls.value} reduction",
                            None,
                            True,
                        )
            elif family == "oracle":
                if oracle.check_inconsistent(self.instance, space, x, a):
                    return "oracle-inconsistent", "exhaustive check", None, True
                if len(active) >= 2 and oracle.check_removable(
                    self.instance, space, x, a
                ):
                    return "oracle-removable", "exhaustive check", None, False
        return None

    @staticmethod
    def _tractable_class(effective) -> SchaeferClass | None:
        if effective is None:
            return None
        primary = classify_schaefer(effective).primary
        return None if primary is SchaeferClass.UNRESTRICTED else primary


def _resolve_families(
    mode: str, detectors, formula: BooleanFormula | None
) -> tuple[str, ...]:
    if mode not in ("production", "test"):
        raise ValueError(f"mode must be 'production' or 'test', got {mode!r}")
    if detectors is None:
        families = []
        if formula is not None and formula.is_clausal:
            families.append("pure-value")
        if formula is not None:
            families.append("tractable")
        families.append("local")
        if mode == "test":
            families.append("oracle")
        return tuple(families)
    families = tuple(detectors)
    for family in families:
        if family not in DETECTOR_FAMILIES:
            raise ValueError(
                f"unknown or unsound detector family {family!r}; "
                f"sound families are {DETECTOR_FAMILIES}"
            )
    if "oracle" in families and mode != "test":
        raise ValueError("the oracle detector is only available in test mode")
    if ("pure-value" in families or "tractable" in families) and formula is None:
        raise ValueError("formula-based detectors need the boolean formula")
    return families


def simplify_fixpoint(
    instance: CspInstance,
    space: SearchSpace,
    mode: str = "production",
    formula: BooleanFormula | None = None,
    group_size: int = 1,
    detectors: tuple[str, ...] | None = None,
) -> SimplificationResult:
    """Apply justified fixes and removals until nothing changes.

    Every logged step strictly shrinks the product of active-domain sizes,
    so the loop terminates after at most sum(|active(x)| - 1) steps.  The
    final space is equi-satisfiable with the initial one.
    """
    if formula is not None:
        if set(formula.variables) != set(instance.variables):
            raise ValueError("formula and instance disagree on variables")
        if instance.domain != BOOL_VALUES:
            raise ValueError("formula-backed simplification needs a boolean domain")
    families = _resolve_families(mode, detectors, formula)
    covering = default_covering(instance, group_size)
    detector_set = _DetectorSet(instance, families, formula, covering)

    steps: list[SimplificationStep] = []
    current = space
    while True:
        effective = detector_set.effective_formula(current)
        applied = False
        for x in instance.variables:
            active = current.values(x)
            if len(active) == 1:
                continue
            for a in active:
                justification = detector_set.justify_fix(current, effective, x, a)
                if justification is None:
                    continue
                detector, _evidence = justification
                before = current.size()
                current = apply_fix(current, x, a)
                steps.append(
                    SimplificationStep(
                        "fix", x, a, detector, None, before, current.size()
                    )
                )
                applied = True
                break
            if applied:
                break
        if applied:
            continue
        for x in instance.variables:
            for a in current.values(x):
                found = detector_set.justify_removal(current, effective, x, a)
                if found is None:
                    continue
                detector, _evidence, witness, is_proof = found
                if not is_proof and len(current.values(x)) < 2:
                    continue
                before = current.size()
                try:
                    current = apply_remove(current, x, a, proved_inconsistent=is_proof)
                except ProvedUnsatisfiable:
                    return SimplificationResult(
                        current,
                        tuple(steps),
                        fixpoint=False,
                        proved_unsatisfiable=True,
                        conflict=(x, a, detector),
                    )
                steps.append(
                    SimplificationStep(
                        "remove", x, a, detector, witness, before, current.size()
                    )
                )
                applied = True
                break
            if applied:
                break
        if not applied:
            return SimplificationResult(
                current, tuple(steps), fixpoint=True, proved_unsatisfiable=False
            )
