"""Exception types shared across the package.

Two families: plain ``TopolatError`` subclasses signal bad or oversized
input, while ``IntegrityAlarm`` subclasses fire only when a structural
property that must hold on genuine inputs fails to hold -- they indicate
that a verification run found a counterexample, not that the caller made
a mistake.  The CLI maps the former to exit code 2 and the latter to 1.
"""


class TopolatError(Exception):
    """Base class for all package errors."""


# -- input / size errors ---------------------------------------------------

class MissingEmptyOrFull(TopolatError):
    """A candidate open family lacks the empty set or the full set."""


class NotClosedUnderUnion(TopolatError):
    """A candidate open family has two opens whose union is missing."""

    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"union of masks {a:#b} and {b:#b} is not in the family")


class NotClosedUnderIntersection(TopolatError):
    """A candidate open family has two opens whose intersection is missing."""

    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"intersection of masks {a:#b} and {b:#b} is not in the family")


class GroundMismatch(TopolatError):
    """Two arguments live on ground sets of different sizes."""


class BudgetExceeded(TopolatError):
    """An enumeration was requested beyond its practical size bound."""


class ImproperSubset(TopolatError):
    """An atom was requested for the empty or full subset."""


class NotAnAtom(TopolatError):
    """A topology expected to be an atom (three opens) is not one."""


class NotAPartialOrder(TopolatError):
    """A relation fails reflexivity, antisymmetry or transitivity."""


class MeetJoinMissing(TopolatError):
    """A pair of lattice elements has no meet or no join."""

    def __init__(self, kind: str, i: int, j: int):
        self.kind = kind
        self.pair = (i, j)
        super().__init__(f"elements {i} and {j} have no {kind}")


class EqualAtoms(TopolatError):
    """The type function was asked about a pair of equal atoms."""


class ClassificationFailed(TopolatError):
    """Atom classification found no two-clique structure: not a topology lattice."""


class SizeExceeded(TopolatError):
    """A computation was requested beyond its supported size."""


class NotALatticeIso(TopolatError):
    """An index table is not an order-preserving bijection."""


class NotASubspace(TopolatError):
    """A point set expected to be linearly closed is not."""


class SingularMatrix(TopolatError):
    """A matrix required to be invertible is singular."""


class DimensionTooSmall(TopolatError):
    """The projective reconstruction needs source dimension at least 3."""


# -- verification alarms ---------------------------------------------------

class IntegrityAlarm(TopolatError):
    """A property that must hold on genuine inputs failed; a counterexample."""


class NoConsistentBijection(IntegrityAlarm):
    """No point bijection reproduces the given topology-lattice isomorphism."""


class NotSemiaffine(IntegrityAlarm):
    """A bijection preserving vector topologies is not affine semilinear."""


class NotInducible(IntegrityAlarm):
    """A subspace-lattice isomorphism is not induced by any semilinear map."""


class HausdorffNotPreserved(IntegrityAlarm):
    """A vector-topology lattice map does not send discrete to discrete."""


class GradeViolation(IntegrityAlarm):
    """A subspace map produced by the pipeline does not preserve dimension."""

    def __init__(self, dim_in: int, dim_out: int, detail: str = ""):
        self.dims = (dim_in, dim_out)
        msg = f"dimension-{dim_in} subspace mapped to dimension {dim_out}"
        super().__init__(msg + (f" ({detail})" if detail else ""))
