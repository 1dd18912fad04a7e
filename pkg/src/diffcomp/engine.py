"""Execution of Boolean functions by differentiating their listings.

To run input b against program P: differentiate P once with respect to a_i
for every set bit b_i, evaluate what's left at a = 0, and raise the scalar
to the m-th power.  A monomial survives full differentiation exactly when
its support equals the support of b, so the scalar is the phase coefficient
of b's monomial (or 0), and the m-th power collapses any phase to 1.

The functional variant differentiates along a function's graph instead and
skips the evaluation at zero: full differentiation of a degree-n homogeneous
listing already leaves a constant.  Either way, a post-power scalar outside
{0, 1} means the program was not an additive listing, and we refuse to guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import CycloRational
from .errors import ModelViolationError, SingularMatrixError
from .listings import FunctionTable, listing_determinant
from .multipoly import MultiPoly, matrix_index

_KINDS = ("vector", "matrix", "functional")


@dataclass(frozen=True)
class RunResult:
    """Decision bit plus the pre-power scalar, kept for diagnostics."""

    bit: int
    scalar: CycloRational


@dataclass(frozen=True)
class DifferentialComputer:
    program: MultiPoly
    arity: int
    order: int
    input_kind: str = "vector"

    def __post_init__(self):
        if self.input_kind not in _KINDS:
            raise ValueError(f"input_kind must be one of {_KINDS}")
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        if self.order < 1:
            raise ValueError("order must be positive")
        universe = self.arity if self.input_kind == "vector" else self.arity**2
        if self.program.nvars > universe:
            raise ValueError(
                f"program uses {self.program.nvars} variables; "
                f"{self.input_kind} inputs of arity {self.arity} allow {universe}"
            )
        cform = self.program.coefficient_order()
        if self.order % cform != 0:
            raise ValueError(
                f"program coefficients live in order {cform}, "
                f"which does not divide the declared order {self.order}"
            )

    # The decision step shared by all input kinds.
    def _decide(self, scalar: CycloRational) -> RunResult:
        powered = scalar**self.order
        if powered.is_zero():
            return RunResult(0, scalar)
        if powered == CycloRational.one():
            return RunResult(1, scalar)
        raise ModelViolationError(
            f"post-power scalar {powered} is neither 0 nor 1; "
            "the program is not an additive listing"
        )


def _differentiate_along(p: MultiPoly, variables: Sequence[int]) -> MultiPoly:
    for v in variables:
        if p.is_zero():
            break
        p = p.partial_derivative(v)
    return p


def run_vector(dc: DifferentialComputer, b: Sequence[int]) -> RunResult:
    """Apply d/da_i per set bit, evaluate at zero, decide."""
    if dc.input_kind != "vector":
        raise ValueError(f"run_vector on a {dc.input_kind}-input computer")
    bits = [int(x) for x in b]
    if len(bits) != dc.arity or any(x not in (0, 1) for x in bits):
        raise ValueError(f"expected a length-{dc.arity} bit vector")
    derived = _differentiate_along(
        dc.program, [i for i, bit in enumerate(bits) if bit]
    )
    return dc._decide(derived.evaluate({}))


def run_matrix(dc: DifferentialComputer, B: Sequence[Sequence[int]]) -> RunResult:
    """As run_vector, differentiating along the set entries of a square 0/1 matrix."""
    if dc.input_kind != "matrix":
        raise ValueError(f"run_matrix on a {dc.input_kind}-input computer")
    n = dc.arity
    rows = [[int(x) for x in row] for row in B]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected a {n}x{n} matrix")
    if any(x not in (0, 1) for r in rows for x in r):
        raise ValueError("matrix entries must be 0 or 1")
    todo = [matrix_index(n, i, j) for i in range(n) for j in range(n) if rows[i][j]]
    derived = _differentiate_along(dc.program, todo)
    return dc._decide(derived.evaluate({}))


def run_functional(dc: DifferentialComputer, g: FunctionTable) -> RunResult:
    """Differentiate along the graph of g; no evaluation at zero.

    Full differentiation of a degree-n homogeneous listing leaves a constant;
    a non-constant remainder means the program was malformed and is reported
    rather than silently evaluated away.
    """
    if dc.input_kind != "functional":
        raise ValueError(f"run_functional on a {dc.input_kind}-input computer")
    n = dc.arity
    if g.n != n:
        raise ValueError(f"function acts on Z_{g.n}, computer expects Z_{n}")
    todo = [matrix_index(n, i, g(i)) for i in range(n)]
    derived = _differentiate_along(dc.program, todo)
    if derived.degree() > 0:
        raise ModelViolationError(
            "differentiating along the function left a non-constant polynomial"
        )
    return dc._decide(derived.evaluate({}))


def count_eval(p: MultiPoly, B: Sequence[Sequence[int]]) -> CycloRational:
    """Plain evaluation of a matrix-variable listing at a 0/1 matrix.

    For binary listings this counts the enumerated objects inside B instead
    of deciding membership.
    """
    n = len(B)
    rows = [[int(x) for x in row] for row in B]
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if p.nvars > n * n:
        raise ValueError(f"listing uses {p.nvars} variables, matrix provides {n * n}")
    point = {
        matrix_index(n, i, j): 1
        for i in range(n)
        for j in range(n)
        if rows[i][j]
    }
    return p.evaluate(point)


def inverse_via_gradient(M: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Invert an exact rational matrix through the determinant listing.

    Entry (i, j) of the inverse is (d/da_{j,i} Det)(M) / Det(M) — the
    gradient-of-log-determinant identity, evaluated symbolically.
    """
    n = len(M)
    rows = [[Fraction(x) for x in row] for row in M]
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    det_listing = listing_determinant(n)
    point = {
        matrix_index(n, i, j): rows[i][j] for i in range(n) for j in range(n)
    }
    det = det_listing.evaluate(point).to_fraction()
    if det == 0:
        raise SingularMatrixError("matrix is singular")
    out = []
    for i in range(n):
        out_row = []
        for j in range(n):
            cof = det_listing.partial_derivative(matrix_index(n, j, i))
            out_row.append(cof.evaluate(point).to_fraction() / det)
        out.append(out_row)
    return out
