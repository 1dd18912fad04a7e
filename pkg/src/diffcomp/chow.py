"""Chow decompositions: sums of products of non-homogeneous linear forms.

A decomposition with rho summands of degree d over n variables is a
rho x d x (n+1) hypermatrix H; entry H[u][v][w] is the coefficient of x_w in
the v-th linear form of summand u, and slot n holds the form's constant term.
The number of summands certifies an upper bound on the Chow rank of the
expanded polynomial; two lower-bound tools live here as well:

 * degree 2 — the rank of the unique symmetric matrix A with P = x^T A x,
   halved (rounding up), is a lower bound, since every homogeneous
   decomposition realizes some A + skew as a sum of rho rank-one matrices;
 * totally non-overlapping polynomials — Chow rank equals the term count,
   so the expanded form itself is an optimal decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import CycloRational
from .errors import (
    FormatError,
    InternalInconsistencyError,
    NotApplicableError,
    NotHomogeneousError,
)
from .listings import FunctionTable
from .multipoly import Monomial, MultiPoly, matrix_index

Matrix = list[list[CycloRational]]


def _coerce(c) -> CycloRational:
    if isinstance(c, CycloRational):
        return c
    if isinstance(c, (int, Fraction)):
        return CycloRational.from_rational(c)
    raise TypeError(f"cannot use {type(c).__name__} as a hypermatrix entry")


@dataclass(frozen=True)
class ChowDecomposition:
    """rho summands, each a product of degree linear forms over nvars variables."""

    rho: int
    degree: int
    nvars: int
    entries: tuple  # rho x degree x (nvars+1)

    def __post_init__(self):
        if self.rho < 1 or self.degree < 1 or self.nvars < 0:
            raise ValueError("need rho >= 1, degree >= 1, nvars >= 0")
        rows = tuple(
            tuple(tuple(_coerce(c) for c in form) for form in summand)
            for summand in self.entries
        )
        if len(rows) != self.rho:
            raise ValueError(f"expected {self.rho} summands, got {len(rows)}")
        for summand in rows:
            if len(summand) != self.degree:
                raise ValueError(f"expected {self.degree} forms per summand")
            for form in summand:
                if len(form) != self.nvars + 1:
                    raise ValueError(
                        f"each form needs {self.nvars + 1} entries, got {len(form)}"
                    )
        object.__setattr__(self, "entries", rows)

    def form(self, u: int, v: int) -> MultiPoly:
        """The linear form H[u][v][n] + sum_w H[u][v][w] x_w."""
        coeffs = self.entries[u][v]
        terms: dict[Monomial, CycloRational] = {Monomial(): coeffs[self.nvars]}
        for w in range(self.nvars):
            terms[Monomial.make({w: 1})] = coeffs[w]
        return MultiPoly(self.nvars, terms)

    def is_homogeneous(self) -> bool:
        return all(
            summand[v][self.nvars].is_zero()
            for summand in self.entries
            for v in range(self.degree)
        )

    def coefficient_order(self) -> int:
        out = 1
        for summand in self.entries:
            for form in summand:
                for c in form:
                    out = math.lcm(out, c.order)
        return out

    def to_text(self, order: int | None = None) -> str:
        m = self.coefficient_order()
        if order is not None:
            m = math.lcm(m, order)
        lines = ["# diffcomp-chow 1", f"{self.rho} {self.degree} {self.nvars} {m}"]
        for summand in self.entries:
            for form in summand:
                lines.append(" ".join(c.to_text() for c in form))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> tuple[ChowDecomposition, int]:
        """Parse; returns the decomposition and the declared coefficient order."""
        lines = [ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise FormatError("empty decomposition file")
        head = lines[0].split()
        if len(head) != 4:
            raise FormatError(f"bad decomposition header {lines[0]!r}")
        try:
            rho, d, n, m = (int(x) for x in head)
        except ValueError as exc:
            raise FormatError(f"bad decomposition header {lines[0]!r}") from exc
        if rho < 1 or d < 1 or n < 0 or m < 1:
            raise FormatError(f"bad decomposition header {lines[0]!r}")
        body = lines[1:]
        if len(body) != rho * d:
            raise FormatError(f"expected {rho * d} form lines, found {len(body)}")
        forms = []
        for line in body:
            toks = line.split()
            if len(toks) != n + 1:
                raise FormatError(f"expected {n + 1} entries on line {line!r}")
            forms.append(tuple(CycloRational.from_text(t) for t in toks))
        entries = tuple(tuple(forms[u * d + v] for v in range(d)) for u in range(rho))
        return cls(rho, d, n, entries), m


def expand(c: ChowDecomposition) -> MultiPoly:
    """Multiply out every summand and add; the canonical polynomial."""
    total = MultiPoly.zero(c.nvars)
    for u in range(c.rho):
        prod = MultiPoly.constant(1, c.nvars)
        for v in range(c.degree):
            prod = prod * c.form(u, v)
            if prod.is_zero():
                break
        total = total + prod
    return total


def verify(c: ChowDecomposition, target: MultiPoly) -> bool:
    """Exact certificate check: expand(c) == target, so rho bounds the Chow rank."""
    return expand(c) == target


def homogenize(c: ChowDecomposition, target: MultiPoly) -> ChowDecomposition:
    """Zero every constant slot; for homogeneous targets this cannot break it.

    Terms of the expansion picking at least one constant slot have degree
    below d, and a homogeneous degree-d target forces them to cancel among
    themselves — so dropping the slots leaves the degree-d part untouched.
    """
    if not target.is_homogeneous(c.degree):
        raise NotHomogeneousError(
            f"target is not homogeneous of degree {c.degree}"
        )
    if not verify(c, target):
        raise ValueError("decomposition does not verify against the target")
    zeroed = ChowDecomposition(
        c.rho,
        c.degree,
        c.nvars,
        tuple(
            tuple(form[: c.nvars] + (CycloRational.zero(),) for form in summand)
            for summand in c.entries
        ),
    )
    if not verify(zeroed, target):
        raise InternalInconsistencyError(
            "zeroing constant slots broke a homogeneous decomposition"
        )
    return zeroed


# ---------------------------------------------------------------------------
# Degree-2 lower bound via the symmetric matrix.
# ---------------------------------------------------------------------------

def symmetric_matrix_of(p: MultiPoly) -> Matrix:
    """The unique symmetric A with p = x^T A x, for homogeneous degree-2 p."""
    if not p.is_homogeneous() or (not p.is_zero() and p.degree() != 2):
        raise NotHomogeneousError("need a homogeneous polynomial of degree 2")
    n = p.nvars
    half = CycloRational.from_rational(Fraction(1, 2))
    A = [[CycloRational.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        A[i][i] = p.coefficient(Monomial.make({i: 2}))
        for j in range(i + 1, n):
            c = p.coefficient(Monomial.make({i: 1, j: 1})) * half
            A[i][j] = c
            A[j][i] = c
    return A


def exact_rank(rows: Sequence[Sequence[CycloRational]]) -> int:
    """Rank by fraction-free (Bareiss-style) elimination; exact over the field."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    rank = 0
    prev = CycloRational.one()
    r = 0
    for c in range(nc):
        pivot = next((i for i in range(r, nr) if not m[i][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev
            m[i][c] = CycloRational.zero()
        prev = m[r][c]
        rank += 1
        r += 1
        if r == nr:
            break
    return rank


def degree2_chow_lower_bound(p: MultiPoly) -> int:
    """ceil(rank(A)/2) <= Chow rank of p, for homogeneous degree-2 p.

    Every homogeneous decomposition with rho summands writes some A + S
    (S skew-symmetric) as a sum of rho rank-one matrices, so
    rank(A + S) <= rho; and 2A = (A + S) + (A + S)^T gives
    rank(A) <= 2 rank(A + S) <= 2 rho.
    """
    return (exact_rank(symmetric_matrix_of(p)) + 1) // 2


# ---------------------------------------------------------------------------
# Totally non-overlapping polynomials: exact rank equals term count.
# ---------------------------------------------------------------------------

def is_totally_non_overlapping(p: MultiPoly) -> bool:
    """Does every variable appear in at most one term?"""
    if not p.is_multilinear():
        raise ValueError("the non-overlapping test applies to multilinear polynomials")
    seen: set[int] = set()
    for mono in p.terms:
        sup = mono.support()
        if seen & sup:
            return False
        seen |= sup
    return True


def pm_polynomial(n: int, m: int, alphas: Sequence | None = None) -> MultiPoly:
    """The canonical non-overlapping benchmark: sum_i alpha_i x_{mi} ... x_{mi+m-1}."""
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 terms of degree m >= 2")
    if alphas is None:
        alphas = [1] * n
    if len(alphas) != n:
        raise ValueError(f"expected {n} coefficients")
    terms = {
        Monomial.of_vars(range(m * i, m * i + m)): _coerce(alphas[i])
        for i in range(n)
    }
    poly = MultiPoly(m * n, terms)
    if len(poly.terms) != n:
        raise ValueError("coefficients must be nonzero")
    return poly


def pm_relabelling(p: MultiPoly) -> dict[int, int]:
    """Witness that p is P_m up to renaming: old variable -> canonical slot.

    Term i (in graded-lex order) has its variables sent, in increasing
    order, to m*i, ..., m*i + m - 1.
    """
    if not is_totally_non_overlapping(p):
        raise NotApplicableError("polynomial has overlapping terms")
    degrees = {mono.degree() for mono in p.terms}
    if len(degrees) != 1 or min(degrees) < 2:
        raise NotApplicableError("terms must share a single degree m >= 2")
    m = degrees.pop()
    relabel: dict[int, int] = {}
    for i, (mono, _) in enumerate(p.sorted_terms()):
        for j, (v, _) in enumerate(mono.exps):
            relabel[v] = m * i + j
    return relabel


def pm_restriction_to_p2(n: int, m: int) -> tuple[dict[int, int], dict[int, int], int]:
    """(fixings, relabelling, nvars) turning canonical P_m into canonical P_2.

    Fix all but the first two variables of each term to 1, then compact:
    x_{mi} -> x_{2i}, x_{mi+1} -> x_{2i+1}.
    """
    if m < 2:
        raise ValueError("P_m needs m >= 2")
    fixings = {m * i + j: 1 for i in range(n) for j in range(2, m)}
    relabel: dict[int, int] = {}
    for i in range(n):
        relabel[m * i] = 2 * i
        relabel[m * i + 1] = 2 * i + 1
    return fixings, relabel, 2 * n


def trivial_decomposition(p: MultiPoly) -> ChowDecomposition:
    """The expanded form read as a decomposition: one summand per term.

    Each variable occurrence becomes a single-variable form (the term's
    coefficient rides on the first form); shorter terms are padded with
    constant-1 forms.
    """
    d = p.degree()
    if d < 1:
        raise NotApplicableError("need a polynomial of degree at least 1")
    n = p.nvars
    zero, one = CycloRational.zero(), CycloRational.one()
    summands = []
    for mono, coeff in p.sorted_terms():
        slots: list[int] = []
        for v, e in mono.exps:
            slots.extend([v] * e)
        forms = []
        for k in range(d):
            form = [zero] * (n + 1)
            scale = coeff if k == 0 else one
            if k < len(slots):
                form[slots[k]] = scale
            else:
                form[n] = scale
            forms.append(tuple(form))
        summands.append(tuple(forms))
    return ChowDecomposition(len(summands), d, n, tuple(summands))


def chow_rank_non_overlapping(p: MultiPoly) -> tuple[int, ChowDecomposition]:
    """Exact Chow rank (= term count) of a totally non-overlapping polynomial.

    The trivial decomposition gives the upper bound; optimality holds
    because restricting each term to two of its variables leaves a P_2
    whose symmetric matrix has full rank 2n.
    """
    if not is_totally_non_overlapping(p):
        raise NotApplicableError("polynomial has overlapping terms")
    if p.is_zero() or any(mono.degree() < 2 for mono in p.terms):
        raise NotApplicableError("every term must have degree at least 2")
    return len(p.terms), trivial_decomposition(p)


# ---------------------------------------------------------------------------
# Compiling functional computers to depth-2 formulas.
# ---------------------------------------------------------------------------

def compile_functional(
    c: ChowDecomposition, g: FunctionTable
) -> tuple[Matrix, CycloRational]:
    """Evaluate a functional computer as sum_u prod_v X[u][v].

    Needs a homogeneous decomposition whose v-th form uses only the matrix
    variables of row v (a_{v,0}..a_{v,n-1}); then differentiating along g
    just picks X[u][v] = H[u][v][a_{v,g(v)}] out of each form.
    """
    n = g.n
    if c.degree != n:
        raise ValueError(f"decomposition degree {c.degree} != domain size {n}")
    if c.nvars != n * n:
        raise ValueError(f"decomposition is over {c.nvars} variables, need {n * n}")
    if not c.is_homogeneous():
        raise NotHomogeneousError("functional compilation needs a homogeneous decomposition")
    for u in range(c.rho):
        for v in range(n):
            form = c.entries[u][v]
            lo, hi = n * v, n * v + n
            for w in range(n * n):
                if not (lo <= w < hi) and not form[w].is_zero():
                    raise ValueError(
                        f"form {v} of summand {u} touches variable {w}, "
                        f"outside row {v}"
                    )
    X: Matrix = [
        [c.entries[u][v][matrix_index(n, v, g(v))] for v in range(n)]
        for u in range(c.rho)
    ]
    scalar = CycloRational.zero()
    for u in range(c.rho):
        prod = CycloRational.one()
        for v in range(n):
            prod = prod * X[u][v]
            if prod.is_zero():
                break
        scalar = scalar + prod
    return X, scalar


def functional_product_decomposition(n: int) -> ChowDecomposition:
    """rho = 1 certificate for the n^n-term functional listing: prod_i sum_j a_{i,j}."""
    if n < 1:
        raise ValueError("n must be positive")
    zero, one = CycloRational.zero(), CycloRational.one()
    forms = []
    for v in range(n):
        form = [zero] * (n * n + 1)
        for w in range(n):
            form[matrix_index(n, v, w)] = one
        forms.append(tuple(form))
    return ChowDecomposition(1, n, n * n, (tuple(forms),))
