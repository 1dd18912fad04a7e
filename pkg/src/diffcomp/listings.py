"""Builders for additive listings: polynomials whose monomials enumerate YES instances.

A Boolean function F on n bits becomes the polynomial

    sum over yes-instances b of  w^phase(b) * prod_{i : b_i = 1} a_i

with w a primitive m-th root of unity.  The all-zeros instance contributes a
constant term.  For m = 1 every coefficient is 1 (the binary listing).

Matrix-variable listings (functional graphs, permanent, determinant, graph
isomorphism, constant functions, cyclic group) live over n^2 variables indexed
row-major, and enumerate structured families of 0/1 matrices.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence

from .cyclotomic import CycloRational, root_of_unity
from .errors import FormatError, NotApplicableError, SizeCapError
from .multipoly import Monomial, MultiPoly, matrix_index

if TYPE_CHECKING:  # pragma: no cover
    from .graphs import Graph

DEFAULT_MAX_TERMS = 100_000


def max_terms() -> int:
    """Size cap on expanded listings; override with DIFFCOMP_MAX_TERMS."""
    raw = os.environ.get("DIFFCOMP_MAX_TERMS")
    if raw is None:
        return DEFAULT_MAX_TERMS
    try:
        value = int(raw)
    except ValueError:
        raise FormatError(f"DIFFCOMP_MAX_TERMS must be an integer, got {raw!r}") from None
    if value < 1:
        raise FormatError("DIFFCOMP_MAX_TERMS must be positive")
    return value


def _check_cap(projected: int, what: str) -> None:
    cap = max_terms()
    if projected > cap:
        raise SizeCapError(f"{what} needs {projected} terms, over the cap of {cap}")


def lex_index(bits: Sequence[int]) -> int:
    """Big-endian rank of a bit vector: lex_index((1,0,1)) == 5."""
    value = 0
    for b in bits:
        value = (value << 1) | b
    return value


Bits = tuple[int, ...]


def _as_bits(b: Iterable[int], n: int) -> Bits:
    t = tuple(int(x) for x in b)
    if len(t) != n or any(x not in (0, 1) for x in t):
        raise ValueError(f"expected a length-{n} bit vector, got {t}")
    return t


@dataclass(frozen=True)
class TruthTable:
    """YES instances of an n-bit Boolean function plus a phase exponent per instance.

    The coefficient attached to instance b is w_m^phases[b].  Phases are
    normalized mod m on construction; m = 1 forces them all to zero.
    """

    n: int
    m: int
    yes: frozenset[Bits]
    phases: Mapping[Bits, int]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("arity must be non-negative")
        if self.m < 1:
            raise ValueError("order m must be at least 1")
        yes = frozenset(_as_bits(b, self.n) for b in self.yes)
        stray = set(self.phases) - yes
        if stray:
            raise ValueError(f"phase given for non-yes instance {sorted(stray)[0]}")
        phases = {b: self.phases.get(b, 0) % self.m for b in yes}
        object.__setattr__(self, "yes", yes)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def make(cls, n: int, yes: Iterable[Iterable[int]], m: int = 1,
             phases: Mapping[Bits, int] | None = None) -> TruthTable:
        yes_set = frozenset(_as_bits(b, n) for b in yes)
        return cls(n, m, yes_set, dict(phases or {}))

    @classmethod
    def from_function(cls, n: int, func, m: int = 1) -> TruthTable:
        """Tabulate a Python predicate over {0,1}^n."""
        yes = [b for b in itertools.product((0, 1), repeat=n) if func(b)]
        return cls.make(n, yes, m)

    def with_lex_phases(self) -> TruthTable:
        """The canonical phase choice: instance b gets exponent lex_index(b) mod m."""
        return TruthTable(self.n, self.m, self.yes,
                          {b: lex_index(b) for b in self.yes})

    def value(self, b: Iterable[int]) -> int:
        return 1 if _as_bits(b, self.n) in self.yes else 0

    def coefficient(self, b: Bits) -> CycloRational:
        return root_of_unity(self.m, self.phases[b])

    def sorted_yes(self) -> list[Bits]:
        return sorted(self.yes, key=lex_index)

    def to_text(self) -> str:
        lines = ["# diffcomp-tt 1", f"{self.n} {self.m}"]
        for b in self.sorted_yes():
            bits = "".join(map(str, b)) or "-"  # arity 0: placeholder token
            lines.append(f"{bits} {self.phases[b]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> TruthTable:
        lines = [ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise FormatError("empty truth-table file")
        head = lines[0].split()
        if len(head) != 2:
            raise FormatError(f"bad truth-table header {lines[0]!r}")
        try:
            n, m = int(head[0]), int(head[1])
        except ValueError as exc:
            raise FormatError(f"bad truth-table header {lines[0]!r}") from exc
        if n < 0 or m < 1:
            raise FormatError(f"bad truth-table header {lines[0]!r}")
        yes: list[Bits] = []
        phases: dict[Bits, int] = {}
        for line in lines[1:]:
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"bad truth-table line {line!r}")
            bits_s, phase_s = parts
            if bits_s == "-" and n == 0:
                bits_s = ""
            if len(bits_s) != n or any(c not in "01" for c in bits_s):
                raise FormatError(f"bad bit vector {bits_s!r} for arity {n}")
            b = tuple(int(c) for c in bits_s)
            if b in phases:
                raise FormatError(f"duplicate yes-instance {bits_s!r}")
            try:
                phases[b] = int(phase_s)
            except ValueError as exc:
                raise FormatError(f"bad phase {phase_s!r}") from exc
            yes.append(b)
        return cls.make(n, yes, m, phases)


@dataclass(frozen=True)
class FunctionTable:
    """A function g: Z_n -> Z_n as its image vector (g(0), ..., g(n-1))."""

    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("domain size must be positive")
        images = tuple(int(x) for x in self.images)
        if len(images) != self.n:
            raise ValueError(f"expected {self.n} images, got {len(images)}")
        bad = [x for x in images if not 0 <= x < self.n]
        if bad:
            raise ValueError(f"image {bad[0]} outside Z_{self.n}")
        object.__setattr__(self, "images", images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    @classmethod
    def constant(cls, n: int, c: int) -> FunctionTable:
        return cls(n, (c,) * n)

    @classmethod
    def identity(cls, n: int) -> FunctionTable:
        return cls(n, tuple(range(n)))

    @classmethod
    def shift(cls, n: int, j: int) -> FunctionTable:
        """x -> x + j mod n."""
        return cls(n, tuple((i + j) % n for i in range(n)))


def all_function_tables(n: int) -> Iterator[FunctionTable]:
    for images in itertools.product(range(n), repeat=n):
        yield FunctionTable(n, images)


# ---------------------------------------------------------------------------
# Vector-variable listings.
# ---------------------------------------------------------------------------

def listing_from_truth_table(t: TruthTable) -> MultiPoly:
    """One multilinear term per yes-instance, coefficient w_m^phase."""
    terms: dict[Monomial, CycloRational] = {}
    for b in t.yes:
        mono = Monomial.of_vars(i for i, bit in enumerate(b) if bit)
        terms[mono] = t.coefficient(b)
    return MultiPoly(t.n, terms)


def truth_table_from_listing(p: MultiPoly, m: int | None = None,
                             n: int | None = None) -> TruthTable:
    """Invert listing_from_truth_table: recover yes-instances and phases.

    Every coefficient must be a power of w_m; anything else means p is not
    an additive listing of order m.
    """
    if m is None:
        m = p.coefficient_order()
    if n is None:
        n = p.nvars
    yes: list[Bits] = []
    phases: dict[Bits, int] = {}
    for mono, c in p.terms.items():
        if not mono.is_multilinear():
            raise ValueError(f"non-multilinear monomial {mono} in a listing")
        b = tuple(1 if mono.exponent(i) else 0 for i in range(n))
        for k in range(m):
            if c == root_of_unity(m, k):
                phases[b] = k
                break
        else:
            raise ValueError(f"coefficient {c} is not an order-{m} root of unity")
        yes.append(b)
    return TruthTable.make(n, yes, m, phases)


def lagrange_interpolant(t: TruthTable) -> MultiPoly:
    """Expand sum over yes b of prod_i (y_i - (1 - b_i)) / (2 b_i - 1).

    Defined for binary listings only: the interpolant encodes F's 0/1 values,
    not phases.
    """
    if t.m != 1:
        raise NotApplicableError("Lagrange interpolant applies to m=1 listings only")
    total = MultiPoly.zero(t.n)
    for b in t.sorted_yes():
        term = MultiPoly.constant(1, t.n)
        for i, bit in enumerate(b):
            y = MultiPoly.variable(i, t.n)
            # b_i = 1: (y_i - 0)/1 ; b_i = 0: (y_i - 1)/(-1) = 1 - y_i
            factor = y if bit else (1 - y)
            term = term * factor
        total = total + term
    return total


def lagrange_reduction(t: TruthTable) -> MultiPoly:
    """Binomial reduction of the factored interpolant to the binary listing.

    Each Lagrange factor (y_i-(1-b_i))/(2b_i-1) is replaced by a_i^{b_i}
    before expansion, moving truth-table data from evaluations into
    coefficients.
    """
    if t.m != 1:
        raise NotApplicableError("binomial reduction applies to m=1 listings only")
    total = MultiPoly.zero(t.n)
    for b in t.sorted_yes():
        term = MultiPoly.constant(1, t.n)
        for i, bit in enumerate(b):
            factor = MultiPoly.variable(i, t.n) if bit else MultiPoly.constant(1, t.n)
            term = term * factor
        total = total + term
    return total


def monomial_support_equals(p: MultiPoly, t: TruthTable) -> bool:
    """Does p's monomial support enumerate exactly t's yes-instances?"""
    if not p.is_multilinear():
        raise ValueError("support comparison needs a multilinear polynomial")
    instance_supports = {frozenset(i for i, bit in enumerate(b) if bit) for b in t.yes}
    return p.support_sets() == instance_supports


# ---------------------------------------------------------------------------
# Matrix-variable listings.  Variables are a_{i,j} at flat index n*i + j.
# ---------------------------------------------------------------------------

def _product_monomial(n: int, pairs: Iterable[tuple[int, int]]) -> Monomial:
    return Monomial.of_vars(matrix_index(n, i, j) for i, j in pairs)


def listing_functional_graphs(n: int) -> MultiPoly:
    """Sum over all n^n functions f of prod_i a_{i, f(i)}."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_cap(n**n, f"functional-graph listing on Z_{n}")
    terms = {
        _product_monomial(n, ((i, f(i)) for i in range(n))): CycloRational.one()
        for f in all_function_tables(n)
    }
    return MultiPoly(n * n, terms)


def listing_permanent(n: int) -> MultiPoly:
    """Sum over permutations of prod_i a_{i, sigma(i)}, all coefficients 1."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_cap(math.factorial(n), f"permanent listing on {n}x{n}")
    terms = {
        _product_monomial(n, enumerate(sigma)): CycloRational.one()
        for sigma in itertools.permutations(range(n))
    }
    return MultiPoly(n * n, terms)


def _inversion_parity(sigma: Sequence[int]) -> int:
    inv = sum(
        1
        for i in range(len(sigma))
        for j in range(i + 1, len(sigma))
        if sigma[i] > sigma[j]
    )
    return inv & 1


def listing_determinant(n: int) -> MultiPoly:
    """Permanent's signed twin: coefficient sgn(sigma) as an order-2 root of unity."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_cap(math.factorial(n), f"determinant listing on {n}x{n}")
    terms = {}
    for sigma in itertools.permutations(range(n)):
        coeff = root_of_unity(2, _inversion_parity(sigma))
        terms[_product_monomial(n, enumerate(sigma))] = coeff
    return MultiPoly(n * n, terms)


def listing_graph_isomorphism(g: "Graph") -> MultiPoly:
    """Sum of monomial edge listings over all distinct relabellings of g.

    Conjugates the edge set by every permutation of the vertices and
    deduplicates, which quotients by the automorphism group without ever
    computing it.
    """
    n = g.n
    _check_cap(math.factorial(n), f"isomorphism listing on {n} vertices")
    edges = list(g.edges())
    seen: set[frozenset[tuple[int, int]]] = set()
    terms: dict[Monomial, CycloRational] = {}
    for sigma in itertools.permutations(range(n)):
        conj = frozenset((sigma[i], sigma[j]) for i, j in edges)
        if conj in seen:
            continue
        seen.add(conj)
        terms[_product_monomial(n, conj)] = CycloRational.one()
    return MultiPoly(n * n, terms)


def listing_constant_functions(n: int) -> MultiPoly:
    """sum_j prod_i a_{i,j}: the n constant functions on Z_n.  Column products."""
    if n < 1:
        raise ValueError("n must be positive")
    terms = {
        _product_monomial(n, ((i, j) for i in range(n))): CycloRational.one()
        for j in range(n)
    }
    return MultiPoly(n * n, terms)


def listing_cyclic_group(n: int) -> MultiPoly:
    """sum_j prod_i a_{i, i+j mod n}: the cyclic group generated by x -> x+1."""
    if n < 1:
        raise ValueError("n must be positive")
    terms = {
        _product_monomial(n, ((i, (i + j) % n) for i in range(n))): CycloRational.one()
        for j in range(n)
    }
    return MultiPoly(n * n, terms)
