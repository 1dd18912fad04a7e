"""Sparse multivariate polynomials over exact cyclotomic-rational coefficients.

A monomial is a sparse map from variable index to a positive exponent; a
polynomial maps monomials to nonzero coefficients (canonical sparse form:
zero coefficients are never stored).  All operations are pure and exact.

Polynomial equality compares term maps only, i.e. it is mathematical
equality; the declared variable-universe size `nvars` is carried for
serialization and for dimension checks but does not affect `==`.

The canonical text format is:

    # diffcomp-poly 1
    <nvars> <m>
    <coeff> * <var>[^e] * <var>[^e] ...

one term per line in graded-lexicographic order, where <coeff> is the
cyclotomic text format and <var> is either a flat vector name like `a_3`
or a row-major matrix name like `a_{1,2}` (index n*i+j with n the matrix
side).  Round-trips are bit-exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .cyclotomic import CycloRational
from .errors import FormatError, InvalidRelabellingError


@dataclass(frozen=True)
class Monomial:
    """Sparse exponent vector, stored as (variable, exponent) pairs sorted by variable."""

    exps: tuple[tuple[int, int], ...] = ()

    @classmethod
    def make(cls, mapping: Mapping[int, int]) -> Monomial:
        items = []
        for v, e in sorted(mapping.items()):
            if v < 0:
                raise ValueError("variable indices must be non-negative")
            if e < 0:
                raise ValueError("exponents must be non-negative")
            if e > 0:
                items.append((v, e))
        return cls(tuple(items))

    @classmethod
    def of_vars(cls, variables: Iterable[int]) -> Monomial:
        """Multilinear monomial on the given (distinct) variables."""
        vs = sorted(variables)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variable in multilinear monomial")
        return cls(tuple((v, 1) for v in vs))

    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def support(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.exps)

    def is_multilinear(self) -> bool:
        return all(e == 1 for _, e in self.exps)

    def exponent(self, v: int) -> int:
        for var, e in self.exps:
            if var == v:
                return e
        return 0

    def max_var(self) -> int:
        return self.exps[-1][0] if self.exps else -1

    def __mul__(self, other: Monomial) -> Monomial:
        merged = dict(self.exps)
        for v, e in other.exps:
            merged[v] = merged.get(v, 0) + e
        return Monomial(tuple(sorted(merged.items())))

    def diff(self, v: int) -> tuple[int, Monomial] | None:
        """(multiplier, reduced monomial) for d/dx_v, or None if v is absent."""
        e = self.exponent(v)
        if e == 0:
            return None
        rest = {var: ex for var, ex in self.exps if var != v}
        if e > 1:
            rest[v] = e - 1
        return e, Monomial(tuple(sorted(rest.items())))

    def sort_key(self) -> tuple:
        # Graded lexicographic over variable index.
        return (self.degree(), self.exps)


_ONE_MONOMIAL = Monomial()


def _coerce_coeff(c) -> CycloRational:
    if isinstance(c, CycloRational):
        return c
    if isinstance(c, (int, Fraction)):
        return CycloRational.from_rational(c)
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


class MultiPoly:
    """Immutable sparse polynomial; `terms` maps Monomial -> nonzero CycloRational."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None) -> None:
        clean: dict[Monomial, CycloRational] = {}
        max_var = -1
        for mono, raw in (terms or {}).items():
            c = _coerce_coeff(raw)
            if c.is_zero():
                continue
            clean[mono] = c
            max_var = max(max_var, mono.max_var())
        if nvars < max_var + 1:
            raise ValueError(f"nvars={nvars} but a term uses variable {max_var}")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int = 0) -> MultiPoly:
        return cls(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int = 0) -> MultiPoly:
        return cls(nvars, {_ONE_MONOMIAL: _coerce_coeff(c)})

    @classmethod
    def variable(cls, v: int, nvars: int | None = None) -> MultiPoly:
        n = v + 1 if nvars is None else nvars
        return cls(n, {Monomial.make({v: 1}): CycloRational.one()})

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((m.degree() for m in self.terms), default=-1)

    def is_multilinear(self) -> bool:
        return all(m.is_multilinear() for m in self.terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {m.degree() for m in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def coefficient(self, mono: Monomial) -> CycloRational:
        return self.terms.get(mono, CycloRational.zero())

    def support_sets(self) -> set[frozenset[int]]:
        return {m.support() for m in self.terms}

    def sorted_terms(self) -> list[tuple[Monomial, CycloRational]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient_order(self) -> int:
        """lcm of the cyclotomic orders appearing among coefficients (1 if none)."""
        out = 1
        for c in self.terms.values():
            out = math.lcm(out, c.order)
        return out

    # -- ring operations -----------------------------------------------------

    def __add__(self, other) -> MultiPoly:
        other = self._coerce_poly(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            acc = out.get(mono)
            out[mono] = c if acc is None else acc + c
        return MultiPoly(max(self.nvars, other.nvars), out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce_poly(other))

    def __rsub__(self, other) -> MultiPoly:
        return (-self) + other

    def __mul__(self, other) -> MultiPoly:
        other = self._coerce_poly(other)
        out: dict[Monomial, CycloRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = m1 * m2
                c = c1 * c2
                acc = out.get(mono)
                out[mono] = c if acc is None else acc + c
        return MultiPoly(max(self.nvars, other.nvars), out)

    __rmul__ = __mul__

    def _coerce_poly(self, x) -> MultiPoly:
        if isinstance(x, MultiPoly):
            return x
        return MultiPoly.constant(x)

    # -- calculus and substitution --------------------------------------------

    def partial_derivative(self, v: int) -> MultiPoly:
        """Formal d/dx_v; terms not containing x_v vanish."""
        if not 0 <= v < self.nvars:
            raise ValueError(f"variable {v} outside universe of size {self.nvars}")
        out: dict[Monomial, CycloRational] = {}
        for mono, c in self.terms.items():
            d = mono.diff(v)
            if d is None:
                continue
            mult, reduced = d
            acc = out.get(reduced)
            contrib = c * mult
            out[reduced] = contrib if acc is None else acc + contrib
        return MultiPoly(self.nvars, out)

    def evaluate(self, point: Mapping[int, object]) -> CycloRational:
        """Exact evaluation; variables missing from `point` default to 0."""
        vals = {v: _coerce_coeff(c) for v, c in point.items()}
        total = CycloRational.zero()
        zero = CycloRational.zero()
        for mono, c in self.terms.items():
            acc = c
            for v, e in mono.exps:
                x = vals.get(v, zero)
                if x.is_zero():
                    acc = None
                    break
                acc = acc * x**e
            if acc is not None:
                total = total + acc
        return total

    def restrict_and_relabel(
        self,
        fixings: Mapping[int, object] | None = None,
        relabel: Mapping[int, int] | None = None,
        nvars: int | None = None,
    ) -> MultiPoly:
        """Substitute constants for the fixed variables, then rename the rest.

        Variables not mentioned in `relabel` keep their index.  The mapping
        must stay injective on the surviving variables.
        """
        fixings = {v: _coerce_coeff(c) for v, c in (fixings or {}).items()}
        relabel = dict(relabel or {})
        overlap = set(fixings) & set(relabel)
        if overlap:
            raise InvalidRelabellingError(f"variables both fixed and relabelled: {sorted(overlap)}")

        survivors = {v for m in self.terms for v in m.support()} - set(fixings)
        image = {}
        for v in survivors:
            t = relabel.get(v, v)
            if t in image:
                raise InvalidRelabellingError(f"variables {image[t]} and {v} both map to {t}")
            image[t] = v

        out: dict[Monomial, CycloRational] = {}
        for mono, c in self.terms.items():
            coeff = c
            kept: dict[int, int] = {}
            dead = False
            for v, e in mono.exps:
                if v in fixings:
                    x = fixings[v]
                    if x.is_zero():
                        dead = True
                        break
                    coeff = coeff * x**e
                else:
                    kept[relabel.get(v, v)] = e
            if dead:
                continue
            new_mono = Monomial.make(kept)
            acc = out.get(new_mono)
            out[new_mono] = coeff if acc is None else acc + coeff
        if nvars is None:
            nvars = max((t for t in image), default=-1) + 1
        return MultiPoly(nvars, out)

    # -- comparison and display ------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    __hash__ = None

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        table = VarTable.vector(self.nvars)
        parts = []
        for mono, c in self.sorted_terms():
            factors = [f"({c})"] + [
                table.name(v) + (f"^{e}" if e > 1 else "") for v, e in mono.exps
            ]
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<MultiPoly nvars={self.nvars} terms={len(self.terms)}>"


# ---------------------------------------------------------------------------
# Variable naming and the canonical text format.
# ---------------------------------------------------------------------------

def matrix_index(n: int, i: int, j: int) -> int:
    """Row-major flat index of the matrix variable a_{i,j}."""
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"({i},{j}) outside a {n}x{n} matrix")
    return n * i + j


class VarTable:
    """Bijection between human-readable variable names and flat indices."""

    def __init__(self, names: Iterable[str]) -> None:
        self.names = tuple(names)
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError("variable names must be distinct")

    @classmethod
    def vector(cls, n: int, prefix: str = "a") -> VarTable:
        return cls(f"{prefix}_{i}" for i in range(n))

    @classmethod
    def matrix(cls, n: int, prefix: str = "a") -> VarTable:
        return cls(f"{prefix}_{{{i},{j}}}" for i in range(n) for j in range(n))

    def __len__(self) -> int:
        return len(self.names)

    def name(self, index: int) -> str:
        return self.names[index]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise FormatError(f"unknown variable {name!r}") from None


_FORMAT_LINE = "# diffcomp-poly 1"
_VEC_RE = re.compile(r"^([A-Za-z]+)_(\d+)$")
_MAT_RE = re.compile(r"^([A-Za-z]+)_\{(\d+),(\d+)\}$")


def poly_to_text(p: MultiPoly, table: VarTable | None = None, order: int | None = None) -> str:
    """Serialize in the canonical format; `order` defaults to the coefficient lcm."""
    if table is None:
        table = VarTable.vector(p.nvars)
    if len(table) < p.nvars:
        raise ValueError("variable table smaller than the polynomial's universe")
    m = p.coefficient_order()
    if order is not None:
        m = math.lcm(m, order)
    # the declared universe is the table's, so sparse matrix listings keep
    # their square shape through a round trip
    lines = [_FORMAT_LINE, f"{len(table)} {m}"]
    for mono, c in p.sorted_terms():
        factors = [c.to_text()]
        for v, e in mono.exps:
            factors.append(table.name(v) + (f"^{e}" if e > 1 else ""))
        lines.append(" * ".join(factors))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ParsedPoly:
    poly: MultiPoly
    table: VarTable
    order: int


def poly_from_text(text: str) -> ParsedPoly:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FormatError("empty polynomial file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"bad polynomial header {lines[0]!r}")
    try:
        nvars, order = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError(f"bad polynomial header {lines[0]!r}") from exc
    if nvars < 0 or order < 1:
        raise FormatError(f"bad polynomial header {lines[0]!r}")

    style: str | None = None  # "vec" or "mat"
    prefix: str | None = None
    side = math.isqrt(nvars)
    terms: dict[Monomial, CycloRational] = {}

    def var_index(token: str) -> int:
        nonlocal style, prefix
        mv = _VEC_RE.match(token)
        mm = _MAT_RE.match(token)
        if mv:
            kind, pfx, idx = "vec", mv.group(1), int(mv.group(2))
        elif mm:
            if side * side != nvars:
                raise FormatError(f"matrix variable {token!r} in a non-square universe")
            i, j = int(mm.group(2)), int(mm.group(3))
            if i >= side or j >= side:
                raise FormatError(f"variable {token!r} outside the {side}x{side} matrix")
            kind, pfx, idx = "mat", mm.group(1), side * i + j
        else:
            raise FormatError(f"bad variable token {token!r}")
        if style is None:
            style, prefix = kind, pfx
        elif (style, prefix) != (kind, pfx):
            raise FormatError(f"inconsistent variable naming at {token!r}")
        if idx >= nvars:
            raise FormatError(f"variable {token!r} outside universe of size {nvars}")
        return idx

    for line in lines[1:]:
        pieces = [piece.strip() for piece in line.split(" * ")]
        coeff = CycloRational.from_text(pieces[0])
        exps: dict[int, int] = {}
        for token in pieces[1:]:
            name, _, exp_s = token.partition("^")
            e = 1
            if exp_s:
                try:
                    e = int(exp_s)
                except ValueError as exc:
                    raise FormatError(f"bad exponent in {token!r}") from exc
                if e < 1:
                    raise FormatError(f"bad exponent in {token!r}")
            v = var_index(name)
            exps[v] = exps.get(v, 0) + e
        mono = Monomial.make(exps)
        if mono in terms:
            raise FormatError(f"duplicate monomial on line {line!r}")
        terms[mono] = coeff

    if style == "mat":
        table = VarTable.matrix(side, prefix or "a")
    else:
        table = VarTable.vector(nvars, prefix or "a")
    return ParsedPoly(MultiPoly(nvars, terms), table, order)
