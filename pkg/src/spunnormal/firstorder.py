"""Leading-order systems of gluing equations along a degeneration vector.

Substituting z_i = t^{d_i} u_i into a multiplicative equation
prod z_i^{a_i} (1 - z_i)^{b_i} = c and letting t -> 0 kills the (1 - z_i)
factors of every tetrahedron with d_i > 0 and freezes the others, while
one chosen coordinate with d_i > 0 is folded into the parameter t itself
(normalized to 1).  What remains is a system of equations

    prod_{i != folded} beta_i^{a_i} * prod_{d_i = 0} (1 - beta_i)^{b_i} = c

in the surviving coordinates beta_i.  Solvability of this system is the
obstruction to the degeneration being realized to first order.

When d is totally positive no (1 - beta) factor survives, the system is
a pure monomial system beta^A' = signs, and solvability reduces to a sign
condition on the left kernel lattice of A' (monomial_sign_solvable).

Text emission grammar (emit_system), one equation per line::

    system   = { equation "\n" } ;
    equation = lhs " = " rhs ;
    lhs      = "1" | factor { " * " factor } ;
    factor   = var "^" integer | "(1-" var ")" "^" integer ;
    var      = "b" positive-integer ;
    rhs      = "1" | "-1" ;

Variables are printed 1-based: coordinate i (0-based) prints as b<i+1>,
factors in ascending coordinate order, the plain power before the (1-...)
power, exponents always explicit and nonzero.  parse_equations inverts
emit_system at the equation level.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import IntMatrix, left_kernel_lattice
from .gluing import EqRow


@dataclass(frozen=True)
class MonomialEquation:
    """One equation: prod beta_i^{e} * prod (1-beta_i)^{f} = rhs_sign.

    Exponent maps are stored as sorted (coordinate, exponent) pairs with
    nonzero exponents only.
    """

    beta: tuple[tuple[int, int], ...]
    one_minus: tuple[tuple[int, int], ...]
    rhs_sign: int

    def __post_init__(self):
        if self.rhs_sign not in (1, -1):
            raise ValueError("rhs sign must be +1 or -1")
        for pairs in (self.beta, self.one_minus):
            if any(e == 0 for _, e in pairs):
                raise ValueError("zero exponents must be omitted")
            if list(pairs) != sorted(pairs):
                raise ValueError("exponent pairs must be sorted by coordinate")

    @classmethod
    def from_maps(cls, beta: Mapping[int, int], one_minus: Mapping[int, int], rhs_sign: int):
        return cls(
            tuple(sorted((i, e) for i, e in beta.items() if e)),
            tuple(sorted((i, e) for i, e in one_minus.items() if e)),
            rhs_sign,
        )

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.beta) | frozenset(i for i, _ in self.one_minus)


@dataclass(frozen=True)
class FirstOrderSystem:
    """Leading-order system plus the data it was built from."""

    equations: tuple[MonomialEquation, ...]
    folded_index: int
    degeneration: tuple[int, ...]

    @property
    def variables(self) -> tuple[int, ...]:
        """Surviving coordinates, in order."""
        return tuple(
            i for i in range(len(self.degeneration)) if i != self.folded_index
        )

    def domain_flags(self) -> dict[int, str]:
        """Side conditions per variable: away from 0, and from 1 when the
        coordinate did not degenerate."""
        return {
            i: "nonzero" if self.degeneration[i] > 0 else "nonzero, not one"
            for i in self.variables
        }


def validate_degeneration(a: IntMatrix, d: Sequence[int]) -> bool:
    """True iff d is a nonzero nonnegative integer kernel vector of a."""
    d = tuple(int(x) for x in d)
    if len(d) != a.cols:
        return False
    if any(x < 0 for x in d) or not any(d):
        return False
    return not any(a.times_vector(d))


def build_first_order(rows: Sequence[EqRow], d: Sequence[int]) -> FirstOrderSystem:
    """Fold the smallest positively degenerating coordinate and keep the
    surviving factors of each equation.

    The z-exponent part of the rows must admit d as a degeneration vector.
    """
    rows = list(rows)
    d = tuple(int(x) for x in d)
    if not rows:
        raise ValueError("no equations given")
    n = len(rows[0].a)
    a = IntMatrix.from_rows([r.a for r in rows], cols=n)
    if not validate_degeneration(a, d):
        raise ValueError("d is not a nonzero nonnegative kernel vector of the exponents")
    folded = next(i for i, x in enumerate(d) if x > 0)
    equations = []
    for row in rows:
        beta = {i: row.a[i] for i in range(n) if i != folded}
        one_minus = {i: row.b[i] for i in range(n) if d[i] == 0}
        equations.append(MonomialEquation.from_maps(beta, one_minus, row.c))
    return FirstOrderSystem(tuple(equations), folded, d)


def is_trivially_inconsistent(fos: FirstOrderSystem) -> bool:
    """Syntactic check: some equation lost all its variables yet demands -1.

    Deliberately conservative; inconsistencies that still mention a
    variable (such as beta/(1-beta) = -1 forcing beta outside its domain)
    are not detected here.
    """
    return any(not eq.support and eq.rhs_sign == -1 for eq in fos.equations)


def monomial_sign_solvable(a: IntMatrix, signs: Sequence[int]) -> bool:
    """Solvability over (C*)^n of the pure monomial system x^A = signs.

    The image of the monomial map is cut out by the saturated left kernel
    lattice of A: the system has a solution iff every lattice basis vector
    y satisfies prod signs_i^{y_i} = 1.  With signs in {+1, -1} that is a
    parity condition on the negative rows selected by y.
    """
    signs = tuple(int(s) for s in signs)
    if len(signs) != a.rows:
        raise ValueError("need one sign per equation")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    for y in left_kernel_lattice(a):
        parity = sum(yi for yi, s in zip(y, signs) if s == -1)
        if parity % 2:
            return False
    return True


def _var(i: int) -> str:
    return "b%d" % (i + 1)


def emit_system(fos: FirstOrderSystem) -> str:
    """Render the system in the module grammar, deterministically."""
    lines = []
    for eq in fos.equations:
        factors = []
        exps = dict(eq.beta)
        one_m = dict(eq.one_minus)
        for i in sorted(exps.keys() | one_m.keys()):
            if i in exps:
                factors.append("%s^%d" % (_var(i), exps[i]))
            if i in one_m:
                factors.append("(1-%s)^%d" % (_var(i), one_m[i]))
        lhs = " * ".join(factors) if factors else "1"
        lines.append("%s = %d" % (lhs, eq.rhs_sign))
    return "\n".join(lines)


_FACTOR = re.compile(r"^(?:b(\d+)|\(1-b(\d+)\))\^(-?\d+)$")


def parse_equations(text: str) -> tuple[MonomialEquation, ...]:
    """Inverse of emit_system at the equation level."""
    out = []
    for lineno, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        try:
            lhs, rhs = line.split(" = ")
        except ValueError:
            raise ValueError("line %d: expected 'lhs = rhs'" % lineno) from None
        if rhs == "1":
            sign = 1
        elif rhs == "-1":
            sign = -1
        else:
            raise ValueError("line %d: rhs must be 1 or -1, got %r" % (lineno, rhs))
        beta: dict[int, int] = {}
        one_minus: dict[int, int] = {}
        if lhs != "1":
            for factor in lhs.split(" * "):
                m = _FACTOR.match(factor)
                if not m:
                    raise ValueError("line %d: bad factor %r" % (lineno, factor))
                plain, wrapped, exp = m.groups()
                target = beta if plain is not None else one_minus
                idx = int(plain if plain is not None else wrapped) - 1
                if idx < 0 or idx in target:
                    raise ValueError("line %d: bad variable in %r" % (lineno, factor))
                target[idx] = int(exp)
        out.append(MonomialEquation.from_maps(beta, one_minus, sign))
    return tuple(out)


@dataclass(frozen=True)
class EquationResidual:
    """Exact evaluation of one equation at a rational point."""

    equation: MonomialEquation
    lhs: Fraction
    matches: bool


def evaluate_system(
    fos: FirstOrderSystem, point: Mapping[int, Fraction]
) -> list[EquationResidual]:
    """Evaluate every equation at an exact rational point.

    The point maps surviving coordinate indices to Fractions.  Domain
    violations (a coordinate at 0, or at 1 where a (1-beta) factor class
    forbids it) raise rather than report.
    """
    flags = fos.domain_flags()
    for i in fos.variables:
        if i not in point:
            raise ValueError("no value for coordinate %d (%s)" % (i, _var(i)))
        v = Fraction(point[i])
        if v == 0:
            raise ValueError("%s = 0 is outside the domain" % _var(i))
        if v == 1 and flags[i] == "nonzero, not one":
            raise ValueError("%s = 1 is outside the domain" % _var(i))
    out = []
    for eq in fos.equations:
        lhs = Fraction(1)
        for i, e in eq.beta:
            lhs *= Fraction(point[i]) ** e
        for i, e in eq.one_minus:
            lhs *= (1 - Fraction(point[i])) ** e
        out.append(EquationResidual(eq, lhs, lhs == eq.rhs_sign))
    return out
