"""Exact rational linear feasibility and optimisation.

Rows are ``(coeffs, op, rhs)`` with ``coeffs`` a ``{var_index: number}``
dict, ``op`` one of ``">="``, ``"<="``, ``"="``; every variable is
implicitly ``>= 0``.  Inputs may be ints or Fractions; results are
Fractions and never pass through floating point.

The simplex is the dictionary method with Bland's rule.  Phase one uses a
single auxiliary variable; phase two maximises a linear objective when one
is given.  The tableau is kept fraction-free: all entries are integers
over one common denominator, and each pivot divides exactly by the
previous denominator (integer-preserving Gauss-Jordan steps).

Feasibility checks first eliminate equality rows exactly and then add
inequality rows lazily, only when the current point violates them.  That
keeps the tableau small for region problems, where only a handful of the
arc rows are ever tight.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Row = tuple  # (dict[int, number], str, number)

ZERO = Fraction(0)
ROWS_PER_ROUND = 5  # violated rows added per round, most violated first


def _normalize(coeffs: dict, rhs) -> tuple[tuple, Fraction] | None:
    """Scale a ``>=`` row to primitive integer coefficients; None if it has none."""
    items = [(j, Fraction(c)) for j, c in coeffs.items() if c]
    if not items:
        return None
    den = 1
    for _, c in items:
        den = lcm(den, c.denominator)
    ints = [(j, int(c * den)) for j, c in items]
    g = 0
    for _, c in ints:
        g = gcd(g, c)
    return tuple(sorted((j, c // g) for j, c in ints)), Fraction(rhs) * den / g


class _Elimination:
    """Solve equality rows for some variables in terms of the others."""

    def __init__(self):
        self.expr: dict[int, tuple[Fraction, dict]] = {}  # var -> (const, coeffs)
        self._int: dict = {}  # integer forms of finished expressions

    def substitute(self, coeffs: dict, rhs) -> tuple[dict, Fraction]:
        out: dict = {}
        rhs = Fraction(rhs)
        for j, c in coeffs.items():
            if not c:
                continue
            e = self.expr.get(j)
            if e is None:
                out[j] = out.get(j, 0) + c
            else:
                const, lin = e
                rhs -= c * const
                for k, d in lin.items():
                    out[k] = out.get(k, 0) + c * d
        return {j: c for j, c in out.items() if c}, rhs

    def add(self, coeffs: dict, rhs) -> bool:
        self._int.clear()
        coeffs, rhs = self.substitute(coeffs, rhs)
        if not coeffs:
            return rhs == 0
        unit = [j for j, c in coeffs.items() if c in (1, -1)]
        p = min(unit) if unit else min(coeffs)
        cp = Fraction(coeffs.pop(p))
        const = rhs / cp
        lin = {j: -Fraction(c) / cp for j, c in coeffs.items()}
        for v, (k0, kl) in list(self.expr.items()):
            d = kl.get(p)
            if d:
                nl = dict(kl)
                del nl[p]
                for j, c in lin.items():
                    nl[j] = nl.get(j, 0) + d * c
                self.expr[v] = (k0 + d * const, {j: c for j, c in nl.items() if c})
        self.expr[p] = (const, lin)
        return True

    def value_scaled(self, var: int, nums: dict, den: int) -> Fraction:
        """Value of ``var`` when each free variable j equals ``nums[j] / den``."""
        e = self.expr.get(var)
        if e is None:
            return Fraction(nums.get(var, 0), den)
        if var not in self._int:
            const, lin = e
            d = const.denominator
            for c in lin.values():
                d = lcm(d, c.denominator)
            self._int[var] = (int(const * d), [(j, int(c * d)) for j, c in lin.items()], d)
        k, lin, d = self._int[var]
        return Fraction(k * den + sum(c * nums.get(j, 0) for j, c in lin), d * den)

    def value(self, var: int, point: dict) -> Fraction:
        e = self.expr.get(var)
        if e is None:
            return point.get(var, ZERO)
        const, lin = e
        return const + sum((c * point.get(j, ZERO) for j, c in lin.items()), ZERO)


class _Tableau:
    """Fraction-free dictionary.

    Row ``i`` stands for ``den * x_B(i) + sum_j m[i][j] * x_N(j) = b[i]``,
    so ``x_B(i) = (b[i] - sum_j m[i][j] x_N(j)) / den``; the objective row
    has the same shape with ``z`` in place of ``x_B(i)``.  ``den`` is kept
    positive.  Variable ids: 0 is the auxiliary variable, 1..n the
    structural variables, n+1.. the slacks, one per row.
    """

    def __init__(self, n: int, rows: Sequence[tuple[Sequence[int], int]]):
        """``rows`` are integer ``(dense_coeffs, rhs)`` pairs meaning ``coeffs.x >= rhs``."""
        self.n = n
        self.den = 1
        self.nonbasic = list(range(0, n + 1))
        self.basic = [n + 1 + i for i in range(len(rows))]
        # slack w = coeffs.x + x0 - rhs  <=>  w - x0 - coeffs.x = -rhs
        self.m = [[-1] + [-c for c in dense] for dense, _ in rows]
        self.b = [-rhs for _, rhs in rows]
        self.obj = [1] + [0] * n  # z = -x0  <=>  z + x0 = 0
        self.obj_b = 0

    def pivot(self, r: int, c: int):
        m, b, den = self.m, self.b, self.den
        row = m[r]
        a = row[c]
        br = b[r]
        for i, ri in enumerate(m):
            if i == r:
                continue
            f = ri[c]
            if f:
                m[i] = [(a * x - f * y) // den for x, y in zip(ri, row)]
                m[i][c] = -f
                b[i] = (a * b[i] - f * br) // den
            elif a != den:
                m[i] = [a * x // den for x in ri]
                b[i] = a * b[i] // den
        f = self.obj[c]
        if f:
            self.obj = [(a * x - f * y) // den for x, y in zip(self.obj, row)]
            self.obj[c] = -f
            self.obj_b = (a * self.obj_b - f * br) // den
        elif a != den:
            self.obj = [a * x // den for x in self.obj]
            self.obj_b = a * self.obj_b // den
        row[c] = den
        self.den = a
        self.basic[r], self.nonbasic[c] = self.nonbasic[c], self.basic[r]
        if a < 0:
            self.den = -a
            for i, ri in enumerate(m):
                m[i] = [-x for x in ri]
                b[i] = -b[i]
            self.obj = [-x for x in self.obj]
            self.obj_b = -self.obj_b

    def optimise(self) -> bool:
        """Bland's rule; True at optimum, False if unbounded."""
        while True:
            cands = [(self.nonbasic[j], j) for j, v in enumerate(self.obj) if v < 0]
            if not cands:
                return True
            _, c = min(cands)
            best = None
            for i, row in enumerate(self.m):
                a = row[c]
                if a > 0:
                    # ratio b[i] / a; prefer the auxiliary variable, then Bland
                    if best is None:
                        best = (i, a)
                        continue
                    j, aj = best
                    lhs, rhs = self.b[i] * aj, self.b[j] * a
                    if lhs < rhs or (lhs == rhs and (self.basic[i] != 0, self.basic[i])
                                     < (self.basic[j] != 0, self.basic[j])):
                        best = (i, a)
            if best is None:
                return False
            self.pivot(best[0], c)

    def phase_one(self) -> bool:
        if not self.b or min(self.b) >= 0:
            return True
        r = min(range(len(self.b)), key=lambda i: (self.b[i], self.basic[i]))
        self.pivot(r, 0)
        self.optimise()
        return self.obj_b == 0

    def point(self) -> list[Fraction]:
        x = [ZERO] * (self.n + 1)
        for i, v in enumerate(self.basic):
            if v <= self.n:
                x[v] = Fraction(self.b[i], self.den)
        return x[1:]

    def point_scaled(self) -> tuple[list[int], int]:
        """Structural values as integer numerators over ``den``."""
        x = [0] * (self.n + 1)
        for i, v in enumerate(self.basic):
            if v <= self.n:
                x[v] = self.b[i]
        return x[1:], self.den

    def drop_auxiliary(self):
        """Remove x0 after a successful phase one."""
        if 0 in self.basic:
            r = self.basic.index(0)
            # x0 is basic at value 0: swap it with any nonbasic column it uses
            for c, a in enumerate(self.m[r]):
                if a:
                    self.pivot(r, c)
                    break
            else:
                del self.basic[r], self.b[r], self.m[r]
        c = self.nonbasic.index(0)
        del self.nonbasic[c]
        for row in self.m:
            del row[c]
        del self.obj[c]


def _integer_row(dense: Sequence, rhs) -> tuple[list[int], int]:
    vals = [Fraction(c) for c in dense] + [Fraction(rhs)]
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    return ints[:-1], ints[-1]


def _dense_ge(rows: Iterable[Row], n: int) -> list[tuple[list[int], int]]:
    out = []
    for coeffs, op, rhs in rows:
        dense = [ZERO] * n
        for j, c in coeffs.items():
            dense[j] += Fraction(c)
        rhs = Fraction(rhs)
        if op in (">=", "="):
            out.append(_integer_row(dense, rhs))
        if op in ("<=", "="):
            out.append(_integer_row([-c for c in dense], -rhs))
        if op not in (">=", "<=", "="):
            raise ValueError(f"unknown relation {op!r}")
    return out


def maximise(n: int, rows: Iterable[Row], objective: dict):
    """Two-phase simplex.  Returns ``("optimal", x, value)``, ``("infeasible",)``
    or ``("unbounded",)``."""
    tab = _Tableau(n, _dense_ge(rows, n))
    if not tab.phase_one():
        return ("infeasible",)
    tab.drop_auxiliary()
    scale = 1
    for c in objective.values():
        scale = lcm(scale, Fraction(c).denominator)
    cost = {j + 1: int(Fraction(c) * scale) for j, c in objective.items()}
    # z = cost.x written over the current dictionary
    pos = {v: j for j, v in enumerate(tab.nonbasic)}
    obj = [0] * len(tab.nonbasic)
    obj_b = 0
    for v, c in cost.items():
        if v in pos:
            obj[pos[v]] -= tab.den * c
    for i, v in enumerate(tab.basic):
        c = cost.get(v, 0)
        if c:
            obj_b += c * tab.b[i]
            for j, x in enumerate(tab.m[i]):
                obj[j] += c * x
    tab.obj, tab.obj_b = obj, obj_b
    if not tab.optimise():
        return ("unbounded",)
    return ("optimal", tab.point(), Fraction(tab.obj_b, tab.den * scale))


class Presolved:
    """A system with its equality rows eliminated, ready for repeated checks.

    :meth:`solve` adds further rows on top without redoing the elimination,
    which is what region problems need: one base system, many strict rows.
    """

    def __init__(self, n: int, rows: Iterable[Row]):
        self.n = n
        self.elim = _Elimination()
        self.infeasible = False
        ineq = []
        for coeffs, op, rhs in rows:
            if op == "=":
                if not self.elim.add(coeffs, rhs):
                    self.infeasible = True
            else:
                ineq.append(_as_ge(coeffs, op, rhs))
        # eliminated variables must stay non-negative
        for const, lin in self.elim.expr.values():
            ineq.append((dict(lin), -const))
        self.rows: dict = {}
        for coeffs, rhs in ineq:
            if not self._keep(self.rows, coeffs, rhs):
                self.infeasible = True

    def _keep(self, table: dict, coeffs: dict, rhs) -> bool:
        """Reduce one row into ``table``; False if it is plainly infeasible."""
        coeffs, rhs = self.elim.substitute(coeffs, rhs)
        norm = _normalize(coeffs, rhs)
        if norm is None:
            return rhs <= 0
        key, r = norm
        if all(c >= 0 for _, c in key) and r <= 0:
            return True
        if all(c <= 0 for _, c in key) and r > 0:
            return False
        if key not in table or table[key] < r:
            table[key] = r
        return True

    def solve(self, extra: Iterable[Row] = ()) -> list[Fraction] | None:
        if self.infeasible:
            return None
        table = dict(self.rows)
        for coeffs, op, rhs in extra:
            if op == "=":
                raise ValueError("extra rows must be inequalities")
            if not self._keep(table, *_as_ge(coeffs, op, rhs)):
                return None
        free = sorted({j for key in table for j, _ in key})
        col = {j: k for k, j in enumerate(free)}
        system = []
        for key, r in table.items():
            # clear the rhs denominator so each row is all-integer
            system.append(([(col[j], c * r.denominator) for j, c in key], r.numerator))
        sol = _lazy_feasible(len(free), system)
        if sol is None:
            return None
        nums, den = sol
        point = {j: nums[col[j]] for j in free}
        return [self.elim.value_scaled(v, point, den) for v in range(self.n)]


def _as_ge(coeffs: dict, op: str, rhs) -> tuple[dict, Fraction]:
    if op == ">=":
        return coeffs, Fraction(rhs)
    if op == "<=":
        return {j: -c for j, c in coeffs.items()}, -Fraction(rhs)
    raise ValueError(f"unknown relation {op!r}")


def feasible(n: int, rows: Iterable[Row]) -> list[Fraction] | None:
    """A rational point satisfying ``rows`` with all variables >= 0, or None."""
    return Presolved(n, rows).solve()


def _lazy_feasible(n: int, system: list[tuple[list, int]]) -> tuple[list[int], int] | None:
    """Feasibility of integer rows ``sum(c * x_j) >= r``, adding rows on demand.

    Returns the point as integer numerators over a common denominator.
    """
    active = [k for k, (_, r) in enumerate(system) if r > 0]
    if not active:
        return [0] * n, 1
    in_active = set(active)
    while True:
        rows = []
        for k in active:
            coeffs, r = system[k]
            dense = [0] * n
            for j, c in coeffs:
                dense[j] = c
            rows.append((dense, r))
        tab = _Tableau(n, rows)
        if not tab.phase_one():
            return None
        x, den = tab.point_scaled()
        violated = []
        for k, (coeffs, r) in enumerate(system):
            if k in in_active:
                continue
            if sum(c * x[j] for j, c in coeffs) < r * den:
                violated.append(k)
        if not violated:
            return x, den
        violated.sort(key=lambda k: (sum(c * x[j] for j, c in system[k][0]) - system[k][1] * den, k))
        violated = violated[:ROWS_PER_ROUND]
        active.extend(violated)
        in_active.update(violated)


def satisfies(point: Sequence, rows: Iterable[Row]) -> bool:
    if any(v < 0 for v in point):
        return False
    for coeffs, op, rhs in rows:
        lhs = sum(Fraction(c) * point[j] for j, c in coeffs.items())
        if op == ">=" and not lhs >= rhs:
            return False
        if op == "<=" and not lhs <= rhs:
            return False
        if op == "=" and lhs != rhs:
            return False
    return True
