"""Exact rational feasibility of linear systems.

Rows are (coeffs, const) meaning sum(coeffs[v] * x[v]) <= const (or == const
for equalities). Equalities are removed by substitution, inequalities by
variable elimination; a feasible system yields one exact solution point by
back-substitution. Intermediate row counts are capped to contain blow-up.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional

from .errors import CapacityError, InvariantViolationError

Var = Hashable
Row = tuple[dict, Fraction]

MAX_ROWS = 20000


def _clean(coeffs: Mapping[Var, Fraction]) -> dict:
    return {v: Fraction(a) for v, a in coeffs.items() if a != 0}


def _substitute(row: Row, var: Var, expr_coeffs: dict, expr_const: Fraction) -> Row:
    coeffs, const = row
    if var not in coeffs:
        return (dict(coeffs), const)
    b = coeffs[var]
    new = {v: a for v, a in coeffs.items() if v != var}
    for v, e in expr_coeffs.items():
        new[v] = new.get(v, Fraction(0)) + b * e
    return (_clean(new), const - b * expr_const)


def _normalize(rows: list[Row]) -> Optional[list[Row]]:
    """Drop satisfied constant rows, dedupe up to positive scaling, keep tightest consts.

    Returns None when a constant row is violated.
    """
    table: dict[tuple, Fraction] = {}
    for coeffs, const in rows:
        coeffs = _clean(coeffs)
        if not coeffs:
            if const < 0:
                return None
            continue
        lead = abs(coeffs[min(coeffs)])
        key = tuple(sorted((v, a / lead) for v, a in coeffs.items()))
        scaled = const / lead
        if key not in table or scaled < table[key]:
            table[key] = scaled
    out = []
    for key in sorted(table):
        out.append(({v: a for v, a in key}, table[key]))
    return out


def solve(
    inequalities: Iterable[Row],
    equalities: Iterable[Row] = (),
    variables: Iterable[Var] = (),
    max_rows: int = MAX_ROWS,
) -> Optional[dict]:
    """One exact solution of the system, or None when it is infeasible."""
    rows: list[Row] = [(_clean(c), Fraction(k)) for c, k in inequalities]
    pending: list[Row] = [(_clean(c), Fraction(k)) for c, k in equalities]
    originals = [(dict(c), Fraction(k), "le") for c, k in rows]
    originals += [(dict(c), Fraction(k), "eq") for c, k in pending]

    substitutions: list[tuple[Var, dict, Fraction]] = []
    while pending:
        coeffs, const = pending.pop(0)
        coeffs = _clean(coeffs)
        if not coeffs:
            if const != 0:
                return None
            continue
        var = min(coeffs)
        a = coeffs[var]
        expr_coeffs = {v: -b / a for v, b in coeffs.items() if v != var}
        expr_const = const / a
        substitutions.append((var, expr_coeffs, expr_const))
        pending = [_substitute(r, var, expr_coeffs, expr_const) for r in pending]
        rows = [_substitute(r, var, expr_coeffs, expr_const) for r in rows]

    rows = _normalize(rows)
    if rows is None:
        return None

    eliminations: list[tuple[Var, list, list]] = []
    while True:
        remaining = sorted({v for coeffs, _ in rows for v in coeffs})
        if not remaining:
            break

        def fill(v):
            pos = sum(1 for coeffs, _ in rows if coeffs.get(v, 0) > 0)
            neg = sum(1 for coeffs, _ in rows if coeffs.get(v, 0) < 0)
            return pos * neg

        var = min(remaining, key=lambda v: (fill(v), str(v)))
        uppers, lowers, rest = [], [], []
        for coeffs, const in rows:
            a = coeffs.get(var, Fraction(0))
            others = {v: b for v, b in coeffs.items() if v != var}
            if a > 0:
                uppers.append((others, a, const))
            elif a < 0:
                lowers.append((others, a, const))
            else:
                rest.append((coeffs, const))
        eliminations.append((var, uppers, lowers))
        for u_coeffs, a_u, k_u in uppers:
            for l_coeffs, a_l, k_l in lowers:
                coeffs = {v: -a_l * b for v, b in u_coeffs.items()}
                for v, b in l_coeffs.items():
                    coeffs[v] = coeffs.get(v, Fraction(0)) + a_u * b
                rest.append((coeffs, -a_l * k_u + a_u * k_l))
        rows = _normalize(rest)
        if rows is None:
            return None
        if len(rows) > max_rows:
            raise CapacityError(
                f"variable elimination produced more than {max_rows} rows"
            )

    values: dict = {}

    def evaluate(coeffs: dict) -> Fraction:
        return sum((b * values[v] for v, b in coeffs.items()), Fraction(0))

    for var, uppers, lowers in reversed(eliminations):
        ubs = [(k - evaluate(c)) / a for c, a, k in uppers]
        lbs = [(k - evaluate(c)) / a for c, a, k in lowers]
        lo = max(lbs) if lbs else None
        hi = min(ubs) if ubs else None
        if lo is not None and hi is not None and lo > hi:
            raise InvariantViolationError("bound inversion during back-substitution")
        if lo is not None:
            values[var] = lo
        elif hi is not None:
            values[var] = min(hi, Fraction(0))
        else:
            values[var] = Fraction(0)

    for var, expr_coeffs, expr_const in reversed(substitutions):
        values[var] = expr_const + evaluate(expr_coeffs)

    for v in variables:
        values.setdefault(v, Fraction(0))

    for coeffs, const, relation in originals:
        lhs = sum((b * values.get(v, Fraction(0)) for v, b in coeffs.items()), Fraction(0))
        if relation == "eq" and lhs != const:
            raise InvariantViolationError("reconstructed point violates an equality")
        if relation == "le" and lhs > const:
            raise InvariantViolationError("reconstructed point violates an inequality")
    return values
