"""ILP compression of (d,1)-domination parameterized by itp + d.

The graph is written as H(G_1, ..., G_itp) with cograph modules G_i.  A
binary x_i^t selects a minimum (t,1)-dominating set of G_i.  Rows:

* ``budget``: sum of c_i(t) x_i^t <= k
* ``demand_i``: sum over neighbours j of H and t of c_j(t) x_j^t, plus
  sum_t t x_i^t, is at least d
* ``choice_i``: sum_t x_i^t <= 1
* all variables binary

Instances serialise to CPLEX LP text.  Coefficients are reported as they
are; no coefficient shrinking is attempted.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from ..decomposition import itp_number
from ..graph import Graph, InvariantError, OracleCapExceeded
from ..solver import EXTENDED, ModularDP

DEFAULT_ENUMERATION_CAP = 10**8
ENUMERATION_CAP_ENV = "DRDOM_ILP_CAP"

_VAR = re.compile(r"^x_(\d+)_(\d+)$")


def var_name(i: int, t: int) -> str:
    """Variable for module i (0-based internally, 1-based in the text) and demand t."""
    return f"x_{i + 1}_{t}"


def parse_var(name: str) -> tuple[int, int]:
    m = _VAR.match(name)
    if not m:
        raise ValueError(f"not an ILP variable: {name!r}")
    return int(m.group(1)) - 1, int(m.group(2))


@dataclass
class LpRow:
    name: str
    coeffs: dict[str, int]
    sense: str  # "<=" or ">="
    rhs: int


@dataclass
class IlpInstance:
    d: int
    budget: int
    quotient: Graph
    modules: list[tuple[int, ...]]
    costs: list[list[int]]  # costs[i][t-1] = c_{M_i}(t)
    objective: dict[str, int]
    rows: list[LpRow]
    binaries: list[str]
    _dps: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def itp(self) -> int:
        return self.quotient.n

    @property
    def variables(self) -> list[str]:
        return list(self.binaries)

    def encoding_size(self) -> dict[str, int]:
        coeffs = [c for row in self.rows for c in row.coeffs.values()] + [r.rhs for r in self.rows]
        return {
            "variables": len(self.binaries),
            "rows": len(self.rows),
            "nonzeros": sum(len(r.coeffs) for r in self.rows),
            "max_coefficient": max(coeffs, default=0),
            "coefficient_bits": sum(max(1, abs(c).bit_length()) for c in coeffs),
        }

    def assignment(self, choice) -> dict[str, int]:
        """0/1 values for a per-module choice vector (0 = none, else t)."""
        values = dict.fromkeys(self.binaries, 0)
        for i, t in enumerate(choice):
            if t:
                values[var_name(i, t)] = 1
        return values

    def is_feasible(self, choice) -> bool:
        values = self.assignment(choice)
        for row in self.rows:
            lhs = sum(c * values.get(name, 0) for name, c in row.coeffs.items())
            if (row.sense == "<=" and lhs > row.rhs) or (row.sense == ">=" and lhs < row.rhs):
                return False
        return True

    def to_lp(self) -> str:
        def expr(coeffs: dict[str, int]) -> str:
            if not coeffs:
                return "0 " + self.binaries[0] if self.binaries else "0"
            terms = []
            for k, (name, c) in enumerate(coeffs.items()):
                sign = "-" if c < 0 else ("+" if k else "")
                terms.append(f"{sign} {abs(c)} {name}".strip())
            return " ".join(terms)

        lines = [f"\\ (d,1)-domination ILP: itp={self.itp} d={self.d} k={self.budget}", "Minimize",
                 f" obj: {expr(self.objective)}", "Subject To"]
        for row in self.rows:
            lines.append(f" {row.name}: {expr(row.coeffs)} {row.sense} {row.rhs}")
        lines.append("Binaries")
        lines.append(" " + " ".join(self.binaries))
        lines.append("End")
        return "\n".join(lines) + "\n"


def _parse_expr(text: str) -> dict[str, int]:
    coeffs: dict[str, int] = {}
    for sign, coef, name in re.findall(r"([+-]?)\s*(\d+)\s+([A-Za-z_][\w]*)", text):
        value = int(coef) * (-1 if sign == "-" else 1)
        coeffs[name] = coeffs.get(name, 0) + value
    return {k: v for k, v in coeffs.items() if v}


def parse_lp(text: str) -> tuple[dict[str, int], list[LpRow], list[str]]:
    """Read back the objective, rows and binaries written by :meth:`IlpInstance.to_lp`."""
    section = None
    objective: dict[str, int] = {}
    rows: list[LpRow] = []
    binaries: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "maximize", "subject to", "binaries", "end"):
            section = low
            continue
        if section == "minimize":
            objective = _parse_expr(line.split(":", 1)[1])
        elif section == "subject to":
            name, body = line.split(":", 1)
            m = re.match(r"(.*?)(<=|>=)\s*(-?\d+)\s*$", body)
            if not m:
                raise ValueError(f"cannot parse row {line!r}")
            rows.append(LpRow(name.strip(), _parse_expr(m.group(1)), m.group(2), int(m.group(3))))
        elif section == "binaries":
            binaries.extend(line.split())
    return objective, rows, binaries


def build_ilp(g: Graph, d: int, k: int) -> IlpInstance:
    """Build the ILP from the iterated type partition of ``g``.

    Module costs are exact minima from the extended cost-table DP.
    """
    if d < 1:
        raise ValueError("demand must be positive")
    itp = itp_number(g)
    h = itp.quotient
    modules = itp.modules
    costs, dps = [], {}
    for i, members in enumerate(modules):
        dp = ModularDP(g.induced(members), d)
        table = dp.run(EXTENDED)
        costs.append([int(table.values[t]) for t in range(1, d + 1)])
        dps[i] = dp
    objective = {var_name(i, t): costs[i][t - 1] for i in range(h.n) for t in range(1, d + 1)}
    rows = [LpRow("budget", dict(objective), "<=", k)]
    for i in range(h.n):
        coeffs: dict[str, int] = {}
        for j in sorted(h.neighbors(i) + (i,)):
            for t in range(1, d + 1):
                coeffs[var_name(j, t)] = t if j == i else costs[j][t - 1]
        rows.append(LpRow(f"demand_{i + 1}", coeffs, ">=", d))
    for i in range(h.n):
        rows.append(LpRow(f"choice_{i + 1}", {var_name(i, t): 1 for t in range(1, d + 1)}, "<=", 1))
    binaries = [var_name(i, t) for i in range(h.n) for t in range(1, d + 1)]
    return IlpInstance(d, k, h, list(modules), costs, objective, rows, binaries, dps)


@dataclass(frozen=True)
class IlpSolution:
    choice: tuple[int, ...]  # per module: 0 for none, else the selected t
    objective: int
    steps: int

    def ones(self) -> list[str]:
        return [var_name(i, t) for i, t in enumerate(self.choice) if t]


def solve_ilp_enumeration(ilp: IlpInstance, cap: int | None = None) -> IlpSolution | None:
    """Minimum-objective feasible 0/1 point, or ``None`` if infeasible.

    Each module picks at most one of its variables, so the search runs over
    per-module choices in lexicographic order (none < 1 < ... < d) and prunes
    rows that can no longer be met.  Ties keep the lexicographically first.
    """
    cap = int(os.environ.get(ENUMERATION_CAP_ENV, DEFAULT_ENUMERATION_CAP)) if cap is None else cap
    groups: dict[int, dict[int, str]] = {}
    for name in ilp.binaries:
        i, t = parse_var(name)
        groups.setdefault(i, {})[t] = name
    order = sorted(groups)
    space = 1
    for i in order:
        space *= len(groups[i]) + 1
    if space > cap:
        raise OracleCapExceeded(f"ILP enumeration space {space} exceeds cap {cap}")

    rows = ilp.rows
    # per row, per group: the largest / smallest coefficient among its variables (0 for "none")
    row_hi = [[max([0] + [row.coeffs.get(n, 0) for n in groups[i].values()]) for i in order] for row in rows]
    row_lo = [[min([0] + [row.coeffs.get(n, 0) for n in groups[i].values()]) for i in order] for row in rows]
    touches = [[r for r, row in enumerate(rows) if any(n in row.coeffs for n in groups[i].values())]
               for i in order]
    lhs = [0] * len(rows)
    hi_rest = [sum(h) for h in row_hi]
    lo_rest = [sum(lo) for lo in row_lo]
    choice = [0] * len(order)
    best: list = [None, None]
    steps = 0

    def row_ok(r: int) -> bool:
        row = rows[r]
        if row.sense == ">=":
            return lhs[r] + hi_rest[r] >= row.rhs
        return lhs[r] + lo_rest[r] <= row.rhs

    def dfs(pos: int, cost: int) -> None:
        nonlocal steps
        if pos == len(order):
            if best[0] is None or cost < best[0]:
                best[0], best[1] = cost, tuple(choice)
            return
        gi = order[pos]
        options = [(0, None)] + sorted(groups[gi].items())
        for t, name in options:
            steps += 1
            add = ilp.objective.get(name, 0) if name else 0
            if best[0] is not None and cost + add >= best[0]:
                continue
            for r in touches[pos]:
                lhs[r] += rows[r].coeffs.get(name, 0) if name else 0
                hi_rest[r] -= row_hi[r][pos]
                lo_rest[r] -= row_lo[r][pos]
            if all(row_ok(r) for r in touches[pos]):
                choice[pos] = t
                dfs(pos + 1, cost + add)
                choice[pos] = 0
            for r in touches[pos]:
                lhs[r] -= rows[r].coeffs.get(name, 0) if name else 0
                hi_rest[r] += row_hi[r][pos]
                lo_rest[r] += row_lo[r][pos]

    # rows with no variables at all must hold on their own
    if any(not any(r in t for t in touches) and not row_ok(r) for r in range(len(rows))):
        return None
    dfs(0, 0)
    if best[0] is None:
        return None
    full = [0] * (max(order) + 1 if order else 0)
    for pos, i in enumerate(order):
        full[i] = best[1][pos]
    return IlpSolution(tuple(full), best[0], steps)


def expand_ilp_solution(g: Graph, ilp: IlpInstance, sol: IlpSolution) -> tuple[int, ...]:
    """Union of one minimum (t,1)-dominating set per selected module, in original ids."""
    chosen: list[int] = []
    for i, t in enumerate(sol.choice):
        if not t:
            continue
        members = ilp.modules[i]
        dp = ilp._dps.get(i)
        if dp is None:
            dp = ilp._dps[i] = ModularDP(g.induced(members), ilp.d)
        local = dp.witness(EXTENDED, t)
        if len(local) != ilp.costs[i][t - 1]:
            raise InvariantError("module witness size disagrees with its cost")
        chosen.extend(members[v] for v in local)
    return tuple(sorted(chosen))
