"""Generalized rank weights: exact oracles, bounds, estimates, MRD
certificates, MRD rank and degeneracy.

Two independent exact oracles are provided.  The subcode oracle minimizes
the closure dimension over all r-dimensional subcodes, enumerated through
the message space; the closed-space oracle scans Galois closed spaces
(equivalently, F_q row spaces) by increasing dimension and returns the
first dimension meeting the code in dimension >= r.  They must agree;
their enumeration costs differ by orders of magnitude depending on the
parameters, so the auto mode picks whichever is cheaper and the report
records which oracle produced each value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import linalg, rankmetric
from .codes import LinearCode, Reduction, dual_reduction
from .linalg import DEFAULT_BUDGET, gaussian_binomial


def _fmt_flag(v: Optional[bool]) -> str:
    return "unknown" if v is None else ("true" if v else "false")


def _fmt_int(v: Optional[int]) -> str:
    return "-" if v is None else str(v)


@dataclass
class GrwEntry:
    r: int
    lower: int
    upper: int
    exact: Optional[int]
    method: str

    def line(self) -> str:
        return (f"r={self.r} lower={self.lower} upper={self.upper} "
                f"exact={_fmt_int(self.exact)} method={self.method}")


@dataclass
class GrwReport:
    n: int
    k: int
    entries: List[GrwEntry] = field(default_factory=list)
    mrd: Optional[bool] = None
    defect: Optional[int] = None
    mrd_rank: Optional[int] = None
    degenerate: Optional[bool] = None

    def lines(self) -> List[str]:
        out = [e.line() for e in self.entries]
        out.append(f"mrd={_fmt_flag(self.mrd)} defect={_fmt_int(self.defect)} "
                   f"mrd_rank={_fmt_int(self.mrd_rank)} degenerate={_fmt_flag(self.degenerate)}")
        return out

    def table(self) -> List[int]:
        if any(e.exact is None for e in self.entries):
            raise ValueError("report holds intervals, not an exact table")
        return [e.exact for e in self.entries]

    def check_invariants(self, m: Optional[int] = None) -> None:
        """Interval sanity plus, when the table is exact, the Singleton cap
        and the sharp consecutive-difference bounds."""
        for e in self.entries:
            assert e.lower <= e.upper
            assert e.upper <= self.n
        exacts = [e.exact for e in self.entries]
        if self.entries and all(x is not None for x in exacts):
            prev = 0
            for r, d in enumerate(exacts, start=1):
                assert d <= self.n - self.k + r, "Singleton bound violated"
                if m is not None:
                    assert 1 <= d - prev <= m, "consecutive weights out of range"
                prev = d


def grw_exact_subcodes(code: LinearCode, r: int, budget: int = DEFAULT_BUDGET) -> int:
    """Minimum closure dimension over r-dimensional subcodes."""
    if not 1 <= r <= code.k:
        raise ValueError(f"r={r} outside 1..{code.k}")
    tower = code.tower
    best: Optional[int] = None
    for basis in linalg.subspace_bases(code.k, r, range(tower.order), budget):
        rows = [code.codeword(x) for x in basis]
        w = rankmetric.closure_dim(tower, rows, code.n)
        if best is None or w < best:
            best = w
            if best == r:
                break
    assert best is not None
    return best


def grw_exact_closed_spaces(code: LinearCode, r: int, budget: int = DEFAULT_BUDGET) -> int:
    """Smallest dimension of a Galois closed space meeting the code in
    dimension >= r; scans dimensions upward and stops at the first hit."""
    if not 1 <= r <= code.k:
        raise ValueError(f"r={r} outside 1..{code.k}")
    tower = code.tower
    remaining = budget
    G = [list(row) for row in code.G]
    for d in range(r, code.n + 1):
        for basis in linalg.subspace_bases(code.n, d, range(tower.p), remaining):
            inter = code.k + d - linalg.rank(G + basis, code.n, tower)
            if inter >= r:
                return d
        remaining -= gaussian_binomial(code.n, d, tower.p)
    raise AssertionError("the full space always meets the code")  # unreachable


def _subcode_cost(code: LinearCode) -> int:
    return sum(gaussian_binomial(code.k, r, code.tower.order) for r in range(1, code.k + 1))


def _closed_cost(code: LinearCode) -> int:
    dmax = rankmetric.closure_dim(code.tower, code.G, code.n)
    return sum(gaussian_binomial(code.n, d, code.tower.p) for d in range(1, dmax + 1))


def grw_table_exact(code: LinearCode, budget: int = DEFAULT_BUDGET,
                    method: str = "auto") -> Tuple[List[int], str]:
    """Exact table (d_{R,1}, ..., d_{R,k}) plus the oracle tag used."""
    if code.k == 0:
        return [], "oracle-subcode"
    if method == "auto":
        method = "subcodes" if _subcode_cost(code) <= _closed_cost(code) else "closed"
    if method == "subcodes":
        table = [grw_exact_subcodes(code, r, budget) for r in range(1, code.k + 1)]
        return table, "oracle-subcode"
    if method == "closed":
        return _closed_space_table(code, budget), "oracle-closed-space"
    raise ValueError(f"unknown oracle method {method!r}")


def _closed_space_table(code: LinearCode, budget: int) -> List[int]:
    tower = code.tower
    G = [list(row) for row in code.G]
    table: List[Optional[int]] = [None] * code.k
    filled = 0
    remaining = budget
    for d in range(1, code.n + 1):
        best_inter = 0
        for basis in linalg.subspace_bases(code.n, d, range(tower.p), remaining):
            inter = code.k + d - linalg.rank(G + basis, code.n, tower)
            if inter > best_inter:
                best_inter = inter
                if best_inter == code.k:
                    break
        for r in range(filled + 1, min(best_inter, code.k) + 1):
            table[r - 1] = d
        filled = max(filled, min(best_inter, code.k))
        if filled == code.k:
            break
        remaining -= gaussian_binomial(code.n, d, tower.p)
    assert all(x is not None for x in table)
    return table  # type: ignore[return-value]


def singleton_max_d1(m: int, n: int, k: int) -> int:
    """Largest first weight permitted by the rank-metric Singleton bound
    for an F_{q^m}-linear [n, k] code."""
    return min(m, n) + 1 - -(-(m * k) // max(m, n))


def singleton_check(m: int, n: int, k: int, d1_low: int,
                    d1_high: int) -> Tuple[Optional[bool], Optional[int]]:
    """(is_MRD, defect) from an exact value or interval for d_{R,1}.

    MRD means the code size exactly meets the bound; the defect is the
    distance to the largest d_{R,1} any code of this size could have.
    Interval inputs may leave either answer undecided (None).
    """
    if k == 0:
        return None, None
    d_max = singleton_max_d1(m, n, k)
    d1_high = min(d1_high, d_max)
    if d1_low == d1_high:
        d1 = d1_low
        is_mrd = m * k == max(m, n) * (min(m, n) - d1 + 1)
        return is_mrd, d_max - d1
    if d1_high < d_max:
        return False, None
    return None, None


def minplus(tables: Sequence[Sequence[int]], k: int) -> List[int]:
    """Min-plus convolution of per-component weight tables.

    tables[i][r-1] holds the r-th weight of component i; r_i = 0
    contributes 0.  Entry r of the result is the minimum of
    sum_i d_{r_i} over compositions r = sum r_i with 0 <= r_i <= k_i.
    """
    INF = float("inf")
    f: List[float] = [0.0] + [INF] * k
    for table in tables:
        k_i = len(table)
        g: List[float] = [INF] * (k + 1)
        for r in range(k + 1):
            if f[r] == INF:
                continue
            if f[r] < g[r]:
                g[r] = f[r]
            for r_i in range(1, min(k_i, k - r) + 1):
                v = f[r] + table[r_i - 1]
                if v < g[r + r_i]:
                    g[r + r_i] = v
        f = g
    assert f[k] != INF
    return [int(x) for x in f]


def grw_bounds_reducible(R: Reduction, budget: int = DEFAULT_BUDGET,
                         main_tables: Optional[Sequence[Sequence[int]]] = None,
                         row_tables: Optional[Sequence[Sequence[int]]] = None) -> GrwReport:
    """Interval report for a reducible code.

    Lower bounds come from min-plus composition of the main component
    tables, upper bounds from the row components, capped by the Singleton
    bound.  For cartesian reductions the two sides meet and the entries
    are exact.
    """
    tower = R.tower
    n, k = R.n, R.k
    if main_tables is None:
        main_tables = [grw_table_exact(R.main_component(i), budget)[0] for i in range(R.l)]
    if row_tables is None:
        row_tables = [grw_table_exact(R.row_component(i), budget)[0] for i in range(R.l)]
    low = minplus(main_tables, k)
    up_raw = minplus(row_tables, k)
    cart = R.is_cartesian()
    entries = []
    for r in range(1, k + 1):
        singleton = n - k + r
        upper = min(up_raw[r], singleton)
        lower = low[r]
        assert lower <= upper, "bounds crossed; this is a bug"
        exact = lower if lower == upper else None
        if cart:
            method = "cartesian-corollary"
        elif upper == up_raw[r]:
            method = "thm-grw-bounds"
        else:
            method = "singleton"
        entries.append(GrwEntry(r, lower, upper, exact, method))
    degenerate = rankmetric.closure_dim(tower, R.code().G, n) < n
    if k:
        mrd, defect = singleton_check(tower.m, n, k, entries[0].lower, entries[0].upper)
    else:
        mrd = defect = None
    mrd_rank = None
    if entries and all(e.exact is not None for e in entries):
        mrd_rank = mrd_rank_from_table([e.exact for e in entries], n, k)
    return GrwReport(n, k, entries, mrd, defect, mrd_rank, degenerate)


def grw_report_exact(code: LinearCode, budget: int = DEFAULT_BUDGET,
                     method: str = "auto") -> GrwReport:
    table, tag = grw_table_exact(code, budget, method)
    entries = [GrwEntry(r, d, d, d, tag) for r, d in enumerate(table, start=1)]
    degenerate = (table[-1] < code.n) if table else (code.n > 0)
    if code.k:
        mrd, defect = singleton_check(code.tower.m, code.n, code.k, table[0], table[0])
        mrd_rank = mrd_rank_from_table(table, code.n, code.k)
    else:
        mrd = defect = mrd_rank = None
    return GrwReport(code.n, code.k, entries, mrd, defect, mrd_rank, degenerate)


def grw_estimates_mrd(plan) -> List[int]:
    """Lower-bound table for the planned reducible code, via the closed
    forms; the (j, r) ranges must tile r = 1..k exactly."""
    l, t, s, kp, m, k = plan.l, plan.t, plan.s, plan.kprime, plan.m, plan.k
    vals: List[Optional[int]] = [None] * (k + 1)

    def put(r: int, v: int) -> None:
        assert 1 <= r <= k, f"estimate range leaked r={r}"
        assert vals[r] is None, f"estimate ranges overlap at r={r}"
        vals[r] = v

    if t <= s:
        for j in range(1, l - s + 1):
            for r in range((j - 1) * kp + 1, j * kp + 1):
                put(r, j * (m - kp) + r)
        for j in range(l - s + 1, l - s + t + 1):
            for r in range((j - 1) * (kp - 1) + l - s + 1, j * (kp - 1) + l - s + 1):
                put(r, j * (m - kp) + r)
        for j in range(l - s + t + 1, l + 1):
            for r in range((j - 1) * (kp - 1) + l - s + 1, j * (kp - 1) + l - s + 1):
                put(r, j * (m - kp) + r + (j - l + s - t))
    else:
        for j in range(1, t - s + 1):
            for r in range((j - 1) * kp + 1, j * kp + 1):
                put(r, j * (m - kp - 1) + r)
        for j in range(t - s + 1, l - s + 1):
            for r in range((j - 1) * kp + 1, j * kp + 1):
                put(r, j * (m - kp) + r - t + s)
        for j in range(l - s + 1, l + 1):
            for r in range((j - 1) * (kp - 1) + l - s + 1, j * (kp - 1) + l - s + 1):
                put(r, j * (m - kp) + r - t + s)
    assert all(v is not None for v in vals[1:]), "estimate ranges do not tile 1..k"
    return vals[1:]  # type: ignore[return-value]


def mrd_rank_from_table(table: Sequence[int], n: int, k: int) -> int:
    """Smallest r whose weight meets the Singleton bound; k+1 when even
    the last weight falls short (the degenerate case)."""
    for r in range(1, k + 1):
        if table[r - 1] == n - k + r:
            return r
    return k + 1


def mrd_rank(code: LinearCode, budget: int = DEFAULT_BUDGET) -> int:
    """MRD rank through the dual: k - d_{R,1}(C-perp) + 2, with the zero
    code assigned first weight n+1."""
    dual = code.dual()
    if dual.k == 0:
        d1 = code.n + 1
    else:
        d1, _ = grw_table_exact(dual, budget)
        d1 = d1[0]
    return code.k - d1 + 2


@dataclass
class MrdRankBounds:
    lower: int
    upper_columns: int
    upper_dual_blocks: int

    @property
    def interval(self) -> Tuple[int, int]:
        return self.lower, min(self.upper_columns, self.upper_dual_blocks)


def mrd_rank_bounds(R: Reduction, budget: int = DEFAULT_BUDGET) -> MrdRankBounds:
    """Bounds on k - r(C) for a reducible code: from the main components
    below, from the column components and the dual blocks above.

    Components of full dimension contribute no dual codewords, so they are
    excluded from every minimum (the n+1 convention for the zero code does
    not compose across blocks); when every component is full the code is
    the whole space and k - r(C) = n - 1 exactly.
    """
    trivial = R.n - 1  # k - r(C) for the full space; valid whenever nothing binds
    low_terms = [R.main_component(i).k - mrd_rank(R.main_component(i), budget)
                 for i in range(R.l) if R.dims[i] < R.lengths[i]]
    lower = min(low_terms) if low_terms else trivial
    col_terms = []
    for j in range(R.l):
        col = R.column_component(j)
        if col.k < R.lengths[j]:
            col_terms.append(col.k - mrd_rank(col, budget))
    upper_cols = min(col_terms) if col_terms else trivial
    D = dual_reduction(R)
    upper_blocks = None
    for i in range(R.l):
        if R.dims[i] == R.lengths[i]:
            continue  # empty dual row group: no codewords to bound with
        main = R.main_component(i)
        total = main.k - mrd_rank(main, budget)
        for j in range(i):
            H = D.block(i, j)
            if all(x == 0 for row in H for x in row):
                continue
            n_j = R.lengths[j]
            k_ij = n_j - linalg.rank(H, n_j, R.tower)
            dual_rows = linalg.rref_nonzero(H, n_j, R.tower)
            dual_code = LinearCode(R.tower, n_j, dual_rows)
            d1_dual, _ = grw_table_exact(dual_code, budget)
            r_ij = k_ij - d1_dual[0] + 2
            total += k_ij - r_ij + 2
        if upper_blocks is None or total < upper_blocks:
            upper_blocks = total
    if upper_blocks is None:
        upper_blocks = trivial
    return MrdRankBounds(lower, upper_cols, upper_blocks)


def is_degenerate(code: LinearCode) -> bool:
    """True when the closure does not fill the ambient space, i.e. the
    code could live on fewer coordinates after a rank equivalence."""
    return rankmetric.closure_dim(code.tower, code.G, code.n) < code.n


@dataclass
class DegeneracyReport:
    code_degenerate: bool
    main_degenerate: List[bool]
    column_degenerate: List[bool]

    def check_implications(self) -> None:
        if self.code_degenerate:
            assert any(self.main_degenerate), \
                "degenerate reducible code with no degenerate main component"
        if any(self.column_degenerate):
            assert self.code_degenerate, \
                "degenerate column component but non-degenerate code"


def degeneracy_report(R: Reduction) -> DegeneracyReport:
    report = DegeneracyReport(
        code_degenerate=is_degenerate(R.code()),
        main_degenerate=[is_degenerate(R.main_component(i)) if R.dims[i] else False
                         for i in range(R.l)],
        column_degenerate=[is_degenerate(R.column_component(j)) if R.column_component(j).k else False
                           for j in range(R.l)],
    )
    report.check_implications()
    return report


def dual_grw_upper(R: Reduction, budget: int = DEFAULT_BUDGET) -> List[int]:
    """Upper bounds on the dual code's weights via the column components:
    min-plus over the duals of the column components, for
    r = 1 .. n - k_hat.  Empty when the column components fill the code."""
    tower = R.tower
    khat = sum(R.column_component(j).k for j in range(R.l))
    if khat == R.n:
        return []
    tables = []
    for j in range(R.l):
        dual = R.column_component(j).dual()
        table, _ = grw_table_exact(dual, budget)
        tables.append(table)
    vals = minplus(tables, R.n - khat)
    return vals[1:]


def decompose_by_blocks(R: Reduction, rows: Sequence[Sequence[int]]) -> List[Tuple[int, List[List[int]]]]:
    """Split a subcode D of a reducible code into summands supported no
    earlier than their leading block.

    Returns [(i, basis_i), ...] with D the direct sum of the pieces, each
    piece's vectors having their first nonzero block at index i.  The
    pieces are read off the RREF of D grouped by pivot block.
    """
    tower = R.tower
    code = R.code()
    for row in rows:
        if not code.contains_vector(row):
            raise ValueError("the given space is not inside the code")
    reduced, pivots = linalg.rref(list(rows), R.n, tower)
    reduced = reduced[: len(pivots)]
    offsets = [R.col_offset(j) for j in range(R.l)] + [R.n]
    groups: dict[int, List[List[int]]] = {}
    for row, piv in zip(reduced, pivots):
        blk = next(i for i in range(R.l) if offsets[i] <= piv < offsets[i + 1])
        groups.setdefault(blk, []).append(list(row))
    return sorted(groups.items())
