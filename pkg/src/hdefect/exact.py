"""Exact rational tangent systems over a cyclotomic integer ring.

For a matrix whose phases are q-th roots of unity, each pair equation has
coefficients in Z[x]/Phi_q(x). Expanding over the power basis turns one pair
equation into phi(q) integer rows; the rational nullity of the stacked system
is the dimension of the rational part of the tangent space. Comparing it with
the certified numeric defect tests whether the tangent space has a rational
basis at this instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclotomic import euler_phi, power_reduction_table
from .errors import CapExceededError, NonExactError
from .matrices import HadamardMatrix
from .tangent import DEFAULT_GAP_THRESHOLD, DEFAULT_REL_TOL, undephased_defect

DEFAULT_DEGREE_CAP = 64

SUPPORTED = "SUPPORTED"
REFUTED_AT_INSTANCE = "REFUTED-at-this-instance"


@dataclass(frozen=True)
class ExactSystem:
    """Pair equations with coefficients stored as power-basis integer vectors."""

    root_order: int
    degree: int
    n: int
    pairs: tuple[tuple[int, int], ...]
    exponents: tuple[tuple[int, ...], ...]  # per pair, the root power for each column b
    provenance: str

    def coefficient(self, pair_index: int, a: int, b: int) -> tuple[int, ...]:
        """Power-basis vector of the coefficient on unknown A_ab in the given pair row."""
        i, j = self.pairs[pair_index]
        sign = (1 if a == i else 0) - (1 if a == j else 0)
        if sign == 0:
            return (0,) * self.degree
        table = power_reduction_table(self.root_order)
        vec = table[self.exponents[pair_index][b]]
        return tuple(int(sign * v) for v in vec)

    def integer_rows(self) -> list[list[int]]:
        """The phi(q) * len(pairs) integer rows over the N^2 unknowns."""
        table = power_reduction_table(self.root_order)
        rows = []
        n = self.n
        for (i, j), exps in zip(self.pairs, self.exponents):
            vecs = [table[m] for m in exps]
            for t in range(self.degree):
                row = [0] * (n * n)
                for b in range(n):
                    v = int(vecs[b][t])
                    row[i * n + b] = v
                    row[j * n + b] = -v
                rows.append(row)
        return rows

    def evaluate_pair(self, pair_index: int) -> np.ndarray:
        """Complex coefficient row of the pair equation at x = e^(2 pi i / q)."""
        basis = np.exp(2j * np.pi * np.arange(self.degree) / self.root_order)
        i, j = self.pairs[pair_index]
        table = power_reduction_table(self.root_order)
        n = self.n
        row = np.zeros(n * n, dtype=complex)
        for b in range(n):
            value = table[self.exponents[pair_index][b]] @ basis
            row[i * n + b] = value
            row[j * n + b] = -value
        return row


def build_exact_system(h: HadamardMatrix, degree_cap: int = DEFAULT_DEGREE_CAP) -> ExactSystem:
    """Exact pair system of an exact-phase matrix; q is the common phase order."""
    if not h.is_exact:
        raise NonExactError("exact system needs exact phases")
    q = h.phase_order()
    degree = euler_phi(q)
    if degree > degree_cap:
        raise CapExceededError(f"cyclotomic degree {degree} exceeds cap {degree_cap} (q = {q})")
    n = h.n
    nums = [[int(t * q) for t in row] for row in h.turns]
    pairs = []
    exponents = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            pairs.append((i, j))
            exponents.append(tuple((nums[i][b] - nums[j][b]) % q for b in range(n)))
    return ExactSystem(
        root_order=q,
        degree=degree,
        n=n,
        pairs=tuple(pairs),
        exponents=tuple(exponents),
        provenance=h.provenance,
    )


def integer_matrix_rank(rows, ncols: int) -> int:
    """Exact rank by fraction-free elimination with big integers."""
    m = [list(r) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise ValueError("ragged rows")
    nrows = len(m)
    rank = 0
    prev = 1
    r = 0
    for c in range(ncols):
        pivot_row = next((k for k in range(r, nrows) if m[k][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        piv = m[r][c]
        for k in range(r + 1, nrows):
            rowk = m[k]
            rowr = m[r]
            factor = rowk[c]
            for col in range(c + 1, ncols):
                rowk[col] = (piv * rowk[col] - factor * rowr[col]) // prev
            rowk[c] = 0
        prev = piv
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def rational_nullity(system: ExactSystem) -> int:
    """Dimension over Q of the rational solutions of the exact system."""
    return system.n * system.n - integer_matrix_rank(system.integer_rows(), system.n * system.n)


@dataclass(frozen=True)
class ConjectureReport:
    provenance: str
    root_order: int
    degree: int
    rational_nullity: int
    numeric_defect: int
    gap_ratio: float
    verdict: str


def conjecture_check(
    h: HadamardMatrix,
    rel_tol: float = DEFAULT_REL_TOL,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> ConjectureReport:
    """Compare the rational nullity with the certified numeric defect.

    The rational solution space embeds in the real one, so the nullity can
    never exceed the defect; a strict gap is a genuine counterexample at this
    instance, while equality supports the rational-basis conjecture.
    """
    system = build_exact_system(h, degree_cap)
    nullity = rational_nullity(system)
    report = undephased_defect(h, rel_tol, gap_threshold)
    if nullity > report.undephased_defect:
        raise RuntimeError(
            f"rational nullity {nullity} exceeds certified defect {report.undephased_defect}; "
            "one of the two pipelines is wrong"
        )
    verdict = SUPPORTED if nullity == report.undephased_defect else REFUTED_AT_INSTANCE
    return ConjectureReport(
        provenance=h.provenance,
        root_order=system.root_order,
        degree=system.degree,
        rational_nullity=nullity,
        numeric_defect=report.undephased_defect,
        gap_ratio=report.gap_ratio,
        verdict=verdict,
    )
