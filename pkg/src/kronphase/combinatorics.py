"""Set partitions and the superposed-sine correlation formula.

The k-point correlation of a union of m independent copies of the sine
process, each dilated by m, is a sum over set partitions of {1,...,k}
weighted by falling factorials of m.  This module enumerates the
partitions, provides the exact Stirling/Bell arithmetic used to test
them, and evaluates the superposed correlation together with its k = 2
specialization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .kernels import DEFAULT_K_CAP, rho_sine, sine_q

# Bell(13) exceeds 2.7e7 partitions; enumeration beyond this is never
# needed and only invites accidental memory blowups.
PARTITION_K_CAP = 12


@dataclass(frozen=True)
class SetPartition:
    """A partition of {1,...,k} into nonempty disjoint blocks.

    Blocks are tuples of ascending indices, ordered by smallest element.
    """

    blocks: tuple
    k: int

    @property
    def block_count(self):
        return len(self.blocks)


@dataclass(frozen=True)
class PartitionFamily:
    """All partitions of {1,...,k}, grouped by block count."""

    k: int
    partitions: tuple

    def __len__(self):
        return len(self.partitions)

    def by_block_count(self, p):
        return tuple(sp for sp in self.partitions if sp.block_count == p)

    def block_count_histogram(self):
        """Map p -> number of partitions with exactly p blocks."""
        hist = {}
        for sp in self.partitions:
            hist[sp.block_count] = hist.get(sp.block_count, 0) + 1
        return hist


def _rgs_blocks(k):
    # Restricted growth strings: a[0] = 0, a[i] <= max(a[:i]) + 1.
    # Labels appear in order of first occurrence, so the derived blocks
    # come out already sorted by smallest element.
    a = [0] * k
    while True:
        nblocks = max(a) + 1
        blocks = [[] for _ in range(nblocks)]
        for idx, lab in enumerate(a):
            blocks[lab].append(idx + 1)
        yield tuple(tuple(b) for b in blocks)
        i = k - 1
        while i > 0 and a[i] >= max(a[:i]) + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, k):
            a[j] = 0


def set_partitions(k):
    """Enumerate every partition of {1,...,k} exactly once.

    Partitions are returned grouped by ascending block count; within a
    group the restricted-growth enumeration order is kept.
    """
    k = int(k)
    if k < 1:
        raise ValueError("set_partitions: k must be >= 1")
    if k > PARTITION_K_CAP:
        raise CapacityError(
            "set_partitions: k=%d exceeds cap %d" % (k, PARTITION_K_CAP)
        )
    parts = [SetPartition(blocks=b, k=k) for b in _rgs_blocks(k)]
    parts.sort(key=lambda sp: sp.block_count)
    return PartitionFamily(k=k, partitions=tuple(parts))


def falling_factorial(x, p):
    """x (x-1) ... (x-p+1); the empty product (p = 0) is 1.

    Integer arguments are evaluated in exact integer arithmetic.
    """
    p = int(p)
    if p < 0:
        raise ValueError("falling_factorial: p must be >= 0")
    if isinstance(x, (int, np.integer)):
        out = 1
        for i in range(p):
            out *= int(x) - i
        return out
    out = 1.0
    for i in range(p):
        out *= x - i
    return out


def stirling2_row(k):
    """Stirling numbers of the second kind S(k, p) for p = 0..k, exact ints."""
    k = int(k)
    if k < 0:
        raise ValueError("stirling2_row: k must be >= 0")
    row = [1]
    for n in range(1, k + 1):
        prev = row
        row = [0] * (n + 1)
        for p in range(1, n + 1):
            row[p] = p * prev[p] if p < n else 0
            row[p] += prev[p - 1]
    return row


def bell_number(k):
    """Number of partitions of a k-element set, exact int."""
    return sum(stirling2_row(int(k)))


def stirling_identity_residual(k, x):
    """|sum_p S(k,p) x(x-1)...(x-p+1) - x^k|.

    For integer x the sum is evaluated in exact integer arithmetic and
    the residual is exactly 0.
    """
    k = int(k)
    if k < 1 or k > PARTITION_K_CAP:
        raise ValueError("stirling_identity_residual: need 1 <= k <= %d" % PARTITION_K_CAP)
    row = stirling2_row(k)
    is_integral = isinstance(x, (int, np.integer)) or (
        isinstance(x, float) and float(x).is_integer()
    )
    if is_integral:
        xi = int(x)
        total = sum(row[p] * falling_factorial(xi, p) for p in range(1, k + 1))
        return float(abs(total - xi ** k))
    total = sum(row[p] * falling_factorial(float(x), p) for p in range(1, k + 1))
    return abs(total - float(x) ** k)


def rho_superposed_sine(m, points, cap=DEFAULT_K_CAP):
    """k-point correlation of m superposed independent sine processes, each dilated by m.

    Evaluates the set-partition sum

        sum_{p=1}^{min(m,k)} sum_{partitions with p blocks}
            m(m-1)...(m-p+1) / m^k  *  prod_j rho_sine(points[block_j] / m)

    which tends to the Poisson constant 1 as m grows with the points fixed.
    """
    m = int(m)
    if m < 1:
        raise ValueError("rho_superposed_sine: m must be >= 1")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size < 1:
        raise ValueError("rho_superposed_sine: points must be a nonempty 1-d sequence")
    k = pts.size
    if k > cap:
        raise CapacityError("rho_superposed_sine: order %d exceeds cap %d" % (k, cap))
    scaled = pts / m
    mk = m ** k  # exact int
    total = 0.0
    for sp in set_partitions(k).partitions:
        p = sp.block_count
        if p > m:
            continue  # falling factorial vanishes
        weight = falling_factorial(m, p) / mk
        prod = 1.0
        for block in sp.blocks:
            prod *= rho_sine(scaled[[i - 1 for i in block]], cap=cap)
        total += weight * prod
    return total


def rho_superposed_pair(m, delta):
    """Pair correlation 1 - q(delta/m)^2 / m of the m-fold superposition.

    Agrees with rho_superposed_sine(m, [0, delta]) and is the fixed-m
    limit curve of the rescaled tensor-product process.
    """
    m = int(m)
    if m < 1:
        raise ValueError("rho_superposed_pair: m must be >= 1")
    q = sine_q(np.asarray(delta, dtype=float) / m)
    out = 1.0 - q * q / m
    if np.ndim(delta) == 0:
        return float(out)
    return out
