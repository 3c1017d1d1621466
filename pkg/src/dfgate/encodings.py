"""Logical bases of the 3-qubit DF subsystem and the 4-qubit DF subspace.

Single encoded qubit states (site order inside one encoded qubit)::

    4-qubit:  |0> = |s>_12 |s>_34
              |1> = (|T+>_12 |T->_34 - |T0>_12 |T0>_34 + |T->_12 |T+>_34) / sqrt(3)
    3-qubit:  |0,+1> = |s>_12 |0>_3           |0,-1> = |s>_12 |1>_3
              |1,+1> = (sqrt(2)|T+>_12 |1>_3 - |T0>_12 |0>_3) / sqrt(3)
              |1,-1> = (|T0>_12 |1>_3 - sqrt(2)|T->_12 |0>_3) / sqrt(3)

where |s> = (|01> - |10>)/sqrt(2) is the singlet. The +1/-1 index is the
gauge label (sign of m_z).
"""
import enum
from dataclasses import dataclass, field

import numpy as np

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)

KET0 = np.array([1.0, 0.0])
KET1 = np.array([0.0, 1.0])
SINGLET = np.array([0.0, 1.0, -1.0, 0.0]) / SQRT2
T_PLUS = np.array([1.0, 0.0, 0.0, 0.0])
T_ZERO = np.array([0.0, 1.0, 1.0, 0.0]) / SQRT2
T_MINUS = np.array([0.0, 0.0, 0.0, 1.0])

GAUGE_LABELS = ((1, 1), (1, 0), (1, -1), (0, 0))
# Order tried when the (1,1) block of a noisy gate vanishes.
GAUGE_FALLBACK = ((1, 1), (1, -1), (1, 0), (0, 0))


class EncodingKind(enum.IntEnum):
    THREE = 3
    FOUR = 4


@dataclass(frozen=True)
class EncodingLayout:
    """Physical sites of two encoded qubits A and B, and the four gate sites.

    The first two entries of ``sites_a`` (``sites_b``) form the pair whose
    singlet/triplet content carries the logical value. ``gate_sites`` is the
    square (g1, g2, g3, g4) the pulses act on, traversed so that g1, g4
    belong to A and g2, g3 belong to B: the H_asymp edges (g1 g2, g3 g4)
    bridge the two encoded qubits and the H_parallel edges stay inside them.
    """

    kind: EncodingKind
    sites_a: tuple
    sites_b: tuple
    gate_sites: tuple

    def __post_init__(self):
        kind = EncodingKind(self.kind)
        object.__setattr__(self, "kind", kind)
        for name in ("sites_a", "sites_b", "gate_sites"):
            object.__setattr__(self, name, tuple(int(s) for s in getattr(self, name)))
        a, b, g = set(self.sites_a), set(self.sites_b), self.gate_sites
        if len(self.sites_a) != kind or len(self.sites_b) != kind:
            raise ValueError(f"{kind.name} encoding needs {int(kind)} sites per qubit")
        if len(a) != kind or len(b) != kind or a & b:
            raise ValueError("encoded qubits must use distinct, disjoint sites")
        if a | b != set(range(1, self.n + 1)):
            raise ValueError(f"sites must cover 1..{self.n}")
        if len(g) != 4 or len(set(g)) != 4:
            raise ValueError("gate_sites must be 4 distinct sites")
        if len(a & set(g)) != 2 or len(b & set(g)) != 2:
            raise ValueError("gate_sites must take exactly two sites from each encoded qubit")

    @property
    def n(self):
        return 2 * int(self.kind)

    @property
    def dim(self):
        return 2**self.n

    @property
    def pair_a(self):
        return self.sites_a[:2]

    @property
    def pair_b(self):
        return self.sites_b[:2]


def default_layout(kind=EncodingKind.FOUR):
    """Standard layout: A on the low sites, B on the high sites.

    Gate sites are the logical pairs of A and B, ordered (a1, b1, b2, a2).
    """
    kind = EncodingKind(kind)
    k = int(kind)
    sites_a = tuple(range(1, k + 1))
    sites_b = tuple(range(k + 1, 2 * k + 1))
    gate = (sites_a[0], sites_b[0], sites_b[1], sites_a[1])
    return EncodingLayout(kind, sites_a, sites_b, gate)


@dataclass(frozen=True)
class LogicalBasis:
    """Orthonormal columns on ``sites`` (in that qubit order), with labels."""

    columns: np.ndarray
    labels: tuple
    sites: tuple
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def k(self):
        return self.columns.shape[1]

    @property
    def n(self):
        return len(self.sites)

    def projector(self):
        return self.columns @ self.columns.conj().T

    def in_full_space(self, n=None):
        """Columns re-ordered into the n-qubit space with sites 1..n."""
        n = n or max(self.sites)
        if tuple(self.sites) == tuple(range(1, n + 1)):
            return self.columns
        if sorted(self.sites) != list(range(1, n + 1)):
            raise ValueError("basis does not span every site; embed it with a partner first")
        return _reorder(self.columns, self.sites)


def _reorder(columns, sites):
    """Permute tensor axes from the order of ``sites`` into ascending site order."""
    n = len(sites)
    k = columns.shape[1]
    t = columns.reshape((2,) * n + (k,))
    order = np.argsort(sites)
    t = np.transpose(t, list(order) + [n])
    return t.reshape(2**n, k)


def four_qubit_states():
    """(|0>, |1>) of the 4-qubit DF subspace on local sites 1..4."""
    zero = np.kron(SINGLET, SINGLET)
    one = (np.kron(T_PLUS, T_MINUS) - np.kron(T_ZERO, T_ZERO) + np.kron(T_MINUS, T_PLUS)) / SQRT3
    return zero.astype(complex), one.astype(complex)


def three_qubit_states():
    """Dict ``(x, gauge) -> vector`` of the 3-qubit DF subsystem on local sites 1..3."""
    states = {
        (0, 1): np.kron(SINGLET, KET0),
        (0, -1): np.kron(SINGLET, KET1),
        (1, 1): (SQRT2 * np.kron(T_PLUS, KET1) - np.kron(T_ZERO, KET0)) / SQRT3,
        (1, -1): (np.kron(T_ZERO, KET1) - SQRT2 * np.kron(T_MINUS, KET0)) / SQRT3,
    }
    return {key: v.astype(complex) for key, v in states.items()}


def _qubit_sites(layout, qubit):
    if qubit in ("a", "A"):
        return layout.sites_a
    if qubit in ("b", "B"):
        return layout.sites_b
    raise ValueError(f"qubit must be 'a' or 'b', got {qubit!r}")


def logical_basis_four(layout, qubit="a"):
    """Logical states of one 4-qubit encoded qubit, living on its four sites."""
    if layout.kind != EncodingKind.FOUR:
        raise ValueError("logical_basis_four needs a FOUR layout")
    zero, one = four_qubit_states()
    return LogicalBasis(np.column_stack([zero, one]), ("0", "1"), _qubit_sites(layout, qubit))


def logical_basis_three(layout, qubit="a"):
    """The four states (logical x gauge) of one 3-qubit encoded qubit."""
    if layout.kind != EncodingKind.THREE:
        raise ValueError("logical_basis_three needs a THREE layout")
    states = three_qubit_states()
    keys = [(0, 1), (0, -1), (1, 1), (1, -1)]
    labels = tuple(f"{x},{g:+d}" for x, g in keys)
    return LogicalBasis(np.column_stack([states[k] for k in keys]), labels,
                        _qubit_sites(layout, qubit))


def _product_columns(layout, pairs):
    """Full-space columns for a list of (vec_a, vec_b) products."""
    sites = layout.sites_a + layout.sites_b
    cols = np.column_stack([np.kron(va, vb) for va, vb in pairs])
    return _reorder(cols, sites)


def pair_basis(layout):
    """Tensor-product logical basis of A and B in the full 2^n space.

    FOUR: columns |xy> ordered 00, 01, 10, 11 (x for A).
    THREE: 16 columns ordered by gauge pair (+1+1, +1-1, -1+1, -1-1), then xy.
    """
    if layout.kind == EncodingKind.FOUR:
        zero, one = four_qubit_states()
        q = (zero, one)
        pairs = [(q[x], q[y]) for x in (0, 1) for y in (0, 1)]
        labels = tuple(f"{x}{y}" for x in (0, 1) for y in (0, 1))
    else:
        st = three_qubit_states()
        pairs, labels = [], []
        for i, j in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            for x in (0, 1):
                for y in (0, 1):
                    pairs.append((st[x, i], st[y, j]))
                    labels.append(f"{x}{i:+d},{y}{j:+d}")
        labels = tuple(labels)
    cols = _product_columns(layout, pairs)
    return LogicalBasis(cols, labels, tuple(range(1, layout.n + 1)), {"kind": layout.kind})


def gauge_block_basis(layout, label):
    """Four columns |xy> (ordered 00..11) of one total-spin gauge block.

    ``label`` is (S, m): (1,1), (1,0), (1,-1) or (0,0).
    """
    if layout.kind != EncodingKind.THREE:
        raise ValueError("gauge blocks exist only for the THREE encoding")
    label = tuple(label)
    if label not in GAUGE_LABELS:
        raise ValueError(f"unknown gauge block {label}")
    st = three_qubit_states()
    cols = []
    for x in (0, 1):
        for y in (0, 1):
            pp = np.kron(st[x, 1], st[y, 1])
            mm = np.kron(st[x, -1], st[y, -1])
            pm = np.kron(st[x, 1], st[y, -1])
            mp = np.kron(st[x, -1], st[y, 1])
            cols.append({
                (1, 1): pp,
                (1, -1): mm,
                (1, 0): (pm + mp) / SQRT2,
                (0, 0): (pm - mp) / SQRT2,
            }[label])
    cols = _reorder(np.column_stack(cols), layout.sites_a + layout.sites_b)
    labels = tuple(f"{x}{y}" for x in (0, 1) for y in (0, 1))
    return LogicalBasis(cols, labels, tuple(range(1, layout.n + 1)), {"gauge": label})


def logical_basis(layout):
    """The 4-column basis used for two-qubit gate analysis.

    FOUR: the pair basis. THREE: the (1,1) gauge block.
    """
    if layout.kind == EncodingKind.FOUR:
        return pair_basis(layout)
    return gauge_block_basis(layout, (1, 1))


def _check_dims(u, basis):
    u = np.asarray(u)
    rows = basis.columns.shape[0]
    if u.shape != (rows, rows):
        raise ValueError(f"operator shape {u.shape} does not match basis dimension {rows}")
    return u


def project_to_logical(u, basis):
    """``B^dagger U B`` for the stacked basis columns B (a k x k matrix)."""
    u = _check_dims(u, basis)
    b = basis.columns
    return b.conj().T @ u @ b


def leakage_from_block(block, k):
    """Leakage ``1 - ||M||_F^2 / k`` of an already projected k x k block."""
    return float(max(0.0, 1.0 - np.linalg.norm(block) ** 2 / k))


def leakage(u, basis):
    """Probability weight of the logical subspace that U maps out of it."""
    return leakage_from_block(project_to_logical(u, basis), basis.k)


def four_from_three(x, sign=-1):
    """``(|x,+1>|1> + sign |x,-1>|0>) / sqrt(2)`` on four local sites."""
    st = three_qubit_states()
    return (np.kron(st[x, 1], KET1) + sign * np.kron(st[x, -1], KET0)) / SQRT2


def three_in_four_residual(layout=None):
    """Max residual of writing each 4-qubit logical state via 3-qubit states.

    Checks |x4> = (|x3,+1>|1> - |x3,-1>|0>)/sqrt(2), where the first three
    sites of each 4-qubit encoded qubit carry the 3-qubit encoding.
    """
    if layout is not None and layout.kind != EncodingKind.FOUR:
        raise ValueError("the identity relates a FOUR layout to its 3-site prefix")
    four = four_qubit_states()
    return max(np.linalg.norm(four[x] - four_from_three(x)) for x in (0, 1))


__all__ = [
    "EncodingKind", "EncodingLayout", "LogicalBasis", "GAUGE_LABELS", "GAUGE_FALLBACK",
    "default_layout", "four_qubit_states", "three_qubit_states", "logical_basis_four",
    "logical_basis_three", "pair_basis", "gauge_block_basis", "logical_basis",
    "project_to_logical", "leakage", "leakage_from_block", "three_in_four_residual",
    "four_from_three",
]
