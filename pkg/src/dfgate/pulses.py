"""Pulse Hamiltonians on the four gate sites and the five-pulse CZ sequence.

On gate sites (g1, g2, g3, g4) (abbreviated 1..4 below)::

    H_asymp    = E12 + E34          H_parallel = E14 + E23
    H_times    = E13 + E24          H_box      = H_asymp + H_parallel
    H_ring     = E12 E34 + E14 E23 + E13 E24
    H_sym(a)   = H_box + H_times + a H_ring

Every unitary is ``exp(-i H theta)`` with the dimensionless phase
``theta = J tau / hbar``. Operator products are written as matrices: the
rightmost factor acts first in time.
"""
import enum
import math
from dataclasses import dataclass, astuple, fields
from functools import lru_cache

import numpy as np

from . import spin

TWO_PI = 2.0 * math.pi
GATE_DIM = 16


class PulseLabel(str, enum.Enum):
    ASYMP = "asymp"
    PARALLEL = "parallel"
    TIMES = "times"
    BOX = "box"
    RING = "ring"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class PulseParameters:
    """The six search phases, in the order the sequence is written."""

    theta_asymp1: float
    theta_parallel: float
    theta_times: float
    theta_box: float
    theta_ring: float
    theta_asymp2: float

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v}")
            object.__setattr__(self, f.name, v)

    @classmethod
    def from_array(cls, values):
        values = [float(v) for v in values]
        if len(values) != 6:
            raise ValueError(f"expected 6 phases, got {len(values)}")
        return cls(*values)

    @classmethod
    def from_dict(cls, d):
        names = [f.name for f in fields(cls)]
        missing = [k for k in names if k not in d]
        if missing:
            raise ValueError(f"missing phases: {', '.join(missing)}")
        return cls(**{k: d[k] for k in names})

    def as_array(self):
        return np.array(astuple(self))

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def canonical(self):
        """All phases wrapped into [0, 2pi)."""
        return PulseParameters.from_array(np.mod(self.as_array(), TWO_PI))

    def __add__(self, delta):
        return PulseParameters.from_array(self.as_array() + np.asarray(delta, dtype=float))


CZ_PARAMETERS = PulseParameters(
    theta_asymp1=2.748893584737,
    theta_parallel=4.319689917260,
    theta_times=2.552544025744,
    theta_box=3.730678055907,
    theta_ring=0.589048619835,
    theta_asymp2=0.785361375567,
)

# Written-order template of the working sequence.
CZ_TEMPLATE = (PulseLabel.ASYMP, PulseLabel.PARALLEL, PulseLabel.TIMES,
               PulseLabel.BOX, PulseLabel.RING, PulseLabel.ASYMP)


@dataclass(frozen=True)
class Pulse:
    label: PulseLabel
    theta: float
    duration: float
    alpha: float = None


@dataclass(frozen=True)
class CompiledSequence:
    """Five physical pulses in time order (earliest first)."""

    pulses: tuple
    alpha: float

    @property
    def total_time(self):
        return sum(p.duration for p in self.pulses)


@dataclass(frozen=True)
class GeneralRingCoefficients:
    """Pair couplings J_ij and ring couplings C_1234, C_1324, C_1342 on the gate square."""

    j12: float = 0.0
    j13: float = 0.0
    j14: float = 0.0
    j23: float = 0.0
    j24: float = 0.0
    j34: float = 0.0
    c1234: float = 0.0
    c1324: float = 0.0
    c1342: float = 0.0


@lru_cache(maxsize=None)
def _local_exchange(i, j):
    return spin.exchange_op(i, j, 4)


def _e(i, j):
    return _local_exchange(*sorted((i, j)))


@lru_cache(maxsize=None)
def _local_base(label):
    if label == PulseLabel.ASYMP:
        return _e(1, 2) + _e(3, 4)
    if label == PulseLabel.PARALLEL:
        return _e(1, 4) + _e(2, 3)
    if label == PulseLabel.TIMES:
        return _e(1, 3) + _e(2, 4)
    if label == PulseLabel.BOX:
        return _local_base(PulseLabel.ASYMP) + _local_base(PulseLabel.PARALLEL)
    if label == PulseLabel.RING:
        return _e(1, 2) @ _e(3, 4) + _e(1, 4) @ _e(2, 3) + _e(1, 3) @ _e(2, 4)
    raise ValueError(f"{label} has no fixed Hamiltonian")


def local_hamiltonian(label, alpha=None):
    """16x16 pulse Hamiltonian on the gate square (local qubit order g1..g4)."""
    label = PulseLabel(label)
    if label == PulseLabel.SYMMETRIC:
        if alpha is None:
            raise ValueError("the symmetric pulse needs alpha")
        return (_local_base(PulseLabel.BOX) + _local_base(PulseLabel.TIMES)
                + alpha * _local_base(PulseLabel.RING))
    if alpha is not None:
        raise ValueError(f"alpha only applies to the symmetric pulse, not {label.value}")
    return _local_base(label).copy()


def named_hamiltonian(label, layout, alpha=None):
    """Pulse Hamiltonian embedded in the full 2^n space of ``layout``."""
    return spin.embed(local_hamiltonian(label, alpha), layout.gate_sites, layout.n)


def local_general_ring(coeffs):
    c = coeffs
    pairs = {(1, 2): c.j12, (1, 3): c.j13, (1, 4): c.j14,
             (2, 3): c.j23, (2, 4): c.j24, (3, 4): c.j34}
    h = sum(j * _e(*p) for p, j in pairs.items())
    a = _e(1, 2) @ _e(3, 4)
    b = _e(1, 4) @ _e(2, 3)
    d = _e(1, 3) @ _e(2, 4)
    h = h + c.c1234 * (a + b - d) + c.c1324 * (d + b - a) + c.c1342 * (d + a - b)
    return np.asarray(h, dtype=complex)


def general_ring_hamiltonian(coeffs, layout):
    """Exchange plus the three signed four-spin ring terms on the gate square."""
    return spin.embed(local_general_ring(coeffs), layout.gate_sites, layout.n)


def compile_sequence(params):
    """Merge the Times/Box/Ring phases into one symmetric ring pulse.

    Since H_ring commutes with H_box and H_times,
    ``U_times U_box U_ring = U_times' U_sym`` with
    ``theta_times' = theta_times - theta_box`` (wrapped into [0, 2pi)) and
    ``alpha = theta_ring / theta_box``.
    """
    p = params
    if p.theta_box == 0.0:
        if p.theta_ring != 0.0:
            raise ValueError("alpha undefined: theta_box is zero while theta_ring is not")
        alpha = 0.0
    else:
        alpha = p.theta_ring / p.theta_box
        if not math.isfinite(alpha):
            raise ValueError("alpha overflows: theta_box is too small for theta_ring")
    times_prime = (p.theta_times - p.theta_box) % TWO_PI
    pulses = (
        Pulse(PulseLabel.ASYMP, p.theta_asymp2, p.theta_asymp2),
        Pulse(PulseLabel.SYMMETRIC, p.theta_box, p.theta_box, alpha),
        Pulse(PulseLabel.TIMES, times_prime, times_prime),
        Pulse(PulseLabel.PARALLEL, p.theta_parallel, p.theta_parallel),
        Pulse(PulseLabel.ASYMP, p.theta_asymp1, p.theta_asymp1),
    )
    return CompiledSequence(pulses, alpha)


def pulse_unitary(pulse):
    return spin.evolve(local_hamiltonian(pulse.label, pulse.alpha), pulse.theta)


def local_gate(params_or_compiled):
    """16x16 gate on the gate square, built from the compiled pulses."""
    seq = params_or_compiled
    if isinstance(seq, PulseParameters):
        seq = compile_sequence(seq)
    u = np.eye(GATE_DIM, dtype=complex)
    for pulse in seq.pulses:
        u = pulse_unitary(pulse) @ u
    return u


def gate_unitary(params_or_compiled, layout):
    """Full-space unitary of the five-pulse sequence."""
    return spin.embed(local_gate(params_or_compiled), layout.gate_sites, layout.n)


def local_sequence_unitary(template, thetas):
    """Product of ``exp(-i H_k theta_k)`` in written order (last factor first in time)."""
    if len(template) != len(thetas):
        raise ValueError("one phase per template slot")
    u = np.eye(GATE_DIM, dtype=complex)
    for label, theta in zip(template, thetas):
        u = u @ spin.evolve(local_hamiltonian(label), theta)
    return u


def uncompiled_gate_unitary(params, layout):
    """The six separate exponentials, straight from the written sequence."""
    return spin.embed(local_sequence_unitary(CZ_TEMPLATE, params.as_array()),
                      layout.gate_sites, layout.n)


def gate_time(params):
    """Total duration in units of hbar/J_max.

    The ring phase adds no time: it runs concurrently with the box pulse.
    """
    p = params
    return (p.theta_asymp1 + p.theta_parallel + p.theta_box + p.theta_asymp2
            + (p.theta_times - p.theta_box) % TWO_PI)


def gate_time_with_ring(params):
    """Duration if the ring phase were counted as extra time."""
    p = params
    total = sum(astuple(p))
    return total - p.theta_times + (p.theta_times - p.theta_box) % TWO_PI


def alpha_n(params, n=0):
    return params.theta_ring / (params.theta_box + TWO_PI * n)


class InfeasibleSplitError(ValueError):
    pass


def alpha_split(alpha_a, alpha_b, n, params, coupling=1.0):
    """Split the symmetric pulse into two pulses with ring ratios alpha_a, alpha_b.

    Returns durations (t_a, t_b) with ``J (t_a + t_b) = theta_box + 2 pi n``
    and ``J (alpha_a t_a + alpha_b t_b) = theta_ring``.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    box_n = params.theta_box + TWO_PI * n
    a_n = params.theta_ring / box_n
    if not alpha_a > a_n > alpha_b:
        raise InfeasibleSplitError(
            f"need alpha_a > alpha({n}) > alpha_b, got {alpha_a} > {a_n:.6g} > {alpha_b}")
    t_a = box_n / coupling * (a_n - alpha_b) / (alpha_a - alpha_b)
    t_b = box_n / coupling * (alpha_a - a_n) / (alpha_a - alpha_b)
    return t_a, t_b


def split_sequence(params, alpha_a, alpha_b, n=0):
    """Compiled sequence with the symmetric pulse replaced by its two-part split."""
    t_a, t_b = alpha_split(alpha_a, alpha_b, n, params)
    base = compile_sequence(params)
    asymp2, _, times, parallel, asymp1 = base.pulses
    pulses = (
        asymp2,
        Pulse(PulseLabel.SYMMETRIC, t_b, t_b, alpha_b),
        Pulse(PulseLabel.SYMMETRIC, t_a, t_a, alpha_a),
        times, parallel, asymp1,
    )
    return CompiledSequence(pulses, alpha_n(params, n))
