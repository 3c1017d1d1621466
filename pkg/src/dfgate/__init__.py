"""Controlled-Z gates on decoherence-free encoded spin qubits.

Modules:

* ``spin``: Pauli/exchange operators, Hermitian propagators, site-local application.
* ``encodings``: 3- and 4-qubit DF logical bases, projection and leakage.
* ``pulses``: exchange and ring-exchange pulse Hamiltonians, the five-pulse CZ sequence.
* ``invariants``: Makhlin invariants and the local frame that maps a gate onto CZ.
* ``optimizer``: genetic search plus Nelder-Mead over pulse phases.
* ``noise``: Monte-Carlo coupling and magnetic noise studies.
"""
from importlib.metadata import PackageNotFoundError, version

from . import encodings, invariants, noise, optimizer, pulses, spin
from .encodings import EncodingKind, EncodingLayout, default_layout
from .invariants import CZ, fm_objective, makhlin_invariants
from .noise import NoiseConfig, NoiseKind, noise_sweep, quadratic_fit
from .optimizer import SearchConfig, search
from .pulses import CZ_PARAMETERS, CZ_TEMPLATE, PulseLabel, PulseParameters

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"

__all__ = [
    "spin", "encodings", "pulses", "invariants", "optimizer", "noise",
    "EncodingKind", "EncodingLayout", "default_layout",
    "CZ", "fm_objective", "makhlin_invariants",
    "NoiseConfig", "NoiseKind", "noise_sweep", "quadratic_fit",
    "SearchConfig", "search",
    "CZ_PARAMETERS", "CZ_TEMPLATE", "PulseLabel", "PulseParameters",
]
