"""Pairwise entanglement of distant spins in random antiferromagnetic XX chains."""

__version__ = "0.1.0"

from .disorder import (ChainSpec, DisorderDistribution, SeedSpec, clean_chain,
                       sample_chain, sample_coupling)
from .entanglement import (PairEntanglement, TwoQubitState, concurrence_wootters,
                           entanglement_of_formation, fidelity, log_negativity,
                           negativity, pair_entanglement, reconstruct_state)
from .fermions import CorrelationMatrix, ground_correlation_matrix
from .sdrg import SdrgTrace, SingletRecord, decimate, last_pair, pair_distance

__all__ = [
    "ChainSpec", "DisorderDistribution", "SeedSpec", "clean_chain", "sample_chain",
    "sample_coupling", "PairEntanglement", "TwoQubitState", "concurrence_wootters",
    "entanglement_of_formation", "fidelity", "log_negativity", "negativity",
    "pair_entanglement", "reconstruct_state", "CorrelationMatrix",
    "ground_correlation_matrix", "SdrgTrace", "SingletRecord", "decimate",
    "last_pair", "pair_distance",
]
