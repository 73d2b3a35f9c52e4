"""Noiseless amplification of coherent-state sets: feasibility tests, Kraus construction and channel studies."""

__version__ = "0.1.0"

from coherent_amp._backend import BACKEND
from coherent_amp.amplifier import (
    AmplifierInstance,
    MaxGain,
    SweepSpec,
    corollary1_feasible,
    exact_feasible,
    max_gain,
    sweep,
    theorem1_envelope,
)
from coherent_amp.channel import (
    DetectorModel,
    LossChannel,
    click_discrimination_error,
    compare_amplified,
    distance_trajectory,
    helstrom_error,
    loss_evolve,
)
from coherent_amp.errors import *  # noqa: F401,F403
from coherent_amp.fock import CoherentLabel, TruncationConfig, coherent_vector, fock_dim, inner_product, truncation_dim
from coherent_amp.geometry import GramMatrix, distance, gram, overlap, psd_check, wigner_grid
from coherent_amp.kraus import KrausSet, build_kraus, complete_to_identity, reciprocal_states, run_pipeline, verify_action
from coherent_amp.transform import (
    FeasibilityReport,
    PiMatrix,
    Status,
    dykstra_feasibility,
    factor_coefficients,
    lemma1_check,
    max_uniform_success,
    pi_deterministic,
    residual_gram,
)
