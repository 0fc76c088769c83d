"""Cooperative feedback: CDI quantization and IPC signals and codebooks."""

from src.feedback.cache import CodebookCache, get_codebook_cache
from src.feedback.cdi import (
    MAX_RVQ_BITS,
    CdiQuantization,
    decompose_cdi,
    quantize_cdi_rvq,
    quantize_cdi_statistical,
    quantize_local_cdi,
    rvq_codebook,
    rvq_select,
    sphere_cap_perturb,
)
from src.feedback.codebook import (
    CodebookKind,
    IpcCodebook,
    IpcCodebookSet,
    build_ipc_codebook,
    ipc_power_loss_bound,
    sample_conditional_signal,
)
from src.feedback.ipc import (
    BeamformingMode,
    Branch,
    IpcSignal,
    compute_omega,
    eta_signal,
    ipc_nocb,
    ipc_ocb_unquantized,
    nu_signal,
    quantize_ipc_ocb,
)

__all__ = [
    "MAX_RVQ_BITS",
    "BeamformingMode",
    "Branch",
    "CdiQuantization",
    "CodebookCache",
    "CodebookKind",
    "IpcCodebook",
    "IpcCodebookSet",
    "IpcSignal",
    "build_ipc_codebook",
    "compute_omega",
    "decompose_cdi",
    "eta_signal",
    "get_codebook_cache",
    "ipc_nocb",
    "ipc_ocb_unquantized",
    "ipc_power_loss_bound",
    "nu_signal",
    "quantize_cdi_rvq",
    "quantize_cdi_statistical",
    "quantize_ipc_ocb",
    "quantize_local_cdi",
    "rvq_codebook",
    "rvq_select",
    "sample_conditional_signal",
    "sphere_cap_perturb",
]
