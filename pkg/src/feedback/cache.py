"""In-process cache of built IPC codebooks."""

from typing import Dict, Optional, Tuple

import numpy as np

from src.channel.params import SystemParams
from src.feedback.codebook import CodebookKind, IpcCodebook, IpcCodebookSet, build_ipc_codebook
from src.feedback.ipc import BeamformingMode
from src.utils.config import config
from src.utils.errors import SamplingError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

CacheKey = Tuple[str, str, int, int, int]

_KIND_STREAMS = {kind: index for index, kind in enumerate(CodebookKind)}


class CodebookCache:
    """Keeps codebooks keyed by (params hash, kind, A, samples, seed)."""

    def __init__(self):
        """Initialize an empty cache."""
        self._store: Dict[CacheKey, IpcCodebook] = {}

    def __len__(self) -> int:
        return len(self._store)

    @staticmethod
    def key(
        params: SystemParams, kind: CodebookKind, a_bits: int, n_samples: int, seed: int
    ) -> CacheKey:
        return (params.fingerprint(), CodebookKind(kind).value, a_bits, n_samples, seed)

    def get(self, key: CacheKey) -> Optional[IpcCodebook]:
        """
        Get cached codebook.

        Args:
            key: Cache key

        Returns:
            Cached codebook or None
        """
        return self._store.get(key)

    def set(self, key: CacheKey, codebook: IpcCodebook):
        """
        Store a codebook.

        Args:
            key: Cache key
            codebook: Codebook to cache
        """
        self._store[key] = codebook

    def clear(self):
        self._store.clear()

    def get_or_build(
        self,
        params: SystemParams,
        kind: CodebookKind,
        a_bits: Optional[int] = None,
        n_samples: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> IpcCodebook:
        """
        Return the cached codebook or build it.

        Each kind samples from its own stream derived from the seed. When
        sampling fails the degenerate {0} codebook is cached instead.

        Args:
            params: System parameters
            kind: Signal to quantize
            a_bits: IPC bits; defaults to params.a_ipc
            n_samples: Conditional samples; defaults to config.codebook_samples
            seed: Sampling seed; defaults to config.codebook_seed

        Returns:
            IpcCodebook
        """
        kind = CodebookKind(kind)
        a_bits = params.a_ipc if a_bits is None else a_bits
        n_samples = config.codebook_samples if n_samples is None else n_samples
        seed = config.codebook_seed if seed is None else seed

        key = self.key(params, kind, a_bits, n_samples, seed)
        cached = self.get(key)
        if cached is not None:
            logger.debug(f"Codebook cache hit: {key}")
            return cached

        rng = np.random.default_rng([seed, _KIND_STREAMS[kind]])
        try:
            codebook = build_ipc_codebook(params, kind, n_samples, rng, a_bits=a_bits, seed=seed)
        except SamplingError as exc:
            logger.warning(f"Falling back to degenerate {kind.value} codebook: {exc}")
            codebook = IpcCodebook.degenerate_for(params, kind, a_bits, n_samples, seed)
        self.set(key, codebook)
        return codebook

    def codebooks_for(
        self,
        params: SystemParams,
        mode: BeamformingMode,
        feedforward: bool = False,
        n_samples: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> Optional[IpcCodebookSet]:
        """
        Codebooks needed by a beamforming mode.

        Returns:
            IpcCodebookSet, or None when params.a_ipc is None (perfect IPC)
        """
        if params.a_ipc is None:
            return None
        eta_kind, nu_kind = CodebookKind.kinds_for(mode, feedforward)
        eta = self.get_or_build(params, eta_kind, n_samples=n_samples, seed=seed)
        nu = None
        if nu_kind is not None:
            nu = self.get_or_build(params, nu_kind, n_samples=n_samples, seed=seed)
        return IpcCodebookSet(eta=eta, nu=nu)


# Global cache instance
_codebook_cache: Optional[CodebookCache] = None


def get_codebook_cache(force_reload: bool = False) -> CodebookCache:
    """
    Get or create the global codebook cache.

    Args:
        force_reload: Force creation of a new, empty cache

    Returns:
        CodebookCache instance
    """
    global _codebook_cache
    if _codebook_cache is None or force_reload:
        _codebook_cache = CodebookCache()
    return _codebook_cache
