"""
Monte Carlo reproducible con semillas divididas.

El número de muestras se parte en lotes de tamaño fijo; el lote i usa el
hijo i de SeedSequence(seed). Los lotes pueden correr en hilos, pero las
sumas parciales se combinan siempre en el orden de los lotes, así que el
resultado no depende de cuántos trabajadores se usen.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

LOTE_PREDETERMINADO = 1 << 14


@dataclass(frozen=True)
class Estimate:
    """Probabilidad o esperanza estimada (o exacta, con stderr 0)"""

    value: float
    stderr: float = 0.0
    samples: Optional[int] = None
    exact: bool = False
    fraction: Optional[Fraction] = None

    @classmethod
    def exacto(cls, value) -> "Estimate":
        if isinstance(value, Fraction):
            return cls(float(value), 0.0, None, True, value)
        return cls(float(value), 0.0, None, True, None)

    def within(self, target: float, sigmas: float = 3.0, floor: float = 0.0) -> bool:
        return abs(self.value - target) <= max(sigmas * self.stderr, floor)

    def to_dict(self) -> Dict[str, object]:
        datos = asdict(self)
        datos["fraction"] = None if self.fraction is None else str(self.fraction)
        return datos


def _tamanos(samples: int, chunk: int) -> List[int]:
    completos, resto = divmod(samples, chunk)
    return [chunk] * completos + ([resto] if resto else [])


def run_chunks(kernel: Callable[[np.random.Generator, int], Tuple[float, ...]],
               samples: int, seed: int, workers: int = 1,
               chunk: int = LOTE_PREDETERMINADO) -> List[Tuple[float, ...]]:
    """Ejecuta kernel(rng, tamaño) sobre cada lote y devuelve los parciales en orden."""
    if samples <= 0:
        raise ValueError(f"El número de muestras debe ser positivo, no {samples}")
    tamanos = _tamanos(samples, chunk)
    hijos = np.random.SeedSequence(seed).spawn(len(tamanos))

    def trabajo(i: int):
        return kernel(np.random.default_rng(hijos[i]), tamanos[i])

    if workers > 1 and len(tamanos) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parciales = list(pool.map(trabajo, range(len(tamanos))))
    else:
        parciales = [trabajo(i) for i in range(len(tamanos))]
    return parciales


def monte_carlo(kernel: Callable[[np.random.Generator, int], Tuple[float, float]],
                samples: int, seed: int, workers: int = 1,
                chunk: int = LOTE_PREDETERMINADO) -> Estimate:
    """Media y error estándar de una variable cuyo kernel devuelve (Σx, Σx²)."""
    parciales = run_chunks(kernel, samples, seed, workers, chunk)
    suma = math.fsum(p[0] for p in parciales)
    suma2 = math.fsum(p[1] for p in parciales)
    media = suma / samples
    varianza = max(0.0, suma2 / samples - media * media)
    error = math.sqrt(varianza / samples) if samples > 1 else 0.0
    logger.debug(f"Monte Carlo: {samples} muestras, media {media:.6f} ± {error:.6f}")
    return Estimate(value=media, stderr=error, samples=samples, exact=False)


def bernoulli_kernel(indicator: Callable[[np.random.Generator, int], np.ndarray]
                     ) -> Callable[[np.random.Generator, int], Tuple[float, float]]:
    """Adapta un muestreador de indicadores 0/1 al formato (Σx, Σx²)."""

    def kernel(rng: np.random.Generator, size: int) -> Tuple[float, float]:
        exitos = float(np.count_nonzero(indicator(rng, size)))
        return exitos, exitos

    return kernel


def real_kernel(sampler: Callable[[np.random.Generator, int], np.ndarray]
                ) -> Callable[[np.random.Generator, int], Tuple[float, float]]:
    def kernel(rng: np.random.Generator, size: int) -> Tuple[float, float]:
        x = np.asarray(sampler(rng, size), dtype=np.float64)
        return math.fsum(x), math.fsum(x * x)

    return kernel
