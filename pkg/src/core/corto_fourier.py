"""
🔬 codigocorto - Análisis de Fourier sobre D = C⊥
================================================

Funciones reales sobre las palabras de D, en representación densa (arreglo
indexado por vectores de coeficientes) o dispersa (lista de cosets con su
coeficiente). Los caracteres se indexan por el síndrome σ respecto de C:
χ_σ(β) = (−1)^{σ·β}.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .corto_errores import PrecondicionError, PresupuestoExcedido
from .corto_espectro import CayleyGraph, char_eigenvalue
from .corto_gf2 import BitWord, ints_to_bits, popcount, unpack_bits, walsh_hadamard
from .corto_reedmuller import (
    PRESUPUESTO_ENUMERACION,
    CosetRep,
    RMCode,
    build_rm,
    codewords,
    coset_leader,
    dual,
    iter_weight_levels,
    syndrome,
    word_with_syndrome,
)

logger = logging.getLogger(__name__)

DIMENSION_DENSA_MAXIMA = 24


@dataclass
class CodeFunction:
    """
    📈 f : D → ℝ, densa o dispersa (nunca ambas)
    """

    dual_code: RMCode
    values: Optional[np.ndarray] = None
    terms: Optional[List[Tuple[CosetRep, float]]] = None
    label: str = ""

    def __post_init__(self):
        if (self.values is None) == (self.terms is None):
            raise PrecondicionError("Una CodeFunction es densa o dispersa, no ambas")
        if self.values is not None:
            self.values = np.asarray(self.values, dtype=np.float64)
            if self.values.shape != (1 << self.dual_code.dim,):
                raise PrecondicionError(
                    f"La función densa necesita 2^{self.dual_code.dim} valores"
                )

    @property
    def is_dense(self) -> bool:
        return self.values is not None

    @property
    def code(self) -> RMCode:
        return dual(self.dual_code)

    def mean(self) -> float:
        if self.is_dense:
            return float(self.values.mean())
        return float(sum(c for rep, c in self.terms if rep.degree == 0))

    def second_moment(self) -> float:
        if self.is_dense:
            return float(np.mean(self.values ** 2))
        return float(sum(c * c for _, c in self.terms))

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2


def _palabras(D: RMCode) -> np.ndarray:
    if D.dim > DIMENSION_DENSA_MAXIMA:
        raise PresupuestoExcedido(f"Representación densa de 2^{D.dim} puntos fuera de presupuesto")
    return codewords(D, budget=1 << DIMENSION_DENSA_MAXIMA)


def constant(D: RMCode, value: float = 1.0) -> CodeFunction:
    return CodeFunction(D, values=np.full(1 << D.dim, float(value)), label=f"const:{value}")


def from_callable(D: RMCode, fn: Callable[[np.ndarray], np.ndarray], label: str = "") -> CodeFunction:
    """Evalúa fn sobre las palabras empaquetadas de D (en orden de índice)."""
    return CodeFunction(D, values=np.asarray(fn(_palabras(D)), dtype=np.float64), label=label)


def dictator_cut(D: RMCode, i: int, signed: bool = False) -> CodeFunction:
    """p ↦ p_i (indicador) o p ↦ (−1)^{p_i} si signed."""
    if not 0 <= i < D.block_len:
        raise PrecondicionError(f"Coordenada {i} fuera de rango")
    bits = unpack_bits(_palabras(D), D.block_len)[:, i].astype(np.float64)
    valores = 1.0 - 2.0 * bits if signed else bits
    return CodeFunction(D, values=valores, label=f"dictator:{i}")


def majority_like(D: RMCode) -> CodeFunction:
    """1 si wt(p) > N/2, 1/2 si wt(p) = N/2, 0 si no: medida 1/2 e influencias bajas."""
    pesos = popcount(_palabras(D))
    mitad = D.block_len // 2
    valores = np.where(pesos > mitad, 1.0, np.where(pesos == mitad, 0.5, 0.0))
    return CodeFunction(D, values=valores, label="majority")


def random_dense(D: RMCode, seed: int = 0) -> CodeFunction:
    if D.dim > DIMENSION_DENSA_MAXIMA:
        raise PresupuestoExcedido(f"Representación densa de 2^{D.dim} puntos fuera de presupuesto")
    rng = np.random.default_rng(seed)
    return CodeFunction(D, values=rng.random(1 << D.dim), label=f"random:{seed}")


def from_terms(D: RMCode, terms: Sequence[Tuple[BitWord, float]],
               w_max: Optional[int] = None) -> CodeFunction:
    """Función dispersa Σ c·χ_α; los términos del mismo coset se suman."""
    C = dual(D)
    acumulado: Dict[str, List] = {}
    for alpha, coef in terms:
        clave = syndrome(C, alpha).hex()
        if clave in acumulado:
            acumulado[clave][1] += float(coef)
        else:
            acumulado[clave] = [coset_leader(C, alpha, w_max), float(coef)]
    return CodeFunction(D, terms=[(rep, c) for rep, c in acumulado.values()], label="sparse")


def wht(f: CodeFunction, max_dim: int = DIMENSION_DENSA_MAXIMA) -> np.ndarray:
    """f̂(σ) = E_β f(β)(−1)^{σ·β}, índice σ en el espacio de síndromes."""
    if not f.is_dense:
        raise PrecondicionError("La transformada requiere la representación densa")
    if f.dual_code.dim > max_dim:
        raise PresupuestoExcedido(f"WHT de dimensión {f.dual_code.dim} fuera de presupuesto")
    return walsh_hadamard(f.values) / float(f.values.size)


def coefficient_by_coset(f: CodeFunction, sigma: int, coeffs: Optional[np.ndarray] = None,
                         w_max: Optional[int] = None) -> Tuple[CosetRep, float]:
    """Levanta σ a una palabra de longitud N con ese síndrome y resuelve su líder."""
    D = f.dual_code
    if not 0 <= sigma < (1 << D.dim):
        raise PrecondicionError(f"Índice {sigma} fuera del espacio de coeficientes")
    coeficientes = wht(f) if coeffs is None else coeffs
    C = dual(D)
    sigma_bits = ints_to_bits(np.uint64(sigma), D.dim)
    alpha = BitWord.from_bits(word_with_syndrome(C, sigma_bits))
    return coset_leader(C, alpha, w_max), float(coeficientes[sigma])


@dataclass
class InfluenceTable:
    """Inf_i^{≤ℓ}(f) para cada coordenada i"""

    ell: int
    values: np.ndarray
    variance: float

    @property
    def total(self) -> float:
        return float(self.values.sum())

    @property
    def bound_ok(self) -> bool:
        return self.total <= self.ell * self.variance + 1e-9

    @property
    def max_influence(self) -> float:
        return float(self.values.max())

    def to_dict(self) -> Dict:
        return {"ell": self.ell, "total": self.total, "variance": self.variance,
                "max_influence": self.max_influence, "bound_ok": self.bound_ok,
                "values": self.values.tolist()}


def influences(f: CodeFunction, ell: int, coeffs: Optional[np.ndarray] = None,
               budget: int = PRESUPUESTO_ENUMERACION) -> InfluenceTable:
    """Suma de f̂(α)² sobre caracteres con líder de peso ≤ ℓ que contiene a i."""
    C = f.code
    if ell < 0 or 2 * ell >= C.min_distance:
        raise PrecondicionError(
            f"ℓ = {ell} debe ser menor que la mitad de la distancia ({C.min_distance})"
        )
    N = C.block_len
    influencia = np.zeros(N, dtype=np.float64)
    if f.is_dense:
        cuadrados = (wht(f) if coeffs is None else coeffs) ** 2
        varianza = float(cuadrados.sum() - cuadrados[0])
        if ell > 0:
            for w, soportes, sindromes in iter_weight_levels(C, ell, budget):
                masa = cuadrados[sindromes.astype(np.int64)]
                np.add.at(influencia, soportes.reshape(-1), np.repeat(masa, w))
        return InfluenceTable(ell, influencia, varianza)

    varianza = 0.0
    for rep, coef in f.terms:
        if rep.degree == 0:
            continue
        varianza += coef * coef
        if rep.degree <= ell:
            influencia[rep.support] += coef * coef
    return InfluenceTable(ell, influencia, varianza)


def noise_stability(f: CodeFunction, g: CayleyGraph, coeffs: Optional[np.ndarray] = None) -> float:
    """⟨f, G f⟩ = Σ_α λ_α f̂(α)²."""
    if g.dual_code != f.dual_code:
        raise PrecondicionError("La función y el grafo viven en códigos distintos")
    if f.is_dense:
        cuadrados = (wht(f) if coeffs is None else coeffs) ** 2
        return float(np.dot(g.spectrum.lambdas, cuadrados))
    total = 0.0
    for rep, coef in f.terms:
        lam = 1.0 if rep.degree == 0 else char_eigenvalue(g, rep.leader).lam_walk
        total += lam * coef * coef
    return float(total)


def save_function(f: CodeFunction, path) -> Path:
    """Arreglo float64 little-endian en `path` y cabecera JSON en `path`.json."""
    if not f.is_dense:
        raise PrecondicionError("Solo se guardan funciones densas")
    ruta = Path(path)
    f.values.astype("<f8").tofile(ruta)
    cabecera = {"n": f.dual_code.n, "d": f.dual_code.r, "dim": f.dual_code.dim, "label": f.label}
    with open(f"{ruta}.json", "w", encoding="utf-8") as archivo:
        json.dump(cabecera, archivo, indent=2, ensure_ascii=False)
    logger.info(f"Función guardada en {ruta}")
    return ruta


def load_function(path) -> CodeFunction:
    ruta = Path(path)
    with open(f"{ruta}.json", "r", encoding="utf-8") as archivo:
        cabecera = json.load(archivo)
    D = build_rm(int(cabecera["n"]), int(cabecera["d"]))
    if D.dim != int(cabecera["dim"]):
        raise PrecondicionError("La cabecera no coincide con RM(n, d)")
    valores = np.fromfile(ruta, dtype="<f8")
    return CodeFunction(D, values=valores.astype(np.float64), label=cabecera.get("label", ""))
