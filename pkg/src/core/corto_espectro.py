"""
🌈 codigocorto - Espectro de Cay(C⊥, T)
======================================

Los vértices son las palabras de D = C⊥ (indexadas por su vector de
coeficientes) y las aristas las genera el tester. Los autovalores se
obtienen siempre por caracteres: λ_α = 1 − 2·s_T(α).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from utils.corto_paralelo import Estimate, bernoulli_kernel, monte_carlo

from .corto_errores import PrecondicionError
from .corto_gf2 import BitWord, GF2Matrix, pack_bits
from .corto_reedmuller import (
    PRESUPUESTO_ENUMERACION,
    CosetRep,
    RMCode,
    coset_leader,
    coset_table,
    dual,
    syndrome_bits,
)
from .corto_tester import (
    CanonicalTester,
    CosetSpectrum,
    coset_spectrum,
    rejection_probability,
    walk_tester,
)

logger = logging.getLogger(__name__)


@dataclass
class CayleyGraph:
    """Grafo de Cayley sobre D con aristas q ∼ tester (y paseo opcional)"""

    dual_code: RMCode
    tester: CanonicalTester
    walk_time: Optional[float] = None

    def __post_init__(self):
        if self.tester.dual != self.dual_code:
            raise PrecondicionError("El tester no genera palabras del código de vértices")
        if self.walk_time is not None and self.walk_time < 0:
            raise PrecondicionError("walk_time debe ser ≥ 0")

    @property
    def basis(self) -> GF2Matrix:
        return self.dual_code.generators

    @property
    def code(self) -> RMCode:
        return self.tester.code

    @property
    def num_vertices(self) -> int:
        return 1 << self.dual_code.dim

    def walk(self, lam):
        """λ ↦ e^{−t(1−λ)} si el grafo tiene tiempo de paseo."""
        if self.walk_time is None:
            return lam
        return np.exp(-self.walk_time * (1.0 - np.asarray(lam, dtype=np.float64)))

    @cached_property
    def spectrum(self) -> CosetSpectrum:
        base = coset_spectrum(self.tester)
        return CosetSpectrum(code=base.code, lambdas=np.asarray(self.walk(base.lambdas)))

    @cached_property
    def step_tester(self) -> CanonicalTester:
        """Tester cuyos pasos realizan el grafo (incluye el paseo)."""
        if self.walk_time is None:
            return self.tester
        return walk_tester(self.tester, self.walk_time)


def cayley_graph(tester: CanonicalTester, walk_time: Optional[float] = None) -> CayleyGraph:
    return CayleyGraph(dual_code=tester.dual, tester=tester, walk_time=walk_time)


@dataclass
class EigenvalueRecord:
    alpha: CosetRep
    lam: float
    lam_walk: float
    exact: Optional[Fraction] = None
    stderr: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "alpha_hex": self.alpha.alpha.hex(),
            "degree": self.alpha.degree,
            "lambda": self.lam,
            "lambda_walk": self.lam_walk,
            "lambda_exact": None if self.exact is None else str(self.exact),
            "stderr": self.stderr,
        }


def char_eigenvalue(g: CayleyGraph, alpha: BitWord, mode: Union[str, int] = "exact",
                    seed: int = 0, w_max: Optional[int] = None) -> EigenvalueRecord:
    """λ_α = 1 − 2·s_T(α) con el grado tomado del líder del coset."""
    if alpha.length != g.code.block_len:
        raise PrecondicionError(f"α debe tener {g.code.block_len} bits")
    rechazo = rejection_probability(g.tester, alpha, mode, seed)
    lam = 1.0 - 2.0 * rechazo.value
    exacto = None if rechazo.fraction is None else 1 - 2 * rechazo.fraction
    coset = coset_leader(g.code, alpha, w_max)
    return EigenvalueRecord(coset, lam, float(g.walk(lam)), exacto, 2.0 * rechazo.stderr)


@dataclass
class DictatorProfile:
    records: List[EigenvalueRecord]
    epsilon: Optional[float]
    threshold: Optional[float]
    count_above: Optional[int]

    @property
    def half_satisfied(self) -> Optional[bool]:
        if self.count_above is None:
            return None
        return 2 * self.count_above >= len(self.records)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "coordinate": [r.alpha.support[0] for r in self.records],
            "lambda": [r.lam for r in self.records],
            "lambda_walk": [r.lam_walk for r in self.records],
        })


def dictator_profile(g: CayleyGraph) -> DictatorProfile:
    """Autovalores de los N dictadores y cuántos superan 1 − 4ε."""
    N = g.code.block_len
    registros = [char_eigenvalue(g, BitWord.from_support([i], N)) for i in range(N)]
    consultas = g.tester.query_complexity
    if consultas is None:
        return DictatorProfile(registros, None, None, None)
    epsilon = consultas / N
    umbral = 1.0 - 4.0 * epsilon
    if all(r.exact is not None for r in registros):
        umbral_exacto = 1 - 4 * Fraction(consultas, N)
        cuenta = sum(1 for r in registros if r.exact >= umbral_exacto)
    else:
        cuenta = sum(1 for r in registros if r.lam >= umbral)
    return DictatorProfile(registros, epsilon, umbral, cuenta)


# --- Expansión de conjuntos ---

@dataclass(frozen=True)
class VertexSet:
    """Conjunto explícito de vértices (índices de coeficientes)"""

    vertices: tuple


@dataclass(frozen=True)
class RandomVertexSet:
    size: int
    seed: int = 0


@dataclass(frozen=True)
class DictatorCut:
    """{p : bit `coordinate` de la palabra p vale 1}"""

    coordinate: int


@dataclass
class SetExpansionRecord:
    set_spec: object
    mu: float
    phi: float
    stderr: float
    exact: bool

    def to_dict(self) -> Dict:
        return {"set": repr(self.set_spec), "mu": self.mu, "phi": self.phi,
                "stderr": self.stderr, "exact": self.exact}


def random_vertices(num_vertices_bits: int, size: int, seed: int) -> np.ndarray:
    """`size` vértices distintos al azar, ordenados."""
    if size <= 0 or size >= (1 << num_vertices_bits):
        raise PrecondicionError("El conjunto debe ser no vacío y no contener todos los vértices")
    rng = np.random.default_rng(seed)
    elegidos = np.zeros(0, dtype=np.uint64)
    while elegidos.size < size:
        faltan = size - elegidos.size
        nuevos = rng.integers(0, 1 << num_vertices_bits, size=2 * faltan + 8, dtype=np.uint64)
        elegidos = np.unique(np.concatenate([elegidos, nuevos]))
    return np.sort(rng.permutation(elegidos)[:size])


def expansion(g: CayleyGraph, set_spec, budget: int = PRESUPUESTO_ENUMERACION,
              samples: int = 100_000, seed: int = 0, workers: int = 1) -> SetExpansionRecord:
    """Φ(S) = Pr[v ∉ S | u ∈ S] sobre una arista aleatoria (u, v)."""
    dim = g.dual_code.dim
    if isinstance(set_spec, DictatorCut):
        if not 0 <= set_spec.coordinate < g.code.block_len:
            raise PrecondicionError("Coordenada fuera de rango")
        registro = char_eigenvalue(g, BitWord.from_support([set_spec.coordinate], g.code.block_len))
        return SetExpansionRecord(set_spec, 0.5, (1.0 - registro.lam_walk) / 2.0, 0.0, True)

    if isinstance(set_spec, RandomVertexSet):
        vertices = random_vertices(dim, set_spec.size, set_spec.seed)
    elif isinstance(set_spec, VertexSet):
        vertices = np.unique(np.asarray(set_spec.vertices, dtype=np.uint64))
    else:
        raise PrecondicionError(f"Especificación de conjunto desconocida: {set_spec!r}")
    if vertices.size == 0 or vertices.size >= g.num_vertices:
        raise PrecondicionError("El conjunto debe ser no vacío y no contener todos los vértices")
    if vertices.size and int(vertices.max()) >= g.num_vertices:
        raise PrecondicionError("Vértice fuera del espacio de coeficientes")
    mu = vertices.size / g.num_vertices
    pasos = g.step_tester
    D = g.dual_code

    if pasos.support is not None and vertices.size * pasos.support.size <= budget:
        ids = D.coefficient_ids(pasos.support.words)
        vecinos = vertices[:, None] ^ ids[None, :]
        fuera = ~np.isin(vecinos, vertices)
        salida = Fraction(int((fuera.astype(np.int64) * pasos.support.counts[None, :]).sum()),
                          int(vertices.size) * pasos.support.total)
        return SetExpansionRecord(set_spec, mu, float(salida), 0.0, True)

    def indicador(rng, size):
        u = vertices[rng.integers(0, vertices.size, size=size)]
        q = D.coefficient_ids(pasos.sample(rng, size))
        return ~np.isin(u ^ q, vertices)

    est: Estimate = monte_carlo(bernoulli_kernel(indicador), samples, seed, workers)
    return SetExpansionRecord(set_spec, mu, est.value, est.stderr, False)


def cheeger_bound(lam: float, k: int, mu: float) -> float:
    """Φ(S) ≥ 1 − λ − (3^k)·√μ, con λ la cota de los autovalores de grado > k."""
    return 1.0 - lam - (3.0 ** k) * np.sqrt(mu)


def hc_sse_bound(s_k: float, k: int, mu: float) -> float:
    """Φ(S) ≥ 2 s(k) − 3^k √μ(S)."""
    return 2.0 * s_k - (3.0 ** k) * np.sqrt(mu)


# --- Hipercontractividad ---

@dataclass
class HypercontractivityReport:
    ell: int
    trials: int
    sparsity: int
    max_abs_difference: float
    max_ratio: float
    bound: float

    @property
    def identical(self) -> bool:
        return self.max_abs_difference <= 1e-12

    @property
    def bound_ok(self) -> bool:
        return self.max_ratio <= self.bound

    def to_dict(self) -> Dict:
        return {"ell": self.ell, "trials": self.trials, "sparsity": self.sparsity,
                "max_abs_difference": self.max_abs_difference, "max_ratio": self.max_ratio,
                "bound_9_ell": self.bound, "identical": self.identical, "bound_ok": self.bound_ok}


def _igualdad_de_pares(filas: np.ndarray) -> tuple:
    """Matrices [x_i ⊕ x_j = 0] y [x_i ⊕ x_j ⊕ x_k ⊕ x_l = 0] sobre filas empaquetadas."""
    s = filas.shape[0]
    dos = np.all(filas[:, None, :] == filas[None, :, :], axis=-1)
    pares = (filas[:, None, :] ^ filas[None, :, :]).reshape(s * s, -1)
    cuatro = np.all(pares[:, None, :] == pares[None, :, :], axis=-1)
    return dos.astype(np.float64), cuatro.astype(np.float64)


def fourth_moments(a: np.ndarray, filas: np.ndarray) -> tuple:
    """(E[f²], E[f⁴]) de f = Σ a_j χ_j; un producto de caracteres vale 1 en media
    exactamente cuando el XOR de sus filas es cero."""
    dos, cuatro = _igualdad_de_pares(filas)
    A = np.outer(a, a).reshape(-1)
    return float(a @ dos @ a), float(A @ cuatro @ A)


def hypercontractivity_check(dual_code: RMCode, ell: int, trials: int = 100, sparsity: int = 8,
                             seed: int = 0) -> HypercontractivityReport:
    """Compara E_D[f⁴] con el valor en el cubo y la cota 9^ℓ·E[f²]²."""
    C = dual(dual_code)
    distancia = C.min_distance
    if not 4 * ell < distancia - 1:
        raise PrecondicionError(
            f"Se requiere 4ℓ < D − 1 (ℓ = {ell}, D = {distancia})"
        )
    if ell < 1 or sparsity < 1:
        raise PrecondicionError("ℓ y la dispersión deben ser ≥ 1")
    rng = np.random.default_rng(seed)
    N = C.block_len
    max_dif, max_razon = 0.0, 0.0
    for _ in range(trials):
        soportes = set()
        while len(soportes) < sparsity:
            peso = int(rng.integers(1, ell + 1))
            soportes.add(tuple(sorted(rng.choice(N, size=peso, replace=False).tolist())))
        bits = np.zeros((sparsity, N), dtype=np.uint8)
        for fila, soporte in enumerate(sorted(soportes)):
            bits[fila, list(soporte)] = 1
        coef = rng.standard_normal(sparsity)
        _, e4_D = fourth_moments(coef, pack_bits(syndrome_bits(C, bits)))
        e2, e4_cubo = fourth_moments(coef, pack_bits(bits))
        max_dif = max(max_dif, abs(e4_D - e4_cubo))
        max_razon = max(max_razon, e4_D / (e2 * e2))
    logger.info(f"Hipercontractividad ℓ={ell}: diferencia máxima {max_dif:.3e}")
    return HypercontractivityReport(ell, trials, sparsity, max_dif, max_razon, 9.0 ** ell)


# --- Perfiles ---

def eigenvalue_profile(g: CayleyGraph, k_max: int,
                       budget: int = PRESUPUESTO_ENUMERACION) -> pd.DataFrame:
    """Tabla por grado k: cantidad, λ mínimo y máximo, s(k) y 1 − 2s(k)."""
    base = coset_spectrum(g.tester)
    tabla = coset_table(g.code, budget=budget)
    filas = []
    for k in range(0, k_max + 1):
        exactos = tabla.degrees == k
        al_menos = tabla.degrees >= k
        if not tabla.complete:
            al_menos |= tabla.degrees < 0
        if not al_menos.any():
            break
        s_k = 0.0 if k == 0 else float(base.rejections[al_menos].min())
        lam_k = base.lambdas[exactos]
        filas.append({
            "k": k,
            "count": int(exactos.sum()),
            "min_lambda": float(lam_k.min()) if lam_k.size else None,
            "max_lambda": float(lam_k.max()) if lam_k.size else None,
            "s_k": s_k,
            "one_minus_2s": 1.0 - 2.0 * s_k,
            "max_lambda_walk": float(g.walk(lam_k.max())) if lam_k.size else None,
        })
    return pd.DataFrame(filas)


def walk_law_report(g: CayleyGraph, eps: float, k_max: int = 3, trials: int = 8,
                    seed: int = 0) -> pd.DataFrame:
    """λ del paseo con tiempo ε·2^{d+1} frente a e^{−εk} en caracteres de grado k.

    La columna `rate` es −ln(λ_walk)/(εk): la constante medida del exponente.
    """
    if eps <= 0:
        raise PrecondicionError("ε debe ser positivo")
    d = g.dual_code.r
    paseo = cayley_graph(g.tester, eps * 2 ** (d + 1))
    N = g.code.block_len
    if 2 * k_max >= g.code.min_distance:
        raise PrecondicionError("k_max debe quedar bajo la mitad de la distancia")
    rng = np.random.default_rng(seed)
    filas = []
    for k in range(1, k_max + 1):
        for _ in range(trials):
            alpha = BitWord.from_support(rng.choice(N, size=k, replace=False), N)
            registro = char_eigenvalue(paseo, alpha)
            filas.append({
                "k": k,
                "alpha_hex": alpha.hex(),
                "lambda_walk": registro.lam_walk,
                "predicted": float(np.exp(-eps * k)),
                "rate": float(-np.log(registro.lam_walk) / (eps * k)),
            })
    return pd.DataFrame(filas)


def graph_power_report(g: CayleyGraph, ell: int, mu: float,
                       budget: int = PRESUPUESTO_ENUMERACION) -> Dict:
    """Ingredientes medidos de la expansión de conjuntos pequeños del grafo con paseo."""
    perfil = dictator_profile(g)
    tabla = coset_table(g.code, budget=budget)
    altos = tabla.degrees > ell
    if not tabla.complete:
        altos |= tabla.degrees < 0
    lam_alto = float(g.spectrum.lambdas[altos].max()) if altos.any() else None
    cota = None if lam_alto is None else float(cheeger_bound(lam_alto, ell, mu))
    return {
        "dictators_above_threshold": perfil.count_above,
        "threshold": perfil.threshold,
        "half_satisfied": perfil.half_satisfied,
        "max_lambda_beyond_ell": lam_alto,
        "hypercontractive_constant": 3.0 ** ell,
        "mu": mu,
        "phi_lower_bound": cota,
    }
