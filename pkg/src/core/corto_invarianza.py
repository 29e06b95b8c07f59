"""
📐 codigocorto - Principio de invarianza sobre códigos
=====================================================

PROPÓSITO:
- Curva de estabilidad gaussiana Γ_ρ(μ) y funcional ζ
- Regularidad de polinomios multilineales
- Muestreador de RM(n, d) por cubetas
- Arneses Monte Carlo: brecha de invarianza, mayoría-es-lo-más-estable
  sobre el grafo del código y transferencia a distribuciones k-independientes

Los polinomios se evalúan sobre ±1: la palabra binaria p se lee como
x_i = (−1)^{p_i}.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import integrate, special, stats

from utils.corto_paralelo import Estimate, monte_carlo, real_kernel

from .corto_errores import PrecondicionError, PresupuestoExcedido
from .corto_espectro import CayleyGraph, char_eigenvalue
from .corto_fourier import CodeFunction, influences, noise_stability, wht
from .corto_gf2 import BitWord, bits_to_ints, pack_bits, point_bits, unpack_bits
from .corto_reedmuller import TAMANO_LOTE, build_rm

logger = logging.getLogger(__name__)

DISTRIBUCIONES = ("cube", "rm", "rm-mz", "gaussian")
TOLERANCIA_GAMMA = 1e-10


# --- Polinomios multilineales ---

@dataclass
class MultilinearPoly:
    """P(x) = Σ_I a_I Π_{i∈I} x_i sobre n_vars variables"""

    terms: List[Tuple[Tuple[int, ...], float]]
    n_vars: int
    max_degree: Optional[int] = None

    def __post_init__(self):
        normalizados: Dict[Tuple[int, ...], float] = {}
        for variables, coef in self.terms:
            clave = tuple(sorted(int(v) for v in variables))
            if len(set(clave)) != len(clave):
                raise PrecondicionError(f"Término con variables repetidas: {variables}")
            if clave and (clave[0] < 0 or clave[-1] >= self.n_vars):
                raise PrecondicionError(f"Variable fuera de [0, {self.n_vars}): {variables}")
            if clave in normalizados:
                raise PrecondicionError(f"Término repetido: {clave}")
            normalizados[clave] = float(coef)
        self.terms = list(normalizados.items())
        if self.max_degree is not None and self.degree > self.max_degree:
            raise PrecondicionError(f"Grado {self.degree} mayor que el tope {self.max_degree}")

    @property
    def degree(self) -> int:
        return max((len(v) for v, _ in self.terms), default=0)

    @property
    def norm2(self) -> float:
        return float(sum(c * c for _, c in self.terms))

    @classmethod
    def from_json(cls, source: Union[str, Path, Dict], n_vars: Optional[int] = None) -> "MultilinearPoly":
        """Lee {"n_vars": N, "terms": [{"vars": [...], "coeff": r}]}."""
        if isinstance(source, dict):
            datos = source
        else:
            with open(source, "r", encoding="utf-8") as archivo:
                datos = json.load(archivo)
        total = n_vars if n_vars is not None else datos.get("n_vars")
        if total is None:
            raise PrecondicionError("El polinomio no declara n_vars")
        terminos = [(t["vars"], t["coeff"]) for t in datos.get("terms", [])]
        return cls(terminos, int(total), datos.get("max_degree"))

    def to_json(self) -> Dict:
        return {"n_vars": self.n_vars,
                "terms": [{"vars": list(v), "coeff": c} for v, c in self.terms]}

    def scaled(self, factor: float) -> "MultilinearPoly":
        return MultilinearPoly([(v, c * factor) for v, c in self.terms], self.n_vars)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Evalúa sobre filas x de forma (M, n_vars)."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.n_vars:
            raise PrecondicionError(f"Se esperaban {self.n_vars} variables, llegaron {x.shape[-1]}")
        total = np.zeros(x.shape[:-1], dtype=np.float64)
        for variables, coef in self.terms:
            if variables:
                total += coef * np.prod(x[..., list(variables)], axis=-1)
            else:
                total += coef
        return total


@dataclass
class RegularityReport:
    eps_reg: float
    influences: np.ndarray
    norm2: float

    @property
    def most_influential(self) -> int:
        return int(np.argmax(self.influences))

    def to_dict(self) -> Dict:
        return {"eps_reg": self.eps_reg, "norm2": self.norm2,
                "most_influential": self.most_influential}


def regularity(P: MultilinearPoly) -> RegularityReport:
    """ε_reg = max_i sqrt(Σ_{I∋i} a_I² / ‖P‖²)."""
    norma = P.norm2
    if norma <= 0.0:
        raise PrecondicionError("El polinomio cero no tiene regularidad definida")
    influencia = np.zeros(P.n_vars, dtype=np.float64)
    for variables, coef in P.terms:
        if variables:
            influencia[list(variables)] += coef * coef
    eps = math.sqrt(float(influencia.max()) / norma)
    return RegularityReport(min(eps, 1.0), influencia, norma)


def random_regular_poly(n_vars: int, degree: int = 1, seed: int = 0) -> MultilinearPoly:
    """Polinomio de norma 1 con signos aleatorios y peso repartido de forma circulante.

    Grado 1: (±1/√N)·x_i en cada variable. Grado 2: además, pares
    (π(i), π(i+s)) con s ∈ {1, 2} y a² = 1/8 antes de normalizar, lo que
    deja ε_reg = sqrt(1.2/N).
    """
    if degree not in (1, 2):
        raise PrecondicionError(f"Solo se generan polinomios de grado 1 o 2, no {degree}")
    if n_vars < 5:
        raise PrecondicionError("Se necesitan al menos 5 variables")
    rng = np.random.default_rng(seed)
    terminos: List[Tuple[Tuple[int, ...], float]] = [((i,), 1.0) for i in range(n_vars)]
    if degree == 2:
        pi = rng.permutation(n_vars)
        a = math.sqrt(0.125)
        for s in (1, 2):
            for i in range(n_vars):
                terminos.append(((int(pi[i]), int(pi[(i + s) % n_vars])), a))
    signos = rng.choice([-1.0, 1.0], size=len(terminos))
    norma = math.sqrt(sum(c * c for _, c in terminos))
    return MultilinearPoly([(v, s * c / norma) for (v, c), s in zip(terminos, signos)], n_vars)


# --- Curva gaussiana y ζ ---

def gamma_rho(rho: float, mu: float) -> float:
    """Γ_ρ(μ) = Pr[X ≤ t, Y ≤ t] con t = Φ⁻¹(μ) y correlación ρ."""
    if not -1.0 <= rho <= 1.0:
        raise PrecondicionError(f"ρ = {rho} fuera de [−1, 1]")
    if not 0.0 <= mu <= 1.0:
        raise PrecondicionError(f"μ = {mu} fuera de [0, 1]")
    if mu == 0.0 or mu == 1.0:
        return float(mu)
    if rho == 1.0:
        return float(mu)
    if rho == -1.0:
        return max(0.0, 2.0 * mu - 1.0)
    t = float(special.ndtri(mu))
    integral, _ = integrate.quad(
        lambda theta: math.exp(-t * t / (1.0 + math.sin(theta))),
        0.0, math.asin(rho), epsabs=TOLERANCIA_GAMMA, epsrel=TOLERANCIA_GAMMA,
    )
    valor = mu * mu + integral / (2.0 * math.pi)
    return float(min(max(valor, 0.0), mu))


@dataclass(frozen=True)
class StabilityCurve:
    rho: float

    def __call__(self, mu: float) -> float:
        return gamma_rho(self.rho, mu)


def zeta(x):
    """Distancia al cuadrado de x a [0, 1]."""
    x = np.asarray(x, dtype=np.float64)
    valor = np.maximum(np.maximum(-x, x - 1.0), 0.0) ** 2
    return float(valor) if valor.ndim == 0 else valor


def sign(x):
    return np.where(np.asarray(x) >= 0.0, 1.0, -1.0)


PSI: Dict[str, Callable[[np.ndarray], np.ndarray]] = {"zeta": zeta, "sign": sign}


# --- Muestreador por cubetas ---

def _bloque_predeterminado(d: int, eps: float) -> int:
    return max(0, min(d - 1, int(round(2.0 * math.log2(1.0 / eps)))))


def _afines_invertibles(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    """Matrices (size, n, n) invertibles sobre GF(2), por rechazo."""
    matrices = rng.integers(0, 2, size=(size, n, n), dtype=np.uint8)
    while True:
        det = np.rint(np.linalg.det(matrices.astype(np.float64))).astype(np.int64)
        malas = np.flatnonzero(det % 2 == 0)
        if malas.size == 0:
            return matrices
        matrices[malas] = rng.integers(0, 2, size=(malas.size, n, n), dtype=np.uint8)


def _mz_bits(rng: np.random.Generator, size: int, n: int, d: int, c: int) -> np.ndarray:
    code = build_rm(n, d)
    cubetas = 1 << c
    interno = build_rm(n - c, d - c)

    # Q1: un polinomio P_a de grado ≤ d−c en x >> c para cada cubeta a = x mod 2^c
    coef = rng.integers(0, 2, size=(size, cubetas, interno.dim), dtype=np.uint8)
    evals = interno.encode_bits(coef)
    q1 = np.ascontiguousarray(evals.transpose(0, 2, 1)).reshape(size, code.block_len)

    # Q2: monomios con más de d−c variables fuera del bloque
    altos = np.array([sum(1 for j in mono if j >= c) > d - c for mono in code.monomials])
    coef2 = np.zeros((size, code.dim), dtype=np.uint8)
    if altos.any():
        coef2[:, altos] = rng.integers(0, 2, size=(size, int(altos.sum())), dtype=np.uint8)
    q = q1 ^ code.encode_bits(coef2)

    # Composición con x ↦ A·x + b
    A = _afines_invertibles(rng, size, n).astype(np.int64)
    b = rng.integers(0, 2, size=(size, 1, n), dtype=np.int64)
    imagen = (np.einsum("pj,mij->mpi", point_bits(n).astype(np.int64), A) + b) & 1
    indices = imagen @ (np.int64(1) << np.arange(n, dtype=np.int64))
    return np.take_along_axis(q, indices, axis=1)


def mz_rm_sampler(n: int, d: int, seed: int = 0, block_bits: Optional[int] = None,
                  size: Optional[int] = None, eps: float = 0.25,
                  rng: Optional[np.random.Generator] = None):
    """Palabra uniforme de RM(n, d) construida por cubetas y una afinidad aleatoria.

    Devuelve un BitWord si size es None; si no, palabras empaquetadas (size, bloques).
    """
    c = _bloque_predeterminado(d, eps) if block_bits is None else block_bits
    if not 0 <= d <= n:
        raise PrecondicionError(f"Se requiere 0 ≤ d ≤ n, no d = {d}, n = {n}")
    if not 0 <= c <= min(d, n - 1):
        raise PrecondicionError(f"El bloque c = {c} debe cumplir 0 ≤ c ≤ min(d, n − 1)")
    generador = rng if rng is not None else np.random.default_rng(seed)
    if size is None:
        return BitWord.from_bits(_mz_bits(generador, 1, n, d, c)[0])
    return pack_bits(_mz_bits(generador, size, n, d, c))


def _rm_directo_bits(rng: np.random.Generator, size: int, n: int, d: int) -> np.ndarray:
    code = build_rm(n, d)
    return code.encode_bits(rng.integers(0, 2, size=(size, code.dim), dtype=np.uint8))


@dataclass
class MZUniformityReport:
    n: int
    d: int
    block_bits: int
    samples: int
    counts: np.ndarray
    direct_counts: np.ndarray
    max_z: float
    p_uniform: float
    p_two_sample: float
    all_codewords: bool

    @property
    def uniform(self) -> bool:
        return self.all_codewords and self.p_two_sample > 1e-3 and self.p_uniform > 1e-3

    def to_dict(self) -> Dict:
        return {"n": self.n, "d": self.d, "block_bits": self.block_bits,
                "samples": self.samples, "max_z": self.max_z,
                "p_uniform": self.p_uniform, "p_two_sample": self.p_two_sample,
                "all_codewords": self.all_codewords, "uniform": self.uniform}


def mz_uniformity_check(n: int, d: int, block_bits: Optional[int] = None, samples: int = 100000,
                        seed: int = 0, max_dim: int = 16) -> MZUniformityReport:
    """Frecuencias exactas por palabra frente a la uniforme y frente al muestreo directo."""
    code = build_rm(n, d)
    if code.dim > max_dim:
        raise PresupuestoExcedido(f"dim = {code.dim} demasiado grande para contar frecuencias")
    c = _bloque_predeterminado(d, 0.25) if block_bits is None else block_bits
    rng_mz, rng_directo = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    casillas = 1 << code.dim
    conteos = np.zeros(casillas, dtype=np.int64)
    directos = np.zeros(casillas, dtype=np.int64)
    miembros = True
    for inicio in range(0, samples, TAMANO_LOTE):
        tam = min(TAMANO_LOTE, samples - inicio)
        palabras = mz_rm_sampler(n, d, block_bits=c, size=tam, rng=rng_mz)
        coef = code.coefficients(palabras)
        miembros &= bool(np.array_equal(code.encode(coef), palabras))
        conteos += np.bincount(bits_to_ints(coef).astype(np.int64), minlength=casillas)
        directas = pack_bits(_rm_directo_bits(rng_directo, tam, n, d))
        directos += np.bincount(code.coefficient_ids(directas).astype(np.int64), minlength=casillas)

    p = 1.0 / casillas
    z = (conteos - samples * p) / math.sqrt(samples * p * (1.0 - p))
    p_uniforme = float(stats.chisquare(conteos).pvalue)
    tabla = np.vstack([conteos, directos])
    tabla = tabla[:, tabla.sum(axis=0) > 0]
    p_dos = float(stats.chi2_contingency(tabla, correction=False)[1])
    logger.info(f"MZ ({n},{d}) c={c}: p uniforme {p_uniforme:.4f}, p dos muestras {p_dos:.4f}")
    return MZUniformityReport(n, d, c, samples, conteos, directos, float(np.abs(z).max()),
                              p_uniforme, p_dos, miembros)


# --- Distribuciones de entrada ---

def sample_distribution(dist: str, n: int, d: int, rng: np.random.Generator, size: int,
                        block_bits: Optional[int] = None) -> np.ndarray:
    """Filas (size, 2^n) de valores reales según la distribución pedida."""
    N = 1 << n
    if dist == "cube":
        return 1.0 - 2.0 * rng.integers(0, 2, size=(size, N)).astype(np.float64)
    if dist == "gaussian":
        return rng.standard_normal((size, N))
    if dist == "rm":
        return 1.0 - 2.0 * _rm_directo_bits(rng, size, n, d).astype(np.float64)
    if dist == "rm-mz":
        c = _bloque_predeterminado(d, 0.25) if block_bits is None else block_bits
        palabras = mz_rm_sampler(n, d, block_bits=c, size=size, rng=rng)
        return 1.0 - 2.0 * unpack_bits(palabras, N).astype(np.float64)
    raise PrecondicionError(f"Distribución desconocida: {dist} (opciones: {', '.join(DISTRIBUCIONES)})")


def _psi(psi) -> Callable[[np.ndarray], np.ndarray]:
    if callable(psi):
        return psi
    if psi not in PSI:
        raise PrecondicionError(f"ψ desconocida: {psi}")
    return PSI[psi]


def _esperanza(P: MultilinearPoly, psi, dist: str, n: int, d: int, samples: int, seed: int,
               workers: int, chunk: int) -> Estimate:
    funcion = _psi(psi)

    def muestreo(rng, size):
        return funcion(P.evaluate(sample_distribution(dist, n, d, rng, size)))

    return monte_carlo(real_kernel(muestreo), samples, seed, workers, chunk)


@dataclass
class InvarianceGap:
    gap: float
    stderr: float
    estimate_a: Estimate
    estimate_b: Estimate
    dists: Tuple[str, str]

    def to_dict(self) -> Dict:
        return {"gap": self.gap, "stderr": self.stderr, "dists": list(self.dists),
                "estimate_a": self.estimate_a.to_dict(), "estimate_b": self.estimate_b.to_dict()}


def invariance_gap(P: MultilinearPoly, psi, dist_a: str, dist_b: str, n: int, d: int,
                   samples: int = 100000, seed: int = 0, workers: int = 1,
                   chunk: int = 4096) -> InvarianceGap:
    """|E[ψ∘P(A)] − E[ψ∘P(B)]| con error estándar combinado."""
    if P.n_vars != (1 << n):
        raise PrecondicionError(f"P tiene {P.n_vars} variables y el código 2^{n}")
    for dist in (dist_a, dist_b):
        if dist not in DISTRIBUCIONES:
            raise PrecondicionError(f"Distribución desconocida: {dist}")
    semilla_a, semilla_b = (int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(2))
    a = _esperanza(P, psi, dist_a, n, d, samples, semilla_a, workers, chunk)
    b = _esperanza(P, psi, dist_b, n, d, samples, semilla_b, workers, chunk)
    error = math.sqrt(a.stderr ** 2 + b.stderr ** 2)
    return InvarianceGap(abs(a.value - b.value), error, a, b, (dist_a, dist_b))


# --- Mayoría es lo más estable ---

@dataclass
class MISReport:
    mu: float
    max_influence: float
    stability: float
    rho: float
    gamma: float
    slack: float
    error_term: float
    tau: float
    ell: int
    hypothesis: bool

    @property
    def status(self) -> str:
        if not self.hypothesis:
            return "no_aplica"
        return "cumple" if self.slack <= self.error_term else "viola"

    def to_dict(self) -> Dict:
        return {"mu": self.mu, "max_influence": self.max_influence, "stability": self.stability,
                "rho": self.rho, "gamma": self.gamma, "slack": self.slack,
                "error_term": self.error_term, "tau": self.tau, "ell": self.ell,
                "hypothesis": self.hypothesis, "status": self.status}


def mis_harness(f: CodeFunction, g: CayleyGraph, tau: float, ell: int, c: float = 1.0) -> MISReport:
    """Compara ⟨f, Gf⟩ con Γ_ρ(μ) cuando las influencias de grado ≤ ℓ son ≤ τ.

    ρ es el autovalor medido del grafo sobre un carácter dictador.
    """
    if not f.is_dense:
        raise PrecondicionError("El arnés requiere una función densa")
    if f.values.min() < -1e-12 or f.values.max() > 1.0 + 1e-12:
        raise PrecondicionError("La función debe tomar valores en [0, 1]")
    if not 0.0 < tau < 1.0:
        raise PrecondicionError(f"τ = {tau} fuera de (0, 1)")
    coef = wht(f)
    mu = float(coef[0])
    estabilidad = noise_stability(f, g, coef)
    tabla = influences(f, ell, coef)
    rho = char_eigenvalue(g, BitWord.from_support([0], g.code.block_len)).lam_walk
    gamma = gamma_rho(min(max(rho, -1.0), 1.0), min(max(mu, 0.0), 1.0))
    log_inv = math.log(1.0 / tau)
    error = c * max(math.log(log_inv), 0.0) / ((1.0 - rho) * log_inv) if rho < 1.0 else math.inf
    return MISReport(mu, tabla.max_influence, estabilidad, rho, gamma, estabilidad - gamma,
                     error, tau, ell, tabla.max_influence <= tau)


# --- Transferencia a distribuciones k-independientes ---

@dataclass
class TransferReport:
    e_rm: Estimate
    e_cube: Estimate
    difference: float
    stderr: float
    slack: float
    eps_reg: float
    degree: int

    @property
    def holds(self) -> bool:
        return self.difference <= self.slack + 3.0 * self.stderr

    @property
    def measured_constant(self) -> float:
        if self.eps_reg <= 0.0:
            return 0.0
        return max(self.difference, 0.0) / self.eps_reg ** 0.9

    def to_dict(self) -> Dict:
        return {"e_rm": self.e_rm.to_dict(), "e_cube": self.e_cube.to_dict(),
                "difference": self.difference, "stderr": self.stderr, "slack": self.slack,
                "eps_reg": self.eps_reg, "degree": self.degree, "holds": self.holds,
                "measured_constant": self.measured_constant}


def bounded_distance_transfer(P: MultilinearPoly, n: int, d: int, samples: int = 100000,
                              seed: int = 0, slack: float = 0.05, workers: int = 1,
                              chunk: int = 4096) -> TransferReport:
    """E[ζ∘P] bajo RM(n, d) uniforme frente al cubo; se espera E_rm ≤ E_cubo + holgura."""
    brecha = invariance_gap(P, "zeta", "rm", "cube", n, d, samples, seed, workers, chunk)
    a, b = brecha.estimate_a, brecha.estimate_b
    reg = regularity(P)
    return TransferReport(a, b, a.value - b.value, brecha.stderr, slack, reg.eps_reg, P.degree)
