"""
🎯 codigocorto - Testers canónicos
=================================

Un tester canónico para C es una distribución sobre palabras q ∈ C⊥; la
palabra α se rechaza cuando ⟨α, q⟩ = 1.

PROPÓSITO:
- Tester de Reed–Muller (palabras de peso mínimo de RM(n, d))
- Amplificación por XOR y paseo en tiempo continuo
- Probabilidad de rechazo, suavidad y curva de solidez s(k)

Los testers derivados (XOR, paseo) guardan una raíz con soporte explícito y
una transformación de autovalores (λ ↦ λ^r, λ ↦ e^{−T(1−λ)}), de modo que
sus rechazos exactos se obtienen espectralmente.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from utils.corto_paralelo import Estimate, bernoulli_kernel, monte_carlo

from .corto_errores import PrecondicionError, PresupuestoExcedido
from .corto_gf2 import BitWord, num_blocks, parity, popcount, unpack_bits, walsh_hadamard
from .corto_reedmuller import (
    PRESUPUESTO_ENUMERACION,
    CosetTable,
    RMCode,
    build_rm,
    coset_table,
    dual,
    min_weight_matrix,
    word_with_syndrome,
)

logger = logging.getLogger(__name__)

Muestras = Union[int, str, None]


@dataclass
class TesterSupport:
    """Soporte explícito: palabras distintas con multiplicidades enteras"""

    words: np.ndarray
    counts: np.ndarray
    total: int

    @property
    def size(self) -> int:
        return int(self.words.shape[0])

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / float(self.total)

    def pairs(self) -> List[tuple]:
        return [(w, Fraction(int(c), self.total)) for w, c in zip(self.words, self.counts)]


def _identidad(lam):
    return lam


class CanonicalTester:
    """
    🎯 Distribución muestreable sobre C⊥ con metadatos del test
    """

    def __init__(self, code: RMCode, kind: str,
                 sampler: Callable[[np.random.Generator, int], np.ndarray],
                 support: Optional[TesterSupport] = None,
                 query_complexity: Optional[int] = None,
                 marginals: Optional[np.ndarray] = None,
                 root: Optional["CanonicalTester"] = None,
                 transform: Callable = _identidad,
                 params: Optional[Dict] = None):
        self.code = code
        self.dual = dual(code)
        self.kind = kind
        self._sampler = sampler
        self.support = support
        self.query_complexity = query_complexity
        self.marginals = marginals
        self.root = root if root is not None else self
        self.transform = transform
        self.params = params or {}

    @property
    def block_len(self) -> int:
        return self.code.block_len

    @property
    def query_probability(self) -> Optional[float]:
        """τ = E[wt(q)]/N, medido sobre las marginales"""
        if self.marginals is None:
            return None
        return float(np.mean(self.marginals))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """`size` palabras empaquetadas, forma (size, bloques)."""
        return self._sampler(rng, int(size))

    def sample_words(self, size: int, seed: int = 0) -> List[BitWord]:
        palabras = self.sample(np.random.default_rng(seed), size)
        return [BitWord(p, self.block_len) for p in palabras]

    def exact_marginals(self) -> Optional[List[Fraction]]:
        if self.support is None:
            return None
        cuentas = _conteos_por_coordenada(self.support, self.block_len)
        return [Fraction(int(c), self.support.total) for c in cuentas]

    def descriptor(self) -> Dict:
        return dict(self.params)

    def __repr__(self) -> str:
        return f"CanonicalTester({self.descriptor()})"


def _conteos_por_coordenada(support: TesterSupport, N: int) -> np.ndarray:
    bits = unpack_bits(support.words, N).astype(np.float64)
    return np.rint(support.counts.astype(np.float64) @ bits).astype(np.int64)


def _muestreador_de_soporte(support: TesterSupport):
    uniforme = bool(np.all(support.counts == support.counts[0]))
    probabilidades = support.probabilities

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        if uniforme:
            indices = rng.integers(0, support.size, size=size)
        else:
            indices = rng.choice(support.size, size=size, p=probabilidades)
        return support.words[indices]

    return sampler


def rm_tester(n: int, d: int, budget: int = PRESUPUESTO_ENUMERACION) -> CanonicalTester:
    """Tester de RM(n, n−d−1): palabra uniforme de peso mínimo de RM(n, d)."""
    if not 1 <= d <= n - 2:
        raise PrecondicionError(f"El tester RM requiere 1 ≤ d ≤ n−2 (n={n}, d={d})")
    C = build_rm(n, n - d - 1)
    D = dual(C)
    palabras = min_weight_matrix(D, budget)
    soporte = TesterSupport(
        words=palabras,
        counts=np.ones(palabras.shape[0], dtype=np.int64),
        total=int(palabras.shape[0]),
    )
    marginales = _conteos_por_coordenada(soporte, C.block_len) / float(soporte.total)
    logger.info(f"Tester RM({n},{d}): {soporte.size} palabras de peso {1 << (n - d)}")
    return CanonicalTester(
        code=C,
        kind="rm",
        sampler=_muestreador_de_soporte(soporte),
        support=soporte,
        query_complexity=int(popcount(palabras).max()),
        marginals=marginales,
        params={"kind": "rm", "n": n, "d": d, "r": 1, "walk_time": None},
    )


def _convolucion(a: TesterSupport, b: TesterSupport) -> TesterSupport:
    bloques = a.words.shape[1]
    palabras = (a.words[:, None, :] ^ b.words[None, :, :]).reshape(-1, bloques)
    cuentas = (a.counts[:, None] * b.counts[None, :]).reshape(-1)
    unicas, inversa = np.unique(palabras, axis=0, return_inverse=True)
    agregadas = np.zeros(unicas.shape[0], dtype=np.int64)
    np.add.at(agregadas, inversa.reshape(-1), cuentas)
    return TesterSupport(words=unicas, counts=agregadas, total=a.total * b.total)


def xor_tester(t: CanonicalTester, r: int, budget: int = PRESUPUESTO_ENUMERACION) -> CanonicalTester:
    """XOR de r muestras independientes de t."""
    if r < 1:
        raise PrecondicionError(f"El número de repeticiones debe ser ≥ 1, no {r}")
    params = {"kind": "xor", "n": t.code.n, "d": t.dual.r, "r": r,
              "walk_time": t.params.get("walk_time"), "base": t.descriptor()}
    base_transform = t.transform

    def transform(lam):
        return np.power(base_transform(lam), r)

    if r == 1:
        return CanonicalTester(t.code, "xor", t._sampler, t.support, t.query_complexity,
                               t.marginals, t.root, t.transform, params)

    soporte = None
    if t.support is not None:
        actual = t.support
        for _ in range(r - 1):
            if actual.size * t.support.size > budget:
                logger.info(f"Soporte de XOR^{r} no materializado (presupuesto {budget})")
                actual = None
                break
            actual = _convolucion(actual, t.support)
        soporte = actual

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        muestras = t.sample(rng, size * r).reshape(size, r, -1)
        return np.bitwise_xor.reduce(muestras, axis=1)

    marginales = None
    if t.marginals is not None:
        marginales = (1.0 - np.power(1.0 - 2.0 * t.marginals, r)) / 2.0
    consultas = None if t.query_complexity is None else r * t.query_complexity
    return CanonicalTester(t.code, "xor", sampler, soporte, consultas, marginales,
                           t.root, transform, params)


def walk_tester(t: CanonicalTester, walk_time: float) -> CanonicalTester:
    """Paseo en tiempo continuo: XOR de K ~ Poisson(walk_time) muestras de t."""
    if walk_time < 0:
        raise PrecondicionError(f"walk_time debe ser ≥ 0, no {walk_time}")
    tiempo = float(walk_time)
    params = {"kind": "walk", "n": t.code.n, "d": t.dual.r, "r": t.params.get("r", 1),
              "walk_time": tiempo, "base": t.descriptor()}
    base_transform = t.transform
    bloques = num_blocks(t.block_len)

    def transform(lam):
        return np.exp(-tiempo * (1.0 - base_transform(lam)))

    if tiempo == 0.0:
        soporte = TesterSupport(np.zeros((1, bloques), dtype=np.uint64),
                                np.ones(1, dtype=np.int64), 1)
        return CanonicalTester(t.code, "walk", _muestreador_de_soporte(soporte), soporte, 0,
                               np.zeros(t.block_len), t.root, transform, params)

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        pasos = rng.poisson(tiempo, size=size)
        salida = np.zeros((size, bloques), dtype=np.uint64)
        total = int(pasos.sum())
        if total:
            propietarios = np.repeat(np.arange(size), pasos)
            np.bitwise_xor.at(salida, propietarios, t.sample(rng, total))
        return salida

    marginales = None
    if t.marginals is not None:
        marginales = (1.0 - np.exp(-2.0 * tiempo * t.marginals)) / 2.0
    return CanonicalTester(t.code, "walk", sampler, None, None, marginales,
                           t.root, transform, params)


def xor_rejection(s, r: int):
    """Rechazo del XOR de r tests independientes con rechazo individual s."""
    return (1 - (1 - 2 * s) ** r) / 2


def soundness_floor(k: int, d: int) -> float:
    """Cota inferior (k/2)·2^{−d} para la solidez del tester RM."""
    return (k / 2.0) * 2.0 ** (-d)


def rejection_probability(t: CanonicalTester, alpha: BitWord, samples: Muestras = "exact",
                          seed: int = 0, workers: int = 1) -> Estimate:
    """s_T(α) = Pr[⟨α, q⟩ = 1], exacta o por Monte Carlo."""
    if alpha.length != t.block_len:
        raise PrecondicionError(
            f"α tiene {alpha.length} bits y el tester trabaja con {t.block_len}"
        )
    if samples in (None, "exact"):
        if t.support is not None:
            paridades = parity(t.support.words & alpha.blocks[None, :]).astype(np.int64)
            return Estimate.exacto(Fraction(int(paridades @ t.support.counts), t.support.total))
        if t.root.support is not None:
            base = rejection_probability(t.root, alpha, "exact")
            lam = float(t.transform(1.0 - 2.0 * base.value))
            return Estimate.exacto((1.0 - lam) / 2.0)
        raise PrecondicionError("El modo exacto requiere un soporte materializado")

    bloques = alpha.blocks

    def indicador(rng, size):
        return parity(t.sample(rng, size) & bloques[None, :])

    return monte_carlo(bernoulli_kernel(indicador), int(samples), seed, workers)


@dataclass
class SmoothnessReport:
    """Tablas Pr[q_i = 1] y Pr[q_i = q_j = 1] con veredictos de suavidad"""

    singles: np.ndarray
    pairs: np.ndarray
    tau: float
    smooth: bool
    two_smooth: bool
    exact: bool
    samples: Optional[int] = None
    tau_fraction: Optional[Fraction] = None
    pair_values: List[str] = field(default_factory=list)

    @property
    def max_single_deviation(self) -> float:
        return float(np.max(np.abs(self.singles - self.tau)))

    @property
    def max_pair_deviation(self) -> float:
        fuera = ~np.eye(self.pairs.shape[0], dtype=bool)
        return float(np.max(np.abs(self.pairs[fuera] - self.tau ** 2))) if fuera.any() else 0.0

    def singles_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"coordinate": np.arange(self.singles.size), "pr_q_i": self.singles})

    def pairs_frame(self) -> pd.DataFrame:
        i, j = np.triu_indices(self.pairs.shape[0], k=1)
        return pd.DataFrame({"i": i, "j": j, "pr_q_i_q_j": self.pairs[i, j]})

    def to_dict(self) -> Dict:
        return {
            "tau": self.tau,
            "tau_fraction": None if self.tau_fraction is None else str(self.tau_fraction),
            "smooth": self.smooth,
            "two_smooth": self.two_smooth,
            "exact": self.exact,
            "samples": self.samples,
            "tau_squared": self.tau ** 2,
            "max_single_deviation": self.max_single_deviation,
            "max_pair_deviation": self.max_pair_deviation,
            "distinct_pair_values": self.pair_values,
        }


def _tabla_de_pares(bits: np.ndarray, pesos: np.ndarray, lote: int = 1 << 14) -> np.ndarray:
    N = bits.shape[1]
    pares = np.zeros((N, N), dtype=np.float64)
    for inicio in range(0, bits.shape[0], lote):
        b = bits[inicio:inicio + lote].astype(np.float64)
        pares += (b * pesos[inicio:inicio + lote, None]).T @ b
    return pares


def smoothness_report(t: CanonicalTester, samples: Optional[int] = None,
                      seed: int = 0) -> SmoothnessReport:
    """Suavidad (todas las marginales = τ) y 2-suavidad (todos los pares = τ²)."""
    N = t.block_len
    if t.support is not None:
        soporte = t.support
        bits = unpack_bits(soporte.words, N)
        pesos = soporte.counts.astype(np.float64)
        simples = np.rint(pesos @ bits.astype(np.float64)).astype(np.int64)
        pares = np.rint(_tabla_de_pares(bits, pesos)).astype(np.int64)
        S = int(simples.sum())
        tau = Fraction(S, soporte.total * N)
        suave = bool(np.all(simples * N == S))
        fuera = pares[~np.eye(N, dtype=bool)]
        valores = [Fraction(int(v), soporte.total) for v in np.unique(fuera)]
        dos_suave = all(v == tau * tau for v in valores)
        return SmoothnessReport(
            singles=simples / soporte.total,
            pairs=pares / soporte.total,
            tau=float(tau),
            smooth=suave,
            two_smooth=dos_suave,
            exact=True,
            tau_fraction=tau,
            pair_values=[str(v) for v in valores],
        )

    if not samples:
        raise PrecondicionError("Sin soporte materializado hay que indicar samples")
    rng = np.random.default_rng(seed)
    bits = unpack_bits(t.sample(rng, samples), N)
    simples = bits.mean(axis=0, dtype=np.float64)
    pares = _tabla_de_pares(bits, np.ones(samples)) / samples
    tau = float(simples.mean())
    tolerancia = 3.0 * np.sqrt(max(tau * (1 - tau), 1e-12) / samples)
    tolerancia2 = 3.0 * np.sqrt(max(tau * tau * (1 - tau * tau), 1e-12) / samples)
    fuera = pares[~np.eye(N, dtype=bool)]
    return SmoothnessReport(
        singles=simples,
        pairs=pares,
        tau=tau,
        smooth=bool(np.max(np.abs(simples - tau)) <= tolerancia),
        two_smooth=bool(np.max(np.abs(fuera - tau * tau)) <= tolerancia2),
        exact=False,
        samples=samples,
    )


@dataclass
class CosetSpectrum:
    """Autovalor λ(σ) de cada carácter, indexado por síndrome σ respecto de C"""

    code: RMCode
    lambdas: np.ndarray

    @property
    def rejections(self) -> np.ndarray:
        return (1.0 - self.lambdas) / 2.0


def coset_spectrum(t: CanonicalTester, max_syndrome_bits: int = 24) -> CosetSpectrum:
    """Espectro exacto vía Walsh–Hadamard de la distribución en coeficientes de D."""
    raiz = t.root
    if raiz.support is None:
        raise PrecondicionError("El espectro exacto requiere una raíz con soporte")
    D = t.dual
    if D.dim > max_syndrome_bits:
        raise PresupuestoExcedido(f"Espectro de 2^{D.dim} caracteres fuera de presupuesto")
    indices = D.coefficient_ids(raiz.support.words).astype(np.int64)
    masa = np.bincount(indices, weights=raiz.support.counts.astype(np.float64),
                       minlength=1 << D.dim)
    lam_raiz = walsh_hadamard(masa) / raiz.support.total
    return CosetSpectrum(code=t.code, lambdas=np.asarray(t.transform(lam_raiz), dtype=np.float64))


@dataclass
class SoundnessPoint:
    """Punto de la curva de solidez"""

    k: int
    s_lower: float
    witness: Optional[BitWord]
    mode: str
    s_at_distance: Optional[float] = None
    floor: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "s_lower": self.s_lower,
            "witness_hex": None if self.witness is None else self.witness.hex(),
            "mode": self.mode,
            "s_at_distance": self.s_at_distance,
            "soundness_floor": self.floor,
        }


def _curva_exacta(t: CanonicalTester, code: RMCode, k_max: int, budget: int) -> List[SoundnessPoint]:
    espectro = coset_spectrum(t)
    tabla = coset_table(code, budget=budget)
    rechazo = espectro.rejections
    d = t.dual.r
    puntos: List[SoundnessPoint] = []
    for k in range(0, k_max + 1):
        if not tabla.complete and k > tabla.max_weight + 1:
            raise PresupuestoExcedido(
                f"La tabla de cosets solo cubre peso {tabla.max_weight}; no alcanza k = {k}"
            )
        mascara = tabla.degrees >= k
        if not tabla.complete:
            mascara |= tabla.degrees < 0
        candidatos = np.flatnonzero(mascara)
        if candidatos.size == 0:
            logger.info(f"No hay cosets a distancia ≥ {k}; la curva termina en {k - 1}")
            break
        mejor = int(candidatos[np.argmin(rechazo[candidatos])])
        testigo = tabla.leader(mejor)
        if testigo is None:
            sigma = np.array([(mejor >> j) & 1 for j in range(t.dual.dim)], dtype=np.uint8)
            testigo = BitWord.from_bits(word_with_syndrome(code, sigma))
        exactos = np.flatnonzero(tabla.degrees == k)
        puntos.append(SoundnessPoint(
            k=k,
            s_lower=float(rechazo[mejor]) if k else 0.0,
            witness=testigo if k else BitWord.zeros(code.block_len),
            mode="exact",
            s_at_distance=float(rechazo[exactos].min()) if exactos.size else None,
            floor=soundness_floor(k, d),
        ))
    return puntos


def _curva_muestreada(t: CanonicalTester, code: RMCode, k_max: int, trials: int,
                      samples: Muestras, seed: int) -> List[SoundnessPoint]:
    if 2 * k_max >= code.min_distance:
        raise PrecondicionError(
            f"En modo muestreado k_max = {k_max} debe quedar bajo la mitad de la distancia"
        )
    rng = np.random.default_rng(seed)
    N = code.block_len
    modo_rechazo = "exact" if t.root.support is not None else samples
    if modo_rechazo in (None, "exact") and t.root.support is None:
        raise PrecondicionError("Sin soporte hay que indicar samples")
    puntos = [SoundnessPoint(0, 0.0, BitWord.zeros(N), "sampled", 0.0, 0.0)]
    for k in range(1, k_max + 1):
        mejor, testigo = None, None
        for ensayo in range(trials):
            soporte = rng.choice(N, size=k, replace=False)
            desplazamiento = code.encode(rng.integers(0, 2, size=code.dim, dtype=np.uint8))
            alpha = BitWord.from_support(soporte, N) ^ BitWord(desplazamiento, N)
            s = rejection_probability(t, alpha, modo_rechazo, seed=seed + 7919 * k + ensayo).value
            if mejor is None or s < mejor:
                mejor, testigo = s, alpha
        puntos.append(SoundnessPoint(k, mejor, testigo, "sampled", mejor, soundness_floor(k, t.dual.r)))
    return puntos


def soundness_curve(t: CanonicalTester, code: Optional[RMCode] = None, k_max: int = 3,
                    mode: str = "exact", trials: int = 32, samples: Muestras = None,
                    seed: int = 0, budget: int = PRESUPUESTO_ENUMERACION) -> List[SoundnessPoint]:
    """s(k) = min de s_T(α) sobre α con Δ(α, C) ≥ k, para k = 0..k_max.

    En modo "exact" se usa el espectro completo y el arreglo estándar; en
    modo "sampled" el mínimo es sobre palabras plantadas (cota superior del
    verdadero mínimo).
    """
    code = t.code if code is None else code
    if code != t.code:
        raise PrecondicionError("El código no coincide con el del tester")
    if k_max < 0:
        raise PrecondicionError("k_max debe ser ≥ 0")
    if mode == "exact":
        return _curva_exacta(t, code, k_max, budget)
    if mode == "sampled":
        return _curva_muestreada(t, code, k_max, trials, samples, seed)
    raise PrecondicionError(f"Modo desconocido: {mode}")


def curve_value(curve: List[SoundnessPoint], k: int) -> float:
    for punto in curve:
        if punto.k == k:
            return punto.s_lower
    raise PrecondicionError(f"La curva no contiene k = {k}")


def smooth_bounds_report(t: CanonicalTester, code: Optional[RMCode] = None, gamma: float = 0.25,
                         budget: int = PRESUPUESTO_ENUMERACION,
                         tolerance: float = 1e-12) -> Dict:
    """Comprueba s ≤ Δτ en todo coset clasificado y (1−γ)Δτ ≤ s si el tester es 2-suave."""
    code = t.code if code is None else code
    espectro = coset_spectrum(t)
    tabla: CosetTable = coset_table(code, budget=budget)
    suavidad = smoothness_report(t) if t.support is not None else None
    tau = t.query_probability
    clasificados = np.flatnonzero(tabla.degrees > 0)
    delta = tabla.degrees[clasificados].astype(np.float64)
    s = espectro.rejections[clasificados]
    violaciones_sup = int(np.count_nonzero(s > delta * tau + tolerance))
    aplica_inferior = bool(suavidad is not None and suavidad.two_smooth)
    violaciones_inf = None
    if aplica_inferior:
        regimen = delta * tau <= gamma
        violaciones_inf = int(np.count_nonzero(
            s[regimen] < (1 - gamma) * delta[regimen] * tau - tolerance))
    return {
        "tau": tau,
        "gamma": gamma,
        "classified_cosets": int(clasificados.size),
        "upper_bound_violations": violaciones_sup,
        "lower_bound_applicable": aplica_inferior,
        "lower_bound_violations": violaciones_inf,
        "table_complete": tabla.complete,
    }
