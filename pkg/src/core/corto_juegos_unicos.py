"""
🧩 codigocorto - Instancias Max-2Lin / Unique Games Γ(C, T)
==========================================================

PROPÓSITO:
- Construir la instancia del verificador: c ∈ D, h, h′ ∈ H, q ~ T y la
  restricción ℓ(c⊕h′) ⊕ ℓ(c⊕q⊕h) = h ⊕ h′
- Valor de la solución vectorial implícita y sus restricciones
- Evaluar etiquetados y la cota de solidez a partir de la curva s(k)

Los vértices son vectores de coeficientes de D = RM(n, d) (enteros de dim
bits); las etiquetas y los desplazamientos son índices de H = formas lineales,
es decir enteros de n bits. Una forma lineal con índice a se incrusta en D
como a << 1 (los monomios x_j ocupan las posiciones 1..n).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, TextIO, Union

import numpy as np
import pandas as pd
from sklearn.utils import murmurhash3_32

from utils.corto_paralelo import Estimate, bernoulli_kernel, monte_carlo, real_kernel

from .corto_errores import ConfiguracionInvalida, PrecondicionError, PresupuestoExcedido
from .corto_gf2 import ints_to_bits, popcount, unpack_bits
from .corto_reedmuller import PRESUPUESTO_ENUMERACION, RMCode, build_rm, dimension, hadamard_subcode
from .corto_tester import CanonicalTester, SoundnessPoint, soundness_floor

logger = logging.getLogger(__name__)

DESPLAZAMIENTO_LINEAL = 1
MAX_BITS_VERTICE = 64


def hash_ids(ids: np.ndarray, seed: int) -> np.ndarray:
    """Hash murmur3 de enteros de hasta 64 bits (mitades baja y alta combinadas)."""
    ids = np.ascontiguousarray(np.asarray(ids, dtype=np.uint64).reshape(-1))
    bajo = np.ascontiguousarray((ids & np.uint64(0xFFFFFFFF)).astype(np.uint32).view(np.int32))
    alto = np.ascontiguousarray((ids >> np.uint64(32)).astype(np.uint32).view(np.int32))
    semilla = int(seed) & 0x7FFFFFFF
    h1 = np.asarray(murmurhash3_32(bajo, seed=semilla, positive=True), dtype=np.uint64)
    h2 = np.asarray(murmurhash3_32(alto, seed=semilla ^ 0x2545F491, positive=True), dtype=np.uint64)
    return h1 ^ (h2 << np.uint64(7)) ^ (h2 >> np.uint64(25))


def linear_part(ids: np.ndarray, group_bits: int) -> np.ndarray:
    """Índice en H de la parte lineal de cada vector de coeficientes."""
    mascara = np.uint64((1 << group_bits) - 1)
    return (np.asarray(ids, dtype=np.uint64) >> np.uint64(DESPLAZAMIENTO_LINEAL)) & mascara


def embed_linear(h: np.ndarray) -> np.ndarray:
    return np.asarray(h, dtype=np.uint64) << np.uint64(DESPLAZAMIENTO_LINEAL)


def coset_representative(ids: np.ndarray, group_bits: int) -> np.ndarray:
    """Representante de c + H con parte lineal cero."""
    return np.asarray(ids, dtype=np.uint64) ^ embed_linear(linear_part(ids, group_bits))


# --- Instancias ---

@dataclass
class ConstraintBatch:
    u: np.ndarray
    v: np.ndarray
    shift: np.ndarray

    def satisfied(self, labeling: "Labeling") -> np.ndarray:
        return (labeling(self.u) ^ labeling(self.v)) == self.shift


@dataclass
class UGInstance:
    """
    🧩 Instancia Max-2Lin sobre el grupo GF(2)^t

    Materializada: tabla u, v, shift, weight (y count con denominador total).
    Implícita: solo el muestreador sembrado del verificador.
    """

    group_bits: int
    vertex_bits: int
    constraints: Optional[pd.DataFrame] = None
    total: Optional[int] = None
    sampler: Optional[Callable[[np.random.Generator, int], ConstraintBatch]] = None
    descriptor: Dict = field(default_factory=dict)

    @property
    def alphabet_size(self) -> int:
        return 1 << self.group_bits

    @property
    def num_vars(self) -> int:
        return 1 << self.vertex_bits

    @property
    def materialized(self) -> bool:
        return self.constraints is not None

    def sample(self, rng: np.random.Generator, size: int) -> ConstraintBatch:
        if self.sampler is not None:
            return self.sampler(rng, size)
        tabla = self.constraints
        filas = rng.choice(len(tabla), size=size, p=tabla["weight"].to_numpy())
        return ConstraintBatch(tabla["u"].to_numpy()[filas], tabla["v"].to_numpy()[filas],
                               tabla["shift"].to_numpy()[filas])

    def batch(self) -> ConstraintBatch:
        if not self.materialized:
            raise PrecondicionError("La instancia no está materializada")
        tabla = self.constraints
        return ConstraintBatch(tabla["u"].to_numpy(np.uint64), tabla["v"].to_numpy(np.uint64),
                               tabla["shift"].to_numpy(np.uint64))


def _verificador(D: RMCode, tester: CanonicalTester, group_bits: int):
    mascara_vertice = np.uint64((1 << D.dim) - 1) if D.dim < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)
    R = 1 << group_bits

    def sampler(rng: np.random.Generator, size: int) -> ConstraintBatch:
        c = rng.integers(0, np.iinfo(np.uint64).max, size=size, dtype=np.uint64,
                         endpoint=True) & mascara_vertice
        h = rng.integers(0, R, size=size).astype(np.uint64)
        hp = rng.integers(0, R, size=size).astype(np.uint64)
        q = D.coefficient_ids(tester.sample(rng, size))
        return ConstraintBatch(c ^ embed_linear(hp), c ^ q ^ embed_linear(h), h ^ hp)

    return sampler


def build_gamma_instance(n: int, d: int, tester: CanonicalTester, mode: str = "sampler",
                         budget: int = PRESUPUESTO_ENUMERACION, seed: Optional[int] = None) -> UGInstance:
    """Γ(C, T) con D = RM(n, d) y H su subcódigo de Hadamard."""
    D = tester.dual
    if (D.n, D.r) != (n, d):
        raise PrecondicionError(f"El tester vive en {D.label}, no en RM({n},{d})")
    hadamard_subcode(D)
    if D.dim > MAX_BITS_VERTICE:
        raise PresupuestoExcedido(f"Vértices de {D.dim} bits no caben en 64")
    R = 1 << n
    descriptor = {
        "n": n, "d": d, "seed": seed, "mode": mode,
        "tester": {k: tester.params.get(k) for k in ("kind", "r", "walk_time")},
    }
    if mode == "sampler":
        return UGInstance(n, D.dim, sampler=_verificador(D, tester, n), descriptor=descriptor)
    if mode != "materialize":
        raise PrecondicionError(f"Modo desconocido: {mode}")

    soporte = tester.support
    if soporte is None:
        raise PrecondicionError("Materializar requiere un tester con soporte explícito")
    tamano = (1 << D.dim) * R * R * soporte.size
    if tamano > budget:
        logger.warning(f"Γ({n},{d}) tendría {tamano} tuplas; presupuesto {budget}")
        raise PresupuestoExcedido(f"Materializar Γ({n},{d}) requiere {tamano} tuplas (> {budget})")

    q_ids = D.coefficient_ids(soporte.words)
    c, h, hp, qi = np.meshgrid(np.arange(1 << D.dim, dtype=np.uint64),
                               np.arange(R, dtype=np.uint64),
                               np.arange(R, dtype=np.uint64),
                               np.arange(soporte.size), indexing="ij")
    c, h, hp, qi = c.ravel(), h.ravel(), hp.ravel(), qi.ravel()
    tabla = pd.DataFrame({
        "u": c ^ embed_linear(hp),
        "v": c ^ q_ids[qi] ^ embed_linear(h),
        "shift": h ^ hp,
        "count": soporte.counts[qi].astype(np.int64),
    })
    tabla = tabla.groupby(["u", "v", "shift"], as_index=False, sort=True)["count"].sum()
    total = soporte.total * (1 << D.dim) * R * R
    tabla["weight"] = tabla["count"] / float(total)
    logger.info(f"Γ({n},{d}) materializada: {len(tabla)} restricciones, {1 << D.dim} vértices")
    return UGInstance(n, D.dim, tabla, total, descriptor=descriptor)


def write_max2lin(inst: UGInstance, destino: Union[str, Path, TextIO]) -> None:
    """Cabecera `max2lin t=<bits> vars=<count>` y líneas `u v shift_hex weight`."""
    if not inst.materialized:
        raise PrecondicionError("Solo se escriben instancias materializadas")
    lineas = [f"max2lin t={inst.group_bits} vars={inst.num_vars}"]
    for u, v, s, w in inst.constraints[["u", "v", "shift", "weight"]].itertuples(index=False):
        lineas.append(f"{int(u)} {int(v)} {int(s):x} {float(w)!r}")
    texto = "\n".join(lineas) + "\n"
    if hasattr(destino, "write"):
        destino.write(texto)
    else:
        Path(destino).write_text(texto, encoding="utf-8")


def read_max2lin(origen: Union[str, Path, TextIO]) -> UGInstance:
    texto = origen.read() if hasattr(origen, "read") else Path(origen).read_text(encoding="utf-8")
    lineas = [l for l in texto.splitlines() if l.strip()]
    if not lineas:
        raise ConfiguracionInvalida("Archivo Max-2Lin vacío")
    cabecera = lineas[0].split()
    try:
        if cabecera[0] != "max2lin":
            raise ValueError(cabecera[0])
        campos = dict(p.split("=", 1) for p in cabecera[1:])
        bits, variables = int(campos["t"]), int(campos["vars"])
        filas = [l.split() for l in lineas[1:]]
        tabla = pd.DataFrame({
            "u": np.array([int(f[0]) for f in filas], dtype=np.uint64),
            "v": np.array([int(f[1]) for f in filas], dtype=np.uint64),
            "shift": np.array([int(f[2], 16) for f in filas], dtype=np.uint64),
            "weight": np.array([float(f[3]) for f in filas], dtype=np.float64),
        })
    except (ValueError, KeyError, IndexError) as exc:
        raise ConfiguracionInvalida(f"Archivo Max-2Lin mal formado: {exc}") from exc
    vertex_bits = max(0, (variables - 1).bit_length())
    return UGInstance(bits, vertex_bits, tabla, None, descriptor={"source": "max2lin"})


# --- Etiquetados ---

class Labeling:
    """ℓ : vértices → GF(2)^t, evaluado por lotes."""

    def __call__(self, ids: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def descriptor(self) -> Dict:
        return {"kind": type(self).__name__}


@dataclass
class ConstantLabeling(Labeling):
    h0: int = 0

    def __call__(self, ids):
        return np.full(np.shape(ids), self.h0, dtype=np.uint64)

    def descriptor(self):
        return {"kind": "constant", "h0": self.h0}


@dataclass
class RandomLabeling(Labeling):
    group_bits: int
    seed: int = 0

    def __call__(self, ids):
        forma = np.shape(ids)
        return (hash_ids(ids, self.seed) & np.uint64((1 << self.group_bits) - 1)).reshape(forma)

    def descriptor(self):
        return {"kind": "random", "seed": self.seed}


@dataclass
class TableLabeling(Labeling):
    table: np.ndarray

    def __call__(self, ids):
        return np.asarray(self.table, dtype=np.uint64)[np.asarray(ids, dtype=np.int64)]

    def descriptor(self):
        return {"kind": "table", "size": int(len(self.table))}


@dataclass
class FoldedLabeling(Labeling):
    """ℓ(c) = g(rep(c)) ⊕ M(lin(c)), con M la identidad (plegado) o cero (invariante)."""

    group_bits: int
    base: Callable[[np.ndarray], np.ndarray]
    folded: bool = True

    def __call__(self, ids):
        ids = np.asarray(ids, dtype=np.uint64)
        etiqueta = np.asarray(self.base(coset_representative(ids, self.group_bits)), dtype=np.uint64)
        if self.folded:
            etiqueta = etiqueta ^ linear_part(ids, self.group_bits)
        return etiqueta

    def descriptor(self):
        return {"kind": "folded" if self.folded else "invariant"}


@dataclass
class ShiftedLabeling(Labeling):
    inner: Labeling
    h0: int

    def __call__(self, ids):
        return self.inner(ids) ^ np.uint64(self.h0)

    def descriptor(self):
        return {"kind": "shifted", "h0": self.h0, "inner": self.inner.descriptor()}


def _indice_compacto(reps: np.ndarray, group_bits: int) -> np.ndarray:
    reps = np.asarray(reps, dtype=np.uint64)
    alto = reps >> np.uint64(group_bits + DESPLAZAMIENTO_LINEAL)
    return ((alto << np.uint64(1)) | (reps & np.uint64(1))).astype(np.int64)


def folded_from_table(group_bits: int, table: np.ndarray, folded: bool = True) -> FoldedLabeling:
    """Etiquetado simétrico dado por una etiqueta por coset de H."""
    valores = np.asarray(table, dtype=np.uint64)
    return FoldedLabeling(group_bits, lambda reps: valores[_indice_compacto(reps, group_bits)], folded)


def evaluate_labeling(inst: UGInstance, labeling: Labeling, samples: Optional[int] = None,
                      seed: int = 0, workers: int = 1, chunk: int = 1 << 14) -> Estimate:
    """Fracción (ponderada) de restricciones satisfechas."""
    if inst.materialized and samples is None:
        tabla = inst.constraints
        lote = inst.batch()
        ok = lote.satisfied(labeling)
        if inst.total is not None and "count" in tabla:
            return Estimate.exacto(Fraction(int(tabla["count"].to_numpy()[ok].sum()), inst.total))
        return Estimate.exacto(float(tabla["weight"].to_numpy()[ok].sum()))
    if samples is None:
        raise PrecondicionError("Una instancia implícita se evalúa por muestreo: indique samples")

    def indicador(rng, size):
        return inst.sample(rng, size).satisfied(labeling)

    return monte_carlo(bernoulli_kernel(indicador), samples, seed, workers, chunk)


def best_folded_labeling(inst: UGInstance, budget: int = 1 << 12):
    """Búsqueda exhaustiva entre etiquetados plegados e invariantes por H."""
    if not inst.materialized:
        raise PrecondicionError("La búsqueda exhaustiva requiere una instancia materializada")
    t = inst.group_bits
    cosets = 1 << (inst.vertex_bits - t)
    R = inst.alphabet_size
    candidatos = 2 * R ** cosets
    if candidatos > budget:
        raise PresupuestoExcedido(f"{candidatos} etiquetados simétricos (> {budget})")
    mejor, mejor_etiquetado = None, None
    for plegado in (True, False):
        for tabla in itertools.product(range(R), repeat=cosets):
            etiquetado = folded_from_table(t, np.array(tabla, dtype=np.uint64), plegado)
            valor = evaluate_labeling(inst, etiquetado)
            if mejor is None or valor.value > mejor.value:
                mejor, mejor_etiquetado = valor, etiquetado
    logger.info(f"Mejor etiquetado simétrico de {candidatos}: {mejor.value:.6f}")
    return mejor, mejor_etiquetado


# --- Solución vectorial ---

@dataclass
class ImplicitSDP:
    """⟨b_{c,h}, b_{c′,h′}⟩ = (1 − 2Δ(c⊕h, c′⊕h′)/N)²"""

    code: RMCode

    @property
    def group_bits(self) -> int:
        return self.code.n

    def distances(self, c1, h1, c2, h2) -> np.ndarray:
        D = self.code
        ids = (np.asarray(c1, dtype=np.uint64) ^ np.asarray(c2, dtype=np.uint64)
               ^ embed_linear(np.asarray(h1, dtype=np.uint64) ^ np.asarray(h2, dtype=np.uint64)))
        return popcount(D.encode(ints_to_bits(ids, D.dim))).astype(np.int64)

    def inner_numerators(self, c1, h1, c2, h2) -> np.ndarray:
        """(N − 2Δ)², con denominador N²."""
        return (self.code.block_len - 2 * self.distances(c1, h1, c2, h2)) ** 2

    def inner(self, c1, h1, c2, h2) -> np.ndarray:
        N = self.code.block_len
        return self.inner_numerators(c1, h1, c2, h2) / float(N * N)


def implicit_sdp(n: int, d: int) -> ImplicitSDP:
    D = build_rm(n, d)
    hadamard_subcode(D)
    return ImplicitSDP(D)


def sdp_feasibility_check(sdp: ImplicitSDP, trials: int = 10000, seed: int = 0) -> Dict:
    rng = np.random.default_rng(seed)
    D = sdp.code
    R = 1 << sdp.group_bits
    N2 = D.block_len ** 2
    mascara = np.uint64((1 << D.dim) - 1)
    c = rng.integers(0, np.iinfo(np.uint64).max, size=trials, dtype=np.uint64, endpoint=True) & mascara
    c2 = rng.integers(0, np.iinfo(np.uint64).max, size=trials, dtype=np.uint64, endpoint=True) & mascara
    h = rng.integers(0, R, size=trials).astype(np.uint64)
    hp = h ^ rng.integers(1, R, size=trials).astype(np.uint64)
    ortogonal = sdp.inner_numerators(c, h, c, hp)
    unitario = sdp.inner_numerators(c, h, c, h)
    cruzado = sdp.inner(c, h, c2, hp)
    vertices = c[: min(trials, 16)]
    etiquetas = np.arange(R, dtype=np.uint64)
    sumas = [int(sdp.inner_numerators(np.full(R, v), etiquetas, np.full(R, v), etiquetas).sum())
             for v in vertices]
    reporte = {
        "probes": trials,
        "orthogonality": bool(np.all(ortogonal == 0)),
        "unit_norm": bool(np.all(unitario == N2)),
        "nonnegative": bool(np.all((cruzado >= 0.0) & (cruzado <= 1.0))),
        "norm_sum": bool(all(s == R * N2 for s in sumas)),
    }
    reporte["feasible"] = all(reporte[k] for k in ("orthogonality", "unit_norm", "nonnegative", "norm_sum"))
    return reporte


@dataclass
class SDPValue:
    value: Estimate
    lower_bound: Optional[float]
    query_complexity: Optional[int]

    def to_dict(self) -> Dict:
        return {"value": self.value.to_dict(), "lower_bound": self.lower_bound,
                "query_complexity": self.query_complexity}


def sdp_value(t: CanonicalTester, samples: Optional[int] = None, seed: int = 0,
              workers: int = 1) -> SDPValue:
    """E_q[(1 − 2·wt(q)/N)²] y la cota (1 − 2t/N)² con t las consultas."""
    N = t.block_len
    cota = None
    if t.query_complexity is not None:
        cota = (1.0 - 2.0 * t.query_complexity / N) ** 2

    if t.support is not None:
        pesos = popcount(t.support.words).astype(np.int64)
        numerador = sum(int(c) * (N - 2 * int(w)) ** 2 for c, w in zip(t.support.counts, pesos))
        valor = Estimate.exacto(Fraction(numerador, t.support.total * N * N))
    elif t.root.support is not None:
        # E[(−1)^{q_x + q_y}] es el autovalor de e_x ⊕ e_y
        raiz = t.root.support
        signos = 1.0 - 2.0 * unpack_bits(raiz.words, N).astype(np.float64)
        pares = (signos.T * raiz.counts.astype(np.float64)) @ signos / raiz.total
        valor = Estimate.exacto(float(np.mean(t.transform(pares))))
    elif samples is not None:
        def muestreo(rng, size):
            return (1.0 - 2.0 * popcount(t.sample(rng, size)) / N) ** 2

        valor = monte_carlo(real_kernel(muestreo), samples, seed, workers)
    else:
        raise PrecondicionError("Sin soporte explícito hay que indicar samples")
    return SDPValue(valor, cota, t.query_complexity)


# --- Solidez ---

@dataclass
class SoundnessBound:
    value: float
    k_star: int
    indicative: bool
    complete: bool
    table: pd.DataFrame

    def to_dict(self) -> Dict:
        return {"value": self.value, "k_star": self.k_star, "indicative": self.indicative,
                "complete": self.complete, "table": self.table.to_dict(orient="records")}


def soundness_bound(curve: List[SoundnessPoint], R: int, distance: int) -> SoundnessBound:
    """min sobre k ∈ [0, distancia/5] de 1 − 2s(k) + 3^k/√R."""
    if R < 1:
        raise PrecondicionError("R debe ser ≥ 1")
    k_tope = distance // 5
    puntos = {p.k: p for p in curve if 0 <= p.k <= k_tope}
    if not puntos:
        raise PrecondicionError(f"La curva no cubre ningún k en [0, {k_tope}]")
    filas = [{"k": k, "s": p.s_lower, "bound": 1.0 - 2.0 * p.s_lower + 3.0 ** k / math.sqrt(R)}
             for k, p in sorted(puntos.items())]
    tabla = pd.DataFrame(filas)
    mejor = int(tabla["bound"].idxmin())
    indicativa = any(p.mode != "exact" for p in puntos.values())
    return SoundnessBound(float(tabla.loc[mejor, "bound"]), int(tabla.loc[mejor, "k"]),
                          indicativa, len(puntos) == k_tope + 1, tabla)


def xor_curve_formula(d: int, r: int, k_max: int) -> List[SoundnessPoint]:
    """s(k) = 1/2 − (1 − k/2^{d+1})^r / 2."""
    distancia = 1 << (d + 1)
    return [SoundnessPoint(k, 0.5 - 0.5 * (1.0 - k / distancia) ** r, None, "formula",
                           None, soundness_floor(k, d))
            for k in range(0, min(k_max, distancia) + 1)]


def corollary_parameters(n: int, delta: float) -> Dict:
    """Parámetros de la brecha con d = log₂ n y r = ⌈100·ln(1/δ)⌉."""
    if not 0.0 < delta < 1.0:
        raise PrecondicionError(f"δ = {delta} fuera de (0, 1)")
    d = int(math.floor(math.log2(n)))
    if not 1 <= d <= n - 2:
        raise PrecondicionError(f"n = {n} demasiado pequeño")
    r = int(math.ceil(100.0 * math.log(1.0 / delta)))
    N = 1 << n
    consultas = r * (1 << (n - d))
    distancia = 1 << (d + 1)
    k = distancia // 5
    s = 0.5 - 0.5 * (1.0 - k / distancia) ** r
    return {
        "n": n, "d": d, "r": r, "delta": delta,
        "queries": consultas,
        "sdp_lower_bound": (1.0 - 2.0 * consultas / N) ** 2,
        "k": k,
        "soundness": 1.0 - 2.0 * s + 3.0 ** k / math.sqrt(N),
        "log2_vertices": dimension(n, d),
        "alphabet_bits": n,
    }
