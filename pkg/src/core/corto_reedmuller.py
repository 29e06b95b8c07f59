"""
📐 codigocorto - Códigos de Reed–Muller
======================================

RM(n, r): evaluaciones de los polinomios de grado ≤ r sobre GF(2)^n.

PROPÓSITO:
- Construir RM(n, r), su dual RM(n, n−r−1) y el subcódigo de Hadamard
- Síndromes, líderes de coset (distancia al código) y tablas estándar
- Palabras de peso mínimo (indicadores de subespacios afines)

CONVENCIONES:
- Las columnas siguen el orden little-endian de corto_gf2.point_bits.
- Los monomios se ordenan por grado y luego lexicográficamente; el índice
  de coeficiente j corresponde a `code.monomials[j]`.
- El síndrome de α respecto de C es el vector de productos ⟨α, g_j⟩ con
  los generadores g_j de dual(C); su bit j corresponde al monomio j del dual.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .corto_errores import NoEncontrado, PrecondicionError, PresupuestoExcedido
from .corto_gf2 import (
    BitWord,
    GF2Matrix,
    bits_to_ints,
    gf2_matmul,
    ints_to_bits,
    moebius,
    num_blocks,
    pack_bits,
    point_bits,
    right_inverse,
    unpack_bits,
)

logger = logging.getLogger(__name__)

MAX_VARIABLES = 24
PRESUPUESTO_ENUMERACION = 1 << 20
TAMANO_LOTE = 1 << 14


def monomials(n: int, r: int) -> Tuple[Tuple[int, ...], ...]:
    """Monomios de grado ≤ r en n variables, por grado y luego lexicográfico."""
    return tuple(
        mono for k in range(0, max(r, -1) + 1) for mono in itertools.combinations(range(n), k)
    )


@dataclass(frozen=True, eq=False)
class RMCode:
    """Código de Reed–Muller (o su subcódigo de Hadamard) con base de monomios."""

    n: int
    r: int
    monomials: Tuple[Tuple[int, ...], ...]
    kind: str = "RM"

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def block_len(self) -> int:
        return 1 << self.n

    @property
    def min_distance(self) -> int:
        if self.kind == "Hadamard":
            return 1 << (self.n - 1)
        return 1 << (self.n - self.r)

    @property
    def label(self) -> str:
        if self.kind == "Hadamard":
            return f"H({self.n})"
        return f"RM({self.n},{self.r})"

    @cached_property
    def masks(self) -> np.ndarray:
        """Máscara entera de cada monomio (bit j ↔ variable j)."""
        return np.array([sum(1 << j for j in mono) for mono in self.monomials], dtype=np.int64)

    @cached_property
    def dense_generators(self) -> np.ndarray:
        puntos = np.arange(self.block_len, dtype=np.int64)
        m = self.masks[:, None]
        densa = ((puntos[None, :] & m) == m).astype(np.uint8)
        densa.setflags(write=False)
        return densa

    @cached_property
    def generators(self) -> GF2Matrix:
        return GF2Matrix.from_dense(self.dense_generators)

    @cached_property
    def dual_code(self) -> "RMCode":
        return dual(self)

    @cached_property
    def column_syndromes(self) -> np.ndarray:
        """Síndrome (empaquetado) de cada vector unitario e_x, forma (N, bloques)."""
        H = self.dual_code.dense_generators
        return pack_bits(H.T).reshape(self.block_len, -1)

    @cached_property
    def column_syndrome_ints(self) -> np.ndarray:
        m = self.dual_code.dim
        if m > 64:
            raise PresupuestoExcedido(f"Síndromes de {m} bits no caben en enteros")
        return bits_to_ints(self.dual_code.dense_generators.T)

    @cached_property
    def syndrome_lift(self) -> np.ndarray:
        """Inversa derecha P (N × m) de la matriz de síndromes: H·P = I."""
        return right_inverse(self.dual_code.dense_generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMCode):
            return NotImplemented
        return (self.kind, self.n, self.monomials) == (other.kind, other.n, other.monomials)

    def __hash__(self) -> int:
        return hash((self.kind, self.n, self.monomials))

    def __repr__(self) -> str:
        return f"{self.label}[dim={self.dim}]"

    # --- Codificación ---

    def encode_bits(self, coefficients: np.ndarray) -> np.ndarray:
        """Coeficientes (..., dim) → evaluaciones (..., N) en bits."""
        coef = np.asarray(coefficients, dtype=np.uint8)
        completo = np.zeros(coef.shape[:-1] + (self.block_len,), dtype=np.uint8)
        completo[..., self.masks] = coef
        return moebius(completo)

    def encode(self, coefficients: np.ndarray) -> np.ndarray:
        """Coeficientes (..., dim) → palabras empaquetadas (..., bloques)."""
        return pack_bits(self.encode_bits(coefficients))

    def coefficients_from_bits(self, bits: np.ndarray) -> np.ndarray:
        """Evaluaciones → coeficientes de los monomios del código.

        Asume que la palabra pertenece al código; los monomios de grado
        mayor se descartan sin comprobar.
        """
        return moebius(bits)[..., self.masks]

    def coefficients(self, words: np.ndarray) -> np.ndarray:
        return self.coefficients_from_bits(unpack_bits(words, self.block_len))

    def coefficient_ids(self, words: np.ndarray) -> np.ndarray:
        """Índice entero (dim ≤ 64 bits) del vector de coeficientes de cada palabra."""
        return bits_to_ints(self.coefficients(words))

    def contains(self, word: BitWord) -> bool:
        return not syndrome(self, word)

    def descriptor(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "n": self.n,
            "r": self.r,
            "dim": self.dim,
            "block_len": self.block_len,
        }

    def generators_hex(self) -> List[str]:
        return self.generators.hex_rows()


@dataclass(frozen=True)
class CosetRep:
    """Representante de peso mínimo del coset α + C"""

    alpha: BitWord
    leader: BitWord
    degree: int

    @property
    def support(self) -> List[int]:
        return self.leader.support()


@lru_cache(maxsize=64)
def _rm_code(n: int, r: int) -> RMCode:
    return RMCode(n=n, r=r, monomials=monomials(n, r))


def build_rm(n: int, r: int) -> RMCode:
    """RM(n, r) con 0 ≤ r ≤ n."""
    if n < 0 or n > MAX_VARIABLES:
        raise PrecondicionError(f"n = {n} fuera de rango [0, {MAX_VARIABLES}]")
    if r < 0 or r > n:
        raise PrecondicionError(f"El grado r = {r} debe cumplir 0 ≤ r ≤ n = {n}")
    return _rm_code(n, r)


def dual(code: RMCode) -> RMCode:
    """RM(n, r)⊥ = RM(n, n−r−1); para r = n es el código cero."""
    if code.kind != "RM":
        raise PrecondicionError(f"Solo se calcula el dual de códigos RM, no de {code.label}")
    return _rm_code(code.n, code.n - code.r - 1)


def hadamard_subcode(code: RMCode) -> RMCode:
    """Formas lineales homogéneas ⟨a, ·⟩ dentro de RM(n, d), d ≥ 1."""
    if code.kind != "RM" or code.r < 1:
        raise PrecondicionError("El subcódigo de Hadamard requiere RM(n, d) con d ≥ 1")
    return _hadamard(code.n)


@lru_cache(maxsize=32)
def _hadamard(n: int) -> RMCode:
    return RMCode(n=n, r=1, monomials=tuple((j,) for j in range(n)), kind="Hadamard")


def syndrome_bits(code: RMCode, bits: np.ndarray) -> np.ndarray:
    """Síndromes por lotes: bits (..., N) → (..., m)."""
    bits = np.asarray(bits, dtype=np.uint8)
    H = code.dual_code.dense_generators
    forma = bits.shape[:-1]
    planos = bits.reshape(-1, code.block_len)
    salida = np.empty((planos.shape[0], H.shape[0]), dtype=np.uint8)
    for inicio in range(0, planos.shape[0], TAMANO_LOTE):
        salida[inicio:inicio + TAMANO_LOTE] = gf2_matmul(planos[inicio:inicio + TAMANO_LOTE], H.T)
    return salida.reshape(forma + (H.shape[0],))


def syndrome_ints(code: RMCode, words: np.ndarray) -> np.ndarray:
    """Síndrome como entero (m ≤ 64) de cada palabra empaquetada."""
    return bits_to_ints(syndrome_bits(code, unpack_bits(words, code.block_len)))


def syndrome(code: RMCode, alpha: BitWord) -> BitWord:
    if alpha.length != code.block_len:
        raise PrecondicionError(
            f"La palabra tiene {alpha.length} bits y el código {code.block_len}"
        )
    return BitWord.from_bits(syndrome_bits(code, alpha.bits()))


def word_with_syndrome(code: RMCode, sigma_bits: np.ndarray) -> np.ndarray:
    """Alguna palabra (bits) cuyo síndrome es sigma, vía la inversa derecha."""
    return gf2_matmul(np.asarray(sigma_bits, dtype=np.uint8), code.syndrome_lift.T)


def _combinaciones(N: int, w: int, lote: int) -> Iterator[np.ndarray]:
    it = itertools.combinations(range(N), w)
    while True:
        bloque = list(itertools.islice(it, lote))
        if not bloque:
            return
        yield np.array(bloque, dtype=np.int64).reshape(len(bloque), w)


def coset_leader(code: RMCode, alpha: BitWord, w_max: Optional[int] = None,
                 chunk: int = 1 << 16) -> CosetRep:
    """Líder de α + C por búsqueda exhaustiva de peso creciente.

    Entre soportes del mismo peso gana el lexicográficamente menor.
    Por defecto w_max = distancia/2.
    """
    if w_max is None:
        w_max = code.min_distance // 2
    if w_max < 0:
        raise PrecondicionError(f"w_max = {w_max} debe ser ≥ 0")
    objetivo = syndrome(code, alpha).blocks
    peso = alpha.weight()
    N = code.block_len
    if not objetivo.any():
        return CosetRep(alpha, BitWord.zeros(N), 0)
    if 2 * peso < code.min_distance:
        return CosetRep(alpha, alpha, peso)

    columnas = code.column_syndromes
    for w in range(1, min(w_max, peso) + 1):
        for soportes in _combinaciones(N, w, chunk):
            sindromes = np.bitwise_xor.reduce(columnas[soportes], axis=1)
            aciertos = np.flatnonzero(np.all(sindromes == objetivo, axis=-1))
            if aciertos.size:
                lider = BitWord.from_support(soportes[aciertos[0]], N)
                return CosetRep(alpha, lider, w)
    raise NoEncontrado(
        f"Sin representante de peso ≤ {w_max} para el coset en {code.label}"
    )


def iter_weight_levels(code: RMCode, max_weight: int,
                       budget: int = PRESUPUESTO_ENUMERACION
                       ) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
    """Recorre todas las palabras de peso 1..max_weight, nivel por nivel.

    Entrega (w, soportes (M, w), síndromes enteros (M,)); dentro de cada nivel
    los soportes salen en orden lexicográfico.
    """
    N = code.block_len
    columnas = code.column_syndrome_ints
    soportes = np.arange(N, dtype=np.int64)[:, None]
    sindromes = columnas.copy()
    w = 1
    while w <= max_weight and soportes.shape[0]:
        yield w, soportes, sindromes
        if w == max_weight:
            return
        tamano = int(soportes[:, 0].sum())
        if tamano > budget:
            raise PresupuestoExcedido(
                f"El nivel de peso {w + 1} tiene {tamano} palabras (presupuesto {budget})"
            )
        nuevos_soportes = []
        nuevos_sindromes = []
        for j in range(N - 1):
            sel = soportes[:, 0] > j
            if not sel.any():
                continue
            cola = soportes[sel]
            nuevos_soportes.append(
                np.concatenate([np.full((cola.shape[0], 1), j, dtype=np.int64), cola], axis=1)
            )
            nuevos_sindromes.append(sindromes[sel] ^ columnas[j])
        if not nuevos_soportes:
            return
        soportes = np.concatenate(nuevos_soportes)
        sindromes = np.concatenate(nuevos_sindromes)
        w += 1


def supports_to_words(supports: np.ndarray, N: int) -> np.ndarray:
    """Soportes (M, w) → palabras empaquetadas (M, bloques)."""
    M = supports.shape[0]
    bits = np.zeros((M, N), dtype=np.uint8)
    if supports.size:
        bits[np.arange(M)[:, None], supports] = 1
    return pack_bits(bits)


@dataclass
class CosetTable:
    """Arreglo estándar: grado y líder de cada coset indexado por síndrome"""

    code: RMCode
    degrees: np.ndarray
    leaders: np.ndarray
    max_weight: int
    complete: bool

    @property
    def classified(self) -> np.ndarray:
        return self.degrees >= 0

    def leader(self, sigma: int) -> Optional[BitWord]:
        if self.degrees[sigma] < 0:
            return None
        return BitWord(self.leaders[sigma], self.code.block_len)


def coset_table(code: RMCode, max_weight: Optional[int] = None,
                budget: int = PRESUPUESTO_ENUMERACION, max_syndrome_bits: int = 24) -> CosetTable:
    """Clasifica los cosets alcanzados por palabras de peso ≤ max_weight.

    Si el presupuesto corta el barrido, la tabla queda incompleta y
    `max_weight` indica el último peso recorrido por completo.
    """
    m = code.dual_code.dim
    if m > max_syndrome_bits:
        raise PresupuestoExcedido(f"Tabla de 2^{m} síndromes fuera de presupuesto")
    N = code.block_len
    total = 1 << m
    grados = np.full(total, -1, dtype=np.int16)
    lideres = np.zeros((total, num_blocks(N)), dtype=np.uint64)
    grados[0] = 0
    tope = N if max_weight is None else max_weight
    barrido = 0
    pendientes = total - 1
    try:
        for w, soportes, sindromes in iter_weight_levels(code, tope, budget):
            valores, primeros = np.unique(sindromes.astype(np.int64), return_index=True)
            nuevos = grados[valores] < 0
            if nuevos.any():
                grados[valores[nuevos]] = w
                lideres[valores[nuevos]] = supports_to_words(soportes[primeros[nuevos]], N)
                pendientes -= int(nuevos.sum())
            barrido = w
            logger.debug(f"{code.label}: peso {w}, {pendientes} cosets sin clasificar")
            if pendientes == 0:
                break
    except PresupuestoExcedido as e:
        logger.warning(f"Barrido del arreglo estándar truncado: {e}")
    completa = pendientes == 0
    logger.info(
        f"Tabla de cosets de {code.label}: peso máximo {barrido}, completa={completa}"
    )
    return CosetTable(code=code, degrees=grados, leaders=lideres,
                      max_weight=barrido, complete=completa)


def gaussian_binomial(n: int, k: int) -> int:
    """Número de subespacios de dimensión k en GF(2)^n."""
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def _bases_escalonadas(n: int, d: int) -> np.ndarray:
    """Bases escalonadas reducidas (S, d, n) de todos los subespacios de dimensión d."""
    bases = []
    for pivotes in itertools.combinations(range(n), d):
        libres = [(i, c) for i, p in enumerate(pivotes)
                  for c in range(p + 1, n) if c not in pivotes]
        plantilla = np.zeros((d, n), dtype=np.uint8)
        plantilla[np.arange(d), list(pivotes)] = 1
        asignaciones = ints_to_bits(np.arange(1 << len(libres), dtype=np.uint64), len(libres))
        lote = np.repeat(plantilla[None], asignaciones.shape[0], axis=0)
        if libres:
            filas, cols = zip(*libres)
            lote[:, list(filas), list(cols)] = asignaciones
        bases.append(lote)
    return np.concatenate(bases)


@lru_cache(maxsize=16)
def _min_weight_matrix(n: int, d: int) -> np.ndarray:
    bases = _bases_escalonadas(n, d)
    valores = np.einsum("xn,sdn->sxd", point_bits(n).astype(np.int64),
                        bases.astype(np.int64)) & 1
    palabras = []
    for c in range(1 << d):
        objetivo = 1 - ints_to_bits(np.uint64(c), d).astype(np.int64)
        palabras.append(pack_bits(np.all(valores == objetivo, axis=-1)))
    unicas = np.unique(np.concatenate(palabras).reshape(-1, num_blocks(1 << n)), axis=0)
    unicas.setflags(write=False)
    return unicas


def min_weight_count(n: int, d: int) -> int:
    return (1 << d) * gaussian_binomial(n, d)


def min_weight_matrix(code: RMCode, budget: int = PRESUPUESTO_ENUMERACION) -> np.ndarray:
    """Palabras de peso mínimo de RM(n, d) empaquetadas (M, bloques), ordenadas."""
    if code.kind != "RM" or not 1 <= code.r < code.n:
        raise PrecondicionError(
            f"Palabras de peso mínimo solo para RM(n, d) con 1 ≤ d < n; se pidió {code.label}"
        )
    total = min_weight_count(code.n, code.r)
    if total > budget:
        logger.warning(f"{code.label} tiene {total} palabras de peso mínimo")
        raise PresupuestoExcedido(f"{total} palabras de peso mínimo superan el presupuesto {budget}")
    logger.info(f"Enumerando {total} palabras de peso mínimo de {code.label}")
    return _min_weight_matrix(code.n, code.r)


def min_weight_words(code: RMCode, budget: int = PRESUPUESTO_ENUMERACION) -> List[BitWord]:
    """Productos de d formas afines con partes lineales independientes."""
    matriz = min_weight_matrix(code, budget)
    return [BitWord(fila, code.block_len) for fila in matriz]


def codewords(code: RMCode, budget: int = PRESUPUESTO_ENUMERACION) -> np.ndarray:
    """Todas las palabras del código, empaquetadas, en orden de índice de coeficientes."""
    if (1 << code.dim) > budget:
        raise PresupuestoExcedido(f"{code.label} tiene 2^{code.dim} palabras")
    coef = ints_to_bits(np.arange(1 << code.dim, dtype=np.uint64), code.dim)
    return code.encode(coef)


def dimension(n: int, r: int) -> int:
    return sum(comb(n, j) for j in range(r + 1))
