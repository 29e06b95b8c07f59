"""
🧮 codigocorto - Álgebra lineal empaquetada sobre GF(2)
======================================================

Capa base de todo el proyecto. Vectores de bits (BitWord), matrices
(GF2Matrix) y formas afines sobre GF(2)^n, guardados en bloques de 64 bits.

Convenciones que usan todos los módulos:
- El bit j de una palabra vive en el bloque j // 64, posición j % 64
  (empaquetado little-endian, igual que np.packbits(bitorder='little')).
- Los puntos de GF(2)^n se enumeran 0..2^n-1 y la coordenada j del punto x
  es el bit j de x (orden little-endian).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .corto_errores import PrecondicionError

logger = logging.getLogger(__name__)

BITS_POR_BLOQUE = 64


def num_blocks(length: int) -> int:
    """Número de bloques uint64 necesarios para `length` bits (mínimo 1)"""
    return max(1, (int(length) + BITS_POR_BLOQUE - 1) // BITS_POR_BLOQUE)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Empaqueta el último eje de un arreglo de bits en bloques uint64."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    length = bits.shape[-1]
    relleno = num_blocks(length) * BITS_POR_BLOQUE - length
    if relleno:
        ceros = np.zeros(bits.shape[:-1] + (relleno,), dtype=np.uint8)
        bits = np.concatenate([bits, ceros], axis=-1)
    empaquetado = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(empaquetado).view(np.uint64)


def unpack_bits(blocks: np.ndarray, length: int) -> np.ndarray:
    """Inverso de pack_bits: devuelve uint8 con `length` bits en el último eje."""
    blocks = np.ascontiguousarray(blocks, dtype=np.uint64)
    crudo = np.unpackbits(blocks.view(np.uint8), axis=-1, bitorder="little")
    return crudo[..., :length]


def tail_mask(length: int) -> np.ndarray:
    """Máscara por bloque con unos solo en las posiciones < length."""
    mascara = np.full(num_blocks(length), np.iinfo(np.uint64).max, dtype=np.uint64)
    resto = length % BITS_POR_BLOQUE
    if length == 0:
        mascara[:] = 0
    elif resto:
        mascara[-1] = np.uint64((1 << resto) - 1)
    return mascara


def popcount(blocks: np.ndarray) -> np.ndarray:
    """Peso de Hamming sobre el último eje de un arreglo de bloques."""
    blocks = np.ascontiguousarray(blocks, dtype=np.uint64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(blocks).sum(axis=-1, dtype=np.int64)
    return np.unpackbits(blocks.view(np.uint8), axis=-1).sum(axis=-1, dtype=np.int64)


def parity(blocks: np.ndarray) -> np.ndarray:
    """Paridad (0/1) de cada fila empaquetada."""
    return (popcount(blocks) & 1).astype(np.uint8)


def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Producto de matrices densas 0/1 módulo 2.

    Se hace en float64 (BLAS); las sumas parciales son enteros exactos
    mientras la dimensión interna sea < 2^53.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.remainder(a @ b, 2.0).astype(np.uint8)


def bits_to_ints(bits: np.ndarray) -> np.ndarray:
    """Interpreta el último eje (≤ 64 bits, little-endian) como enteros uint64."""
    bits = np.asarray(bits, dtype=np.uint8)
    width = bits.shape[-1]
    if width > BITS_POR_BLOQUE:
        raise PrecondicionError(f"No caben {width} bits en un entero de 64 bits")
    if width == 0:
        return np.zeros(bits.shape[:-1], dtype=np.uint64)
    return pack_bits(bits)[..., 0]


def ints_to_bits(values: np.ndarray, width: int) -> np.ndarray:
    """Inverso de bits_to_ints."""
    values = np.asarray(values, dtype=np.uint64)
    return unpack_bits(values[..., None], width)


@lru_cache(maxsize=32)
def point_bits(n: int) -> np.ndarray:
    """Matriz (2^n, n) con las coordenadas de cada punto de GF(2)^n."""
    puntos = np.arange(1 << n, dtype=np.int64)
    coordenadas = ((puntos[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    coordenadas.setflags(write=False)
    return coordenadas


@dataclass(frozen=True, eq=False)
class BitWord:
    """Vector sobre GF(2) empaquetado en bloques de 64 bits.

    Los bits más allá de `length` siempre se guardan en cero, de modo que
    la igualdad y el hash se pueden calcular directamente sobre los bloques.
    """

    blocks: np.ndarray
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise PrecondicionError(f"Longitud negativa: {self.length}")
        datos = np.array(self.blocks, dtype=np.uint64).reshape(-1)
        if datos.size != num_blocks(self.length):
            raise PrecondicionError(
                f"Se esperaban {num_blocks(self.length)} bloques y llegaron {datos.size}"
            )
        datos &= tail_mask(self.length)
        datos.setflags(write=False)
        object.__setattr__(self, "blocks", datos)

    # --- Constructores ---

    @classmethod
    def zeros(cls, length: int) -> "BitWord":
        return cls(np.zeros(num_blocks(length), dtype=np.uint64), length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitWord":
        arreglo = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        return cls(pack_bits(arreglo.reshape(-1)), int(arreglo.size))

    @classmethod
    def from_string(cls, text: str) -> "BitWord":
        """'10110' → bit 0 = 1, bit 1 = 0, ... (se lee de izquierda a derecha)"""
        limpio = text.strip()
        if any(ch not in "01" for ch in limpio):
            raise PrecondicionError(f"Cadena binaria inválida: {text!r}")
        return cls.from_bits([int(ch) for ch in limpio])

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitWord":
        if value < 0 or value >> length:
            raise PrecondicionError(f"El entero {value} no cabe en {length} bits")
        crudo = int(value).to_bytes(num_blocks(length) * 8, "little")
        return cls(np.frombuffer(crudo, dtype=np.uint64).copy(), length)

    @classmethod
    def from_support(cls, support: Iterable[int], length: int) -> "BitWord":
        bits = np.zeros(length, dtype=np.uint8)
        indices = np.asarray(list(support), dtype=np.int64)
        if indices.size and (indices.min() < 0 or indices.max() >= length):
            raise PrecondicionError("Soporte fuera de rango")
        bits[indices] ^= 1
        return cls.from_bits(bits)

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitWord":
        return cls.from_int(int(text, 16) if text else 0, length)

    # --- Vistas ---

    def bits(self) -> np.ndarray:
        return unpack_bits(self.blocks, self.length)

    def to_int(self) -> int:
        return int.from_bytes(self.blocks.tobytes(), "little")

    def hex(self) -> str:
        digitos = max(1, (self.length + 3) // 4)
        return format(self.to_int(), f"0{digitos}x")

    def support(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.bits())]

    def weight(self) -> int:
        return int(popcount(self.blocks))

    def dot(self, other: "BitWord") -> int:
        self._misma_longitud(other)
        return int(parity(self.blocks & other.blocks))

    # --- Aritmética ---

    def _misma_longitud(self, other: "BitWord") -> None:
        if self.length != other.length:
            raise PrecondicionError(
                f"Longitudes distintas: {self.length} vs {other.length}"
            )

    def __xor__(self, other: "BitWord") -> "BitWord":
        self._misma_longitud(other)
        return BitWord(self.blocks ^ other.blocks, self.length)

    def __and__(self, other: "BitWord") -> "BitWord":
        self._misma_longitud(other)
        return BitWord(self.blocks & other.blocks, self.length)

    def __or__(self, other: "BitWord") -> "BitWord":
        self._misma_longitud(other)
        return BitWord(self.blocks | other.blocks, self.length)

    def __len__(self) -> int:
        return self.length

    def __bool__(self) -> bool:
        return bool(self.blocks.any())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitWord):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.blocks, other.blocks)

    def __hash__(self) -> int:
        return hash((self.length, self.blocks.tobytes()))

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitWord({''.join(map(str, self.bits()))})"
        return f"BitWord(len={self.length}, hex={self.hex()})"


@dataclass(frozen=True, eq=False)
class GF2Matrix:
    """Matriz sobre GF(2) guardada por filas empaquetadas (nrows, bloques)."""

    data: np.ndarray
    ncols: int

    def __post_init__(self):
        datos = np.array(self.data, dtype=np.uint64)
        if datos.ndim != 2 or datos.shape[1] != num_blocks(self.ncols):
            raise PrecondicionError(
                f"Forma de datos {datos.shape} incompatible con {self.ncols} columnas"
            )
        datos &= tail_mask(self.ncols)
        datos.setflags(write=False)
        object.__setattr__(self, "data", datos)

    @property
    def nrows(self) -> int:
        return int(self.data.shape[0])

    @classmethod
    def from_rows(cls, rows: Sequence[BitWord], ncols: Optional[int] = None) -> "GF2Matrix":
        if ncols is None:
            if not rows:
                raise PrecondicionError("Sin filas hay que indicar ncols")
            ncols = rows[0].length
        for fila in rows:
            if fila.length != ncols:
                raise PrecondicionError("Todas las filas deben tener ncols bits")
        if not rows:
            return cls(np.zeros((0, num_blocks(ncols)), dtype=np.uint64), ncols)
        return cls(np.stack([fila.blocks for fila in rows]), ncols)

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "GF2Matrix":
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim != 2:
            raise PrecondicionError("Se esperaba una matriz 2-D")
        return cls(pack_bits(dense).reshape(dense.shape[0], -1), dense.shape[1])

    def to_dense(self) -> np.ndarray:
        return unpack_bits(self.data, self.ncols)

    def row(self, i: int) -> BitWord:
        return BitWord(self.data[i], self.ncols)

    def rows(self) -> List[BitWord]:
        return [self.row(i) for i in range(self.nrows)]

    def multiply(self, v: BitWord) -> BitWord:
        """M·v: producto interno de cada fila con v."""
        if v.length != self.ncols:
            raise PrecondicionError("Longitud del vector distinta de ncols")
        if self.nrows == 0:
            return BitWord.zeros(0)
        return BitWord.from_bits(parity(self.data & v.blocks[None, :]))

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix.from_dense(self.to_dense().T)

    def hex_rows(self) -> List[str]:
        return [self.row(i).hex() for i in range(self.nrows)]


@dataclass(frozen=True)
class AffineForm:
    """x ↦ ⟨linear, x⟩ + constant sobre GF(2)^n"""

    linear: BitWord
    constant: int = 0

    def __post_init__(self):
        if self.constant not in (0, 1):
            raise PrecondicionError(f"La constante debe ser 0 o 1, no {self.constant}")


def rank(m: GF2Matrix) -> int:
    """Rango por filas sobre GF(2); no modifica m."""
    base: List[int] = []
    for fila in m.rows():
        x = fila.to_int()
        for b in base:
            x = min(x, x ^ b)
        if x:
            base.append(x)
            base.sort(reverse=True)
    return len(base)


def weight(v: BitWord) -> int:
    return v.weight()


def evaluate_affine(f: AffineForm, n: int) -> BitWord:
    """Vector de evaluación de f en los 2^n puntos (orden little-endian)."""
    if f.linear.length != n:
        raise PrecondicionError(
            f"La parte lineal tiene {f.linear.length} bits y n = {n}"
        )
    valores = gf2_matmul(point_bits(n), f.linear.bits()[:, None])[:, 0]
    return BitWord.from_bits(valores ^ np.uint8(f.constant))


def row_echelon(dense: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Forma escalonada reducida de una matriz 0/1 y sus columnas pivote."""
    R = np.array(dense, dtype=np.uint8) & 1
    filas, columnas = R.shape
    pivotes: List[int] = []
    fila = 0
    for col in range(columnas):
        if fila >= filas:
            break
        candidatas = np.flatnonzero(R[fila:, col]) + fila
        if candidatas.size == 0:
            continue
        p = int(candidatas[0])
        if p != fila:
            R[[fila, p]] = R[[p, fila]]
        otras = np.flatnonzero(R[:, col])
        otras = otras[otras != fila]
        R[otras] ^= R[fila]
        pivotes.append(col)
        fila += 1
    return R, pivotes


def inverse_dense(a: np.ndarray) -> np.ndarray:
    """Inversa de una matriz cuadrada 0/1 sobre GF(2)."""
    a = np.asarray(a, dtype=np.uint8)
    k = a.shape[0]
    if a.shape != (k, k):
        raise PrecondicionError("La matriz debe ser cuadrada")
    aumentada = np.concatenate([a, np.eye(k, dtype=np.uint8)], axis=1)
    R, pivotes = row_echelon(aumentada)
    if pivotes[:k] != list(range(k)):
        raise PrecondicionError("Matriz singular sobre GF(2)")
    return R[:, k:].copy()


def right_inverse(dense: np.ndarray) -> np.ndarray:
    """P con G·P = I para G (k×N) de rango k completo."""
    G = np.asarray(dense, dtype=np.uint8)
    k, N = G.shape
    if k == 0:
        return np.zeros((N, 0), dtype=np.uint8)
    _, pivotes = row_echelon(G)
    if len(pivotes) != k:
        raise PrecondicionError("La matriz no tiene rango por filas completo")
    P = np.zeros((N, k), dtype=np.uint8)
    P[pivotes, :] = inverse_dense(G[:, pivotes])
    return P


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Transformada rápida de Walsh–Hadamard (sin normalizar) sobre el último eje.

    H[σ] = Σ_β v[β]·(-1)^{σ·β}. Devuelve una copia en float64.
    """
    a = np.array(values, dtype=np.float64, copy=True)
    tam = a.shape[-1]
    if tam & (tam - 1):
        raise PrecondicionError(f"La longitud {tam} no es potencia de 2")
    inicio = a.shape[:-1]
    h = 1
    while h < tam:
        a = a.reshape(inicio + (tam // (2 * h), 2, h))
        x = a[..., 0, :].copy()
        y = a[..., 1, :]
        a[..., 0, :] = x + y
        a[..., 1, :] = x - y
        h *= 2
    return a.reshape(inicio + (tam,))


def moebius(bits: np.ndarray) -> np.ndarray:
    """Transformada de Möbius sobre el último eje (longitud 2^n).

    Lleva evaluaciones a coeficientes de la forma normal algebraica y
    viceversa (es una involución).
    """
    a = np.array(bits, dtype=np.uint8, copy=True) & 1
    tam = a.shape[-1]
    if tam & (tam - 1):
        raise PrecondicionError(f"La longitud {tam} no es potencia de 2")
    inicio = a.shape[:-1]
    h = 1
    while h < tam:
        a = a.reshape(inicio + (tam // (2 * h), 2, h))
        a[..., 1, :] ^= a[..., 0, :]
        h *= 2
    return a.reshape(inicio + (tam,))
