"""
🔤 codigocorto - Reducción de alfabeto sobre D^t
===============================================

PROPÓSITO:
- Palabras de D^t vistas como N símbolos de Q = GF(2)^t
- Distribuciones T_t y T_{t,ε} (paseo con tasa ε·2^d)
- Peso e influencias Q-arias, test DICT plegado de dos consultas
- Instancia compuesta Ψ(Γ) con traslaciones T_α

Convención: un lote de palabras de D^t es un arreglo (M, t) de vectores de
coeficientes de D (enteros de dim ≤ 64 bits). El símbolo en la posición x
tiene como bit i la evaluación del bloque i en x. El plegado usa el
subgrupo de desplazamientos constantes: r ∈ Q suma la palabra constante 1 a
los bloques i con r_i = 1, que en coeficientes es el bit 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.corto_paralelo import Estimate, bernoulli_kernel, monte_carlo

from .corto_errores import NoEncontrado, PrecondicionError, PresupuestoExcedido
from .corto_gf2 import (
    BitWord,
    GF2Matrix,
    bits_to_ints,
    gf2_matmul,
    ints_to_bits,
    moebius,
    popcount,
    rank,
    walsh_hadamard,
)
from .corto_juegos_unicos import UGInstance, hash_ids, read_max2lin
from .corto_reedmuller import (
    PRESUPUESTO_ENUMERACION,
    RMCode,
    build_rm,
    dual,
    iter_weight_levels,
    syndrome_ints,
    word_with_syndrome,
)
from .corto_tester import CanonicalTester, rm_tester

logger = logging.getLogger(__name__)

DIMENSION_DENSA_MAXIMA = 20


def _mascara_vertices(D: RMCode) -> np.uint64:
    if D.dim > 64:
        raise PresupuestoExcedido(f"{D.label} tiene dim = {D.dim} > 64")
    return np.uint64((1 << D.dim) - 1) if D.dim < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)


def uniform_ids(D: RMCode, rng: np.random.Generator, shape) -> np.ndarray:
    """Vectores de coeficientes uniformes de D."""
    crudos = rng.integers(0, np.iinfo(np.uint64).max, size=shape, dtype=np.uint64, endpoint=True)
    return crudos & _mascara_vertices(D)


@lru_cache(maxsize=32)
def _mascaras_de_punto(n: int, d: int) -> np.ndarray:
    """Para cada x, los monomios de D que valen 1 en x (como máscara entera)."""
    D = build_rm(n, d)
    _mascara_vertices(D)
    puntos = np.arange(D.block_len, dtype=np.int64)[:, None]
    incluidos = (puntos & D.masks[None, :]) == D.masks[None, :]
    mascaras = bits_to_ints(incluidos.astype(np.uint8))
    mascaras.setflags(write=False)
    return mascaras


def symbols(D: RMCode, ids: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Símbolo de Q en la posición positions[m] de la palabra ids[m] ∈ D^t."""
    ids = np.asarray(ids, dtype=np.uint64)
    mascaras = _mascaras_de_punto(D.n, D.r)[np.asarray(positions, dtype=np.int64)]
    t = ids.shape[-1]
    bits = popcount((ids & mascaras[..., None])[..., None]) & 1
    pesos = np.uint64(1) << np.arange(t, dtype=np.uint64)
    return (bits.astype(np.uint64) * pesos).sum(axis=-1, dtype=np.uint64)


def add_constant(ids: np.ndarray, r: np.ndarray) -> np.ndarray:
    """c + r con r ∈ Q actuando como la palabra constante en cada bloque."""
    ids = np.asarray(ids, dtype=np.uint64)
    t = ids.shape[-1]
    r = np.asarray(r, dtype=np.uint64)
    return ids ^ ((r[..., None] >> np.arange(t, dtype=np.uint64)) & np.uint64(1))


def fold_of(ids: np.ndarray) -> np.ndarray:
    """Parte constante r(c) ∈ Q: el coeficiente del monomio vacío de cada bloque."""
    ids = np.asarray(ids, dtype=np.uint64)
    t = ids.shape[-1]
    return ((ids & np.uint64(1)) << np.arange(t, dtype=np.uint64)).sum(axis=-1, dtype=np.uint64)


@dataclass
class QWord:
    """Elemento de D^t (o palabra arbitraria de (GF(2)^N)^t) como t bloques."""

    blocks: Tuple[BitWord, ...]

    def __post_init__(self):
        self.blocks = tuple(self.blocks)
        if not self.blocks:
            raise PrecondicionError("Una QWord necesita al menos un bloque")
        if len({b.length for b in self.blocks}) != 1:
            raise PrecondicionError("Todos los bloques deben tener la misma longitud")

    @property
    def t(self) -> int:
        return len(self.blocks)

    @property
    def block_len(self) -> int:
        return self.blocks[0].length

    @classmethod
    def zeros(cls, t: int, N: int) -> "QWord":
        return cls(tuple(BitWord.zeros(N) for _ in range(t)))

    @classmethod
    def from_ids(cls, D: RMCode, ids: Sequence[int]) -> "QWord":
        coef = ints_to_bits(np.asarray(ids, dtype=np.uint64), D.dim)
        return cls(tuple(BitWord(fila, D.block_len) for fila in D.encode(coef)))

    @classmethod
    def from_symbols(cls, symbols_: Dict[int, int], t: int, N: int) -> "QWord":
        """Palabra con símbolo s en la posición x para cada (x, s)."""
        bloques = []
        for i in range(t):
            bloques.append(BitWord.from_support([x for x, s in symbols_.items() if (s >> i) & 1], N))
        return cls(tuple(bloques))

    def ids(self, D: RMCode) -> np.ndarray:
        return np.array([D.coefficient_ids(b.blocks[None, :])[0] for b in self.blocks],
                        dtype=np.uint64)

    def symbol(self, x: int) -> int:
        return sum(int(b.bits()[x]) << i for i, b in enumerate(self.blocks))

    def q_support(self) -> List[int]:
        union = self.blocks[0]
        for b in self.blocks[1:]:
            union = union | b
        return union.support()

    def q_weight_raw(self) -> int:
        return len(self.q_support())

    def __xor__(self, other: "QWord") -> "QWord":
        if self.t != other.t:
            raise PrecondicionError("Las QWord tienen distinto número de bloques")
        return QWord(tuple(a ^ b for a, b in zip(self.blocks, other.blocks)))

    def __eq__(self, other) -> bool:
        return isinstance(other, QWord) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)


# --- Distribuciones T_t y T_{t,ε} ---

def _tt_ids(tester: CanonicalTester, t: int, rng: np.random.Generator, size: int) -> np.ndarray:
    D = tester.dual
    c = D.coefficient_ids(tester.sample(rng, size))
    w = rng.integers(0, 2, size=(size, t)).astype(bool)
    return np.where(w, c[:, None], np.uint64(0)).astype(np.uint64)


def _tt_eps_ids(tester: CanonicalTester, t: int, eps: float, rng: np.random.Generator,
                size: int) -> np.ndarray:
    tasa = eps * (1 << tester.dual.r)
    pasos = rng.poisson(tasa, size=size)
    salida = np.zeros((size, t), dtype=np.uint64)
    total = int(pasos.sum())
    if total:
        propietarios = np.repeat(np.arange(size), pasos)
        np.bitwise_xor.at(salida, propietarios, _tt_ids(tester, t, rng, total))
    return salida


def sample_Tt(tester: CanonicalTester, t: int, seed: int = 0, size: Optional[int] = None,
              rng: Optional[np.random.Generator] = None):
    """z^(i) = c si w_i = 1 y 0 si no, con c ~ T y w uniforme en GF(2)^t."""
    if t < 1:
        raise PrecondicionError(f"t = {t} debe ser ≥ 1")
    generador = rng if rng is not None else np.random.default_rng(seed)
    ids = _tt_ids(tester, t, generador, 1 if size is None else size)
    return QWord.from_ids(tester.dual, ids[0]) if size is None else ids


def sample_Tt_eps(tester: CanonicalTester, t: int, eps: float, seed: int = 0,
                  size: Optional[int] = None, rng: Optional[np.random.Generator] = None):
    """Suma de Poisson(ε·2^d) muestras independientes de T_t."""
    if t < 1:
        raise PrecondicionError(f"t = {t} debe ser ≥ 1")
    if eps < 0:
        raise PrecondicionError(f"ε = {eps} debe ser ≥ 0")
    generador = rng if rng is not None else np.random.default_rng(seed)
    ids = _tt_eps_ids(tester, t, eps, generador, 1 if size is None else size)
    return QWord.from_ids(tester.dual, ids[0]) if size is None else ids


def tt_eigenvalue(tester: CanonicalTester, beta: QWord, eps: Optional[float] = None) -> float:
    """Autovalor exacto de χ_β bajo T_t (o T_{t,ε}) a partir del soporte del tester.

    ⟨β, z⟩ = ⟨v(q), w⟩ con v(q)_i = ⟨β^(i), q⟩, así que s(β) = Pr[v(q) ≠ 0]/2.
    """
    soporte = tester.support
    if soporte is None:
        raise PrecondicionError("El autovalor exacto requiere soporte explícito")
    no_nulo = np.zeros(soporte.size, dtype=bool)
    for bloque in beta.blocks:
        no_nulo |= popcount(soporte.words & bloque.blocks[None, :]) % 2 == 1
    p = Fraction(int(soporte.counts[no_nulo].sum()), soporte.total)
    lam = 1 - p
    if eps is None:
        return float(lam)
    return float(np.exp(-eps * (1 << tester.dual.r) * (1.0 - float(lam))))


# --- Peso Q-ario ---

@dataclass
class QCosetRep:
    beta: QWord
    leader: QWord
    weight: int

    @property
    def support(self) -> List[int]:
        return self.leader.q_support()


def _sindromes_de_bloques(C: RMCode, beta: QWord) -> np.ndarray:
    palabras = np.stack([b.blocks for b in beta.blocks])
    return syndrome_ints(C, palabras)


def q_weight(beta: QWord, code: RMCode, w_max: Optional[int] = None,
             budget: int = PRESUPUESTO_ENUMERACION) -> QCosetRep:
    """Peso Q-ario mínimo sobre β + C^t; soportes conjuntos por orden lexicográfico."""
    C = code
    N = C.block_len
    if beta.block_len != N:
        raise PrecondicionError(f"β debe tener bloques de longitud {N}")
    if w_max is None:
        w_max = C.min_distance // 2 - 1
    objetivos = _sindromes_de_bloques(C, beta)
    if not objetivos.any():
        return QCosetRep(beta, QWord.zeros(beta.t, N), 0)
    propio = beta.q_weight_raw()
    if 2 * propio < C.min_distance:
        return QCosetRep(beta, beta, propio)

    columnas = C.column_syndrome_ints
    for w, soportes, _ in iter_weight_levels(C, min(w_max, propio), budget):
        cols = columnas[soportes]
        subconjuntos = np.arange(1 << w, dtype=np.int64)
        elegidos = ((subconjuntos[:, None] >> np.arange(w)) & 1).astype(bool)
        xors = np.zeros((soportes.shape[0], 1 << w), dtype=np.uint64)
        for j in range(w):
            xors[:, elegidos[:, j]] ^= cols[:, j:j + 1]
        presentes = np.stack([(xors == s).any(axis=1) for s in objetivos], axis=1)
        aciertos = np.flatnonzero(presentes.all(axis=1))
        if aciertos.size:
            fila = int(aciertos[0])
            bloques = []
            for s in objetivos:
                sub = int(np.flatnonzero(xors[fila] == s)[0])
                posiciones = soportes[fila][elegidos[sub]]
                bloques.append(BitWord.from_support(posiciones.tolist(), N))
            return QCosetRep(beta, QWord(tuple(bloques)), w)
    raise NoEncontrado(f"Sin representante de peso Q-ario ≤ {w_max} en {C.label}^{beta.t}")


# --- Influencias Q-arias ---

@dataclass
class QSparseFunction:
    """f = Σ c_β χ_β sobre caracteres de D^t (β como QWord)."""

    code: RMCode
    terms: List[Tuple[QCosetRep, float]]

    @property
    def variance(self) -> float:
        return float(sum(c * c for rep, c in self.terms if rep.weight > 0))


def q_sparse_function(D: RMCode, terms: Sequence[Tuple[QWord, float]],
                      w_max: Optional[int] = None) -> QSparseFunction:
    C = dual(D)
    acumulado: Dict[Tuple[int, ...], list] = {}
    for beta, coef in terms:
        clave = tuple(int(s) for s in _sindromes_de_bloques(C, beta))
        if clave in acumulado:
            acumulado[clave][1] += float(coef)
        else:
            acumulado[clave] = [q_weight(beta, C, w_max), float(coef)]
    return QSparseFunction(D, [(rep, c) for rep, c in acumulado.values()])


def q_sparse_from_dense(D: RMCode, t: int, values: np.ndarray,
                        max_dim: int = DIMENSION_DENSA_MAXIMA, tol: float = 1e-12) -> QSparseFunction:
    """Transformada densa sobre D^t (índice: bloque i en los bits [i·dim, (i+1)·dim))."""
    total_bits = t * D.dim
    if total_bits > max_dim:
        raise PresupuestoExcedido(
            f"Transformada densa sobre D^{t} de 2^{total_bits} puntos fuera de presupuesto"
        )
    valores = np.asarray(values, dtype=np.float64)
    if valores.shape != (1 << total_bits,):
        raise PrecondicionError(f"Se esperaban 2^{total_bits} valores")
    coef = walsh_hadamard(valores) / valores.size
    C = dual(D)
    terminos = []
    mascara = (1 << D.dim) - 1
    for indice in np.flatnonzero(np.abs(coef) > tol):
        bloques = []
        for i in range(t):
            sigma = (int(indice) >> (i * D.dim)) & mascara
            bits = ints_to_bits(np.uint64(sigma), D.dim)
            bloques.append(BitWord.from_bits(word_with_syndrome(C, bits)))
        terminos.append((QWord(tuple(bloques)), float(coef[indice])))
    return q_sparse_function(D, terminos)


@dataclass
class QInfluenceTable:
    ell: int
    values: np.ndarray
    variance: float

    @property
    def total(self) -> float:
        return float(self.values.sum())

    @property
    def bound_ok(self) -> bool:
        return self.total <= self.ell * self.variance + 1e-9

    def to_dict(self) -> Dict:
        return {"ell": self.ell, "total": self.total, "variance": self.variance,
                "bound_ok": self.bound_ok, "values": self.values.tolist()}


def q_influences(f: QSparseFunction, ell: int) -> QInfluenceTable:
    """Inf_i^{≤ℓ} = Σ c_β² sobre β de peso Q-ario ≤ ℓ con β_i ≠ 0."""
    if not isinstance(f, QSparseFunction):
        raise PresupuestoExcedido(
            "Las influencias Q-arias requieren la representación dispersa (ver q_sparse_from_dense)"
        )
    influencia = np.zeros(f.code.block_len, dtype=np.float64)
    for rep, coef in f.terms:
        if 0 < rep.weight <= ell:
            influencia[rep.support] += coef * coef
    return QInfluenceTable(ell, influencia, f.variance)


# --- Funciones plegadas ---

class FoldedFunction:
    """f : D^t → Q con f(c + r) = f(c) + r."""

    def __init__(self, code: RMCode, t: int):
        self.code = code
        self.t = t

    def __call__(self, ids: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def descriptor(self) -> Dict:
        return {"kind": type(self).__name__, "t": self.t}


class DictatorFunction(FoldedFunction):
    """χ_β(c) = c_β, el símbolo en la posición β."""

    def __init__(self, code: RMCode, t: int, position: int):
        super().__init__(code, t)
        if not 0 <= position < code.block_len:
            raise PrecondicionError(f"Posición {position} fuera de [0, {code.block_len})")
        self.position = position

    def __call__(self, ids):
        ids = np.asarray(ids, dtype=np.uint64)
        return symbols(self.code, ids, np.full(ids.shape[:-1], self.position))

    def descriptor(self):
        return {"kind": "dictator", "t": self.t, "beta": self.position}


class ConstantPlusFold(FoldedFunction):
    """f(c) = b ⊕ r(c)."""

    def __init__(self, code: RMCode, t: int, base: int = 0):
        super().__init__(code, t)
        self.base = base

    def __call__(self, ids):
        return fold_of(ids) ^ np.uint64(self.base)

    def descriptor(self):
        return {"kind": "constant", "t": self.t, "base": self.base}


class RandomFoldedFunction(FoldedFunction):
    """Hash del representante canónico (bits constantes a cero) más el plegado."""

    def __init__(self, code: RMCode, t: int, seed: int = 0):
        super().__init__(code, t)
        self.seed = seed

    def base(self, reps: np.ndarray) -> np.ndarray:
        reps = np.asarray(reps, dtype=np.uint64)
        forma = reps.shape[:-1]
        acumulado = np.zeros(int(np.prod(forma, dtype=np.int64)), dtype=np.uint64)
        for i in range(self.t):
            acumulado ^= hash_ids(reps[..., i].reshape(-1), self.seed + i)
        return (acumulado & np.uint64((1 << self.t) - 1)).reshape(forma)

    def __call__(self, ids):
        ids = np.asarray(ids, dtype=np.uint64)
        return self.base(ids & ~np.uint64(1)) ^ fold_of(ids)

    def descriptor(self):
        return {"kind": "random", "t": self.t, "seed": self.seed}


def folded_function(spec: str, code: RMCode, t: int, seed: int = 0) -> FoldedFunction:
    """`dictator:<β>`, `constant[:<b>]` o `random`."""
    nombre, _, argumento = spec.partition(":")
    if nombre == "dictator":
        return DictatorFunction(code, t, int(argumento or 0))
    if nombre == "constant":
        return ConstantPlusFold(code, t, int(argumento or 0))
    if nombre == "random":
        return RandomFoldedFunction(code, t, int(argumento) if argumento else seed)
    raise PrecondicionError(f"Función desconocida: {spec}")


def check_folding(f: FoldedFunction, trials: int = 10000, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    c = uniform_ids(f.code, rng, (trials, f.t))
    r = rng.integers(0, 1 << f.t, size=trials).astype(np.uint64)
    return bool(np.all(f(add_constant(c, r)) == (f(c) ^ r)))


# --- Test DICT ---

def dict_test(f: FoldedFunction, n: int, d: int, t: int, eps: float, samples: int = 100000,
              seed: int = 0, workers: int = 1, tester: Optional[CanonicalTester] = None) -> Estimate:
    """Acepta si f(c + r) − r = f(c′), con c′ vecino de c en Cay(D^t, T_{t,ε})."""
    if f.t != t or (f.code.n, f.code.r) != (n, d):
        raise PrecondicionError("La función no vive en D^t con esos parámetros")
    prueba = tester if tester is not None else rm_tester(n, d)
    D = prueba.dual

    def indicador(rng, size):
        c = uniform_ids(D, rng, (size, t))
        vecino = c ^ _tt_eps_ids(prueba, t, eps, rng, size)
        r = rng.integers(0, 1 << t, size=size).astype(np.uint64)
        return (f(add_constant(c, r)) ^ r) == f(vecino)

    return monte_carlo(bernoulli_kernel(indicador), samples, seed, workers)


# --- Traslaciones y la instancia Ψ ---

@lru_cache(maxsize=256)
def _matriz_traslacion(n: int, d: int, alpha: int) -> np.ndarray:
    D = build_rm(n, d)
    perm = np.arange(D.block_len, dtype=np.int64) ^ alpha
    trasladados = D.dense_generators[:, perm]
    matriz = moebius(trasladados)[:, D.masks]
    matriz.setflags(write=False)
    return matriz


def translation_matrix(code: RMCode, alpha: int) -> np.ndarray:
    """A con coef(T_α∘p) = coef(p)·A, donde (T_α∘p)(x) = p(x + α)."""
    if not 0 <= alpha < code.block_len:
        raise PrecondicionError(f"α = {alpha} no es un punto de GF(2)^{code.n}")
    return _matriz_traslacion(code.n, code.r, alpha)


def translate_ids(code: RMCode, ids: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Aplica T_{α_m} a cada fila ids[m] ∈ D^t."""
    ids = np.asarray(ids, dtype=np.uint64)
    alphas = np.asarray(alphas, dtype=np.int64)
    salida = np.empty_like(ids)
    for alpha in np.unique(alphas):
        filas = alphas == alpha
        bits = ints_to_bits(ids[filas], code.dim)
        salida[filas] = bits_to_ints(gf2_matmul(bits, translation_matrix(code, int(alpha))))
    return salida


def translation_rank(code: RMCode, alpha: int) -> int:
    return rank(GF2Matrix.from_dense(translation_matrix(code, alpha)))


@dataclass
class OuterInstance:
    """Γ sobre GF(2)^n: aristas (u, v, α) con la restricción u − v = α."""

    num_vertices: int
    edges: pd.DataFrame
    group_bits: int

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Sequence[Tuple[int, int, int]],
                   group_bits: int) -> "OuterInstance":
        tabla = pd.DataFrame(list(edges), columns=["u", "v", "alpha"]).astype(np.int64)
        return cls(num_vertices, tabla, group_bits)

    @classmethod
    def from_ug_instance(cls, inst: UGInstance) -> "OuterInstance":
        if not inst.materialized:
            raise PrecondicionError("La instancia exterior debe estar materializada")
        tabla = inst.constraints
        vertices = np.unique(np.concatenate([tabla["u"].to_numpy(), tabla["v"].to_numpy()]))
        indice = {int(v): i for i, v in enumerate(vertices)}
        aristas = pd.DataFrame({
            "u": [indice[int(u)] for u in tabla["u"]],
            "v": [indice[int(v)] for v in tabla["v"]],
            "alpha": tabla["shift"].astype(np.int64),
        })
        return cls(len(vertices), aristas, inst.group_bits)

    @classmethod
    def from_max2lin(cls, path) -> "OuterInstance":
        return cls.from_ug_instance(read_max2lin(path))

    @property
    def neighbours(self) -> Dict[int, List[Tuple[int, int]]]:
        vecinos: Dict[int, List[Tuple[int, int]]] = {}
        for u, v, alpha in self.edges[["u", "v", "alpha"]].itertuples(index=False):
            vecinos.setdefault(int(u), []).append((int(v), int(alpha)))
            if u != v:
                vecinos.setdefault(int(v), []).append((int(u), int(alpha)))
        return vecinos


@dataclass
class PsiBatch:
    v1: np.ndarray
    x1: np.ndarray
    v2: np.ndarray
    x2: np.ndarray
    r: np.ndarray


@dataclass
class PsiInstance:
    """Ψ(Γ): vértices V(Γ) × D^t, alfabeto Q, solo como muestreador."""

    outer: OuterInstance
    code: RMCode
    t: int
    eps: float
    tester: CanonicalTester
    descriptor: Dict = field(default_factory=dict)

    def __post_init__(self):
        vecinos = self.outer.neighbours
        self._centros = np.array(sorted(vecinos), dtype=np.int64)
        self._listas = [np.array(vecinos[u], dtype=np.int64).reshape(-1, 2) for u in self._centros]

    def _vecino(self, rng: np.random.Generator, centros: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        v = np.empty(centros.size, dtype=np.int64)
        alpha = np.empty(centros.size, dtype=np.int64)
        for k in np.unique(centros):
            filas = np.flatnonzero(centros == k)
            lista = self._listas[k]
            elegidos = lista[rng.integers(0, lista.shape[0], size=filas.size)]
            v[filas], alpha[filas] = elegidos[:, 0], elegidos[:, 1]
        return v, alpha

    def sample(self, rng: np.random.Generator, size: int) -> PsiBatch:
        centros = rng.integers(0, self._centros.size, size=size)
        v1, a1 = self._vecino(rng, centros)
        v2, a2 = self._vecino(rng, centros)
        c1 = uniform_ids(self.code, rng, (size, self.t))
        c2 = c1 ^ _tt_eps_ids(self.tester, self.t, self.eps, rng, size)
        r = rng.integers(0, 1 << self.t, size=size).astype(np.uint64)
        x1 = add_constant(translate_ids(self.code, c1, a1), r)
        x2 = translate_ids(self.code, c2, a2)
        return PsiBatch(v1, x1, v2, x2, r)


def build_psi_instance(outer: OuterInstance, n: int, d: int, t: int, eps: float,
                       mode: str = "sampler", seed: Optional[int] = None) -> PsiInstance:
    if mode != "sampler":
        raise PrecondicionError("Ψ solo existe como muestreador")
    if outer.group_bits != n:
        raise PrecondicionError(f"Los desplazamientos exteriores tienen {outer.group_bits} bits, no n = {n}")
    if outer.edges.empty:
        raise PrecondicionError("La instancia exterior no tiene aristas")
    tester = rm_tester(n, d)
    descriptor = {
        "n": n, "d": d, "t": t, "eps": eps, "seed": seed, "mode": mode,
        "tester": {k: tester.params.get(k) for k in ("kind", "r", "walk_time")},
        "outer": {"vertices": outer.num_vertices, "edges": int(len(outer.edges)),
                  "group_bits": outer.group_bits},
    }
    return PsiInstance(outer, tester.dual, t, eps, tester, descriptor)


class PsiLabeling:
    def __call__(self, v: np.ndarray, ids: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass
class TranslatedDictatorLabeling(PsiLabeling):
    """ℓ(v, c) = c_{β_v}."""

    code: RMCode
    positions: Dict[int, int]
    table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.positions:
            raise PrecondicionError("El etiquetado necesita al menos un vértice")
        self.table = np.zeros(max(self.positions) + 1, dtype=np.int64)
        for vertice, beta in self.positions.items():
            self.table[vertice] = beta

    def __call__(self, v, ids):
        return symbols(self.code, ids, self.table[np.asarray(v, dtype=np.int64)])


@dataclass
class RandomFoldedLabeling(PsiLabeling):
    code: RMCode
    t: int
    seed: int = 0

    def __call__(self, v, ids):
        base = RandomFoldedFunction(self.code, self.t, self.seed)
        ids = np.asarray(ids, dtype=np.uint64)
        mezcla = hash_ids(np.asarray(v, dtype=np.uint64), self.seed ^ 0x51ED27) & np.uint64((1 << self.t) - 1)
        return base(ids) ^ mezcla


def evaluate_psi(inst: PsiInstance, labeling: PsiLabeling, samples: int = 100000,
                 seed: int = 0, workers: int = 1) -> Estimate:
    def indicador(rng, size):
        lote = inst.sample(rng, size)
        return (labeling(lote.v1, lote.x1) ^ lote.r) == labeling(lote.v2, lote.x2)

    return monte_carlo(bernoulli_kernel(indicador), samples, seed, workers)
