"""
Pruebas de corto_reedmuller: dualidad, distancia, líderes de coset y
palabras de peso mínimo.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.corto_errores import NoEncontrado, PrecondicionError, PresupuestoExcedido
from core.corto_gf2 import AffineForm, BitWord, evaluate_affine, gf2_matmul, popcount
from core.corto_reedmuller import (
    build_rm,
    codewords,
    coset_leader,
    coset_table,
    dimension,
    dual,
    hadamard_subcode,
    iter_weight_levels,
    min_weight_matrix,
    min_weight_words,
    syndrome,
    word_with_syndrome,
)

PARES = [(n, d) for n in range(3, 8) for d in range(1, n - 1)]


@pytest.mark.parametrize("n,d", PARES)
def test_dualidad_y_dimensiones(n, d):
    C = build_rm(n, d)
    D = dual(C)
    assert C.dim + D.dim == 1 << n
    assert D.label == f"RM({n},{n - d - 1})"
    assert not gf2_matmul(C.dense_generators, D.dense_generators.T).any()


@pytest.mark.parametrize("n,d", [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3), (6, 3)])
def test_palabras_de_peso_minimo(n, d):
    C = build_rm(n, d)
    palabras = min_weight_matrix(C)
    assert np.all(popcount(palabras) == 1 << (n - d))
    assert C.min_distance == 1 << (n - d)
    assert len(np.unique(palabras, axis=0)) == palabras.shape[0]
    assert all(C.contains(w) for w in min_weight_words(C)[:50])


def test_conteos_conocidos():
    assert len(min_weight_words(build_rm(3, 1))) == 14
    assert len(min_weight_words(build_rm(5, 2))) == 620


def test_presupuesto_de_peso_minimo():
    with pytest.raises(PresupuestoExcedido):
        min_weight_matrix(build_rm(5, 2), budget=100)


def test_info_de_rm_5_2():
    C = build_rm(5, 2)
    assert (C.dim, C.block_len, C.min_distance) == (16, 32, 8)
    assert dual(C) == C
    assert C.descriptor()["dim"] == 16


def test_monomio_lineal_en_indice_1_mas_j():
    C = build_rm(3, 1)
    coef = np.zeros(C.dim, dtype=np.uint8)
    coef[1 + 2] = 1
    esperado = evaluate_affine(AffineForm(BitWord.from_support([2], 3)), 3)
    assert BitWord.from_bits(C.encode_bits(coef)) == esperado


def test_dimension_coincide():
    for n, d in PARES:
        assert dimension(n, d) == build_rm(n, d).dim


def test_grados_invalidos():
    with pytest.raises(PrecondicionError):
        build_rm(3, 4)
    with pytest.raises(PrecondicionError):
        dual(hadamard_subcode(build_rm(4, 2)))


def test_independencia_por_debajo_de_la_distancia_exhaustiva():
    # Toda palabra de peso 1..4 tiene síndrome no nulo respecto de RM(5,2)
    C = build_rm(5, 2)
    for _, _, sindromes in iter_weight_levels(C, 4):
        assert np.all(sindromes != 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 31), min_size=1, max_size=7, unique=True))
def test_independencia_por_debajo_de_la_distancia(soporte):
    C = build_rm(5, 2)
    assert syndrome(C, BitWord.from_support(soporte, 32))


def test_hadamard_dentro_de_rm():
    D = build_rm(4, 2)
    H = hadamard_subcode(D)
    assert H.dim == 4 and H.min_distance == 8 and H.label == "H(4)"
    for fila in H.generators.rows():
        assert D.contains(fila)
        assert fila.weight() == 8


def test_lider_de_codigo_y_de_perturbacion():
    C = build_rm(4, 1)
    rng = np.random.default_rng(0)
    palabra = BitWord(C.encode(rng.integers(0, 2, size=C.dim, dtype=np.uint8)), 16)
    assert coset_leader(C, palabra).degree == 0
    perturbada = palabra ^ BitWord.from_support([5], 16)
    rep = coset_leader(C, perturbada)
    assert rep.degree == 1 and rep.support == [5]


def test_lider_no_encontrado():
    C = build_rm(4, 1)
    alpha = BitWord.from_support([0, 1, 2], 16)
    with pytest.raises(NoEncontrado):
        coset_leader(C, alpha ^ BitWord(C.encode(np.ones(C.dim, dtype=np.uint8)), 16), w_max=1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 16 - 1))
def test_palabra_con_sindrome(sigma):
    C = build_rm(5, 2)
    bits = np.array([(sigma >> j) & 1 for j in range(16)], dtype=np.uint8)
    alpha = BitWord.from_bits(word_with_syndrome(C, bits))
    assert np.array_equal(syndrome(C, alpha).bits(), bits)


def test_tabla_de_cosets_de_rm_3_1():
    tabla = coset_table(build_rm(3, 1))
    assert tabla.complete
    valores, cuentas = np.unique(tabla.degrees, return_counts=True)
    assert dict(zip(valores.tolist(), cuentas.tolist())) == {0: 1, 1: 8, 2: 7}


def test_codewords_de_rm_3_1():
    palabras = codewords(build_rm(3, 1))
    assert palabras.shape[0] == 16
    assert set(popcount(palabras).tolist()) == {0, 4, 8}
