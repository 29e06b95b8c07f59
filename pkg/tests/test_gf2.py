"""
Pruebas de corto_gf2: empaquetado, rango, formas afines y transformadas.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.corto_errores import PrecondicionError
from core.corto_gf2 import (
    AffineForm,
    BitWord,
    GF2Matrix,
    evaluate_affine,
    gf2_matmul,
    inverse_dense,
    moebius,
    pack_bits,
    rank,
    right_inverse,
    unpack_bits,
    walsh_hadamard,
    weight,
)


def test_rank_de_filas_dependientes():
    m = GF2Matrix.from_rows([BitWord.from_string(s) for s in ("110", "011", "101")])
    assert rank(m) == 2


def test_rank_de_la_identidad():
    assert rank(GF2Matrix.from_dense(np.eye(70, dtype=np.uint8))) == 70


def test_peso_cruzando_bloques():
    v = BitWord.from_support([0, 63, 64, 129], 130)
    assert weight(v) == 4
    assert v.support() == [0, 63, 64, 129]


def test_bits_fuera_de_longitud_se_limpian():
    v = BitWord(np.array([np.iinfo(np.uint64).max], dtype=np.uint64), 5)
    assert weight(v) == 5
    assert v == BitWord.from_string("11111")


def test_evaluate_affine_orden_little_endian():
    # x ↦ x_0 + 1 en GF(2)^2: puntos 0, 1, 2, 3 → 1, 0, 1, 0
    f = AffineForm(BitWord.from_string("10"), 1)
    assert evaluate_affine(f, 2) == BitWord.from_string("1010")


def test_evaluate_affine_rechaza_longitud():
    with pytest.raises(PrecondicionError):
        evaluate_affine(AffineForm(BitWord.from_string("101")), 2)


def test_constante_afin_invalida():
    with pytest.raises(PrecondicionError):
        AffineForm(BitWord.zeros(3), 2)


def test_longitudes_distintas():
    with pytest.raises(PrecondicionError):
        BitWord.zeros(3) ^ BitWord.zeros(4)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
def test_empaquetado_es_involutivo(bits):
    arreglo = np.array(bits, dtype=np.uint8)
    assert np.array_equal(unpack_bits(pack_bits(arreglo), arreglo.size), arreglo)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 40 - 1), st.integers(0, 2 ** 40 - 1))
def test_producto_interno_es_paridad_del_and(a, b):
    x, y = BitWord.from_int(a, 40), BitWord.from_int(b, 40)
    assert x.dot(y) == bin(a & b).count("1") % 2


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_inversa_derecha(semilla):
    rng = np.random.default_rng(semilla)
    G = rng.integers(0, 2, size=(5, 12), dtype=np.uint8)
    if rank(GF2Matrix.from_dense(G)) < 5:
        return
    P = right_inverse(G)
    assert np.array_equal(gf2_matmul(G, P), np.eye(5, dtype=np.uint8))


def test_inversa_de_singular():
    with pytest.raises(PrecondicionError):
        inverse_dense(np.array([[1, 1], [1, 1]], dtype=np.uint8))


def test_walsh_hadamard_de_un_caracter():
    # (−1)^{x_0} tiene todo su peso en σ = 1
    valores = np.array([1.0, -1.0, 1.0, -1.0])
    assert np.allclose(walsh_hadamard(valores), [0.0, 4.0, 0.0, 0.0])


def test_walsh_hadamard_es_involutivo_salvo_escala():
    rng = np.random.default_rng(3)
    v = rng.standard_normal(64)
    assert np.allclose(walsh_hadamard(walsh_hadamard(v)) / 64.0, v)


def test_moebius_es_involucion():
    rng = np.random.default_rng(5)
    bits = rng.integers(0, 2, size=(4, 32), dtype=np.uint8)
    assert np.array_equal(moebius(moebius(bits)), bits)


def test_longitud_no_potencia_de_dos():
    with pytest.raises(PrecondicionError):
        walsh_hadamard(np.ones(6))
