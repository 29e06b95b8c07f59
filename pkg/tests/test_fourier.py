"""
Pruebas de corto_fourier: transformada sobre D, coeficientes por coset,
influencias y estabilidad al ruido.
"""

import numpy as np
import pytest

from core.corto_errores import PrecondicionError, PresupuestoExcedido
from core.corto_espectro import cayley_graph
from core.corto_fourier import (
    CodeFunction,
    coefficient_by_coset,
    constant,
    dictator_cut,
    from_terms,
    influences,
    load_function,
    majority_like,
    noise_stability,
    random_dense,
    save_function,
    wht,
)
from core.corto_gf2 import BitWord
from core.corto_reedmuller import build_rm, syndrome
from core.corto_tester import rm_tester


@pytest.fixture(scope="module")
def D():
    return build_rm(5, 2)


@pytest.fixture(scope="module")
def grafo(D):
    return cayley_graph(rm_tester(5, 2))


def test_media_y_varianza_del_dictador(D):
    f = dictator_cut(D, 3)
    assert f.mean() == pytest.approx(0.5)
    assert f.variance() == pytest.approx(0.25)


def test_transformada_del_dictador(D):
    f = dictator_cut(D, 3)
    coef = wht(f)
    sigma = syndrome(D.dual_code, BitWord.from_support([3], 32)).to_int()
    assert coef[0] == pytest.approx(0.5)
    assert coef[sigma] == pytest.approx(-0.5)
    assert np.sum(coef ** 2) == pytest.approx(np.mean(f.values ** 2))


def test_coeficiente_por_coset(D):
    f = dictator_cut(D, 9)
    sigma = syndrome(D.dual_code, BitWord.from_support([9], 32)).to_int()
    rep, valor = coefficient_by_coset(f, sigma)
    assert rep.degree == 1 and rep.support == [9]
    assert valor == pytest.approx(-0.5)


def test_coeficiente_fuera_de_rango(D):
    with pytest.raises(PrecondicionError):
        coefficient_by_coset(constant(D), 1 << 16)


def test_influencias_del_dictador(D):
    tabla = influences(dictator_cut(D, 2), ell=1)
    assert tabla.values[2] == pytest.approx(0.25)
    assert np.delete(tabla.values, 2) == pytest.approx(np.zeros(31))
    assert tabla.bound_ok


def test_influencias_de_la_mayoria(D):
    f = majority_like(D)
    assert f.mean() == pytest.approx(0.5)
    tabla = influences(f, ell=2)
    assert tabla.bound_ok
    assert tabla.total <= 2 * f.variance() + 1e-9


def test_influencias_precondicion(D):
    with pytest.raises(PrecondicionError):
        influences(constant(D), ell=4)


def test_estabilidad_del_dictador(D, grafo):
    assert noise_stability(dictator_cut(D, 0), grafo) == pytest.approx(0.375)


def test_estabilidad_de_constante(D, grafo):
    assert noise_stability(constant(D, 0.5), grafo) == pytest.approx(0.25)


def test_funcion_dispersa_suma_cosets(D):
    C = D.dual_code
    palabra = BitWord(C.encode(np.ones(C.dim, dtype=np.uint8)), 32)
    e0 = BitWord.from_support([0], 32)
    f = from_terms(D, [(e0, 0.5), (e0 ^ palabra, 0.25)])
    assert len(f.terms) == 1
    rep, coef = f.terms[0]
    assert rep.support == [0] and coef == pytest.approx(0.75)


def test_estabilidad_dispersa(D, grafo):
    f = from_terms(D, [(BitWord.from_support([5], 32), 1.0)])
    assert noise_stability(f, grafo) == pytest.approx(0.5)
    tabla = influences(f, ell=1)
    assert tabla.values[5] == pytest.approx(1.0)


def test_densa_o_dispersa(D):
    with pytest.raises(PrecondicionError):
        CodeFunction(D)
    with pytest.raises(PrecondicionError):
        CodeFunction(D, values=np.zeros(8))


def test_presupuesto_de_la_transformada(D):
    with pytest.raises(PresupuestoExcedido):
        wht(random_dense(D, seed=1), max_dim=10)


def test_guardar_y_cargar(D, tmp_path):
    f = random_dense(D, seed=4)
    ruta = save_function(f, tmp_path / "f.bin")
    g = load_function(ruta)
    assert g.dual_code == D
    assert np.array_equal(g.values, f.values)
    assert g.label == f.label
