"""
Pruebas de corto_espectro: autovalores de caracteres, dictadores,
expansión de conjuntos e hipercontractividad.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from core.corto_errores import PrecondicionError
from core.corto_espectro import (
    DictatorCut,
    RandomVertexSet,
    VertexSet,
    cayley_graph,
    char_eigenvalue,
    cheeger_bound,
    dictator_profile,
    eigenvalue_profile,
    expansion,
    graph_power_report,
    hc_sse_bound,
    hypercontractivity_check,
    random_vertices,
    walk_law_report,
)
from core.corto_gf2 import BitWord
from core.corto_reedmuller import build_rm
from core.corto_tester import rm_tester, xor_tester


@pytest.fixture(scope="module")
def grafo_5_2():
    return cayley_graph(rm_tester(5, 2))


@pytest.mark.parametrize("n,d", [(5, 2), (6, 2)])
def test_autovalores_de_dictadores(n, d):
    perfil = dictator_profile(cayley_graph(rm_tester(n, d)))
    N = 1 << n
    assert len(perfil.records) == N
    assert all(r.exact == 1 - Fraction(1, 2 ** (d - 1)) for r in perfil.records)
    assert perfil.count_above >= N // 2
    assert perfil.half_satisfied


def test_autovalor_de_caracter_con_grado(grafo_5_2):
    registro = char_eigenvalue(grafo_5_2, BitWord.from_support([4], 32))
    assert registro.alpha.degree == 1
    assert registro.lam == pytest.approx(0.5)
    assert registro.lam_walk == registro.lam


def test_autovalor_con_paseo():
    g = cayley_graph(rm_tester(5, 2), walk_time=2.0)
    registro = char_eigenvalue(g, BitWord.from_support([0], 32))
    assert registro.lam_walk == pytest.approx(math.exp(-1.0))


def test_autovalor_longitud_incorrecta(grafo_5_2):
    with pytest.raises(PrecondicionError):
        char_eigenvalue(grafo_5_2, BitWord.zeros(16))


def test_perfil_de_rm_3_1():
    perfil = eigenvalue_profile(cayley_graph(rm_tester(3, 1)), 2)
    assert perfil["count"].tolist() == [1, 8, 7]
    assert perfil["s_k"].tolist() == pytest.approx([0.0, 0.5, 4.0 / 7.0])
    assert perfil.loc[2, "max_lambda"] == pytest.approx(-1.0 / 7.0)
    assert perfil.loc[1, "one_minus_2s"] == pytest.approx(0.0)


def test_corte_dictador(grafo_5_2):
    registro = expansion(grafo_5_2, DictatorCut(7))
    assert registro.exact
    assert registro.mu == 0.5
    assert registro.phi == pytest.approx(0.25)


def test_un_vertice_siempre_sale(grafo_5_2):
    registro = expansion(grafo_5_2, VertexSet((0,)))
    assert registro.exact and registro.phi == 1.0
    assert registro.mu == 2.0 ** -16


def test_conjunto_por_muestreo(grafo_5_2):
    registro = expansion(grafo_5_2, RandomVertexSet(64, seed=1), budget=10, samples=20000, seed=2)
    assert not registro.exact
    assert 0.0 <= registro.phi <= 1.0
    assert registro.stderr < 0.01


def test_conjunto_invalido(grafo_5_2):
    with pytest.raises(PrecondicionError):
        expansion(grafo_5_2, VertexSet(()))
    with pytest.raises(PrecondicionError):
        random_vertices(4, 16, seed=0)


def test_vertices_aleatorios_distintos():
    vertices = random_vertices(10, 100, seed=4)
    assert vertices.size == 100 and np.unique(vertices).size == 100


def test_cotas_de_expansion():
    assert hc_sse_bound(0.5, 3, 2.0 ** -12) == pytest.approx(1.0 - 27.0 / 64.0)
    assert cheeger_bound(0.25, 1, 1.0 / 9.0) == pytest.approx(-0.25)


def test_ley_del_paseo(grafo_5_2):
    tabla = walk_law_report(grafo_5_2, eps=0.1, k_max=2, trials=3, seed=0)
    uno = tabla[tabla["k"] == 1]
    assert np.allclose(uno["rate"], 4.0)
    assert np.all(tabla["lambda_walk"] <= 1.0)


@pytest.mark.lento
def test_reporte_de_potencia(grafo_5_2):
    reporte = graph_power_report(grafo_5_2, ell=1, mu=2.0 ** -12)
    assert reporte["half_satisfied"]
    assert reporte["dictators_above_threshold"] == 32
    assert reporte["hypercontractive_constant"] == 3.0


def test_hipercontractividad_identidad_exacta():
    reporte = hypercontractivity_check(build_rm(6, 3), ell=3, trials=100, sparsity=8, seed=11)
    assert reporte.identical
    assert reporte.bound_ok


def test_hipercontractividad_precondicion():
    with pytest.raises(PrecondicionError):
        hypercontractivity_check(build_rm(5, 2), ell=2)


@pytest.mark.lento
def test_expansion_de_conjuntos_pequenos_con_xor():
    g = cayley_graph(xor_tester(rm_tester(5, 2), 6))
    perfil = eigenvalue_profile(g, 3)
    s3 = float(perfil.loc[perfil["k"] == 3, "s_k"].iloc[0])
    mu = 2.0 ** -12
    cota = hc_sse_bound(s3, 3, mu) - 0.02
    for j in range(50):
        registro = expansion(g, RandomVertexSet(16, seed=j), samples=100_000, seed=1000 + j)
        assert registro.mu == pytest.approx(mu)
        assert registro.stderr < 0.01
        assert registro.phi >= cota
