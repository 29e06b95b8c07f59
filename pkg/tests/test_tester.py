"""
Pruebas de corto_tester: tester RM, XOR, paseo, suavidad y curva de solidez.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.corto_errores import PrecondicionError
from core.corto_gf2 import BitWord, popcount
from core.corto_reedmuller import build_rm, syndrome
from core.corto_tester import (
    soundness_floor,
    coset_spectrum,
    rejection_probability,
    rm_tester,
    smooth_bounds_report,
    smoothness_report,
    soundness_curve,
    walk_tester,
    xor_rejection,
    xor_tester,
)


@pytest.fixture(scope="module")
def tester_5_2():
    return rm_tester(5, 2)


def test_soporte_del_tester_rm(tester_5_2):
    t = tester_5_2
    assert t.code == build_rm(5, 2) and t.dual == build_rm(5, 2)
    assert t.support.size == 620
    assert t.query_complexity == 8
    assert np.all(popcount(t.support.words) == 8)


def test_palabras_del_tester_en_el_dual(tester_5_2):
    C = tester_5_2.code
    for q in tester_5_2.sample_words(20, seed=1):
        assert tester_5_2.dual.contains(q)
        # ⟨c, q⟩ = 0 para todo c ∈ C
        assert not syndrome(tester_5_2.dual, q)
    assert C.label == "RM(5,2)"


def test_marginales_exactas(tester_5_2):
    assert tester_5_2.exact_marginals() == [Fraction(1, 4)] * 32
    assert tester_5_2.query_probability == pytest.approx(0.25)


def test_suavidad_y_no_2_suavidad(tester_5_2):
    reporte = smoothness_report(tester_5_2)
    assert reporte.exact
    assert reporte.smooth
    assert reporte.tau_fraction == Fraction(1, 4)
    # cada par cae en 35 de los 620 subespacios afines de dimensión 3
    assert reporte.pair_values == ["7/124"]
    assert not reporte.two_smooth


def test_rechazo_de_un_dictador(tester_5_2):
    e3 = BitWord.from_support([3], 32)
    est = rejection_probability(tester_5_2, e3)
    assert est.exact and est.fraction == Fraction(1, 4)


def test_rechazo_por_muestreo(tester_5_2):
    e3 = BitWord.from_support([3], 32)
    est = rejection_probability(tester_5_2, e3, samples=20000, seed=7)
    assert not est.exact
    assert est.within(0.25, sigmas=4.0)


def test_rechazo_de_palabras_del_codigo(tester_5_2):
    rng = np.random.default_rng(2)
    C = tester_5_2.code
    c = BitWord(C.encode(rng.integers(0, 2, size=C.dim, dtype=np.uint8)), 32)
    assert rejection_probability(tester_5_2, c).value == 0.0


def test_xor_de_dos(tester_5_2):
    t2 = xor_tester(tester_5_2, 2)
    e0 = BitWord.from_support([0], 32)
    assert t2.support is not None
    assert rejection_probability(t2, e0).fraction == Fraction(3, 8)
    assert xor_rejection(0.25, 2) == pytest.approx(0.375)
    assert np.allclose(t2.marginals, 0.375)
    assert t2.query_complexity == 16


def _alfas_aleatorias(cantidad, seed):
    rng = np.random.default_rng(seed)
    return [BitWord.from_int(int(v), 32) for v in rng.integers(1, 1 << 32, size=cantidad, dtype=np.uint64)]


def test_xor_muestreado_coincide_con_la_identidad(tester_5_2):
    t3 = xor_tester(tester_5_2, 3)
    for j, alpha in enumerate(_alfas_aleatorias(20, seed=21)):
        s = rejection_probability(tester_5_2, alpha).value
        estimado = rejection_probability(t3, alpha, samples=20000, seed=100 + j)
        assert estimado.within(xor_rejection(s, 3), sigmas=4.0, floor=1e-9)


def test_paseo_muestreado_coincide_con_el_exacto(tester_5_2):
    paseo = walk_tester(tester_5_2, 1.3)
    for j, alpha in enumerate(_alfas_aleatorias(20, seed=22)):
        s = rejection_probability(tester_5_2, alpha).value
        exacto = rejection_probability(paseo, alpha)
        assert exacto.value == pytest.approx((1.0 - math.exp(-2.0 * 1.3 * s)) / 2.0)
        estimado = rejection_probability(paseo, alpha, samples=20000, seed=200 + j)
        assert estimado.within(exacto.value, sigmas=4.0, floor=1e-9)


def test_xor_invalido(tester_5_2):
    with pytest.raises(PrecondicionError):
        xor_tester(tester_5_2, 0)


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.0, max_value=8.0))
def test_paseo_exacto_por_espectro(tiempo):
    t = walk_tester(rm_tester(4, 1), tiempo)
    alpha = BitWord.from_support([0], 16)
    base = rejection_probability(rm_tester(4, 1), alpha).value
    esperado = (1.0 - math.exp(-tiempo * 2.0 * base)) / 2.0
    assert rejection_probability(t, alpha).value == pytest.approx(esperado, abs=1e-12)


def test_paseo_de_tiempo_cero(tester_5_2):
    t0 = walk_tester(tester_5_2, 0.0)
    assert t0.query_complexity == 0
    assert rejection_probability(t0, BitWord.from_support([1, 2], 32)).value == 0.0


def test_paseo_sin_complejidad_de_consultas(tester_5_2):
    assert walk_tester(tester_5_2, 1.5).query_complexity is None


def test_tester_rm_fuera_de_rango():
    with pytest.raises(PrecondicionError):
        rm_tester(4, 3)


def test_espectro_de_cosets_en_dictadores(tester_5_2):
    espectro = coset_spectrum(tester_5_2)
    assert espectro.lambdas[0] == pytest.approx(1.0)
    C = tester_5_2.code
    for i in range(32):
        sigma = syndrome(C, BitWord.from_support([i], 32)).to_int()
        assert espectro.lambdas[sigma] == pytest.approx(0.5)


@pytest.mark.lento
def test_curva_exacta_frente_a_la_cota_inferior(tester_5_2):
    curva = soundness_curve(tester_5_2, k_max=2)
    assert [p.k for p in curva] == [0, 1, 2]
    assert curva[0].s_lower == 0.0
    s1, s2 = curva[1].s_lower, curva[2].s_lower
    assert soundness_floor(1, 2) <= s1 <= 0.25 + 1e-12
    assert s2 >= soundness_floor(2, 2) - 1e-12
    assert curva[1].s_at_distance == pytest.approx(0.25)
    assert curva[1].witness.weight() >= 1


@pytest.mark.lento
def test_cota_superior_de_suavidad(tester_5_2):
    reporte = smooth_bounds_report(tester_5_2)
    assert reporte["upper_bound_violations"] == 0
    assert reporte["table_complete"]
    assert not reporte["lower_bound_applicable"]


def test_curva_muestreada(tester_5_2):
    curva = soundness_curve(tester_5_2, k_max=2, mode="sampled", trials=4, seed=3)
    assert [p.mode for p in curva] == ["sampled"] * 3
    assert all(p.witness is not None for p in curva)
    assert curva[1].s_lower == pytest.approx(0.25)


def test_curva_modo_desconocido(tester_5_2):
    with pytest.raises(PrecondicionError):
        soundness_curve(tester_5_2, mode="aproximado")
