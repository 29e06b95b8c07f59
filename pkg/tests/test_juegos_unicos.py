"""
Pruebas de corto_juegos_unicos: instancia Γ, etiquetados, solución vectorial
implícita y cota de solidez.
"""

import io
import math
from fractions import Fraction

import numpy as np
import pytest

from core.corto_errores import ConfiguracionInvalida, PrecondicionError, PresupuestoExcedido
from core.corto_juegos_unicos import (
    ConstantLabeling,
    RandomLabeling,
    ShiftedLabeling,
    best_folded_labeling,
    build_gamma_instance,
    coset_representative,
    corollary_parameters,
    embed_linear,
    evaluate_labeling,
    hash_ids,
    implicit_sdp,
    linear_part,
    read_max2lin,
    sdp_feasibility_check,
    sdp_value,
    soundness_bound,
    write_max2lin,
    xor_curve_formula,
)
from core.corto_reedmuller import dimension
from core.corto_tester import SoundnessPoint, rm_tester, walk_tester


@pytest.fixture(scope="module")
def gamma_3_1():
    return build_gamma_instance(3, 1, rm_tester(3, 1), mode="materialize")


def test_hash_determinista():
    ids = np.arange(1000, dtype=np.uint64) * np.uint64(0x9E3779B97F4A7C15)
    assert np.array_equal(hash_ids(ids, 5), hash_ids(ids, 5))
    assert not np.array_equal(hash_ids(ids, 5), hash_ids(ids, 6))


def test_partes_lineal_y_representante():
    ids = np.array([0b1011_0110], dtype=np.uint64)
    assert linear_part(ids, 3).tolist() == [0b011]
    rep = coset_representative(ids, 3)
    assert linear_part(rep, 3).tolist() == [0]
    assert (rep ^ embed_linear(linear_part(ids, 3))).tolist() == ids.tolist()


def test_instancia_materializada(gamma_3_1):
    inst = gamma_3_1
    assert inst.materialized
    assert inst.alphabet_size == 8 and inst.num_vars == 16
    assert inst.total == 14 * 16 * 8 * 8
    assert inst.constraints["weight"].sum() == pytest.approx(1.0)


def test_etiquetado_constante(gamma_3_1):
    valor = evaluate_labeling(gamma_3_1, ConstantLabeling(0))
    assert valor.exact and valor.fraction == Fraction(1, 8)
    desplazado = evaluate_labeling(gamma_3_1, ShiftedLabeling(ConstantLabeling(0), 5))
    assert desplazado.fraction == Fraction(1, 8)


def test_desplazar_no_cambia_el_valor(gamma_3_1):
    base = RandomLabeling(3, seed=2)
    assert (evaluate_labeling(gamma_3_1, base).fraction
            == evaluate_labeling(gamma_3_1, ShiftedLabeling(base, 3)).fraction)


def test_mejor_etiquetado_simetrico(gamma_3_1):
    mejor, etiquetado = best_folded_labeling(gamma_3_1)
    assert mejor.value >= 0.125
    assert etiquetado.descriptor()["kind"] in ("folded", "invariant")
    with pytest.raises(PresupuestoExcedido):
        best_folded_labeling(gamma_3_1, budget=10)


def test_instancia_muestreada_con_constante():
    inst = build_gamma_instance(5, 2, rm_tester(5, 2))
    assert not inst.materialized
    valor = evaluate_labeling(inst, ConstantLabeling(0), samples=40000, seed=1)
    assert valor.within(0.125, sigmas=4.0)
    with pytest.raises(PrecondicionError):
        evaluate_labeling(inst, ConstantLabeling(0))


def test_instancia_fuera_de_presupuesto():
    with pytest.raises(PresupuestoExcedido):
        build_gamma_instance(3, 1, rm_tester(3, 1), mode="materialize", budget=1000)


def test_instancia_invalida():
    with pytest.raises(PrecondicionError):
        build_gamma_instance(4, 1, rm_tester(3, 1))
    with pytest.raises(PrecondicionError):
        build_gamma_instance(3, 1, rm_tester(3, 1), mode="perezoso")


def test_max2lin_en_archivo(gamma_3_1, tmp_path):
    ruta = tmp_path / "gamma.txt"
    write_max2lin(gamma_3_1, ruta)
    assert ruta.read_text(encoding="utf-8").startswith("max2lin t=3 vars=16")
    leida = read_max2lin(ruta)
    assert len(leida.constraints) == len(gamma_3_1.constraints)
    assert leida.group_bits == 3 and leida.num_vars == 16
    assert evaluate_labeling(leida, ConstantLabeling(0)).value == pytest.approx(0.125)


def test_max2lin_mal_formado():
    with pytest.raises(ConfiguracionInvalida):
        read_max2lin(io.StringIO("max3lin t=3 vars=16\n"))
    with pytest.raises(ConfiguracionInvalida):
        read_max2lin(io.StringIO(""))


def test_valor_sdp_exacto():
    valor = sdp_value(rm_tester(5, 2))
    assert valor.value.fraction == Fraction(1, 4)
    assert valor.lower_bound == pytest.approx(0.25)


def test_valor_sdp_del_paseo():
    assert sdp_value(walk_tester(rm_tester(5, 2), 0.0)).value.fraction == Fraction(1)
    con_paseo = sdp_value(walk_tester(rm_tester(5, 2), 1.0))
    assert 0.0 < con_paseo.value.value < 1.0
    assert con_paseo.lower_bound is None


def test_factibilidad_de_la_solucion_vectorial():
    reporte = sdp_feasibility_check(implicit_sdp(5, 2), trials=500, seed=3)
    assert reporte["feasible"]
    assert reporte["probes"] == 500


def test_cota_de_solidez_con_formula():
    curva = xor_curve_formula(2, 4, 3)
    assert [p.k for p in curva] == [0, 1, 2, 3]
    assert curva[1].s_lower == pytest.approx(0.5 - 0.5 * (7.0 / 8.0) ** 4)
    cota = soundness_bound(curva, R=32, distance=8)
    assert cota.k_star == 1
    assert cota.complete
    assert cota.value == pytest.approx((7.0 / 8.0) ** 4 + 3.0 / math.sqrt(32))


def test_cota_de_solidez_sin_puntos():
    curva = [SoundnessPoint(3, 0.2, None, "exact")]
    with pytest.raises(PrecondicionError):
        soundness_bound(curva, R=32, distance=8)


def test_parametros_del_corolario():
    p = corollary_parameters(16, 0.5)
    assert (p["d"], p["r"], p["k"]) == (4, 70, 6)
    assert p["queries"] == 70 * (1 << 12)
    assert p["log2_vertices"] == dimension(16, 4)
    with pytest.raises(PrecondicionError):
        corollary_parameters(16, 1.5)
    with pytest.raises(PrecondicionError):
        corollary_parameters(2, 0.5)
