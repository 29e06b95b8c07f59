"""
Pruebas de corto_alfabeto: T_t, peso Q-ario, funciones plegadas, test DICT
y la instancia compuesta Ψ.
"""

import math

import numpy as np
import pytest

from core.corto_alfabeto import (
    DictatorFunction,
    OuterInstance,
    QWord,
    RandomFoldedFunction,
    TranslatedDictatorLabeling,
    build_psi_instance,
    check_folding,
    dict_test,
    evaluate_psi,
    folded_function,
    q_influences,
    q_sparse_from_dense,
    q_sparse_function,
    q_weight,
    sample_Tt,
    symbols,
    translate_ids,
    translation_rank,
    tt_eigenvalue,
)
from core.corto_errores import PrecondicionError, PresupuestoExcedido
from core.corto_gf2 import BitWord, ints_to_bits
from core.corto_reedmuller import build_rm
from core.corto_tester import rm_tester


@pytest.fixture(scope="module")
def D():
    return build_rm(5, 2)


@pytest.fixture(scope="module")
def tester_5_2():
    return rm_tester(5, 2)


def _qword(*soportes, N=32):
    return QWord(tuple(BitWord.from_support(s, N) for s in soportes))


def test_autovalor_de_tt(tester_5_2):
    beta = _qword([0], [])
    assert tt_eigenvalue(tester_5_2, beta) == pytest.approx(0.75)
    assert tt_eigenvalue(tester_5_2, beta, eps=0.1) == pytest.approx(math.exp(-0.1))


def test_muestras_de_tt(tester_5_2):
    for semilla in range(10):
        z = sample_Tt(tester_5_2, 3, seed=semilla)
        no_nulos = [b for b in z.blocks if b.weight()]
        assert all(b == no_nulos[0] for b in no_nulos)
        assert all(tester_5_2.dual.contains(b) for b in no_nulos)
    with pytest.raises(PrecondicionError):
        sample_Tt(tester_5_2, 0)


def test_qword_simbolos():
    w = QWord.from_symbols({3: 0b10, 7: 0b11}, 2, 32)
    assert w.symbol(3) == 2 and w.symbol(7) == 3 and w.symbol(0) == 0
    assert w.q_support() == [3, 7]
    with pytest.raises(PrecondicionError):
        QWord((BitWord.zeros(16), BitWord.zeros(32)))


def test_peso_q_ario(D):
    C = D.dual_code
    assert q_weight(_qword([], []), C).weight == 0
    assert q_weight(_qword([0], [0]), C).weight == 1
    palabra = BitWord(C.encode(np.ones(C.dim, dtype=np.uint8)), 32)
    beta = QWord((palabra ^ BitWord.from_support([3], 32), BitWord.zeros(32)))
    rep = q_weight(beta, C)
    assert rep.weight == 1 and rep.support == [3]


def test_influencias_q_arias(D):
    f = q_sparse_function(D, [(_qword([2], []), 1.0), (_qword([], []), 0.5)])
    tabla = q_influences(f, ell=1)
    assert tabla.values[2] == pytest.approx(1.0)
    assert tabla.variance == pytest.approx(1.0)
    assert tabla.bound_ok
    with pytest.raises(PresupuestoExcedido):
        q_influences(np.zeros(32), ell=1)


def test_transformada_densa_q_aria():
    D = build_rm(3, 1)
    f = q_sparse_from_dense(D, 2, np.ones(256))
    assert len(f.terms) == 1 and f.variance == 0.0
    with pytest.raises(PresupuestoExcedido):
        q_sparse_from_dense(D, 6, np.ones(8))


@pytest.mark.parametrize("spec", ["dictator:5", "constant:2", "random:3"])
def test_plegado(D, spec):
    assert check_folding(folded_function(spec, D, 2), trials=2000, seed=1)


def test_funcion_desconocida(D):
    with pytest.raises(PrecondicionError):
        folded_function("majority", D, 2)
    with pytest.raises(PrecondicionError):
        DictatorFunction(D, 2, 32)


def test_dict_acepta_dictadores(D):
    f = DictatorFunction(D, 2, 3)
    est = dict_test(f, 5, 2, 2, eps=0.1, samples=20000, seed=2)
    assert est.value >= 0.6
    # Pr[el ruido deja el símbolo intacto] = (1 + 3·e^{−ε·2^d/4}) / 4
    assert est.within((1.0 + 3.0 * math.exp(-0.1)) / 4.0, sigmas=4.0)


def test_dict_rechaza_funciones_aleatorias(D):
    dictador = dict_test(DictatorFunction(D, 2, 0), 5, 2, 2, eps=1.0, samples=20000, seed=4)
    aleatoria = dict_test(RandomFoldedFunction(D, 2, seed=9), 5, 2, 2, eps=1.0, samples=20000, seed=5)
    assert aleatoria.value < dictador.value - 0.1


def test_dict_parametros_incoherentes(D):
    with pytest.raises(PrecondicionError):
        dict_test(DictatorFunction(D, 2, 0), 5, 2, 3, eps=0.1, samples=10)


def test_traslacion(D):
    assert translation_rank(D, 7) == D.dim
    rng = np.random.default_rng(0)
    ids = rng.integers(0, 1 << D.dim, size=6).astype(np.uint64)
    alpha = 13
    trasladados = translate_ids(D, ids, np.full(6, alpha))
    originales = D.encode_bits(ints_to_bits(ids, D.dim))
    nuevos = D.encode_bits(ints_to_bits(trasladados, D.dim))
    assert np.array_equal(nuevos, originales[:, np.arange(32) ^ alpha])
    assert np.array_equal(translate_ids(D, ids, np.zeros(6, dtype=np.int64)), ids)


def test_psi_con_un_vertice_reproduce_dict(D):
    exterior = OuterInstance.from_edges(1, [(0, 0, 0)], 5)
    psi = build_psi_instance(exterior, 5, 2, 2, eps=0.1)
    assert psi.descriptor["outer"]["edges"] == 1
    en_psi = evaluate_psi(psi, TranslatedDictatorLabeling(D, {0: 3}), samples=20000, seed=6)
    en_dict = dict_test(DictatorFunction(D, 2, 3), 5, 2, 2, eps=0.1, samples=20000, seed=7)
    assert abs(en_psi.value - en_dict.value) <= 4.0 * math.hypot(en_psi.stderr, en_dict.stderr)


def test_psi_con_dos_vertices_satisfacible(D):
    alpha = 5
    exterior = OuterInstance.from_edges(2, [(0, 1, alpha)], 5)
    psi = build_psi_instance(exterior, 5, 2, 2, eps=0.1)
    etiquetado = TranslatedDictatorLabeling(D, {0: 3, 1: 3 ^ alpha})
    en_psi = evaluate_psi(psi, etiquetado, samples=20000, seed=8)
    en_dict = dict_test(DictatorFunction(D, 2, 3), 5, 2, 2, eps=0.1, samples=20000, seed=9)
    assert abs(en_psi.value - en_dict.value) <= 4.0 * math.hypot(en_psi.stderr, en_dict.stderr)
    assert en_psi.value >= 1.0 - 4.0 * 0.1


def test_tabla_de_dictadores_trasladados(D):
    etiquetado = TranslatedDictatorLabeling(D, {0: 3, 2: 7})
    assert etiquetado.table.tolist() == [3, 0, 7]
    ids = np.arange(12, dtype=np.uint64).reshape(6, 2)
    v = np.array([0, 2, 0, 2, 0, 2])
    assert np.array_equal(etiquetado(v, ids), symbols(D, ids, np.array([3, 7, 3, 7, 3, 7])))
    with pytest.raises(PrecondicionError):
        TranslatedDictatorLabeling(D, {})


def test_psi_invalida():
    with pytest.raises(PrecondicionError):
        build_psi_instance(OuterInstance.from_edges(1, [(0, 0, 0)], 4), 5, 2, 2, eps=0.1)
    with pytest.raises(PrecondicionError):
        build_psi_instance(OuterInstance.from_edges(1, [(0, 0, 0)], 5), 5, 2, 2, eps=0.1,
                           mode="materialize")
