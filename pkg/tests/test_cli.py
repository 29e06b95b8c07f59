"""
Pruebas de la línea de comandos: capas de configuración, reportes y
códigos de salida.
"""

import io
import json

import pandas as pd
import pytest

from core.corto_errores import ConfiguracionInvalida
from utils.corto_cli import build_parser, config_from_args, main, run
from utils.corto_config import resolve_config
from utils.corto_reportes import canonical_json


def _config(*argv):
    return config_from_args(build_parser().parse_args(list(argv)))


def test_info_del_codigo(capsys):
    assert main(["code", "info", "--n", "5", "--d", "2"]) == 0
    reporte = json.loads(capsys.readouterr().out)
    resultados = reporte["results"]
    assert resultados["dim"] == 16
    assert resultados["dual"] == "RM(5,2)"
    assert resultados["min_weight"] == 8
    assert resultados["min_weight_count"] == 620
    assert reporte["config"]["params"] == {"d": 2, "n": 5}
    assert "version" in reporte and "wall_clock_s" in reporte


def test_comando_desconocido():
    assert main(["codigo", "info"]) == 64
    assert main(["code", "borrar"]) == 64


def test_configuracion_mal_formada(tmp_path):
    assert main(["code", "info", "--n", "cinco"]) == 65
    assert main(["code"]) == 65
    malo = tmp_path / "malo.json"
    malo.write_text("{no es json", encoding="utf-8")
    assert main(["code", "info", "--config", str(malo)]) == 65


def test_precondicion_y_presupuesto():
    assert main(["code", "info", "--n", "3", "--d", "4"]) == 2
    assert main(["ug", "gen", "--n", "5", "--d", "2", "--mode", "materialize", "-q"]) == 3


def test_semilla_desde_el_entorno(monkeypatch):
    monkeypatch.setenv("CORTO_SEED", "7")
    assert _config("code", "info").seed == 7
    assert _config("code", "info", "--seed", "3").seed == 3
    monkeypatch.setenv("CORTO_SEED", "siete")
    with pytest.raises(ConfiguracionInvalida):
        _config("code", "info")


def test_archivo_de_configuracion(tmp_path, monkeypatch):
    monkeypatch.delenv("CORTO_SEED", raising=False)
    ruta = tmp_path / "exp.json"
    ruta.write_text(json.dumps({"samples": 500, "params": {"n": 4}}), encoding="utf-8")
    config = _config("code", "info", "--config", str(ruta), "--d", "1")
    assert config.samples == 500
    assert config.params == {"n": 4, "d": 1}
    ruta.write_text(json.dumps({"muestras": 500}), encoding="utf-8")
    with pytest.raises(ConfiguracionInvalida):
        _config("code", "info", "--config", str(ruta))


def test_configuracion_invalida_por_valores():
    with pytest.raises(ConfiguracionInvalida):
        resolve_config("code", "info", {}, {"workers": 0})
    with pytest.raises(ConfiguracionInvalida):
        resolve_config("code", "info", {}, {"format": "xml"})


def test_resultados_independientes_de_trabajadores():
    comun = ("dict", "test", "--n", "5", "--d", "2", "--samples", "4000", "--chunk", "1000",
             "--seed", "11")
    uno = run(_config(*comun, "--workers", "1"))
    dos = run(_config(*comun, "--workers", "2"))
    assert uno.payload() == dos.payload()
    assert uno.config.workers != dos.config.workers


def test_perfil_en_csv(tmp_path):
    destino = tmp_path / "perfil.csv"
    codigo = main(["spectrum", "profile", "--n", "3", "--d", "1", "--kmax", "2",
                   "--format", "csv", "--out", str(destino), "-q"])
    assert codigo == 0
    tabla = pd.read_csv(destino)
    assert {"k", "count", "s_k", "max_lambda"} <= set(tabla.columns)
    assert tabla["count"].tolist() == [1, 8, 7]


def test_perfil_con_out_csv_a_stdout(capsys):
    assert main(["spectrum", "profile", "--n", "3", "--d", "1", "--kmax", "2", "--out", "csv", "-q"]) == 0
    tabla = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert tabla["count"].tolist() == [1, 8, 7]
    assert _config("spectrum", "profile", "--out", "json").out == "-"


def test_bandera_xor_equivale_a_r():
    comun = ("tester", "curve", "--n", "4", "--d", "1", "--kmax", "1")
    con_xor = run(_config(*comun, "--xor", "2"))
    con_r = run(_config(*comun, "--r", "2"))
    assert con_xor.results["params"]["r"] == 2
    assert con_xor.payload() == con_r.payload()
    assert main([*comun, "--xor", "2", "--out", "-", "-q"]) == 0


def test_bandera_walk_sin_abreviaturas():
    config = _config("tester", "curve", "--n", "4", "--d", "1", "--walk", "0.5")
    assert config.params["walk_time"] == 0.5
    assert _config("ug", "eval", "--walk-time", "0.5").params["walk_time"] == 0.5
    assert main(["tester", "curve", "--n", "4", "--d", "1", "--wal", "0.5"]) == 65


def test_expansion_con_random_y_set_file(tmp_path):
    comun = ("spectrum", "expansion", "--n", "3", "--d", "1", "--kmax", "2")
    aleatorios = run(_config(*comun, "--random", "4", "--sets", "2"))
    assert len(aleatorios.results["sets"]) == 2
    assert all(fila["mu"] == pytest.approx(0.25) for fila in aleatorios.results["sets"])
    archivo = tmp_path / "vertices.txt"
    archivo.write_text("0\n3\n5\n", encoding="utf-8")
    desde_archivo = run(_config(*comun, "--set-file", str(archivo)))
    assert [fila["mu"] for fila in desde_archivo.results["sets"]] == [pytest.approx(3 / 16)]


def test_curva_gaussiana_en_un_medio(capsys):
    assert main(["invariance", "gamma", "--rho", "0.5", "--mu", "0.5", "--grid", "3"]) == 0
    resultados = json.loads(capsys.readouterr().out)["results"]
    assert resultados["gamma"] == pytest.approx(1.0 / 3.0, abs=1e-6)
    assert resultados["closed_form"] == pytest.approx(resultados["gamma"], abs=1e-6)


def test_instancia_materializada_a_archivo(tmp_path, capsys):
    instancia = tmp_path / "gamma.txt"
    assert main(["ug", "gen", "--instance", str(instancia), "-q"]) == 0
    resultados = json.loads(capsys.readouterr().out)["results"]
    assert resultados["materialized"] and resultados["alphabet"] == 8
    assert instancia.read_text(encoding="utf-8").startswith("max2lin t=3 vars=16")


def test_etiquetado_constante_desde_la_cli(capsys):
    assert main(["ug", "eval", "--labeling", "constant:0", "-q"]) == 0
    resultados = json.loads(capsys.readouterr().out)["results"]
    assert resultados["value"]["fraction"] == "1/8"


def test_json_canonico():
    assert canonical_json({"b": 1, "a": [1, 2]}) == canonical_json({"a": [1, 2], "b": 1})
    assert json.load(io.StringIO(canonical_json({"x": 0.5}))) == {"x": 0.5}
