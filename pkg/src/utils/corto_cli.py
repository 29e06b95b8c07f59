"""
🖥️ codigocorto - Línea de comandos
==================================

PROPÓSITO:
- Un solo ejecutable con un árbol de subcomandos que refleja los módulos
- Configuración resuelta por capas y eco completo en cada reporte
- Reportes JSON (canónico) o CSV, a archivo o a stdout con `--out -`

Códigos de salida: 0 éxito, 2 precondición, 3 presupuesto, 64 comando
desconocido, 65 configuración mal formada.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from core.corto_alfabeto import (
    OuterInstance,
    RandomFoldedLabeling,
    TranslatedDictatorLabeling,
    build_psi_instance,
    check_folding,
    dict_test,
    evaluate_psi,
    folded_function,
)
from core.corto_errores import (
    ComandoDesconocido,
    ConfiguracionInvalida,
    ErrorCodigoCorto,
    PrecondicionError,
)
from core.corto_espectro import (
    DictatorCut,
    RandomVertexSet,
    VertexSet,
    cayley_graph,
    dictator_profile,
    eigenvalue_profile,
    expansion,
    hc_sse_bound,
    hypercontractivity_check,
    walk_law_report,
)
from core.corto_fourier import (
    CodeFunction,
    constant,
    dictator_cut,
    influences,
    load_function,
    majority_like,
    noise_stability,
    random_dense,
)
from core.corto_invarianza import (
    MultilinearPoly,
    bounded_distance_transfer,
    gamma_rho,
    invariance_gap,
    mis_harness,
    mz_uniformity_check,
    random_regular_poly,
    regularity,
)
from core.corto_juegos_unicos import (
    ConstantLabeling,
    RandomLabeling,
    best_folded_labeling,
    build_gamma_instance,
    corollary_parameters,
    evaluate_labeling,
    implicit_sdp,
    sdp_feasibility_check,
    sdp_value,
    soundness_bound,
    write_max2lin,
    xor_curve_formula,
)
from core.corto_reedmuller import build_rm, dual, min_weight_count
from core.corto_tester import (
    CanonicalTester,
    rm_tester,
    smooth_bounds_report,
    smoothness_report,
    soundness_curve,
    walk_tester,
    xor_tester,
)

from .corto_config import FORMATOS, VERSION, ExperimentConfig, resolve_config
from .corto_reportes import Report, write_report

logger = logging.getLogger(__name__)

Resultado = Tuple[Dict[str, Any], Optional[pd.DataFrame]]

_RM = {"n": (int, 5), "d": (int, 2)}
_TESTER = {**_RM, "r": (int, 1), "walk_time": (float, None)}

# Nombres alternativos de algunas banderas
_ALIAS = {"r": ("--xor",), "walk_time": ("--walk",)}

# Parámetros de cada acción: nombre -> (tipo, valor por defecto)
ACCIONES: Dict[str, Dict[str, Dict[str, Tuple[type, Any]]]] = {
    "code": {
        "info": dict(_RM),
    },
    "tester": {
        "curve": {**_TESTER, "kmax": (int, 3), "mode": (str, "exact")},
        "smooth": {**_TESTER, "gamma": (float, 0.25)},
    },
    "spectrum": {
        "profile": {**_TESTER, "kmax": (int, 3), "eps": (float, None)},
        "expansion": {**_TESTER, "set": (str, "random:64"), "set_file": (str, None),
                      "random": (int, None), "sets": (int, 1), "kmax": (int, 3)},
        "hyper": {"n": (int, 6), "d": (int, 3), "ell": (int, 1), "sparsity": (int, 8)},
    },
    "fourier": {
        "influences": {**_RM, "fn": (str, "dictator:0"), "ell": (int, 1)},
        "stability": {**_TESTER, "fn": (str, "dictator:0"), "ell": (int, 1),
                      "tau": (float, 0.1), "c": (float, 1.0)},
    },
    "invariance": {
        "gap": {"n": (int, 7), "d": (int, 3), "poly": (str, None), "degree": (int, 2),
                "psi": (str, "zeta"), "dists": (str, "cube,rm"), "slack": (float, None)},
        "mz-check": {"n": (int, 3), "d": (int, 1), "block_bits": (int, None)},
        "gamma": {"rho": (float, 0.5), "mu": (float, 0.5), "grid": (int, 19)},
    },
    "ug": {
        "gen": {"n": (int, 3), "d": (int, 1), "r": (int, 1), "walk_time": (float, None),
                "mode": (str, "materialize"), "instance": (str, None)},
        "sdp": {**_TESTER, "probes": (int, 10000)},
        "eval": {"n": (int, 3), "d": (int, 1), "r": (int, 1), "walk_time": (float, None),
                 "mode": (str, "materialize"), "labeling": (str, "constant:0")},
        "bound": {**_TESTER, "kmax": (int, None), "mode": (str, "exact"), "delta": (float, None)},
    },
    "dict": {
        "test": {**_RM, "t": (int, 2), "eps": (float, 0.1), "fn": (str, "dictator:0")},
    },
    "psi": {
        "gen": {**_RM, "t": (int, 2), "eps": (float, 0.1), "outer": (str, "single")},
        "eval": {**_RM, "t": (int, 2), "eps": (float, 0.1), "outer": (str, "single"),
                 "labeling": (str, "dictator:0")},
    },
}

PARAM_DEFAULTS: Dict[Tuple[str, str], Dict[str, Any]] = {
    (comando, accion): {nombre: valor for nombre, (_, valor) in parametros.items()}
    for comando, acciones in ACCIONES.items()
    for accion, parametros in acciones.items()
}

_ENTEROS_NO_NEGATIVOS = ("n", "d", "t", "r", "random", "kmax", "ell", "sets", "sparsity", "probes",
                         "degree", "grid", "block_bits")


class _Parser(argparse.ArgumentParser):
    """argparse que lanza errores del proyecto en lugar de salir"""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        if "invalid choice" in message:
            raise ComandoDesconocido(message)
        raise ConfiguracionInvalida(message)


def _opciones_comunes() -> argparse.ArgumentParser:
    comunes = _Parser(add_help=False)
    comunes.add_argument("--seed", type=int, default=None, help="Semilla (por defecto CORTO_SEED o el JSON)")
    comunes.add_argument("--samples", type=int, default=None)
    comunes.add_argument("--trials", type=int, default=None)
    comunes.add_argument("--workers", type=int, default=None)
    comunes.add_argument("--chunk", type=int, default=None)
    comunes.add_argument("--config", default=None, help="Archivo JSON de configuración")
    comunes.add_argument("--format", default=None, help="json | csv")
    comunes.add_argument("--out", default=None,
                         help="Ruta del reporte; '-' para stdout; 'csv' o 'json' eligen el formato")
    comunes.add_argument("-v", "--verbose", action="store_true")
    comunes.add_argument("-q", "--quiet", action="store_true")
    return comunes


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="codigocorto", description="Códigos cortos de Reed–Muller y brechas de Unique Games")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    comunes = _opciones_comunes()
    comandos = parser.add_subparsers(dest="command", metavar="COMANDO")
    comandos.required = True
    for comando, acciones in ACCIONES.items():
        sub = comandos.add_parser(comando)
        hojas = sub.add_subparsers(dest="action", metavar="ACCION")
        hojas.required = True
        for accion, parametros in acciones.items():
            hoja = hojas.add_parser(accion, parents=[comunes])
            for nombre, (tipo, valor) in parametros.items():
                banderas = (f"--{nombre.replace('_', '-')}", *_ALIAS.get(nombre, ()))
                hoja.add_argument(*banderas, dest=nombre, type=tipo, default=None,
                                  help=f"(por defecto: {valor})")
            hoja.set_defaults(_parametros=tuple(parametros))
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    params = {nombre: getattr(args, nombre) for nombre in args._parametros}
    overrides = {clave: getattr(args, clave)
                 for clave in ("seed", "samples", "trials", "workers", "chunk", "out", "format")}
    if overrides["out"] in FORMATOS and overrides["format"] is None:
        overrides["format"], overrides["out"] = overrides["out"], "-"
    return resolve_config(args.command, args.action, params, overrides, args.config,
                          PARAM_DEFAULTS[(args.command, args.action)])


# --- Piezas comunes ---

def _validar_parametros(p: Dict[str, Any]) -> None:
    for nombre in _ENTEROS_NO_NEGATIVOS:
        valor = p.get(nombre)
        if valor is None:
            continue
        if not isinstance(valor, int) or isinstance(valor, bool) or valor < 0:
            raise PrecondicionError(f"{nombre} debe ser un entero ≥ 0, no {valor!r}")


def _tester(p: Dict[str, Any], config: ExperimentConfig, con_paseo: bool = True) -> CanonicalTester:
    t = rm_tester(p["n"], p["d"], config.enumeration_budget)
    if p.get("r", 1) > 1:
        t = xor_tester(t, p["r"], config.enumeration_budget)
    if con_paseo and p.get("walk_time") is not None:
        t = walk_tester(t, p["walk_time"])
    return t


def _funcion(spec: str, n: int, d: int, seed: int) -> CodeFunction:
    """`dictator:<i>`, `majority`, `random[:<semilla>]`, `const[:<valor>]` o `file:<ruta>`."""
    nombre, _, argumento = spec.partition(":")
    if nombre == "file":
        return load_function(argumento)
    D = build_rm(n, d)
    if nombre == "dictator":
        return dictator_cut(D, int(argumento or 0))
    if nombre == "majority":
        return majority_like(D)
    if nombre == "random":
        return random_dense(D, int(argumento) if argumento else seed)
    if nombre == "const":
        return constant(D, float(argumento) if argumento else 1.0)
    raise PrecondicionError(f"Función desconocida: {spec}")


def _conjuntos(spec: str, cantidad: int, seed: int) -> List[object]:
    nombre, _, argumento = spec.partition(":")
    if nombre == "random":
        return [RandomVertexSet(int(argumento), seed + j) for j in range(cantidad)]
    if nombre == "dictator":
        return [DictatorCut(int(argumento or 0))]
    if nombre == "vertices":
        return [VertexSet(tuple(int(v) for v in argumento.split(",") if v))]
    if nombre == "file":
        with open(argumento, "r", encoding="utf-8") as archivo:
            vertices = tuple(int(linea.split()[0], 0) for linea in archivo if linea.strip())
        return [VertexSet(vertices)]
    raise PrecondicionError(f"Conjunto desconocido: {spec}")


def _exterior(spec: str, n: int) -> OuterInstance:
    """`single`, `pair[:<α>]` o `file:<instancia max2lin>`."""
    nombre, _, argumento = spec.partition(":")
    if nombre == "single":
        return OuterInstance.from_edges(1, [(0, 0, 0)], n)
    if nombre == "pair":
        return OuterInstance.from_edges(2, [(0, 1, int(argumento or 1))], n)
    if nombre == "file":
        return OuterInstance.from_max2lin(argumento)
    raise PrecondicionError(f"Instancia exterior desconocida: {spec}")


# --- Manejadores ---

def _code_info(config: ExperimentConfig) -> Resultado:
    p = config.params
    C = build_rm(p["n"], p["d"])
    resultados = {
        "label": C.label,
        "dim": C.dim,
        "block_len": C.block_len,
        "dual": dual(C).label,
        "min_weight": C.min_distance,
        "min_weight_count": min_weight_count(p["n"], p["d"]) if 1 <= p["d"] < p["n"] else None,
    }
    return resultados, None


def _tester_curve(config: ExperimentConfig) -> Resultado:
    p = config.params
    t = _tester(p, config)
    curva = soundness_curve(t, k_max=p["kmax"], mode=p["mode"], trials=config.trials,
                            samples=config.samples, seed=config.seed, budget=config.table_budget)
    suavidad = smoothness_report(t, None if t.support is not None else config.samples, config.seed)
    puntos = [punto.to_dict() for punto in curva]
    resultados = {
        "params": t.descriptor(),
        "points": puntos,
        "smooth": suavidad.smooth,
        "two_smooth": suavidad.two_smooth,
        "tau": suavidad.tau,
    }
    return resultados, pd.DataFrame(puntos)


def _tester_smooth(config: ExperimentConfig) -> Resultado:
    p = config.params
    t = _tester(p, config)
    reporte = smoothness_report(t, None if t.support is not None else config.samples, config.seed)
    resultados = {"params": t.descriptor(), "smoothness": reporte.to_dict()}
    if reporte.exact:
        resultados["bounds"] = smooth_bounds_report(t, gamma=p["gamma"], budget=config.table_budget)
    return resultados, reporte.singles_frame()


def _spectrum_profile(config: ExperimentConfig) -> Resultado:
    p = config.params
    g = cayley_graph(_tester(p, config, con_paseo=False), p["walk_time"])
    perfil = eigenvalue_profile(g, p["kmax"], budget=config.table_budget)
    dictadores = dictator_profile(g)
    lambdas = [r.lam for r in dictadores.records]
    resultados = {
        "profile": perfil,
        "dictators": {
            "epsilon": dictadores.epsilon,
            "threshold": dictadores.threshold,
            "count_above": dictadores.count_above,
            "half_satisfied": dictadores.half_satisfied,
            "min_lambda": min(lambdas),
            "max_lambda": max(lambdas),
        },
    }
    if p["eps"] is not None:
        resultados["walk_law"] = walk_law_report(g, p["eps"], min(p["kmax"], 3), config.trials, config.seed)
    return resultados, perfil


def _spectrum_expansion(config: ExperimentConfig) -> Resultado:
    p = config.params
    g = cayley_graph(_tester(p, config, con_paseo=False), p["walk_time"])
    s_k = None
    if p["walk_time"] is None:
        perfil = eigenvalue_profile(g, p["kmax"], budget=config.table_budget)
        fila = perfil[perfil["k"] == p["kmax"]]
        s_k = float(fila["s_k"].iloc[0]) if len(fila) else None
    filas = []
    if p["set_file"]:
        conjuntos = _conjuntos(f"file:{p['set_file']}", 1, config.seed)
    elif p["random"] is not None:
        conjuntos = _conjuntos(f"random:{p['random']}", p["sets"], config.seed)
    else:
        conjuntos = _conjuntos(p["set"], p["sets"], config.seed)
    for j, conjunto in enumerate(conjuntos):
        registro = expansion(g, conjunto, budget=config.enumeration_budget, samples=config.samples,
                             seed=config.seed + j, workers=config.workers)
        fila = registro.to_dict()
        fila["hc_sse_bound"] = None if s_k is None else hc_sse_bound(s_k, p["kmax"], registro.mu)
        filas.append(fila)
    tabla = pd.DataFrame(filas)
    return {"s_k": s_k, "k": p["kmax"], "sets": filas}, tabla


def _spectrum_hyper(config: ExperimentConfig) -> Resultado:
    p = config.params
    reporte = hypercontractivity_check(build_rm(p["n"], p["d"]), p["ell"], config.trials,
                                       p["sparsity"], config.seed)
    return reporte.to_dict(), None


def _fourier_influences(config: ExperimentConfig) -> Resultado:
    p = config.params
    f = _funcion(p["fn"], p["n"], p["d"], config.seed)
    tabla = influences(f, p["ell"], budget=config.enumeration_budget)
    resultados = {"function": f.label, "mean": f.mean(), "influences": tabla}
    marco = pd.DataFrame({"coordinate": np.arange(tabla.values.size), "influence": tabla.values})
    return resultados, marco


def _fourier_stability(config: ExperimentConfig) -> Resultado:
    p = config.params
    f = _funcion(p["fn"], p["n"], p["d"], config.seed)
    g = cayley_graph(_tester(p, config, con_paseo=False), p["walk_time"])
    resultados = {"function": f.label, "mean": f.mean(), "stability": noise_stability(f, g)}
    if f.is_dense and f.values.min() >= 0.0 and f.values.max() <= 1.0:
        resultados["majority_is_stablest"] = mis_harness(f, g, p["tau"], p["ell"], p["c"])
    return resultados, None


def _invariance_gap(config: ExperimentConfig) -> Resultado:
    p = config.params
    n_vars = 1 << p["n"]
    if p["poly"]:
        P = MultilinearPoly.from_json(p["poly"], n_vars=n_vars)
    else:
        P = random_regular_poly(n_vars, p["degree"], config.seed)
    distribuciones = [x.strip() for x in p["dists"].split(",") if x.strip()]
    if len(distribuciones) != 2:
        raise PrecondicionError(f"Se esperan dos distribuciones, no {p['dists']!r}")
    brecha = invariance_gap(P, p["psi"], distribuciones[0], distribuciones[1], p["n"], p["d"],
                            config.samples, config.seed, config.workers, config.chunk)
    resultados = {"gap": brecha, "regularity": regularity(P), "degree": P.degree, "norm2": P.norm2}
    if p["slack"] is not None:
        resultados["transfer"] = bounded_distance_transfer(P, p["n"], p["d"], config.samples, config.seed,
                                                           p["slack"], config.workers, config.chunk)
    return resultados, None


def _invariance_mz(config: ExperimentConfig) -> Resultado:
    p = config.params
    reporte = mz_uniformity_check(p["n"], p["d"], p["block_bits"], config.samples, config.seed)
    return reporte.to_dict(), None


def _invariance_gamma(config: ExperimentConfig) -> Resultado:
    p = config.params
    rho, mu = p["rho"], p["mu"]
    resultados = {"rho": rho, "mu": mu, "gamma": gamma_rho(rho, mu)}
    if mu == 0.5:
        resultados["closed_form"] = 0.25 + math.asin(rho) / (2.0 * math.pi)
    malla = np.linspace(0.0, 1.0, p["grid"] + 2)[1:-1]
    tabla = pd.DataFrame({"mu": malla, "gamma": [gamma_rho(rho, float(m)) for m in malla]})
    return resultados, tabla


def _ug_gen(config: ExperimentConfig) -> Resultado:
    p = config.params
    inst = build_gamma_instance(p["n"], p["d"], _tester(p, config), p["mode"],
                                config.materialize_budget, config.seed)
    resultados = {"descriptor": inst.descriptor, "vars": inst.num_vars,
                  "alphabet": inst.alphabet_size, "materialized": inst.materialized}
    if inst.materialized:
        resultados["constraints"] = int(len(inst.constraints))
        resultados["total"] = inst.total
        if p["instance"]:
            write_max2lin(inst, p["instance"])
            resultados["instance"] = p["instance"]
        return resultados, inst.constraints
    return resultados, None


def _ug_sdp(config: ExperimentConfig) -> Resultado:
    p = config.params
    t = _tester(p, config)
    valor = sdp_value(t, config.samples, config.seed, config.workers)
    factibilidad = sdp_feasibility_check(implicit_sdp(p["n"], p["d"]), p["probes"], config.seed)
    return {"sdp": valor, "feasibility": factibilidad}, None


def _ug_eval(config: ExperimentConfig) -> Resultado:
    p = config.params
    inst = build_gamma_instance(p["n"], p["d"], _tester(p, config), p["mode"],
                                config.materialize_budget, config.seed)
    nombre, _, argumento = p["labeling"].partition(":")
    if nombre == "best":
        valor, etiquetado = best_folded_labeling(inst, config.enumeration_budget)
    else:
        if nombre == "constant":
            etiquetado = ConstantLabeling(int(argumento or 0))
        elif nombre == "random":
            etiquetado = RandomLabeling(inst.group_bits, int(argumento) if argumento else config.seed)
        else:
            raise PrecondicionError(f"Etiquetado desconocido: {p['labeling']}")
        muestras = None if inst.materialized else config.samples
        valor = evaluate_labeling(inst, etiquetado, muestras, config.seed, config.workers, config.chunk)
    resultados = {"labeling": etiquetado.descriptor(), "value": valor,
                  "one_over_R": 1.0 / inst.alphabet_size}
    return resultados, None


def _ug_bound(config: ExperimentConfig) -> Resultado:
    p = config.params
    n, d = p["n"], p["d"]
    distancia = 1 << (d + 1)
    k_max = distancia // 5 if p["kmax"] is None else p["kmax"]
    if p["mode"] == "formula":
        curva = xor_curve_formula(d, p["r"], k_max)
    else:
        curva = soundness_curve(_tester(p, config), k_max=k_max, mode=p["mode"], trials=config.trials,
                                samples=config.samples, seed=config.seed, budget=config.table_budget)
    cota = soundness_bound(curva, 1 << n, distancia)
    resultados = {"bound": cota, "curve": [punto.to_dict() for punto in curva]}
    if p["delta"] is not None:
        resultados["corollary"] = corollary_parameters(n, p["delta"])
    return resultados, cota.table


def _dict_test(config: ExperimentConfig) -> Resultado:
    p = config.params
    D = build_rm(p["n"], p["d"])
    f = folded_function(p["fn"], D, p["t"], config.seed)
    Q = 1 << p["t"]
    aceptacion = dict_test(f, p["n"], p["d"], p["t"], p["eps"], config.samples, config.seed,
                           config.workers)
    resultados = {
        "function": f.descriptor(),
        "acceptance": aceptacion,
        "folded": check_folding(f, seed=config.seed),
        "completeness_target": 1.0 - 4.0 * p["eps"],
        "soundness_reference": Q * gamma_rho(math.exp(-p["eps"]), 1.0 / Q),
    }
    return resultados, None


def _psi_instancia(config: ExperimentConfig):
    p = config.params
    exterior = _exterior(p["outer"], p["n"])
    return build_psi_instance(exterior, p["n"], p["d"], p["t"], p["eps"], "sampler", config.seed)


def _psi_gen(config: ExperimentConfig) -> Resultado:
    return {"descriptor": _psi_instancia(config).descriptor}, None


def _psi_eval(config: ExperimentConfig) -> Resultado:
    p = config.params
    inst = _psi_instancia(config)
    nombre, _, argumento = p["labeling"].partition(":")
    if nombre == "dictator":
        beta = int(argumento or 0)
        etiquetado = TranslatedDictatorLabeling(inst.code, {v: beta for v in range(inst.outer.num_vertices)})
    elif nombre == "random":
        etiquetado = RandomFoldedLabeling(inst.code, p["t"], int(argumento) if argumento else config.seed)
    else:
        raise PrecondicionError(f"Etiquetado desconocido: {p['labeling']}")
    valor = evaluate_psi(inst, etiquetado, config.samples, config.seed, config.workers)
    return {"descriptor": inst.descriptor, "labeling": p["labeling"], "value": valor}, None


_MANEJADORES: Dict[Tuple[str, str], Callable[[ExperimentConfig], Resultado]] = {
    ("code", "info"): _code_info,
    ("tester", "curve"): _tester_curve,
    ("tester", "smooth"): _tester_smooth,
    ("spectrum", "profile"): _spectrum_profile,
    ("spectrum", "expansion"): _spectrum_expansion,
    ("spectrum", "hyper"): _spectrum_hyper,
    ("fourier", "influences"): _fourier_influences,
    ("fourier", "stability"): _fourier_stability,
    ("invariance", "gap"): _invariance_gap,
    ("invariance", "mz-check"): _invariance_mz,
    ("invariance", "gamma"): _invariance_gamma,
    ("ug", "gen"): _ug_gen,
    ("ug", "sdp"): _ug_sdp,
    ("ug", "eval"): _ug_eval,
    ("ug", "bound"): _ug_bound,
    ("dict", "test"): _dict_test,
    ("psi", "gen"): _psi_gen,
    ("psi", "eval"): _psi_eval,
}


def run(config: ExperimentConfig) -> Report:
    """Despacha la acción pedida y arma el reporte (sin escribirlo)."""
    manejador = _MANEJADORES.get((config.command, config.action))
    if manejador is None:
        raise ComandoDesconocido(f"Comando desconocido: {config.command} {config.action or ''}".strip())
    _validar_parametros(config.params)
    logger.info(f"🚀 Ejecutando {config.command} {config.action} (semilla {config.seed})")
    inicio = time.perf_counter()
    resultados, tabla = manejador(config)
    return Report(config, resultados, time.perf_counter() - inicio, tabla)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ErrorCodigoCorto as exc:
        logging.basicConfig(level=logging.WARNING, format='%(asctime)s - %(levelname)s - %(message)s')
        logger.error(f"❌ {exc}")
        return exc.codigo_salida

    nivel = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=nivel, format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        config = config_from_args(args)
        reporte = run(config)
        write_report(reporte, config.out, config.format)
    except ErrorCodigoCorto as exc:
        logger.error(f"❌ {exc}")
        return exc.codigo_salida
    except (OSError, ValueError) as exc:
        logger.error(f"❌ Entrada inválida: {exc}")
        return ConfiguracionInvalida.codigo_salida
    logger.info(f"✅ Listo en {reporte.wall_clock_s:.3f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
