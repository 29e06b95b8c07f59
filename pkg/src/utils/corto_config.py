"""
⚙️ codigocorto - Configuración de experimentos
==============================================

Orden de resolución: valores internos < src/data/configuracion_predeterminada.json
< archivo --config < banderas explícitas. CORTO_SEED da la semilla por
defecto cuando no se pasa --seed.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional

from core.corto_errores import ConfiguracionInvalida

logger = logging.getLogger(__name__)

VERSION = "1.0.0"
RUTA_PREDETERMINADA = Path(__file__).resolve().parent.parent / "data" / "configuracion_predeterminada.json"
VARIABLE_SEMILLA = "CORTO_SEED"

VALORES_INTERNOS: Dict[str, Any] = {
    "seed": 0,
    "samples": 100000,
    "trials": 32,
    "workers": 1,
    "chunk": 1 << 14,
    "enumeration_budget": 1 << 20,
    "materialize_budget": 1 << 22,
    "table_budget": 1 << 20,
    "dense_budget_dim": 24,
    "leader_chunk": 1 << 16,
}

FORMATOS = ("json", "csv")


@dataclass
class ExperimentConfig:
    """Configuración completa y resuelta de una ejecución"""

    command: str
    action: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    samples: int = 100000
    trials: int = 32
    workers: int = 1
    chunk: int = 1 << 14
    enumeration_budget: int = 1 << 20
    materialize_budget: int = 1 << 22
    table_budget: int = 1 << 20
    dense_budget_dim: int = 24
    leader_chunk: int = 1 << 16
    out: str = "-"
    format: str = "json"

    def validate(self) -> "ExperimentConfig":
        for nombre in ("samples", "trials", "workers", "chunk", "enumeration_budget",
                       "materialize_budget", "table_budget", "dense_budget_dim", "leader_chunk"):
            valor = getattr(self, nombre)
            if not isinstance(valor, int) or isinstance(valor, bool) or valor <= 0:
                raise ConfiguracionInvalida(f"{nombre} debe ser un entero positivo, no {valor!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfiguracionInvalida(f"La semilla debe ser un entero ≥ 0, no {self.seed!r}")
        if self.format not in FORMATOS:
            raise ConfiguracionInvalida(f"Formato desconocido: {self.format}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Eco completo de la configuración resuelta."""
        datos = asdict(self)
        datos["params"] = {k: v for k, v in sorted(self.params.items())}
        return datos


def _leer_json(ruta: Path, obligatorio: bool) -> Dict[str, Any]:
    try:
        with open(ruta, "r", encoding="utf-8") as archivo:
            datos = json.load(archivo)
    except FileNotFoundError:
        if obligatorio:
            raise ConfiguracionInvalida(f"No existe el archivo de configuración {ruta}")
        logger.warning(f"⚠️ Archivo {ruta} no encontrado, usando valores internos")
        return {}
    except json.JSONDecodeError as exc:
        raise ConfiguracionInvalida(f"JSON inválido en {ruta}: {exc}") from exc
    if not isinstance(datos, dict):
        raise ConfiguracionInvalida(f"{ruta} debe contener un objeto JSON")
    return datos


def load_defaults(ruta: Optional[Path] = None) -> Dict[str, Any]:
    valores = dict(VALORES_INTERNOS)
    valores.update(_leer_json(ruta or RUTA_PREDETERMINADA, obligatorio=False))
    return valores


def resolve_config(command: str, action: Optional[str], params: Dict[str, Any],
                   overrides: Dict[str, Any], config_file: Optional[str] = None,
                   param_defaults: Optional[Dict[str, Any]] = None,
                   defaults_path: Optional[Path] = None) -> ExperimentConfig:
    """Combina las capas de configuración; las banderas ausentes llegan como None."""
    valores = load_defaults(defaults_path)
    if VARIABLE_SEMILLA in os.environ:
        try:
            valores["seed"] = int(os.environ[VARIABLE_SEMILLA])
        except ValueError as exc:
            raise ConfiguracionInvalida(f"{VARIABLE_SEMILLA} no es un entero") from exc
    parametros = dict(param_defaults or {})
    if config_file:
        archivo = _leer_json(Path(config_file), obligatorio=True)
        parametros.update(archivo.pop("params", {}))
        for clave in ("command", "action"):
            archivo.pop(clave, None)
        valores.update(archivo)
    parametros.update({k: v for k, v in params.items() if v is not None})
    valores.update({k: v for k, v in overrides.items() if v is not None})

    conocidos = {f.name for f in fields(ExperimentConfig)} - {"command", "action", "params"}
    desconocidos = set(valores) - conocidos
    if desconocidos:
        raise ConfiguracionInvalida(f"Claves de configuración desconocidas: {sorted(desconocidos)}")
    return ExperimentConfig(command=command, action=action, params=parametros, **valores).validate()
