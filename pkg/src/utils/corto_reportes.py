"""
📄 codigocorto - Reportes JSON / CSV
====================================

JSON es la salida canónica (claves ordenadas, sin dependencias de memoria);
CSV es una proyección tabular de los resultados.
"""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from .corto_config import VERSION, ExperimentConfig

logger = logging.getLogger(__name__)


def _a_json(valor: Any) -> Any:
    if isinstance(valor, np.integer):
        return int(valor)
    if isinstance(valor, np.floating):
        return float(valor)
    if isinstance(valor, np.bool_):
        return bool(valor)
    if isinstance(valor, np.ndarray):
        return valor.tolist()
    if isinstance(valor, Fraction):
        return str(valor)
    if isinstance(valor, pd.DataFrame):
        return valor.to_dict(orient="records")
    if hasattr(valor, "to_dict"):
        return valor.to_dict()
    raise TypeError(f"No se puede serializar {type(valor).__name__}")


def canonical_json(datos: Any) -> str:
    return json.dumps(datos, sort_keys=True, ensure_ascii=False, indent=2, default=_a_json)


@dataclass
class Report:
    """Eco de la configuración, resultados, versión y tiempo de reloj"""

    config: ExperimentConfig
    results: Dict[str, Any]
    wall_clock_s: float = 0.0
    table: Optional[pd.DataFrame] = None
    version: str = VERSION

    def payload(self) -> str:
        """Resultados serializados: idénticos para la misma configuración y semilla."""
        return canonical_json(self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "results": json.loads(self.payload()),
            "version": self.version,
            "wall_clock_s": round(self.wall_clock_s, 6),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_csv(self) -> str:
        tabla = self.table
        if tabla is None:
            tabla = pd.json_normalize(json.loads(self.payload()))
        return tabla.to_csv(index=False)


def write_report(report: Report, out: str = "-", fmt: str = "json") -> None:
    texto = report.to_csv() if fmt == "csv" else report.to_json() + "\n"
    if out == "-":
        sys.stdout.write(texto)
        sys.stdout.flush()
        return
    ruta = Path(out)
    ruta.parent.mkdir(parents=True, exist_ok=True)
    ruta.write_text(texto, encoding="utf-8")
    logger.info(f"💾 Reporte guardado en: {ruta}")
