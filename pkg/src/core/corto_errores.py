"""
Errores de codigocorto.

Cada excepción hereda también de la excepción estándar más cercana, así el
código que ya atrapa ValueError / RuntimeError / LookupError sigue
funcionando. La CLI traduce cada clase a un código de salida.
"""


class ErrorCodigoCorto(Exception):
    """Base de todos los errores del proyecto"""

    codigo_salida = 1


class PrecondicionError(ErrorCodigoCorto, ValueError):
    """Un parámetro viola la precondición de la operación"""

    codigo_salida = 2


class PresupuestoExcedido(ErrorCodigoCorto, RuntimeError):
    """Una enumeración o materialización supera el presupuesto configurado"""

    codigo_salida = 3


class NoEncontrado(ErrorCodigoCorto, LookupError):
    """La búsqueda exhaustiva terminó sin encontrar representante"""

    codigo_salida = 3


class ComandoDesconocido(ErrorCodigoCorto, LookupError):
    codigo_salida = 64


class ConfiguracionInvalida(ErrorCodigoCorto, ValueError):
    """Archivo de configuración o argumentos mal formados"""

    codigo_salida = 65
