"""
🧮 Punto de entrada de codigocorto desde la raíz del repositorio

Uso:
    python ejecutar_experimento.py code info --n 5 --d 2
    python ejecutar_experimento.py tester curve --n 5 --d 2 --kmax 2 --out reportes/curva.json
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / "src"))

from utils.corto_cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
