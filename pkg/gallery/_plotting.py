"""Optional matplotlib helper shared by the gallery scripts."""
from pathlib import Path

OUT = Path(__file__).with_name("output")


def pyplot():
    """Return pyplot with a file-only backend, or None when matplotlib is absent."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return None
    OUT.mkdir(exist_ok=True)
    return plt
