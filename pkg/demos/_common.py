"""Shared bits for the demo scripts: output folder and optional plotting."""

import os

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")


def pyplot():
    """``matplotlib.pyplot`` with a file backend, or None when it is not installed."""
    try:
        import matplotlib
    except ImportError:
        print("matplotlib not installed; skipping figures")
        return None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(OUT, exist_ok=True)
    return plt


def save(fig, name):
    path = os.path.join(OUT, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print("wrote", path)
