import sys
from pathlib import Path

# make the top-level plot_figure.py script importable from the tests
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
