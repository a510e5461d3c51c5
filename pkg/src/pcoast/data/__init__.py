"""Bundled input files (H2 Hamiltonian terms and example Pauli sets)."""
from importlib.resources import files


def data_path(name: str):
    """Traversable path of a bundled data file."""
    return files(__name__) / name


def read_data(name: str) -> str:
    return data_path(name).read_text()
