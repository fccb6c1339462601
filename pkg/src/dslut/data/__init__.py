"""Access to bundled sample data: netlists, arch constants, bit assignments."""

from importlib import resources


def _root():
    return resources.files(__name__)


def path(relative):
    """Filesystem path of a bundled data file, e.g. 'netlists/add4.aag'."""
    return str(_root().joinpath(relative))


def netlist_paths():
    """Paths of the bundled sample netlists, sorted by name."""
    folder = _root().joinpath("netlists")
    return sorted(str(p) for p in folder.iterdir() if p.name.endswith(".aag"))


def arch_path():
    return path("arch/coffe22.arch")
