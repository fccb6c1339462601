"""PLB/CLB area and delay arithmetic from an editable constants file.

The arch file is line-oriented `key = value`; shared keys apply to every
cell variant and dotted keys (`mux_tree_area.lut5`) to one variant.
Unknown keys are rejected.  Areas are um^2, delays ps.
"""

from dataclasses import dataclass

from .errors import ParseError, UsageError

SHARED_KEYS = ("per_sram_area", "plb_per_clb", "ff_area", "out_mux_area", "carry_area", "pinv_delay")
VARIANT_KEYS = ("num_sram", "mux_tree_area", "input_buffer_area", "other_buffer_area", "crossbar_area", "delay")


@dataclass(frozen=True)
class ArchModel:
    name: str
    num_sram: int
    per_sram_area: float
    mux_tree_area: float
    input_buffer_area: float
    other_buffer_area: float
    ff_area: float
    crossbar_area: float
    out_mux_area: float
    carry_area: float
    plb_per_clb: int
    per_input_delay: tuple
    pinv_delay: float

    def __post_init__(self):
        numbers = (
            self.num_sram, self.per_sram_area, self.mux_tree_area, self.input_buffer_area,
            self.other_buffer_area, self.ff_area, self.crossbar_area, self.out_mux_area,
            self.carry_area, self.plb_per_clb, self.pinv_delay,
        ) + tuple(self.per_input_delay)
        if any(x < 0 for x in numbers):
            raise UsageError("arch model %r has a negative constant" % self.name)


def plb_area(m, num_sram=None):
    """SRAM + MUX tree + input buffers + other buffers, in um^2."""
    bits = m.num_sram if num_sram is None else num_sram
    if bits < 0:
        raise UsageError("negative SRAM bit count %r" % bits)
    return bits * m.per_sram_area + m.mux_tree_area + m.input_buffer_area + m.other_buffer_area


def clb_area(m, plb=None):
    """Cluster area: PLBs plus flip-flops, crossbar, output muxes and carry."""
    if plb is None:
        plb = plb_area(m)
    return m.plb_per_clb * plb + m.ff_area + m.crossbar_area + m.out_mux_area + m.carry_area


def avg_delay(m, with_pinv=False):
    """Mean of the per-input delays; with_pinv adds the inverter on every input."""
    if not m.per_input_delay:
        raise UsageError("arch model %r has no per-input delays" % m.name)
    mean = sum(m.per_input_delay) / len(m.per_input_delay)
    return mean + (m.pinv_delay if with_pinv else 0.0)


def pinv_extended_delays(lut_delays, pinv_delay):
    """Per-input delays of a PINV-fronted cell, rounded to whole picoseconds."""
    return tuple(round(d + pinv_delay) for d in lut_delays)


def parse_arch(text):
    """Parse an arch constants file into {variant name: ArchModel}."""
    shared = {}
    variants = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value', got %r" % raw.strip(), i)
        key, _, value = (part.strip() for part in line.partition("="))
        if key in SHARED_KEYS:
            try:
                shared[key] = float(value)
            except ValueError:
                raise ParseError("bad number %r for %s" % (value, key), i) from None
            continue
        name, dot, variant = key.partition(".")
        if not dot or name not in VARIANT_KEYS:
            raise ParseError("unknown key %r" % key, i)
        slot = variants.setdefault(variant, {})
        if name == "delay":
            try:
                slot[name] = tuple(float(x) for x in value.split(","))
            except ValueError:
                raise ParseError("bad delay list %r" % value, i) from None
        else:
            try:
                slot[name] = float(value)
            except ValueError:
                raise ParseError("bad number %r for %s" % (value, key), i) from None
    missing = [k for k in SHARED_KEYS if k not in shared]
    if missing:
        raise ParseError("missing shared keys: %s" % ", ".join(missing))
    models = {}
    for name, slot in variants.items():
        lacking = [k for k in VARIANT_KEYS if k not in slot]
        if lacking:
            raise ParseError("variant %r missing keys: %s" % (name, ", ".join(lacking)))
        models[name] = ArchModel(
            name=name,
            num_sram=int(slot["num_sram"]),
            per_sram_area=shared["per_sram_area"],
            mux_tree_area=slot["mux_tree_area"],
            input_buffer_area=slot["input_buffer_area"],
            other_buffer_area=slot["other_buffer_area"],
            ff_area=shared["ff_area"],
            crossbar_area=slot["crossbar_area"],
            out_mux_area=shared["out_mux_area"],
            carry_area=shared["carry_area"],
            plb_per_clb=int(shared["plb_per_clb"]),
            per_input_delay=slot["delay"],
            pinv_delay=shared["pinv_delay"],
        )
    return models


def load_arch(path):
    with open(path, "r", encoding="ascii") as handle:
        return parse_arch(handle.read())


def default_arch():
    """Bundled 22nm constants (COFFE-style LUT5/DSLUT6/LUT6 models)."""
    from importlib import resources

    text = resources.files("dslut.data").joinpath("arch/coffe22.arch").read_text("ascii")
    return parse_arch(text)
