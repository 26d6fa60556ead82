"""Problem families and their instance files.

Instance files carry no family tag; the family comes from the file suffix
(``.bkp``, ``.bcp``, ``.msmp``) unless given explicitly.
"""

from __future__ import annotations

from pathlib import Path

from ixs.adapters.bcp import BcpAdapter, BcpInstance, format_bcp, parse_bcp
from ixs.adapters.bkp import BkpAdapter, BkpInstance, format_bkp, parse_bkp
from ixs.adapters.msmp import MsmpAdapter, MsmpInstance, format_msmp, parse_msmp

FAMILIES = ("bkp", "bcp", "msmp")

_PARSERS = {"bkp": parse_bkp, "bcp": parse_bcp, "msmp": parse_msmp}
_ADAPTERS = {BkpInstance: BkpAdapter, BcpInstance: BcpAdapter, MsmpInstance: MsmpAdapter}
_FORMATTERS = {BkpInstance: format_bkp, BcpInstance: format_bcp, MsmpInstance: format_msmp}


def family_of(path, family: str | None = None) -> str:
    family = family or Path(path).suffix.lstrip(".").lower()
    if family not in FAMILIES:
        raise ValueError(f"cannot tell the problem family of {path}; pass one of {FAMILIES}")
    return family


def read_instance(path, family: str | None = None):
    family = family_of(path, family)
    return _PARSERS[family](Path(path).read_text(encoding="utf-8"))


def write_instance(inst, path) -> None:
    Path(path).write_text(_FORMATTERS[type(inst)](inst), encoding="utf-8")


def make_adapter(inst):
    return _ADAPTERS[type(inst)](inst)


def load_adapter(path, family: str | None = None):
    return make_adapter(read_instance(path, family))
