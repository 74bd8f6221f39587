"""Regenerate the canonical .pdl fixtures under protocols/."""

from pathlib import Path

from gnpb import pdl
from gnpb.protocols import BUILTIN_PROTOCOLS, get_protocol

out_dir = Path(__file__).resolve().parent.parent / "protocols"
out_dir.mkdir(exist_ok=True)
for name in BUILTIN_PROTOCOLS:
    path = out_dir / f"{name}.pdl"
    path.write_text(pdl.serialize(get_protocol(name)))
    print(f"wrote {path}")
