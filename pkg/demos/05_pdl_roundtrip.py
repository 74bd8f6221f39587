"""The protocol description language: serialize, inspect, parse, verify.

Every built-in protocol ships as a .pdl fixture under protocols/; this
demo shows the text form is a faithful, reviewable encoding.
"""

from gnpb import pdl
from gnpb.protocols import NamedProtocol, get_protocol

proto = get_protocol("prop5_II33")
text = pdl.serialize(proto)

print("=== head of the serialized protocol ===")
print("\n".join(text.splitlines()[:24]))
print("...")

doc = pdl.parse(text)
print()
print(f"parse(serialize(p)).root == p.root: {doc.root == proto.root}")

reparsed = NamedProtocol("reparsed", doc.basis, (), doc.root)
print(f"re-serialization is a fixpoint:     {pdl.serialize(reparsed) == text}")
report = reparsed.verify()
print(f"parsed tree verifies:               {report.ok}")

print()
print("=== a parse error carries its source position ===")
broken = text.replace("outcomes", "outcome", 1)
try:
    pdl.parse(broken)
except pdl.PdlError as err:
    print(f"PdlError: {err}")
