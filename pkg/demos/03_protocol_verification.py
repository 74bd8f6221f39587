"""Machine-verify the entanglement-assisted discrimination protocols.

Verification pushes all basis states through the measurement tree at once
and checks completeness, projectivity, locality, stepwise orthogonality
preservation, and that every state ends up identified with certainty.
"""

from gnpb import engine
from gnpb.bases import get_basis
from gnpb.protocols import BUILTIN_PROTOCOLS, get_protocol

print("=== all built-in protocols ===")
for name in BUILTIN_PROTOCOLS:
    proto = get_protocol(name)
    rep = proto.verify()
    assert rep.ok
    total = rep.ledger.total_ebits
    ghz = rep.ledger.ghz_count
    extras = f" + {ghz:g} GHZ" if ghz else ""
    print(f"{name:12s} on {proto.basis_name:10s}: PASS   "
          f"{rep.n_measurements:3d} measurements, {rep.n_leaves:3d} leaves, "
          f"{total:.6f} ebits{extras}")

print()
print("=== what verification catches: a protocol on the wrong basis ===")
rep = engine.verify_protocol(get_protocol("prop6").root, get_basis("B_IIb_33"),
                             "prop6-vs-IIb")
print(f"prop6 against B_IIb_33: {'PASS' if rep.ok else 'FAIL'}")
for f in rep.failures[:3]:
    print(f"  {f['node']}: {f['kind']}: {f['detail']}")
print("  ...")

print()
print("=== a leaf strategy, spelled out ===")
rep = get_protocol("prop6").verify()
path, labels, strategy = next(
    (p, l, s) for p, l, s in rep.leaf_strategies if p.endswith("/K1"))
print(f"survivors at {path}: {', '.join(labels)}")
print(strategy.text())
