"""Regenerate the bundled desk instance (small SNDlib-format network + 48 demand files).

    python scripts/make_desk_instance.py src/rncep/data/desk
"""

import sys
from pathlib import Path

import numpy as np

NODES = {
    "Kiel": (10.13, 54.32),
    "Hamburg": (10.02, 53.55),
    "Berlin": (13.40, 52.52),
    "Leipzig": (12.37, 51.34),
    "Munich": (11.58, 48.14),
}
# id, a, b, base capacity, module capacity, module cost
LINKS = [
    ("L1", "Kiel", "Hamburg", 2.0, 10.0, 12.0),
    ("L2", "Hamburg", "Berlin", 3.0, 10.0, 25.0),
    ("L3", "Hamburg", "Leipzig", 1.0, 10.0, 31.0),
    ("L4", "Berlin", "Leipzig", 2.0, 10.0, 15.0),
    ("L5", "Leipzig", "Munich", 2.0, 10.0, 36.0),
    ("L6", "Berlin", "Munich", 0.0, 10.0, 52.0),
    ("L7", "Hamburg", "Munich", 1.0, 10.0, 70.0),
]
# source, target, base level, zero probability
DEMANDS = [
    ("Hamburg", "Munich", 4.0, 0.0),
    ("Berlin", "Kiel", 2.5, 0.0),
    ("Kiel", "Leipzig", 1.5, 0.15),
    ("Munich", "Berlin", 3.0, 0.0),
    ("Leipzig", "Hamburg", 0.8, 0.3),
    ("Berlin", "Hamburg", 0.3, 0.5),
]


def network_text() -> str:
    out = ["?SNDlib native format; type: network; version: 1.0", "# network desk5", "",
           "NODES ("]
    out += [f"  {n} ( {x:.2f} {y:.2f} )" for n, (x, y) in NODES.items()]
    out += [")", "", "LINKS ("]
    out += [f"  {i} ( {a} {b} ) {u:.2f} 0.00 0.00 0.00 ( {mc:.2f} {mk:.2f} )" for i, a, b, u, mc, mk in LINKS]
    out += [")", ""]
    return "\n".join(out)


def main(dest: str) -> None:
    dest = Path(dest)
    (dest / "scenarios").mkdir(parents=True, exist_ok=True)
    (dest / "network.txt").write_text(network_text())
    rng = np.random.Generator(np.random.PCG64(20181))
    for step in range(48):
        hour = step / 2
        profile = 1.0 + 0.6 * np.sin((hour - 9.0) / 24.0 * 2 * np.pi)
        lines = ["?SNDlib native format; type: demands; version: 1.0",
                 f"# network desk5-30min-{step:02d}", "", "DEMANDS ("]
        for s, t, base, p0 in DEMANDS:
            if rng.uniform() < p0:
                val = 0.0
            else:
                val = base * profile * rng.lognormal(0.0, 0.25)
            lines.append(f"  {s}_{t} ( {s} {t} ) 1 {val:.6f} UNLIMITED")
        lines += [")", ""]
        (dest / "scenarios" / f"demand-{step // 2:02d}{30 * (step % 2):02d}.txt").write_text("\n".join(lines))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/rncep/data/desk")
