"""The command-line interface on the bundled thin-versus-thick configuration.

Equivalent shell session:

    casimirlab compare --config demos/configs/thin_vs_thick.json --out ratio.csv
    casimirlab synth   --config synth.json --out sweeps.csv --seed 7
    casimirlab analyze --config synth.json --data sweeps.csv --out result.json
"""

import json
import tempfile
from pathlib import Path

from casimirlab.cli import main

here = Path(__file__).parent
with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    main(["compare", "--config", str(here / "configs" / "thin_vs_thick.json"),
          "--out", str(tmp / "ratio.csv"), "--svg", str(tmp / "ratio.svg")])
    print("thin/thick force ratio:")
    print((tmp / "ratio.csv").read_text())

    synth = {
        "synth": {"plan": {"d_pz_m": {"start_m": 1.5e-7, "stop_m": 4e-7, "num": 6}},
                  "force_law": {"type": "ideal_metal"}},
        "analyze": {"radius_m": 1e-4},
    }
    cfg = tmp / "synth.json"
    cfg.write_text(json.dumps(synth))
    main(["synth", "--config", str(cfg), "--out", str(tmp / "sweeps.csv"), "--seed", "7"])
    main(["analyze", "--config", str(cfg), "--data", str(tmp / "sweeps.csv"),
          "--out", str(tmp / "result.json")])
    result = json.loads((tmp / "result.json").read_text())
    print(f"recovered d0 = {result['d0_m'] * 1e9:.2f} +- {result['d0_err_m'] * 1e9:.2f} nm")
