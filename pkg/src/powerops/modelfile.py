"""Model files: JSON with exact integers stored as strings."""

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import ModelError
from .power_ops import WData, derive_psi_h, load_psi
from .rings import HRing, HSeries

SCHEMA = "powerops-model/1"
BUILTIN = {"c4_p5": "c4_p5.json", "p2_n3": "p2_n3.json"}


def _poly_to_pairs(x):
    return [[k, str(c)] for k, c in enumerate(x.coefficients()) if c]


def _pairs_to_poly(ring, pairs):
    try:
        coeffs = {}
        for k, c in pairs:
            if not isinstance(k, int) or k < 0:
                raise ValueError(f"bad exponent {k!r}")
            coeffs[k] = coeffs.get(k, 0) + Fraction(c)
    except (TypeError, ValueError) as exc:
        raise ModelError(f"malformed coefficient list {pairs!r}: {exc}") from None
    top = max(coeffs, default=-1)
    return HSeries(ring, [coeffs.get(k, 0) for k in range(top + 1)])


def model_to_dict(data, include_psi=None):
    model = data.model if hasattr(data, "model") else data
    out = {
        "schema": SCHEMA,
        "p": model.p,
        "N": model.level,
        "d": model.d,
        "w": [_poly_to_pairs(c) for c in model.w],
        "provenance": model.provenance,
    }
    if include_psi is None:
        include_psi = hasattr(data, "derived") and not data.derived
    if include_psi:
        out["psi_h"] = [_poly_to_pairs(c) for c in data.psi_h.coords]
    return out


def dumps(data, include_psi=None):
    """One coefficient polynomial per line, so diffs stay readable."""
    d = model_to_dict(data, include_psi)
    lines = ["{"]
    for key, value in d.items():
        if key in ("w", "psi_h"):
            inner = ",\n".join("    " + json.dumps(v) for v in value)
            lines.append(f'  "{key}": [\n{inner}\n  ],')
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value)},")
    lines[-1] = lines[-1].rstrip(",")
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads(text, M=12):
    """Parse, validate and return PsiData (psi(h) derived or checked)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file is not valid JSON: {exc}") from None
    if raw.get("schema") != SCHEMA:
        raise ModelError(f"unsupported schema {raw.get('schema')!r}; expected {SCHEMA}")
    for key in ("p", "N", "w"):
        if key not in raw:
            raise ModelError(f"model file lacks field {key!r}")
    p = raw["p"]
    ring = HRing(p, None, M)
    w = [_pairs_to_poly(ring, pairs) for pairs in raw["w"]]
    model = WData(p, raw["N"], w, d=raw.get("d", 1), provenance=raw.get("provenance", ""), M=M)
    if "psi_h" in raw:
        coords = [_pairs_to_poly(model.ring, pairs) for pairs in raw["psi_h"]]
        if len(coords) > p + 1:
            raise ModelError("psi_h has more than p + 1 coordinates")
        return load_psi(model, coords)
    return derive_psi_h(model)


def load(path, M=12):
    if str(path) in BUILTIN:
        return load_builtin(str(path), M)
    return loads(Path(path).read_text(), M)


def load_builtin(name="c4_p5", M=12):
    text = resources.files("powerops").joinpath("data").joinpath(BUILTIN[name]).read_text()
    return loads(text, M)


def save(data, path, include_psi=None):
    Path(path).write_text(dumps(data, include_psi))
