"""Command-line front end.

    qpe pea {qft|ipea|kitaev|ag}       phase estimation runs (JSON)
    qpe bench {run|sweep|budget}       benchmark circuits (CSV / JSON)
    qpe crypto {auth|auth-attack|stego|superdense}
    qpe align {bb|rg}
    qpe decomp {euler|abc|power}
    qpe demo {order|energy|grover|trotter}

Every command accepts --seed (fallback: $QPE_SEED, then 0), --config FILE
(a flat JSON object; flags win) and --out PATH.  Exit status: 0 success,
2 invalid input, 1 runtime failure.
"""
import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__, qbench, qcrypto, qdecomp, qmath
from . import rng as qrng
from .errors import QpeError, ValidationError
from .qcircuit import build_grover_iteration, gate
from .qnoise import NoiseModel
from .qpea import (PhaseProblem, abrams_lloyd_energy, aspuru_guzik, bb_alignment, ipea,
                   kitaev_pea, order_finding_demo, qft_pea_result, rg_theta_bit,
                   trotter_error, uniform_plan)

# option name -> (type, default); shared by flags and config files
OPTIONS = {
    "phi": (float, None), "m": (int, None), "shots": (int, None), "trials": (int, None),
    "eps": (float, 0.05), "mode": (str, "sample"), "ancilla_bits": (int, 4),
    "id": (str, "I_xx_cnots"), "alpha": (float, None), "gamma_t": (float, None),
    "noise": (str, None), "delta_all": (float, None), "delta_Rz": (float, None),
    "delta_Rx": (float, None), "delta_coupling": (float, None), "sigma_x": (float, None),
    "dephasing_ratio": (float, None), "use_plan": (bool, False), "param": (str, None),
    "values": (str, None), "preset": (str, None), "budget": (int, 10000),
    "R": (str, "X"), "p_mix": (float, 0.0), "message": (str, "10"),
    "logical_alpha": (float, None), "logical_beta": (float, None),
    "theta": (float, 0.3), "k": (int, None), "gate": (str, "H"), "matrix": (str, None),
    "basis": (str, "ZY"), "beta": (float, 0.0), "N": (int, 15), "t": (float, None),
    "n": (int, 2), "marks": (str, "3"), "iterations": (int, 1), "q": (str, "32,64,128"),
    "format": (str, None), "seed": (int, None),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _add_common(p, names):
    for name in names + ["seed", "format"]:
        typ, _ = OPTIONS[name]
        flag = "--" + name.replace("_", "-")
        if typ is bool:
            p.add_argument(flag, dest=name, action="store_const", const=True, default=None)
        else:
            p.add_argument(flag, dest=name, type=typ, default=None)
    p.add_argument("--config", default=None, help="JSON file with option values")
    p.add_argument("--out", default=None, help="output file (default stdout)")


COMMANDS = {
    "pea": {"qft": ["phi", "m", "shots"], "ipea": ["phi", "m", "shots", "eps"],
            "kitaev": ["phi", "m", "shots"], "ag": ["phi", "m", "mode", "ancilla_bits"]},
    "bench": {n: ["id", "alpha", "gamma_t", "m", "trials", "eps", "noise", "delta_all",
                  "delta_Rz", "delta_Rx", "delta_coupling", "sigma_x", "dephasing_ratio",
                  "use_plan"] + extra
              for n, extra in (("run", []), ("sweep", ["param", "values", "preset"]),
                               ("budget", ["budget"]))},
    "crypto": {"auth": ["p_mix", "logical_alpha", "logical_beta"],
               "auth-attack": ["R", "logical_alpha", "logical_beta"],
               "stego": ["message", "logical_alpha", "logical_beta"],
               "superdense": ["message"]},
    "align": {"bb": ["phi", "m", "shots"], "rg": ["theta", "k", "shots"]},
    "decomp": {"euler": ["gate", "matrix", "basis"], "abc": ["gate", "matrix"],
               "power": ["alpha", "theta", "beta", "k"]},
    "demo": {"order": ["k", "N", "m", "shots"], "energy": ["t", "m", "shots"],
             "grover": ["n", "marks", "iterations"], "trotter": ["t", "q"]},
}


def build_parser():
    p = _Parser(prog="qpe", description="Phase-estimation simulation workbench")
    p.add_argument("--version", action="version", version=f"qpe {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for cmd, actions in COMMANDS.items():
        cp = sub.add_parser(cmd)
        asub = cp.add_subparsers(dest="action", required=True)
        for act, names in actions.items():
            _add_common(asub.add_parser(act), list(names))
    return p


def resolve(args):
    """Merge flags over the config file over built-in defaults."""
    names = COMMANDS[args.command][args.action] + ["seed", "format"]
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"cannot read config {args.config}: {e}") from None
        if not isinstance(cfg, dict):
            raise ValidationError("config must be a JSON object")
        unknown = sorted(set(cfg) - set(names))
        if unknown:
            raise ValidationError(f"unknown config keys for {args.command} {args.action}: {unknown}")
    out = {}
    for name in names:
        typ, default = OPTIONS[name]
        v = getattr(args, name, None)
        if v is None and name in cfg:
            v = cfg[name]
            if name == "noise" and isinstance(v, dict):
                v = json.dumps(v)
            elif v is not None and typ is not bool:
                try:
                    v = typ(v)
                except (TypeError, ValueError):
                    raise ValidationError(f"config key {name!r} has a bad value") from None
        out[name] = default if v is None else v
    if out["seed"] is None:
        env = os.environ.get("QPE_SEED")
        try:
            out["seed"] = int(env) if env not in (None, "") else 0
        except ValueError:
            raise ValidationError("QPE_SEED must be an integer") from None
    return out


def _need(o, *names):
    for n in names:
        if o.get(n) is None:
            raise ValidationError(f"--{n.replace('_', '-')} is required")


# --- handlers ---------------------------------------------------------------------------

def _pea(action, o):
    _need(o, "phi", "m")
    prob = PhaseProblem(o["m"], phi=o["phi"])
    g = qrng.stream(o["seed"])
    if action == "qft":
        return qft_pea_result(prob, g, o["shots"] or 1).to_dict()
    if action == "ipea":
        shots = o["shots"] or 1
        return ipea(prob, g, uniform_plan(o["m"], shots)).to_dict()
    if action == "kitaev":
        return kitaev_pea(prob, g, o["shots"] or 15).to_dict()
    return aspuru_guzik(prob, g, o["ancilla_bits"], o["mode"]).to_dict()


def _noise(o):
    base = NoiseModel.from_json(o["noise"]) if o["noise"] else NoiseModel()
    d = dict(base.delta)
    if o.get("delta_all") is not None:
        d = {c: o["delta_all"] for c in ("Rz", "Rx", "ZZ", "XX")}
    for cls in ("Rz", "Rx"):
        if o.get("delta_" + cls) is not None:
            d[cls] = o["delta_" + cls]
    if o.get("delta_coupling") is not None:
        d["ZZ"] = d["XX"] = o["delta_coupling"]
    kw = {"delta": d}
    if o.get("sigma_x") is not None:
        kw["sigma_x"] = o["sigma_x"]
    if o.get("dephasing_ratio") is not None:
        kw["dephasing_ratio"] = o["dephasing_ratio"]
    return base.replace(**kw)


def _spec(o, **over):
    kw = dict(id=o["id"], alpha=o["alpha"], gamma_t=o["gamma_t"], eps=o["eps"],
              seed=o["seed"], use_plan=bool(o["use_plan"]), noise=_noise(o))
    if o["m"] is not None:
        kw["m"] = o["m"]
    if o["trials"] is not None:
        kw["trials"] = o["trials"]
    kw.update(over)
    return qbench.BenchmarkSpec(**kw)


def _parse_values(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"bad --values list {text!r}") from None


def _bench(action, o):
    if action == "sweep":
        if o["preset"]:
            if o["preset"] not in qbench.PRESETS:
                raise ValidationError(f"unknown preset {o['preset']!r}")
            pre = dict(qbench.PRESETS[o["preset"]])
            param, values = pre.pop("param"), pre.pop("values")
            if "noise" in pre:
                pre["noise"] = NoiseModel.from_dict(pre["noise"])
            for key in ("m", "trials"):
                if o[key] is not None:
                    pre[key] = o[key]
            spec = qbench.BenchmarkSpec(seed=o["seed"], **pre)
            if o["values"]:
                values = _parse_values(o["values"])
        else:
            _need(o, "param", "values")
            spec, param, values = _spec(o), o["param"], _parse_values(o["values"])
        if param == "m":
            values = [int(v) for v in values]
        return "csv", qbench.sweep(spec, param, values)
    spec = _spec(o)
    if action == "run":
        r = qbench.run_benchmark(spec)
        row = {"param": "none", "value": "", "success_rate": r.success_rate,
               "total_measurements": r.total_measurements, "m": r.m, "seed": r.seed}
        return "csv", [row]
    plan = qbench.measurement_budget(spec)
    return "json", {"plan": plan.to_dict(),
                    "max_bits_under_budget": qbench.max_bits_under_budget(spec, o["budget"]),
                    "budget": o["budget"]}


def _named_unitary(text):
    text = text.strip()
    if text.startswith("["):
        return _matrix(text)
    try:
        return gate(text).matrix
    except ValidationError:
        raise ValidationError(f"unknown gate {text!r}") from None


def _matrix(text):
    try:
        raw = json.loads(text)
        m = np.array([[complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row]
                      for row in raw])
    except (ValueError, TypeError, json.JSONDecodeError):
        raise ValidationError("matrix must be JSON rows of numbers or [re, im] pairs") from None
    return m


def _logical(o):
    a, b = o.get("logical_alpha"), o.get("logical_beta")
    if a is None and b is None:
        return 1 / math.sqrt(2), 1 / math.sqrt(2)
    a = 0.0 if a is None else a
    b = math.sqrt(max(0.0, 1 - a * a)) if b is None else b
    nrm = math.hypot(a, b)
    if nrm == 0:
        raise ValidationError("logical amplitudes are both zero")
    return a / nrm, b / nrm


def _crypto(action, o):
    if action == "auth":
        a, b = _logical(o)
        rho = np.outer([a, b], [a, b]).astype(complex)
        return qcrypto.report_auth(qcrypto.AuthSession(p_mix=o["p_mix"]), rho)
    if action == "auth-attack":
        a, b = _logical(o) if (o.get("logical_alpha") is not None or o.get("logical_beta") is not None) else (1.0, 0.0)
        rho = np.outer([a, b], [a, b]).astype(complex)
        return qcrypto.report_attack(_named_unitary(o["R"]), rho)
    if action == "stego":
        a, b = _logical(o)
        return qcrypto.report_stego(a, b, o["message"])
    return qcrypto.report_superdense(o["message"])


def _align(action, o):
    g = qrng.stream(o["seed"])
    if action == "bb":
        _need(o, "phi", "m")
        return bb_alignment(o["phi"], o["m"], g, o["shots"] or 1).to_dict()
    return rg_theta_bit(o["theta"], o["k"] or 1, g, o["shots"] or 101)


def _decomp(action, o):
    if action == "power":
        _need(o, "alpha")
        k = o["k"] or 0
        pa = qdecomp.power_angles(o["alpha"], o["theta"], o["beta"], k)
        direct = np.linalg.matrix_power(qdecomp.zx_matrix(o["alpha"], o["theta"], o["beta"]), 2 ** k)
        return {"alpha": pa.alpha, "theta": pa.theta, "beta": pa.beta, "k": k,
                "matches_direct_power": qmath.equal_up_to_global_phase(pa.matrix(), direct, 1e-9)}
    u = _matrix(o["matrix"]) if o["matrix"] else _named_unitary(o["gate"])
    if action == "euler":
        e = qdecomp.euler_decompose(u, o["basis"])
        return {"basis": e.basis, "delta": e.delta, "alpha": e.alpha, "beta": e.beta,
                "gamma": e.gamma, "reconstruction_error": float(np.max(np.abs(e.matrix() - u)))}
    abc = qdecomp.abc_controlled(u)
    return {"delta": abc.delta, "A": qcrypto._c(abc.A), "B": qcrypto._c(abc.B),
            "C": qcrypto._c(abc.C),
            "abc_identity_error": float(np.max(np.abs(abc.A @ abc.B @ abc.C - np.eye(2)))),
            "controlled_error": float(np.max(np.abs(abc.circuit().unitary()
                                                    - qdecomp.controlled_matrix(u))))}


def _demo(action, o):
    g = qrng.stream(o["seed"])
    if action == "order":
        res = order_finding_demo(o["k"] or 7, o["N"], o["m"] or 11, g, o["shots"] or 8)
        res["votes"] = {str(k): v for k, v in sorted(res["votes"].items())}
        return res
    if action == "energy":
        h = gate("Z").matrix / 2
        t = o["t"] if o["t"] is not None else math.pi / 2
        return abrams_lloyd_energy(h, [1, 0], t, o["m"] or 6, g, o["shots"] or 100)
    if action == "grover":
        marks = [int(x) for x in o["marks"].split(",") if x.strip()]
        ops = build_grover_iteration(o["n"], marks)
        return {"n": o["n"], "marks": marks, "iterations": o["iterations"],
                "success_probability": ops.success_probability(o["iterations"])}
    xx = np.kron(gate("X").matrix, gate("X").matrix)
    zi = np.kron(gate("Z").matrix, np.eye(2))
    t = o["t"] if o["t"] is not None else 1.0
    qs = [int(x) for x in o["q"].split(",") if x.strip()]
    return {"hamiltonian": "XX + ZI", "t": t,
            "errors": {str(q): trotter_error([xx, zi], t, q) for q in qs}}


HANDLERS = {"pea": _pea, "bench": _bench, "crypto": _crypto, "align": _align,
            "decomp": _decomp, "demo": _demo}


# --- output -----------------------------------------------------------------------------

def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def emit(results, fmt, path=None, meta=None):
    """Write CSV rows (list of dicts in the benchmark schema) or JSON."""
    buf = io.StringIO()
    if fmt == "csv":
        for key, val in (meta or {}).items():
            buf.write(f"# {key}: {json.dumps(_clean(val), sort_keys=True)}\n")
        w = csv.DictWriter(buf, fieldnames=list(qbench.CSV_HEADER), lineterminator="\n")
        w.writeheader()
        for row in results:
            w.writerow({k: row.get(k, "") for k in qbench.CSV_HEADER})
    elif fmt == "json":
        doc = {"meta": _clean(meta or {}), "data": _clean(results)}
        buf.write(json.dumps(doc, indent=2) + "\n")
    else:
        raise ValidationError(f"unknown format {fmt!r}")
    text = buf.getvalue()
    if path:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as e:
            raise QpeError(f"cannot write {path}: {e}") from None
    else:
        sys.stdout.write(text)


def dispatch(argv=None):
    try:
        args = build_parser().parse_args(argv)
        opts = resolve(args)
        out = HANDLERS[args.command](args.action, opts)
        if isinstance(out, tuple):
            natural, data = out
        else:
            natural, data = "json", out
        fmt = opts["format"] or natural
        if fmt == "csv" and natural != "csv":
            raise ValidationError(f"{args.command} {args.action} only produces JSON")
        if fmt == "json" and natural == "csv":
            data = {"rows": data}
        meta = {"tool": f"qpe {__version__}", "command": f"{args.command} {args.action}",
                "seed": opts["seed"],
                "config": {k: v for k, v in opts.items() if v is not None and k != "format"}}
        emit(data, fmt, args.out, meta)
        return 0
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:             # --help / --version
        return int(e.code or 0)
    except Exception as e:              # noqa: BLE001 - any other failure is a runtime error
        print(f"runtime error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
