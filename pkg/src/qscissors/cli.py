"""Command-line front end: curve data, condition reports, verification runs.

    qscissors curve --amplifier two-photon-pure --alpha2 0.1 --points 200 -o pure.csv
    qscissors solve
    qscissors verify
    qscissors herald-table --amplifier two-photon-pure --gain 2
    qscissors figures --outdir figdata/

Options may also come from a ``key=value`` file passed with ``--config``;
flags given on the command line win.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass, fields
from typing import Callable

import numpy as np

from . import amplifiers as amp
from . import conditions, fock, metrics, optics
from .amplifiers import AmplifierConfig, Variant

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CURVE_HEADER = ["fidelity", "defect", "log_recip_defect", "probability", "utility"]
AMPLIFIERS = {v.value.replace("_", "-"): v for v in Variant}
LEAKAGE_WARN = 1e-8

ALPHA2_GRID = (0.02, 0.1, 0.2, 0.3, 0.5)
GAIN2_GRID = (1.0, 2.0, 4.0, 6.0, 10.0)


class UsageError(Exception):
    pass


@dataclass
class RunSpec:
    command: str
    amplifier: str = "two-photon-pure"
    alpha2: float = 0.1
    gain_min: float = 1.0
    gain_max: float = 10.0
    points: int = 200
    n_arms: int = 2
    cutoff: int = 10
    output_path: str = "-"
    gain_axis: str = "intensity"
    gain: float = 2.0
    simulated: bool = False
    sign_flipped_target: bool = False
    herald: str | None = None
    outdir: str = "figure-data"

    def __post_init__(self):
        if self.amplifier not in AMPLIFIERS:
            raise UsageError(f"unknown amplifier {self.amplifier!r}; choose from {', '.join(AMPLIFIERS)}")
        if self.gain_axis not in ("intensity", "amplitude"):
            raise UsageError("gain axis must be 'intensity' or 'amplitude'")
        if not self.gain_min > 0:
            raise UsageError("gain-min must be positive")
        if self.gain_max < self.gain_min:
            raise UsageError("gain-max must be at least gain-min")
        if self.points < 2:
            raise UsageError("points must be at least 2")
        if self.alpha2 < 0:
            raise UsageError("alpha2 must be non-negative")
        if self.n_arms < 1:
            raise UsageError("n must be at least 1")
        if self.cutoff < 0:
            raise UsageError("cutoff must be non-negative")
        if not self.gain > 0:
            raise UsageError("gain must be positive")

    @property
    def variant(self) -> Variant:
        return AMPLIFIERS[self.amplifier]

    def config(self, intensity_gain: float) -> AmplifierConfig:
        n = self.n_arms if self.variant is Variant.N_NETWORK else 1
        return AmplifierConfig(self.variant, math.sqrt(self.alpha2), intensity_gain, n, self.cutoff)


def _fmt(x: float) -> str:
    return "%.9g" % x


def _write_atomic(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qscissors-", suffix=".tmp")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def curve_rows(spec: RunSpec) -> list[str]:
    axis = np.linspace(spec.gain_min, spec.gain_max, spec.points)
    intensities = axis if spec.gain_axis == "intensity" else axis**2
    base = spec.config(1.0)
    points = metrics.merit_curve(base, intensities, simulated=spec.simulated,
                                 sign_flipped_target=spec.sign_flipped_target)
    first = "gain_intensity" if spec.gain_axis == "intensity" else "gain_amplitude"
    rows = [",".join([first, *CURVE_HEADER])]
    for x, p in zip(axis, points):
        rows.append(",".join(_fmt(v) for v in (x, p.fidelity, p.defect, p.log_recip_defect,
                                               p.probability, p.utility)))
    return rows


def cmd_curve(spec: RunSpec) -> int:
    _write_atomic(spec.output_path, "\n".join(curve_rows(spec)) + "\n")
    return EXIT_OK


def solve_report() -> list[str]:
    upper, lower = conditions.sign_shift_roots()
    proof = conditions.lossless_infeasibility_proof()
    lines = [
        f"sign-shift roots |t1|^2: {upper:.6f} {lower:.6f}",
        f"lossless pure amplification: x^2 - x + 1 discriminant {proof.details['discriminant']}; "
        f"scan min residual {proof.residual:.6f} over {proof.details['scan_points']} splitters",
        f"minimum BS1 loss for pure amplification: {conditions.min_loss_for_pure_amp():.6f}",
        "phase bound max |cos((Phi_r - Phi_t)/2)| for |t|^2 = |r|^2:",
    ]
    for t2 in (0.25, 1 / 3, 0.5):
        lines.append(f"  t^2 = {t2:.6f}: {conditions.lossy_phase_bound(t2):.6f}")
    return lines


def cmd_solve(spec: RunSpec | None = None) -> int:
    print("\n".join(solve_report()))
    return EXIT_OK


# --- verification suite --------------------------------------------------------


def _pad_diff(a: fock.MultimodeState, b: fock.MultimodeState) -> float:
    d = max(a.cutoff, b.cutoff)
    return float(np.max(np.abs(a.with_cutoff(d).amplitudes - b.with_cutoff(d).amplitudes)))


def _parse_herald(text: str) -> dict[int, int]:
    try:
        link, signal = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"herald must look like '1,1', got {text!r}") from exc
    return {amp.LINK: link, amp.SIGNAL: signal}


def _oracle_pair(variant: Variant, alpha: float, g2: float, herald: dict[int, int] | None):
    """(closed form, simulation) as (probability, state) pairs, raw branches where defined."""
    if variant is Variant.N_NETWORK:
        (pc, oc), (ps, os_) = amp.n_network(alpha, g2, 3), amp.n_network_simulated(alpha, g2, 3)
        return (pc, oc), (ps, os_)
    if variant is Variant.ONE_PHOTON:
        bs1, bs2 = amp.balanced_splitter(), amp.gain_splitter(g2)
        c = amp.one_photon_closed_form(alpha, bs1, bs2)
        s = amp.one_photon_simulated(alpha, bs1, bs2, herald=_full_herald(herald, c))
    elif variant is Variant.TWO_PHOTON_PURE:
        c = amp.two_photon_pure_closed_form(alpha, g2)
        s = amp.two_photon_pure_simulated(alpha, g2, herald=_full_herald(herald, c))
    elif variant is Variant.TWO_PHOTON_SIGN_SHIFT:
        c = amp.two_photon_sign_shift(alpha, g2)
        s = amp.two_photon_sign_shift(alpha, g2, simulated=True, herald=_full_herald(herald, c))
    else:
        c = amp.two_photon_variant_ii(alpha, g2, simulated=False)
        s = amp.two_photon_variant_ii(alpha, g2, herald=_full_herald(herald, c))
    return (c.probability, c.raw_branch), (s.probability, s.raw_branch)


def _full_herald(override, closed):
    if override is None:
        return None
    return {**closed.herald, **override}


def _check_oracles(variant: Variant, herald) -> float:
    worst = 0.0
    for a2 in ALPHA2_GRID:
        for g2 in GAIN2_GRID:
            (pc, sc), (ps, ss) = _oracle_pair(variant, math.sqrt(a2), g2, herald)
            worst = max(worst, abs(pc - ps), _pad_diff(sc, ss))
    return worst


def _check_completeness(cutoff: int) -> float:
    worst = 0.0
    for variant in (Variant.ONE_PHOTON, Variant.TWO_PHOTON_PURE,
                    Variant.TWO_PHOTON_SIGN_SHIFT, Variant.TWO_PHOTON_VARIANT_II):
        for a2 in (0.1, 0.5):
            cfg = AmplifierConfig(variant, math.sqrt(a2), 2.0, cutoff=cutoff)
            state, _, _ = amp.simulated_network(cfg)
            total = sum(o.probability for o in amp.herald_table(cfg))
            worst = max(worst, abs(total - state.norm_squared()))
    return worst


def _check_ratio_structure() -> float:
    worst = 0.0
    for a2 in ALPHA2_GRID:
        for g2 in GAIN2_GRID:
            for sign, out in ((1, amp.two_photon_pure_simulated(math.sqrt(a2), g2)),
                              (-1, amp.two_photon_sign_shift(math.sqrt(a2), g2, simulated=True))):
                a0, a1, a2_ = (out.output.amplitude(n) for n in range(3))
                worst = max(worst, abs(a2_ / a0 - sign * (a1 / a0) ** 2 / math.sqrt(2)))
    return worst


def _check_lossless_norm() -> float:
    rng = np.random.default_rng(7)
    worst = 0.0
    for theta in np.linspace(0, math.pi / 2, 7):
        bs = optics.make_lossless(float(theta))
        amps = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        amps[3:, :] = 0
        amps[:, 3:] = 0
        state = fock.MultimodeState(amps / np.linalg.norm(amps))
        worst = max(worst, abs(optics.apply_bs(state, bs, 0, 1).norm_squared() - 1))
    return worst


def _check_tritter() -> float:
    m = optics.embed_tritter(amp.pure_amplifier_splitter()).matrix
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def _check_mean_photon() -> float:
    ratio, _ = conditions.max_mean_photon_ratio(amp.pure_amplifier_splitter())
    return max(ratio - 1.0, 0.0)


def _check_prefactors() -> float:
    worst = 0.0
    for a2 in ALPHA2_GRID:
        for g2 in GAIN2_GRID:
            pure = amp.two_photon_pure_simulated(math.sqrt(a2), g2).probability
            shift = amp.two_photon_sign_shift(math.sqrt(a2), g2, simulated=True).probability
            worst = max(worst, abs(shift / pure - 1.8))
    return worst


def verification_checks(spec: RunSpec) -> list[tuple[str, Callable[[], float], float]]:
    herald = _parse_herald(spec.herald) if spec.herald else None
    checks = []
    for name, variant in AMPLIFIERS.items():
        injected = herald if variant is spec.variant else None
        checks.append((f"oracle-equivalence[{name}]", lambda v=variant, h=injected: _check_oracles(v, h), 1e-10))
    checks += [
        ("herald-completeness", lambda: _check_completeness(max(spec.cutoff, 1)), 1e-8),
        ("pure-ratio-structure", _check_ratio_structure, 1e-10),
        ("lossless-norm-preservation", _check_lossless_norm, 1e-10),
        ("tritter-unitarity", _check_tritter, 1e-10),
        ("mean-photon-inequality", _check_mean_photon, 1e-8),
        ("probability-prefactor-ratio", _check_prefactors, 1e-10),
    ]
    return checks


def truncation_leakage(alpha2: float, cutoff: int) -> float:
    """Coherent-input weight lost by cutting ``|alpha|^2 = alpha2`` at ``cutoff`` photons."""
    amps = fock.coherent_amplitudes(math.sqrt(alpha2), cutoff)
    return max(1.0 - float(np.sum(np.abs(amps) ** 2)), 0.0)


def cmd_verify(spec: RunSpec) -> int:
    leak = truncation_leakage(spec.alpha2, spec.cutoff)
    if leak > LEAKAGE_WARN:
        print(f"warning: truncation leakage {leak:.3g} at cutoff {spec.cutoff} for |alpha|^2 = "
              f"{spec.alpha2:g} exceeds {LEAKAGE_WARN:g}", file=sys.stderr)
    failed = None
    for name, check, tol in verification_checks(spec):
        value = check()
        ok = value < tol
        print(f"{'PASS' if ok else 'FAIL'}  {name:42s} max residual {value:.3e}  (tol {tol:.0e})")
        if not ok and failed is None:
            failed = name
    if failed:
        print(f"verification failed: {failed}", file=sys.stderr)
        return EXIT_FAIL
    print("all checks passed")
    return EXIT_OK


def herald_rows(spec: RunSpec) -> list[str]:
    cfg = spec.config(spec.gain)
    if cfg.variant is Variant.N_NETWORK:
        raise UsageError("herald-table needs a single simulated network, not n-network")
    _, modes, success = amp.simulated_network(cfg)
    names = {amp.LINK: "count_link", amp.SIGNAL: "count_signal"}
    header = [names.get(m, f"count_loss{m - amp.LOSS + 1}") for m in modes]
    rows = [",".join(header + ["probability", "fidelity", "success"])]
    target = cfg.gain * cfg.alpha
    for outcome in amp.herald_table(cfg):
        counts = [str(outcome.herald[m]) for m in modes]
        fid = metrics.fidelity_vs_amplified_coherent(outcome.output, target)
        rows.append(",".join(counts + [_fmt(outcome.probability), _fmt(fid),
                                       str(int(outcome.herald == success))]))
    return rows


def cmd_herald_table(spec: RunSpec) -> int:
    _write_atomic(spec.output_path, "\n".join(herald_rows(spec)) + "\n")
    return EXIT_OK


FIGURE_SERIES = (
    ("two-photon-pure", 0.1, 1), ("two-photon-pure", 0.2, 1), ("two-photon-pure", 0.3, 1),
    ("two-photon-pure", 0.4, 1), ("two-photon-pure", 0.5, 1),
    ("two-photon-sign-shift", 0.1, 1), ("two-photon-sign-shift", 0.3, 1),
    *(("n-network", a2, n) for a2 in (0.1, 0.3) for n in (1, 2, 3, 4)),
)


def cmd_figures(spec: RunSpec) -> int:
    """Write every curve behind the fidelity, probability and utility figures."""
    try:
        os.makedirs(spec.outdir, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {spec.outdir}: {exc}") from exc
    for name, a2, n in FIGURE_SERIES:
        label = f"{name}-N{n}" if name == "n-network" else name
        path = os.path.join(spec.outdir, f"{label}_alpha2-{a2:g}.csv")
        series = RunSpec(**{**vars(spec), "command": "curve", "amplifier": name,
                            "alpha2": a2, "n_arms": n, "output_path": path})
        cmd_curve(series)
        print(path)
    return EXIT_OK


COMMANDS = {
    "curve": cmd_curve,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "herald-table": cmd_herald_table,
    "figures": cmd_figures,
}


def read_config(path: str) -> dict[str, str]:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


_ALIASES = {"n": "n_arms", "output": "output_path"}


def _coerce(values: dict[str, object]) -> dict[str, object]:
    types = {f.name: f.type for f in fields(RunSpec)}
    out = {}
    for key, value in values.items():
        key = _ALIASES.get(key, key)
        if key not in types:
            raise UsageError(f"unknown option {key!r}")
        if isinstance(value, str):
            kind = types[key]
            try:
                if kind == "bool":
                    value = value.strip().lower() in ("1", "true", "yes", "on")
                elif kind == "int":
                    value = int(value)
                elif kind == "float":
                    value = float(value)
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {value!r}") from exc
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qscissors", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, gain_range=True):
        p.add_argument("--config", help="key=value file with defaults for these options")
        p.add_argument("--amplifier", choices=sorted(AMPLIFIERS), default=None)
        p.add_argument("--alpha2", type=float, default=None, help="input |alpha|^2 (default 0.1)")
        p.add_argument("--n", dest="n_arms", type=int, default=None, help="arms of the n-network (default 2)")
        p.add_argument("--cutoff", type=int, default=None, help="photon-number truncation (default 10)")
        if gain_range:
            p.add_argument("--gain-min", type=float, default=None)
            p.add_argument("--gain-max", type=float, default=None)
            p.add_argument("--points", type=int, default=None)
            p.add_argument("--gain-axis", choices=["intensity", "amplitude"], default=None,
                           help="read the grid as g^2 (default) or as g")
            p.add_argument("--simulated", action="store_const", const=True, default=None,
                           help="use the Fock simulation instead of closed forms")
            p.add_argument("--sign-flipped-target", action="store_const", const=True, default=None,
                           help="score the sign-shift amplifier against the sign-flipped target")

    p = sub.add_parser("curve", help="CSV of fidelity, probability and utility against gain")
    common(p)
    p.add_argument("-o", "--output", dest="output_path", default=None, help="CSV path, '-' for stdout")

    p = sub.add_parser("solve", help="print the amplification-condition solutions")
    p.add_argument("--config", help=argparse.SUPPRESS)

    p = sub.add_parser("verify", help="closed-form vs simulation and invariant checks")
    common(p, gain_range=False)
    p.add_argument("--herald", default=None,
                   help="replace the detector herald of --amplifier, e.g. '1,1' (negative control)")

    p = sub.add_parser("herald-table", help="CSV of every herald outcome of a simulated amplifier")
    common(p, gain_range=False)
    p.add_argument("--gain", type=float, default=None, help="intensity gain g^2 (default 2)")
    p.add_argument("-o", "--output", dest="output_path", default=None)

    p = sub.add_parser("figures", help="write all figure curves into a directory")
    common(p)
    p.add_argument("--outdir", default=None)
    return parser


def parse_spec(argv: list[str] | None = None) -> RunSpec:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    merged = read_config(config_path) if config_path else {}
    merged.update({k: v for k, v in args.items() if v is not None})
    merged.pop("command", None)
    return RunSpec(command=command, **_coerce(merged))


def main(argv: list[str] | None = None) -> int:
    try:
        spec = parse_spec(argv)
        return COMMANDS[spec.command](spec)
    except UsageError as exc:
        print(f"qscissors: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
