"""Command-line front end.

Every subcommand writes one report (text or JSON) that echoes the full
configuration and the tool version; the exit status is 0 exactly when all of
the subcommand's checks pass.  Exact scalars on the command line are written
``a`` or ``a:b`` for ``a + b*sqrt(d)`` with rationals ``a``, ``b``;
``sqrt`` is shorthand for ``0:1``.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from importlib import resources

from . import __version__
from .analysis import (
    DEFAULT_SIGMA_LADDER,
    OracleDivergence,
    atom_oracle,
    difference_profile,
    discreteness_profile,
    poisson_check,
    probe_panel,
)
from .comb import (
    Comb,
    CombFormatError,
    OverlapError,
    atom_weight,
    atoms_in_window,
    comb_equal,
    dumps_comb,
    fourier,
    loads_comb,
    read_comb,
    reflect,
)
from .diophantine import (
    CapExceeded,
    KroneckerSystem,
    almost_periods,
    best_homogeneous,
    best_inhomogeneous,
    kronecker_solve,
    solution_gaps,
)
from .exactnum import FieldElem, parse_rational, to_float
from .lattice import WindowTooLarge, same_coset, same_lattice
from .reconstruct import (
    default_eps_ladder,
    default_theta_grid,
    nu,
    nu_hat_expected,
    reconstruct,
    refute_lattice_cover,
    verify_certificate,
)

log = logging.getLogger("qcomb")

SUBCOMMANDS = (
    "fourier",
    "verify",
    "oracle",
    "discreteness",
    "diffs",
    "dio",
    "periods",
    "reconstruct",
    "refute",
    "counterexample",
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = dc_field(default_factory=list)
    output: str | None = None
    window: float = 20.0
    tol: float = 1e-8
    sigma: list = dc_field(default_factory=lambda: list(DEFAULT_SIGMA_LADDER))
    theta: list | None = None
    eps: list | None = None
    alpha: str = "-1"
    disc: int = 2
    seed: int = 0
    cap: int = 10**6
    probes: int = 16
    at: list | None = None
    format: str = "text"

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        for name in ("window", "tol", "cap", "probes"):
            if not getattr(self, name) > 0:
                raise UsageError(f"--{name} must be positive")
        if any(not s > 0 for s in self.sigma) or (self.eps and any(not e > 0 for e in self.eps)):
            raise UsageError("sigma and eps values must be positive")
        if self.disc < 2:
            raise UsageError("--disc must be a squarefree integer >= 2")


# -- parsing helpers -----------------------------------------------------------------------


def parse_exact(text: str, disc: int) -> FieldElem:
    t = text.strip()
    if t == "sqrt":
        return FieldElem(0, 1, disc)
    if t == "-sqrt":
        return FieldElem(0, -1, disc)
    a, _, b = t.partition(":")
    try:
        return FieldElem(parse_rational(a), parse_rational(b) if b else 0, disc)
    except ValueError as e:
        raise UsageError(f"cannot parse exact value {text!r}: {e}") from None


def parse_scalar(text: str, disc: int):
    """Exact field element when possible, else a (possibly complex) float."""
    try:
        return parse_exact(text, disc)
    except UsageError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"cannot parse scalar {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _points(text: str, disc: int) -> list[tuple]:
    return [tuple(parse_exact(c, disc) for c in p.split(",")) for p in text.split(";") if p.strip()]


def bundled_nu_text() -> str:
    return resources.files("qcomb").joinpath("data/nu.json").read_text(encoding="utf-8")


def parse_comb_file(path: str) -> Comb:
    """Read and canonicalize a comb file; ``@nu`` names the bundled example."""
    if path == "@nu":
        return loads_comb(bundled_nu_text())
    return read_comb(path)


def _load(cfg: RunConfig, k: int = 0, default_nu: bool = True) -> Comb:
    if len(cfg.inputs) > k:
        return parse_comb_file(cfg.inputs[k])
    if default_nu and k == 0:
        return nu(disc=cfg.disc)
    raise UsageError(f"subcommand {cfg.subcommand} needs {k + 1} input file(s)")


def _pt(x) -> list:
    return [str(c) if isinstance(c, FieldElem) else float(c) for c in x]


def _cx(z: complex) -> list:
    return [z.real, z.imag]


# -- subcommands -----------------------------------------------------------------------------


def cmd_fourier(cfg: RunConfig):
    m = _load(cfg)
    fm = fourier(m)
    return True, {"comb": json.loads(dumps_comb(fm))}, dumps_comb(fm)


def cmd_verify(cfg: RunConfig):
    m = _load(cfg)
    claimed = _load(cfg, 1) if len(cfg.inputs) > 1 else None
    probes = probe_panel(m.dim, cfg.probes, cfg.seed)
    rep = poisson_check(m, probes, cfg.tol, transform=claimed)
    result = rep.to_json()
    result["transform"] = "file" if claimed is not None else "symbolic"
    return rep.passed, result, rep.to_text()


def _oracle_panel(m: Comb, cfg: RunConfig):
    fm = fourier(m)
    atoms = [x for x, _ in atoms_in_window(fm, 2.0, cfg.cap)]
    atoms.sort(key=lambda x: (sum(float(c) ** 2 for c in x), tuple(x)))
    chosen = atoms[:12]
    rng = random.Random(cfg.seed)
    misses = []
    while len(misses) < 6:
        x = tuple(FieldElem(Fraction(rng.randint(-40, 40), 20) + Fraction(1, 7), 0, m.disc) for _ in range(m.dim))
        if atom_weight(fm, x).is_zero():
            misses.append(x)
    return chosen + misses


def cmd_oracle(cfg: RunConfig):
    m = _load(cfg)
    fm = fourier(m)
    pts = cfg.at if cfg.at else _oracle_panel(m, cfg)
    rows, ok = [], True
    for z in pts:
        exact = complex(atom_weight(fm, z))
        try:
            res = atom_oracle(m, z, cfg.sigma)
            err = abs(res.value - exact)
            good = err < 1e-6
            rows.append({"z": _pt(z), "exact": _cx(exact), "oracle": _cx(res.value), "error": err, "convergence": res.convergence, "passed": good})
        except OracleDivergence as e:
            good = False
            rows.append({"z": _pt(z), "exact": _cx(exact), "error": None, "diagnostic": str(e), "passed": False})
        ok &= good
    text = "\n".join(
        f"  z=({', '.join(map(str, r['z']))}) exact={complex(*r['exact']):.6f} "
        + (f"oracle={complex(*r['oracle']):.6f} err={r['error']:.2e}" if r.get("oracle") else r.get("diagnostic", ""))
        + (" ok" if r["passed"] else " FAIL")
        for r in rows
    )
    return ok, {"points": rows}, "atom oracle vs symbolic transform\n" + text


def cmd_discreteness(cfg: RunConfig):
    m = _load(cfg)
    out, ok, lines = {}, True, []
    for name, c in (("support", m), ("spectrum", fourier(m))):
        pts = [x for x, _ in atoms_in_window(c, cfg.window, cfg.cap)]
        prof = discreteness_profile(pts, cfg.window)
        out[name] = prof.to_json()
        ok &= prof.min_gap > 0
        lines.append(f"  {name}: min gap {prof.min_gap:.9g}, fill radius {prof.fill_radius:.6g}, separation radius {prof.separation_radius:.6g}")
    return ok, out, f"discreteness on window {cfg.window}\n" + "\n".join(lines)


def cmd_diffs(cfg: RunConfig):
    m = _load(cfg)
    other = _load(cfg, 1) if len(cfg.inputs) > 1 else m
    alpha = parse_scalar(cfg.alpha, m.disc)
    if isinstance(alpha, complex) and alpha.imag == 0 and float(alpha.real).is_integer():
        alpha = FieldElem(int(alpha.real), 0, m.disc)
    A = [x for x, _ in atoms_in_window(m, cfg.window, cfg.cap)]
    B = [x for x, _ in atoms_in_window(other, cfg.window, cfg.cap)]
    prof = difference_profile(A, B, alpha, cfg.window)
    return True, prof.to_json(), (
        f"values a + ({alpha})*b on window {cfg.window}: {len(prof.values)} distinct, "
        f"min positive gap {prof.min_positive_gap:.9g}"
    )


def cmd_dio(cfg: RunConfig):
    x = parse_exact(cfg.alpha if cfg.alpha != "-1" else "sqrt", cfg.disc)
    eps = cfg.eps or [0.02, 0.05]
    res = {"x": str(x)}
    lines = [f"diophantine approximation for x = {x}"]
    ok = True
    try:
        s, r = best_homogeneous(x, eps[0])
        res["homogeneous"] = {"eps": eps[0], "s": s, "r": r, "residual": to_float(s * x + r)[0]}
        lines.append(f"  least s>0 with |s x + r| < {eps[0]}: s={s}, r={r}")
        inh = best_inhomogeneous(x, Fraction(1, 2), eps[-1], s_cap=cfg.cap)
        res["inhomogeneous"] = {"beta": "1/2", "eps": eps[-1], "s": inh.s, "r": inh.r, "residual": inh.residual}
        lines.append(f"  least |s| with |s x + 1/2 + r| < {eps[-1]}: s={inh.s}, r={inh.r}, residual {inh.residual:.6g}")
    except (ValueError, CapExceeded) as e:
        ok = False
        res["error"] = str(e)
        lines.append(f"  error: {e}")
    if not x.is_rational():
        sols = kronecker_solve(KroneckerSystem((Fraction(1), x), (Fraction(0), Fraction(0)), eps[0]), cfg.window, cfg.cap)
        taus = [s.tau_float[0] for s in sols]
        res["kronecker"] = {"tol": eps[0], "radius": cfg.window, "solutions": taus, "gaps": solution_gaps(taus)}
        lines.append(f"  tau with ||tau||, ||tau x|| < {eps[0]} in |tau| <= {cfg.window}: {len(taus)} solutions")
    return ok, res, "\n".join(lines)


def cmd_periods(cfg: RunConfig):
    x = parse_exact(cfg.alpha if cfg.alpha != "-1" else "sqrt", cfg.disc)
    eps = (cfg.eps or [0.2])[0]
    aps = almost_periods((Fraction(1), x), (Fraction(1), Fraction(1)), eps, cfg.window)
    taus = [float(t[0]) if not isinstance(t[0], FieldElem) else to_float(t[0])[0] for t, _ in aps]
    res = {
        "function": f"exp(2 pi i x) + exp(2 pi i ({x}) x)",
        "eps": eps,
        "radius": cfg.window,
        "almost_periods": [{"tau": tv, "bound": b} for tv, (_, b) in zip(taus, aps)],
        "gaps": solution_gaps(taus),
    }
    ok = all(b < eps for _, b in aps)
    return ok, res, f"{eps}-almost periods in |tau| <= {cfg.window}: " + ", ".join(f"{t:g}" for t in taus)


def _support(m: Comb, window: float, cap: int):
    return [x for x, _ in atoms_in_window(m, window, cap)]


def cmd_reconstruct(cfg: RunConfig):
    m1 = _load(cfg)
    m2 = _load(cfg, 1) if len(cfg.inputs) > 1 else m1
    rec = reconstruct(_support(m1, cfg.window, cfg.cap), _support(m2, cfg.window, cfg.cap), cfg.window)
    out = rec.to_json()
    if rec.success:
        dec = rec.decomposition
        text = (
            f"common period lattice found; |F1| = {len(dec.residues_1)}, |F2| = {len(dec.residues_2)}\n"
            f"  periods: {[_pt(T) for T in rec.periods]}"
        )
    else:
        text = f"reconstruction failed: {rec.reason}"
    return rec.success, out, text + f"\n  assumption: {rec.assumption}"


def _refute(cfg: RunConfig):
    thetas = cfg.theta if cfg.theta else default_theta_grid()
    ladder = cfg.eps if cfg.eps else default_eps_ladder()
    return refute_lattice_cover(thetas, ladder, window_cap=cfg.cap, control_window=cfg.window)


def cmd_refute(cfg: RunConfig):
    rep = _refute(cfg)
    verified = all(verify_certificate(c) for c in rep.certificates)
    out = rep.to_json()
    out["independently_verified"] = verified
    return rep.refuted and verified, out, rep.to_text() + f"\n  certificates re-verified: {verified}"


def _spectrum_matches(m: Comb) -> tuple[bool, list]:
    fm = fourier(m)
    expected = nu_hat_expected(m.disc)
    comps = fm.components
    rows = []
    ok = len(comps) == len(expected)
    for exp in expected:
        match = [
            c
            for c in comps
            if same_lattice(c.lattice, exp.lattice) and same_coset(c.lattice, c.offset, exp.offset)
        ]
        moduli = sorted({str(t.coeff) for c in match for t in c.terms})
        good = len(match) == 1 and moduli == [str(exp.modulus)] and len(match[0].terms) == 1
        ok &= good
        rows.append({"offset": _pt(exp.offset), "modulus": str(exp.modulus), "found": moduli, "passed": good})
    return ok, rows


def cmd_counterexample(cfg: RunConfig):
    m = nu(disc=cfg.disc)
    results, lines, ok = {}, [], True

    def check(name, passed, detail, line):
        nonlocal ok
        ok &= bool(passed)
        results[name] = {"passed": bool(passed), **detail}
        lines.append(f"  [{'PASS' if passed else 'FAIL'}] {line}")

    involution = comb_equal(fourier(fourier(m)), reflect(m))
    check("involution", involution, {}, "fourier(fourier(nu)) equals the reflection of nu")
    spec_ok, rows = _spectrum_matches(m)
    check("spectrum", spec_ok, {"cosets": rows}, "spectrum is Z^2 and the shifted dual coset, moduli 1 and 1/sqrt 2")
    fm = fourier(m)
    prof = discreteness_profile(_support(fm, cfg.window, cfg.cap), cfg.window)
    check(
        "spectrum_discrete",
        prof.min_gap >= 0.5 - 1e-12,
        {"profile": prof.to_json()},
        f"spectrum uniformly discrete on window {cfg.window}: min gap {prof.min_gap:.9g} >= 1/2",
    )
    sprof = discreteness_profile(_support(m, cfg.window, cfg.cap), cfg.window)
    check("support_discrete", sprof.min_gap >= 0.5 - 1e-12, {"profile": sprof.to_json()}, f"support min gap {sprof.min_gap:.9g} >= 1/2")
    rep = poisson_check(m, probe_panel(2, cfg.probes, cfg.seed), cfg.tol)
    check("poisson", rep.passed, {"max_residual": rep.max_residual}, f"numeric Poisson on {cfg.probes} probes, max residual {rep.max_residual:.3e}")
    ok_or, orc, _ = cmd_oracle(cfg)
    check("oracle", ok_or, orc, "atom oracle agrees with the symbolic transform within 1e-6")
    ref = _refute(cfg)
    verified = all(verify_certificate(c) for c in ref.certificates)
    check("refutation", ref.refuted and verified, {"verdict": ref.verdict}, f"lattice cover: {ref.verdict}")
    P1 = [x for x in _support(m, cfg.window, cfg.cap) if x[1].is_integer()]
    P2 = [x for x in _support(m, cfg.window, cfg.cap) if not x[1].is_integer()]
    rec = reconstruct(P1, P2, cfg.window)
    check("no_common_period", not rec.success, {"reason": rec.reason}, "the two support cosets have no common period")
    header = "counterexample: two-coset comb with uniformly discrete spectrum, not a finite union of lattice cosets"
    return ok, results, header + "\n" + "\n".join(lines)


COMMANDS = {
    "fourier": cmd_fourier,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "discreteness": cmd_discreteness,
    "diffs": cmd_diffs,
    "dio": cmd_dio,
    "periods": cmd_periods,
    "reconstruct": cmd_reconstruct,
    "refute": cmd_refute,
    "counterexample": cmd_counterexample,
}


# -- driver ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcomb", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"qcomb {__version__}")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("-i", "--input", action="append", default=[], help="comb file (repeatable; @nu = bundled example)")
    p.add_argument("-o", "--output", help="write the report (or the transformed comb) here")
    p.add_argument("--window", type=float, default=20.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--sigma", type=_floats, default=list(DEFAULT_SIGMA_LADDER), help="oracle width ladder, comma separated")
    p.add_argument("--theta", type=_floats, help="directions for refute, comma separated radians")
    p.add_argument("--eps", type=_floats, help="eps ladder or thresholds, comma separated")
    p.add_argument("--alpha", default="-1", help="scalar: a, a:b (= a + b sqrt d), sqrt, or a complex literal")
    p.add_argument("--disc", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=10**6)
    p.add_argument("--probes", type=int, default=16)
    p.add_argument("--at", help="oracle points 'x1,y1;x2,y2' in the exact scalar syntax")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        subcommand=ns.subcommand,
        inputs=list(ns.input),
        output=ns.output,
        window=ns.window,
        tol=ns.tol,
        sigma=list(ns.sigma),
        theta=ns.theta,
        eps=ns.eps,
        alpha=ns.alpha,
        disc=ns.disc,
        seed=ns.seed,
        cap=ns.cap,
        probes=ns.probes,
        format=ns.format,
    )
    if ns.at:
        cfg.at = _points(ns.at, ns.disc)
    cfg.validate()
    return cfg


def _config_echo(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    if cfg.at:
        d["at"] = [_pt(x) for x in cfg.at]
    return d


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a configuration; returns the exit code and the rendered report."""
    handler = COMMANDS[cfg.subcommand]
    try:
        passed, result, text = handler(cfg)
        error = None
    except (CombFormatError, OverlapError, WindowTooLarge, CapExceeded, UsageError, ValueError, OSError) as e:
        passed, result, text = False, {}, ""
        error = {"type": type(e).__name__, "message": str(e), "pointer": getattr(e, "pointer", None)}
    if cfg.subcommand == "fourier" and error is None and cfg.format == "text":
        return 0, text  # the transformed comb itself
    report = {
        "tool": "qcomb",
        "version": __version__,
        "config": _config_echo(cfg),
        "passed": bool(passed),
        "result": result,
    }
    if error:
        report["error"] = error
    if cfg.format == "json":
        body = json.dumps(report, indent=1, sort_keys=True, default=str) + "\n"
    else:
        head = f"qcomb {__version__} {cfg.subcommand} config={json.dumps(_config_echo(cfg), sort_keys=True, default=str)}"
        msg = f"error ({error['type']}): {error['message']}" if error else text
        body = f"{head}\n{msg}\nstatus: {'PASS' if passed else 'FAIL'}\n"
    return (0 if passed else 1), body


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as e:
        parser.error(str(e))
    code, body = run(cfg)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return code
