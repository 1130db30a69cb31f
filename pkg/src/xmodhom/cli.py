"""Batch front end.

Reads a single JSON document describing named groups, homomorphisms,
actions, crossed modules, coefficient modules, morphisms and short exact
sequences; runs validation, homology computations, or law checks; writes
text or JSON reports.  With ``--report-dir`` the homology command also
writes a CSV table plus rendered figures (bicomplex entry sizes and stage
wall times) to the given directory.

Exit codes: 0 success, 1 mathematical failure (an invalid object or a
violated law), 2 usage, parse, reference, or size-cap error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import bar
from . import crossed as xm
from . import groups as gr
from . import laws
from .intlin import SizeCapError


class InputError(Exception):
    """Parse, reference, or schema problem in the input document."""


class MathError(Exception):
    """A declared object violates one of its defining laws."""


@dataclass
class InputDocument:
    """Validated object graph of one input file."""

    groups: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    xmods: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    module_actions: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    module_morphisms: dict = field(default_factory=dict)
    module_sequences: dict = field(default_factory=dict)


def _lookup(table, name, kind):
    if name not in table:
        raise InputError(f"unknown {kind} '{name}'")
    return table[name]


def _build(section, doc_section, builder, out):
    for name in sorted(doc_section):
        desc = doc_section[name]
        try:
            out[name] = builder(name, desc)
        except InputError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise MathError(f"{section} '{name}': {exc}") from exc


def parse_input(path) -> InputDocument:
    """Parse and fully validate one JSON document."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise InputError("top level must be a JSON object")
    known = {"groups", "homs", "actions", "xmods", "modules",
             "module_actions", "morphisms", "sequences",
             "module_morphisms", "module_sequences"}
    for key in raw:
        if key not in known:
            raise InputError(f"unknown top-level section '{key}'")
    doc = InputDocument()

    def group(name):
        return _lookup(doc.groups, name, "group")

    def hom(name):
        return _lookup(doc.homs, name, "homomorphism")

    def build_group(name, desc):
        if not isinstance(desc, dict):
            raise InputError(f"group '{name}' must be an object")
        if "table" in desc:
            return gr.make_group(table=desc["table"], name=name)
        if "permutations" in desc:
            return gr.make_group(permutations=desc["permutations"],
                                 name=name)
        raise InputError(f"group '{name}' needs 'table' or 'permutations'")

    def build_hom(name, desc):
        src, dst = group(desc["src"]), group(desc["dst"])
        if "images" in desc:
            return gr.GroupHom(src, dst, desc["images"])
        if "generator_images" in desc:
            return gr.hom_from_generator_images(src, dst,
                                                desc["generator_images"])
        raise InputError(f"homomorphism '{name}' needs 'images' or "
                         "'generator_images'")

    def build_action(name, desc):
        return gr.GroupActionOnGroup(group(desc["actor"]),
                                     group(desc["target"]), desc["table"])

    def build_xmod(name, desc):
        if "inclusion" in desc:
            inc = desc["inclusion"]
            g = group(inc["group"])
            sub = gr.subgroup_closure(g, inc["generators"])
            return xm.inclusion_xmod(g, sub, name=name)
        if "identity" in desc:
            return xm.identity_xmod(group(desc["identity"]), name=name)
        if "zero" in desc:
            z = desc["zero"]
            action = (_lookup(doc.actions, z["action"], "action")
                      if "action" in z else None)
            return xm.zero_boundary_xmod(group(z["top"]), group(z["bottom"]),
                                         action=action, name=name)
        action = _lookup(doc.actions, desc["action"], "action")
        return xm.CrossedModule(group(desc["top"]), group(desc["bottom"]),
                                hom(desc["boundary"]), action, name=name)

    def build_module(name, desc):
        return xm.AbelianXMod(group(desc["top"]), group(desc["bottom"]),
                              hom(desc["boundary"]))

    def build_module_action(name, desc):
        actor = _lookup(doc.xmods, desc["actor"], "crossed module")
        module = _lookup(doc.modules, desc["module"], "module")
        if not any(k in desc for k in ("act_top", "act_bottom", "xi")):
            return xm.trivial_xmod_action(actor, module)
        act_top = (_lookup(doc.actions, desc["act_top"], "action")
                   if "act_top" in desc
                   else gr.trivial_action(actor.bottom, module.top))
        act_bottom = (_lookup(doc.actions, desc["act_bottom"], "action")
                      if "act_bottom" in desc
                      else gr.trivial_action(actor.bottom, module.bottom))
        xi = (np.asarray(desc["xi"], dtype=np.int64) if "xi" in desc
              else np.zeros((actor.top.order, module.bottom.order),
                            dtype=np.int64))
        a = xm.XModAction(actor, module, act_top, act_bottom, xi)
        rep = xm.validate_xmod_action(a)
        if not rep.ok:
            raise ValueError(rep.failures[0])
        return a

    def build_morphism(name, desc):
        return xm.XModMorphism(
            _lookup(doc.xmods, desc["src"], "crossed module"),
            _lookup(doc.xmods, desc["dst"], "crossed module"),
            hom(desc["top"]), hom(desc["bottom"]))

    def build_sequence(name, desc):
        s = xm.ShortExactXMod(
            _lookup(doc.morphisms, desc["left"], "morphism"),
            _lookup(doc.morphisms, desc["right"], "morphism"))
        rep = xm.validate_ses(s)
        if not rep.ok:
            raise ValueError(rep.failures[0])
        return s

    def build_module_morphism(name, desc):
        return bar.ModuleMorphism(
            _lookup(doc.module_actions, desc["src"], "module action"),
            _lookup(doc.module_actions, desc["dst"], "module action"),
            hom(desc["alpha"]), hom(desc["beta"]))

    def build_module_sequence(name, desc):
        return bar.ModuleSES(
            _lookup(doc.module_morphisms, desc["left"], "module morphism"),
            _lookup(doc.module_morphisms, desc["right"], "module morphism"))

    _build("group", raw.get("groups", {}), build_group, doc.groups)
    _build("homomorphism", raw.get("homs", {}), build_hom, doc.homs)
    _build("action", raw.get("actions", {}), build_action, doc.actions)
    _build("crossed module", raw.get("xmods", {}), build_xmod, doc.xmods)
    _build("module", raw.get("modules", {}), build_module, doc.modules)
    _build("module action", raw.get("module_actions", {}),
           build_module_action, doc.module_actions)
    _build("morphism", raw.get("morphisms", {}), build_morphism,
           doc.morphisms)
    _build("sequence", raw.get("sequences", {}), build_sequence,
           doc.sequences)
    _build("module morphism", raw.get("module_morphisms", {}),
           build_module_morphism, doc.module_morphisms)
    _build("module sequence", raw.get("module_sequences", {}),
           build_module_sequence, doc.module_sequences)
    return doc


# ---------------------------------------------------------------------------
# object selection


def _pick(table, flag_value, kind, flag):
    if flag_value is not None:
        return flag_value, _lookup(table, flag_value, kind)
    if len(table) == 1:
        return next(iter(table.items()))
    if not table:
        raise InputError(f"document declares no {kind}; nothing to use")
    raise InputError(f"document declares {len(table)} {kind}s; "
                     f"pick one with {flag}")


# ---------------------------------------------------------------------------
# homology command


def _group_entry(n, g):
    return {"degree": n, "rank": g.rank,
            "invariant_factors": list(g.divisors), "pretty": str(g)}


def _write_report_dir(report_dir, name, run, groups):
    """CSV table plus rendered figures for one homology run."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(report_dir, exist_ok=True)
    csv_path = os.path.join(report_dir, "homology.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["degree", "rank", "invariant_factors", "group"])
        for n, g in enumerate(groups):
            w.writerow([n, g.rank, " ".join(str(d) for d in g.divisors),
                        str(g)])

    pmax = max(p for p, _ in run.entry_sizes)
    qmax = max(q for _, q in run.entry_sizes)
    grid = np.full((qmax + 1, pmax + 1), np.nan)
    for (p, q), size in run.entry_sizes.items():
        grid[q, p] = np.log10(max(size, 1))
    fig, ax = plt.subplots(figsize=(4 + 0.4 * pmax, 3 + 0.4 * qmax))
    im = ax.imshow(grid, origin="lower", cmap="viridis")
    ax.set_xlabel("column p")
    ax.set_ylabel("bar degree q")
    ax.set_title(f"bicomplex entry sizes for {name} (log10 generators)")
    fig.colorbar(im, ax=ax)
    for (p, q), size in run.entry_sizes.items():
        ax.text(p, q, str(size), ha="center", va="center", fontsize=7,
                color="white")
    fig.savefig(os.path.join(report_dir, "entry_sizes.png"),
                dpi=150, bbox_inches="tight")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 3))
    stages = list(run.timings)
    ax.bar(range(len(stages)), [run.timings[s] for s in stages])
    ax.set_xticks(range(len(stages)), stages, rotation=45, ha="right")
    ax.set_ylabel("seconds")
    ax.set_title(f"wall time per stage for {name}")
    fig.savefig(os.path.join(report_dir, "timings.png"),
                dpi=150, bbox_inches="tight")
    plt.close(fig)
    return csv_path


def cmd_homology(args):
    doc = parse_input(args.file)
    name, x = _pick(doc.xmods, args.xmod, "crossed module", "--xmod")
    if args.coefficients is not None:
        action = _lookup(doc.module_actions, args.coefficients,
                         "module action")
        if not xm.same_xmod(action.actor, x):
            raise InputError(f"module action '{args.coefficients}' acts "
                             f"for a different crossed module than '{name}'")
        coeffs = bar.module_coefficients(action)
        mode_coeffs = args.coefficients
    else:
        coeffs = bar.integral_coefficients()
        mode_coeffs = "integral"
    run = bar.xmod_homology_range(x, coeffs, args.max_degree,
                                  normalized=args.normalized_bar,
                                  max_entry=args.max_entry)
    out = {
        "command": "homology",
        "xmod": name,
        "coefficients": mode_coeffs,
        "mode": "normalized" if args.normalized_bar else "unnormalized",
        "max_degree": args.max_degree,
        "groups": [_group_entry(n, g) for n, g in enumerate(run.groups)],
        "entry_sizes": {f"{p},{q}": int(s)
                        for (p, q), s in sorted(run.entry_sizes.items())},
        "timings": {k: round(v, 6) for k, v in run.timings.items()},
    }
    if args.report_dir:
        out["report_csv"] = _write_report_dir(args.report_dir, name, run,
                                              run.groups)
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        for n, g in enumerate(run.groups):
            print(f"H_{n} = {g}")
    return 0


# ---------------------------------------------------------------------------
# verify command


def _run_law(law, doc, args):
    maxdeg = args.max_degree
    kw = {"normalized": args.normalized_bar, "max_entry": args.max_entry}
    if law == "inclusion-reduction":
        _, x = _pick(doc.xmods, args.xmod, "crossed module", "--xmod")
        if not x.boundary.is_injective():
            raise InputError("inclusion-reduction needs an injective "
                             "boundary")
        _, img = gr.kernel_image(x.boundary)
        return laws.check_inclusion_reduction(x.bottom, img, maxdeg, **kw)
    if law == "classical-agreement":
        _, x = _pick(doc.xmods, args.xmod, "crossed module", "--xmod")
        if x.top.order != 1:
            raise InputError("classical-agreement needs a trivial top group")
        action = None
        if args.coefficients is not None:
            action = _lookup(doc.actions, args.coefficients, "action")
        return laws.check_classical_agreement(x.bottom, action, maxdeg, **kw)
    if law == "five-term":
        _, s = _pick(doc.sequences, args.sequence, "sequence", "--sequence")
        return laws.check_five_term(s, **kw)
    if law == "weak-invariance":
        _, m = _pick(doc.morphisms, args.morphism, "morphism", "--morphism")
        return laws.check_weak_invariance(m, maxdeg, **kw)
    if law == "h2-epi":
        _, x = _pick(doc.xmods, args.xmod, "crossed module", "--xmod")
        return laws.check_h2_epimorphism(x, **kw)
    if law == "h0-closed-form":
        _, a = _pick(doc.module_actions, args.coefficients,
                     "module action", "--coefficients")
        return laws.check_h0_closed_form(a, **kw)
    if law == "h1-closed-form":
        _, x = _pick(doc.xmods, args.xmod, "crossed module", "--xmod")
        return laws.check_h1_closed_form(x, **kw)
    if law == "coefficient-les":
        _, s = _pick(doc.module_sequences, args.sequence,
                     "module sequence", "--sequence")
        return laws.check_coefficient_les(s, maxdeg, **kw)
    raise InputError(f"unknown law '{law}'")


LAWS = ("inclusion-reduction", "classical-agreement", "five-term",
        "weak-invariance", "h2-epi", "h0-closed-form", "h1-closed-form",
        "coefficient-les")


def cmd_verify(args):
    doc = parse_input(args.file)
    t0 = time.monotonic()
    try:
        rep = _run_law(args.law, doc, args)
    except ValueError as exc:
        rep = laws.LawReport(args.law, False, [], [str(exc)])
    elapsed = time.monotonic() - t0
    if args.format == "json":
        out = rep.as_dict()
        out["command"] = "verify"
        out["mode"] = ("normalized" if args.normalized_bar
                       else "unnormalized")
        out["seconds"] = round(elapsed, 6)
        print(json.dumps(out, indent=2))
    else:
        print(rep)
    return 0 if rep.ok else 1


def cmd_validate(args):
    doc = parse_input(args.file)
    counts = {
        "groups": len(doc.groups),
        "homomorphisms": len(doc.homs),
        "actions": len(doc.actions),
        "crossed modules": len(doc.xmods),
        "modules": len(doc.modules),
        "module actions": len(doc.module_actions),
        "morphisms": len(doc.morphisms),
        "sequences": len(doc.sequences),
        "module morphisms": len(doc.module_morphisms),
        "module sequences": len(doc.module_sequences),
    }
    if args.format == "json":
        print(json.dumps({"command": "validate", "ok": True,
                          "counts": counts}, indent=2))
    else:
        print("valid document: "
              + ", ".join(f"{v} {k}" for k, v in counts.items() if v))
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="xmodhom",
        description="exact homology of finite crossed modules")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, degree=True):
        sp.add_argument("file", help="JSON input document")
        sp.add_argument("--format", choices=("text", "json"),
                        default="text")
        sp.add_argument("--normalized-bar", action="store_true",
                        help="use the normalized bar basis")
        sp.add_argument("--max-entry", type=int,
                        default=bar.DEFAULT_ENTRY_CAP,
                        help="cap on generators in one bicomplex entry")
        if degree:
            sp.add_argument("--max-degree", type=int, default=2)

    sp = sub.add_parser("validate", help="parse and validate a document")
    common(sp, degree=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("homology", help="homology of one crossed module")
    common(sp)
    sp.add_argument("--xmod", help="crossed module name")
    sp.add_argument("--coefficients", help="module action name "
                                           "(default: integral)")
    sp.add_argument("--report-dir", help="write CSV and figures here")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("verify", help="check one law on the document")
    sp.add_argument("law", choices=LAWS)
    common(sp)
    sp.add_argument("--xmod", help="crossed module name")
    sp.add_argument("--sequence", help="(module) sequence name")
    sp.add_argument("--morphism", help="morphism name")
    sp.add_argument("--coefficients", help="action / module action name")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MathError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
