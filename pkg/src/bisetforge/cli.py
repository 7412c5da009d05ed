"""Command line front end: subgroup classification, ring products, and the
verification stages.

Exit codes: 0 success, 1 a verification check failed, 2 usage or domain
errors (unparsable input, unknown names, coefficients outside the ring).
"""

import argparse
import os
import re
import sys

from . import fixtures, verify
from .bisets import BASIS_LABELS, RINGS, format_element, parse_element
from .blocks import PEIRCE_LABELS, PeirceBasis
from .perms import CapacityError, Perm, PermGroup, cyclic_group, symmetric_group


class UsageError(Exception):
    pass


def parse_group_spec(spec):
    """A built-in name (S3, S3xS3, Cn, Sn) or ';'-separated cycle notation."""
    text = spec.strip()
    if not text:
        raise UsageError("empty group description")
    compact = text.replace(" ", "")
    if compact.upper() in ("S3XS3", "S3*S3"):
        return verify.pair_group(), "S3xS3"
    m = re.fullmatch(r"([SCsc])(\d+)", compact)
    if m:
        kind, n = m.group(1).upper(), int(m.group(2))
        if kind == "S":
            if not 1 <= n <= 6:
                raise UsageError("S%d is out of range, use S1..S6" % n)
            return symmetric_group(n), "S%d" % n
        if not 1 <= n <= 30:
            raise UsageError("C%d is out of range, use C1..C30" % n)
        return cyclic_group(n), "C%d" % n
    if "(" not in compact:
        raise UsageError(
            "unknown group %r; use S3, S3xS3, Cn, Sn, or cycle notation" % text
        )
    chunks = [c for c in text.split(";") if c.strip()]
    degree = 1
    for tok in re.findall(r"\d+", text):
        degree = max(degree, int(tok))
    try:
        gens = [Perm.from_cycle_string(c, degree) for c in chunks]
    except ValueError as exc:
        raise UsageError(str(exc))
    return PermGroup(degree, gens), text.strip()


def cmd_subgroups(args):
    group, display = parse_group_spec(args.group)
    canonical = verify.pair_group()
    if group.degree == 6 and group.element_set == canonical.element_set:
        classes, assignment = verify.match_classes(group, verify.labeled_subgroups())
        labels = [
            BASIS_LABELS[a] if a is not None else None for a in assignment
        ]
    else:
        classes = group.conjugacy_classes_of_subgroups()
        labels = [None] * len(classes)
    rows = []
    for i, cls in enumerate(classes):
        rep = cls[0]
        gens = [p.cycle_string() for p in rep.generators] or ["()"]
        rows.append(
            {
                "index": i,
                "order": rep.order,
                "class_size": len(cls),
                "label": labels[i],
                "generators": gens,
            }
        )
    payload = {
        "group": display,
        "degree": group.degree,
        "group_order": group.order,
        "class_count": len(rows),
        "classes": rows,
    }
    if args.json:
        sys.stdout.write(fixtures.canonical_dumps(payload))
        return 0
    print(
        "group %s of order %d on %d points: %d conjugacy classes of subgroups"
        % (display, group.order, group.degree, len(rows))
    )
    print("%5s %6s %6s %-9s %s" % ("index", "order", "class", "label", "generators"))
    for r in rows:
        print(
            "%5d %6d %6d %-9s %s"
            % (
                r["index"],
                r["order"],
                r["class_size"],
                r["label"] or "-",
                " ".join(r["generators"]),
            )
        )
    return 0


def parse_operand(text, ring, peirce):
    t = text.strip()
    if t in PEIRCE_LABELS:
        return peirce.element_by_label(t, ring)
    if ":" not in t:
        return parse_element(t + ":1", ring)
    return parse_element(t, ring)


def cmd_mult(args):
    peirce = PeirceBasis.load(args.fixture_dir)
    try:
        a = parse_operand(args.a, args.ring, peirce)
        b = parse_operand(args.b, args.ring, peirce)
    except ValueError as exc:
        raise UsageError(str(exc))
    prod = a * b
    if args.json:
        sys.stdout.write(
            fixtures.canonical_dumps(
                {
                    "ring": args.ring,
                    "a": format_element(a),
                    "b": format_element(b),
                    "product": format_element(prod),
                }
            )
        )
        return 0
    print("ring %s" % args.ring)
    print("  a = %s" % format_element(a))
    print("  b = %s" % format_element(b))
    print("  a * b = %s" % format_element(prod))
    return 0


def cmd_verify(args):
    stages = None if args.stage == "all" else args.stage
    report = verify.run(stages=stages, fixture_dir=args.fixture_dir)
    emitted = []
    if args.emit == "fixtures":
        out_dir = os.path.join(os.getcwd(), "fixtures.regenerated")
        emitted = verify.emit_fixtures(out_dir, fixture_dir=args.fixture_dir)
    if args.json:
        sys.stdout.write(fixtures.canonical_dumps(report))
    else:
        for st in report["stages"]:
            for c in st["checks"]:
                print(
                    "%s %s/%s: %s"
                    % (
                        "PASS" if c["status"] == "pass" else "FAIL",
                        st["stage"],
                        c["name"],
                        c["detail"],
                    )
                )
        print("result: %s" % report["status"].upper())
    for p in emitted:
        print("wrote %s" % os.path.relpath(p), file=sys.stderr)
    return 0 if report["status"] == "pass" else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="bisetforge",
        description="exact workbench for the double Burnside ring of S3",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sg = sub.add_parser(
        "subgroups", help="classify the subgroups of a group up to conjugacy"
    )
    sg.add_argument(
        "group",
        help="S3, S3xS3, Cn, Sn, or ';'-separated generators in 1-based "
        "cycle notation such as '(1,2)(3,4); (1,2,3)'",
    )
    sg.add_argument("--json", action="store_true", help="canonical JSON output")

    mu = sub.add_parser("mult", help="multiply two ring elements")
    mu.add_argument("a", help="element: 'H_{1,0}', 'eps2', or 'H_{0,0}:-1/2,H_{1,0}:1'")
    mu.add_argument("b", help="element, same syntax as the first")
    mu.add_argument("--ring", choices=RINGS, default="Q")
    mu.add_argument("--json", action="store_true", help="canonical JSON output")
    mu.add_argument("--fixture-dir", default=None, help="alternate fixture directory")

    ve = sub.add_parser("verify", help="run the verification stages")
    ve.add_argument(
        "--stage",
        choices=("all",) + verify.STAGE_ORDER,
        default="all",
        help="restrict to one stage (default: all)",
    )
    ve.add_argument(
        "--emit",
        choices=("fixtures",),
        default=None,
        help="regenerate the fixture set into ./fixtures.regenerated for diffing",
    )
    ve.add_argument("--json", action="store_true", help="canonical JSON report")
    ve.add_argument("--fixture-dir", default=None, help="alternate fixture directory")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "subgroups":
            return cmd_subgroups(args)
        if args.command == "mult":
            return cmd_mult(args)
        return cmd_verify(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, CapacityError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
