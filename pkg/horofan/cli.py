#!/usr/bin/env python3
"""
horofan command line interface.

Every command reads fan or map documents, prints a human-readable report (or the
canonical JSON report with --json) and exits with 0 when the check passed or the
construction succeeded, 1 on a negative verdict and 2 on malformed input.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .coloured import ColouredCone, find_in_closure, validate_fan
from .config import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_UNSTABLE_METHOD,
    EXIT_CHECK_FAILED,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    LOG_FORMAT,
    VERBOSE_LOG_LEVEL,
)
from .cone import cone_from_generators
from .criteria import check_gms_morphism, check_isomorphism, gms_fan, is_toroidal, is_unstable, unstable_cones
from .documents import (
    ConeEntry,
    FanDocument,
    MapDocument,
    dumps_report,
    fan_entry,
    lattice_entry,
    load_map,
    matrix_entry,
    read_document,
    serialize,
    stacky_document,
    to_stacky_fan,
)
from .errors import CfViolationError, DocumentParseError, HorofanError
from .fantastack import (
    FantastackInput,
    build_fantastack,
    check_cf,
    class_group,
    cox_beta,
    is_regular,
    is_simplicial,
    root_stack_beta,
    t_prime_rank,
)
from .lattice import IntMatrix, Vector
from .report import ValidationReport
from .stacky import (
    StackyColouredFan,
    decolouration_map,
    describe_diagonalizable_group,
    k_beta,
    product_stacky_fan,
    validate_map,
    validate_stacky_fan,
)

logger = logging.getLogger(__name__)

Outcome = Tuple[int, Dict[str, Any], str]


def parse_vectors(text: str, option: str) -> List[Vector]:
    """Read '1,0;0,1' as [(1, 0), (0, 1)]."""
    try:
        return [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError:
        raise DocumentParseError(f"cannot read integer vectors from {text!r}", option)


def _cone_payload(cc: Optional[ColouredCone]) -> Optional[Dict[str, Any]]:
    if cc is None:
        return None
    return ConeEntry(generators=[list(r) for r in cc.cone.rays], colours=sorted(cc.colour_set)).model_dump(mode="json")


def _check_payload(checks) -> List[Dict[str, Any]]:
    return [c.model_dump(mode="json", exclude_none=True) for c in checks]


def _check_lines(checks) -> str:
    lines = []
    for check in checks:
        line = f"  {check.name}: {check.status.value}"
        if check.witness and not check.passed:
            line += f" ({check.witness})"
        lines.append(line)
    return "\n".join(lines)


def _verdict(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_CHECK_FAILED


class HorofanCLI:
    """Command handlers; each returns (exit code, JSON payload, human text)"""

    def load_fan(self, path: str, strict: bool = True) -> StackyColouredFan:
        document = read_document(path)
        if not isinstance(document, FanDocument):
            raise DocumentParseError("expected a fan document", path)
        return to_stacky_fan(document, strict=strict)

    def load_map(self, path: str):
        document = read_document(path)
        if not isinstance(document, MapDocument):
            raise DocumentParseError("expected a map document", path)
        return load_map(document, Path(path).parent)

    def write(self, path: str, s: StackyColouredFan, name: Optional[str]) -> None:
        Path(path).write_text(serialize(stacky_document(s, name)), encoding="utf-8")
        logger.info(f"wrote {path}")

    def validate(self, args) -> Outcome:
        document = read_document(args.document)
        if isinstance(document, MapDocument):
            kind = "map"
            report = validate_map(load_map(document, Path(args.document).parent))
        else:
            kind = "fan"
            s = to_stacky_fan(document, strict=False)
            report = ValidationReport(checks=validate_fan(s.fan).checks + validate_stacky_fan(s).checks)
        payload = {"kind": kind, "valid": report.valid, "checks": _check_payload(report.checks)}
        text = f"{kind} is {'valid' if report.valid else 'invalid'}\n{_check_lines(report.checks)}"
        return _verdict(report.valid), payload, text

    def kbeta(self, args) -> Outcome:
        structure = k_beta(self.load_fan(args.fan))
        group = describe_diagonalizable_group(structure)
        payload = {"group": group, "free_rank": structure.free_rank, "torsion": list(structure.torsion)}
        return EXIT_OK, payload, f"{group} (rank {structure.free_rank}, torsion {list(structure.torsion)})"

    def toroidal(self, args) -> Outcome:
        toroidal = is_toroidal(self.load_fan(args.fan).fan)
        return _verdict(toroidal), {"toroidal": toroidal}, "toroidal" if toroidal else "not toroidal"

    def decolour(self, args) -> Outcome:
        s = self.load_fan(args.fan)
        self.write(args.output, decolouration_map(s).domain, None)
        return EXIT_OK, {"output": args.output}, f"decoloured fan written to {args.output}"

    def unstable(self, args) -> Outcome:
        s = self.load_fan(args.fan)
        if args.cone is None:
            found = unstable_cones(s, args.method)
            payload = {"method": args.method, "unstable": [_cone_payload(cc) for cc in found]}
            return EXIT_OK, payload, "\n".join(str(cc) for cc in found)
        cone = cone_from_generators(parse_vectors(args.cone, "--cone"), s.fan.rank)
        cc = find_in_closure(s.fan, cone)
        unstable = is_unstable(s, cc, args.method)
        payload = {"method": args.method, "cone": _cone_payload(cc), "unstable": unstable}
        return _verdict(unstable), payload, f"{cc} is {'unstable' if unstable else 'not unstable'}"

    def gms(self, args) -> Outcome:
        result = gms_fan(self.load_fan(args.fan))
        payload: Dict[str, Any] = {
            "exists": result.exists,
            "reason": result.reason.value,
            "unstable": [_cone_payload(cc) for cc in result.unstable],
        }
        lines = [f"exists: {result.exists}", f"reason: {result.reason.value}"]
        if result.tau is not None:
            payload.update(
                tau=_cone_payload(result.tau),
                gms_lattice=lattice_entry(result.gms_lattice).model_dump(mode="json"),
                gms_fan=fan_entry(result.gms_fan).model_dump(mode="json"),
                Phi=matrix_entry(result.Phi),
                projection_phi=matrix_entry(result.projection_phi),
            )
            lines.append(f"tau: {result.tau}")
            lines.extend(f"  {cc}" for cc in result.gms_fan.maximal_cones)
        return _verdict(result.exists), payload, "\n".join(lines)

    def iso(self, args) -> Outcome:
        verdict = check_isomorphism(self.load_map(args.map))
        checks = (verdict.iso1, verdict.iso2, verdict.iso3)
        payload = {"overall": verdict.overall, "checks": _check_payload(checks)}
        text = f"isomorphism: {verdict.overall}\n{_check_lines(checks)}"
        return _verdict(verdict.overall), payload, text

    def gms_check(self, args) -> Outcome:
        verdict = check_gms_morphism(self.load_map(args.map))
        checks = (verdict.gms1, verdict.gms2, verdict.gms3, verdict.gms4)
        payload = {"overall": verdict.overall, "tau": _cone_payload(verdict.tau), "checks": _check_payload(checks)}
        text = f"good moduli space morphism: {verdict.overall}\n{_check_lines(checks)}"
        return _verdict(verdict.overall), payload, text

    def _fantastack_outcome(self, fi: FantastackInput, args) -> Outcome:
        report = check_cf(fi)
        payload: Dict[str, Any] = {"beta": matrix_entry(fi.beta), "checks": _check_payload(report.checks)}
        if not report.valid:
            return EXIT_CHECK_FAILED, payload, f"fantastack conditions failed\n{_check_lines(report.checks)}"
        s = build_fantastack(fi)
        payload["fantastack"] = stacky_document(s).model_dump(mode="json", exclude_none=True)
        payload["t_prime_rank"] = t_prime_rank(fi)
        if getattr(args, "output", None):
            self.write(args.output, s, None)
        lines = [f"beta: {fi.beta}", f"fantastack on Z^{fi.n}:"]
        lines.extend(f"  {cc}" for cc in s.fan.maximal_cones)
        return EXIT_OK, payload, "\n".join(lines)

    def fantastack(self, args) -> Outcome:
        f = self.load_fan(args.fan).fan
        columns = [c.point for c in f.lattice.colours]
        if args.extra_columns:
            columns += parse_vectors(args.extra_columns, "--extra-columns")
        fi = FantastackInput(base_fan=f, beta=IntMatrix.from_columns(columns, rows=f.rank))
        return self._fantastack_outcome(fi, args)

    def cox(self, args) -> Outcome:
        f = self.load_fan(args.fan).fan
        code, payload, text = self._fantastack_outcome(cox_beta(f), args)
        payload.update(simplicial=is_simplicial(f), regular=is_regular(f))
        return code, payload, f"{text}\nsimplicial: {payload['simplicial']}\nregular: {payload['regular']}"

    def rootstack(self, args) -> Outcome:
        f = self.load_fan(args.fan).fan
        ray = parse_vectors(args.ray, "--ray")
        if len(ray) != 1:
            raise DocumentParseError("exactly one ray generator is expected", "--ray")
        return self._fantastack_outcome(root_stack_beta(f, ray[0], args.order), args)

    def classgroup(self, args) -> Outcome:
        structure = class_group(self.load_fan(args.fan).fan)
        payload = {"group": structure.label(), "free_rank": structure.free_rank, "torsion": list(structure.torsion)}
        return EXIT_OK, payload, f"{structure.label()} (rank {structure.free_rank}, torsion {list(structure.torsion)})"

    def product(self, args) -> Outcome:
        s = product_stacky_fan(self.load_fan(args.first), self.load_fan(args.second))
        self.write(args.output, s, None)
        return EXIT_OK, {"output": args.output}, f"product fan written to {args.output}"


def build_parser(cli: HorofanCLI) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the canonical JSON report")
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug output to stderr")

    parser = argparse.ArgumentParser(prog="horofan", description="Stacky coloured fan toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, parents=[common])
        sub.set_defaults(handler=handler)
        return sub

    sub = command("validate", cli.validate, "Validate a fan or map document")
    sub.add_argument("document")
    command("kbeta", cli.kbeta, "Describe the group K_beta").add_argument("fan")
    command("toroidal", cli.toroidal, "Whether the fan has no colours").add_argument("fan")
    sub = command("decolour", cli.decolour, "Write the decoloured fan")
    sub.add_argument("fan")
    sub.add_argument("-o", "--output", required=True)
    sub = command("unstable", cli.unstable, "Decide or list unstable coloured cones")
    sub.add_argument("fan")
    sub.add_argument("--cone", help="Generators, e.g. '1,0;0,1'; lists every unstable cone when omitted")
    sub.add_argument("--method", type=int, choices=(1, 2, 3), default=DEFAULT_UNSTABLE_METHOD)
    command("gms", cli.gms, "Construct the good moduli space fan").add_argument("fan")
    command("iso", cli.iso, "Check the isomorphism criteria of a map").add_argument("map")
    command("gms-check", cli.gms_check, "Check the good moduli space criteria of a map").add_argument("map")
    sub = command("fantastack", cli.fantastack, "Build the fantastack of a base fan")
    sub.add_argument("fan")
    sub.add_argument("--extra-columns", help="Columns after the colour points, e.g. '1,0;1,1'")
    sub.add_argument("-o", "--output")
    sub = command("cox", cli.cox, "Build the Cox fantastack")
    sub.add_argument("fan")
    sub.add_argument("-o", "--output")
    sub = command("rootstack", cli.rootstack, "Build a root stack over a non-coloured ray")
    sub.add_argument("fan")
    sub.add_argument("--ray", required=True)
    sub.add_argument("--order", type=int, required=True)
    sub.add_argument("-o", "--output")
    command("classgroup", cli.classgroup, "Compute the class group").add_argument("fan")
    sub = command("product", cli.product, "Write the product of two stacky fans")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.add_argument("-o", "--output", required=True)
    return parser


def run_command(argv: Optional[List[str]] = None, configure_logging: bool = False) -> int:
    cli = HorofanCLI()
    parser = build_parser(cli)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_INPUT_ERROR

    if configure_logging:
        logging.basicConfig(level=VERBOSE_LOG_LEVEL if args.verbose else DEFAULT_LOG_LEVEL, format=LOG_FORMAT)

    try:
        code, payload, text = args.handler(args)
    except CfViolationError as e:
        code, payload, text = EXIT_CHECK_FAILED, {"error": e.reason, "failed": e.failed}, f"Error: {e.reason}"
    except (HorofanError, ValueError, OSError) as e:
        logger.debug("input error", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    print(dumps_report(payload) if args.json else text)
    return code


def main():
    sys.exit(run_command(sys.argv[1:], configure_logging=True))


if __name__ == "__main__":
    main()
