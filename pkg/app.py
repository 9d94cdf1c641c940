"""
cstarnet command line: axioms | certify | replay | net | witness
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from certifier import (
    INCONCLUSIVE,
    AxiomConfig,
    CertificationReport,
    ScenarioConfig,
    certify,
    replay,
    run_axioms,
)
from config import Config
from errors import CStarNetError, ReplayMismatchError
from tools.file_service import ReportFileService
from tools.serialization import algebra_from_json, module_element_from_json, spec_from_json, spec_to_json
from uniformity import distance_matrix, epsilon_net, noncompactness_witness, verify_net

logger = logging.getLogger("cstarnet")

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_CERTIFICATE_FAILURE = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_MALFORMED = 65
EXIT_MISSING_INPUT = 66
EXIT_IO = 74


class CliParser(argparse.ArgumentParser):
    """argparse with the usage exit code moved to 64"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_scenario(path: str, args: argparse.Namespace) -> ScenarioConfig:
    payload = ReportFileService.read_json(path)
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.specs is not None:
        payload["spec_battery_size"] = args.specs
    if args.tol is not None:
        payload.setdefault("tolerances", {})["metric"] = args.tol
    return ScenarioConfig.model_validate(payload)


def cmd_axioms(args: argparse.Namespace) -> int:
    payload = ReportFileService.read_json(args.config) if args.config else {}
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.specs is not None:
        payload["specs"] = args.specs
    if args.tol is not None:
        payload.setdefault("tolerances", {})["metric"] = args.tol
    report = run_axioms(AxiomConfig.model_validate(payload))

    files = ReportFileService(args.out)
    files.write_json(f"{report.name}.json", report.model_dump(mode="json"))

    if not report.admissible:
        for entry in report.admissibility:
            if not entry["ok"]:
                print(f"NOT ADMISSIBLE {entry['spec_id']}: violation {entry['worst_violation']:.3e}, "
                      f"norm excess {entry['norm_violation']:.3e}")
        return EXIT_CERTIFICATE_FAILURE
    failed = [p for p in report.properties if not p.passed]
    for p in failed:
        print(f"FAILED {p.name}: worst slack {p.worst:.3e}; counterexample {json.dumps(p.counterexample)}")
    if failed:
        return EXIT_PROPERTY_FAILURE
    print(f"{report.name}: all {len(report.properties)} properties hold")
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    files = ReportFileService(args.out)
    code = EXIT_OK
    for path in args.configs:
        config = _load_scenario(path, args)
        report = certify(config)
        files.write_json(f"{config.name}.json", report.model_dump(mode="json"))
        files.write_csv(f"{config.name}_tails.csv", ["D", "kappa_D"],
                        [[t.D, t.kappa] for t in report.compactness.tails])
        files.write_csv(f"{config.name}_nets.csv", ["D", "eps", "spec_id", "net_size", "covered"],
                        [[n.D, n.epsilon, n.spec_id, n.net_size, n.covered] for n in report.boundedness.nets])
        print(f"{config.name}: {report.verdict}")
        if report.verdict == INCONCLUSIVE:
            code = max(code, EXIT_INCONCLUSIVE)
    return code


def cmd_replay(args: argparse.Namespace) -> int:
    report = CertificationReport.model_validate(ReportFileService.read_json(args.report))
    config = _load_scenario(args.config, args) if args.config else None
    ok = replay(report, config, tol=args.tol)
    print(f"{report.scenario}: replay {'passed' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_CERTIFICATE_FAILURE


def cmd_net(args: argparse.Namespace) -> int:
    points_payload = ReportFileService.read_json(args.points)
    spec_payload = ReportFileService.read_json(args.spec)
    algebra = algebra_from_json(points_payload["algebra"])
    points = [module_element_from_json(algebra, p) for p in points_payload["points"]]
    spec = spec_from_json(algebra, spec_payload["spec"] if "spec" in spec_payload else spec_payload)

    report = epsilon_net(points, spec, args.epsilon)
    verified = verify_net(points, spec, report, args.tol)
    files = ReportFileService(args.out)
    files.write_json(f"net_{spec.spec_id}.json", {**report.as_dict(), "verified": verified})
    files.write_distance_matrix(f"distances_{spec.spec_id}.csv", distance_matrix(spec, points))
    print(f"{spec.spec_id}: {report.size} centers at ε={args.epsilon} ({'verified' if verified else 'NOT verified'})")
    return EXIT_OK if verified else EXIT_CERTIFICATE_FAILURE


def cmd_witness(args: argparse.Namespace) -> int:
    config = _load_scenario(args.config, args)
    algebra = config.build_algebra()
    result = noncompactness_witness(config.build_generator(algebra), algebra, config.top,
                                    config.witness_delta, variant=config.metric_variant)
    payload = result.as_dict()
    if result.conclusive:
        payload["spec"] = spec_to_json(result.spec)
    ReportFileService(args.out).write_json(f"{config.name}_witness.json", payload)
    print(f"{config.name}: witness {'found' if result.conclusive else 'inconclusive'} ({result.reason})")
    return EXIT_OK if result.conclusive else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output directory (default: $CSTARNET_OUTPUT_DIR)")
    common.add_argument("--seed", type=int, default=None, help="override the configured seed")
    common.add_argument("--tol", type=float, default=None, help="override the metric tolerance")
    common.add_argument("--specs", type=int, default=None, help="override the spec battery size")
    common.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    common.add_argument("-v", "--verbose", action="store_true", help="log debug output")

    parser = CliParser(prog="cstarnet", description="Uniform structures and A-compactness at desk scale")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    axioms = sub.add_parser("axioms", parents=[common], help="run the pseudo-metric property suite")
    axioms.add_argument("config", nargs="?", help="axiom config JSON (defaults apply when omitted)")
    axioms.set_defaults(handler=cmd_axioms)

    cert = sub.add_parser("certify", parents=[common], help="certify scenario configs")
    cert.add_argument("configs", nargs="+", help="scenario config JSON files")
    cert.set_defaults(handler=cmd_certify)

    rep = sub.add_parser("replay", parents=[common], help="re-verify a certification report")
    rep.add_argument("report", help="certification report JSON")
    rep.add_argument("--config", default=None, help="scenario config to replay against")
    rep.set_defaults(handler=cmd_replay)

    net = sub.add_parser("net", parents=[common], help="build and verify an ε-net")
    net.add_argument("points", help="points JSON")
    net.add_argument("spec", help="pseudo-metric spec JSON")
    net.add_argument("epsilon", type=float, help="net radius")
    net.set_defaults(handler=cmd_net)

    wit = sub.add_parser("witness", parents=[common], help="build the non-compactness witness of a scenario")
    wit.add_argument("config", help="scenario config JSON")
    wit.set_defaults(handler=cmd_witness)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else Config.LOG_LEVEL
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s'
    )

    try:
        Config.validate()
    except ValueError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE

    try:
        return args.handler(args)
    except FileNotFoundError as e:
        logger.error(f"❌ Missing input: {e}")
        return EXIT_MISSING_INPUT
    except ReplayMismatchError as e:
        logger.error(f"❌ {e}")
        return EXIT_CERTIFICATE_FAILURE
    except (json.JSONDecodeError, ValidationError, KeyError, CStarNetError) as e:
        logger.error(f"❌ Malformed input: {e}")
        return EXIT_MALFORMED
    except OSError as e:
        logger.error(f"❌ I/O error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
