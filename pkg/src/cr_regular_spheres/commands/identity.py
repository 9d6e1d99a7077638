import argparse
from fractions import Fraction
from pathlib import Path

from cr_regular_spheres.catalog import verify_ar_identity
from cr_regular_spheres.commands import EXIT_IDENTITY_FAILURE, EXIT_OK, build_manifest
from cr_regular_spheres.storage import identity_to_dict, manifest_path, save_manifest, write_json
from cr_regular_spheres.wirtinger_poly import WPolynomial

# one-term fault: |z1|^2 |z2|^2 / 1000 added to the left-hand side
FAULT = WPolynomial.monomial((1, 1), (1, 1), Fraction(1, 1000))


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser('identity', help='check z2 dP/dzbar1 - z1 dP/dzbar2 against its expansion exactly')
    parser.add_argument('--inject-fault', action='store_true', help='perturb the left-hand side by one term')
    parser.add_argument('--report', type=Path, default=None, help='optional JSON path for both sides and the residual')
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    check = verify_ar_identity(FAULT if args.inject_fault else None)
    print(f'LHS ({len(check.lhs)} terms): {check.lhs}')
    print(f'RHS ({len(check.rhs)} terms): {check.rhs}')
    print(f'residual ({len(check.residual)} terms): {check.residual}')
    if args.report is not None:
        manifest = build_manifest('identity', {'inject_fault': args.inject_fault})
        data = identity_to_dict(check)
        data['manifest'] = {**manifest.to_dict(include_wall_time=False), 'sidecar': manifest_path(args.report).name}
        write_json(args.report, data)
        save_manifest(args.report, manifest)
    if not check.holds:
        print('identity FAILED')
        return EXIT_IDENTITY_FAILURE
    print('identity holds exactly')
    return EXIT_OK
