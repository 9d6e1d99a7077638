import argparse

from cr_regular_spheres.certifier import ar_profile_value, profile_ar
from cr_regular_spheres.commands import EXIT_OK, positive_int
from cr_regular_spheres.config import DEFAULT_PROFILE_RESOLUTION


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser('profile', help='dense 1-D scan of |det M|^2 for the AR embedding')
    parser.add_argument('--resolution', type=positive_int, default=DEFAULT_PROFILE_RESOLUTION)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    t_star, value = profile_ar(args.resolution)
    # the profile is invariant under t -> 1 - t
    mirror = 1.0 - t_star
    print(f'min |det M|^2 = {value!r} at |z1|^2 = {t_star!r}')
    print(f'mirror point |z1|^2 = {mirror!r}: {float(ar_profile_value(mirror))!r}')
    return EXIT_OK
