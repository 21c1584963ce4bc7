"""Run the exact certificates for P0..P4 and print a summary table.

    python3 scripts/certify_all.py --report certificates.json
"""

import argparse
import json

from lcentropy.series import certify_all


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--report", help="write the full certificates as JSON")
    args = ap.parse_args()

    certs = certify_all()
    print(f"{'family':<8}{'status':<10}{'threshold':>10}{'checkpoints':>13}{'seconds':>9}")
    for name, c in certs.items():
        print(f"{name:<8}{c.status:<10}{c.threshold:>10}{str(all(c.checkpoints.values())):>13}{c.seconds:>9.3f}")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump({k: c.to_json() for k, c in certs.items()}, fh, indent=2, sort_keys=True)
    raise SystemExit(0 if all(c.proven for c in certs.values()) else 1)


if __name__ == "__main__":
    main()
