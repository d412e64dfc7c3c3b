"""Command-line frontend.

Subcommands: profiles, plan, modulate, simulate, range, bruteforce,
detect, chirp-test. Exit codes: 0 success, 1 infeasible attack or failed
analysis, 2 usage error, 3 I/O or format error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import authsim, defense, devices, diode, injection, mic, optics
from . import profiles as profile_store
from . import signals, wavio
from .errors import BudgetError, DeviceNotFoundError, FormatError

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _emit(rows, header, fmt):
    if fmt == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(str(v) for v in row))
    else:
        widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows
                  else len(str(h)) for i, h in enumerate(header)]
        print("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
        for row in rows:
            print("  ".join(str(v).ljust(w) for v, w in zip(row, widths)))


def cmd_profiles(args) -> int:
    rows = [(d.name, d.backend, d.category, "yes" if d.requires_auth else "no",
             f"{d.min_power_mw:g}") for d in devices.load_devices()]
    _emit(rows, ["name", "backend", "category", "requires_auth", "min_power_mw"],
          args.format)
    return EXIT_OK


def _scenario_from_args(args) -> tuple[injection.AttackScenario, int]:
    if args.scenario:
        scenario, trials = injection.load_scenario(args.scenario)
        overrides = {}
        if args.device:
            overrides["device"] = devices.lookup_device(args.device)
        if args.budget_mw is not None:
            overrides["budget_mw"] = args.budget_mw
        if args.distance_m is not None:
            overrides["distance_m"] = args.distance_m
        if args.seed is not None:
            overrides["rng_seed"] = args.seed
        if overrides:
            from dataclasses import replace
            scenario = replace(scenario, **overrides)
        if args.trials is not None:
            trials = args.trials
        return scenario, trials
    if not args.device or args.budget_mw is None or args.distance_m is None:
        raise ValueError("--device, --budget-mw and --distance-m are required "
                         "when no --scenario file is given")
    device = devices.lookup_device(args.device)
    diode_profile = profile_store.get_diode(args.diode)
    path = optics.OpticalPath.default(args.distance_m,
                                      diode_profile.wavelength_nm)
    scenario = injection.AttackScenario(
        device=device,
        diode=diode_profile,
        path=path,
        aperture=optics.Aperture(device.port_diameter_m),
        budget_mw=args.budget_mw,
        distance_m=args.distance_m,
        wake_word_matched=args.wake_word_matched,
        rng_seed=args.seed if args.seed is not None else 0,
    )
    return scenario, args.trials if args.trials is not None else 10


def cmd_plan(args) -> int:
    scenario, _ = _scenario_from_args(args)
    report = injection.simulate_attack(scenario, trials=1)
    op = report.operating_point
    emitted = diode.average_power(scenario.diode, op)
    frac = optics.capture_fraction(report.spot_m, scenario.aperture)
    rows = [
        ("device", scenario.device.name),
        ("diode", scenario.diode.name),
        ("beam_visible", "yes" if scenario.path.beam_visible else "no"),
        ("budget_mw", f"{scenario.budget_mw:g}"),
        ("distance_m", f"{scenario.distance_m:g}"),
        ("i_dc_ma", f"{op.bias_ma:.6f}"),
        ("i_pp_ma", f"{op.peak_to_peak_ma:.6f}"),
        ("emitted_mw", f"{emitted:.9g}"),
        ("spot_m", f"{report.spot_m:.9g}"),
        ("capture_fraction", f"{frac:.9g}"),
        ("received_mw", f"{report.received_mw:.9g}"),
        ("success_probability", f"{report.success_probability:.6f}"),
        ("feasible", "true" if report.feasible else "false"),
    ]
    if report.notes:
        rows.append(("notes", report.notes))
    _emit(rows, ["field", "value"], args.format)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_modulate(args) -> int:
    audio = wavio.load_wav(args.infile)
    diode_profile = profile_store.get_diode(args.diode)
    op = diode.optimize_operating_point(diode_profile, args.budget_mw)
    drive = diode.modulate(diode_profile, op, audio)
    out = args.out
    if out.endswith(".wav"):
        sidecar = args.sidecar or out[:-4] + ".params.csv"
        diode.save_drive_wav(drive, op, out, sidecar)
        print(f"wrote {out} and {sidecar}")
    elif out.endswith(".csv"):
        diode.save_drive_csv(drive, out)
        print(f"wrote {out}")
    else:
        raise ValueError(f"--out must end in .csv or .wav, got {out!r}")
    print(f"operating point: I_DC = {op.bias_ma:.3f} mA, "
          f"I_pp = {op.peak_to_peak_ma:.3f} mA")
    return EXIT_OK


def cmd_simulate(args) -> int:
    scenario, trials = injection.load_scenario(args.scenario)
    if args.trials is not None:
        trials = args.trials
    if args.seed is not None:
        from dataclasses import replace
        scenario = replace(scenario, rng_seed=args.seed)
    report = injection.simulate_attack(scenario, trials)
    rows = [("device", scenario.device.name),
            ("distance_m", f"{scenario.distance_m:g}")] + report.csv_rows()
    three = injection.consecutive_success_criterion(report.trial_outcomes, 3)
    rows.append(("three_consecutive_success", "true" if three else "false"))
    _emit(rows, ["field", "value"], args.format)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_range(args) -> int:
    device = devices.lookup_device(args.device)
    diode_profile = profile_store.get_diode(args.diode)
    op = diode.optimize_operating_point(diode_profile, args.budget_mw)
    emitted = diode.average_power(diode_profile, op)
    path = optics.OpticalPath.default(1.0, diode_profile.wavelength_nm)
    aperture = optics.Aperture(device.port_diameter_m)
    reach = optics.max_range(path, aperture, emitted, device.min_power_mw)
    rows = [("device", device.name),
            ("budget_mw", f"{args.budget_mw:g}"),
            ("emitted_mw", f"{emitted:.9g}"),
            ("required_mw", f"{device.min_power_mw:g}"),
            ("max_range_m", f"{reach:.2f}")]
    if reach >= optics.MAX_RANGE_CAP_M:
        rows.append(("note", "unbounded at model scale"))
    _emit(rows, ["field", "value"], args.format)
    return EXIT_OK if reach > 0 else EXIT_INFEASIBLE


def _parse_policy(spec: str) -> authsim.LockPolicy:
    parts = spec.split(":")
    kind = parts[0].replace("_", "-")
    if kind == "unlimited" and len(parts) == 1:
        return authsim.LockPolicy.unlimited()
    if kind == "max-attempts" and len(parts) == 2:
        return authsim.LockPolicy.max_attempts(int(parts[1]))
    if kind == "delay-after" and len(parts) == 3:
        return authsim.LockPolicy.delay_after(int(parts[1]), float(parts[2]))
    raise ValueError(
        f"bad policy {spec!r}; use unlimited, max-attempts:N or delay-after:N:SECONDS")


def cmd_bruteforce(args) -> int:
    policy = _parse_policy(args.policy)
    row = authsim.summary_row(policy, args.digits, args.per_attempt_s)
    _emit([row], ["policy", "digits", "per_attempt_s", "worst_s", "mean_s",
                  "success_prob"], args.format)
    et = authsim.expected_time(policy, args.digits, args.per_attempt_s)
    if args.format != "csv":
        print(f"worst case: {et.worst_s / 3600:.1f} h, "
              f"mean: {et.mean_s / 3600:.2f} h, "
              f"success probability: {et.success_prob:g}")
    if args.secret is not None:
        result = authsim.enumerate_pins(policy, args.digits, args.per_attempt_s,
                                        args.secret, args.order, args.seed)
        print(f"secret {args.secret}: {result.outcome} after "
              f"{result.attempts_made} attempts, {result.elapsed_s:.1f} s "
              f"({result.elapsed_s / 3600:.2f} h)")
        return EXIT_OK if result.outcome == "unlocked" else EXIT_INFEASIBLE
    return EXIT_OK


def cmd_detect(args) -> int:
    channel_set = defense.ChannelSet.from_wav(args.infile)
    verdict = defense.detect_injection(
        channel_set, threshold=args.threshold,
        energy_floor=args.energy_floor, frame=args.frame)
    if args.format != "csv":
        print(f"verdict: {verdict.status}")
        if verdict.notes:
            print(f"notes: {verdict.notes}")
    _emit(verdict.csv_rows(),
          ["channel", "energy", "median_similarity", "implicated"], args.format)
    return EXIT_OK if verdict.status == defense.CLEAN else EXIT_INFEASIBLE


def cmd_chirp_test(args) -> int:
    sweep = signals.generate_chirp(args.f_start, args.f_end, args.duration,
                                   args.sample_rate)
    diode_profile = profile_store.get_diode(args.diode)
    mic_profile = profile_store.get_mic(args.mic)
    op = diode.optimize_operating_point(diode_profile, args.budget_mw)
    drive = diode.modulate(diode_profile, op, sweep)
    light = diode.emitted_light(diode_profile, drive)
    path = optics.OpticalPath.ideal(args.distance_m,
                                    diode_profile.wavelength_nm)
    aperture = optics.Aperture(0.001)
    at_port = optics.attenuate(light, path, aperture, args.distance_m)
    heard = mic.transduce(mic_profile, at_port, rng_seed=args.seed)
    spec = signals.spectrogram(heard, frame_length=2048, hop=512)
    spec.to_csv(args.out)
    slope, intercept, r2 = signals.ridge_line_fit(spec)
    expected = (args.f_end - args.f_start) / args.duration
    print(f"wrote {args.out}")
    print(f"ridge slope: {slope:.1f} Hz/s (expected {expected:.1f}), "
          f"intercept {intercept:.1f} Hz, R^2 = {r2:.5f}")
    ok = r2 >= 0.99 and abs(slope - expected) <= 0.05 * max(abs(expected), 1.0)
    print("chirp recovered" if ok else "chirp NOT recovered")
    return EXIT_OK if ok else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photoninject",
        description="Laser audio injection planning, simulation and defense")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profiles", help="list the target device dataset")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_profiles)

    p = sub.add_parser("plan", help="operating point, link budget and "
                                    "success probability for one scenario")
    p.add_argument("--device")
    p.add_argument("--budget-mw", type=float)
    p.add_argument("--distance-m", type=float)
    p.add_argument("--scenario")
    p.add_argument("--diode", default="blue-450")
    p.add_argument("--wake-word-matched", action="store_true")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("modulate", help="turn a WAV command into a drive waveform")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--budget-mw", type=float, required=True)
    p.add_argument("--diode", default="blue-450")
    p.add_argument("--out", required=True, help="output .csv or .wav path")
    p.add_argument("--sidecar", help="sidecar CSV path for .wav output")
    p.set_defaults(func=cmd_modulate)

    p = sub.add_parser("simulate", help="run seeded attack trials from a scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("range", help="maximum feasible attack distance")
    p.add_argument("--device", required=True)
    p.add_argument("--budget-mw", type=float, required=True)
    p.add_argument("--diode", default="blue-450")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("bruteforce", help="PIN brute-force timing under a policy")
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--policy", required=True,
                   help="unlimited | max-attempts:N | delay-after:N:SECONDS")
    p.add_argument("--per-attempt-s", type=float,
                   default=authsim.DEFAULT_PER_ATTEMPT_S)
    p.add_argument("--secret")
    p.add_argument("--order", choices=["ascending", "seeded_shuffle"],
                   default="ascending")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_bruteforce)

    p = sub.add_parser("detect", help="multi-microphone injection detection")
    p.add_argument("--in", dest="infile", required=True,
                   help="multichannel 16-bit PCM WAV")
    p.add_argument("--threshold", type=float, default=defense.DEFAULT_THRESHOLD)
    p.add_argument("--energy-floor", type=float)
    p.add_argument("--frame", type=int, default=defense.DEFAULT_FRAME)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("chirp-test", help="end-to-end chirp through the "
                                          "diode/optics/microphone chain")
    p.add_argument("--out", default="chirp_spectrogram.csv")
    p.add_argument("--f-start", type=float, default=0.0)
    p.add_argument("--f-end", type=float, default=10000.0)
    p.add_argument("--duration", type=float, default=5.0)
    p.add_argument("--sample-rate", type=int, default=48000)
    p.add_argument("--budget-mw", type=float, default=0.08)
    p.add_argument("--distance-m", type=float, default=0.3)
    p.add_argument("--diode", default="blue-450")
    p.add_argument("--mic", default="mems-default")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_chirp_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DeviceNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
